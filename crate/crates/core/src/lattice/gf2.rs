//! Linear algebra over GF(2) with bit-packed rows.

use super::{IntMatrix, LatticeError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Bits set at the given 0-based positions.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.set(p, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc + (a & b).count_ones())
            % 2
            == 1
    }

    /// 0-based indices of set bits.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// Reduce an integer matrix mod 2.
    pub fn from_int(a: &IntMatrix) -> Self {
        let n = a.size();
        let rows = (0..n)
            .map(|i| {
                let bits: Vec<bool> = a.row(i).iter().map(|v| v.rem_euclid(2) == 1).collect();
                BitVector::from_bools(&bits)
            })
            .collect();
        Self { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn diagonal(&self) -> BitVector {
        let bits: Vec<bool> = (0..self.n).map(|i| self.get(i, i)).collect();
        BitVector::from_bools(&bits)
    }

    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(x)).collect();
        BitVector::from_bools(&bits)
    }

    /// xᵀ·A·y over GF(2).
    pub fn bilinear(&self, x: &BitVector, y: &BitVector) -> bool {
        x.dot(&self.mul_vec(y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Solution {
    /// A particular solution, absent when the system is inconsistent.
    pub solution: Option<BitVector>,
    /// Dimension of the kernel of A.
    pub nullity: usize,
}

impl Gf2Solution {
    pub fn consistent(&self) -> bool {
        self.solution.is_some()
    }

    pub fn unique(&self) -> bool {
        self.consistent() && self.nullity == 0
    }
}

/// Solve `A·x = b` over GF(2). Singular systems are reported through
/// `nullity`; an inconsistent system yields no solution.
pub fn solve_gf2(a: &BitMatrix, b: &BitVector) -> Result<Gf2Solution, LatticeError> {
    let n = a.size();
    if b.len() != n {
        return Err(LatticeError::DimensionMismatch {
            left: n,
            right: b.len(),
        });
    }
    // augmented rows: n coefficient bits followed by the rhs bit
    let mut rows: Vec<BitVector> = (0..n)
        .map(|i| {
            let mut r = BitVector::zeros(n + 1);
            for j in 0..n {
                r.set(j, a.get(i, j));
            }
            r.set(n, b.get(i));
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }

    let nullity = n - rank;
    if rows[rank..].iter().any(|r| r.get(n)) {
        return Ok(Gf2Solution {
            solution: None,
            nullity,
        });
    }
    // free variables set to zero
    let mut x = BitVector::zeros(n);
    for (r, &col) in pivots.iter().enumerate() {
        x.set(col, rows[r].get(n));
    }
    Ok(Gf2Solution {
        solution: Some(x),
        nullity,
    })
}
