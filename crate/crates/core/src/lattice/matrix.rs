use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LatticeError;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// A vector of exact rationals. `BigRational` keeps every entry reduced with a
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn from_integers(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| integer(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        Self(v)
    }
}

/// A square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// The intersection matrix of a linear chain with self-intersections
    /// `-a[i]` and 1 between neighbours.
    pub fn linear_chain(a: &[i64]) -> Self {
        let n = a.len();
        let mut m = Self::zeros(n);
        for (i, &ai) in a.iter().enumerate() {
            m.set(i, i, -ai);
            if i + 1 < n {
                m.set(i, i + 1, 1);
                m.set(i + 1, i, 1);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The upper-left `k × k` block.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k <= self.n);
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    // Sylvester's identity: the division is exact.
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Leading principal minors Δ₁, …, Δₙ.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.n).map(|k| self.leading(k).det()).collect()
    }

    /// Sylvester's criterion: negative definite iff (−1)ᵏΔₖ > 0 for all k.
    pub fn is_negative_definite(&self) -> Result<bool, LatticeError> {
        if !self.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(self.leading_minors().iter().enumerate().all(|(i, d)| {
            if i % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        }))
    }

    pub fn mul_rational(&self, x: &RationalVector) -> RationalVector {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .map(|(&a, xi)| xi * BigInt::from(a))
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect::<Vec<_>>()
            .into()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn det(a: &IntMatrix) -> BigInt {
    a.det()
}

pub fn is_negative_definite(a: &IntMatrix) -> Result<bool, LatticeError> {
    a.is_negative_definite()
}

/// Solve `A·x = b` exactly over ℚ by Gaussian elimination.
pub fn solve_rational(a: &IntMatrix, b: &RationalVector) -> Result<RationalVector, LatticeError> {
    let n = a.size();
    if b.len() != n {
        return Err(LatticeError::DimensionMismatch {
            left: n,
            right: b.len(),
        });
    }
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = a.row(i).iter().map(|&v| integer(v)).collect();
            row.push(b[i].clone());
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(LatticeError::Singular)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col][col..].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let t = &m[col][c] * &factor;
                m[r][c] -= t;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect::<Vec<_>>().into())
}
