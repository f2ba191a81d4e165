//! Wahl chains: Hirzebruch–Jung continued fractions, recognition and
//! generation of chains with value p²/(pq−1), characteristic sets, and a
//! bounded search for Wahl sub-chains in a configuration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::geometry::{Configuration, GeometryError};
use crate::lattice::{solve_gf2, BitMatrix, IntMatrix};

/// Longest path considered by [`find_wahl_subchains`].
pub const MAX_CHAIN_LENGTH: usize = 12;
/// Above this many candidate curves the sub-chain search refuses to run.
pub const MAX_CANDIDATE_CURVES: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WahlError {
    #[error("continued fraction needs num > den > 0, got {num}/{den}")]
    NotProper { num: u64, den: u64 },
    #[error("{num}/{den} is not in lowest terms")]
    NotCoprime { num: u64, den: u64 },
    #[error("{count} candidate curves exceed the search limit of {limit}")]
    TooManyCandidates { count: usize, limit: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WahlDescriptor {
    pub p: u64,
    pub q: u64,
    /// Hirzebruch–Jung expansion of p²/(pq−1).
    pub chain: Vec<u64>,
    /// Boundary lens space L(p², pq−1).
    pub lens: (u64, u64),
    /// Determinant of the two-bridge knot K(p², pq−1).
    pub knot_determinant: u64,
}

impl WahlDescriptor {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Blow-ups needed to reach this chain from [4].
    pub fn generation_depth(&self) -> usize {
        self.chain.len() - 1
    }

    /// The same chain read backwards, which has parameters (p, p − q).
    pub fn reversed(&self) -> WahlDescriptor {
        let mut chain = self.chain.clone();
        chain.reverse();
        recognize_wahl(&chain).expect("reversal of a Wahl chain is Wahl")
    }
}

/// Evaluate [a₁, …, a_k] = a₁ − 1/(a₂ − 1/(… − 1/a_k)) as a reduced fraction.
pub fn hj_value(a: &[u64]) -> Option<(BigInt, BigInt)> {
    let (&last, rest) = a.split_last()?;
    let mut num = BigInt::from(last);
    let mut den = BigInt::one();
    for &ai in rest.iter().rev() {
        let next = BigInt::from(ai) * &num - &den;
        den = num;
        num = next;
    }
    if den.is_zero() {
        return None;
    }
    let g = num.gcd(&den);
    Some((num / &g, den / &g))
}

/// Hirzebruch–Jung (minus) continued fraction of `num/den`.
pub fn hj_expand(num: u64, den: u64) -> Result<Vec<u64>, WahlError> {
    if den == 0 || num <= den {
        return Err(WahlError::NotProper { num, den });
    }
    if num.gcd(&den) != 1 {
        return Err(WahlError::NotCoprime { num, den });
    }
    let (mut n, mut d) = (num as u128, den as u128);
    let mut out = Vec::new();
    while d != 0 {
        let a = n.div_ceil(d);
        out.push(a as u64);
        (n, d) = (d, a * d - n);
    }
    Ok(out)
}

/// Recognise a Wahl chain, returning (p, q) for the orientation as given.
pub fn recognize_wahl(a: &[u64]) -> Option<WahlDescriptor> {
    if a.is_empty() || a.iter().any(|&x| x < 2) {
        return None;
    }
    let (num, den) = hj_value(a)?;
    let num = num.to_u64()?;
    let den = den.to_u64()?;
    let p = num.sqrt();
    if p < 2 || p * p != num || (den + 1) % p != 0 {
        return None;
    }
    let q = (den + 1) / p;
    if q == 0 || q >= p || p.gcd(&q) != 1 {
        return None;
    }
    if hj_expand(num, den).ok()? != a {
        return None;
    }
    Some(WahlDescriptor {
        p,
        q,
        chain: a.to_vec(),
        lens: (num, den),
        knot_determinant: num,
    })
}

/// All Wahl chains of length ≤ `max_length`, grown from [4] by
/// [a₁…a_k] ↦ [a₁+1, …, a_k, 2] and [2, a₁, …, a_k+1].
pub fn generate_wahl(max_length: usize) -> Vec<WahlDescriptor> {
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier = vec![vec![4u64]];
    while let Some(chain) = frontier.pop() {
        if chain.len() > max_length || !seen.insert(chain.clone()) {
            continue;
        }
        let mut left = chain.clone();
        left[0] += 1;
        left.push(2);
        let mut right = vec![2];
        right.extend_from_slice(&chain);
        *right.last_mut().unwrap() += 1;
        frontier.push(left);
        frontier.push(right);
    }
    let mut out: Vec<WahlDescriptor> = seen
        .into_iter()
        .map(|c| recognize_wahl(&c).expect("generated chain must be Wahl"))
        .collect();
    out.sort_by(|a, b| (a.len(), &a.chain).cmp(&(b.len(), &b.chain)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicSet {
    pub chain: String,
    /// 1-based positions of the curves in the set.
    pub members: Vec<usize>,
    pub unique: bool,
    pub consistent: bool,
}

/// Solve Q·x ≡ diag(Q) mod 2 for a chain's intersection matrix.
pub fn characteristic_set(chain: &str, q: &IntMatrix) -> CharacteristicSet {
    let a = BitMatrix::from_int(q);
    let sol = solve_gf2(&a, &a.diagonal()).expect("square system");
    CharacteristicSet {
        chain: chain.to_string(),
        members: sol
            .solution
            .as_ref()
            .map(|x| x.ones().into_iter().map(|i| i + 1).collect())
            .unwrap_or_default(),
        unique: sol.unique(),
        consistent: sol.consistent(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateChain {
    pub curves: Vec<String>,
    pub descriptor: WahlDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubchainSearch {
    pub candidates: Vec<CandidateChain>,
    /// Indices into `candidates` of vertex-disjoint, mutually orthogonal pairs.
    pub pairs: Vec<(usize, usize)>,
    pub truncated: bool,
}

impl SubchainSearch {
    pub fn pair_names(&self) -> Vec<(Vec<String>, Vec<String>)> {
        self.pairs
            .iter()
            .map(|&(i, j)| {
                (
                    self.candidates[i].curves.clone(),
                    self.candidates[j].curves.clone(),
                )
            })
            .collect()
    }
}

/// Enumerate induced paths of curves with self-intersection ≤ −2 whose
/// self-intersection sequence is a Wahl chain, then pair up disjoint,
/// orthogonal ones. A path and its reverse are reported once, oriented so
/// that the earlier-declared end comes first.
///
/// `max_pairs = 0` skips pairing altogether.
pub fn find_wahl_subchains(cfg: &Configuration, max_pairs: usize) -> Result<SubchainSearch, WahlError> {
    let verts: Vec<usize> = cfg
        .curves()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cls.square() <= -2)
        .map(|(i, _)| i)
        .collect();
    if verts.len() > MAX_CANDIDATE_CURVES {
        return Err(WahlError::TooManyCandidates {
            count: verts.len(),
            limit: MAX_CANDIDATE_CURVES,
        });
    }
    let curves = cfg.curves();
    let m = verts.len();
    let mut gram = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = curves[verts[i]].cls.pair(&curves[verts[j]].cls).map_err(GeometryError::from)?;
        }
    }

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut path = Vec::with_capacity(MAX_CHAIN_LENGTH);
    for start in 0..m {
        path.push(start);
        extend_paths(&gram, &mut path, &mut found);
        path.pop();
    }

    let mut candidates: Vec<(Vec<usize>, WahlDescriptor)> = found
        .into_iter()
        .filter_map(|p| {
            let a: Vec<u64> = p.iter().map(|&v| (-gram[v][v]) as u64).collect();
            recognize_wahl(&a).map(|d| (p, d))
        })
        .collect();
    candidates.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));

    let mut pairs = Vec::new();
    let mut truncated = false;
    if max_pairs > 0 {
        'outer: for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                let (a, b) = (&candidates[i].0, &candidates[j].0);
                let compatible = a
                    .iter()
                    .all(|&u| b.iter().all(|&v| u != v && gram[u][v] == 0));
                if compatible {
                    if pairs.len() == max_pairs {
                        truncated = true;
                        break 'outer;
                    }
                    pairs.push((i, j));
                }
            }
        }
    }

    Ok(SubchainSearch {
        candidates: candidates
            .into_iter()
            .map(|(p, descriptor)| CandidateChain {
                curves: p.iter().map(|&v| curves[verts[v]].name.clone()).collect(),
                descriptor,
            })
            .collect(),
        pairs,
        truncated,
    })
}

fn extend_paths(gram: &[Vec<i64>], path: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if path.len() == 1 || path[0] < last {
        found.push(path.clone());
    }
    if path.len() == MAX_CHAIN_LENGTH {
        return;
    }
    for w in 0..gram.len() {
        if gram[last][w] != 1 || path.contains(&w) {
            continue;
        }
        let induced = path[..path.len() - 1].iter().all(|&v| gram[v][w] == 0);
        if induced {
            path.push(w);
            extend_paths(gram, path, found);
            path.pop();
        }
    }
}
