//! Seiberg–Witten chamber certificates.
//!
//! A class α with α² ≥ 0, α·h > 0, K·α < 0 (K = 3h − Σeᵢ) that is orthogonal
//! to every contracted sphere decides the chamber of the blown-down manifold.
//! The analytic side of the argument is fixed prose; only these lattice
//! conditions are checked here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::geometry::{Configuration, GeometryError};
use crate::lattice::{DivisorClass, LatticeError, Rational};

pub const DEFAULT_BOUND: i64 = 6;

pub const ANALYTIC_NOTE: &str = "chamber conditions only: the small-perturbation chamber for b₂⁺ = 1, \
wall-crossing and gluing along the lens-space necks are taken as given";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberCertificate {
    #[serde(serialize_with = "serialize_class")]
    pub alpha: DivisorClass,
    pub alpha_sq: i64,
    pub k_dot_alpha: i64,
    pub h_dot_alpha: i64,
    /// α·C for every contracted curve, in chain order.
    pub orthogonality: Vec<(String, i64)>,
    pub accepted: bool,
    pub failures: Vec<String>,
}

fn serialize_class<S: serde::Serializer>(c: &DivisorClass, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

/// K = 3h − Σeᵢ, the class the chamber conditions are read against.
pub fn chamber_canonical(n: usize) -> DivisorClass {
    -&DivisorClass::canonical(n)
}

fn chain_curves(cfg: &Configuration) -> Vec<String> {
    cfg.contracted_chains()
        .flat_map(|c| c.curves.iter().cloned())
        .collect()
}

pub fn verify_certificate(
    cfg: &Configuration,
    alpha: &DivisorClass,
) -> Result<ChamberCertificate, GeometryError> {
    let n = cfg.n();
    if alpha.n() != n {
        return Err(LatticeError::DimensionMismatch {
            left: n + 1,
            right: alpha.n() + 1,
        }
        .into());
    }
    let k = chamber_canonical(n);
    let h = DivisorClass::h(n);
    let alpha_sq = alpha.square();
    let k_dot_alpha = k.pair(alpha)?;
    let h_dot_alpha = h.pair(alpha)?;
    let orthogonality = chain_curves(cfg)
        .into_iter()
        .map(|c| {
            let v = cfg.class_of(&c)?.pair(alpha)?;
            Ok((c, v))
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;

    let mut failures = Vec::new();
    if alpha_sq < 0 {
        failures.push(format!("α² = {alpha_sq} < 0"));
    }
    if h_dot_alpha <= 0 {
        failures.push(format!("α·h = {h_dot_alpha} ≤ 0"));
    }
    if k_dot_alpha >= 0 {
        failures.push(format!("K·α = {k_dot_alpha} ≥ 0"));
    }
    for (c, v) in &orthogonality {
        if *v != 0 {
            failures.push(format!("α·{c} = {v} ≠ 0"));
        }
    }
    Ok(ChamberCertificate {
        alpha: alpha.clone(),
        alpha_sq,
        k_dot_alpha,
        h_dot_alpha,
        orthogonality,
        accepted: failures.is_empty(),
        failures,
    })
}

/// Saturated integer basis of the kernel of the m×n matrix `a`
/// (vectors x with a·x = 0), by unimodular column reduction.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<BigInt>> {
    // Work on the transpose: rows r_j = column j of a, each carrying the
    // corresponding row of a unimodular transform u. Row operations keep u·aᵀ
    // equal to the reduced rows; rows reduced to zero span the kernel.
    let m = a.len();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| a.iter().map(|r| BigInt::from(r[j])).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|k| BigInt::from((j == k) as i64)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m {
        // Euclid on column `col` among rows rank..n until one nonzero remains.
        loop {
            let nonzero: Vec<usize> = (rank..n).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&p) = nonzero.first() {
                    rows.swap(rank, p);
                    u.swap(rank, p);
                    rank += 1;
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&r| rows[r][col].abs())
                .expect("non-empty");
            for &r in &nonzero {
                if r == p {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[p][col]);
                for k in 0..m {
                    let t = &q * &rows[p][k];
                    rows[r][k] -= t;
                }
                for k in 0..n {
                    let t = &q * &u[p][k];
                    u[r][k] -= t;
                }
            }
        }
    }
    u.split_off(rank)
}

/// Exact LLL reduction (δ = 3/4) with respect to the standard inner product.
pub fn lll_reduce(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let k_max = basis.len();
    if k_max <= 1 {
        return basis;
    }
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let gram_schmidt = |b: &[Vec<BigInt>]| -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut star: Vec<Vec<Rational>> = Vec::new();
        let mut norms: Vec<Rational> = Vec::new();
        let mut mu = vec![vec![Rational::zero(); b.len()]; b.len()];
        for i in 0..b.len() {
            let mut v: Vec<Rational> = b[i].iter().map(|x| Rational::from(x.clone())).collect();
            for j in 0..i {
                let num: Rational = b[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| Rational::from(x.clone()) * y)
                    .sum();
                mu[i][j] = num / &norms[j];
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &mu[i][j] * sk;
                }
            }
            norms.push(v.iter().map(|x| x * x).sum());
            star.push(v);
        }
        (mu, norms)
    };
    let mut k = 1;
    while k < k_max {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&basis);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&basis);
        let bound = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if norms[k] >= bound {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

/// LLL-reduced ℤ-basis of the classes orthogonal to every contracted curve.
pub fn complement_basis(cfg: &Configuration) -> Result<Vec<DivisorClass>, GeometryError> {
    let n = cfg.n();
    // x·C = x₀c₀ − Σ xᵢcᵢ, so the constraint row for C is (c₀, −c₁, …, −cₙ).
    let rows = chain_curves(cfg)
        .iter()
        .map(|c| {
            let cls = cfg.class_of(c)?;
            Ok(cls
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &v)| if i == 0 { v } else { -v })
                .collect())
        })
        .collect::<Result<Vec<Vec<i64>>, GeometryError>>()?;
    let kernel = lll_reduce(integer_kernel(&rows, n + 1));
    Ok(kernel
        .into_iter()
        .map(|v| {
            DivisorClass::from_coeffs(
                v.iter()
                    .map(|x| x.to_i64().expect("reduced basis fits in i64"))
                    .collect(),
            )
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSearch {
    pub bound: i64,
    #[serde(serialize_with = "serialize_classes")]
    pub basis: Vec<DivisorClass>,
    pub certificate: Option<ChamberCertificate>,
    /// Coordinates of the certificate over `basis`.
    pub coordinates: Option<Vec<i64>>,
    pub examined: u64,
}

fn serialize_classes<S: serde::Serializer>(c: &[DivisorClass], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

/// Visit every vector of [−s, s]^k with max-norm exactly s, in lexicographic order.
fn for_each_in_shell(k: usize, s: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut c = vec![-s; k];
    loop {
        if c.iter().any(|x| x.abs() == s) && f(&c) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if c[i] < s {
                c[i] += 1;
                for x in &mut c[i + 1..] {
                    *x = -s;
                }
                break;
            }
        }
    }
}

/// Search the box [−bound, bound]^k over the complement basis, shells of
/// increasing max-norm first and lexicographically within a shell, returning
/// the first accepted certificate.
pub fn search_certificate(cfg: &Configuration, bound: i64) -> Result<CertificateSearch, GeometryError> {
    let basis = complement_basis(cfg)?;
    let n = cfg.n();
    let k_cls = chamber_canonical(n);
    let k_dot: Vec<i64> = basis.iter().map(|b| k_cls.pair(b)).collect::<Result<_, _>>()?;
    let h_dot: Vec<i64> = basis.iter().map(|b| b.get(0)).collect();
    let mut gram = vec![vec![0i64; basis.len()]; basis.len()];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            gram[i][j] = a.pair(b)?;
        }
    }

    let mut found: Option<Vec<i64>> = None;
    let mut examined = 0u64;
    if !basis.is_empty() {
        for s in 1..=bound.max(0) {
            let hit = for_each_in_shell(basis.len(), s, |c| {
                examined += 1;
                let lin = |w: &[i64]| -> i64 { w.iter().zip(c).map(|(x, y)| x * y).sum() };
                if lin(&h_dot) <= 0 || lin(&k_dot) >= 0 {
                    return false;
                }
                let sq: i64 = gram.iter().zip(c).map(|(row, ci)| ci * lin(row)).sum();
                if sq < 0 {
                    return false;
                }
                found = Some(c.to_vec());
                true
            });
            if hit {
                break;
            }
        }
    }

    let certificate = match &found {
        Some(c) => {
            let mut alpha = DivisorClass::zero(n);
            for (ci, b) in c.iter().zip(&basis) {
                alpha += &(b * *ci);
            }
            let cert = verify_certificate(cfg, &alpha)?;
            debug_assert!(cert.accepted);
            Some(cert)
        }
        None => None,
    };
    Ok(CertificateSearch {
        bound,
        basis,
        certificate,
        coordinates: found,
        examined,
    })
}

/// Coordinates of `alpha` over `basis`, if it lies in their integer span.
pub fn coordinates_in(basis: &[DivisorClass], alpha: &DivisorClass) -> Option<Vec<i64>> {
    // Least-squares normal equations over ℚ: (BBᵀ) c = B α.
    let k = basis.len();
    let rows: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| basis[i].coeffs().iter().zip(basis[j].coeffs()).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let rhs: Vec<i64> = basis
        .iter()
        .map(|b| b.coeffs().iter().zip(alpha.coeffs()).map(|(a, b)| a * b).sum())
        .collect();
    let g = crate::lattice::IntMatrix::from_rows(rows).ok()?;
    let c = crate::lattice::solve_rational(&g, &crate::lattice::RationalVector::from_integers(&rhs)).ok()?;
    let coords: Vec<i64> = c
        .iter()
        .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
        .collect::<Option<_>>()?;
    let mut back = DivisorClass::zero(alpha.n());
    for (ci, b) in coords.iter().zip(basis) {
        back += &(b * *ci);
    }
    (back == *alpha).then_some(coords)
}
