//! Rational blow-down bookkeeping.
//!
//! Discrepancies of the contracted chains, the invariants of the blown-down
//! manifold and of the singular surface W′, the π₁ coprimality certificate,
//! the pull-back σ*K_{W′} as an explicit ℚ-combination of curves, and the
//! branch-locus invariants of a double branched cover of S⁴.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::geometry::{Configuration, GeometryError};
use crate::lattice::{
    integer, solve_rational, DivisorClass, LatticeError, Rational, RationalVector,
};
use crate::wahl::{recognize_wahl, WahlDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowdownError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("chain `{chain}` with self-intersections {self_intersections:?} is not a Wahl chain")]
    NotWahl {
        chain: String,
        self_intersections: Vec<i64>,
    },
    #[error("intersection matrix of chain `{0}` is not negative definite")]
    NotNegativeDefinite(String),
    #[error("discrepancy of `{curve}` in chain `{chain}` is {value}, outside (−1, 0)")]
    DiscrepancyOutOfRange {
        chain: String,
        curve: String,
        value: String,
    },
    #[error("contracted chains overlap or are not orthogonal: {0}")]
    ChainsOverlap(String),
    #[error("no chains to blow down")]
    NoChains,
    #[error("the K_W expression has class {got}, expected {expected}")]
    KwClassMismatch { expected: String, got: String },
    #[error("coefficient of `{curve}` in σ*K is {value}, not positive")]
    NonPositiveCoefficient { curve: String, value: String },
    #[error("σ*K pairs to {value} with contracted curve `{curve}`")]
    NotOrthogonal { curve: String, value: String },
    #[error("a double branched cover of S⁴ along a non-orientable surface has χ ≥ 3, got {0}")]
    CoverTooSmall(i64),
}

/// Solve −(C_k·C_k) − 2 = Σᵢ dᵢ (Cᵢ·C_k) for one chain and check −1 < dᵢ < 0.
pub fn discrepancies(cfg: &Configuration, chain: &str) -> Result<RationalVector, BlowdownError> {
    let chain = cfg.chain(chain)?;
    let q = cfg.intersection_matrix(&chain.curves)?;
    if !q.is_negative_definite()? {
        return Err(BlowdownError::NotNegativeDefinite(chain.name.clone()));
    }
    let rhs: Vec<i64> = q.diagonal().iter().map(|d| -d - 2).collect();
    let d = solve_rational(&q, &RationalVector::from_integers(&rhs))?;
    let minus_one = -Rational::one();
    for (curve, value) in chain.curves.iter().zip(d.iter()) {
        if !(value > &minus_one && value.is_negative()) {
            return Err(BlowdownError::DiscrepancyOutOfRange {
                chain: chain.name.clone(),
                curve: curve.clone(),
                value: crate::exact::to_string(value),
            });
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDiscrepancy {
    pub chain: String,
    pub curves: Vec<String>,
    pub descriptor: WahlDescriptor,
    pub values: RationalVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DiscrepancyAssignment {
    pub chains: Vec<ChainDiscrepancy>,
}

impl DiscrepancyAssignment {
    /// (curve, dᵢ) over every contracted curve, chain by chain.
    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.chains.iter().flat_map(|c| {
            c.curves
                .iter()
                .map(String::as_str)
                .zip(c.values.iter())
        })
    }

    pub fn get(&self, curve: &str) -> Option<&Rational> {
        self.terms().find(|(c, _)| *c == curve).map(|(_, d)| d)
    }

    pub fn contracted_curves(&self) -> Vec<&str> {
        self.terms().map(|(c, _)| c).collect()
    }
}

/// The Wahl descriptor of a declared chain, as given.
pub fn chain_descriptor(cfg: &Configuration, chain: &str) -> Result<WahlDescriptor, BlowdownError> {
    let chain = cfg.chain(chain)?;
    let self_intersections = cfg.chain_self_intersections(chain)?;
    let a: Option<Vec<u64>> = self_intersections
        .iter()
        .map(|&s| u64::try_from(-s).ok())
        .collect();
    a.and_then(|a| recognize_wahl(&a))
        .ok_or_else(|| BlowdownError::NotWahl {
            chain: chain.name.clone(),
            self_intersections,
        })
}

/// Contracted chains must be Wahl, vertex-disjoint and mutually orthogonal.
fn check_contracted_chains(cfg: &Configuration) -> Result<Vec<WahlDescriptor>, BlowdownError> {
    let chains: Vec<_> = cfg.contracted_chains().collect();
    if chains.is_empty() {
        return Err(BlowdownError::NoChains);
    }
    let descriptors = chains
        .iter()
        .map(|c| chain_descriptor(cfg, &c.name))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, c1) in chains.iter().enumerate() {
        for c2 in &chains[i + 1..] {
            for a in &c1.curves {
                for b in &c2.curves {
                    if a == b || cfg.pair_curves(a, b)? != 0 {
                        return Err(BlowdownError::ChainsOverlap(format!(
                            "{}:{a} vs {}:{b}",
                            c1.name, c2.name
                        )));
                    }
                }
            }
        }
    }
    Ok(descriptors)
}

pub fn discrepancy_assignment(cfg: &Configuration) -> Result<DiscrepancyAssignment, BlowdownError> {
    let descriptors = check_contracted_chains(cfg)?;
    let chains = cfg
        .contracted_chains()
        .zip(descriptors)
        .map(|(c, descriptor)| {
            Ok(ChainDiscrepancy {
                chain: c.name.clone(),
                curves: c.curves.clone(),
                descriptor,
                values: discrepancies(cfg, &c.name)?,
            })
        })
        .collect::<Result<Vec<_>, BlowdownError>>()?;
    Ok(DiscrepancyAssignment { chains })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Certificate {
    /// |π₁| of each chain's boundary lens space, p².
    pub orders: Vec<u64>,
    pub gcd: u64,
    /// The orders are coprime, so loops around the chains die in the complement.
    pub coprime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowdownInvariants {
    pub b2_plus: i64,
    pub b2_minus: i64,
    pub euler: i64,
    pub signature: i64,
    /// K² of W (before the blow-down).
    pub k_squared_smooth: i64,
    /// K²_{W′} = K_W² − Σ dᵢ (Cᵢ·K_W).
    #[serde(serialize_with = "crate::exact::rational")]
    pub k_squared: Rational,
    pub pi1_certificate: Pi1Certificate,
}

pub fn blowdown_invariants(cfg: &Configuration) -> Result<BlowdownInvariants, BlowdownError> {
    let d = discrepancy_assignment(cfg)?;
    let k = cfg.canonical();
    let removed: usize = d.chains.iter().map(|c| c.curves.len()).sum();
    let b2_plus = 1;
    let b2_minus = cfg.n() as i64 - removed as i64;
    let k_smooth = k.square();
    let mut k_squared = integer(k_smooth);
    for (curve, di) in d.terms() {
        let c_dot_k = cfg.class_of(curve)?.pair(k)?;
        k_squared -= di * integer(c_dot_k);
    }
    let orders: Vec<u64> = d.chains.iter().map(|c| c.descriptor.knot_determinant).collect();
    let gcd = orders.iter().fold(0u64, |g, &o| g.gcd(&o));
    Ok(BlowdownInvariants {
        b2_plus,
        b2_minus,
        euler: 2 + b2_plus + b2_minus,
        signature: b2_plus - b2_minus,
        k_squared_smooth: k_smooth,
        k_squared,
        pi1_certificate: Pi1Certificate {
            coprime: orders.len() >= 2 && gcd == 1,
            orders,
            gcd,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchLocusInvariants {
    /// n for a branch locus # n ℝP².
    pub nonorientable_genus: i64,
    pub normal_euler: i64,
    /// Normal Euler numbers of the standard embeddings: −2n, −2n+4, …, 2n.
    pub standard_euler_set: Vec<i64>,
    pub in_standard_set: bool,
    /// |e| < 2n.
    pub cop_range_ok: bool,
}

/// Recover the branch locus of a double cover of S⁴ from the cover's χ and σ,
/// using χ(cover) = 2χ(S⁴) − χ(F) and σ(cover) = 2σ(S⁴) − e(F)/2.
pub fn branch_locus_from_cover(euler: i64, signature: i64) -> Result<BranchLocusInvariants, BlowdownError> {
    if euler < 3 {
        return Err(BlowdownError::CoverTooSmall(euler));
    }
    let n = euler - 2;
    let e = -2 * signature;
    let standard_euler_set: Vec<i64> = (0..=n).map(|k| -2 * n + 4 * k).collect();
    Ok(BranchLocusInvariants {
        nonorientable_genus: n,
        normal_euler: e,
        in_standard_set: standard_euler_set.contains(&e),
        standard_euler_set,
        cop_range_ok: e.abs() < 2 * n,
    })
}

/// A ℚ-linear combination of named curves.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CurveCombination {
    #[serde(serialize_with = "crate::exact::named")]
    pub terms: Vec<(String, Rational)>,
}

impl CurveCombination {
    pub fn new(terms: Vec<(String, Rational)>) -> Self {
        Self { terms }
    }

    pub fn coefficient(&self, curve: &str) -> Option<&Rational> {
        self.terms.iter().find(|(c, _)| c == curve).map(|(_, v)| v)
    }

    /// Coefficients over the basis (h; e₁ … eₙ).
    pub fn class(&self, cfg: &Configuration) -> Result<Vec<Rational>, GeometryError> {
        let mut out = vec![Rational::zero(); cfg.n() + 1];
        for (curve, coef) in &self.terms {
            let cls = cfg.class_of(curve)?;
            for (o, &c) in out.iter_mut().zip(cls.coeffs()) {
                *o += coef * integer(c);
            }
        }
        Ok(out)
    }

    pub fn pair_class(&self, cfg: &Configuration, other: &DivisorClass) -> Result<Rational, GeometryError> {
        let mut total = Rational::zero();
        for (curve, coef) in &self.terms {
            total += coef * integer(cfg.class_of(curve)?.pair(other)?);
        }
        Ok(total)
    }

    pub fn square(&self, cfg: &Configuration) -> Result<Rational, GeometryError> {
        let mut total = Rational::zero();
        for (curve, coef) in &self.terms {
            total += coef * self.pair_class(cfg, cfg.class_of(curve)?)?;
        }
        Ok(total)
    }

    pub fn support(&self) -> Vec<&str> {
        self.terms
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

/// σ*K_{W′} = K_W − Σ dᵢ Cᵢ, with K_W given as an explicit curve combination.
///
/// The combination is checked against the class of K, every retained
/// coefficient must be positive, and the result must be orthogonal to every
/// contracted curve. Terms are listed in curve declaration order.
pub fn sigma_star_k(
    cfg: &Configuration,
    kw_expression: &[(String, Rational)],
    d: &DiscrepancyAssignment,
) -> Result<CurveCombination, BlowdownError> {
    let kw = CurveCombination::new(kw_expression.to_vec());
    let got = kw.class(cfg)?;
    let expected: Vec<Rational> = cfg.canonical().coeffs().iter().map(|&c| integer(c)).collect();
    if got != expected {
        return Err(BlowdownError::KwClassMismatch {
            expected: cfg.canonical().to_string(),
            got: got.iter().map(crate::exact::to_string).collect::<Vec<_>>().join(", "),
        });
    }

    let mut coeffs: Vec<Rational> = vec![Rational::zero(); cfg.curves().len()];
    for (curve, c) in kw_expression {
        let i = cfg.position(curve).expect("class check resolved every curve");
        coeffs[i] += c;
    }
    for (curve, di) in d.terms() {
        let i = cfg
            .position(curve)
            .ok_or_else(|| GeometryError::UnknownCurve(curve.to_string()))?;
        coeffs[i] -= di;
    }
    let terms: Vec<(String, Rational)> = cfg
        .curves()
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(rec, c)| (rec.name.clone(), c))
        .collect();
    if let Some((curve, value)) = terms.iter().find(|(_, c)| !c.is_positive()) {
        return Err(BlowdownError::NonPositiveCoefficient {
            curve: curve.clone(),
            value: crate::exact::to_string(value),
        });
    }
    let pullback = CurveCombination::new(terms);
    for curve in d.contracted_curves() {
        let v = pullback.pair_class(cfg, cfg.class_of(curve)?)?;
        if !v.is_zero() {
            return Err(BlowdownError::NotOrthogonal {
                curve: curve.to_string(),
                value: crate::exact::to_string(&v),
            });
        }
    }
    Ok(pullback)
}
