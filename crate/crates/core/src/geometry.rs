//! The blow-up engine.
//!
//! A [`Configuration`] starts as ℂP² with a set of declared plane curves and
//! is refined by an ordered list of [`BlowupStep`]s. A point is identified
//! only by the curves through it (with multiplicities); each step subtracts
//! `m·eᵢ` from the strict transform of every curve passing with multiplicity
//! `m`, adds the exceptional curve `Eᵢ = eᵢ`, and updates the canonical class.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::lattice::{DivisorClass, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("curve `{0}` declared twice")]
    DuplicateCurve(String),
    #[error("blow-up index out of order: expected {expected}, found {found}")]
    IndexOutOfOrder { expected: usize, found: usize },
    #[error("curve `{curve}` has multiplicity 0 at step {index}")]
    ZeroMultiplicity { curve: String, index: usize },
    #[error("curve `{curve}` listed twice at step {index}")]
    RepeatedThrough { curve: String, index: usize },
    #[error("parent `{parent}` of step {index} is not an exceptional curve through the point")]
    BadParent { parent: String, index: usize },
    #[error("unknown chain `{0}`")]
    UnknownChain(String),
    #[error("chain `{0}` declared twice")]
    DuplicateChain(String),
    #[error("chain `{0}` is empty")]
    EmptyChain(String),
    #[error("unknown fiber `{0}`")]
    UnknownFiber(String),
    #[error("fiber `{0}` declared twice")]
    DuplicateFiber(String),
    #[error("no fibers declared")]
    NoFibers,
    #[error("fiber `{other}` has class {other_class}, but `{first}` has {first_class}")]
    InconsistentFibers {
        first: String,
        first_class: String,
        other: String,
        other_class: String,
    },
    #[error("basis index e{index} outside 1..={n}")]
    BasisIndex { index: usize, n: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    /// Degree of the original plane curve; 0 for exceptional curves.
    pub degree: u32,
    /// Current strict-transform class.
    pub cls: DivisorClass,
    /// Geometric genus 0, as asserted by the user.
    pub rational: bool,
    /// Ordinary nodes of the original plane curve.
    pub node_count: u32,
    /// `Some(i)` for the exceptional curve of step `i`.
    pub exceptional: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStep {
    pub index: usize,
    pub through: Vec<(String, u32)>,
    /// Exceptional curve the point lies on, for infinitely near points.
    pub parent: Option<String>,
    /// Equivariance assertion (the point is real); carried into reports, never checked.
    pub real: bool,
}

impl BlowupStep {
    pub fn new(index: usize, through: &[(&str, u32)]) -> Self {
        Self {
            index,
            through: through.iter().map(|&(c, m)| (c.to_string(), m)).collect(),
            parent: None,
            real: false,
        }
    }

    pub fn multiplicity(&self, curve: &str) -> u32 {
        self.through
            .iter()
            .find(|(c, _)| c == curve)
            .map_or(0, |&(_, m)| m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub name: String,
    pub curves: Vec<String>,
    /// Auxiliary chains are inspected (characteristic sets) but never blown down.
    pub aux: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub name: String,
    pub components: Vec<(String, u32)>,
}

/// Name of the exceptional curve created at step `i`.
pub fn exceptional_name(i: usize) -> String {
    format!("E{i}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub name: String,
    steps: Vec<BlowupStep>,
    curves: Vec<CurveRecord>,
    chains: Vec<Chain>,
    fibers: Vec<Fiber>,
    canonical: DivisorClass,
    /// Declares that the fiber class should equal −K.
    pub anticanonical_fibered: bool,
    expected: Vec<(String, DivisorClass)>,
}

impl Configuration {
    /// ℂP² with no curves.
    pub fn plane(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            steps: Vec::new(),
            curves: Vec::new(),
            chains: Vec::new(),
            fibers: Vec::new(),
            canonical: DivisorClass::canonical(0),
            anticanonical_fibered: false,
            expected: Vec::new(),
        }
    }

    /// Number of blow-ups performed so far.
    pub fn n(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn curves(&self) -> &[CurveRecord] {
        &self.curves
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Chains that are to be blown down.
    pub fn contracted_chains(&self) -> impl Iterator<Item = &Chain> {
        self.chains.iter().filter(|c| !c.aux)
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn expected_classes(&self) -> &[(String, DivisorClass)] {
        &self.expected
    }

    /// The canonical class K = −3h + Σ eᵢ.
    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn curve(&self, name: &str) -> Option<&CurveRecord> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn class_of(&self, name: &str) -> Result<&DivisorClass, GeometryError> {
        self.curve(name)
            .map(|c| &c.cls)
            .ok_or_else(|| GeometryError::UnknownCurve(name.to_string()))
    }

    pub fn chain(&self, name: &str) -> Result<&Chain, GeometryError> {
        self.chains
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| GeometryError::UnknownChain(name.to_string()))
    }

    pub fn fiber(&self, name: &str) -> Result<&Fiber, GeometryError> {
        self.fibers
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| GeometryError::UnknownFiber(name.to_string()))
    }

    /// Declaration-order position of a curve; used for canonical orderings.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn declare_curve(
        &mut self,
        name: &str,
        degree: u32,
        rational: bool,
        node_count: u32,
    ) -> Result<(), GeometryError> {
        if self.curve(name).is_some() {
            return Err(GeometryError::DuplicateCurve(name.to_string()));
        }
        let mut cls = DivisorClass::zero(self.n());
        cls.set(0, degree as i64);
        self.curves.push(CurveRecord {
            name: name.to_string(),
            degree,
            cls,
            rational,
            node_count,
            exceptional: None,
        });
        Ok(())
    }

    pub fn apply_blowup(&mut self, step: BlowupStep) -> Result<(), GeometryError> {
        let index = step.index;
        if index != self.n() + 1 {
            return Err(GeometryError::IndexOutOfOrder {
                expected: self.n() + 1,
                found: index,
            });
        }
        let new_name = exceptional_name(index);
        if self.curve(&new_name).is_some() {
            return Err(GeometryError::DuplicateCurve(new_name));
        }
        let mut seen = BTreeSet::new();
        for (curve, m) in &step.through {
            if self.curve(curve).is_none() {
                return Err(GeometryError::UnknownCurve(curve.clone()));
            }
            if *m == 0 {
                return Err(GeometryError::ZeroMultiplicity {
                    curve: curve.clone(),
                    index,
                });
            }
            if !seen.insert(curve.as_str()) {
                return Err(GeometryError::RepeatedThrough {
                    curve: curve.clone(),
                    index,
                });
            }
        }
        if let Some(parent) = &step.parent {
            let ok = self.curve(parent).is_some_and(|c| c.exceptional.is_some())
                && step.multiplicity(parent) > 0;
            if !ok {
                return Err(GeometryError::BadParent {
                    parent: parent.clone(),
                    index,
                });
            }
        }

        for c in &mut self.curves {
            c.cls.extend_to(index);
        }
        for (curve, m) in &step.through {
            let rec = self
                .curves
                .iter_mut()
                .find(|c| &c.name == curve)
                .expect("checked above");
            rec.cls.set(index, rec.cls.get(index) - *m as i64);
        }
        for (_, cls) in &mut self.expected {
            cls.extend_to(index);
        }
        self.canonical.extend_to(index);
        self.canonical.set(index, 1);
        self.curves.push(CurveRecord {
            name: new_name,
            degree: 0,
            cls: DivisorClass::e(index, index),
            rational: true,
            node_count: 0,
            exceptional: Some(index),
        });
        self.steps.push(step);
        Ok(())
    }

    pub fn add_chain(&mut self, chain: Chain) -> Result<(), GeometryError> {
        if self.chains.iter().any(|c| c.name == chain.name) {
            return Err(GeometryError::DuplicateChain(chain.name));
        }
        if chain.curves.is_empty() {
            return Err(GeometryError::EmptyChain(chain.name));
        }
        for c in &chain.curves {
            self.class_of(c)?;
        }
        self.chains.push(chain);
        Ok(())
    }

    pub fn add_fiber(&mut self, fiber: Fiber) -> Result<(), GeometryError> {
        if self.fibers.iter().any(|f| f.name == fiber.name) {
            return Err(GeometryError::DuplicateFiber(fiber.name));
        }
        for (c, m) in &fiber.components {
            self.class_of(c)?;
            if *m == 0 {
                return Err(GeometryError::ZeroMultiplicity {
                    curve: c.clone(),
                    index: 0,
                });
            }
        }
        self.fibers.push(fiber);
        Ok(())
    }

    /// Record a stated class for `curve`, to be confirmed by [`validate`].
    pub fn expect_class(&mut self, curve: &str, cls: DivisorClass) -> Result<(), GeometryError> {
        self.class_of(curve)?;
        if cls.n() != self.n() {
            return Err(LatticeError::DimensionMismatch {
                left: cls.n(),
                right: self.n(),
            }
            .into());
        }
        self.expected.push((curve.to_string(), cls));
        Ok(())
    }

    /// Remove a curve from the configuration (its incidence history stays in
    /// the step list). Chains, fibers and expectations mentioning it are dropped.
    pub fn remove_curve(&mut self, name: &str) -> Result<(), GeometryError> {
        let pos = self
            .position(name)
            .ok_or_else(|| GeometryError::UnknownCurve(name.to_string()))?;
        self.curves.remove(pos);
        self.chains.retain(|c| !c.curves.iter().any(|x| x == name));
        self.fibers.retain(|f| !f.components.iter().any(|(x, _)| x == name));
        self.expected.retain(|(x, _)| x != name);
        Ok(())
    }

    pub fn pair_curves(&self, a: &str, b: &str) -> Result<i64, GeometryError> {
        Ok(self.class_of(a)?.pair(self.class_of(b)?)?)
    }

    pub fn intersection_matrix<S: AsRef<str>>(&self, names: &[S]) -> Result<IntMatrix, GeometryError> {
        let classes = names
            .iter()
            .map(|n| self.class_of(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut m = IntMatrix::zeros(classes.len());
        for (i, a) in classes.iter().enumerate() {
            for (j, b) in classes.iter().enumerate() {
                m.set(i, j, a.pair(b)?);
            }
        }
        Ok(m)
    }

    /// Self-intersections of the curves of a chain, in chain order.
    pub fn chain_self_intersections(&self, chain: &Chain) -> Result<Vec<i64>, GeometryError> {
        chain
            .curves
            .iter()
            .map(|c| Ok(self.class_of(c)?.square()))
            .collect()
    }

    /// Number of steps where `curve` passes with multiplicity at least 2.
    fn singular_blowups(&self, curve: &str) -> u32 {
        self.steps
            .iter()
            .filter(|s| s.multiplicity(curve) >= 2)
            .count() as u32
    }

    /// True once every node of the original curve has been blown up.
    pub fn is_smooth(&self, curve: &CurveRecord) -> bool {
        self.singular_blowups(&curve.name) >= curve.node_count
    }

    pub fn fiber_sum(&self, fiber: &Fiber) -> Result<DivisorClass, GeometryError> {
        let mut sum = DivisorClass::zero(self.n());
        for (c, m) in &fiber.components {
            sum += &(self.class_of(c)? * *m as i64);
        }
        Ok(sum)
    }

    /// The common class of every declared fiber.
    pub fn fiber_class(&self) -> Result<DivisorClass, GeometryError> {
        let (first, rest) = self.fibers.split_first().ok_or(GeometryError::NoFibers)?;
        let f = self.fiber_sum(first)?;
        for other in rest {
            let g = self.fiber_sum(other)?;
            if g != f {
                return Err(GeometryError::InconsistentFibers {
                    first: first.name.clone(),
                    first_class: f.to_string(),
                    other: other.name.clone(),
                    other_class: g.to_string(),
                });
            }
        }
        Ok(f)
    }
}

pub fn apply_blowup(mut cfg: Configuration, step: BlowupStep) -> Result<Configuration, GeometryError> {
    cfg.apply_blowup(step)?;
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    pub curve: String,
    pub self_intersection: i64,
    pub k_dot: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BezoutResidual {
    pub first: String,
    pub second: String,
    /// Product of degrees.
    pub bezout: i64,
    /// Σ m(C)·m(D) over the blow-up steps.
    pub absorbed: i64,
    /// Pairing of the strict transforms: the intersections left after blow-ups.
    pub surviving: i64,
}

impl BezoutResidual {
    pub fn ok(&self) -> bool {
        self.surviving >= 0 && self.surviving == self.bezout - self.absorbed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMismatch {
    pub curve: String,
    pub expected: String,
    pub derived: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub adjunction: Vec<AdjunctionCheck>,
    pub bezout: Vec<BezoutResidual>,
    /// Distinct curves whose strict transforms pair negatively.
    pub negative_pairings: Vec<(String, String, i64)>,
    /// (chain, chain, curve, curve, pairing) for non-orthogonal contracted chains.
    pub chain_overlaps: Vec<(String, String, String, String, i64)>,
    /// Chains whose curves do not form a linear plumbing.
    pub nonlinear_chains: Vec<String>,
    pub fiber_class: Option<String>,
    pub fiber_errors: Vec<String>,
    pub class_mismatches: Vec<ClassMismatch>,
    pub expected_checked: usize,
}

impl ValidationReport {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.adjunction.iter().filter(|a| !a.ok) {
            out.push(format!(
                "adjunction fails for {}: C·C + C·K = {} + {} ≠ −2",
                a.curve, a.self_intersection, a.k_dot
            ));
        }
        for b in self.bezout.iter().filter(|b| !b.ok()) {
            out.push(format!(
                "Bézout residual for {}·{}: {} − {} ≠ {}",
                b.first, b.second, b.bezout, b.absorbed, b.surviving
            ));
        }
        for (a, b, v) in &self.negative_pairings {
            out.push(format!("distinct curves {a} and {b} pair to {v} < 0"));
        }
        for (c1, c2, a, b, v) in &self.chain_overlaps {
            out.push(format!("chains {c1} and {c2} not orthogonal: {a}·{b} = {v}"));
        }
        for c in &self.nonlinear_chains {
            out.push(format!("chain {c} is not a linear plumbing"));
        }
        out.extend(self.fiber_errors.iter().cloned());
        for m in &self.class_mismatches {
            out.push(format!(
                "class of {}: stated {}, derived {}",
                m.curve, m.expected, m.derived
            ));
        }
        out
    }

    pub fn is_ok(&self) -> bool {
        self.violations().is_empty()
    }
}

fn is_linear_plumbing(m: &IntMatrix) -> bool {
    let n = m.size();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i.abs_diff(j) == 1 { 1 } else { 0 };
            i == j || m.get(i, j) == want
        })
    })
}

pub fn validate(cfg: &Configuration) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = cfg.canonical();

    for c in cfg.curves() {
        if c.rational && cfg.is_smooth(c) {
            let self_intersection = c.cls.square();
            let k_dot = c.cls.pair(k).expect("same basis");
            report.adjunction.push(AdjunctionCheck {
                curve: c.name.clone(),
                self_intersection,
                k_dot,
                ok: self_intersection + k_dot == -2,
            });
        }
    }

    let plane: Vec<&CurveRecord> = cfg.curves().iter().filter(|c| c.degree > 0).collect();
    for (i, a) in plane.iter().enumerate() {
        for b in &plane[i + 1..] {
            let absorbed = cfg
                .steps()
                .iter()
                .map(|s| s.multiplicity(&a.name) as i64 * s.multiplicity(&b.name) as i64)
                .sum();
            report.bezout.push(BezoutResidual {
                first: a.name.clone(),
                second: b.name.clone(),
                bezout: a.degree as i64 * b.degree as i64,
                absorbed,
                surviving: a.cls.pair(&b.cls).expect("same basis"),
            });
        }
    }

    let curves = cfg.curves();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            let v = a.cls.pair(&b.cls).expect("same basis");
            if v < 0 {
                report.negative_pairings.push((a.name.clone(), b.name.clone(), v));
            }
        }
    }

    let contracted: Vec<&Chain> = cfg.contracted_chains().collect();
    for (i, c1) in contracted.iter().enumerate() {
        for c2 in &contracted[i + 1..] {
            for a in &c1.curves {
                for b in &c2.curves {
                    let v = if a == b {
                        // a shared curve is never orthogonal to itself
                        cfg.pair_curves(a, b).unwrap_or(0).min(-1)
                    } else {
                        cfg.pair_curves(a, b).unwrap_or(0)
                    };
                    if v != 0 {
                        report.chain_overlaps.push((
                            c1.name.clone(),
                            c2.name.clone(),
                            a.clone(),
                            b.clone(),
                            v,
                        ));
                    }
                }
            }
        }
    }
    for chain in cfg.chains() {
        let unique: BTreeSet<&String> = chain.curves.iter().collect();
        let linear = unique.len() == chain.curves.len()
            && cfg
                .intersection_matrix(&chain.curves)
                .is_ok_and(|m| is_linear_plumbing(&m));
        if !linear {
            report.nonlinear_chains.push(chain.name.clone());
        }
    }

    if !cfg.fibers().is_empty() {
        match cfg.fiber_class() {
            Ok(f) => {
                if cfg.anticanonical_fibered && f != -cfg.canonical() {
                    report
                        .fiber_errors
                        .push(format!("fiber class {f} is not −K = {}", -cfg.canonical()));
                }
                report.fiber_class = Some(f.to_string());
            }
            Err(e) => report.fiber_errors.push(e.to_string()),
        }
    } else if cfg.anticanonical_fibered {
        report
            .fiber_errors
            .push("declared anticanonical-fibered but no fibers given".to_string());
    }

    for (curve, want) in cfg.expected_classes() {
        report.expected_checked += 1;
        let got = cfg.class_of(curve).expect("checked on insert");
        if got != want {
            report.class_mismatches.push(ClassMismatch {
                curve: curve.clone(),
                expected: want.to_string(),
                derived: got.to_string(),
            });
        }
    }
    report
}

/// Per-curve lookup of classes, sorted by name.
pub fn class_table(cfg: &Configuration) -> BTreeMap<String, DivisorClass> {
    cfg.curves()
        .iter()
        .map(|c| (c.name.clone(), c.cls.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_lines() -> Configuration {
        let mut cfg = Configuration::plane("t");
        cfg.declare_curve("X", 1, true, 0).unwrap();
        cfg.declare_curve("Y", 1, true, 0).unwrap();
        cfg
    }

    #[test]
    fn blow_up_on_no_curves() {
        let mut cfg = two_lines();
        cfg.apply_blowup(BlowupStep::new(1, &[])).unwrap();
        assert_eq!(cfg.class_of("E1").unwrap().square(), -1);
        assert_eq!(cfg.pair_curves("X", "Y").unwrap(), 1);
        assert_eq!(cfg.class_of("X").unwrap().square(), 1);
        assert_eq!(cfg.canonical().square(), 8);
    }

    #[test]
    fn blow_up_intersection_point() {
        let mut cfg = two_lines();
        cfg.apply_blowup(BlowupStep::new(1, &[("X", 1), ("Y", 1)]))
            .unwrap();
        assert_eq!(cfg.pair_curves("X", "Y").unwrap(), 0);
        assert_eq!(cfg.pair_curves("X", "E1").unwrap(), 1);
        assert_eq!(cfg.class_of("X").unwrap().to_string(), "h - e1");
        let r = validate(&cfg);
        assert!(r.is_ok(), "{:?}", r.violations());
        assert_eq!(r.bezout[0].absorbed, 1);
    }

    #[test]
    fn step_errors() {
        let mut cfg = two_lines();
        assert_eq!(
            cfg.apply_blowup(BlowupStep::new(2, &[])),
            Err(GeometryError::IndexOutOfOrder {
                expected: 1,
                found: 2
            })
        );
        assert_eq!(
            cfg.apply_blowup(BlowupStep::new(1, &[("Z", 1)])),
            Err(GeometryError::UnknownCurve("Z".into()))
        );
        assert!(matches!(
            cfg.apply_blowup(BlowupStep::new(1, &[("X", 0)])),
            Err(GeometryError::ZeroMultiplicity { .. })
        ));
        assert!(matches!(
            cfg.apply_blowup(BlowupStep::new(1, &[("X", 1), ("X", 1)])),
            Err(GeometryError::RepeatedThrough { .. })
        ));
        let mut step = BlowupStep::new(1, &[("X", 1)]);
        step.parent = Some("X".into());
        assert!(matches!(
            cfg.apply_blowup(step),
            Err(GeometryError::BadParent { .. })
        ));
        // failed steps leave the configuration untouched
        assert_eq!(cfg, two_lines());
    }

    #[test]
    fn intersection_matrix_singleton() {
        let mut cfg = two_lines();
        cfg.apply_blowup(BlowupStep::new(1, &[("X", 1)])).unwrap();
        let m = cfg.intersection_matrix(&["X"]).unwrap();
        assert_eq!(m.get(0, 0), 0);
        assert!(matches!(
            cfg.intersection_matrix(&["W"]),
            Err(GeometryError::UnknownCurve(_))
        ));
    }

    #[test]
    fn nodal_cubic_adjunction() {
        let mut cfg = Configuration::plane("cubic");
        cfg.declare_curve("F", 3, true, 1).unwrap();
        let r = validate(&cfg);
        // still singular: no adjunction check yet
        assert!(r.adjunction.is_empty());
        cfg.apply_blowup(BlowupStep::new(1, &[("F", 2)])).unwrap();
        let r = validate(&cfg);
        assert_eq!(r.adjunction.len(), 2);
        assert!(r.adjunction.iter().all(|a| a.ok));
    }

    #[test]
    fn adjunction_violation_reported() {
        // a smooth cubic is not rational
        let mut cfg = Configuration::plane("bad");
        cfg.declare_curve("F", 3, true, 0).unwrap();
        let r = validate(&cfg);
        assert!(!r.is_ok());
        assert!(r.violations()[0].contains("adjunction"));
    }

    #[test]
    fn fiber_class_cases() {
        let mut cfg = two_lines();
        assert_eq!(cfg.fiber_class(), Err(GeometryError::NoFibers));
        cfg.add_fiber(Fiber {
            name: "a".into(),
            components: vec![("X".into(), 1), ("Y".into(), 2)],
        })
        .unwrap();
        assert_eq!(cfg.fiber_class().unwrap().to_string(), "3h");
        cfg.add_fiber(Fiber {
            name: "b".into(),
            components: vec![("X".into(), 1)],
        })
        .unwrap();
        assert!(matches!(
            cfg.fiber_class(),
            Err(GeometryError::InconsistentFibers { .. })
        ));
        assert!(!validate(&cfg).is_ok());
    }

    #[test]
    fn anticanonical_pencil_of_cubics() {
        // nine base points of a cubic pencil through a triangle: fiber = −K
        let mut cfg = Configuration::plane("pencil");
        for c in ["X", "Y", "Z"] {
            cfg.declare_curve(c, 1, true, 0).unwrap();
        }
        cfg.declare_curve("G", 3, false, 0).unwrap();
        for (i, l) in ["X", "X", "X", "Y", "Y", "Y", "Z", "Z", "Z"].iter().enumerate() {
            cfg.apply_blowup(BlowupStep::new(i + 1, &[(l, 1), ("G", 1)]))
                .unwrap();
        }
        cfg.add_fiber(Fiber {
            name: "triangle".into(),
            components: vec![("X".into(), 1), ("Y".into(), 1), ("Z".into(), 1)],
        })
        .unwrap();
        cfg.anticanonical_fibered = true;
        let r = validate(&cfg);
        assert!(r.is_ok(), "{:?}", r.violations());
        assert_eq!(cfg.fiber_class().unwrap(), -cfg.canonical());
    }

    #[test]
    fn expected_class_mismatch() {
        let mut cfg = two_lines();
        cfg.apply_blowup(BlowupStep::new(1, &[("X", 1)])).unwrap();
        cfg.expect_class("X", DivisorClass::h(1)).unwrap();
        let r = validate(&cfg);
        assert_eq!(r.class_mismatches.len(), 1);
        assert_eq!(r.class_mismatches[0].derived, "h - e1");
    }
}
