use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::LatticeError;

/// A class in H₂(ℂP² # n C̄P²) written in the basis (h; e₁, …, eₙ).
///
/// Entry 0 is the coefficient of `h`, entry `i` (1-based) the coefficient of
/// `eᵢ`. The intersection form is diagonal with h·h = 1 and eᵢ·eᵢ = −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![0; n + 1],
        }
    }

    /// The hyperplane class.
    pub fn h(n: usize) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[0] = 1;
        c
    }

    /// The exceptional class `eᵢ`, `1 ≤ i ≤ n`.
    pub fn e(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "exceptional index {i} outside 1..={n}");
        let mut c = Self::zero(n);
        c.coeffs[i] = 1;
        c
    }

    /// K = −3h + e₁ + … + eₙ, the canonical class of an n-fold blow-up of ℂP².
    pub fn canonical(n: usize) -> Self {
        let mut coeffs = vec![1; n + 1];
        coeffs[0] = -3;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "a class needs at least the h coefficient");
        Self { coeffs }
    }

    /// Number of exceptional classes in the ambient basis.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn set(&mut self, i: usize, value: i64) {
        self.coeffs[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Re-embed into a larger basis, padding new exceptional coefficients with zero.
    pub fn extend_to(&mut self, n: usize) {
        assert!(n >= self.n());
        self.coeffs.resize(n + 1, 0);
    }

    pub fn pair(&self, other: &Self) -> Result<i64, LatticeError> {
        if self.n() != other.n() {
            return Err(LatticeError::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let tail: i64 = self.coeffs[1..]
            .iter()
            .zip(&other.coeffs[1..])
            .map(|(a, b)| a * b)
            .sum();
        Ok(self.coeffs[0] * other.coeffs[0] - tail)
    }

    pub fn square(&self) -> i64 {
        self.pair(self).expect("same dimension")
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.n(),
            other.n(),
            "class arithmetic across bases of different size"
        );
    }
}

pub fn pair(a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
    a.pair(b)
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&DivisorClass> for DivisorClass {
    fn add_assign(&mut self, rhs: &DivisorClass) {
        self.check_dim(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&DivisorClass> for DivisorClass {
    fn sub_assign(&mut self, rhs: &DivisorClass) {
        self.check_dim(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<i64> for &DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: i64) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

/// Renders as e.g. `3h - e1 - 2e22`; the zero class renders as `0`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let basis = if i == 0 { "h".to_string() } else { format!("e{i}") };
            let mag = c.unsigned_abs();
            let body = if mag == 1 {
                basis
            } else {
                format!("{mag}{basis}")
            };
            match (first, c < 0) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
