//! Exact text rendering of rationals: always `num/den`, never floating point.

use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, SerializeTuple};
use serde::{Serialize, Serializer};

use crate::lattice::{Rational, RationalVector};

pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal approximation for human-facing output only.
pub fn approx(r: &Rational) -> String {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => format!("{:.6}", n / d),
        _ => "?".to_string(),
    }
}

pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

/// Serialises `[(name, value), …]` with values as exact strings.
pub fn named<S: Serializer>(terms: &[(String, Rational)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (name, value) in terms {
        seq.serialize_element(&NamedRational(name, value))?;
    }
    seq.end()
}

struct NamedRational<'a>(&'a str, &'a Rational);

impl Serialize for NamedRational<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(self.0)?;
        t.serialize_element(&to_string(self.1))?;
        t.end()
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for r in self.iter() {
            seq.serialize_element(&to_string(r))?;
        }
        seq.end()
    }
}
