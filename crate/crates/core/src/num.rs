//! Scalars that are exact rationals when they can be and floats when they must.
//!
//! Crystallographic root data is rational in the conventional embeddings, so
//! every group operation on it is exact. Non-crystallographic dihedral groups
//! and sampled points carry `f64`. Mixing the two promotes to `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// Exact rational.
pub type Q = Ratio<i128>;

/// Absolute tolerance for treating a float as zero.
pub const FLOAT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub enum Num {
    Exact(Q),
    Float(f64),
}

/// Hashable identity of a [`Num`]; floats are snapped to a 1e-9 grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumKey {
    Exact(i128, i128),
    Float(i64),
}

impl Num {
    pub const ZERO: Num = Num::Exact(Ratio::new_raw(0, 1));
    pub const ONE: Num = Num::Exact(Ratio::new_raw(1, 1));

    pub fn int(n: i64) -> Num {
        Num::Exact(Q::from_integer(n as i128))
    }

    pub fn frac(n: i64, d: i64) -> Num {
        Num::Exact(Q::new(n as i128, d as i128))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(q) => q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap(),
            Num::Float(f) => *f,
        }
    }

    pub fn as_exact(&self) -> Option<Q> {
        match self {
            Num::Exact(q) => Some(*q),
            Num::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Num::Exact(q) => q.is_zero(),
            Num::Float(f) => f.abs() < FLOAT_EPS,
        }
    }

    pub fn is_one(&self) -> bool {
        (*self - Num::ONE).is_zero()
    }

    /// Sign with exact zero for rationals and a tolerance band for floats.
    pub fn signum(&self) -> i8 {
        match self {
            Num::Exact(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Num::Float(f) => {
                if f.abs() < FLOAT_EPS {
                    0
                } else if *f > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Num {
        match self {
            Num::Exact(q) => Num::Exact(q.abs()),
            Num::Float(f) => Num::Float(f.abs()),
        }
    }

    pub fn recip(&self) -> Num {
        Num::ONE / *self
    }

    /// Integer value if this is (within tolerance) an integer.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Num::Exact(q) => q.is_integer().then(|| q.to_integer() as i64),
            Num::Float(f) => {
                let r = f.round();
                ((f - r).abs() < 1e-9).then_some(r as i64)
            }
        }
    }

    /// Nearest integer, ties rounded away from zero.
    pub fn round(&self) -> i64 {
        match self {
            Num::Exact(q) => q.round().to_integer() as i64,
            Num::Float(f) => f.round() as i64,
        }
    }

    pub fn floor(&self) -> i64 {
        match self {
            Num::Exact(q) => q.floor().to_integer() as i64,
            Num::Float(f) => f.floor() as i64,
        }
    }

    pub fn powi(&self, e: u32) -> Num {
        let mut acc = Num::ONE;
        for _ in 0..e {
            acc *= *self;
        }
        acc
    }

    pub fn key(&self) -> NumKey {
        match self {
            Num::Exact(q) => NumKey::Exact(*q.numer(), *q.denom()),
            Num::Float(f) => NumKey::Float((f * 1e9).round() as i64),
        }
    }

    /// Equality: exact for rationals, absolute `tol` otherwise.
    pub fn approx_eq(&self, other: &Num, tol: f64) -> bool {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl Default for Num {
    fn default() -> Self {
        Num::ZERO
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Self {
        Num::int(n)
    }
}

impl From<f64> for Num {
    fn from(f: f64) -> Self {
        Num::Float(f)
    }
}

impl From<Q> for Num {
    fn from(q: Q) -> Self {
        Num::Exact(q)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Num {
            type Output = Num;
            fn $m(self, rhs: Num) -> Num {
                match (self, rhs) {
                    (Num::Exact(a), Num::Exact(b)) => Num::Exact(a $op b),
                    (a, b) => Num::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Num {
    type Output = Num;
    fn div(self, rhs: Num) -> Num {
        match (self, rhs) {
            (Num::Exact(a), Num::Exact(b)) => {
                assert!(!b.is_zero(), "exact division by zero");
                Num::Exact(a / b)
            }
            (a, b) => Num::Float(a.to_f64() / b.to_f64()),
        }
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Exact(a) => Num::Exact(-a),
            Num::Float(f) => Num::Float(-f),
        }
    }
}

impl AddAssign for Num {
    fn add_assign(&mut self, rhs: Num) {
        *self = *self + rhs;
    }
}

impl SubAssign for Num {
    fn sub_assign(&mut self, rhs: Num) {
        *self = *self - rhs;
    }
}

impl MulAssign for Num {
    fn mul_assign(&mut self, rhs: Num) {
        *self = *self * rhs;
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Num) -> bool {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => a == b,
            _ => (*self - *other).is_zero(),
        }
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Num) -> Option<Ordering> {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(q) => write!(f, "{q}"),
            Num::Float(x) => write!(f, "{x}"),
        }
    }
}

// Rationals serialize as `[numerator, denominator]`, floats as plain numbers.
impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Exact(q) => {
                let mut t = s.serialize_tuple(2)?;
                t.serialize_element(&(*q.numer() as i64))?;
                t.serialize_element(&(*q.denom() as i64))?;
                t.end()
            }
            Num::Float(f) => s.serialize_f64(*f),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Num, D::Error> {
        struct NumVisitor;
        impl<'de> Visitor<'de> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a [numerator, denominator] pair or a number")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num::Float(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num::int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num::int(v as i64))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Num, A::Error> {
                let n: i64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let d: i64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<i64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                if d == 0 {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(Num::frac(n, d))
            }
        }
        d.deserialize_any(NumVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Num::frac(1, 3) + Num::frac(1, 6);
        assert_eq!(a, Num::frac(1, 2));
        assert!(a.is_exact());
        assert!((Num::frac(1, 2) + Num::Float(0.25)).to_f64() == 0.75);
    }

    #[test]
    fn json_pairs_and_floats() {
        let v = vec![Num::frac(-3, 4), Num::Float(0.1)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[[-3,4],0.1]");
        let back: Vec<Num> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0].key(), v[0].key());
        assert_eq!(back[1].to_f64().to_bits(), 0.1f64.to_bits());
    }

    #[test]
    fn rounding() {
        assert_eq!(Num::frac(23, 10).round(), 2);
        assert_eq!(Num::frac(-5, 2).floor(), -3);
        assert_eq!(Num::Float(2.0 + 1e-12).as_integer(), Some(2));
    }
}
