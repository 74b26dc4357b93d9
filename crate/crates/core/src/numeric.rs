//! Extended reals and compensated summation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A value in `(-inf, +inf]`.
///
/// Divergences may be infinite, never negatively so. Multiplying `+inf` by a
/// zero weight is not defined here; callers that need the `0 * inf = 0`
/// convention for singular parts use [`ExtReal::scale_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Maps `f64::INFINITY` to `PosInf`. Panics on NaN and `-inf`.
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "ExtReal cannot hold NaN");
        assert!(x != f64::NEG_INFINITY, "ExtReal cannot hold -inf");
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// `w * self` for a weight `w > 0`; `None` for `0 * inf` or a negative weight.
    pub fn checked_scale(self, w: f64) -> Option<ExtReal> {
        if w.is_nan() || w < 0.0 {
            return None;
        }
        match self {
            ExtReal::Finite(x) => Some(ExtReal::Finite(x * w)),
            ExtReal::PosInf if w > 0.0 => Some(ExtReal::PosInf),
            ExtReal::PosInf => None,
        }
    }

    /// `w * self` with the singular-part convention `0 * inf = 0`.
    pub fn scale_singular(self, w: f64) -> ExtReal {
        assert!(w >= 0.0, "singular mass must be nonnegative, got {w}");
        if w == 0.0 {
            ExtReal::ZERO
        } else {
            self.checked_scale(w).expect("positive weight")
        }
    }

    /// `self <= other + tol`, with `+inf` compared strictly.
    pub fn le_within(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (_, ExtReal::PosInf) => true,
            (ExtReal::PosInf, ExtReal::Finite(_)) => false,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a <= b + tol,
        }
    }

    /// `|self - other| <= tol` for finite values; two infinities are equal.
    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::PosInf, ExtReal::PosInf) => true,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::PosInf, ExtReal::PosInf) => Ordering::Equal,
            (ExtReal::PosInf, _) => Ordering::Greater,
            (_, ExtReal::PosInf) => Ordering::Less,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

/// Finite values serialize as JSON numbers, `+inf` as the string `"inf"`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => serializer.serialize_f64(*x),
            ExtReal::PosInf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtRealVisitor;

        impl Visitor<'_> for ExtRealVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a finite number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                if v.is_finite() {
                    Ok(ExtReal::Finite(v))
                } else {
                    Err(E::custom("non-finite number"))
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal::PosInf),
                    _ => Err(E::custom(format!("unexpected string `{v}`"))),
                }
            }
        }

        deserializer.deserialize_any(ExtRealVisitor)
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of a slice, in slice order.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Accumulates terms in `(-inf, +inf]`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExtSum {
    finite: CompensatedSum,
    infinite: bool,
}

impl ExtSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: ExtReal) {
        match x {
            ExtReal::Finite(v) => self.finite.add(v),
            ExtReal::PosInf => self.infinite = true,
        }
    }

    pub fn value(&self) -> ExtReal {
        if self.infinite {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(self.finite.value())
        }
    }
}
