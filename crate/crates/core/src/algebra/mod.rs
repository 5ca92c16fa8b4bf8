//! Exact arithmetic kernel: F_q, A = F_q[T], K = F_q(T), truncated u-series
//! over K, and reduction to the residue field A/π.

pub mod field;
pub(crate) mod kernel;
pub mod poly;
pub mod rat;
pub mod residue;
pub mod series;
pub mod text;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

pub use field::{FieldSpec, Fq};
pub use poly::{PolyA, PrimePi};
pub use rat::RatK;
pub use residue::{ResElem, ResField, ResSeries};
pub use series::USeries;

/// A valuation value: an integer or +∞ (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// `self >= e` for an integer bound.
    pub fn at_least(self, e: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinity => true,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("+inf"),
        }
    }
}
