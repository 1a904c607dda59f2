//! Time points and ε-tolerant comparison.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{PrimInt, Signed};

/// Integer scalar used for time points, gaps and durations.
///
/// Any signed primitive integer qualifies; the crate root fixes `i64` for the
/// concrete aliases.
pub trait TimeValue:
    PrimInt + Signed + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}

impl<T> TimeValue for T where
    T: PrimInt + Signed + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}

/// Outcome of comparing two time points under a noise margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsOrdering {
    /// The first point precedes the second by more than ε.
    PrecedesEps,
    /// The points lie within ε of each other.
    QuasiEqual,
    /// The first point follows the second by more than ε.
    FollowsEps,
}

/// Compares `t1` against `t2` with tolerance `epsilon` (must be non-negative).
#[inline]
pub fn compare_eps<T: TimeValue>(t1: T, t2: T, epsilon: T) -> EpsOrdering {
    debug_assert!(epsilon >= T::zero());
    if t2 - t1 > epsilon {
        EpsOrdering::PrecedesEps
    } else if t1 - t2 > epsilon {
        EpsOrdering::FollowsEps
    } else {
        EpsOrdering::QuasiEqual
    }
}

#[inline]
pub fn quasi_equal<T: TimeValue>(t1: T, t2: T, epsilon: T) -> bool {
    compare_eps(t1, t2, epsilon) == EpsOrdering::QuasiEqual
}
