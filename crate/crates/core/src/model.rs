//! Symbolic intervals, the eight temporal relations and extension constraints.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::time::{compare_eps, quasi_equal, EpsOrdering, TimeValue};

/// Event type, interned as an index into a database alphabet.
///
/// Alphabets are kept sorted byte-wise, so comparing ids compares the event
/// names lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl EventId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Start and end of an interval, or the envelope of several intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span<T> {
    pub start: T,
    pub end: T,
}

impl<T: TimeValue> Span<T> {
    pub fn new(start: T, end: T) -> Self {
        Span { start, end }
    }

    #[inline]
    pub fn duration(&self) -> T {
        self.end - self.start
    }

    /// Smallest span covering both.
    #[inline]
    pub fn merge(&self, other: &Span<T>) -> Span<T> {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

/// One event occurrence with a duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolicInterval<T> {
    pub start: T,
    pub end: T,
    pub event: EventId,
}

impl<T: TimeValue> SymbolicInterval<T> {
    pub fn new(start: T, end: T, event: EventId) -> Self {
        SymbolicInterval { start, end, event }
    }

    #[inline]
    pub fn span(&self) -> Span<T> {
        Span::new(self.start, self.end)
    }

    #[inline]
    pub fn duration(&self) -> T {
        self.end - self.start
    }

    /// Exact `(start, end, event)` ordering; coincides with [`interval_precedes`]
    /// when ε is zero.
    #[inline]
    pub fn exact_cmp(&self, other: &Self) -> Ordering {
        (self.start, self.end, self.event).cmp(&(other.start, other.end, other.event))
    }
}

/// True when `a` sorts strictly before `b` under the ε-tolerant interval order:
/// by start, then end, then event name.
pub fn interval_precedes<T: TimeValue>(
    a: &SymbolicInterval<T>,
    b: &SymbolicInterval<T>,
    epsilon: T,
) -> bool {
    match compare_eps(a.start, b.start, epsilon) {
        EpsOrdering::PrecedesEps => true,
        EpsOrdering::FollowsEps => false,
        EpsOrdering::QuasiEqual => match compare_eps(a.end, b.end, epsilon) {
            EpsOrdering::PrecedesEps => true,
            EpsOrdering::FollowsEps => false,
            EpsOrdering::QuasiEqual => a.event < b.event,
        },
    }
}

/// Relation between an earlier interval `a` and a later interval `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemporalRelation {
    Before,
    Meet,
    Overlap,
    Contain,
    FinishedBy,
    Equal,
    Start,
    LeftContain,
}

impl TemporalRelation {
    pub const ALL: [TemporalRelation; 8] = [
        TemporalRelation::Before,
        TemporalRelation::Meet,
        TemporalRelation::Overlap,
        TemporalRelation::Contain,
        TemporalRelation::FinishedBy,
        TemporalRelation::Equal,
        TemporalRelation::Start,
        TemporalRelation::LeftContain,
    ];

    pub fn symbol(self) -> char {
        match self {
            TemporalRelation::Before => 'b',
            TemporalRelation::Meet => 'm',
            TemporalRelation::Overlap => 'o',
            TemporalRelation::Contain => 'c',
            TemporalRelation::FinishedBy => 'f',
            TemporalRelation::Equal => 'e',
            TemporalRelation::Start => 's',
            TemporalRelation::LeftContain => 'l',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.symbol() == c)
    }
}

impl fmt::Display for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Classifies the relation of `b` against `a`, where `a` may be the envelope of
/// a partial pattern occurrence.
///
/// Decision order:
/// 1. starts quasi-equal: `e`, `s` (b ends later) or `l` (b ends earlier);
/// 2. `b` starts more than ε after `a` ends: `b`;
/// 3. `b` starts within ε of `a`'s end: `m`;
/// 4. otherwise `b` starts strictly inside `a`: `o` (b ends later), `f` (ends
///    quasi-equal) or `c` (b ends earlier).
///
/// `a` must not start more than ε after `b`.
pub fn classify_relation<T: TimeValue>(a: Span<T>, b: Span<T>, epsilon: T) -> TemporalRelation {
    debug_assert!(
        compare_eps(a.start, b.start, epsilon) != EpsOrdering::FollowsEps,
        "classify_relation called on an unordered pair"
    );
    let ends = compare_eps(b.end, a.end, epsilon);
    if quasi_equal(a.start, b.start, epsilon) {
        return match ends {
            EpsOrdering::QuasiEqual => TemporalRelation::Equal,
            EpsOrdering::FollowsEps => TemporalRelation::Start,
            EpsOrdering::PrecedesEps => TemporalRelation::LeftContain,
        };
    }
    match compare_eps(a.end, b.start, epsilon) {
        EpsOrdering::PrecedesEps => TemporalRelation::Before,
        EpsOrdering::QuasiEqual => TemporalRelation::Meet,
        EpsOrdering::FollowsEps => match ends {
            EpsOrdering::FollowsEps => TemporalRelation::Overlap,
            EpsOrdering::QuasiEqual => TemporalRelation::FinishedBy,
            EpsOrdering::PrecedesEps => TemporalRelation::Contain,
        },
    }
}

/// Noise margin plus gap and duration bounds. `None` maxima are unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraints<T> {
    pub epsilon: T,
    pub min_gap: T,
    pub max_gap: Option<T>,
    pub min_dura: T,
    pub max_dura: Option<T>,
}

impl<T: TimeValue> Default for Constraints<T> {
    /// Zero ε, no gap or duration restriction.
    fn default() -> Self {
        Constraints {
            epsilon: T::zero(),
            min_gap: T::zero(),
            max_gap: None,
            min_dura: T::zero(),
            max_dura: None,
        }
    }
}

impl<T: TimeValue> Constraints<T> {
    pub fn validate(&self) -> Result<(), Error> {
        if self.epsilon < T::zero() {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.min_gap < T::zero() {
            return Err(Error::Config(format!("min-gap must be >= 0, got {}", self.min_gap)));
        }
        if self.min_dura < T::zero() {
            return Err(Error::Config(format!("min-dura must be >= 0, got {}", self.min_dura)));
        }
        if let Some(max_gap) = self.max_gap {
            if max_gap < self.min_gap {
                return Err(Error::Config(format!(
                    "max-gap {max_gap} is below min-gap {}",
                    self.min_gap
                )));
            }
        }
        if let Some(max_dura) = self.max_dura {
            if max_dura < self.min_dura {
                return Err(Error::Config(format!(
                    "max-dura {max_dura} is below min-dura {}",
                    self.min_dura
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn duration_ok(&self, duration: T) -> bool {
        duration >= self.min_dura && self.max_dura.is_none_or(|m| duration <= m)
    }

    #[inline]
    pub fn gap_ok(&self, gap: T) -> bool {
        gap >= self.min_gap && self.max_gap.is_none_or(|m| gap <= m)
    }

    /// Relation of `b` against the running envelope `a`, or `None` when the
    /// extension violates a constraint. Gap bounds only apply to `before`;
    /// the merged envelope must respect the duration bounds.
    #[inline]
    pub fn check_extension(&self, a: Span<T>, b: Span<T>) -> Option<TemporalRelation> {
        let rel = classify_relation(a, b, self.epsilon);
        if rel == TemporalRelation::Before && !self.gap_ok(b.start - a.end) {
            return None;
        }
        if !self.duration_ok(a.merge(&b).duration()) {
            return None;
        }
        Some(rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use TemporalRelation::*;

    const A: EventId = EventId(0);
    const B: EventId = EventId(1);
    const C: EventId = EventId(2);
    const D: EventId = EventId(3);

    fn iv(start: i64, end: i64, event: EventId) -> SymbolicInterval<i64> {
        SymbolicInterval::new(start, end, event)
    }

    fn sp(start: i64, end: i64) -> Span<i64> {
        Span::new(start, end)
    }

    #[test]
    fn precedes_matches_sorted_running_example() {
        assert!(interval_precedes(&iv(2, 10, B), &iv(5, 12, A), 0));
        assert!(interval_precedes(&iv(12, 18, C), &iv(12, 20, B), 0));
        assert!(interval_precedes(&iv(6, 13, C), &iv(6, 13, D), 0));
        assert!(!interval_precedes(&iv(6, 13, D), &iv(6, 13, C), 0));
        // identical intervals never precede each other
        assert!(!interval_precedes(&iv(1, 2, A), &iv(1, 2, A), 0));
    }

    #[test]
    fn worked_relations() {
        assert_eq!(classify_relation(sp(2, 10), sp(5, 12), 0), Overlap);
        assert_eq!(classify_relation(sp(5, 12), sp(12, 18), 0), Meet);
        assert_eq!(classify_relation(sp(2, 10), sp(12, 18), 0), Before);
        assert_eq!(classify_relation(sp(0, 10), sp(0, 10), 0), Equal);
        assert_eq!(classify_relation(sp(12, 18), sp(12, 20), 0), Start);
        assert_eq!(classify_relation(sp(12, 20), sp(12, 18), 0), LeftContain);
        assert_eq!(classify_relation(sp(12, 20), sp(14, 20), 0), FinishedBy);
        assert_eq!(classify_relation(sp(2, 15), sp(6, 13), 0), Contain);
    }

    #[test]
    fn epsilon_widens_meet_and_equal() {
        assert_eq!(classify_relation(sp(0, 10), sp(11, 15), 1), Meet);
        assert_eq!(classify_relation(sp(0, 10), sp(9, 15), 1), Meet);
        assert_eq!(classify_relation(sp(0, 10), sp(1, 11), 1), Equal);
        assert_eq!(classify_relation(sp(0, 10), sp(12, 15), 1), Before);
    }

    #[test]
    fn gap_bound_rejects_distant_before() {
        let c = Constraints { max_gap: Some(5), ..Constraints::default() };
        assert_eq!(c.check_extension(sp(2, 8), sp(14, 19)), None);
        let c = Constraints { max_gap: Some(5), max_dura: Some(20), ..Constraints::default() };
        assert_eq!(c.check_extension(sp(2, 10), sp(14, 20)), Some(Before));
    }

    #[test]
    fn composite_envelope_admits_distant_repeat() {
        // A=(0,20), B=(0,3), C=(5,8), C=(15,20): the two Cs are 7 apart but
        // the envelope of ABC already covers the second C.
        let c = Constraints { max_gap: Some(5), max_dura: Some(20), ..Constraints::default() };
        assert_eq!(c.check_extension(sp(5, 8), sp(15, 20)), None);
        let abc = sp(0, 20);
        assert_eq!(c.check_extension(abc, sp(15, 20)), Some(FinishedBy));
    }

    #[test]
    fn meet_is_exempt_from_gap_bounds() {
        let c = Constraints { min_gap: 3, max_gap: Some(5), epsilon: 1, ..Constraints::default() };
        assert_eq!(c.check_extension(sp(0, 10), sp(11, 12)), Some(Meet));
    }

    #[test]
    fn duration_bound_on_envelope() {
        let c = Constraints { min_dura: 5, max_dura: Some(10), ..Constraints::default() };
        assert_eq!(c.check_extension(sp(0, 2), sp(1, 3)), None);
        assert_eq!(c.check_extension(sp(0, 4), sp(8, 12)), None);
        assert_eq!(c.check_extension(sp(0, 4), sp(3, 6)), Some(Overlap));
    }

    #[test]
    fn constraint_validation() {
        assert!(Constraints::<i64>::default().validate().is_ok());
        let bad = Constraints { min_gap: 4, max_gap: Some(3), ..Constraints::<i64>::default() };
        assert!(bad.validate().is_err());
        let bad = Constraints { epsilon: -1, ..Constraints::<i64>::default() };
        assert!(bad.validate().is_err());
        let bad = Constraints { min_dura: 5, max_dura: Some(1), ..Constraints::<i64>::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn symbols_round_trip() {
        for r in TemporalRelation::ALL {
            assert_eq!(TemporalRelation::from_symbol(r.symbol()), Some(r));
        }
        assert_eq!(TemporalRelation::from_symbol('x'), None);
    }

    fn arb_interval() -> impl Strategy<Value = SymbolicInterval<i64>> {
        (0i64..30, 0i64..15, 0u32..4).prop_map(|(s, d, e)| iv(s, s + d, EventId(e)))
    }

    proptest! {
        #[test]
        fn exact_order_is_strict_total(mut v in proptest::collection::vec(arb_interval(), 1..12)) {
            v.sort_by(|a, b| a.exact_cmp(b));
            v.dedup();
            for (i, a) in v.iter().enumerate() {
                prop_assert!(!interval_precedes(a, a, 0));
                for (j, b) in v.iter().enumerate() {
                    if i < j {
                        prop_assert!(interval_precedes(a, b, 0));
                        prop_assert!(!interval_precedes(b, a, 0));
                    }
                    for c in &v {
                        if interval_precedes(a, b, 0) && interval_precedes(b, c, 0) {
                            prop_assert!(interval_precedes(a, c, 0));
                        }
                    }
                }
            }
        }

        #[test]
        fn quasi_equal_starts_split_three_ways(s in 0i64..20, d1 in 0i64..10, shift in 0i64..3, d2 in 0i64..10, eps in 0i64..3) {
            let shift = shift.min(eps);
            let a = sp(s, s + d1);
            let b = sp(s + shift, s + shift + d2);
            let expected = match compare_eps(b.end, a.end, eps) {
                EpsOrdering::FollowsEps => Start,
                EpsOrdering::PrecedesEps => LeftContain,
                EpsOrdering::QuasiEqual => Equal,
            };
            prop_assert_eq!(classify_relation(a, b, eps), expected);
        }
    }
}
