//! Vertical databases of S-TIRPs and the pair support matrix.

use smallvec::SmallVec;

use crate::database::Database;
use crate::model::{Constraints, EventId, Span, TemporalRelation};
use crate::time::TimeValue;

/// One embedding of a pattern in one sequence.
///
/// Positions (`eid`, `sources`) are 1-based indices into the sorted sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOccurrence<T> {
    pub sid: u32,
    /// Position of the last source interval.
    pub eid: u32,
    pub start_t: T,
    pub end_t: T,
    /// Relation of each appended interval to the envelope it extended.
    pub relations: SmallVec<[TemporalRelation; 7]>,
    pub sources: SmallVec<[u32; 8]>,
}

impl<T: TimeValue> PatternOccurrence<T> {
    #[inline]
    pub fn span(&self) -> Span<T> {
        Span::new(self.start_t, self.end_t)
    }

    pub fn relation_string(&self) -> String {
        self.relations.iter().map(|r| r.symbol()).collect()
    }
}

/// All occurrences of one S-TIRP, grouped by ascending sid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalDatabase<T> {
    pub events: Vec<EventId>,
    pub rows: Vec<PatternOccurrence<T>>,
}

impl<T: TimeValue> VerticalDatabase<T> {
    pub fn last_event(&self) -> EventId {
        *self.events.last().expect("vertical database of an empty pattern")
    }

    /// Number of distinct supporting sequences.
    pub fn vertical_support(&self) -> usize {
        self.rows.iter().enumerate().filter(|(i, r)| *i == 0 || self.rows[i - 1].sid != r.sid).count()
    }

    /// Number of occurrences in sequence `sid`.
    pub fn horizontal_support(&self, sid: u32) -> usize {
        self.rows.iter().filter(|r| r.sid == sid).count()
    }

    pub fn supporting_sids(&self) -> Vec<u32> {
        let mut sids: Vec<u32> = self.rows.iter().map(|r| r.sid).collect();
        sids.dedup();
        sids
    }
}

/// Vertical database of every single event, indexed by `EventId`.
///
/// Only intervals whose own duration respects the duration bounds become rows.
pub fn build_singleton_vdbs<T: TimeValue>(
    db: &Database<T>,
    constraints: &Constraints<T>,
) -> Vec<VerticalDatabase<T>> {
    let mut vdbs: Vec<VerticalDatabase<T>> = (0..db.alphabet().len())
        .map(|i| VerticalDatabase { events: vec![EventId(i as u32)], rows: Vec::new() })
        .collect();
    for seq in db.sequences() {
        for (pos, iv) in seq.intervals.iter().enumerate() {
            if !constraints.duration_ok(iv.duration()) {
                continue;
            }
            let eid = pos as u32 + 1;
            vdbs[iv.event.index()].rows.push(PatternOccurrence {
                sid: seq.sid,
                eid,
                start_t: iv.start,
                end_t: iv.end,
                relations: SmallVec::new(),
                sources: smallvec::smallvec![eid],
            });
        }
    }
    vdbs
}

/// Appends `candidate` to `prefix` by joining with the candidate's singleton
/// rows of the same sequence that lie after each prefix occurrence.
pub fn extend_vdb<T: TimeValue>(
    prefix: &VerticalDatabase<T>,
    candidate: EventId,
    singleton: &VerticalDatabase<T>,
    constraints: &Constraints<T>,
) -> VerticalDatabase<T> {
    debug_assert_eq!(singleton.events, [candidate]);
    let mut events = Vec::with_capacity(prefix.events.len() + 1);
    events.extend_from_slice(&prefix.events);
    events.push(candidate);

    let (p, s) = (&prefix.rows, &singleton.rows);
    let mut rows = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < p.len() && j < s.len() {
        let (psid, ssid) = (p[i].sid, s[j].sid);
        if psid < ssid {
            i = group_end(p, i);
        } else if psid > ssid {
            j = group_end(s, j);
        } else {
            let (pend, send) = (group_end(p, i), group_end(s, j));
            let singles = &s[j..send];
            for r in &p[i..pend] {
                join_row(r, singles, constraints, &mut rows);
            }
            i = pend;
            j = send;
        }
    }
    VerticalDatabase { events, rows }
}

#[inline]
fn join_row<T: TimeValue>(
    r: &PatternOccurrence<T>,
    singles: &[PatternOccurrence<T>],
    constraints: &Constraints<T>,
    out: &mut Vec<PatternOccurrence<T>>,
) {
    let envelope = r.span();
    let first = singles.partition_point(|q| q.eid <= r.eid);
    for q in &singles[first..] {
        // Starts are non-decreasing along the sequence, so once a start is
        // out of reach every later one is too.
        let lead = q.start_t - r.start_t;
        if constraints.max_dura.is_some_and(|d| lead > d) {
            break;
        }
        let gap = q.start_t - r.end_t;
        if gap > constraints.epsilon && constraints.max_gap.is_some_and(|g| gap > g) {
            break;
        }
        let Some(rel) = constraints.check_extension(envelope, q.span()) else {
            continue;
        };
        let mut relations = r.relations.clone();
        relations.push(rel);
        let mut sources = r.sources.clone();
        sources.push(q.eid);
        out.push(PatternOccurrence {
            sid: r.sid,
            eid: q.eid,
            start_t: r.start_t.min(q.start_t),
            end_t: r.end_t.max(q.end_t),
            relations,
            sources,
        });
    }
}

#[inline]
fn group_end<T>(rows: &[PatternOccurrence<T>], from: usize) -> usize {
    let sid = rows[from].sid;
    from + rows[from..].iter().take_while(|r| r.sid == sid).count()
}

/// Vertical support of every ordered event pair.
///
/// A sequence supports `(e1, e2)` when some interval of `e1` sorts before an
/// interval of `e2` and their envelope respects `max_dura`. Gap bounds and
/// `min_dura` are deliberately ignored: a pair may sit inside a longer
/// occurrence whose envelope satisfies them, so only the upper duration bound
/// keeps the matrix an upper bound on extension support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSupportMatrix {
    size: usize,
    counts: Vec<u32>,
}

impl PairSupportMatrix {
    pub fn build<T: TimeValue>(db: &Database<T>, constraints: &Constraints<T>) -> Self {
        let size = db.alphabet().len();
        let mut counts = vec![0u32; size * size];
        // Per-pair stamp of the last sequence that counted it.
        let mut stamp = vec![0u32; size * size];
        for (k, seq) in db.sequences().iter().enumerate() {
            let tag = k as u32 + 1;
            let ivs = &seq.intervals;
            for (i, first) in ivs.iter().enumerate() {
                for second in &ivs[i + 1..] {
                    if constraints.max_dura.is_some_and(|d| second.start - first.start > d) {
                        break;
                    }
                    let envelope = first.span().merge(&second.span());
                    if constraints.max_dura.is_some_and(|d| envelope.duration() > d) {
                        continue;
                    }
                    let cell = first.event.index() * size + second.event.index();
                    if stamp[cell] != tag {
                        stamp[cell] = tag;
                        counts[cell] += 1;
                    }
                }
            }
        }
        PairSupportMatrix { size, counts }
    }

    /// Support of `first` followed by `second`; 0 for unknown events.
    #[inline]
    pub fn get(&self, first: EventId, second: EventId) -> u32 {
        let (a, b) = (first.index(), second.index());
        if a >= self.size || b >= self.size {
            return 0;
        }
        self.counts[a * self.size + b]
    }

    /// Number of events the matrix covers.
    pub fn size(&self) -> usize {
        self.size
    }
}
