//! Brute-force enumeration of frequent S-TIRPs for small databases.
//!
//! Every index-increasing tuple of intervals of every sequence is checked
//! directly against the interval constraints; there is no vertical database,
//! no pair support matrix and no support-based pruning. Used as ground truth
//! for the miner.

use std::collections::{BTreeMap, BTreeSet};

use crate::database::{Database, TimeIntervalSequence};
use crate::error::{Error, Result};
use crate::model::{Constraints, Span};
use crate::time::TimeValue;

/// Longest sequence the oracle accepts; enumeration is exponential in it.
pub const MAX_SEQUENCE_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEntry {
    pub vsup: usize,
    pub sids: Vec<u32>,
}

/// Event sequence → support.
pub type OracleResult = BTreeMap<Vec<String>, OracleEntry>;

/// All S-TIRPs of at most `max_len` events supported by at least `threshold`
/// sequences.
///
/// A tuple of intervals is an instance when every interval's own duration is
/// within bounds and each interval, taken left to right, is a valid
/// extension of the envelope of the ones before it.
pub fn enumerate_all<T: TimeValue>(
    db: &Database<T>,
    constraints: &Constraints<T>,
    max_len: usize,
    threshold: usize,
) -> Result<OracleResult> {
    if max_len > MAX_SEQUENCE_LEN {
        return Err(Error::OracleGuard(format!("max_len {max_len} exceeds {MAX_SEQUENCE_LEN}")));
    }
    if let Some(seq) = db.sequences().iter().find(|s| s.len() > MAX_SEQUENCE_LEN) {
        return Err(Error::OracleGuard(format!(
            "sequence {} has {} intervals, limit is {MAX_SEQUENCE_LEN}",
            seq.sid,
            seq.len()
        )));
    }

    let mut support: BTreeMap<Vec<String>, BTreeSet<u32>> = BTreeMap::new();
    for seq in db.sequences() {
        let mut found = BTreeSet::new();
        let mut tuple = Vec::with_capacity(max_len);
        for first in 0..seq.len() {
            tuple.push(first);
            walk(seq, constraints, max_len, &mut tuple, &mut found);
            tuple.pop();
        }
        for events in found {
            let names = events.iter().map(|&e| db.alphabet()[e as usize].clone()).collect();
            support.entry(names).or_default().insert(seq.sid);
        }
    }

    Ok(support
        .into_iter()
        .filter(|(_, sids)| sids.len() >= threshold)
        .map(|(events, sids)| {
            let sids: Vec<u32> = sids.into_iter().collect();
            (events, OracleEntry { vsup: sids.len(), sids })
        })
        .collect())
}

/// Checks `tuple` from scratch and, if it is an instance, records it and
/// tries every longer tuple starting with it.
fn walk<T: TimeValue>(
    seq: &TimeIntervalSequence<T>,
    constraints: &Constraints<T>,
    max_len: usize,
    tuple: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<u32>>,
) {
    if !is_instance(seq, constraints, tuple) {
        // Any tuple extending an invalid one fails at the same step.
        return;
    }
    found.insert(tuple.iter().map(|&i| seq.intervals[i].event.0).collect());
    if tuple.len() == max_len {
        return;
    }
    let next = tuple.last().map_or(0, |&i| i + 1);
    for j in next..seq.len() {
        tuple.push(j);
        walk(seq, constraints, max_len, tuple, found);
        tuple.pop();
    }
}

fn is_instance<T: TimeValue>(
    seq: &TimeIntervalSequence<T>,
    constraints: &Constraints<T>,
    tuple: &[usize],
) -> bool {
    let intervals: Vec<_> = tuple.iter().map(|&i| seq.intervals[i]).collect();
    if !intervals.iter().all(|iv| constraints.duration_ok(iv.duration())) {
        return false;
    }
    let mut envelope: Span<T> = intervals[0].span();
    for iv in &intervals[1..] {
        if constraints.check_extension(envelope, iv.span()).is_none() {
            return false;
        }
        envelope = Span::new(envelope.start.min(iv.start), envelope.end.max(iv.end));
    }
    true
}

/// Keeps entries whose events contain `query` in order.
pub fn target_filter<S: AsRef<str>>(result: &OracleResult, query: &[S]) -> OracleResult {
    result
        .iter()
        .filter(|(events, _)| is_subsequence(events, query))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn is_subsequence<S: AsRef<str>>(events: &[String], query: &[S]) -> bool {
    let mut rest = events.iter();
    query.iter().all(|q| rest.any(|e| e == q.as_ref()))
}
