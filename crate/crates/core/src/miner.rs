//! Targeted depth-first mining of frequent S-TIRPs.
//!
//! The search grows patterns one event at a time from every frequent single
//! event, joining vertical databases. Three optional prunings apply:
//!
//! * **USFP** drops sequences that do not contain the query as an event
//!   subsequence before anything else is built.
//! * **UQPP** abandons a branch when the pair support of the pattern's last
//!   event followed by the next unmatched query event is below threshold.
//! * **UEPP** skips a candidate event when the pair support of the pattern's
//!   last event followed by that candidate is below threshold.
//!
//! None of them changes the output; they only cut work.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::database::Database;
use crate::error::{Error, Result};
use crate::index::{build_singleton_vdbs, extend_vdb, PairSupportMatrix, VerticalDatabase};
use crate::model::{Constraints, EventId};
use crate::time::TimeValue;

/// The user's target: emitted patterns must contain these events in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEventSequence {
    events: Vec<String>,
}

impl QueryEventSequence {
    pub fn new<S: Into<String>>(events: impl IntoIterator<Item = S>) -> Result<Self> {
        let events: Vec<String> = events.into_iter().map(Into::into).collect();
        if events.is_empty() {
            return Err(Error::Config("query event sequence must not be empty".into()));
        }
        if let Some(bad) = events.iter().find(|e| e.is_empty() || e.contains(char::is_whitespace)) {
            return Err(Error::Config(format!("invalid query event `{bad}`")));
        }
        Ok(QueryEventSequence { events })
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Event ids in `db`'s alphabet, or `None` if some event never occurs.
    pub fn resolve<T: TimeValue>(&self, db: &Database<T>) -> Option<Vec<EventId>> {
        self.events.iter().map(|e| db.event_id(e)).collect()
    }
}

/// Parses a comma-separated list such as `A,C`.
impl FromStr for QueryEventSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return QueryEventSequence::new(Vec::<String>::new());
        }
        QueryEventSequence::new(s.split(',').map(str::trim))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategies {
    pub usfp: bool,
    pub uqpp: bool,
    pub uepp: bool,
}

impl Strategies {
    pub const ALL: Strategies = Strategies { usfp: true, uqpp: true, uepp: true };
    pub const NONE: Strategies = Strategies { usfp: false, uqpp: false, uepp: false };

    /// All eight on/off combinations.
    pub fn combinations() -> impl Iterator<Item = Strategies> {
        (0..8u8).map(|bits| Strategies {
            usfp: bits & 1 != 0,
            uqpp: bits & 2 != 0,
            uepp: bits & 4 != 0,
        })
    }

    /// True when every strategy enabled in `self` is also enabled in `other`.
    pub fn is_subset_of(&self, other: &Strategies) -> bool {
        (!self.usfp || other.usfp) && (!self.uqpp || other.uqpp) && (!self.uepp || other.uepp)
    }
}

impl Default for Strategies {
    fn default() -> Self {
        Strategies::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Only patterns containing the query are explored for output.
    #[default]
    Targeted,
    /// Every frequent pattern; the query is ignored.
    Full,
    /// Every frequent pattern, then filtered by the query afterwards.
    FullPostFilter,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "targeted" => Ok(Mode::Targeted),
            "full" => Ok(Mode::Full),
            "full-post" => Ok(Mode::FullPostFilter),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected targeted, full or full-post)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Targeted => "targeted",
            Mode::Full => "full",
            Mode::FullPostFilter => "full-post",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig<T> {
    /// Fraction of the database a pattern must be supported by, in `(0, 1]`.
    pub min_sup: f64,
    pub constraints: Constraints<T>,
    /// Cap on events per pattern.
    pub max_pattern_length: Option<usize>,
    pub strategies: Strategies,
    pub mode: Mode,
    /// Worker threads for the per-seed search; 1 runs inline.
    pub threads: usize,
    /// Record the distinct relation strings seen in each supporting sequence.
    pub collect_instances: bool,
}

impl<T: TimeValue> MiningConfig<T> {
    pub fn new(min_sup: f64, constraints: Constraints<T>) -> Self {
        MiningConfig {
            min_sup,
            constraints,
            max_pattern_length: None,
            strategies: Strategies::ALL,
            mode: Mode::Targeted,
            threads: 1,
            collect_instances: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_sup > 0.0 && self.min_sup <= 1.0) {
            return Err(Error::Config(format!("min-sup must be in (0, 1], got {}", self.min_sup)));
        }
        if self.max_pattern_length == Some(0) {
            return Err(Error::Config("max-length must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.constraints.validate()
    }
}

/// Relation strings observed for a pattern inside one sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SequenceInstances {
    pub sid: u32,
    pub relations: Vec<String>,
}

/// One mined S-TIRP.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct STirpResult {
    pub events: Vec<String>,
    pub vsup: usize,
    pub supporting_sids: Vec<u32>,
    pub instances: Option<Vec<SequenceInstances>>,
}

impl STirpResult {
    /// `events<TAB>vsup<TAB>sids` with events space-separated and sids
    /// comma-separated.
    pub fn to_line(&self) -> String {
        let sids: Vec<String> = self.supporting_sids.iter().map(u32::to_string).collect();
        format!("{}\t{}\t{}", self.events.join(" "), self.vsup, sids.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MiningStats {
    /// Sequences removed by USFP.
    pub sequences_filtered: usize,
    /// Vertical database joins performed.
    pub join_operations: u64,
    /// Branches abandoned by UQPP.
    pub pruned_uqpp: u64,
    /// Candidate extensions skipped by UEPP.
    pub pruned_uepp: u64,
    pub patterns_output: usize,
    pub elapsed: Duration,
}

impl MiningStats {
    fn absorb(&mut self, other: &MiningStats) {
        self.join_operations += other.join_operations;
        self.pruned_uqpp += other.pruned_uqpp;
        self.pruned_uepp += other.pruned_uepp;
    }

    /// `key=value` lines in a fixed order.
    pub fn to_key_values(&self) -> String {
        format!(
            "sequences_filtered={}\njoin_operations={}\npruned_uqpp={}\npruned_uepp={}\npatterns={}\nelapsed_ms={}\n",
            self.sequences_filtered,
            self.join_operations,
            self.pruned_uqpp,
            self.pruned_uepp,
            self.patterns_output,
            self.elapsed.as_millis()
        )
    }
}

/// Minimum vertical support: the least count `k` with `k >= min_sup * db_size`.
///
/// A relative slack of 1e-9 absorbs binary rounding of decimal fractions, so
/// `0.1 * 30` yields 3 rather than 4.
pub fn support_threshold(min_sup: f64, db_size: usize) -> Result<usize> {
    if !(min_sup > 0.0 && min_sup <= 1.0) {
        return Err(Error::Config(format!("min-sup must be in (0, 1], got {min_sup}")));
    }
    let product = min_sup * db_size as f64;
    let threshold = (product - product * 1e-9).ceil().max(0.0) as usize;
    if threshold == 0 {
        return Err(Error::Config(format!(
            "min-sup {min_sup} over {db_size} sequences gives a zero support threshold"
        )));
    }
    Ok(threshold)
}

/// Greedy left-to-right subsequence test.
pub fn contains_subsequence<I, Q>(sequence: I, query: &[Q]) -> bool
where
    I: IntoIterator,
    I::Item: PartialEq<Q>,
{
    let mut pending = query.iter().peekable();
    for item in sequence {
        match pending.peek() {
            None => return true,
            Some(q) if item == **q => {
                pending.next();
            }
            Some(_) => {}
        }
    }
    pending.peek().is_none()
}

/// Keeps the sequences whose events contain `query` in order.
pub fn usfp_filter<T: TimeValue>(db: &Database<T>, query: &[EventId]) -> Database<T> {
    db.retain_sequences(|s| contains_subsequence(s.events(), query))
}

/// Keeps the results whose event sequence contains `query`.
pub fn post_filter(results: Vec<STirpResult>, query: &QueryEventSequence) -> Vec<STirpResult> {
    results.into_iter().filter(|r| contains_subsequence(r.events.iter().map(String::as_str), query.events())).collect()
}

/// Mines frequent S-TIRPs of `db`.
///
/// `query` is required in [`Mode::Targeted`] and [`Mode::FullPostFilter`] and
/// ignored in [`Mode::Full`]. Results are sorted by event sequence.
pub fn mine<T: TimeValue>(
    db: &Database<T>,
    query: Option<&QueryEventSequence>,
    cfg: &MiningConfig<T>,
) -> Result<(Vec<STirpResult>, MiningStats)> {
    let started = Instant::now();
    cfg.validate()?;
    let query = match (cfg.mode, query) {
        (Mode::Full, _) => None,
        (_, Some(q)) => Some(q),
        (mode, None) => {
            return Err(Error::Config(format!("mode {mode} requires a query event sequence")))
        }
    };
    let mut stats = MiningStats::default();
    if db.is_empty() {
        stats.elapsed = started.elapsed();
        return Ok((Vec::new(), stats));
    }
    let threshold = support_threshold(cfg.min_sup, db.len())?;

    let targeted = cfg.mode == Mode::Targeted;
    let resolved = match query {
        Some(q) if targeted => match q.resolve(db) {
            Some(ids) => Some(ids),
            None => {
                // Some query event never occurs, so nothing can match.
                if cfg.strategies.usfp {
                    stats.sequences_filtered = db.len();
                }
                stats.elapsed = started.elapsed();
                return Ok((Vec::new(), stats));
            }
        },
        _ => None,
    };

    let filtered;
    let working = match &resolved {
        Some(ids) if cfg.strategies.usfp => {
            filtered = usfp_filter(db, ids);
            stats.sequences_filtered = db.len() - filtered.len();
            if filtered.len() < threshold {
                stats.elapsed = started.elapsed();
                return Ok((Vec::new(), stats));
            }
            &filtered
        }
        _ => db,
    };

    let singletons = build_singleton_vdbs(working, &cfg.constraints);
    let seeds = frequent_seeds(&singletons, threshold);
    let needs_psm = cfg.strategies.uepp || (cfg.strategies.uqpp && resolved.is_some());
    let psm = needs_psm.then(|| PairSupportMatrix::build(working, &cfg.constraints));

    let search = SearchContext {
        singletons: &singletons,
        seeds: &seeds,
        psm: psm.as_ref(),
        query: resolved.as_deref(),
        threshold,
        constraints: &cfg.constraints,
        uqpp: cfg.strategies.uqpp,
        uepp: cfg.strategies.uepp,
        max_len: cfg.max_pattern_length,
        collect_instances: cfg.collect_instances,
        alphabet: db.alphabet(),
    };
    let (mut results, search_stats) = search.run(cfg.threads)?;
    stats.absorb(&search_stats);

    if cfg.mode == Mode::FullPostFilter {
        results = post_filter(results, query.expect("checked above"));
    }
    stats.patterns_output = results.len();
    stats.elapsed = started.elapsed();
    Ok((results, stats))
}

/// Frequent single events, most supported first, ties by event order.
fn frequent_seeds<T: TimeValue>(singletons: &[VerticalDatabase<T>], threshold: usize) -> Vec<EventId> {
    let mut seeds: Vec<(usize, EventId)> = singletons
        .iter()
        .map(|v| (v.vertical_support(), v.last_event()))
        .filter(|(vsup, _)| *vsup >= threshold)
        .collect();
    seeds.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    seeds.into_iter().map(|(_, e)| e).collect()
}

/// Shared, read-only inputs of the depth-first search.
struct SearchContext<'a, T> {
    singletons: &'a [VerticalDatabase<T>],
    seeds: &'a [EventId],
    psm: Option<&'a PairSupportMatrix>,
    /// `None` outside targeted mode: every frequent pattern is emitted.
    query: Option<&'a [EventId]>,
    threshold: usize,
    constraints: &'a Constraints<T>,
    uqpp: bool,
    uepp: bool,
    max_len: Option<usize>,
    collect_instances: bool,
    alphabet: &'a [String],
}

/// Per-branch output and counters.
struct Sink {
    results: Vec<STirpResult>,
    stats: MiningStats,
}

impl<'a, T: TimeValue> SearchContext<'a, T> {
    fn run(&self, threads: usize) -> Result<(Vec<STirpResult>, MiningStats)> {
        self.run_with_roots(self.seeds, threads)
    }

    fn run_with_roots(&self, roots: &[EventId], threads: usize) -> Result<(Vec<STirpResult>, MiningStats)> {
        let grow = |seed: &EventId| {
            let mut sink = Sink { results: Vec::new(), stats: MiningStats::default() };
            self.dfs(&self.singletons[seed.index()], 0, &mut sink);
            sink
        };
        let sinks: Vec<Sink> = if threads <= 1 {
            roots.iter().map(grow).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {threads} threads: {e}")))?;
            pool.install(|| roots.par_iter().map(grow).collect())
        };

        let mut stats = MiningStats::default();
        let mut results = Vec::new();
        for sink in sinks {
            stats.absorb(&sink.stats);
            results.extend(sink.results);
        }
        results.sort_unstable();
        let before = results.len();
        results.dedup_by(|a, b| a.events == b.events);
        debug_assert_eq!(before, results.len(), "a pattern was emitted twice");
        Ok((results, stats))
    }

    /// Grows `prefix`. `matched` counts query events matched before the
    /// prefix's last event was appended.
    fn dfs(&self, prefix: &VerticalDatabase<T>, mut matched: usize, sink: &mut Sink) {
        let last = prefix.last_event();
        let next_query = match self.query {
            Some(q) => {
                if matched < q.len() && q[matched] == last {
                    matched += 1;
                }
                if matched == q.len() {
                    sink.results.push(self.result(prefix));
                }
                q.get(matched).copied()
            }
            None => {
                sink.results.push(self.result(prefix));
                None
            }
        };

        if let (true, Some(qe), Some(psm)) = (self.uqpp, next_query, self.psm) {
            if (psm.get(last, qe) as usize) < self.threshold {
                sink.stats.pruned_uqpp += 1;
                return;
            }
        }
        if self.max_len.is_some_and(|m| prefix.events.len() >= m) {
            return;
        }

        for &candidate in self.seeds {
            if let (true, Some(psm)) = (self.uepp, self.psm) {
                if (psm.get(last, candidate) as usize) < self.threshold {
                    sink.stats.pruned_uepp += 1;
                    continue;
                }
            }
            sink.stats.join_operations += 1;
            let extended = extend_vdb(
                prefix,
                candidate,
                &self.singletons[candidate.index()],
                self.constraints,
            );
            if extended.vertical_support() >= self.threshold {
                self.dfs(&extended, matched, sink);
            }
        }
    }

    fn result(&self, vdb: &VerticalDatabase<T>) -> STirpResult {
        let supporting_sids = vdb.supporting_sids();
        let instances = self.collect_instances.then(|| {
            let mut per_sid: Vec<SequenceInstances> = Vec::with_capacity(supporting_sids.len());
            let mut current: BTreeSet<String> = BTreeSet::new();
            for (i, row) in vdb.rows.iter().enumerate() {
                current.insert(row.relation_string());
                if vdb.rows.get(i + 1).is_none_or(|next| next.sid != row.sid) {
                    per_sid.push(SequenceInstances {
                        sid: row.sid,
                        relations: std::mem::take(&mut current).into_iter().collect(),
                    });
                }
            }
            per_sid
        });
        STirpResult {
            events: vdb.events.iter().map(|e| self.alphabet[e.index()].clone()).collect(),
            vsup: supporting_sids.len(),
            supporting_sids,
            instances,
        }
    }
}
