//! Horizontal time-interval sequence databases: parsing, validation, sorting
//! and synthetic generation.
//!
//! Text format, one sequence per line:
//!
//! ```text
//! # comment
//! 1|B,2,10 A,5,12 D,8,18 C,12,18 B,12,20 A,14,20
//! 7|
//! ```
//!
//! Each token is `EVENT,START,END`. Events are any non-empty string without
//! commas or whitespace. Lines and intervals may appear in any order; sequences
//! are ordered by sid and intervals sorted on load.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{EventId, SymbolicInterval};
use crate::time::TimeValue;

/// One sequence of the horizontal database, sorted by interval order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeIntervalSequence<T> {
    pub sid: u32,
    pub intervals: Vec<SymbolicInterval<T>>,
}

impl<T: TimeValue> TimeIntervalSequence<T> {
    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.intervals.iter().map(|iv| iv.event)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// A collection of sequences sharing one sorted alphabet, ordered by sid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database<T> {
    sequences: Vec<TimeIntervalSequence<T>>,
    alphabet: Vec<String>,
}

/// Sorts intervals by `(start, end, event)`.
///
/// This is the interval order at ε = 0. For ε > 0 quasi-equality is not
/// transitive and the ε-order can be cyclic, so the exact order is used as the
/// canonical layout at every ε.
pub fn sort_sequence<T: TimeValue>(intervals: &mut [SymbolicInterval<T>]) {
    intervals.sort_unstable_by(|a, b| a.exact_cmp(b));
}

/// A sequence given by event names: `(sid, [(event, start, end)])`.
pub type NamedSequence<S, T> = (u32, Vec<(S, T, T)>);

/// A sequence before event interning: `(sid, source line, [(event, start, end)])`.
type RawSequence<T> = (u32, usize, Vec<(String, T, T)>);

impl<T: TimeValue> Database<T> {
    pub fn empty() -> Self {
        Database { sequences: Vec::new(), alphabet: Vec::new() }
    }

    /// Builds a validated, sorted database from named intervals.
    pub fn from_named<S: AsRef<str>>(sequences: Vec<NamedSequence<S, T>>) -> Result<Self> {
        let raw = sequences
            .into_iter()
            .enumerate()
            .map(|(i, (sid, ivs))| {
                let ivs = ivs.into_iter().map(|(e, s, t)| (e.as_ref().to_owned(), s, t)).collect();
                (sid, i + 1, ivs)
            })
            .collect();
        Self::build(raw)
    }

    fn build(raw: Vec<RawSequence<T>>) -> Result<Self> {
        let names: BTreeSet<&str> =
            raw.iter().flat_map(|(_, _, ivs)| ivs.iter().map(|(e, _, _)| e.as_str())).collect();
        let alphabet: Vec<String> = names.into_iter().map(str::to_owned).collect();

        let mut seen_sids = HashSet::with_capacity(raw.len());
        let mut sequences = Vec::with_capacity(raw.len());
        for (sid, line, ivs) in raw {
            let err = |message: String| Error::Parse { line, message };
            if sid == 0 {
                return Err(err("sequence id must be a positive integer".into()));
            }
            if !seen_sids.insert(sid) {
                return Err(err(format!("duplicate sequence id {sid}")));
            }
            let mut intervals = Vec::with_capacity(ivs.len());
            for (name, start, end) in ivs {
                if start < T::zero() {
                    return Err(err(format!("negative start time {start} for event {name}")));
                }
                if end < start {
                    return Err(err(format!("end {end} precedes start {start} for event {name}")));
                }
                let id = alphabet.binary_search(&name).expect("alphabet covers every event");
                intervals.push(SymbolicInterval::new(start, end, EventId(id as u32)));
            }
            sort_sequence(&mut intervals);
            if let Some(w) = intervals.windows(2).find(|w| w[0] == w[1]) {
                return Err(err(format!(
                    "duplicate interval {},{},{}",
                    alphabet[w[0].event.index()],
                    w[0].start,
                    w[0].end
                )));
            }
            sequences.push(TimeIntervalSequence { sid, intervals });
        }
        sequences.sort_unstable_by_key(|s| s.sid);
        Ok(Database { sequences, alphabet })
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::parse(text.as_bytes())
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut raw = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            raw.push(parse_line::<T>(trimmed, lineno)?);
        }
        Self::build(raw)
    }

    pub fn sequences(&self) -> &[TimeIntervalSequence<T>] {
        &self.sequences
    }

    /// Event names, sorted byte-wise; `EventId(i)` names `alphabet()[i]`.
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn event_id(&self, name: &str) -> Option<EventId> {
        self.alphabet.binary_search_by(|n| n.as_str().cmp(name)).ok().map(|i| EventId(i as u32))
    }

    pub fn event_name(&self, id: EventId) -> &str {
        &self.alphabet[id.index()]
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn interval_count(&self) -> usize {
        self.sequences.iter().map(|s| s.len()).sum()
    }

    /// Keeps the sequences accepted by `keep`. The alphabet is shared with
    /// `self`, so event ids stay valid even if some events no longer occur.
    pub fn retain_sequences(&self, mut keep: impl FnMut(&TimeIntervalSequence<T>) -> bool) -> Self {
        Database {
            sequences: self.sequences.iter().filter(|s| keep(s)).cloned().collect(),
            alphabet: self.alphabet.clone(),
        }
    }
}

fn parse_line<T: TimeValue>(line: &str, lineno: usize) -> Result<RawSequence<T>> {
    let err = |message: String| Error::Parse { line: lineno, message };
    let (sid_text, body) =
        line.split_once('|').ok_or_else(|| err("expected `SID|EVENT,START,END ...`".into()))?;
    let sid: u32 = sid_text
        .trim()
        .parse()
        .map_err(|_| err(format!("invalid sequence id `{}`", sid_text.trim())))?;
    let mut intervals = Vec::new();
    for token in body.split_whitespace() {
        let mut parts = token.split(',');
        let (Some(event), Some(start), Some(end), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err(format!("malformed interval `{token}`, expected EVENT,START,END")));
        };
        if event.is_empty() {
            return Err(err(format!("empty event name in `{token}`")));
        }
        let time = |s: &str| {
            s.parse::<T>().map_err(|_| err(format!("non-integer timestamp `{s}` in `{token}`")))
        };
        intervals.push((event.to_owned(), time(start)?, time(end)?));
    }
    Ok((sid, lineno, intervals))
}

/// Serializes in the text format; `parse_str(&db.to_string())` reproduces `db`.
impl<T: TimeValue> fmt::Display for Database<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seq in &self.sequences {
            write!(f, "{}|", seq.sid)?;
            for (i, iv) in seq.intervals.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{},{},{}", self.event_name(iv.event), iv.start, iv.end)?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Shape of a uniformly random database.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub num_sequences: usize,
    pub intervals_per_sequence: usize,
    pub alphabet_size: usize,
    /// Starts are drawn from `[0, max_time)`.
    pub max_time: u64,
    /// Durations are drawn from `[1, max_duration]`.
    pub max_duration: u64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            num_sequences: 1000,
            intervals_per_sequence: 20,
            alphabet_size: 100,
            max_time: 1000,
            max_duration: 100,
            seed: 42,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("sequences", self.num_sequences as u64),
            ("intervals", self.intervals_per_sequence as u64),
            ("alphabet", self.alphabet_size as u64),
            ("max-time", self.max_time),
            ("max-duration", self.max_duration),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("generator parameter {name} must be positive")));
        }
        let distinct = (self.alphabet_size as u128)
            * u128::from(self.max_time)
            * u128::from(self.max_duration);
        if distinct < self.intervals_per_sequence as u128 {
            return Err(Error::Config(format!(
                "cannot draw {} distinct intervals from {distinct} possibilities",
                self.intervals_per_sequence
            )));
        }
        Ok(())
    }
}

/// Draws a database with sids `1..=num_sequences`. Event names are the decimal
/// indices `0..alphabet_size`. Deterministic for a fixed seed.
pub fn generate_synthetic<T: TimeValue>(params: &GeneratorParams) -> Result<Database<T>> {
    params.validate()?;
    let to_time = |v: u64| {
        T::from(v).ok_or_else(|| Error::Config(format!("time {v} does not fit the time type")))
    };
    to_time(params.max_time + params.max_duration)?;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let names: Vec<String> = (0..params.alphabet_size).map(|i| i.to_string()).collect();
    let mut raw = Vec::with_capacity(params.num_sequences);
    let mut seen = HashSet::with_capacity(params.intervals_per_sequence);
    for i in 0..params.num_sequences {
        seen.clear();
        let mut ivs = Vec::with_capacity(params.intervals_per_sequence);
        while ivs.len() < params.intervals_per_sequence {
            let event = rng.gen_range(0..params.alphabet_size);
            let start = rng.gen_range(0..params.max_time);
            let duration = rng.gen_range(1..=params.max_duration);
            if seen.insert((event, start, duration)) {
                ivs.push((names[event].clone(), to_time(start)?, to_time(start + duration)?));
            }
        }
        raw.push((i as u32 + 1, i + 1, ivs));
    }
    Database::build(raw)
}
