//! Targeted mining of time-interval related patterns (TIRPs).
//!
//! Given a database of symbolic time-interval sequences and a query event
//! sequence, [`mine`] returns every frequent S-TIRP (a pattern identified by
//! its event sequence, aggregating all relation combinations) whose events
//! contain the query in order.
//!
//! The library is generic over the integer time type through [`TimeValue`];
//! the aliases below fix it to `i64`.
//!
//! ```
//! use tirp::{mine, Constraints, Database, MiningConfig, QueryEventSequence};
//!
//! let db = Database::parse_str("1|A,0,5 C,6,9\n2|A,1,3 C,4,8\n3|C,0,2").unwrap();
//! let cfg = MiningConfig::new(0.5, Constraints { max_gap: Some(5), ..Constraints::default() });
//! let qes: QueryEventSequence = "A,C".parse().unwrap();
//! let (patterns, _stats) = mine(&db, Some(&qes), &cfg).unwrap();
//! assert_eq!(patterns[0].to_line(), "A C\t2\t1,2");
//! ```

pub mod database;
pub mod error;
pub mod index;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod time;

pub use error::{Error, Result};
pub use index::{build_singleton_vdbs, extend_vdb, PairSupportMatrix};
pub use miner::{
    contains_subsequence, mine, post_filter, support_threshold, usfp_filter, MiningStats, Mode,
    QueryEventSequence, STirpResult, SequenceInstances, Strategies,
};
pub use model::{classify_relation, interval_precedes, EventId, TemporalRelation};
pub use time::{compare_eps, EpsOrdering, TimeValue};
pub use database::{generate_synthetic, sort_sequence, GeneratorParams};

/// Time point, gap and duration unit.
pub type TimePoint = i64;
pub type Span = model::Span<TimePoint>;
pub type SymbolicInterval = model::SymbolicInterval<TimePoint>;
pub type Constraints = model::Constraints<TimePoint>;
pub type TimeIntervalSequence = database::TimeIntervalSequence<TimePoint>;
pub type Database = database::Database<TimePoint>;
pub type PatternOccurrence = index::PatternOccurrence<TimePoint>;
pub type VerticalDatabase = index::VerticalDatabase<TimePoint>;
pub type MiningConfig = miner::MiningConfig<TimePoint>;
