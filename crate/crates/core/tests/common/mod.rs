#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tirp::oracle::OracleResult;
use tirp::{Constraints, Database, QueryEventSequence, STirpResult};

pub const RUNNING_EXAMPLE: &str = "\
1|B,2,10 A,5,12 D,8,18 C,12,18 B,12,20 A,14,20
2|B,2,16 C,8,10 C,12,14 A,14,18 D,18,20
3|A,2,6 C,2,8 A,11,13 D,11,15 B,14,19 A,15,19 D,16,19
4|A,2,15 C,6,13 D,6,13
5|A,0,2 C,3,9 A,5,13 B,13,16 D,15,20 B,17,20
";

pub fn running_example() -> Database {
    Database::parse_str(RUNNING_EXAMPLE).unwrap()
}

pub fn running_constraints() -> Constraints {
    Constraints { max_gap: Some(5), max_dura: Some(20), ..Constraints::default() }
}

/// A small random mining problem.
#[derive(Debug, Clone)]
pub struct Trial {
    pub db: Database,
    pub constraints: Constraints,
    pub min_sup: f64,
    pub query: QueryEventSequence,
}

const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// At most 8 sequences of at most 10 intervals over at most 5 events.
pub fn random_trial(seed: u64) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=8);
    let mut seqs = Vec::new();
    for sid in 1..=n {
        let len = rng.gen_range(0..=10);
        let mut ivs: Vec<(&str, i64, i64)> = (0..len)
            .map(|_| {
                let s = rng.gen_range(0..20);
                (NAMES[rng.gen_range(0..alphabet)], s, s + rng.gen_range(0..8))
            })
            .collect();
        ivs.sort();
        ivs.dedup();
        seqs.push((sid as u32, ivs));
    }
    let db = Database::from_named(seqs).unwrap();

    let min_gap = rng.gen_range(0..=2);
    let min_dura = rng.gen_range(0..=3);
    let constraints = Constraints {
        epsilon: rng.gen_range(0..=1),
        min_gap,
        max_gap: rng.gen_bool(0.7).then(|| min_gap + rng.gen_range(0..=8)),
        min_dura,
        max_dura: rng.gen_bool(0.7).then(|| min_dura + rng.gen_range(2..=20)),
    };
    let min_sup = [0.2, 0.25, 0.3, 0.4, 0.5, 0.75][rng.gen_range(0..6)];
    let qlen = rng.gen_range(1..=3);
    let query =
        QueryEventSequence::new((0..qlen).map(|_| NAMES[rng.gen_range(0..=alphabet.min(4))])).unwrap();
    Trial { db, constraints, min_sup, query }
}

pub fn max_sequence_len(db: &Database) -> usize {
    db.sequences().iter().map(|s| s.len()).max().unwrap_or(0).max(1)
}

/// `(events, vsup, sids)` triples for comparison with the oracle.
pub fn summarize(results: &[STirpResult]) -> Vec<(Vec<String>, usize, Vec<u32>)> {
    results.iter().map(|r| (r.events.clone(), r.vsup, r.supporting_sids.clone())).collect()
}

pub fn summarize_oracle(result: &OracleResult) -> Vec<(Vec<String>, usize, Vec<u32>)> {
    result.iter().map(|(k, v)| (k.clone(), v.vsup, v.sids.clone())).collect()
}
