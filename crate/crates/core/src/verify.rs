//! Self-check suites run over every `(K, D)` up to a bound.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::air::AirMatrix;
use crate::decoder::{all_plans, check_plan, verify_reduced_side_information};
use crate::encoder::{encode_boolean_all, encode_matrix, MessageVector};
use crate::ff_matrix::{BitVector, PrimeField, PrimeFieldMatrix};
use crate::geometry::{distance_profile, down_distance, right_distance, scan, up_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    AdjacencyRank,
    EncoderEquivalence,
    DistanceScan,
    RoundTrip,
}

impl Suite {
    pub const ALL: [Suite; 4] =
        [Suite::AdjacencyRank, Suite::EncoderEquivalence, Suite::DistanceScan, Suite::RoundTrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AdjacencyRank => "adjacency-rank",
            Suite::EncoderEquivalence => "encoder-equivalence",
            Suite::DistanceScan => "distances-vs-scan",
            Suite::RoundTrip => "round-trip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed check, located by `(K, D)` and the receiver, column or window
/// start it concerns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub k: usize,
    pub d: usize,
    pub index: usize,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={} D={} k={}: {}", self.k, self.d, self.index, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self { suite, checks: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_k: usize,
    pub fields: Vec<PrimeField>,
    pub suites: Vec<Suite>,
    /// Random vectors per `(K, D)` for the encoder suite.
    pub encoder_vectors: usize,
    /// Round trip is exhaustive up to this `K`.
    pub exhaustive_limit: usize,
    /// Random vectors per `(K, D)` above the exhaustive limit.
    pub round_trip_vectors: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_k: 24,
            fields: PrimeField::ALL.to_vec(),
            suites: Suite::ALL.to_vec(),
            encoder_vectors: 100,
            exhaustive_limit: 12,
            round_trip_vectors: 200,
            seed: 0,
        }
    }
}

fn fail(m: &AirMatrix, index: usize, detail: impl Into<String>) -> Failure {
    Failure { k: m.height(), d: m.chain().d(), index, detail: detail.into() }
}

/// Rank of rows `[start, start + K − D)` over `field`.
pub fn window_rank(m: &AirMatrix, start: usize, field: PrimeField) -> usize {
    PrimeFieldMatrix::from_bit_rows(m.window(start), field).expect("rows share one width").rank()
}

/// Every window of `K − D` consecutive rows has full rank over each field.
/// Windows are not cyclic: starts run over `0..=D`.
pub fn check_adjacency(m: &AirMatrix, fields: &[PrimeField]) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::AdjacencyRank);
    for &field in fields {
        for start in 0..=m.chain().d() {
            r.checks += 1;
            let rank = window_rank(m, start, field);
            if rank != m.width() {
                r.failures.push(fail(
                    m,
                    start,
                    format!("window at row {start} has rank {rank} over GF({})", field.modulus()),
                ));
            }
        }
    }
    r
}

/// Closed-form encoding agrees with `x·L` on `vectors` seeded random inputs.
pub fn check_encoder(m: &AirMatrix, vectors: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::EncoderEquivalence);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m.height() as u64) << 32) | m.chain().d() as u64);
    for _ in 0..vectors {
        let x = MessageVector(BitVector::from_bits((0..m.height()).map(|_| rng.random::<bool>())));
        let a = encode_matrix(m, &x).expect("length matches");
        let b = encode_boolean_all(m.chain(), &x).expect("length matches");
        r.checks += 1;
        if a != b {
            let col = (0..m.width()).find(|&j| a.get(j) != b.get(j)).unwrap_or(0);
            r.failures.push(fail(m, col, format!("symbols differ for x = {x}")));
            break;
        }
    }
    r
}

/// Closed-form distances and profiles agree with literal scans of the matrix.
pub fn check_distances(m: &AirMatrix) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::DistanceScan);
    let chain = m.chain();
    for col in 0..m.width() {
        r.checks += 2;
        if down_distance(chain, col).ok() != scan::down_distance(m, col).ok() {
            r.failures.push(fail(m, col, "down distance differs from scan"));
        }
        if distance_profile(m, col).ok() != scan::distance_profile(m, col).ok() {
            r.failures.push(fail(m, col, "distance profile differs from scan"));
        }
    }
    for row in m.width()..m.height() {
        for col in m.row(row).iter_ones() {
            r.checks += 2;
            if up_distance(m, row, col) != scan::up_distance(m, row, col) {
                r.failures.push(fail(m, col, format!("up distance at row {row} differs from scan")));
            }
            if right_distance(m, row, col) != scan::right_distance(m, row, col) {
                r.failures.push(fail(m, col, format!("right distance at row {row} differs from scan")));
            }
        }
    }
    r
}

/// Plan invariants plus decode-after-encode using only `γ_k`.
pub fn check_round_trip(m: &AirMatrix, exhaustive_limit: usize, vectors: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::RoundTrip);
    for plan in all_plans(m) {
        r.checks += 1;
        if let Err(v) = check_plan(m, &plan) {
            r.failures.push(fail(m, plan.k, v.to_string()));
        }
    }
    let seed = seed ^ ((m.height() as u64) << 32 | m.chain().d() as u64);
    let report = verify_reduced_side_information(m, exhaustive_limit, vectors, seed);
    r.checks += report.decodes as u64;
    r.failures.extend(
        report.failures.into_iter().map(|(_, _, k)| fail(m, k, "decoding from gamma alone gave the wrong bit")),
    );
    r
}

fn run_one(m: &AirMatrix, opts: &VerifyOptions) -> Vec<SuiteReport> {
    opts.suites
        .iter()
        .map(|suite| match suite {
            Suite::AdjacencyRank => check_adjacency(m, &opts.fields),
            Suite::EncoderEquivalence => check_encoder(m, opts.encoder_vectors, opts.seed),
            Suite::DistanceScan => check_distances(m),
            Suite::RoundTrip => check_round_trip(m, opts.exhaustive_limit, opts.round_trip_vectors, opts.seed),
        })
        .collect()
}

/// Runs the selected suites over every `(K, D)` with `2 <= K <= max_k`.
/// Reports come back in `opts.suites` order with failures sorted.
pub fn run_suites(opts: &VerifyOptions) -> Vec<SuiteReport> {
    let pairs: Vec<(usize, usize)> = (2..=opts.max_k).flat_map(|k| (1..k).map(move |d| (k, d))).collect();
    let work = |&(k, d): &(usize, usize)| {
        let m = AirMatrix::from_params(k, d).expect("valid parameters");
        run_one(&m, opts)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<SuiteReport>> = {
        use rayon::prelude::*;
        pairs.par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<SuiteReport>> = pairs.iter().map(work).collect();

    let mut totals: Vec<SuiteReport> = opts.suites.iter().map(|&s| SuiteReport::new(s)).collect();
    for part in parts {
        for (total, r) in totals.iter_mut().zip(part) {
            total.absorb(r);
        }
    }
    for t in &mut totals {
        t.failures.sort();
    }
    totals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_range() {
        let opts = VerifyOptions { max_k: 14, ..VerifyOptions::default() };
        let reports = run_suites(&opts);
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.suite, r.failures);
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn adjacency_detects_dependent_window() {
        // Replace row 3 of L_{10×7} by row 0: the window at row 0 loses rank.
        let mut text: Vec<String> =
            AirMatrix::from_params(10, 3).unwrap().to_text().lines().map(String::from).collect();
        text[4] = text[1].clone();
        let bad: AirMatrix = text.join("\n").parse().unwrap();
        let r = check_adjacency(&bad, &[PrimeField::Gf2]);
        assert!(!r.passed());
        assert_eq!((r.failures[0].k, r.failures[0].d, r.failures[0].index), (10, 3, 0));
    }

    #[test]
    fn window_ranks_of_example() {
        let m = AirMatrix::from_params(13, 10).unwrap();
        for field in PrimeField::ALL {
            for s in 0..=10 {
                assert_eq!(window_rank(&m, s, field), 3);
            }
        }
    }

    #[test]
    fn failure_display() {
        let f = Failure { k: 5, d: 2, index: 1, detail: "x".into() };
        assert_eq!(f.to_string(), "K=5 D=2 k=1: x");
    }
}
