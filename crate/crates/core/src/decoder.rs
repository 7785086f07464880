//! Per-receiver decoding plans: which broadcast symbols receiver `R_k` adds
//! and which of its side-information messages it needs (`γ_k`).
//!
//! Receivers fall into four cases by the position of `k`:
//!
//! | case | `k` in | broadcasts used |
//! |------|--------|-----------------|
//! | I    | `D_i` | `c_k, c_{k+μ_k}` |
//! | II   | `E_i`, `i < ⌈l/2⌉` | `c_k, c_{k+t_{k,1}}, …, c_{k+t_{k,p_k}}, c_{k+μ_k}` |
//! | III  | `[K−D−λ_l, K−D)` | `c_k` |
//! | IV   | `[K−D, K)` | `c_{k mod (K−D)}` |
//!
//! `γ_k` is read off the XOR of the selected matrix columns: every message
//! index left with odd multiplicity, other than `k` itself.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::air::AirMatrix;
use crate::chain::ColumnPart;
use crate::encoder::{boolean_terms, cancel_pairs, encode_matrix, Codeword, MessageVector};
use crate::error::{Error, Result};
use crate::ff_matrix::BitVector;
use crate::geometry::{distance_profile, down_distance, DistanceProfile};

/// Decoding case of a receiver; the payload is the column interval index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodeCase {
    CaseI(usize),
    CaseII(usize),
    CaseIII,
    CaseIV,
}

impl fmt::Display for DecodeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeCase::CaseI(i) => write!(f, "I({i})"),
            DecodeCase::CaseII(i) => write!(f, "II({i})"),
            DecodeCase::CaseIII => f.write_str("III"),
            DecodeCase::CaseIV => f.write_str("IV"),
        }
    }
}

/// Precomputed decoding recipe for one receiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodePlan {
    pub k: usize,
    pub case: DecodeCase,
    /// Absent for case IV receivers.
    pub profile: Option<DistanceProfile>,
    /// Ascending broadcast indices to add.
    pub broadcasts: Vec<usize>,
    /// Ascending side-information indices to add.
    pub gamma: Vec<usize>,
    /// For each used broadcast, the side-information indices it contributes.
    pub nu_terms: Vec<(usize, Vec<usize>)>,
}

/// `true` when `index` is in receiver `k`'s window `{k+1, …, k+D}` mod `K`.
pub fn in_window(k: usize, index: usize, big_k: usize, d: usize) -> bool {
    let offset = (index + big_k - k) % big_k;
    (1..=d).contains(&offset)
}

/// Builds receiver `k`'s plan.
pub fn build_plan(m: &AirMatrix, k: usize) -> Result<DecodePlan> {
    let chain = m.chain();
    let n = chain.n();
    if k >= chain.k() {
        return Err(Error::OutOfRange { index: k, limit: chain.k() });
    }
    let (case, profile, mut broadcasts) = if k >= n {
        (DecodeCase::CaseIV, None, vec![k % n])
    } else if k >= chain.tail_start() {
        (DecodeCase::CaseIII, Some(distance_profile(m, k)?), vec![k])
    } else {
        let profile = distance_profile(m, k)?;
        let mu = profile.mu.expect("mu is defined below the tail");
        let (i, part) = chain.locate_column(k)?;
        match part {
            ColumnPart::D => (DecodeCase::CaseI(i), Some(profile), vec![k, k + mu]),
            ColumnPart::E => {
                let mut b = vec![k];
                b.extend(profile.t.iter().map(|t| k + t));
                b.push(k + mu);
                (DecodeCase::CaseII(i), Some(profile), b)
            }
        }
    };
    broadcasts.sort_unstable();
    broadcasts.dedup();

    let mut all: Vec<usize> = Vec::new();
    for &b in &broadcasts {
        all.extend_from_slice(m.column_support(b)?);
    }
    all.sort_unstable();
    let survivors = cancel_pairs(all);
    let gamma: Vec<usize> = survivors.iter().copied().filter(|&i| i != k).collect();
    let nu_terms = broadcasts
        .iter()
        .map(|&b| {
            let terms = m
                .column_support(b)
                .expect("broadcast index in range")
                .iter()
                .copied()
                .filter(|i| gamma.binary_search(i).is_ok())
                .collect();
            (b, terms)
        })
        .collect();

    Ok(DecodePlan { k, case, profile, broadcasts, gamma, nu_terms })
}

/// One plan per receiver, in receiver order.
pub fn all_plans(m: &AirMatrix) -> Vec<DecodePlan> {
    (0..m.height()).map(|k| build_plan(m, k).expect("k < K")).collect()
}

/// A plan invariant that does not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanViolation {
    BroadcastCount { expected: usize, actual: usize },
    OutsideWindow { index: usize },
    SupportMismatch { missing_target: bool },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanViolation::BroadcastCount { expected, actual } => {
                write!(f, "uses {actual} broadcasts, expected {expected}")
            }
            PlanViolation::OutsideWindow { index } => {
                write!(f, "side-information index {index} is outside the receiver's window")
            }
            PlanViolation::SupportMismatch { missing_target } => {
                if *missing_target {
                    f.write_str("combined columns do not contain the wanted message")
                } else {
                    f.write_str("combined columns differ from {k} ∪ gamma")
                }
            }
        }
    }
}

/// Checks a plan against the matrix: broadcast-count law, window containment
/// of `γ_k`, and that the selected columns XOR to exactly `{k} ∪ γ_k`.
pub fn check_plan(m: &AirMatrix, plan: &DecodePlan) -> std::result::Result<(), PlanViolation> {
    let chain = m.chain();
    let expected = match plan.case {
        DecodeCase::CaseI(_) | DecodeCase::CaseII(_) => plan.profile.as_ref().map_or(0, DistanceProfile::p) + 2,
        DecodeCase::CaseIII | DecodeCase::CaseIV => 1,
    };
    if plan.broadcasts.len() != expected {
        return Err(PlanViolation::BroadcastCount { expected, actual: plan.broadcasts.len() });
    }
    if let Some(&index) = plan.gamma.iter().find(|&&i| !in_window(plan.k, i, chain.k(), chain.d())) {
        return Err(PlanViolation::OutsideWindow { index });
    }
    let mut combined = BitVector::zeros(chain.k());
    for &b in &plan.broadcasts {
        for &r in m.column_support(b).expect("broadcast index in range") {
            combined.flip(r);
        }
    }
    if !combined.get(plan.k) {
        return Err(PlanViolation::SupportMismatch { missing_target: true });
    }
    let mut expect = plan.gamma.clone();
    expect.push(plan.k);
    expect.sort_unstable();
    if combined.support() != expect {
        return Err(PlanViolation::SupportMismatch { missing_target: false });
    }
    Ok(())
}

/// Source of side-information bits for a receiver.
pub trait SideInformation {
    fn side_bit(&self, index: usize) -> Option<bool>;
}

impl SideInformation for BTreeMap<usize, bool> {
    fn side_bit(&self, index: usize) -> Option<bool> {
        self.get(&index).copied()
    }
}

impl SideInformation for HashMap<usize, bool> {
    fn side_bit(&self, index: usize) -> Option<bool> {
        self.get(&index).copied()
    }
}

/// Full knowledge of the message vector; used by simulations.
impl SideInformation for MessageVector {
    fn side_bit(&self, index: usize) -> Option<bool> {
        (index < self.len()).then(|| self.get(index))
    }
}

/// XOR of the plan's broadcast bits and the side-information bits at `γ_k`.
pub fn decode<S: SideInformation + ?Sized>(plan: &DecodePlan, c: &Codeword, side: &S) -> Result<bool> {
    let mut bit = false;
    for &b in &plan.broadcasts {
        if b >= c.len() {
            return Err(Error::OutOfRange { index: b, limit: c.len() });
        }
        bit ^= c.get(b);
    }
    for &i in &plan.gamma {
        bit ^= side.side_bit(i).ok_or(Error::MissingSideInformation { index: i })?;
    }
    Ok(bit)
}

/// Side-information terms assembled from the closed forms alone: each used
/// broadcast symbol's closed-form support minus the wanted message and the
/// interfering messages that cancel between symbols.
///
/// * case I: `ν_k = c_k ∖ {x_k, x_{k+d}}`, `ν_{k+μ} = c_{k+μ} ∖ {x_{k+d}}`
/// * case II: as case I, plus `ν_{k+t} = c_{k+t} ∖ {x_{k+t+d(k+t)}}` and those
///   interferers also removed from `ν_{k+μ}`
/// * cases III/IV: the used symbol minus `x_k`
///
/// where `d = d_down(k)`. Returns `(broadcast, ν)` pairs in broadcast order.
pub fn closed_form_nu(m: &AirMatrix, k: usize) -> Result<Vec<(usize, Vec<usize>)>> {
    let chain = m.chain();
    let n = chain.n();
    let strip = |col: usize, remove: &[usize]| -> Result<Vec<usize>> {
        let terms = boolean_terms(chain, col)?;
        for r in remove {
            if !terms.contains(r) {
                // the interferer the closed form expects to cancel is absent
                return Err(Error::ZeroCell { row: *r, col });
            }
        }
        let mut kept: Vec<usize> = terms.into_iter().filter(|t| !remove.contains(t)).collect();
        kept.sort_unstable();
        Ok(kept)
    };
    if k >= chain.k() {
        return Err(Error::OutOfRange { index: k, limit: chain.k() });
    }
    if k >= n {
        return Ok(vec![(k % n, strip(k % n, &[k])?)]);
    }
    if k >= chain.tail_start() {
        return Ok(vec![(k, strip(k, &[k])?)]);
    }
    let profile = distance_profile(m, k)?;
    let mu = profile.mu.expect("mu is defined below the tail");
    let anchor = k + profile.d_down;
    let mut out = vec![(k, strip(k, &[k, anchor])?)];
    let mut mu_remove = vec![anchor];
    for &t in &profile.t {
        let col = k + t;
        let inter = col + down_distance(chain, col)?;
        out.push((col, strip(col, &[inter])?));
        mu_remove.push(inter);
    }
    out.push((k + mu, strip(k + mu, &mu_remove)?));
    Ok(out)
}

/// The message vector seen through a receiver's `γ_k`: every other index
/// reads as unknown.
pub struct GammaOnly<'a> {
    pub x: &'a MessageVector,
    pub gamma: &'a [usize],
}

impl SideInformation for GammaOnly<'_> {
    fn side_bit(&self, index: usize) -> Option<bool> {
        self.gamma.binary_search(&index).ok().map(|_| self.x.get(index))
    }
}

/// Outcome of decoding every receiver from `γ_k` alone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReducedSideInfoReport {
    pub vectors: usize,
    pub decodes: usize,
    /// `(K, D, k)` of each failing receiver, reported once.
    pub failures: Vec<(usize, usize, usize)>,
}

impl ReducedSideInfoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Encodes message vectors and decodes every receiver using a side map that
/// holds only `γ_k`. Exhaustive when `K <= exhaustive_limit`, otherwise
/// `random_vectors` seeded draws.
pub fn verify_reduced_side_information(
    m: &AirMatrix,
    exhaustive_limit: usize,
    random_vectors: usize,
    seed: u64,
) -> ReducedSideInfoReport {
    let k = m.height();
    let plans = all_plans(m);
    let mut report = ReducedSideInfoReport::default();
    let mut failed = vec![false; k];
    let mut check = |x: &MessageVector, report: &mut ReducedSideInfoReport| {
        let c = encode_matrix(m, x).expect("length matches");
        for plan in &plans {
            let side = GammaOnly { x, gamma: &plan.gamma };
            let ok = decode(plan, &c, &side).map(|b| b == x.get(plan.k)).unwrap_or(false);
            report.decodes += 1;
            if !ok && !failed[plan.k] {
                failed[plan.k] = true;
                report.failures.push((k, m.chain().d(), plan.k));
            }
        }
        report.vectors += 1;
    };
    if k <= exhaustive_limit && k < 64 {
        for word in 0..(1u64 << k) {
            check(&MessageVector(BitVector::from_u64(k, word)), &mut report);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_vectors {
            let x = MessageVector(BitVector::from_bits((0..k).map(|_| rng.random::<bool>())));
            check(&x, &mut report);
        }
    }
    report
}

/// Machine-readable row of a plan table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub k: usize,
    pub case: String,
    pub d_down: Option<usize>,
    pub mu: Option<usize>,
    pub p: Option<usize>,
    pub t: Vec<usize>,
    pub broadcasts: Vec<usize>,
    pub gamma: Vec<usize>,
}

impl From<&DecodePlan> for PlanRecord {
    fn from(plan: &DecodePlan) -> Self {
        let profile = plan.profile.as_ref();
        PlanRecord {
            k: plan.k,
            case: plan.case.to_string(),
            d_down: profile.map(|p| p.d_down),
            mu: profile.and_then(|p| p.mu),
            p: profile.map(DistanceProfile::p),
            t: profile.map(|p| p.t.clone()).unwrap_or_default(),
            broadcasts: plan.broadcasts.clone(),
            gamma: plan.gamma.clone(),
        }
    }
}

/// Aligned text table with one row per plan, laid out as
/// `R_k | W_k | d_down | mu | p | t | broadcasts | gamma`.
pub fn render_plan_table(plans: &[DecodePlan]) -> String {
    let dash = || "-".to_string();
    let list = |prefix: &str, v: &[usize]| v.iter().map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(",");
    let mut rows: Vec<[String; 8]> = vec![[
        "R".into(),
        "W".into(),
        "d_down".into(),
        "mu".into(),
        "p".into(),
        "t".into(),
        "broadcasts".into(),
        "gamma".into(),
    ]];
    for plan in plans {
        let (d_down, mu, p, t) = match &plan.profile {
            None => (dash(), dash(), dash(), dash()),
            Some(pr) => (
                pr.d_down.to_string(),
                pr.mu.map_or_else(dash, |m| m.to_string()),
                pr.p().to_string(),
                if pr.t.is_empty() {
                    "0".into()
                } else {
                    pr.t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                },
            ),
        };
        rows.push([
            format!("R{}", plan.k),
            format!("x{}", plan.k),
            d_down,
            mu,
            p,
            t,
            list("c", &plan.broadcasts),
            list("x", &plan.gamma),
        ]);
    }
    let widths: Vec<usize> = (0..8).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, &w)| format!("{cell:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
