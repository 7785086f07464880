//! Browser bindings for the `aircode` demo page.
//!
//! Every export returns a JSON string. The plain `*_json` functions hold the
//! logic so they can be tested natively; the `wasm_bindgen` wrappers only turn
//! errors into JavaScript exceptions.

use aircode::air::{block_cols, block_rows, blocks};
use aircode::channel::parse_snr_grid;
use aircode::decoder::PlanRecord;
use aircode::{all_plans, build_plan, decode, encode_matrix, run_sweep};
use aircode::{AirMatrix, ChannelModel, MessageVector};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest K the page will render.
pub const MAX_K: usize = 256;
/// Upper bound on trials per SNR point, so a sweep cannot hang the tab.
pub const MAX_TRIALS: u64 = 200_000;

#[derive(Serialize)]
struct BlockView {
    name: String,
    rows: [usize; 2],
    cols: [usize; 2],
}

#[derive(Serialize)]
struct CodeView {
    k: usize,
    d: usize,
    n: usize,
    lambdas: Vec<usize>,
    betas: Vec<usize>,
    capacity: String,
    rows: Vec<String>,
    blocks: Vec<BlockView>,
    plans: Vec<PlanRecord>,
}

#[derive(Serialize)]
struct DecodeView {
    codeword: String,
    plan: PlanRecord,
    side: Vec<(usize, u8)>,
    decoded: u8,
    sent: u8,
}

#[derive(Serialize)]
struct GroupCurve {
    broadcasts: usize,
    receivers: Vec<usize>,
    ber: Vec<f64>,
}

#[derive(Serialize)]
struct SweepView {
    model: String,
    snr_db: Vec<f64>,
    trials: u64,
    groups: Vec<GroupCurve>,
}

fn matrix(k: usize, d: usize) -> Result<AirMatrix, String> {
    if k > MAX_K {
        return Err(format!("K is limited to {MAX_K} in the demo"));
    }
    AirMatrix::from_params(k, d).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Chain, matrix rows, block layout and every receiver's plan.
pub fn code_json(k: usize, d: usize) -> Result<String, String> {
    let m = matrix(k, d)?;
    let chain = m.chain();
    let view = CodeView {
        k,
        d,
        n: chain.n(),
        lambdas: chain.lambdas().to_vec(),
        betas: chain.betas().to_vec(),
        capacity: format!("1/{}", chain.n()),
        rows: m.to_text().lines().skip(1).map(str::to_owned).collect(),
        blocks: blocks(chain)
            .into_iter()
            .map(|b| {
                let (r, c) = (block_rows(chain, b), block_cols(chain, b));
                BlockView { name: b.to_string(), rows: [r.start, r.end], cols: [c.start, c.end] }
            })
            .collect(),
        plans: all_plans(&m).iter().map(PlanRecord::from).collect(),
    };
    to_json(&view)
}

/// Encodes `messages` (character i is x_i) and decodes `receiver`'s message
/// from the codeword and only the side-information its plan names.
pub fn decode_json(k: usize, d: usize, messages: &str, receiver: usize) -> Result<String, String> {
    let m = matrix(k, d)?;
    let x = MessageVector::parse(messages).map_err(|e| e.to_string())?;
    let c = encode_matrix(&m, &x).map_err(|e| e.to_string())?;
    let plan = build_plan(&m, receiver).map_err(|e| e.to_string())?;
    let side: Vec<(usize, bool)> = plan.gamma.iter().map(|&i| (i, x.get(i))).collect();
    let side_map: std::collections::BTreeMap<usize, bool> = side.iter().copied().collect();
    let decoded = decode(&plan, &c, &side_map).map_err(|e| e.to_string())?;
    to_json(&DecodeView {
        codeword: c.to_string(),
        plan: PlanRecord::from(&plan),
        side: side.into_iter().map(|(i, b)| (i, u8::from(b))).collect(),
        decoded: u8::from(decoded),
        sent: u8::from(x.get(receiver)),
    })
}

/// BER per receiver group over an SNR grid (`a:b:step` or one value).
pub fn sweep_json(k: usize, d: usize, channel: &str, snr: &str, trials: u64, seed: u64) -> Result<String, String> {
    let m = matrix(k, d)?;
    let model: ChannelModel = channel.parse().map_err(|e: aircode::Error| e.to_string())?;
    let grid = parse_snr_grid(snr).map_err(|e| e.to_string())?;
    let trials = trials.min(MAX_TRIALS);
    let report = run_sweep(&m, &all_plans(&m), model, &grid, trials, seed).map_err(|e| e.to_string())?;
    let groups = report
        .grouping
        .iter()
        .map(|g| GroupCurve {
            broadcasts: g.broadcasts,
            receivers: g.receivers.clone(),
            ber: (0..report.points.len()).map(|i| report.pooled(i, &g.receivers).ber()).collect(),
        })
        .collect();
    to_json(&SweepView { model: model.describe(), snr_db: grid, trials, groups })
}

#[wasm_bindgen(js_name = codeJson)]
pub fn code_js(k: usize, d: usize) -> Result<String, JsError> {
    code_json(k, d).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decodeJson)]
pub fn decode_js(k: usize, d: usize, messages: &str, receiver: usize) -> Result<String, JsError> {
    decode_json(k, d, messages, receiver).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sweepJson)]
pub fn sweep_js(k: usize, d: usize, channel: &str, snr: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    sweep_json(k, d, channel, snr, u64::from(trials), u64::from(seed)).map_err(|e| JsError::new(&e))
}
