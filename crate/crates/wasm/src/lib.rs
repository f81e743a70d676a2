//! Browser bindings for the `ghzcomm` demo page.
//!
//! Every export returns a JSON string. The plain Rust functions underneath the
//! exports are usable (and tested) natively.

use ghzcomm::analysis::{noise_sweep, table1_reproduce};
use ghzcomm::quantum::{joint_distribution_analytic, joint_distribution_oracle, MeasurementSetting, NoisyGhz};
use ghzcomm::report::{SweepReport, Table1Dto};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest register the page may ask for; 2^10 outcomes still plot fine.
pub const MAX_DEMO_QUBITS: usize = 10;
/// The state-vector cross-check is skipped above this size.
const ORACLE_QUBITS: usize = 8;
const MAX_STEPS: usize = 1001;

#[derive(Serialize)]
pub struct DistributionView {
    pub k: usize,
    pub p: f64,
    pub setting: String,
    pub y_count: usize,
    pub probabilities: Vec<f64>,
    pub even_parity: f64,
    pub odd_parity: f64,
    /// Largest deviation from the state-vector simulation, when it was run.
    pub oracle_deviation: Option<f64>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn sweep(n: usize, steps: usize) -> Result<String, String> {
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must be between 2 and {MAX_STEPS}"));
    }
    let grid: Vec<f64> = (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect();
    let rows = noise_sweep(n, &grid).map_err(|e| e.to_string())?;
    to_json(&SweepReport::new(n, &rows).map_err(|e| e.to_string())?)
}

pub fn table1() -> Result<String, String> {
    let t = table1_reproduce().map_err(|e| e.to_string())?;
    to_json(&Table1Dto::from(&t))
}

pub fn distribution(k: usize, p: f64, y_mask: u32) -> Result<String, String> {
    if !(1..=MAX_DEMO_QUBITS).contains(&k) {
        return Err(format!("k must be between 1 and {MAX_DEMO_QUBITS}"));
    }
    let setting = MeasurementSetting::from_y_mask(k, u64::from(y_mask) & ((1 << k) - 1));
    let d = joint_distribution_analytic(k, p, &setting).map_err(|e| e.to_string())?;
    let oracle_deviation = if k <= ORACLE_QUBITS {
        let o = joint_distribution_oracle(NoisyGhz::new(k, p).map_err(|e| e.to_string())?, &setting)
            .map_err(|e| e.to_string())?;
        Some(d.max_abs_difference(&o))
    } else {
        None
    };
    to_json(&DistributionView {
        k,
        p,
        setting: setting.to_string(),
        y_count: setting.y_count(),
        even_parity: d.parity_probability(0),
        odd_parity: d.parity_probability(1),
        probabilities: d.probabilities().to_vec(),
        oracle_deviation,
    })
}

fn js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

/// Noise sweep over `steps` evenly spaced points of `[0, 1]`.
#[wasm_bindgen]
pub fn noise_sweep_json(n: usize, steps: usize) -> Result<String, JsError> {
    js(sweep(n, steps))
}

#[wasm_bindgen]
pub fn table1_json() -> Result<String, JsError> {
    js(table1())
}

/// Outcome distribution of a noisy `k`-qubit GHZ state; bit `j` of `y_mask`
/// selects Y (instead of X) on qubit `j`.
#[wasm_bindgen]
pub fn ghz_distribution_json(k: usize, p: f64, y_mask: u32) -> Result<String, JsError> {
    js(distribution(k, p, y_mask))
}
