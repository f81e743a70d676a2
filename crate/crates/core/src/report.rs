//! Machine-readable reports shared by the command-line tool and the browser demo.
//!
//! Every report carries `schema_version`; exact ratios appear as
//! [`ExactValue`] (`"num/den"` plus a decimal).

use serde::{Deserialize, Serialize};

use crate::analysis::{
    classical_bounds, mermin_lower_bound_printed, separability_thresholds, SweepRow, Table1Report,
};
use crate::checks::CheckResult;
use crate::quantum::{PropertyRow, SampledEstimate};
use crate::strategy::{Cc2Strategy, GeneralStrategy, SearchReport};
use crate::{ExactValue, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    pub schema_version: u32,
    pub n: usize,
    pub p: f64,
    pub exact_success: f64,
    pub sampled: Option<SampledEstimate>,
}

impl QuantumReport {
    pub fn new(n: usize, p: f64, exact_success: f64, sampled: Option<SampledEstimate>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n,
            p,
            exact_success,
            sampled,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    /// Encoding indices `m` of `g^m`, one per sender.
    pub encodings: Vec<u8>,
    /// For two senders, the decoding functions `(D_0, D_1)` as indices.
    pub decoders: Option<[u8; 2]>,
    /// Decoding tables for `y⁰ = 0` and `y⁰ = 1`, indexed by message word.
    pub tables: [String; 2],
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

impl From<&GeneralStrategy> for WitnessDto {
    fn from(s: &GeneralStrategy) -> Self {
        Self {
            encodings: s.encodings().iter().map(|e| e.index()).collect(),
            decoders: s.two_sender_decoders().map(|(a, b)| [a.index(), b.index()]),
            tables: [bit_string(s.decoding(0)), bit_string(s.decoding(1))],
        }
    }
}

impl From<&Cc2Strategy> for WitnessDto {
    fn from(s: &Cc2Strategy) -> Self {
        WitnessDto::from(&GeneralStrategy::from(*s))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub schema_version: u32,
    pub n: usize,
    /// `"all-strategies"` for the two-sender full search, otherwise
    /// `"even-encodings-majority-decoding"`.
    pub search: String,
    pub optimum: ExactValue,
    pub perfect_strategy_found: bool,
    pub strategies_examined: u64,
    pub optimal_count: u64,
    pub lower_bound: ExactValue,
    pub lower_bound_printed_variant: ExactValue,
    pub upper_bound: ExactValue,
    pub witnesses: Vec<WitnessDto>,
}

impl ClassicalReport {
    pub fn new<S>(n: usize, search: &str, report: &SearchReport<S>) -> Result<Self>
    where
        for<'a> WitnessDto: From<&'a S>,
    {
        let bounds = classical_bounds(n)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            n,
            search: search.to_string(),
            optimum: report.optimum.into(),
            perfect_strategy_found: *report.optimum.numer() == *report.optimum.denom(),
            strategies_examined: report.examined,
            optimal_count: report.optimal_count,
            lower_bound: bounds.lower.into(),
            lower_bound_printed_variant: mermin_lower_bound_printed(n)?.into(),
            upper_bound: bounds.upper.into(),
            witnesses: report.witnesses.iter().map(WitnessDto::from).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRowDto {
    pub n: usize,
    pub p: f64,
    pub quantum_success: f64,
    pub classical_upper: ExactValue,
    pub advantage: bool,
    pub advantage_vs_optimum: Option<bool>,
    pub entanglement_class: String,
}

impl From<&SweepRow> for SweepRowDto {
    fn from(r: &SweepRow) -> Self {
        Self {
            n: r.n,
            p: r.p,
            quantum_success: r.quantum_success,
            classical_upper: r.classical_upper.into(),
            advantage: r.advantage,
            advantage_vs_optimum: r.advantage_vs_optimum,
            entanglement_class: r.entanglement_class.label().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub n: usize,
    pub genuine_threshold: ExactValue,
    pub full_separable_threshold: ExactValue,
    pub rows: Vec<SweepRowDto>,
}

impl SweepReport {
    pub fn new(n: usize, rows: &[SweepRow]) -> Result<Self> {
        let t = separability_thresholds(n)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            n,
            genuine_threshold: t.genuine.into(),
            full_separable_threshold: t.full_separable.into(),
            rows: rows.iter().map(SweepRowDto::from).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1CellDto {
    pub e1: u8,
    pub e2: u8,
    pub d0: u8,
    pub d1: u8,
    pub success: ExactValue,
    pub expected: ExactValue,
    pub highlight: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Dto {
    pub schema_version: u32,
    pub order: Vec<u8>,
    pub all_match: bool,
    pub rows: Vec<Vec<Table1CellDto>>,
}

impl From<&Table1Report> for Table1Dto {
    fn from(t: &Table1Report) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            order: crate::analysis::TABLE1_ORDER.to_vec(),
            all_match: t.all_match(),
            rows: t
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| Table1CellDto {
                            e1: c.e1.index(),
                            e2: c.e2.index(),
                            d0: c.d0.index(),
                            d1: c.d1.index(),
                            success: c.success.into(),
                            expected: c.expected.into(),
                            highlight: c.highlight,
                            matches: c.matches(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub ghz_table: Option<Vec<PropertyRow>>,
}

impl VerifyReport {
    pub fn new(checks: Vec<CheckResult>, ghz_table: Option<Vec<PropertyRow>>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            passed: checks.iter().all(|c| c.passed),
            checks,
            ghz_table,
        }
    }
}
