//! Classical bounds, noise thresholds and the two-sender optimum table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_noise, check_party_count, Result};
use crate::exact::to_f64;
use crate::strategy::{classical_optimum, optimal_decoding_for_encodings, TwoBitBoolean, MAX_SEARCH_SENDERS};
use crate::task::MIN_SENDERS;
use crate::Fraction;

/// Largest `n` for which the closed-form thresholds are exact in `u64`.
pub const MAX_THRESHOLD_SENDERS: usize = 62;

/// Upper bound on classical success with one-bit channels, for every `n`.
pub fn classical_upper_bound() -> Fraction {
    Fraction::new(3, 4)
}

/// Classical success of the `(n+1)`-player Mermin game, `1/2 + 2^-⌈(n+1)/2⌉`,
/// a lower bound on the one-bit classical optimum.
pub fn mermin_lower_bound(n: usize) -> Result<Fraction> {
    check_party_count(n, MIN_SENDERS, MAX_THRESHOLD_SENDERS)?;
    let exponent = (n + 2) / 2;
    Ok(Fraction::new(1, 2) + Fraction::new(1, 1u64 << exponent))
}

fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

/// The variant `1/2 + 1/⌈2^{(n+1)/2}⌉`, kept for diagnostics. It exceeds the
/// 3/4 upper bound at `n = 2` and is not used as a bound.
pub fn mermin_lower_bound_printed(n: usize) -> Result<Fraction> {
    check_party_count(n, MIN_SENDERS, MAX_THRESHOLD_SENDERS)?;
    Ok(Fraction::new(1, 2) + Fraction::new(1, ceil_sqrt(1u64 << (n + 1))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRecord {
    pub n: usize,
    pub lower: Fraction,
    pub upper: Fraction,
    pub tight: bool,
}

pub fn classical_bounds(n: usize) -> Result<BoundsRecord> {
    let lower = mermin_lower_bound(n)?;
    let upper = classical_upper_bound();
    Ok(BoundsRecord {
        n,
        lower,
        upper,
        tight: lower == upper,
    })
}

/// `(2 − p)/2`.
pub fn quantum_success(n: usize, noise: f64) -> Result<f64> {
    check_party_count(n, MIN_SENDERS, usize::MAX)?;
    check_noise(noise)?;
    Ok((2.0 - noise) / 2.0)
}

/// The noise level at which `(2 − p)/2` meets the classical upper bound.
pub fn advantage_threshold(n: usize) -> Result<Fraction> {
    check_party_count(n, MIN_SENDERS, usize::MAX)?;
    Ok(Fraction::from_integer(2) * (Fraction::from_integer(1) - classical_upper_bound()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparabilityThresholds {
    /// `1/(1 + 2^-n)`: fully separable for `p` at or above this.
    pub full_separable: Fraction,
    /// `1/(2 − 2^-n)`: genuinely multipartite entangled below this.
    pub genuine: Fraction,
}

pub fn separability_thresholds(n: usize) -> Result<SeparabilityThresholds> {
    check_party_count(n, MIN_SENDERS, MAX_THRESHOLD_SENDERS)?;
    let pow = 1u64 << n;
    Ok(SeparabilityThresholds {
        full_separable: Fraction::new(pow, pow + 1),
        genuine: Fraction::new(pow, 2 * pow - 1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntanglementClass {
    #[serde(rename = "genuinely entangled")]
    Genuine,
    #[serde(rename = "intermediate/biseparable")]
    Intermediate,
    #[serde(rename = "fully separable")]
    FullySeparable,
}

impl EntanglementClass {
    pub fn classify(n: usize, noise: f64) -> Result<Self> {
        check_noise(noise)?;
        let t = separability_thresholds(n)?;
        Ok(if noise < to_f64(t.genuine) {
            EntanglementClass::Genuine
        } else if noise < to_f64(t.full_separable) {
            EntanglementClass::Intermediate
        } else {
            EntanglementClass::FullySeparable
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            EntanglementClass::Genuine => "genuinely entangled",
            EntanglementClass::Intermediate => "intermediate/biseparable",
            EntanglementClass::FullySeparable => "fully separable",
        }
    }
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One `(n, p)` point of the noise analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub quantum_success: f64,
    pub classical_upper: Fraction,
    /// `quantum_success > classical_upper`.
    pub advantage: bool,
    /// Against the searched optimum, when one was supplied.
    pub advantage_vs_optimum: Option<bool>,
    pub entanglement_class: EntanglementClass,
}

/// Sweep against the upper bound, plus the searched optimum for `n ≤ 6`.
pub fn noise_sweep(n: usize, grid: &[f64]) -> Result<Vec<SweepRow>> {
    let searched = if n <= MAX_SEARCH_SENDERS {
        Some(classical_optimum(n)?.optimum)
    } else {
        None
    };
    noise_sweep_against(n, grid, searched)
}

/// Like [`noise_sweep`] with a caller-supplied classical optimum, if any.
pub fn noise_sweep_against(n: usize, grid: &[f64], searched: Option<Fraction>) -> Result<Vec<SweepRow>> {
    let upper = classical_upper_bound();
    grid.iter()
        .map(|&p| {
            let quantum = quantum_success(n, p)?;
            Ok(SweepRow {
                n,
                p,
                quantum_success: quantum,
                classical_upper: upper,
                advantage: quantum > to_f64(upper),
                advantage_vs_optimum: searched.map(|opt| quantum > to_f64(opt)),
                entanglement_class: EntanglementClass::classify(n, p)?,
            })
        })
        .collect()
}

/// Row and column order of the published table.
pub const TABLE1_ORDER: [u8; 8] = [0, 8, 4, 12, 14, 2, 6, 10];

/// Published success values in eighths, rows `E_1`, columns `E_2`, in [`TABLE1_ORDER`].
pub const TABLE1_EXPECTED_EIGHTHS: [[u64; 8]; 8] = [
    [4, 4, 4, 4, 4, 4, 4, 4],
    [4, 4, 4, 4, 4, 4, 4, 4],
    [4, 4, 6, 6, 6, 6, 6, 6],
    [4, 4, 6, 6, 6, 6, 6, 6],
    [4, 4, 6, 6, 5, 5, 5, 5],
    [4, 4, 6, 6, 5, 5, 5, 5],
    [4, 4, 6, 6, 5, 5, 5, 5],
    [4, 4, 6, 6, 5, 5, 5, 5],
];

/// Published decoding pairs `(D_0, D_1)` for each cell. Optimal decodings
/// are not unique; these are one valid choice per cell.
pub const TABLE1_PUBLISHED_DECODINGS: [[(u8, u8); 8]; 8] = [
    [(0, 0); 8],
    [(0, 0); 8],
    [(0, 0), (0, 0), (0, 13), (12, 0), (12, 13), (13, 13), (12, 13), (12, 12)],
    [(0, 0), (0, 0), (12, 0), (0, 12), (12, 12), (12, 13), (12, 12), (13, 12)],
    [(0, 0), (0, 0), (12, 13), (12, 12), (12, 0), (0, 13), (12, 0), (0, 12)],
    [(0, 0), (0, 0), (13, 13), (12, 13), (0, 13), (13, 0), (0, 13), (12, 0)],
    [(0, 0), (0, 0), (12, 13), (12, 12), (12, 0), (0, 13), (12, 0), (0, 12)],
    [(0, 0), (0, 0), (12, 12), (13, 12), (0, 12), (12, 0), (0, 12), (13, 0)],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Cell {
    pub e1: TwoBitBoolean,
    pub e2: TwoBitBoolean,
    pub d0: TwoBitBoolean,
    pub d1: TwoBitBoolean,
    pub success: Fraction,
    pub expected: Fraction,
    /// The cell attains 3/4.
    pub highlight: bool,
}

impl Table1Cell {
    pub fn matches(&self) -> bool {
        self.success == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Report {
    /// `rows[i][j]` holds encodings `(TABLE1_ORDER[i], TABLE1_ORDER[j])`.
    pub rows: Vec<Vec<Table1Cell>>,
}

impl Table1Report {
    pub fn cells(&self) -> impl Iterator<Item = &Table1Cell> {
        self.rows.iter().flatten()
    }

    pub fn mismatches(&self) -> Vec<&Table1Cell> {
        self.cells().filter(|c| !c.matches()).collect()
    }

    pub fn all_match(&self) -> bool {
        self.cells().all(Table1Cell::matches)
    }
}

/// Majority-optimal decodings for all 64 even encoding pairs.
pub fn table1_reproduce() -> Result<Table1Report> {
    let mut rows = Vec::with_capacity(8);
    for (i, &p) in TABLE1_ORDER.iter().enumerate() {
        let mut row = Vec::with_capacity(8);
        for (j, &q) in TABLE1_ORDER.iter().enumerate() {
            let (e1, e2) = (TwoBitBoolean::from_index(p)?, TwoBitBoolean::from_index(q)?);
            let (strategy, success) = optimal_decoding_for_encodings(2, &[e1, e2])?;
            let (d0, d1) = strategy
                .two_sender_decoders()
                .expect("two-sender strategy");
            row.push(Table1Cell {
                e1,
                e2,
                d0,
                d1,
                success,
                expected: Fraction::new(TABLE1_EXPECTED_EIGHTHS[i][j], 8),
                highlight: success == classical_upper_bound(),
            });
        }
        rows.push(row);
    }
    Ok(Table1Report { rows })
}
