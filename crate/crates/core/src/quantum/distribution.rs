use num_complex::Complex64;
use rand::Rng;

use super::state::{ghz_state, GhzSign, MeasurementSetting, NoisyGhz, Pauli, PureState};
use crate::error::{check_noise, Error, Result};

pub const MAX_ORACLE_QUBITS: usize = 12;
pub const MAX_ANALYTIC_QUBITS: usize = 24;

/// Pairwise summation: error grows with `log n` rather than `n`, which matters
/// for the `2^K` near-equal terms of a large register.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// Joint outcome probabilities, indexed by outcome word.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    qubits: usize,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, outcome: u64) -> f64 {
        self.probabilities[outcome as usize]
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.probabilities)
    }

    /// Probability that the XOR of all outcome bits equals `parity`.
    pub fn parity_probability(&self, parity: u8) -> f64 {
        let terms = self
            .probabilities
            .iter()
            .enumerate()
            .filter(|(o, _)| (o.count_ones() & 1) as u8 == parity & 1)
            .map(|(_, &p)| p)
            .collect::<Vec<_>>();
        pairwise_sum(&terms)
    }

    pub fn max_abs_difference(&self, other: &OutcomeDistribution) -> f64 {
        assert_eq!(self.qubits, other.qubits, "distributions over different qubit counts");
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn mixed_with_uniform(mut self, noise: f64) -> Self {
        let uniform = 1.0 / self.probabilities.len() as f64;
        for p in &mut self.probabilities {
            *p = (1.0 - noise) * *p + noise * uniform;
        }
        self
    }
}

/// States accepted by [`joint_distribution_oracle`].
#[derive(Clone, Copy, Debug)]
pub enum OracleState<'a> {
    Pure(&'a PureState),
    Noisy(NoisyGhz),
}

impl<'a> From<&'a PureState> for OracleState<'a> {
    fn from(s: &'a PureState) -> Self {
        OracleState::Pure(s)
    }
}

impl From<NoisyGhz> for OracleState<'_> {
    fn from(s: NoisyGhz) -> Self {
        OracleState::Noisy(s)
    }
}

/// Components of the local eigenvector for outcome bit `bit`.
fn eigenvector(basis: Pauli, bit: u64) -> [Complex64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if bit == 0 { 1.0 } else { -1.0 };
    match basis {
        Pauli::X => [Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0)],
        Pauli::Y => [Complex64::new(h, 0.0), Complex64::new(0.0, sign * h)],
    }
}

fn projector_distribution(state: &PureState, setting: &MeasurementSetting) -> OutcomeDistribution {
    let k = state.qubits();
    let dim = 1u64 << k;
    let vectors: Vec<[[Complex64; 2]; 2]> = setting
        .bases()
        .iter()
        .map(|&b| [eigenvector(b, 0), eigenvector(b, 1)])
        .collect();
    let probabilities = (0..dim)
        .map(|outcome| {
            // ⟨e_o|ψ⟩ with e_o the product of local eigenvectors.
            let overlap: Complex64 = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(basis, amp)| {
                    let component = (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| {
                        let v = vectors[j][((outcome >> j) & 1) as usize];
                        acc * v[(basis >> j) & 1]
                    });
                    component.conj() * amp
                })
                .sum();
            overlap.norm_sqr()
        })
        .collect();
    OutcomeDistribution {
        qubits: k,
        probabilities,
    }
}

/// Outcome statistics from explicit rank-one eigenprojectors of each local
/// Pauli. Costs `O(4^K)`; the reference for [`joint_distribution_analytic`].
pub fn joint_distribution_oracle<'a>(
    state: impl Into<OracleState<'a>>,
    setting: &MeasurementSetting,
) -> Result<OutcomeDistribution> {
    let state = state.into();
    let k = match state {
        OracleState::Pure(s) => s.qubits(),
        OracleState::Noisy(s) => s.qubits(),
    };
    if k > MAX_ORACLE_QUBITS {
        return Err(Error::QubitCount {
            k,
            max: MAX_ORACLE_QUBITS,
        });
    }
    if setting.qubits() != k {
        return Err(Error::DimensionMismatch {
            setting: setting.qubits(),
            state: k,
        });
    }
    Ok(match state {
        OracleState::Pure(s) => projector_distribution(s, setting),
        OracleState::Noisy(s) => {
            projector_distribution(&ghz_state(k, GhzSign::Plus)?, setting).mixed_with_uniform(s.noise())
        }
    })
}

/// `⟨σ_{b_0} ⊗ … ⊗ σ_{b_{K-1}}⟩` on `|G_K⟩`: `(−1)^{k/2}` for an even number
/// `k` of Y bases and 0 for odd `k`.
fn ghz_correlator(y_count: usize) -> f64 {
    match y_count % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

/// `P(o) = 2^-K · [1 + (1 − p)·(−1)^{⊕o}·c(k)]` for the noisy GHZ state.
///
/// Every proper subset of outcomes is uniform, so the full correlator is
/// the only nontrivial moment.
pub fn joint_distribution_analytic(
    k: usize,
    noise: f64,
    setting: &MeasurementSetting,
) -> Result<OutcomeDistribution> {
    if !(1..=MAX_ANALYTIC_QUBITS).contains(&k) {
        return Err(Error::QubitCount {
            k,
            max: MAX_ANALYTIC_QUBITS,
        });
    }
    check_noise(noise)?;
    if setting.qubits() != k {
        return Err(Error::DimensionMismatch {
            setting: setting.qubits(),
            state: k,
        });
    }
    let correlation = (1.0 - noise) * ghz_correlator(setting.y_count());
    let base = 1.0 / (1u64 << k) as f64;
    let probabilities = (0..1u64 << k)
        .map(|o| {
            let sign = if o.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            base * (1.0 + sign * correlation)
        })
        .collect();
    Ok(OutcomeDistribution {
        qubits: k,
        probabilities,
    })
}

/// Draws outcome words from the analytic distribution without materializing it.
///
/// The first `K − 1` bits are uniform; the last is set so that the total
/// parity is even with probability `(1 + (1 − p)·c(k)) / 2`.
#[derive(Clone, Copy, Debug)]
pub struct OutcomeSampler {
    qubits: usize,
    even_parity: f64,
}

impl OutcomeSampler {
    pub fn new(k: usize, noise: f64, y_count: usize) -> Result<Self> {
        if !(1..=64).contains(&k) {
            return Err(Error::QubitCount { k, max: 64 });
        }
        check_noise(noise)?;
        Ok(Self {
            qubits: k,
            even_parity: 0.5 * (1.0 + (1.0 - noise) * ghz_correlator(y_count)),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let free = self.qubits - 1;
        let low = if free == 0 { 0 } else { rng.gen::<u64>() >> (64 - free) };
        let want_odd = !rng.gen_bool(self.even_parity.clamp(0.0, 1.0));
        let last = u64::from((low.count_ones() % 2 == 1) != want_odd);
        low | (last << free)
    }
}
