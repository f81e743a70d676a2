//! The entanglement-assisted protocol.
//!
//! Every party measures its GHZ qubit in X (first bit 0) or Y (first bit 1).
//! Sender `i` transmits `c_i = o_i ⊕ x¹_i`; Bob outputs `c_1 ⊕ … ⊕ c_n ⊕ y¹ ⊕ o_B`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::distribution::{joint_distribution_analytic, pairwise_sum, OutcomeSampler};
use super::state::MeasurementSetting;
use crate::error::{check_noise, check_party_count, Error, Result};
use crate::task::{target_function, TaskInstance, TwoBits, MAX_SENDERS, MIN_SENDERS};

pub const MAX_PROTOCOL_SENDERS: usize = MAX_SENDERS;

/// Shots drawn from one `(seed, stream)` generator. Fixed, so the estimate
/// does not depend on how streams are scheduled onto threads.
pub const SHOTS_PER_STREAM: u64 = 1 << 14;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Bob's output given the joint outcome word (senders at bits `0..n`, Bob at bit `n`).
fn bob_output(inst: &TaskInstance, outcome: u64) -> u8 {
    let n = inst.senders();
    let messages = inst
        .alice_inputs()
        .enumerate()
        .fold(0u8, |acc, (i, x)| acc ^ (((outcome >> i) & 1) as u8 ^ x.second()));
    messages ^ inst.bob().second() ^ ((outcome >> n) & 1) as u8
}

/// The instance whose first `y_count` parties (senders first, then Bob)
/// hold first bit 1, with every second bit 0.
fn representative(n: usize, y_count: usize) -> TaskInstance {
    let alice: Vec<_> = (0..n)
        .map(|i| TwoBits::new(u8::from(i < y_count), 0).expect("bits"))
        .collect();
    let bob = TwoBits::new(u8::from(y_count > n), 0).expect("bits");
    TaskInstance::new(&alice, bob).expect("even first-bit sum")
}

/// Exact success of the protocol on `G^{(p)}_{n+1}`, averaged over the
/// uniform ensemble.
///
/// An instance's success probability depends only on its first-bit sum `S`:
/// the second bits enter Bob's output and `f_n` identically. The average is
/// therefore taken over the `C(n+1, S)` first-bit tuples of each even `S`.
pub fn run_protocol_exact(n: usize, noise: f64) -> Result<f64> {
    check_party_count(n, MIN_SENDERS, MAX_PROTOCOL_SENDERS)?;
    check_noise(noise)?;
    let qubits = n + 1;
    let tuples = (1u64 << n) as f64;
    let mut success = 0.0;
    for y_count in (0..=qubits).step_by(2) {
        let inst = representative(n, y_count);
        let setting = MeasurementSetting::for_instance(&inst);
        let distribution = joint_distribution_analytic(qubits, noise, &setting)?;
        let target = target_function(&inst);
        let hits: Vec<f64> = distribution
            .probabilities()
            .iter()
            .enumerate()
            .filter(|&(o, _)| bob_output(&inst, o as u64) == target)
            .map(|(_, &p)| p)
            .collect();
        let hit = pairwise_sum(&hits);
        success += binomial(qubits as u64, y_count as u64) as f64 / tuples * hit;
    }
    Ok(success)
}

/// A Monte-Carlo estimate of the protocol's success.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub senders: usize,
    pub noise: f64,
    pub shots: u64,
    pub seed: u64,
    pub successes: u64,
    pub mean: f64,
    /// Binomial standard error `sqrt(mean·(1 − mean)/shots)`.
    pub std_error: f64,
}

impl SampledEstimate {
    pub fn failures(&self) -> u64 {
        self.shots - self.successes
    }
}

fn draw_instance<R: Rng>(n: usize, rng: &mut R) -> TaskInstance {
    let mask = (1u32 << n) - 1;
    let firsts = rng.gen::<u32>() & mask;
    let seconds = rng.gen::<u32>() & mask;
    let bob = TwoBits::new((firsts.count_ones() & 1) as u8, rng.gen::<bool>() as u8).expect("bits");
    let alice = (0..n).fold(0u32, |acc, i| {
        let x = (((firsts >> i) & 1) << 1) | ((seconds >> i) & 1);
        acc | (x << (2 * i))
    });
    TaskInstance::from_packed(n, alice, bob).expect("Bob's first bit restores the promise")
}

fn run_stream(n: usize, samplers: &[OutcomeSampler], seed: u64, stream: u64, shots: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut successes = 0;
    for _ in 0..shots {
        let inst = draw_instance(n, &mut rng);
        let outcome = samplers[inst.first_bit_sum() as usize].sample(&mut rng);
        if bob_output(&inst, outcome) == target_function(&inst) {
            successes += 1;
        }
    }
    successes
}

/// Samples instances uniformly from the ensemble and outcomes from the
/// analytic distribution. Reproducible for a given `seed`.
pub fn run_protocol_sampled(n: usize, noise: f64, shots: u64, seed: u64) -> Result<SampledEstimate> {
    check_party_count(n, MIN_SENDERS, MAX_PROTOCOL_SENDERS)?;
    check_noise(noise)?;
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let qubits = n + 1;
    let samplers = (0..=qubits)
        .map(|k| OutcomeSampler::new(qubits, noise, k))
        .collect::<Result<Vec<_>>>()?;
    let streams = shots.div_ceil(SHOTS_PER_STREAM);
    let stream_shots = |s: u64| SHOTS_PER_STREAM.min(shots - s * SHOTS_PER_STREAM);
    let run = |s: u64| run_stream(n, &samplers, seed, s, stream_shots(s));
    #[cfg(feature = "parallel")]
    let successes: u64 = {
        use rayon::prelude::*;
        (0..streams).into_par_iter().map(run).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let successes: u64 = (0..streams).map(run).sum();
    let mean = successes as f64 / shots as f64;
    Ok(SampledEstimate {
        senders: n,
        noise,
        shots,
        seed,
        successes,
        mean,
        std_error: (mean * (1.0 - mean) / shots as f64).sqrt(),
    })
}
