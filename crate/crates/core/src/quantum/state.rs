use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_noise, Error, Result};
use crate::task::TaskInstance;

pub const MAX_STATEVECTOR_QUBITS: usize = 20;
pub const MAX_PROPERTY_QUBITS: usize = 12;

const PHASE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
}

impl Pauli {
    /// X for first bit 0, Y for first bit 1.
    pub fn for_first_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Pauli::X
        } else {
            Pauli::Y
        }
    }
}

/// One local Pauli basis per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementSetting {
    bases: Vec<Pauli>,
}

impl MeasurementSetting {
    pub fn new(bases: Vec<Pauli>) -> Self {
        Self { bases }
    }

    /// Qubit `j` measures Y exactly when bit `j` of `mask` is set.
    pub fn from_y_mask(qubits: usize, mask: u64) -> Self {
        Self::new((0..qubits).map(|j| Pauli::for_first_bit((mask >> j) as u8 & 1)).collect())
    }

    /// The protocol's setting for an instance: senders in order, then Bob.
    pub fn for_instance(inst: &TaskInstance) -> Self {
        let firsts = inst.alice_inputs().map(|s| s.first()).chain(std::iter::once(inst.bob().first()));
        Self::new(firsts.map(Pauli::for_first_bit).collect())
    }

    pub fn bases(&self) -> &[Pauli] {
        &self.bases
    }

    pub fn qubits(&self) -> usize {
        self.bases.len()
    }

    pub fn y_count(&self) -> usize {
        self.bases.iter().filter(|&&b| b == Pauli::Y).count()
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            f.write_str(match b {
                Pauli::X => "X",
                Pauli::Y => "Y",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GhzSign {
    Plus,
    Minus,
}

/// A normalized state vector on `K` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

fn check_qubits(k: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&k) {
        Ok(())
    } else {
        Err(Error::QubitCount { k, max })
    }
}

impl PureState {
    /// Wraps an amplitude vector of length `2^K` with unit norm (within 1e−12).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Length {
                expected: len.next_power_of_two().max(2),
                got: len,
            });
        }
        check_qubits(len.trailing_zeros() as usize, MAX_STATEVECTOR_QUBITS)?;
        let state = Self { amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// `(|0…0⟩ ± |1…1⟩)/√2` on `k` qubits.
pub fn ghz_state(k: usize, sign: GhzSign) -> Result<PureState> {
    check_qubits(k, MAX_STATEVECTOR_QUBITS)?;
    let dim = 1usize << k;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] += h;
    amplitudes[dim - 1] += match sign {
        GhzSign::Plus => h,
        GhzSign::Minus => -h,
    };
    Ok(PureState { amplitudes })
}

/// Applies `σ_{b_0} ⊗ … ⊗ σ_{b_{K-1}}` qubit by qubit.
pub fn apply_pauli_string(state: &PureState, setting: &MeasurementSetting) -> Result<PureState> {
    if setting.qubits() != state.qubits() {
        return Err(Error::DimensionMismatch {
            setting: setting.qubits(),
            state: state.qubits(),
        });
    }
    let i = Complex64::i();
    let mut amps = state.amplitudes.clone();
    for (j, basis) in setting.bases().iter().enumerate() {
        let bit = 1usize << j;
        for idx in 0..amps.len() {
            if idx & bit != 0 {
                continue;
            }
            let (a0, a1) = (amps[idx], amps[idx | bit]);
            // X|0⟩ = |1⟩, X|1⟩ = |0⟩; Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩.
            let (n0, n1) = match basis {
                Pauli::X => (a1, a0),
                Pauli::Y => (-i * a1, i * a0),
            };
            amps[idx] = n0;
            amps[idx | bit] = n1;
        }
    }
    Ok(PureState { amplitudes: amps })
}

/// `(1 − p)|G_K⟩⟨G_K| + p·(I/2)^⊗K`, kept as its two mixture components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyGhz {
    qubits: usize,
    noise: f64,
}

impl NoisyGhz {
    pub fn new(qubits: usize, noise: f64) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::QubitCount { k: 0, max: usize::MAX });
        }
        check_noise(noise)?;
        Ok(Self { qubits, noise })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }
}

/// One line of the GHZ phase table: the image of `|G_K⟩` under a Pauli string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub setting: MeasurementSetting,
    pub y_count: usize,
    /// Which GHZ state the image is proportional to, if either.
    pub observed_image: Option<GhzSign>,
    /// The proportionality constant `(re, im)`.
    pub observed_phase: (f64, f64),
    pub expected_image: GhzSign,
    pub expected_phase: (f64, f64),
    pub matches: bool,
}

/// `(−1)^{k/2}` on `|G_K⟩` for even `k`, `(−1)^{(k+1)/2}·i` on `|G⁻_K⟩` for odd `k`.
fn expected_image(y_count: usize) -> (GhzSign, Complex64) {
    let sign = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
    if y_count % 2 == 0 {
        (GhzSign::Plus, Complex64::new(sign(y_count / 2), 0.0))
    } else {
        (GhzSign::Minus, Complex64::new(0.0, sign((y_count + 1) / 2)))
    }
}

/// Checks the X/Y action on `|G_K⟩` for all `2^K` settings.
pub fn ghz_property_report(k: usize) -> Result<Vec<PropertyRow>> {
    check_qubits(k, MAX_PROPERTY_QUBITS)?;
    let plus = ghz_state(k, GhzSign::Plus)?;
    let minus = ghz_state(k, GhzSign::Minus)?;
    let mut rows = Vec::with_capacity(1 << k);
    for mask in 0..1u64 << k {
        let setting = MeasurementSetting::from_y_mask(k, mask);
        let image = apply_pauli_string(&plus, &setting)?;
        let (expected_sign, expected_phase) = expected_image(setting.y_count());
        let candidates = [(GhzSign::Plus, plus.inner(&image)), (GhzSign::Minus, minus.inner(&image))];
        // Proportional means the overlap has unit modulus.
        let observed = candidates
            .iter()
            .find(|(_, z)| (z.norm() - 1.0).abs() < PHASE_TOLERANCE)
            .copied();
        let matches = observed
            .is_some_and(|(s, z)| s == expected_sign && (z - expected_phase).norm() < PHASE_TOLERANCE);
        let phase = observed.map(|(_, z)| z).unwrap_or_default();
        rows.push(PropertyRow {
            y_count: setting.y_count(),
            setting,
            observed_image: observed.map(|(s, _)| s),
            observed_phase: (phase.re, phase.im),
            expected_image: expected_sign,
            expected_phase: (expected_phase.re, expected_phase.im),
            matches,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn setting(s: &str) -> MeasurementSetting {
        MeasurementSetting::new(
            s.chars()
                .map(|c| if c == 'X' { Pauli::X } else { Pauli::Y })
                .collect(),
        )
    }

    fn close(a: &PureState, b: &PureState, scale: Complex64) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - scale * y).norm() < EPS)
    }

    #[test]
    fn ghz_amplitudes() {
        let g2 = ghz_state(2, GhzSign::Plus).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re: Vec<f64> = g2.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![h, 0.0, 0.0, h]);
        let g3m = ghz_state(3, GhzSign::Minus).unwrap();
        assert_eq!(g3m.amplitudes()[7], Complex64::new(-h, 0.0));
        let g1 = ghz_state(1, GhzSign::Plus).unwrap();
        assert_eq!(g1.amplitudes(), &[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]);
        assert!((g3m.norm_sqr() - 1.0).abs() < EPS);
    }

    #[test]
    fn ghz_qubit_cap() {
        assert!(matches!(ghz_state(0, GhzSign::Plus), Err(Error::QubitCount { .. })));
        assert!(matches!(ghz_state(21, GhzSign::Plus), Err(Error::QubitCount { .. })));
    }

    #[test]
    fn pauli_images_of_ghz3() {
        let g = ghz_state(3, GhzSign::Plus).unwrap();
        let gm = ghz_state(3, GhzSign::Minus).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(close(&apply_pauli_string(&g, &setting("XXX")).unwrap(), &g, one));
        assert!(close(&apply_pauli_string(&g, &setting("XYY")).unwrap(), &g, -one));
        assert!(close(&apply_pauli_string(&g, &setting("XXY")).unwrap(), &gm, -Complex64::i()));
    }

    #[test]
    fn pauli_string_is_involution() {
        let g = ghz_state(4, GhzSign::Minus).unwrap();
        let s = setting("YXYY");
        let twice = apply_pauli_string(&apply_pauli_string(&g, &s).unwrap(), &s).unwrap();
        assert!(close(&twice, &g, Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn dimension_mismatch() {
        let g = ghz_state(3, GhzSign::Plus).unwrap();
        assert_eq!(
            apply_pauli_string(&g, &setting("XX")),
            Err(Error::DimensionMismatch { setting: 2, state: 3 })
        );
    }

    #[test]
    fn property_table_small() {
        let rows = ghz_property_report(3).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.matches));

        let yy = ghz_property_report(2).unwrap().into_iter().find(|r| r.setting == setting("YY")).unwrap();
        assert_eq!(yy.observed_image, Some(GhzSign::Plus));
        assert!((yy.observed_phase.0 + 1.0).abs() < EPS);

        let odd = ghz_property_report(4).unwrap().into_iter().find(|r| r.y_count == 3).unwrap();
        assert_eq!(odd.observed_image, Some(GhzSign::Minus));
        assert!((odd.observed_phase.1 - 1.0).abs() < EPS);
    }

    #[test]
    fn property_cap() {
        assert!(ghz_property_report(13).is_err());
    }

    #[test]
    fn setting_for_instance() {
        use crate::task::TwoBits;
        let b = |i| TwoBits::from_index(i).unwrap();
        let inst = TaskInstance::new(&[b(0b10), b(0b01), b(0b11)], b(0b00)).unwrap();
        let s = MeasurementSetting::for_instance(&inst);
        assert_eq!(s.to_string(), "YXYX");
        assert_eq!(s.y_count() as u32, inst.first_bit_sum());
    }

    #[test]
    fn noisy_validation() {
        assert!(NoisyGhz::new(3, 1.2).is_err());
        assert!(NoisyGhz::new(3, -0.1).is_err());
        assert!(NoisyGhz::new(0, 0.1).is_err());
        assert_eq!(NoisyGhz::new(3, 0.3).unwrap().noise(), 0.3);
    }
}
