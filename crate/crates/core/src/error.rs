use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not a bit")]
    NotABit(u8),
    #[error("party count {n} outside supported range {min}..={max}")]
    PartyCount { n: usize, min: usize, max: usize },
    #[error("promise violated: first-bit sum {0} is odd")]
    PromiseViolated(u32),
    #[error("party {party} does not exist in a task with {n} senders")]
    UnknownParty { party: String, n: usize },
    #[error("party {0} is pinned more than once")]
    DuplicatePin(String),
    #[error("no instance satisfies the pinned assignment")]
    EmptyEnsemble,
    #[error("index {0} does not name a two-bit Boolean function (expected 0..=15)")]
    FunctionIndex(u8),
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("qubit count {k} outside supported range 1..={max}")]
    QubitCount { k: usize, max: usize },
    #[error("setting has {setting} bases but the state has {state} qubits")]
    DimensionMismatch { setting: usize, state: usize },
    #[error("state has squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("noise parameter {0} outside [0, 1]")]
    Noise(f64),
    #[error("shot count must be at least 1")]
    NoShots,
}

pub(crate) fn check_party_count(n: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::PartyCount { n, min, max })
    }
}

pub(crate) fn check_noise(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Noise(p))
    }
}
