//! GHZ states under Pauli X/Y measurements.
//!
//! Qubit `j` is bit `j` of a basis-state index, and bit `j` of an outcome
//! word is the result on qubit `j`. In the protocol, senders occupy qubits
//! `0..n` and Bob holds qubit `n`. Outcome bit 0 is eigenvalue +1, bit 1 is −1.

mod distribution;
mod protocol;
mod state;

pub use distribution::{
    joint_distribution_analytic, joint_distribution_oracle, OracleState, OutcomeDistribution,
    OutcomeSampler, MAX_ANALYTIC_QUBITS, MAX_ORACLE_QUBITS,
};
pub use protocol::{
    run_protocol_exact, run_protocol_sampled, SampledEstimate, MAX_PROTOCOL_SENDERS, SHOTS_PER_STREAM,
};
pub use state::{
    apply_pauli_string, ghz_property_report, ghz_state, GhzSign, MeasurementSetting, NoisyGhz,
    Pauli, PropertyRow, PureState, MAX_PROPERTY_QUBITS, MAX_STATEVECTOR_QUBITS,
};
