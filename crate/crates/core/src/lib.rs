//! Simulation and strategy search for the multiparty promise game in which
//! `n` senders and one receiver each hold a two-bit string and the receiver
//! must output
//!
//! ```text
//! f_n = x¹_1 ⊕ … ⊕ x¹_n ⊕ y¹ ⊕ P[(x⁰_1 + … + x⁰_n + y⁰) / 2]
//! ```
//!
//! under the promise that the first-bit sum is even. `P(r)` is 1 for odd `r`.
//!
//! The crate is split into:
//!
//! - [`task`]: instances, the promise, the uniform input ensemble and `f_n`.
//! - [`strategy`]: two-bit Boolean functions, classical one-bit-per-sender
//!   strategies, exhaustive and majority-optimal search, the mixed
//!   2-bit/1-bit protocol.
//! - [`quantum`]: GHZ states, Pauli X/Y measurement statistics (analytic and
//!   brute-force projector routes) and the entanglement-assisted protocol.
//! - [`analysis`]: classical bounds, noise thresholds, sweeps and the
//!   reproduction of the two-sender optimum table.
//! - [`checks`]: the invariant suite behind `ghzcomm verify`.
//! - [`report`]: serializable reports.

pub mod analysis;
pub mod checks;
mod error;
pub mod exact;
pub mod quantum;
pub mod report;
pub mod strategy;
pub mod task;

pub use error::{Error, Result};
pub use exact::{ExactValue, Fraction};
