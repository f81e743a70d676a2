//! Classical strategies with one-bit channels from every sender.
//!
//! A deterministic strategy fixes an encoding `c_i = E_i(x⁰_i, x¹_i)` per
//! sender and two decoding tables, one per value of Bob's first bit. Bob
//! outputs `D_{y⁰}(c_1, …, c_n) ⊕ y¹`; since `f_n` contains `y¹` linearly this
//! loses nothing against decodings that also read `y¹`.

mod boolean;
mod cc2;
mod general;
mod mixed;

pub use boolean::TwoBitBoolean;
pub use cc2::{exhaustive_search_cc2, strategy_success_cc2, Cc2Strategy};
pub use general::{
    classical_optimum, optimal_decoding_for_encodings, optimal_decoding_on, optimum_on_ensemble,
    GeneralStrategy, MAX_SEARCH_SENDERS,
};
pub use mixed::{mixed_protocol_bits, mixed_protocol_success, MixedMessage, MAX_MIXED_SENDERS};

use crate::Fraction;

/// Maximum number of optimal strategies kept in a [`SearchReport`].
pub const WITNESS_CAP: usize = 1024;

/// Result of maximizing success over a strategy family.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport<S> {
    pub optimum: Fraction,
    /// Total number of strategies attaining `optimum`.
    pub optimal_count: u64,
    /// The first [`WITNESS_CAP`] optimal strategies in search order.
    pub witnesses: Vec<S>,
    pub examined: u64,
}

/// Running maximum over integer scores with a capped witness list.
///
/// `merge` is associative and keeps search order, so chunked searches give
/// the same report however the chunks are scheduled.
#[derive(Clone, Debug)]
pub(crate) struct BestTracker<S> {
    score: Option<u64>,
    optimal: u64,
    witnesses: Vec<S>,
    examined: u64,
}

impl<S> Default for BestTracker<S> {
    fn default() -> Self {
        Self {
            score: None,
            optimal: 0,
            witnesses: Vec::new(),
            examined: 0,
        }
    }
}

impl<S> BestTracker<S> {
    pub(crate) fn offer(&mut self, score: u64, witness: impl FnOnce() -> S) {
        self.examined += 1;
        match self.score {
            Some(best) if score < best => return,
            Some(best) if score == best => {}
            _ => {
                self.score = Some(score);
                self.optimal = 0;
                self.witnesses.clear();
            }
        }
        self.optimal += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    pub(crate) fn merge(mut self, mut other: Self) -> Self {
        let examined = self.examined + other.examined;
        let mut merged = match (self.score, other.score) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) if a > b => self,
            (Some(a), Some(b)) if a < b => other,
            _ => {
                self.optimal += other.optimal;
                let room = WITNESS_CAP.saturating_sub(self.witnesses.len());
                self.witnesses.extend(other.witnesses.drain(..).take(room));
                self
            }
        };
        merged.examined = examined;
        merged
    }

    pub(crate) fn into_report(self, denominator: u64) -> SearchReport<S> {
        SearchReport {
            optimum: Fraction::new(self.score.unwrap_or(0), denominator),
            optimal_count: self.optimal,
            witnesses: self.witnesses,
            examined: self.examined,
        }
    }
}
