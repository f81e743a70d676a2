use crate::error::{check_party_count, Result};
use crate::task::{enumerate_instances, target_function, TaskInstance, TwoBits, MIN_SENDERS};
use crate::Fraction;

/// Largest sender count for [`mixed_protocol_success`].
pub const MAX_MIXED_SENDERS: usize = 8;

/// What Bob receives in the mixed protocol: the full strings of the first
/// `n - 1` senders and only the second bit of the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMessage {
    pub full: Vec<TwoBits>,
    pub last_second: u8,
}

impl MixedMessage {
    pub fn send(inst: &TaskInstance) -> Self {
        let n = inst.senders();
        Self {
            full: (0..n - 1).map(|i| inst.alice(i)).collect(),
            last_second: inst.alice(n - 1).second(),
        }
    }

    /// Bob restores the missing first bit from the promise and evaluates `f_n`.
    pub fn decode(&self, bob: TwoBits) -> u8 {
        let known: u8 = self.full.iter().fold(bob.first(), |acc, s| acc ^ s.first());
        let restored = TwoBits::new(known, self.last_second).expect("bits");
        let mut alice = self.full.clone();
        alice.push(restored);
        let inst = TaskInstance::new(&alice, bob).expect("restored bit satisfies the promise");
        target_function(&inst)
    }
}

/// Classical bits sent by the mixed protocol: `2(n - 1) + 1`.
pub fn mixed_protocol_bits(n: usize) -> usize {
    2 * n - 1
}

/// Exact success of the mixed protocol over the full ensemble.
pub fn mixed_protocol_success(n: usize) -> Result<Fraction> {
    check_party_count(n, MIN_SENDERS, MAX_MIXED_SENDERS)?;
    let ensemble = enumerate_instances(n)?;
    Ok(ensemble.fraction_where(|inst| MixedMessage::send(inst).decode(inst.bob()) == target_function(inst)))
}
