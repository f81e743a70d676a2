//! The promise game: instances, the uniform ensemble and the target function.
//!
//! Each sender (Alice-1 … Alice-n) holds a string `x⁰x¹` and the receiver
//! (Bob) holds `y⁰y¹`. Valid instances satisfy `x⁰_1 + … + x⁰_n + y⁰ ≡ 0 (mod 2)`.
//! The ensemble is uniform over all `2^(2n+1)` valid instances.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_party_count, Error, Result};
use crate::Fraction;

/// Smallest number of senders the game is defined for.
pub const MIN_SENDERS: usize = 2;
/// Largest sender count that fits the packed instance representation.
pub const MAX_SENDERS: usize = 16;
/// Largest sender count for which the full ensemble is materialized.
pub const MAX_ENUMERATED_SENDERS: usize = 12;

/// `P(r)`: 1 when `r` is odd, 0 otherwise.
pub fn parity_indicator(r: u64) -> u8 {
    (r & 1) as u8
}

fn bit(value: u8) -> Result<u8> {
    if value <= 1 {
        Ok(value)
    } else {
        Err(Error::NotABit(value))
    }
}

/// A party's two-bit input string `b⁰b¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBits(u8);

impl TwoBits {
    pub const ZERO: TwoBits = TwoBits(0);

    pub fn new(first: u8, second: u8) -> Result<Self> {
        Ok(Self((bit(first)? << 1) | bit(second)?))
    }

    /// Builds the string whose value, read as a binary number `b⁰b¹`, is `index`.
    pub fn from_index(index: u8) -> Result<Self> {
        if index < 4 {
            Ok(Self(index))
        } else {
            Err(Error::NotABit(index))
        }
    }

    pub fn all() -> impl Iterator<Item = TwoBits> {
        (0..4).map(TwoBits)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn first(self) -> u8 {
        self.0 >> 1
    }

    pub fn second(self) -> u8 {
        self.0 & 1
    }
}

impl fmt::Display for TwoBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first(), self.second())
    }
}

/// Raw, unvalidated inputs for a would-be instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub alice: Vec<(u8, u8)>,
    pub bob: (u8, u8),
}

impl Candidate {
    pub fn new(alice: &[(u8, u8)], bob: (u8, u8)) -> Self {
        Self {
            alice: alice.to_vec(),
            bob,
        }
    }

    fn first_bit_sum(&self) -> Result<u32> {
        check_party_count(self.alice.len(), MIN_SENDERS, MAX_SENDERS)?;
        let mut sum = 0u32;
        for &(first, second) in self.alice.iter().chain(std::iter::once(&self.bob)) {
            sum += u32::from(bit(first)?);
            bit(second)?;
        }
        Ok(sum)
    }

    /// Whether the first bits sum to an even number.
    pub fn promise_holds(&self) -> Result<bool> {
        Ok(self.first_bit_sum()? % 2 == 0)
    }

    /// `f_n` of the candidate, refusing inputs outside the promise.
    pub fn evaluate(&self) -> Result<u8> {
        TaskInstance::try_from(self).map(|inst| target_function(&inst))
    }
}

/// Convenience wrapper around [`Candidate::promise_holds`].
pub fn promise_holds(candidate: &Candidate) -> Result<bool> {
    candidate.promise_holds()
}

/// One promise-satisfying assignment of every party's input.
///
/// Alice strings are packed two bits per sender (sender `i` at bits `2i..2i+2`,
/// zero-based), so an instance is `Copy` and eight bytes wide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskInstance {
    n: u8,
    bob: TwoBits,
    alice: u32,
}

impl TaskInstance {
    pub fn new(alice: &[TwoBits], bob: TwoBits) -> Result<Self> {
        check_party_count(alice.len(), MIN_SENDERS, MAX_SENDERS)?;
        let packed = alice
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, s)| acc | (u32::from(s.index()) << (2 * i)));
        Self::from_packed(alice.len(), packed, bob)
    }

    pub(crate) fn from_packed(n: usize, alice: u32, bob: TwoBits) -> Result<Self> {
        let inst = Self {
            n: n as u8,
            bob,
            alice,
        };
        let sum = inst.first_bit_sum();
        if sum % 2 == 0 {
            Ok(inst)
        } else {
            Err(Error::PromiseViolated(sum))
        }
    }

    pub fn senders(&self) -> usize {
        usize::from(self.n)
    }

    /// Input of the zero-based sender slot `i` (Alice-`i+1`).
    pub fn alice(&self, i: usize) -> TwoBits {
        assert!(i < self.senders(), "sender slot {i} out of range");
        TwoBits(((self.alice >> (2 * i)) & 0b11) as u8)
    }

    pub fn alice_inputs(&self) -> impl Iterator<Item = TwoBits> + '_ {
        (0..self.senders()).map(|i| self.alice(i))
    }

    pub fn bob(&self) -> TwoBits {
        self.bob
    }

    /// `S = x⁰_1 + … + x⁰_n + y⁰`, also the number of Pauli-Y settings in the
    /// entanglement-assisted protocol.
    pub fn first_bit_sum(&self) -> u32 {
        self.alice_inputs().map(|s| u32::from(s.first())).sum::<u32>() + u32::from(self.bob.first())
    }

    /// `x¹_1 ⊕ … ⊕ x¹_n ⊕ y¹`.
    pub fn second_bit_parity(&self) -> u8 {
        self.alice_inputs().fold(self.bob.second(), |acc, s| acc ^ s.second())
    }

    /// The same instance with Bob's second bit complemented.
    pub fn with_flipped_bob_second(&self) -> Self {
        Self {
            bob: TwoBits(self.bob.0 ^ 1),
            ..*self
        }
    }
}

impl TryFrom<&Candidate> for TaskInstance {
    type Error = Error;

    fn try_from(c: &Candidate) -> Result<Self> {
        let sum = c.first_bit_sum()?;
        if sum % 2 != 0 {
            return Err(Error::PromiseViolated(sum));
        }
        let alice = c
            .alice
            .iter()
            .map(|&(a, b)| TwoBits::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        TaskInstance::new(&alice, TwoBits::new(c.bob.0, c.bob.1)?)
    }
}

impl fmt::Display for TaskInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.alice_inputs().enumerate() {
            write!(f, "x{}={} ", i + 1, s)?;
        }
        write!(f, "y={}", self.bob)
    }
}

/// `f_n(x_1, …, x_n, y)`.
pub fn target_function(inst: &TaskInstance) -> u8 {
    let half_sum = u64::from(inst.first_bit_sum() / 2);
    inst.second_bit_parity() ^ parity_indicator(half_sum)
}

/// Streams every valid instance for `n` senders in a fixed order.
///
/// Unlike [`enumerate_instances`] this accepts any `n` up to [`MAX_SENDERS`].
pub fn promise_instances(n: usize) -> Result<impl Iterator<Item = TaskInstance>> {
    check_party_count(n, MIN_SENDERS, MAX_SENDERS)?;
    let alice_mask = (1u64 << (2 * n)) - 1;
    Ok((0u64..1 << (2 * n + 2)).filter_map(move |code| {
        let bob = TwoBits((code >> (2 * n)) as u8);
        TaskInstance::from_packed(n, (code & alice_mask) as u32, bob).ok()
    }))
}

/// A uniform distribution over a set of instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceEnsemble {
    n: usize,
    instances: Vec<TaskInstance>,
}

impl InstanceEnsemble {
    pub fn senders(&self) -> usize {
        self.n
    }

    pub fn instances(&self) -> &[TaskInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Probability of each instance.
    pub fn weight(&self) -> Fraction {
        Fraction::new(1, self.instances.len() as u64)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TaskInstance> {
        self.instances.iter()
    }

    /// Deterministic contiguous split for data-parallel consumers.
    pub fn chunks(&self, size: usize) -> std::slice::Chunks<'_, TaskInstance> {
        self.instances.chunks(size.max(1))
    }

    /// Exact fraction of instances satisfying `pred`.
    pub fn fraction_where(&self, pred: impl Fn(&TaskInstance) -> bool) -> Fraction {
        let hits = self.instances.iter().filter(|i| pred(i)).count();
        Fraction::new(hits as u64, self.instances.len() as u64)
    }
}

impl<'a> IntoIterator for &'a InstanceEnsemble {
    type Item = &'a TaskInstance;
    type IntoIter = std::slice::Iter<'a, TaskInstance>;

    fn into_iter(self) -> Self::IntoIter {
        self.instances.iter()
    }
}

/// Every valid instance for `n` senders, each with weight `2^-(2n+1)`.
pub fn enumerate_instances(n: usize) -> Result<InstanceEnsemble> {
    check_party_count(n, MIN_SENDERS, MAX_ENUMERATED_SENDERS)?;
    Ok(InstanceEnsemble {
        n,
        instances: promise_instances(n)?.collect(),
    })
}

/// A participant of the game. Senders are numbered from 1 as `Alice(1)` … `Alice(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice(usize),
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice(i) => write!(f, "Alice-{i}"),
            Party::Bob => f.write_str("Bob"),
        }
    }
}

/// Keeps only instances in which every pinned party holds its forced string.
///
/// The result is again uniform over the surviving instances.
pub fn restrict_to_subtask(
    ensemble: &InstanceEnsemble,
    pins: &[(Party, TwoBits)],
) -> Result<InstanceEnsemble> {
    let n = ensemble.senders();
    let mut seen = BTreeSet::new();
    for (party, _) in pins {
        if let Party::Alice(i) = *party {
            if i == 0 || i > n {
                return Err(Error::UnknownParty {
                    party: party.to_string(),
                    n,
                });
            }
        }
        if !seen.insert(*party) {
            return Err(Error::DuplicatePin(party.to_string()));
        }
    }
    let instances: Vec<_> = ensemble
        .iter()
        .filter(|inst| {
            pins.iter().all(|&(party, forced)| match party {
                Party::Alice(i) => inst.alice(i - 1) == forced,
                Party::Bob => inst.bob() == forced,
            })
        })
        .copied()
        .collect();
    if instances.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    Ok(InstanceEnsemble { n, instances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(alice: &[&str], bob: &str) -> TaskInstance {
        let parse = |s: &str| {
            let b = s.as_bytes();
            TwoBits::new(b[0] - b'0', b[1] - b'0').unwrap()
        };
        let alice: Vec<_> = alice.iter().map(|s| parse(s)).collect();
        TaskInstance::new(&alice, parse(bob)).unwrap()
    }

    #[test]
    fn parity_indicator_values() {
        assert_eq!(parity_indicator(0), 0);
        assert_eq!(parity_indicator(1), 1);
        assert_eq!(parity_indicator(4), 0);
    }

    #[test]
    fn promise_examples() {
        assert!(Candidate::new(&[(0, 0), (0, 0)], (0, 0)).promise_holds().unwrap());
        assert!(!Candidate::new(&[(1, 0), (0, 0)], (0, 0)).promise_holds().unwrap());
        assert!(Candidate::new(&[(1, 0), (1, 0), (1, 0)], (1, 0))
            .promise_holds()
            .unwrap());
    }

    #[test]
    fn promise_rejects_non_bits() {
        assert_eq!(
            Candidate::new(&[(2, 0), (0, 0)], (0, 0)).promise_holds(),
            Err(Error::NotABit(2))
        );
        assert_eq!(
            Candidate::new(&[(0, 0), (0, 0)], (0, 7)).promise_holds(),
            Err(Error::NotABit(7))
        );
        assert!(matches!(
            Candidate::new(&[(0, 0)], (0, 0)).promise_holds(),
            Err(Error::PartyCount { n: 1, .. })
        ));
    }

    #[test]
    fn target_examples() {
        assert_eq!(target_function(&inst(&["00", "00"], "00")), 0);
        assert_eq!(target_function(&inst(&["11", "10"], "01")), 1);
        assert_eq!(target_function(&inst(&["10", "10", "00"], "00")), 1);
    }

    #[test]
    fn evaluating_outside_promise_fails() {
        assert_eq!(
            Candidate::new(&[(1, 0), (0, 0)], (0, 0)).evaluate(),
            Err(Error::PromiseViolated(1))
        );
        assert_eq!(Candidate::new(&[(1, 1), (1, 0)], (0, 1)).evaluate(), Ok(1));
    }

    #[test]
    fn packed_accessors_round_trip() {
        let x = inst(&["10", "01", "11"], "00");
        let got: Vec<String> = x.alice_inputs().map(|s| s.to_string()).collect();
        assert_eq!(got, ["10", "01", "11"]);
        assert_eq!(x.first_bit_sum(), 2);
        assert_eq!(x.second_bit_parity(), 0);
        assert_eq!(x.to_string(), "x1=10 x2=01 x3=11 y=00");
    }

    #[test]
    fn ensemble_sizes() {
        assert_eq!(enumerate_instances(2).unwrap().len(), 32);
        assert_eq!(enumerate_instances(3).unwrap().len(), 128);
        for n in 2..=8 {
            assert_eq!(enumerate_instances(n).unwrap().len(), 1 << (2 * n + 1));
        }
    }

    #[test]
    fn ensemble_matches_brute_force_filter() {
        // Independent enumeration over raw bit tuples.
        let mut brute = Vec::new();
        for code in 0u32..64 {
            let bits: Vec<u8> = (0..6).map(|k| ((code >> k) & 1) as u8).collect();
            let c = Candidate::new(&[(bits[0], bits[1]), (bits[2], bits[3])], (bits[4], bits[5]));
            if c.promise_holds().unwrap() {
                brute.push(TaskInstance::try_from(&c).unwrap());
            }
        }
        brute.sort();
        let mut ours = enumerate_instances(2).unwrap().instances().to_vec();
        ours.sort();
        assert_eq!(ours, brute);
    }

    #[test]
    fn ensemble_weights_sum_to_one() {
        let e = enumerate_instances(3).unwrap();
        assert_eq!(e.weight() * Fraction::from_integer(e.len() as u64), Fraction::from_integer(1));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_instances(1), Err(Error::PartyCount { .. })));
        assert!(matches!(enumerate_instances(13), Err(Error::PartyCount { .. })));
        assert!(promise_instances(16).is_ok());
        assert!(promise_instances(17).is_err());
    }

    #[test]
    fn target_is_balanced() {
        for n in 2..=6 {
            let e = enumerate_instances(n).unwrap();
            assert_eq!(e.fraction_where(|i| target_function(i) == 1), Fraction::new(1, 2));
        }
    }

    #[test]
    fn pinning_examples() {
        let e2 = enumerate_instances(2).unwrap();
        assert_eq!(restrict_to_subtask(&e2, &[]).unwrap(), e2);

        let e4 = enumerate_instances(4).unwrap();
        let pinned = restrict_to_subtask(
            &e4,
            &[(Party::Alice(3), TwoBits::ZERO), (Party::Alice(4), TwoBits::ZERO)],
        )
        .unwrap();
        assert_eq!(pinned.len(), 32);
        assert_eq!(pinned.weight(), Fraction::new(1, 32));
    }

    #[test]
    fn pinned_subtask_reduces_to_two_senders() {
        let e2 = enumerate_instances(2).unwrap();
        for n in 3..=5 {
            let pins: Vec<_> = (3..=n).map(|j| (Party::Alice(j), TwoBits::ZERO)).collect();
            let sub = restrict_to_subtask(&enumerate_instances(n).unwrap(), &pins).unwrap();
            assert_eq!(sub.len(), 32);
            for big in &sub {
                let small = TaskInstance::new(&[big.alice(0), big.alice(1)], big.bob()).unwrap();
                assert!(e2.instances().contains(&small));
                assert_eq!(target_function(big), target_function(&small), "{big}");
            }
        }
    }

    #[test]
    fn pinning_errors() {
        let e2 = enumerate_instances(2).unwrap();
        let x = |s| TwoBits::from_index(s).unwrap();
        assert!(matches!(
            restrict_to_subtask(&e2, &[(Party::Alice(3), x(0))]),
            Err(Error::UnknownParty { .. })
        ));
        assert!(matches!(
            restrict_to_subtask(&e2, &[(Party::Alice(0), x(0))]),
            Err(Error::UnknownParty { .. })
        ));
        assert!(matches!(
            restrict_to_subtask(&e2, &[(Party::Bob, x(0)), (Party::Bob, x(1))]),
            Err(Error::DuplicatePin(_))
        ));
        // First bits 1 + 0 + 0 can never meet the promise.
        assert_eq!(
            restrict_to_subtask(
                &e2,
                &[(Party::Alice(1), x(0b10)), (Party::Alice(2), x(0)), (Party::Bob, x(0))]
            ),
            Err(Error::EmptyEnsemble)
        );
    }

    #[test]
    fn chunks_cover_ensemble_in_order() {
        let e = enumerate_instances(3).unwrap();
        let joined: Vec<_> = e.chunks(17).flatten().copied().collect();
        assert_eq!(joined, e.instances());
    }
}
