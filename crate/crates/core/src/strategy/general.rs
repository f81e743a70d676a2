use serde::{Deserialize, Serialize};

use super::{BestTracker, Cc2Strategy, SearchReport, TwoBitBoolean};
use crate::error::{check_party_count, Error, Result};
use crate::task::{enumerate_instances, target_function, InstanceEnsemble, TaskInstance, MIN_SENDERS};
use crate::Fraction;

/// Largest sender count accepted by the decoding and optimum searches.
pub const MAX_SEARCH_SENDERS: usize = 6;

/// An `n`-sender strategy with one-bit messages.
///
/// Decoding tables are indexed by the message word `c = Σ c_i·2^i`, with
/// sender slot `i` zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralStrategy {
    encodings: Vec<TwoBitBoolean>,
    decodings: [Vec<u8>; 2],
}

impl GeneralStrategy {
    pub fn new(encodings: Vec<TwoBitBoolean>, d0: Vec<u8>, d1: Vec<u8>) -> Result<Self> {
        let expected = 1usize << encodings.len();
        for table in [&d0, &d1] {
            if table.len() != expected {
                return Err(Error::Length {
                    expected,
                    got: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&b| b > 1) {
                return Err(Error::NotABit(bad));
            }
        }
        Ok(Self {
            encodings,
            decodings: [d0, d1],
        })
    }

    pub fn senders(&self) -> usize {
        self.encodings.len()
    }

    pub fn encodings(&self) -> &[TwoBitBoolean] {
        &self.encodings
    }

    pub fn decoding(&self, y0: u8) -> &[u8] {
        &self.decodings[usize::from(y0 & 1)]
    }

    /// For two senders, the decoding tables as functions `D(c_1, c_2)`.
    pub fn two_sender_decoders(&self) -> Option<(TwoBitBoolean, TwoBitBoolean)> {
        (self.senders() == 2).then(|| {
            let as_fn = |t: &[u8]| TwoBitBoolean::from_truth_table([t[0], t[2], t[1], t[3]]);
            (as_fn(&self.decodings[0]), as_fn(&self.decodings[1]))
        })
    }

    pub fn message_word(&self, inst: &TaskInstance) -> usize {
        message_word(&self.encodings, inst)
    }

    pub fn output(&self, inst: &TaskInstance) -> u8 {
        let bob = inst.bob();
        self.decoding(bob.first())[self.message_word(inst)] ^ bob.second()
    }

    /// Exact success over `ensemble`, whose sender count must match.
    pub fn success_on(&self, ensemble: &InstanceEnsemble) -> Fraction {
        ensemble.fraction_where(|inst| self.output(inst) == target_function(inst))
    }
}

impl From<Cc2Strategy> for GeneralStrategy {
    fn from(s: Cc2Strategy) -> Self {
        let table = |d: TwoBitBoolean| (0..4).map(|c| d.eval(c & 1, c >> 1)).collect::<Vec<_>>();
        Self {
            encodings: vec![s.e1, s.e2],
            decodings: [table(s.d0), table(s.d1)],
        }
    }
}

fn message_word(encodings: &[TwoBitBoolean], inst: &TaskInstance) -> usize {
    encodings.iter().enumerate().fold(0, |word, (i, e)| {
        let x = inst.alice(i);
        word | (usize::from(e.eval(x.first(), x.second())) << i)
    })
}

/// Majority-vote decoding for fixed encodings over an arbitrary ensemble.
///
/// For every `(c, y⁰)` bucket the decoding bit agrees with `f_n ⊕ y¹` on as
/// many instances as possible; ties go to 0. Returns the completed strategy
/// and its exact success.
pub fn optimal_decoding_on(
    ensemble: &InstanceEnsemble,
    encodings: &[TwoBitBoolean],
) -> Result<(GeneralStrategy, Fraction)> {
    if encodings.len() != ensemble.senders() {
        return Err(Error::Length {
            expected: ensemble.senders(),
            got: encodings.len(),
        });
    }
    let words = 1usize << encodings.len();
    // votes[c][y0][bit]
    let mut votes = vec![[[0u64; 2]; 2]; words];
    for inst in ensemble {
        let wanted = target_function(inst) ^ inst.bob().second();
        votes[message_word(encodings, inst)][usize::from(inst.bob().first())][usize::from(wanted)] += 1;
    }
    let mut tables = [vec![0u8; words], vec![0u8; words]];
    let mut hits = 0u64;
    for (c, bucket) in votes.iter().enumerate() {
        for y0 in 0..2 {
            let [zeros, ones] = bucket[y0];
            tables[y0][c] = u8::from(ones > zeros);
            hits += zeros.max(ones);
        }
    }
    let [d0, d1] = tables;
    let strategy = GeneralStrategy::new(encodings.to_vec(), d0, d1)?;
    Ok((strategy, Fraction::new(hits, ensemble.len() as u64)))
}

/// [`optimal_decoding_on`] over the full ensemble for `n` senders.
pub fn optimal_decoding_for_encodings(
    n: usize,
    encodings: &[TwoBitBoolean],
) -> Result<(GeneralStrategy, Fraction)> {
    check_party_count(n, MIN_SENDERS, MAX_SEARCH_SENDERS)?;
    optimal_decoding_on(&enumerate_instances(n)?, encodings)
}

fn even_tuple(mut code: usize, n: usize) -> Vec<TwoBitBoolean> {
    let even: Vec<_> = TwoBitBoolean::even_class().collect();
    let mut out = vec![TwoBitBoolean::ZERO; n];
    for slot in out.iter_mut().rev() {
        *slot = even[code % 8];
        code /= 8;
    }
    out
}

/// Best even-class encodings with majority decoding over `ensemble`, by
/// evaluating every tuple directly against the instances.
pub fn optimum_on_ensemble(ensemble: &InstanceEnsemble) -> Result<SearchReport<GeneralStrategy>> {
    let n = ensemble.senders();
    check_party_count(n, MIN_SENDERS, MAX_SEARCH_SENDERS)?;
    let denominator = ensemble.len() as u64;
    let mut best = BestTracker::default();
    for code in 0..8usize.pow(n as u32) {
        let (strategy, success) = optimal_decoding_on(ensemble, &even_tuple(code, n))?;
        // Rescale to the common denominator; `Fraction` reduces.
        let score = success.numer() * (denominator / success.denom());
        best.offer(score, || strategy);
    }
    Ok(best.into_report(denominator))
}

/// Sender-by-sender aggregation of the ensemble.
///
/// After `i` senders, `weights[(c << 3) | (s << 1) | t]` counts the sender
/// input combinations with message prefix `c`, first-bit sum `s mod 4` and
/// second-bit parity `t`. Bob's inputs are folded in at the end, which
/// makes the cost per encoding tuple independent of the ensemble size.
#[derive(Clone, Debug)]
struct PrefixLayer {
    senders: usize,
    weights: Vec<u64>,
}

impl PrefixLayer {
    fn empty() -> Self {
        let mut weights = vec![0; 8];
        weights[0] = 1;
        Self { senders: 0, weights }
    }

    fn extend(&self, encoding: TwoBitBoolean) -> Self {
        let i = self.senders;
        let mut weights = vec![0u64; 8 << (i + 1)];
        for (key, &w) in self.weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let (c, s, t) = (key >> 3, (key >> 1) & 3, key & 1);
            for x in 0..4usize {
                let (x0, x1) = (x >> 1, x & 1);
                let m = usize::from(encoding.eval(x0 as u8, x1 as u8));
                let next = ((c | (m << i)) << 3) | (((s + x0) & 3) << 1) | (t ^ x1);
                weights[next] += w;
            }
        }
        Self {
            senders: i + 1,
            weights,
        }
    }

    /// Success numerator over `2^(2n+1)` and the majority decoding tables.
    fn complete(&self) -> (u64, [Vec<u8>; 2]) {
        let words = 1usize << self.senders;
        let mut tables = [vec![0u8; words], vec![0u8; words]];
        let mut hits = 0u64;
        for c in 0..words {
            for y0 in 0..2usize {
                let mut votes = [0u64; 2];
                for s in 0..4usize {
                    let total = (s + y0) & 3;
                    if total & 1 == 1 {
                        continue;
                    }
                    let half_sum_odd = usize::from(total == 2);
                    for t in 0..2usize {
                        // Both values of y¹ land in the same bucket.
                        votes[t ^ half_sum_odd] += 2 * self.weights[(c << 3) | (s << 1) | t];
                    }
                }
                tables[y0][c] = u8::from(votes[1] > votes[0]);
                hits += votes[0].max(votes[1]);
            }
        }
        (hits, tables)
    }
}

fn search_from(
    layer: &PrefixLayer,
    prefix: &mut Vec<TwoBitBoolean>,
    n: usize,
    best: &mut BestTracker<GeneralStrategy>,
) {
    if layer.senders == n {
        let (hits, [d0, d1]) = layer.complete();
        best.offer(hits, || {
            GeneralStrategy::new(prefix.clone(), d0, d1).expect("table sizes match")
        });
        return;
    }
    for e in TwoBitBoolean::even_class() {
        prefix.push(e);
        search_from(&layer.extend(e), prefix, n, best);
        prefix.pop();
    }
}

/// Optimal success with one-bit channels: all `8^n` even-class encoding
/// tuples, each completed with its majority-optimal decoding.
///
/// Restricting to even encodings is exact because an odd encoding is the
/// complement of an even one, which Bob's arbitrary tables absorb.
pub fn classical_optimum(n: usize) -> Result<SearchReport<GeneralStrategy>> {
    check_party_count(n, MIN_SENDERS, MAX_SEARCH_SENDERS)?;
    let even: Vec<_> = TwoBitBoolean::even_class().collect();
    let root = PrefixLayer::empty();
    let branch = |k: usize| {
        let (a, b) = (even[k / 8], even[k % 8]);
        let mut tracker = BestTracker::default();
        let mut prefix = vec![a, b];
        search_from(&root.extend(a).extend(b), &mut prefix, n, &mut tracker);
        tracker
    };
    #[cfg(feature = "parallel")]
    let best = {
        use rayon::prelude::*;
        (0..64usize)
            .into_par_iter()
            .map(branch)
            .reduce(BestTracker::default, BestTracker::merge)
    };
    #[cfg(not(feature = "parallel"))]
    let best = (0..64usize).map(branch).fold(BestTracker::default(), BestTracker::merge);
    Ok(best.into_report(1u64 << (2 * n + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{restrict_to_subtask, Party, TwoBits};

    fn g(m: u8) -> TwoBitBoolean {
        TwoBitBoolean::from_index(m).unwrap()
    }

    #[test]
    fn majority_examples() {
        let (_, v) = optimal_decoding_for_encodings(2, &[g(4), g(4)]).unwrap();
        assert_eq!(v, Fraction::new(3, 4));
        let (_, v) = optimal_decoding_for_encodings(2, &[g(0), g(0)]).unwrap();
        assert_eq!(v, Fraction::new(1, 2));
    }

    #[test]
    fn majority_ties_go_to_zero() {
        // Constant messages leave every bucket balanced.
        let (s, _) = optimal_decoding_for_encodings(2, &[g(0), g(0)]).unwrap();
        assert!(s.decoding(0).iter().chain(s.decoding(1)).all(|&b| b == 0));
    }

    #[test]
    fn majority_matches_all_decoding_tables_for_three_senders() {
        let ensemble = enumerate_instances(3).unwrap();
        let enc = [g(4), g(4), g(4)];
        // Brute force over all 2^8 × 2^8 decoding pairs.
        let mut best = Fraction::from_integer(0);
        for t0 in 0u32..256 {
            for t1 in 0u32..256 {
                let bits = |t: u32| (0..8).map(|c| ((t >> c) & 1) as u8).collect::<Vec<_>>();
                let s = GeneralStrategy::new(enc.to_vec(), bits(t0), bits(t1)).unwrap();
                best = best.max(s.success_on(&ensemble));
            }
        }
        let (strategy, value) = optimal_decoding_for_encodings(3, &enc).unwrap();
        assert_eq!(value, best);
        assert_eq!(strategy.success_on(&ensemble), value);
    }

    #[test]
    fn from_cc2_preserves_outputs() {
        let ensemble = enumerate_instances(2).unwrap();
        let s = Cc2Strategy::from_indices(14, 6, 12, 0).unwrap();
        let general = GeneralStrategy::from(s);
        for inst in &ensemble {
            assert_eq!(general.output(inst), s.output(inst));
        }
    }

    #[test]
    fn prefix_aggregation_matches_direct_count() {
        for n in 2..=4 {
            let ensemble = enumerate_instances(n).unwrap();
            for code in (0..8usize.pow(n as u32)).step_by(7) {
                let enc = even_tuple(code, n);
                let layer = enc.iter().fold(PrefixLayer::empty(), |l, &e| l.extend(e));
                let (hits, [d0, d1]) = layer.complete();
                let (direct, value) = optimal_decoding_on(&ensemble, &enc).unwrap();
                assert_eq!(Fraction::new(hits, ensemble.len() as u64), value);
                assert_eq!(direct, GeneralStrategy::new(enc, d0, d1).unwrap());
            }
        }
    }

    #[test]
    fn optimum_small_n() {
        assert_eq!(classical_optimum(2).unwrap().optimum, Fraction::new(3, 4));
        assert_eq!(classical_optimum(3).unwrap().optimum, Fraction::new(3, 4));
        let r = classical_optimum(3).unwrap();
        assert_eq!(r.examined, 512);
        let ensemble = enumerate_instances(3).unwrap();
        assert!(r.witnesses.iter().all(|w| w.success_on(&ensemble) == r.optimum));
    }

    #[test]
    fn prefix_search_agrees_with_direct_search() {
        for n in 2..=3 {
            let fast = classical_optimum(n).unwrap();
            let slow = optimum_on_ensemble(&enumerate_instances(n).unwrap()).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn pinned_subtask_optimum_is_two_sender_optimum() {
        for n in 3..=4 {
            let pins: Vec<_> = (3..=n).map(|j| (Party::Alice(j), TwoBits::ZERO)).collect();
            let sub = restrict_to_subtask(&enumerate_instances(n).unwrap(), &pins).unwrap();
            assert!(optimum_on_ensemble(&sub).unwrap().optimum <= Fraction::new(3, 4));
        }
    }

    #[test]
    fn range_checks() {
        assert!(matches!(classical_optimum(7), Err(Error::PartyCount { .. })));
        assert!(matches!(optimal_decoding_for_encodings(1, &[g(0)]), Err(Error::PartyCount { .. })));
        assert!(matches!(
            optimal_decoding_for_encodings(2, &[g(0)]),
            Err(Error::Length { expected: 2, got: 1 })
        ));
        assert!(matches!(
            GeneralStrategy::new(vec![g(0), g(0)], vec![0; 4], vec![0; 3]),
            Err(Error::Length { .. })
        ));
        assert_eq!(
            GeneralStrategy::new(vec![g(0), g(0)], vec![0; 4], vec![0, 0, 2, 0]),
            Err(Error::NotABit(2))
        );
    }
}
