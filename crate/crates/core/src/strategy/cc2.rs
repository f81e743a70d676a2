use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BestTracker, SearchReport, TwoBitBoolean};
use crate::task::{enumerate_instances, target_function, TaskInstance};
use crate::Fraction;

/// The two-sender strategy `S(p, q, r, s) = (E^p_1, E^q_2, D^r_0, D^s_1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cc2Strategy {
    pub e1: TwoBitBoolean,
    pub e2: TwoBitBoolean,
    pub d0: TwoBitBoolean,
    pub d1: TwoBitBoolean,
}

impl Cc2Strategy {
    pub fn new(e1: TwoBitBoolean, e2: TwoBitBoolean, d0: TwoBitBoolean, d1: TwoBitBoolean) -> Self {
        Self { e1, e2, d0, d1 }
    }

    pub fn from_indices(p: u8, q: u8, r: u8, s: u8) -> crate::Result<Self> {
        Ok(Self::new(
            TwoBitBoolean::from_index(p)?,
            TwoBitBoolean::from_index(q)?,
            TwoBitBoolean::from_index(r)?,
            TwoBitBoolean::from_index(s)?,
        ))
    }

    pub fn indices(&self) -> [u8; 4] {
        [self.e1.index(), self.e2.index(), self.d0.index(), self.d1.index()]
    }

    pub fn messages(&self, inst: &TaskInstance) -> (u8, u8) {
        let (x1, x2) = (inst.alice(0), inst.alice(1));
        (self.e1.eval(x1.first(), x1.second()), self.e2.eval(x2.first(), x2.second()))
    }

    /// Bob's output bit `D_{y⁰}(c_1, c_2) ⊕ y¹`.
    pub fn output(&self, inst: &TaskInstance) -> u8 {
        let (c1, c2) = self.messages(inst);
        let decoder = if inst.bob().first() == 0 { self.d0 } else { self.d1 };
        decoder.eval(c1, c2) ^ inst.bob().second()
    }
}

impl fmt::Display for Cc2Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r, s] = self.indices();
        write!(f, "S({p},{q},{r},{s})")
    }
}

fn two_sender_instances() -> Vec<TaskInstance> {
    enumerate_instances(2)
        .expect("two senders are always enumerable")
        .instances()
        .to_vec()
}

fn success_count(s: &Cc2Strategy, instances: &[TaskInstance]) -> u64 {
    instances
        .iter()
        .filter(|inst| s.output(inst) == target_function(inst))
        .count() as u64
}

/// Exact success of `s` over the 32-instance two-sender ensemble.
pub fn strategy_success_cc2(s: &Cc2Strategy) -> Fraction {
    let instances = two_sender_instances();
    Fraction::new(success_count(s, &instances), instances.len() as u64)
}

/// Examines every `(p, q, r, s)`; with `restrict_even` the encodings range
/// over the even class only.
pub fn exhaustive_search_cc2(restrict_even: bool) -> SearchReport<Cc2Strategy> {
    let instances = two_sender_instances();
    let encodings: Vec<TwoBitBoolean> = if restrict_even {
        TwoBitBoolean::even_class().collect()
    } else {
        TwoBitBoolean::all().collect()
    };
    let mut best = BestTracker::default();
    for &e1 in &encodings {
        for &e2 in &encodings {
            for d0 in TwoBitBoolean::all() {
                for d1 in TwoBitBoolean::all() {
                    let s = Cc2Strategy::new(e1, e2, d0, d1);
                    best.offer(success_count(&s, &instances), || s);
                }
            }
        }
    }
    best.into_report(instances.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u8, q: u8, r: u8, t: u8) -> Cc2Strategy {
        Cc2Strategy::from_indices(p, q, r, t).unwrap()
    }

    #[test]
    fn known_strategy_values() {
        assert_eq!(strategy_success_cc2(&s(4, 4, 0, 13)), Fraction::new(3, 4));
        assert_eq!(strategy_success_cc2(&s(0, 0, 0, 0)), Fraction::new(1, 2));
        assert_eq!(strategy_success_cc2(&s(4, 12, 12, 0)), Fraction::new(3, 4));
    }

    #[test]
    fn case_study_decodings_for_y0_zero_are_interchangeable() {
        for r in [0, 1, 12, 13] {
            assert_eq!(strategy_success_cc2(&s(4, 4, r, 13)), Fraction::new(3, 4));
        }
    }

    #[test]
    fn full_search() {
        let report = exhaustive_search_cc2(false);
        assert_eq!(report.examined, 65_536);
        assert_eq!(report.optimum, Fraction::new(3, 4));
        assert!(report.witnesses.iter().all(|w| strategy_success_cc2(w) == Fraction::new(3, 4)));
    }

    #[test]
    fn even_search_matches_full_search() {
        let even = exhaustive_search_cc2(true);
        assert_eq!(even.examined, 16_384);
        assert_eq!(even.optimum, exhaustive_search_cc2(false).optimum);
        assert!(even.witnesses.contains(&s(4, 4, 0, 13)));
    }

    #[test]
    fn display() {
        assert_eq!(s(4, 4, 0, 13).to_string(), "S(4,4,0,13)");
    }
}
