use crate::collections::{id_impossibility_collections, LabeledExample, LanguageCollection};
use crate::learners::LearnerOutput;
use crate::set_algebra::{Element, EventuallyPeriodicSet};

use super::{Adversary, Cycler, Emission, Marker, Pair};

/// Adaptive adversary against safe identification.
///
/// It enumerates `T`, which alternates the integers (label 1) with the
/// nonnegative evens (label 0). In phase `l` it waits for the learner to
/// guess `Q(-l)`; the next step then carries the harmful example `(-l, 0)`
/// and phase `l + 1` begins. Until the guess comes the adversary stands
/// behind `K = I`, `H = Y(-(l-1))`, whose safe part is exactly `Q(-l)`.
#[derive(Clone, Debug)]
pub struct PhasedIdAdversary {
    k_coll: LanguageCollection,
    h_coll: LanguageCollection,
    t1: Cycler,
    t2: Cycler,
    step: u64,
    phase: usize,
    pending: Option<Element>,
    injections: Vec<(u64, Element)>,
    pair: Pair,
    limit: Pair,
}

impl Default for PhasedIdAdversary {
    fn default() -> Self {
        Self::new()
    }
}

impl PhasedIdAdversary {
    pub fn new() -> Self {
        let (k_coll, h_coll) = id_impossibility_collections();
        let limit = Pair::indexed(
            k_coll.at(1).expect("family is total"),
            h_coll.at(1).expect("family is total"),
            1,
            1,
        );
        let mut a = PhasedIdAdversary {
            t1: Cycler::new(EventuallyPeriodicSet::integers()),
            t2: Cycler::new(EventuallyPeriodicSet::even_nonnegative()),
            pair: limit.clone(),
            limit,
            k_coll,
            h_coll,
            step: 0,
            phase: 1,
            pending: None,
            injections: Vec::new(),
        };
        a.pair = a.phase_pair();
        a
    }

    /// `(I, Y(-(l-1)))`, i.e. true index 1 and harmful index `l + 1`.
    fn phase_pair(&self) -> Pair {
        let j = self.phase + 1;
        Pair::indexed(
            self.k_coll.at(1).expect("family is total"),
            self.h_coll.at(j).expect("family is total"),
            1,
            j,
        )
    }

    /// The language whose guess ends the current phase.
    pub fn target(&self) -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::q_set(self.phase as u64)
    }

    /// `(step, element)` of every injection so far.
    pub fn injections(&self) -> &[(u64, Element)] {
        &self.injections
    }
}

impl Adversary for PhasedIdAdversary {
    fn name(&self) -> &'static str {
        "phased_id"
    }

    fn emit(&mut self) -> Emission {
        self.step += 1;
        if let Some(x) = self.pending.take() {
            self.injections.push((self.step, x));
            return Emission {
                example: LabeledExample::negative(x),
                marker: Marker::Injection,
            };
        }
        // injections do not consume positions of T
        let position = self.step - self.injections.len() as u64;
        let example = if position % 2 == 1 {
            LabeledExample::positive(self.t1.next().expect("infinite"))
        } else {
            LabeledExample::negative(self.t2.next().expect("infinite"))
        };
        Emission {
            example,
            marker: Marker::Stream,
        }
    }

    fn observe(&mut self, output: &LearnerOutput) {
        let LearnerOutput::Index(i) = *output else {
            return;
        };
        if self.pending.is_some() {
            return;
        }
        if self.k_coll.at(i).is_some_and(|l| l == self.target()) {
            self.pending = Some(-(self.phase as Element));
            self.phase += 1;
            self.pair = self.phase_pair();
        }
    }

    fn phase(&self) -> usize {
        self.phase
    }

    fn current_pair(&self) -> &Pair {
        &self.pair
    }

    fn limit_pair(&self) -> Option<&Pair> {
        Some(&self.limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_without_guesses_is_t() {
        let mut a = PhasedIdAdversary::new();
        let got: Vec<_> = (0..6)
            .map(|_| {
                let e = a.emit();
                a.observe(&LearnerOutput::Index(2));
                (e.example.element, e.example.label as u8)
            })
            .collect();
        assert_eq!(got, vec![(0, 1), (0, 0), (1, 1), (2, 0), (-1, 1), (4, 0)]);
        assert_eq!(a.phase(), 1);
        assert_eq!(a.current_pair().indices, Some((1, 2)));
    }

    #[test]
    fn guessing_q1_triggers_injection() {
        let mut a = PhasedIdAdversary::new();
        a.emit();
        a.observe(&LearnerOutput::Index(3));
        let e = a.emit();
        assert_eq!(e.example, LabeledExample::negative(-1));
        assert_eq!(e.marker, Marker::Injection);
        assert_eq!(a.phase(), 2);
        // the stream resumes where it stopped
        assert_eq!(a.emit().example, LabeledExample::negative(0));
    }

    #[test]
    fn five_eager_guesses_inject_five_examples() {
        let mut a = PhasedIdAdversary::new();
        for _ in 0..40 {
            a.emit();
            let guess = a.phase() + 2;
            a.observe(&LearnerOutput::Index(guess));
            if a.phase() == 6 {
                break;
            }
        }
        a.emit();
        let xs: Vec<_> = a.injections().iter().map(|p| p.1).collect();
        assert_eq!(xs, vec![-1, -2, -3, -4, -5]);
    }

    #[test]
    fn injection_breaks_previous_harmful_language() {
        let (_, h) = id_impossibility_collections();
        for l in 1..=10usize {
            let x = -(l as Element);
            assert!(h.at(l + 2).unwrap().member(x));
            assert!(h.at(1).unwrap().member(x));
            assert!(!h.at(l + 1).unwrap().member(x));
        }
    }
}
