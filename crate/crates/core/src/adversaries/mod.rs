//! Producers of the labeled stream.
//!
//! Each step the arena asks the adversary for one labeled example, hands it
//! to the learner, and then shows the learner's answer back to the
//! adversary. Adaptive adversaries change course only in `observe`, so the
//! pair they report between `emit` and `observe` is the pair the emitted
//! example and the learner's answer are judged against.

mod diagonal;
mod phased;

use serde::{Deserialize, Serialize};

use crate::collections::{Label, LabeledExample};
use crate::learners::LearnerOutput;
use crate::set_algebra::{EventuallyPeriodicSet, OwnedEnumeration};

pub use diagonal::{DiagonalAdversary, Subphase};
pub use phased::PhasedIdAdversary;

/// Why an example was emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    /// Regular enumeration.
    Stream,
    /// Harmful example injected to break the learner's last guess.
    Injection,
    /// Element bypassed earlier in the phase, now flushed.
    Skipped,
    /// Element of the top enumeration leading up to the distinguishing one.
    Burst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Emission {
    pub example: LabeledExample,
    pub marker: Marker,
}

/// The true and harmful languages an adversary currently stands behind,
/// with their collection indices when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub k: EventuallyPeriodicSet,
    pub h: EventuallyPeriodicSet,
    pub indices: Option<(usize, usize)>,
}

impl Pair {
    pub fn new(k: EventuallyPeriodicSet, h: EventuallyPeriodicSet) -> Self {
        Pair {
            k,
            h,
            indices: None,
        }
    }

    pub fn indexed(k: EventuallyPeriodicSet, h: EventuallyPeriodicSet, i: usize, j: usize) -> Self {
        Pair {
            k,
            h,
            indices: Some((i, j)),
        }
    }

    /// Whether the example is labeled truthfully with respect to this pair.
    pub fn is_truthful(&self, e: &LabeledExample) -> bool {
        match e.label {
            Label::True => self.k.member(e.element),
            Label::Harm => self.h.member(e.element),
        }
    }
}

pub trait Adversary {
    fn name(&self) -> &'static str;

    fn emit(&mut self) -> Emission;

    fn observe(&mut self, _output: &LearnerOutput) {}

    /// Current phase, starting at 1. Non-adaptive adversaries stay in phase 1.
    fn phase(&self) -> usize {
        1
    }

    fn current_pair(&self) -> &Pair;

    /// The pair the adversary converges to if the learner keeps advancing it.
    fn limit_pair(&self) -> Option<&Pair> {
        None
    }

    /// Fairness bookkeeping failures recorded so far.
    fn ledger_violations(&self) -> &[String] {
        &[]
    }
}

/// Canonical enumeration that restarts when a finite language runs out.
#[derive(Clone, Debug)]
pub(crate) struct Cycler {
    base: EventuallyPeriodicSet,
    iter: OwnedEnumeration,
}

impl Cycler {
    pub(crate) fn new(set: EventuallyPeriodicSet) -> Self {
        Cycler {
            iter: set.clone().into_enumeration(),
            base: set,
        }
    }

    /// `None` only for the empty set.
    pub(crate) fn next(&mut self) -> Option<i64> {
        self.iter.next().or_else(|| {
            self.iter = self.base.clone().into_enumeration();
            self.iter.next()
        })
    }
}

/// Positive-only canonical enumeration of `K`.
#[derive(Clone, Debug)]
pub struct Enumerator {
    pair: Pair,
    stream: Cycler,
}

impl Enumerator {
    /// `h` is only reported for scoring; nothing from it is emitted.
    ///
    /// # Panics
    ///
    /// Panics if `k` is empty.
    pub fn new(k: EventuallyPeriodicSet, h: EventuallyPeriodicSet) -> Self {
        assert!(!k.is_empty(), "cannot enumerate the empty language");
        Enumerator {
            stream: Cycler::new(k.clone()),
            pair: Pair::new(k, h),
        }
    }
}

impl Adversary for Enumerator {
    fn name(&self) -> &'static str {
        "enumerator"
    }

    fn emit(&mut self) -> Emission {
        let x = self.stream.next().expect("nonempty language");
        Emission {
            example: LabeledExample::positive(x),
            marker: Marker::Stream,
        }
    }

    fn current_pair(&self) -> &Pair {
        &self.pair
    }
}

/// `K` at odd steps with label 1, `H` at even steps with label 0. An empty
/// side is skipped.
#[derive(Clone, Debug)]
pub struct FairInterleaver {
    pair: Pair,
    k: Cycler,
    h: Cycler,
    step: u64,
}

impl FairInterleaver {
    /// # Panics
    ///
    /// Panics if both languages are empty.
    pub fn new(k: EventuallyPeriodicSet, h: EventuallyPeriodicSet) -> Self {
        assert!(!(k.is_empty() && h.is_empty()), "both languages are empty");
        FairInterleaver {
            k: Cycler::new(k.clone()),
            h: Cycler::new(h.clone()),
            pair: Pair::new(k, h),
            step: 0,
        }
    }
}

impl Adversary for FairInterleaver {
    fn name(&self) -> &'static str {
        "fair_interleaver"
    }

    fn emit(&mut self) -> Emission {
        self.step += 1;
        let example = if self.step % 2 == 1 {
            self.k
                .next()
                .map(LabeledExample::positive)
                .or_else(|| self.h.next().map(LabeledExample::negative))
        } else {
            self.h
                .next()
                .map(LabeledExample::negative)
                .or_else(|| self.k.next().map(LabeledExample::positive))
        };
        Emission {
            example: example.expect("one side is nonempty"),
            marker: Marker::Stream,
        }
    }

    fn current_pair(&self) -> &Pair {
        &self.pair
    }
}
