use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::collections::{
    find_pstar_witness_from, pstar_collections, Label, LabeledExample, LanguageCollection,
};
use crate::learners::LearnerOutput;
use crate::set_algebra::{universe_index, Element};

use super::{Adversary, Cycler, Emission, Marker, Pair};

pub const DEFAULT_WITNESS_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subphase {
    /// Enumerate the top languages restricted to the phase pair.
    Probe,
    /// Release everything the probe bypassed.
    Flush,
    /// Continue the top enumerations until the phase's true language is refuted.
    Burst,
    /// No witness was found; the top pair is enumerated from here on.
    Stalled,
}

/// Adaptive adversary against safe generation on a collection pair with the
/// diagonalization property.
///
/// Each phase picks a witness pair `(K_l, H_l)` consistent with everything
/// enumerated so far and shows only its members, until the learner
/// generates from `K_l \ H_l`. The bypassed elements are then released and
/// the top enumeration continues past the first element outside `K_l`, so
/// the learner's output is never again backed by the phase pair. Every
/// element of both top languages is eventually shown.
#[derive(Clone, Debug)]
pub struct DiagonalAdversary {
    k_coll: LanguageCollection,
    h_coll: LanguageCollection,
    top: Pair,
    witness_limit: usize,
    k_stream: Cycler,
    h_stream: Cycler,
    traversed_k: BTreeSet<Element>,
    traversed_h: BTreeSet<Element>,
    last_rank_h: u64,
    skipped_k: VecDeque<Element>,
    skipped_h: VecDeque<Element>,
    shown: BTreeSet<Element>,
    shown_k: BTreeSet<Element>,
    shown_h: BTreeSet<Element>,
    phase: usize,
    subphase: Subphase,
    pair: Pair,
    k_turn: bool,
    target: Option<Element>,
    phase_over: bool,
    violations: Vec<String>,
    witnesses: Vec<(usize, usize)>,
}

impl DiagonalAdversary {
    /// # Panics
    ///
    /// Panics if `top` is out of range for either collection.
    pub fn new(
        k_coll: LanguageCollection,
        h_coll: LanguageCollection,
        top: (usize, usize),
        witness_limit: usize,
    ) -> Self {
        let k_top = k_coll.at(top.0).expect("top true index in range");
        let h_top = h_coll.at(top.1).expect("top harmful index in range");
        let top = Pair::indexed(k_top.clone(), h_top.clone(), top.0, top.1);
        let mut a = DiagonalAdversary {
            k_coll,
            h_coll,
            witness_limit,
            k_stream: Cycler::new(k_top),
            h_stream: Cycler::new(h_top),
            traversed_k: BTreeSet::new(),
            traversed_h: BTreeSet::new(),
            last_rank_h: 0,
            skipped_k: VecDeque::new(),
            skipped_h: VecDeque::new(),
            shown: BTreeSet::new(),
            shown_k: BTreeSet::new(),
            shown_h: BTreeSet::new(),
            phase: 0,
            subphase: Subphase::Probe,
            pair: top.clone(),
            top,
            k_turn: true,
            target: None,
            phase_over: false,
            violations: Vec::new(),
            witnesses: Vec::new(),
        };
        a.start_phase();
        a
    }

    /// The adversary on the built-in family, top pair `(1, 1)`.
    pub fn pstar() -> Self {
        let (k, h) = pstar_collections();
        Self::new(k, h, (1, 1), DEFAULT_WITNESS_LIMIT)
    }

    pub fn subphase(&self) -> Subphase {
        self.subphase
    }

    /// Witness indices of every phase started so far.
    pub fn witnesses(&self) -> &[(usize, usize)] {
        &self.witnesses
    }

    fn start_phase(&mut self) {
        self.phase += 1;
        if !self.traversed_k.is_subset(&self.shown_k) || !self.traversed_h.is_subset(&self.shown_h)
        {
            self.violations.push(format!(
                "phase {}: traversed top elements were not all shown",
                self.phase
            ));
        }
        if !self.skipped_k.is_empty() || !self.skipped_h.is_empty() {
            self.violations
                .push(format!("phase {}: skipped queues not empty", self.phase));
        }
        let found = find_pstar_witness_from(
            &self.k_coll,
            &self.h_coll,
            self.top.indices.expect("top is indexed"),
            &self.traversed_k,
            &self.traversed_h,
            self.witness_limit,
            self.witnesses.last().map_or(1, |w| w.0),
        );
        self.k_turn = true;
        self.target = None;
        self.phase_over = false;
        match found {
            Some((i, j)) => {
                self.witnesses.push((i, j));
                self.pair = Pair::indexed(
                    self.k_coll.at(i).expect("witness in range"),
                    self.h_coll.at(j).expect("witness in range"),
                    i,
                    j,
                );
                self.subphase = Subphase::Probe;
            }
            None => {
                self.violations.push(format!(
                    "phase {}: no witness within {} indices",
                    self.phase, self.witness_limit
                ));
                self.pair = self.top.clone();
                self.subphase = Subphase::Stalled;
            }
        }
    }

    fn next_k(&mut self) -> Element {
        let x = self.k_stream.next().expect("top true language is infinite");
        self.traversed_k.insert(x);
        x
    }

    fn next_h(&mut self) -> Option<Element> {
        let x = self.h_stream.next()?;
        self.traversed_h.insert(x);
        self.last_rank_h = self.last_rank_h.max(universe_index(x));
        Some(x)
    }

    /// Whether the harmful phase language has a top member past the cursor.
    fn h_side_open(&self) -> bool {
        let rest = &self.pair.h & &self.top.h;
        rest.is_infinite()
            || rest
                .enumerate()
                .any(|x| universe_index(x) > self.last_rank_h)
    }

    fn probe_k(&mut self) -> Element {
        loop {
            let x = self.next_k();
            if self.pair.k.member(x) {
                return x;
            }
            self.skipped_k.push_back(x);
        }
    }

    fn probe_h(&mut self) -> Element {
        loop {
            let x = self.next_h().expect("checked by h_side_open");
            if self.pair.h.member(x) {
                return x;
            }
            self.skipped_h.push_back(x);
        }
    }

    fn alternate_top(&mut self) -> LabeledExample {
        let k_turn = self.k_turn;
        self.k_turn = !k_turn;
        if !k_turn {
            if let Some(x) = self.next_h() {
                return LabeledExample::negative(x);
            }
        }
        LabeledExample::positive(self.next_k())
    }

    fn record(&mut self, example: LabeledExample, marker: Marker) -> Emission {
        self.shown.insert(example.element);
        match example.label {
            Label::True => self.shown_k.insert(example.element),
            Label::Harm => self.shown_h.insert(example.element),
        };
        Emission { example, marker }
    }
}

impl Adversary for DiagonalAdversary {
    fn name(&self) -> &'static str {
        "diagonal"
    }

    fn emit(&mut self) -> Emission {
        if self.subphase == Subphase::Flush {
            if let Some(x) = self.skipped_k.pop_front() {
                return self.record(LabeledExample::positive(x), Marker::Skipped);
            }
            if let Some(x) = self.skipped_h.pop_front() {
                return self.record(LabeledExample::negative(x), Marker::Skipped);
            }
            self.subphase = Subphase::Burst;
            self.k_turn = true;
        }
        match self.subphase {
            Subphase::Probe => {
                let k_turn = self.k_turn;
                self.k_turn = !k_turn;
                let example = if k_turn || !self.h_side_open() {
                    LabeledExample::positive(self.probe_k())
                } else {
                    LabeledExample::negative(self.probe_h())
                };
                self.record(example, Marker::Stream)
            }
            Subphase::Burst => {
                let example = self.alternate_top();
                if example.label == Label::True && Some(example.element) == self.target {
                    self.phase_over = true;
                }
                self.record(example, Marker::Burst)
            }
            Subphase::Stalled => {
                let example = self.alternate_top();
                self.record(example, Marker::Stream)
            }
            Subphase::Flush => unreachable!("flush falls through to burst"),
        }
    }

    fn observe(&mut self, output: &LearnerOutput) {
        match self.subphase {
            Subphase::Probe => {
                let LearnerOutput::Generate(x) = *output else {
                    return;
                };
                if self.shown.contains(&x) || !self.pair.k.member(x) || self.pair.h.member(x) {
                    return;
                }
                // first top element past the cursor outside the phase language
                let k_phase = self.pair.k.clone();
                let mut probe = self.k_stream.clone();
                self.target = loop {
                    let y = probe.next().expect("top true language is infinite");
                    if !k_phase.member(y) {
                        break Some(y);
                    }
                    if self.traversed_k.contains(&y) {
                        // wrapped around; nothing left to refute with
                        break None;
                    }
                };
                self.pair = self.top.clone();
                self.subphase = Subphase::Flush;
                if self.target.is_none() && self.skipped_k.is_empty() && self.skipped_h.is_empty() {
                    self.start_phase();
                }
            }
            Subphase::Flush => {
                if self.target.is_none() && self.skipped_k.is_empty() && self.skipped_h.is_empty() {
                    self.start_phase();
                }
            }
            Subphase::Burst => {
                if self.phase_over || self.target.is_none() {
                    self.start_phase();
                }
            }
            Subphase::Stalled => {}
        }
    }

    fn phase(&self) -> usize {
        self.phase
    }

    fn current_pair(&self) -> &Pair {
        &self.pair
    }

    fn limit_pair(&self) -> Option<&Pair> {
        Some(&self.top)
    }

    fn ledger_violations(&self) -> &[String] {
        &self.violations
    }
}
