use std::collections::HashMap;

use crate::collections::{
    is_consistent_harm, is_consistent_true, LabeledExample, LanguageCollection, RevealedSet,
};
use crate::set_algebra::EventuallyPeriodicSet;

use super::generators::reference_safe_generate;
use super::{Hypothesis, Learner, LearnerError, LearnerOutput, Mode};

/// A safe generator called as a black box on a finite labeled sample with a
/// stated hypothesis pair.
pub trait SgSubroutine {
    fn generate(
        &mut self,
        k: &EventuallyPeriodicSet,
        h: &EventuallyPeriodicSet,
        sample: &RevealedSet,
    ) -> LearnerOutput;
}

/// Exact subroutine backed by the difference oracle.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceSg {
    pub mode: Mode,
}

impl ReferenceSg {
    pub fn relaxed() -> Self {
        ReferenceSg {
            mode: Mode::Relaxed,
        }
    }
}

impl SgSubroutine for ReferenceSg {
    fn generate(
        &mut self,
        k: &EventuallyPeriodicSet,
        h: &EventuallyPeriodicSet,
        sample: &RevealedSet,
    ) -> LearnerOutput {
        reference_safe_generate(k, h, sample, self.mode)
    }
}

impl<F> SgSubroutine for F
where
    F: FnMut(&EventuallyPeriodicSet, &EventuallyPeriodicSet, &RevealedSet) -> LearnerOutput,
{
    fn generate(
        &mut self,
        k: &EventuallyPeriodicSet,
        h: &EventuallyPeriodicSet,
        sample: &RevealedSet,
    ) -> LearnerOutput {
        self(k, h, sample)
    }
}

/// Labeled enumeration for a probe: the first `samples` members of `k`
/// (label 1) and of `h` (label 0), alternating and starting on the `k` side.
pub fn probe_sample(
    k: &EventuallyPeriodicSet,
    h: &EventuallyPeriodicSet,
    samples: usize,
) -> RevealedSet {
    let mut ks = k.enumerate();
    let mut hs = h.enumerate();
    let mut s = RevealedSet::new();
    for _ in 0..samples {
        if let Some(x) = ks.next() {
            s.push(LabeledExample::positive(x));
        }
        if let Some(x) = hs.next() {
            s.push(LabeledExample::negative(x));
        }
    }
    s
}

/// Two-bit subset test through a safe generator. `α` is set when the word
/// generated for `(K = m, H = n)` lies in `m \ n`; `β` likewise with the
/// roles swapped. A correct generator yields `(false, true)` for `m ⊊ n`,
/// `(true, false)` for `n ⊊ m`, `(false, false)` for equality and
/// `(true, true)` for incomparable languages.
pub fn subset_probe(
    m: &EventuallyPeriodicSet,
    n: &EventuallyPeriodicSet,
    samples: usize,
    sg: &mut dyn SgSubroutine,
) -> (bool, bool) {
    let alpha = probe_bit(m, n, samples, sg);
    let beta = probe_bit(n, m, samples, sg);
    (alpha, beta)
}

fn probe_bit(
    k: &EventuallyPeriodicSet,
    h: &EventuallyPeriodicSet,
    samples: usize,
    sg: &mut dyn SgSubroutine,
) -> bool {
    let sample = probe_sample(k, h, samples);
    match sg.generate(k, h, &sample) {
        LearnerOutput::Generate(w) => k.member(w) && !h.member(w),
        _ => false,
    }
}

/// Insertion ordering: entries are taken in ascending collection index,
/// appended on the right and moved left while the generator can produce a
/// word in `left \ new`.
pub fn order_routine(
    mut entries: Vec<(usize, EventuallyPeriodicSet)>,
    samples: usize,
    sg: &mut dyn SgSubroutine,
) -> Vec<(usize, EventuallyPeriodicSet)> {
    entries.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, EventuallyPeriodicSet)> = Vec::with_capacity(entries.len());
    for entry in entries {
        out.push(entry);
        for j in (1..out.len()).rev() {
            if !probe_bit(&out[j - 1].1, &out[j].1, samples, sg) {
                break;
            }
            out.swap(j - 1, j);
        }
    }
    out
}

/// One step of identification through safe generation: collect the
/// consistent languages among the first `t`, order them, and guess the
/// leftmost. Guesses 1 when nothing is consistent.
pub fn identify_from_sg_step(
    coll: &LanguageCollection,
    s: &RevealedSet,
    t: usize,
    sg: &mut dyn SgSubroutine,
) -> LearnerOutput {
    let entries = (1..=coll.available(t))
        .filter_map(|i| coll.at(i).map(|l| (i, l)))
        .filter(|(_, l)| is_consistent_true(l, s))
        .collect();
    match order_routine(entries, t, sg).first() {
        Some((i, _)) => LearnerOutput::Index(*i),
        None => LearnerOutput::Index(1),
    }
}

pub struct IdentifierFromSg {
    coll: LanguageCollection,
    sg: Box<dyn SgSubroutine>,
}

impl IdentifierFromSg {
    pub fn new(coll: LanguageCollection, sg: Box<dyn SgSubroutine>) -> Self {
        IdentifierFromSg { coll, sg }
    }
}

impl Learner for IdentifierFromSg {
    fn name(&self) -> &'static str {
        "id_from_sg"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        let t = s.step().max(1);
        Ok(identify_from_sg_step(&self.coll, s, t, self.sg.as_mut()))
    }
}

/// Guesses the first consistent index among the first `t`.
#[derive(Clone, Debug)]
pub struct NaiveIdentifier {
    coll: LanguageCollection,
}

impl NaiveIdentifier {
    pub fn new(coll: LanguageCollection) -> Self {
        NaiveIdentifier { coll }
    }
}

impl Learner for NaiveIdentifier {
    fn name(&self) -> &'static str {
        "naive_id"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        let t = s.step().max(1);
        let i = (1..=self.coll.available(t))
            .find(|&i| self.coll.at(i).is_some_and(|l| is_consistent_true(&l, s)))
            .unwrap_or(1);
        Ok(LearnerOutput::Index(i))
    }
}

/// Safe identification by the obvious rule: the first consistent true
/// language minus the smallest consistent harmful language, looked up in
/// the true collection. Falls back to the true hypothesis itself when the
/// difference is not listed among the first `t` indices.
#[derive(Clone, Debug)]
pub struct EagerSafeIdentifier {
    k: LanguageCollection,
    h: LanguageCollection,
    k_langs: Vec<EventuallyPeriodicSet>,
    h_langs: Vec<EventuallyPeriodicSet>,
    lookup: HashMap<EventuallyPeriodicSet, usize>,
    last: Option<Hypothesis>,
}

impl EagerSafeIdentifier {
    pub fn new(k: LanguageCollection, h: LanguageCollection) -> Self {
        EagerSafeIdentifier {
            k,
            h,
            k_langs: Vec::new(),
            h_langs: Vec::new(),
            lookup: HashMap::new(),
            last: None,
        }
    }

    fn load(&mut self, t: usize) {
        while self.k_langs.len() < self.k.available(t) {
            let i = self.k_langs.len() + 1;
            let l = self.k.at(i).expect("available index");
            self.lookup.entry(l.clone()).or_insert(i);
            self.k_langs.push(l);
        }
        while self.h_langs.len() < self.h.available(t) {
            let l = self.h.at(self.h_langs.len() + 1).expect("available index");
            self.h_langs.push(l);
        }
    }
}

impl Learner for EagerSafeIdentifier {
    fn name(&self) -> &'static str {
        "eager_si"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        let t = s.step().max(1);
        self.load(t);
        let Some(ki) = self.k_langs.iter().position(|l| is_consistent_true(l, s)) else {
            self.last = None;
            return Ok(LearnerOutput::Index(1));
        };
        let mut hi: Option<usize> = None;
        for (j, l) in self.h_langs.iter().enumerate() {
            if !is_consistent_harm(l, s) {
                continue;
            }
            if hi.is_none_or(|c| l.is_proper_subset(&self.h_langs[c])) {
                hi = Some(j);
            }
        }
        self.last = Some(Hypothesis {
            k: Some(ki + 1),
            h: hi.map(|j| j + 1),
        });
        let target = match hi {
            Some(j) => self.k_langs[ki].difference(&self.h_langs[j]),
            None => self.k_langs[ki].clone(),
        };
        Ok(LearnerOutput::Index(
            self.lookup.get(&target).copied().unwrap_or(ki + 1),
        ))
    }

    fn hypothesis(&self) -> Option<Hypothesis> {
        self.last
    }
}

/// Always guesses the same index.
#[derive(Clone, Copy, Debug)]
pub struct ConstantIdentifier {
    pub index: usize,
}

impl Learner for ConstantIdentifier {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn respond(&mut self, _s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        Ok(LearnerOutput::Index(self.index))
    }
}
