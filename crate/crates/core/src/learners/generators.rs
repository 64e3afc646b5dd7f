use crate::collections::{is_consistent_harm, is_consistent_true, LanguageCollection, RevealedSet};
use crate::set_algebra::{CardinalityClass, EventuallyPeriodicSet};

use super::engine::{GenerationEngine, Selection};
use super::{HarmChoice, Hypothesis, Learner, LearnerError, LearnerOutput, Mode, U1};

/// Generation in the limit from positive examples only.
#[derive(Clone, Debug)]
pub struct KmGenerator {
    engine: GenerationEngine,
    last: Option<Hypothesis>,
}

impl KmGenerator {
    pub fn new(coll: LanguageCollection, max_cutoff: usize) -> Self {
        KmGenerator {
            engine: GenerationEngine::new(coll, None, HarmChoice::Largest, max_cutoff),
            last: None,
        }
    }
}

impl Learner for KmGenerator {
    fn name(&self) -> &'static str {
        "km"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        match self.engine.step(s)? {
            Selection::NoCandidate => {
                self.last = None;
                Ok(LearnerOutput::Generate(U1))
            }
            Selection::Generate { element, k, .. } => {
                self.last = Some(Hypothesis {
                    k: Some(k),
                    h: None,
                });
                Ok(LearnerOutput::Generate(element))
            }
            Selection::Stuck { k, h } => Err(LearnerError::PromiseViolated { k, h }),
        }
    }

    fn hypothesis(&self) -> Option<Hypothesis> {
        self.last
    }
}

/// Smallest consistent true language minus the harmful language chosen by
/// `harm_choice`. With `promise` set, finding nothing to generate is an
/// error; otherwise it answers ⊥ (strict) or `u₁` (relaxed).
#[derive(Clone, Debug)]
pub struct SafeGeneratorInf {
    engine: GenerationEngine,
    promise: bool,
    mode: Mode,
    last: Option<Hypothesis>,
}

impl SafeGeneratorInf {
    pub fn new(
        k: LanguageCollection,
        h: LanguageCollection,
        harm_choice: HarmChoice,
        promise: bool,
        mode: Mode,
        max_cutoff: usize,
    ) -> Self {
        SafeGeneratorInf {
            engine: GenerationEngine::new(k, Some(h), harm_choice, max_cutoff),
            promise,
            mode,
            last: None,
        }
    }
}

impl Learner for SafeGeneratorInf {
    fn name(&self) -> &'static str {
        "sg_inf"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        match self.engine.step(s)? {
            Selection::NoCandidate => {
                self.last = None;
                Ok(LearnerOutput::Generate(U1))
            }
            Selection::Generate { element, k, h } => {
                self.last = Some(Hypothesis { k: Some(k), h });
                Ok(LearnerOutput::Generate(element))
            }
            Selection::Stuck { k, h } => {
                self.last = Some(Hypothesis { k: Some(k), h });
                if self.promise {
                    return Err(LearnerError::PromiseViolated { k, h });
                }
                Ok(match self.mode {
                    Mode::Strict => LearnerOutput::Bottom,
                    Mode::Relaxed => LearnerOutput::Generate(U1),
                })
            }
        }
    }

    fn hypothesis(&self) -> Option<Hypothesis> {
        self.last
    }
}

/// A correct safe generator for a known pair: the first unseen element of
/// `k \ h` when that difference is infinite, otherwise ⊥ or `u₁`.
pub fn reference_safe_generate(
    k: &EventuallyPeriodicSet,
    h: &EventuallyPeriodicSet,
    s: &RevealedSet,
    mode: Mode,
) -> LearnerOutput {
    let d = k.difference(h);
    if d.cardinality() == CardinalityClass::Infinite {
        let x = d
            .first_member_outside(|x| s.contains(x))
            .expect("infinite set has unseen members");
        LearnerOutput::Generate(x)
    } else {
        match mode {
            Mode::Strict => LearnerOutput::Bottom,
            Mode::Relaxed => LearnerOutput::Generate(U1),
        }
    }
}

/// Picks hypotheses like [`SafeGeneratorInf`] at the initial cutoff, then
/// answers with the exact difference oracle.
#[derive(Clone, Debug)]
pub struct ReferenceSafeGenerator {
    engine: GenerationEngine,
    mode: Mode,
    last: Option<Hypothesis>,
}

impl ReferenceSafeGenerator {
    pub fn new(
        k: LanguageCollection,
        h: LanguageCollection,
        harm_choice: HarmChoice,
        mode: Mode,
        max_cutoff: usize,
    ) -> Self {
        ReferenceSafeGenerator {
            engine: GenerationEngine::new(k, Some(h), harm_choice, max_cutoff),
            mode,
            last: None,
        }
    }
}

impl Learner for ReferenceSafeGenerator {
    fn name(&self) -> &'static str {
        "reference_sg"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        let Some((k, h)) = self.engine.select_at_start(s)? else {
            self.last = None;
            return Ok(LearnerOutput::Generate(U1));
        };
        self.last = Some(Hypothesis { k: Some(k), h });
        let kl = self.engine.true_lang(k);
        let empty = EventuallyPeriodicSet::empty();
        let hl = h.and_then(|h| self.engine.harm_lang(h)).unwrap_or(&empty);
        Ok(reference_safe_generate(kl, hl, s, self.mode))
    }

    fn hypothesis(&self) -> Option<Hypothesis> {
        self.last
    }
}

/// Identifies both languages through their telltales, then asks the exact
/// difference oracle whether anything safe is left. Until both sides are
/// identified it generates like [`SafeGeneratorInf`] and never answers ⊥.
#[derive(Clone, Debug)]
pub struct TelltaleOracleGenerator {
    k: LanguageCollection,
    h: LanguageCollection,
    fallback: GenerationEngine,
    last: Option<Hypothesis>,
}

impl TelltaleOracleGenerator {
    pub fn new(k: LanguageCollection, h: LanguageCollection, max_cutoff: usize) -> Self {
        TelltaleOracleGenerator {
            fallback: GenerationEngine::new(
                k.clone(),
                Some(h.clone()),
                HarmChoice::Largest,
                max_cutoff,
            ),
            k,
            h,
            last: None,
        }
    }

    fn identify(
        coll: &LanguageCollection,
        s: &RevealedSet,
        consistent: impl Fn(&EventuallyPeriodicSet, &RevealedSet) -> bool,
        seen: &std::collections::BTreeSet<crate::set_algebra::Element>,
    ) -> Option<(usize, EventuallyPeriodicSet)> {
        (1..=coll.available(s.step().max(1))).find_map(|i| {
            let l = coll.at(i)?;
            let tell = coll.telltale_for(i).ok()?;
            (consistent(&l, s) && tell.is_subset(seen)).then_some((i, l))
        })
    }
}

impl Learner for TelltaleOracleGenerator {
    fn name(&self) -> &'static str {
        "telltale_oracle"
    }

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError> {
        let kh = Self::identify(&self.k, s, is_consistent_true, s.pos());
        let hh = Self::identify(&self.h, s, is_consistent_harm, s.neg());
        if let (Some((ki, kl)), Some((hi, hl))) = (kh, hh) {
            self.last = Some(Hypothesis {
                k: Some(ki),
                h: Some(hi),
            });
            return Ok(reference_safe_generate(&kl, &hl, s, Mode::Strict));
        }
        match self.fallback.step(s)? {
            Selection::NoCandidate => {
                self.last = None;
                Ok(LearnerOutput::Generate(U1))
            }
            Selection::Generate { element, k, h } => {
                self.last = Some(Hypothesis { k: Some(k), h });
                Ok(LearnerOutput::Generate(element))
            }
            Selection::Stuck { k, h } => {
                self.last = Some(Hypothesis { k: Some(k), h });
                let x = self
                    .fallback
                    .true_lang(k)
                    .first_member_outside(|x| s.contains(x))
                    .expect("collection languages are infinite");
                Ok(LearnerOutput::Generate(x))
            }
        }
    }

    fn hypothesis(&self) -> Option<Hypothesis> {
        self.last
    }
}
