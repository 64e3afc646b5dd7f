//! Critical-language selection with prefix bitsets.
//!
//! The naive generation loop raises the cutoff `m` one rank at a time and
//! re-tests every prefix containment. The engine computes the same answer
//! from per-candidate thresholds instead. For each consistent candidate `n`,
//! `r_n` is the first rank at which `L_n[m]` stops being contained in the
//! intersection (or, for the dual harmful choice, stops containing the
//! union) of the earlier consistent candidates. `n` is `(t, m)`-critical
//! exactly when `r_n > m`, so the selected candidate only changes when `m`
//! crosses a threshold and the loop can jump from event to event.
//!
//! Prefixes are kept as bitsets over the first `cap` universe ranks. When an
//! answer lies beyond the cap, the exact algebra decides whether it exists
//! at all before the cap is grown.

use crate::collections::{LabeledExample, LanguageCollection, RevealedSet, Side};
use crate::set_algebra::{universe_elem, universe_index, Element, EventuallyPeriodicSet, Rank};

use super::{HarmChoice, LearnerError};

const INITIAL_CAP: usize = 256;

/// Default bound on the cutoff before a learner gives up loudly.
pub const DEFAULT_MAX_CUTOFF: usize = 1 << 16;

fn first_bit(words: impl Iterator<Item = u64>) -> Option<Rank> {
    for (i, w) in words.enumerate() {
        if w != 0 {
            return Some((i * 64 + w.trailing_zeros() as usize + 1) as Rank);
        }
    }
    None
}

fn prefix_bits(l: &EventuallyPeriodicSet, universe: &[Element]) -> Vec<u64> {
    let mut bits = vec![0u64; universe.len() / 64];
    for (i, &x) in universe.iter().enumerate() {
        if l.member(x) {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

/// Languages of one side, loaded lazily, with incremental consistency.
#[derive(Clone, Debug)]
pub(crate) struct CandidatePool {
    coll: LanguageCollection,
    side: Side,
    langs: Vec<EventuallyPeriodicSet>,
    consistent: Vec<bool>,
    bits: Vec<Option<Vec<u64>>>,
    cursor: usize,
}

impl CandidatePool {
    pub(crate) fn new(coll: LanguageCollection, side: Side) -> Self {
        CandidatePool {
            coll,
            side,
            langs: Vec::new(),
            consistent: Vec::new(),
            bits: Vec::new(),
            cursor: 0,
        }
    }

    pub(crate) fn collection(&self) -> &LanguageCollection {
        &self.coll
    }

    fn relevant(&self, e: &LabeledExample) -> bool {
        matches!(
            (self.side, e.label),
            (Side::True, crate::collections::Label::True)
                | (Side::Harm, crate::collections::Label::Harm)
        )
    }

    fn side_set<'a>(&self, s: &'a RevealedSet) -> &'a std::collections::BTreeSet<Element> {
        match self.side {
            Side::True => s.pos(),
            Side::Harm => s.neg(),
        }
    }

    /// Brings consistency up to date with `s` and loads indices up to `t`.
    pub(crate) fn sync(&mut self, s: &RevealedSet, t: usize, universe: &[Element]) {
        for e in &s.history()[self.cursor..] {
            if !self.relevant(e) {
                continue;
            }
            for i in 0..self.langs.len() {
                if self.consistent[i] && !self.langs[i].member(e.element) {
                    self.consistent[i] = false;
                    self.bits[i] = None;
                }
            }
        }
        self.cursor = s.history().len();
        let target = self.coll.available(t);
        while self.langs.len() < target {
            let l = self.coll.at(self.langs.len() + 1).expect("available index");
            let ok = self.side_set(s).iter().all(|&x| l.member(x));
            self.bits.push(ok.then(|| prefix_bits(&l, universe)));
            self.consistent.push(ok);
            self.langs.push(l);
        }
    }

    pub(crate) fn rebuild(&mut self, universe: &[Element]) {
        for i in 0..self.langs.len() {
            if self.consistent[i] {
                self.bits[i] = Some(prefix_bits(&self.langs[i], universe));
            }
        }
    }

    /// Consistent indices (1-based), ascending.
    pub(crate) fn consistent(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        (0..self.langs.len())
            .filter(|&i| self.consistent[i])
            .map(|i| i + 1)
    }

    pub(crate) fn lang(&self, index: usize) -> &EventuallyPeriodicSet {
        &self.langs[index - 1]
    }

    fn bits(&self, index: usize) -> &[u64] {
        self.bits[index - 1]
            .as_deref()
            .expect("bits for consistent candidate")
    }

    /// `(index, r)` for every consistent candidate; `r = None` means the
    /// threshold lies beyond the cap (or does not exist).
    fn thresholds(&self, choice: HarmChoice) -> Vec<(usize, Option<Rank>)> {
        let mut out = Vec::new();
        let mut acc: Option<Vec<u64>> = None;
        for n in self.consistent() {
            let b = self.bits(n);
            let r = acc.as_ref().and_then(|acc| match choice {
                HarmChoice::Smallest => first_bit(b.iter().zip(acc).map(|(x, a)| x & !a)),
                HarmChoice::Largest => first_bit(b.iter().zip(acc).map(|(x, a)| a & !x)),
            });
            match acc.as_mut() {
                None => acc = Some(b.to_vec()),
                Some(acc) => {
                    for (a, x) in acc.iter_mut().zip(b) {
                        match choice {
                            HarmChoice::Smallest => *a &= x,
                            HarmChoice::Largest => *a |= x,
                        }
                    }
                }
            }
            out.push((n, r));
        }
        out
    }

    /// Exact threshold of `n` computed with the algebra.
    fn exact_threshold(&self, n: usize, choice: HarmChoice) -> Option<Rank> {
        let earlier: Vec<&EventuallyPeriodicSet> = self
            .consistent()
            .take_while(|&j| j < n)
            .map(|j| self.lang(j))
            .collect();
        let (first, rest) = earlier.split_first()?;
        let acc = rest.iter().fold((*first).clone(), |acc, l| match choice {
            HarmChoice::Smallest => acc.intersect(l),
            HarmChoice::Largest => acc.union(l),
        });
        let d = match choice {
            HarmChoice::Smallest => self.lang(n).difference(&acc),
            HarmChoice::Largest => acc.difference(self.lang(n)),
        };
        d.enumerate().next().map(universe_index)
    }
}

/// What the engine settled on for one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// No true-side candidate is consistent.
    NoCandidate,
    Generate {
        element: Element,
        k: usize,
        h: Option<usize>,
    },
    /// `(K_c \ H_c) \ S_t` is empty and no larger cutoff changes the choice.
    Stuck { k: usize, h: Option<usize> },
}

/// Generation by the highest critical true language, optionally paired with
/// a harmful language chosen by the dual rule.
#[derive(Clone, Debug)]
pub struct GenerationEngine {
    k: CandidatePool,
    h: Option<CandidatePool>,
    harm_choice: HarmChoice,
    cap: usize,
    max_cutoff: usize,
    universe: Vec<Element>,
}

impl GenerationEngine {
    pub fn new(
        k: LanguageCollection,
        h: Option<LanguageCollection>,
        harm_choice: HarmChoice,
        max_cutoff: usize,
    ) -> Self {
        GenerationEngine {
            k: CandidatePool::new(k, Side::True),
            h: h.map(|h| CandidatePool::new(h, Side::Harm)),
            harm_choice,
            cap: 0,
            max_cutoff,
            universe: Vec::new(),
        }
    }

    pub fn true_collection(&self) -> &LanguageCollection {
        self.k.collection()
    }

    pub fn true_lang(&self, index: usize) -> &EventuallyPeriodicSet {
        self.k.lang(index)
    }

    pub fn harm_lang(&self, index: usize) -> Option<&EventuallyPeriodicSet> {
        self.h.as_ref().map(|h| h.lang(index))
    }

    fn set_cap(&mut self, cap: usize) -> Result<(), LearnerError> {
        if cap > self.max_cutoff {
            return Err(LearnerError::CutoffExceeded {
                needed: cap as u64,
                max: self.max_cutoff as u64,
            });
        }
        self.cap = cap;
        self.universe = (1..=cap as Rank).map(universe_elem).collect();
        self.k.rebuild(&self.universe);
        if let Some(h) = self.h.as_mut() {
            h.rebuild(&self.universe);
        }
        Ok(())
    }

    fn sync(&mut self, s: &RevealedSet) -> Result<(), LearnerError> {
        let want = (2 * s.max_rank() as usize).max(INITIAL_CAP);
        if self.cap < want {
            let cap = want.next_power_of_two().max(self.cap);
            self.set_cap(cap)?;
        }
        let t = s.step().max(1);
        self.k.sync(s, t, &self.universe);
        if let Some(h) = self.h.as_mut() {
            h.sync(s, t, &self.universe);
        }
        Ok(())
    }

    /// Candidates selected at the initial cutoff, without searching for an
    /// output. `None` when nothing on the true side is consistent.
    pub fn select_at_start(
        &mut self,
        s: &RevealedSet,
    ) -> Result<Option<(usize, Option<usize>)>, LearnerError> {
        self.sync(s)?;
        let m = s.max_rank().max(1);
        let kt = self.k.thresholds(HarmChoice::Smallest);
        let ht = self.h.as_ref().map(|h| h.thresholds(self.harm_choice));
        let pick = |v: &[(usize, Option<Rank>)]| {
            v.iter()
                .rev()
                .find(|(_, r)| r.is_none_or(|r| r > m))
                .map(|p| p.0)
        };
        Ok(pick(&kt).map(|k| (k, ht.as_deref().and_then(pick))))
    }

    pub fn step(&mut self, s: &RevealedSet) -> Result<Selection, LearnerError> {
        self.sync(s)?;
        if self.k.consistent().next().is_none() {
            return Ok(Selection::NoCandidate);
        }
        let m0 = s.max_rank().max(1);
        loop {
            let words = self.cap / 64;
            let mut seen = vec![0u64; words];
            for &x in s.all() {
                let r = universe_index(x) as usize;
                seen[(r - 1) / 64] |= 1 << ((r - 1) % 64);
            }
            let kt = self.k.thresholds(HarmChoice::Smallest);
            let ht = self.h.as_ref().map(|h| h.thresholds(self.harm_choice));
            let critical = |v: &[(usize, Option<Rank>)], m: Rank| {
                v.iter()
                    .rev()
                    .copied()
                    .find(|(_, r)| r.is_none_or(|r| r > m))
            };
            let mut m = m0;
            let (n, hh) = loop {
                let (n, rn) = critical(&kt, m).expect("first consistent is always critical");
                let hc = ht.as_deref().and_then(|v| critical(v, m));
                let kb = self.k.bits(n);
                let f = match hc {
                    Some((h, _)) => {
                        let hb = self.h.as_ref().expect("harm pool").bits(h);
                        first_bit((0..words).map(|i| kb[i] & !hb[i] & !seen[i]))
                    }
                    None => first_bit((0..words).map(|i| kb[i] & !seen[i])),
                };
                let next = match (rn, hc.and_then(|c| c.1)) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                if let Some(f) = f {
                    if f <= m || next.is_none_or(|nx| f < nx) {
                        return Ok(Selection::Generate {
                            element: self.universe[f as usize - 1],
                            k: n,
                            h: hc.map(|c| c.0),
                        });
                    }
                }
                match next {
                    Some(nx) => m = nx,
                    None => break (n, hc.map(|c| c.0)),
                }
            };

            // Every remaining event lies beyond the cap. Ask the algebra
            // whether any exists before growing it.
            let kl = self.k.lang(n);
            let target = match hh {
                Some(h) => kl.difference(self.h.as_ref().expect("harm pool").lang(h)),
                None => kl.clone(),
            };
            let events = [
                self.k.exact_threshold(n, HarmChoice::Smallest),
                hh.and_then(|h| {
                    self.h
                        .as_ref()
                        .expect("harm pool")
                        .exact_threshold(h, self.harm_choice)
                }),
                target
                    .first_member_outside(|x| s.contains(x))
                    .map(universe_index),
            ];
            let Some(needed) = events.into_iter().flatten().min() else {
                return Ok(Selection::Stuck { k: n, h: hh });
            };
            let mut cap = self.cap * 2;
            while (cap as Rank) < needed {
                cap *= 2;
            }
            self.set_cap(cap)?;
        }
    }
}

/// `(t, m)`-criticality straight from the definition.
pub fn km_is_critical(
    coll: &LanguageCollection,
    s: &RevealedSet,
    n: usize,
    t: usize,
    m: Rank,
) -> bool {
    critical_by_definition(coll, s, n, t, m, Side::True, HarmChoice::Smallest)
}

fn critical_by_definition(
    coll: &LanguageCollection,
    s: &RevealedSet,
    n: usize,
    t: usize,
    m: Rank,
    side: Side,
    choice: HarmChoice,
) -> bool {
    let consistent = |l: &EventuallyPeriodicSet| match side {
        Side::True => crate::collections::is_consistent_true(l, s),
        Side::Harm => crate::collections::is_consistent_harm(l, s),
    };
    if n > coll.available(t) {
        return false;
    }
    let Some(ln) = coll.at(n) else { return false };
    if !consistent(&ln) {
        return false;
    }
    let pn = ln.prefix(m);
    (1..n).all(|j| {
        let lj = coll.at(j).expect("index below n");
        if !consistent(&lj) {
            return true;
        }
        let pj = lj.prefix(m);
        match choice {
            HarmChoice::Smallest => pn.iter().all(|x| pj.contains(x)),
            HarmChoice::Largest => pj.iter().all(|x| pn.contains(x)),
        }
    })
}

fn highest_critical(
    coll: &LanguageCollection,
    s: &RevealedSet,
    t: usize,
    m: Rank,
    side: Side,
    choice: HarmChoice,
) -> Option<usize> {
    (1..=coll.available(t))
        .rev()
        .find(|&n| critical_by_definition(coll, s, n, t, m, side, choice))
}

/// Generation with the cutoff raised one rank at a time. Slow; kept as the
/// reference the engine is tested against.
pub fn km_generate(
    coll: &LanguageCollection,
    s: &RevealedSet,
    t: usize,
    max_cutoff: Rank,
) -> Result<Option<Element>, LearnerError> {
    sg_inf_generate(coll, None, s, t, HarmChoice::Largest, max_cutoff)
}

/// Generation from the highest critical true language minus the harmful
/// language picked by `choice`, raising the cutoff one rank at a time.
/// `Ok(None)` when nothing on the true side is consistent.
pub fn sg_inf_generate(
    k: &LanguageCollection,
    h: Option<&LanguageCollection>,
    s: &RevealedSet,
    t: usize,
    choice: HarmChoice,
    max_cutoff: Rank,
) -> Result<Option<Element>, LearnerError> {
    let mut m = s.max_rank().max(1);
    loop {
        let Some(n) = highest_critical(k, s, t, m, Side::True, HarmChoice::Smallest) else {
            return Ok(None);
        };
        let kn = k.at(n).expect("critical index exists");
        let hn =
            h.and_then(|h| highest_critical(h, s, t, m, Side::Harm, choice).and_then(|i| h.at(i)));
        let hit = (1..=m)
            .map(universe_elem)
            .find(|&x| kn.member(x) && !hn.as_ref().is_some_and(|h| h.member(x)) && !s.contains(x));
        if let Some(x) = hit {
            return Ok(Some(x));
        }
        m += 1;
        if m > max_cutoff {
            return Err(LearnerError::CutoffExceeded {
                needed: m,
                max: max_cutoff,
            });
        }
    }
}
