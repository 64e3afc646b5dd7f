//! Indexed language collections, telltales and sample consistency.
//!
//! Indices are 1-based throughout. Explicit collections have a fixed length;
//! the built-in parameterized families are total and answer any index.

mod sample;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::set_algebra::{parse_set, universe_elem, Element, EventuallyPeriodicSet, ParseError};

pub use sample::{Label, LabeledExample, RevealedSet};

/// Indices a built-in family is validated over when nothing else is declared.
pub const DEFAULT_DECLARED_PREFIX: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollectionError {
    #[error("collection `{name}` is empty")]
    Empty { name: String },
    #[error("collection `{name}` index {index} is finite: {set}")]
    FiniteMember {
        name: String,
        index: usize,
        set: String,
    },
    #[error("collection `{name}` has no index {index}")]
    IndexOutOfRange { name: String, index: usize },
    #[error("collection `{name}` declares no telltale for index {index}")]
    MissingTelltale { name: String, index: usize },
    #[error("collection `{name}`: telltale of index {index} is not contained in its language")]
    TelltaleNotSubset { name: String, index: usize },
    #[error(
        "collection `{name}`: telltale of index {index} lies in index {other}, a proper subset of it"
    )]
    AngluinViolation {
        name: String,
        index: usize,
        other: usize,
    },
    #[error("true index {k} minus harmful index {h} is not infinite")]
    FiniteDifference { k: usize, h: usize },
    #[error("property P* fails: {0}")]
    Pstar(String),
    #[error("collection `{name}` index {index}: {source}")]
    Parse {
        name: String,
        index: usize,
        source: ParseError,
    },
}

/// True-side or harm-side collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    True,
    Harm,
}

#[derive(Clone, Debug)]
enum Family {
    Explicit(Vec<EventuallyPeriodicSet>),
    /// `I, O, Q(-1), Q(-2), ...`
    IdTrue,
    /// `N | E, Y(0), Y(-1), ...`
    IdHarm,
    /// `E`, then `Fin{evens < M} | Ray(M, 4)` for `M = 2, 4, 6, ...`
    PstarTrue,
    /// `Ray(0, 1)`, then `Fin{0..M-1} | Ray(M + 1, 2)` for `M = 2, 4, 6, ...`
    PstarHarm,
}

#[derive(Clone, Debug)]
pub struct LanguageCollection {
    name: String,
    family: Family,
    declared_prefix: Option<usize>,
    telltales: BTreeMap<usize, BTreeSet<Element>>,
}

impl LanguageCollection {
    pub fn explicit(name: impl Into<String>, languages: Vec<EventuallyPeriodicSet>) -> Self {
        LanguageCollection {
            name: name.into(),
            family: Family::Explicit(languages),
            declared_prefix: None,
            telltales: BTreeMap::new(),
        }
    }

    /// Builds an explicit collection from set expressions.
    pub fn from_specs<S: AsRef<str>>(
        name: impl Into<String>,
        specs: &[S],
    ) -> Result<Self, CollectionError> {
        let name = name.into();
        let languages = specs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_set(s.as_ref()).map_err(|source| CollectionError::Parse {
                    name: name.clone(),
                    index: i + 1,
                    source,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self::explicit(name, languages))
    }

    fn family(name: &str, family: Family) -> Self {
        LanguageCollection {
            name: name.to_string(),
            family,
            declared_prefix: None,
            telltales: BTreeMap::new(),
        }
    }

    pub fn with_telltales(mut self, telltales: BTreeMap<usize, BTreeSet<Element>>) -> Self {
        self.telltales = telltales;
        self
    }

    pub fn with_declared_prefix(mut self, n: usize) -> Self {
        self.declared_prefix = Some(n);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The language at `index`, or `None` past the end of an explicit list.
    pub fn at(&self, index: usize) -> Option<EventuallyPeriodicSet> {
        if index == 0 {
            return None;
        }
        let m = 2 * (index as Element - 1);
        Some(match &self.family {
            Family::Explicit(v) => return v.get(index - 1).cloned(),
            Family::IdTrue => match index {
                1 => EventuallyPeriodicSet::integers(),
                2 => EventuallyPeriodicSet::odd_positive(),
                b => EventuallyPeriodicSet::q_set(b as u64 - 2),
            },
            Family::IdHarm => match index {
                1 => {
                    &EventuallyPeriodicSet::negatives() | &EventuallyPeriodicSet::even_nonnegative()
                }
                a => EventuallyPeriodicSet::y_set(a as u64 - 2),
            },
            Family::PstarTrue => match index {
                1 => EventuallyPeriodicSet::even_nonnegative(),
                _ => {
                    &EventuallyPeriodicSet::finite((0..m).step_by(2))
                        | &EventuallyPeriodicSet::ray(m, 4)
                }
            },
            Family::PstarHarm => match index {
                1 => EventuallyPeriodicSet::ray(0, 1),
                _ => &EventuallyPeriodicSet::finite(0..m) | &EventuallyPeriodicSet::ray(m + 1, 2),
            },
        })
    }

    /// Number of languages for explicit collections, `None` for infinite families.
    pub fn len(&self) -> Option<usize> {
        match &self.family {
            Family::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// How many of the first `t` indices exist.
    pub fn available(&self, t: usize) -> usize {
        self.len().map_or(t, |n| n.min(t))
    }

    /// Indices the validator covers: the declared prefix, else the whole
    /// explicit list, else a fixed default for families.
    pub fn declared_prefix(&self) -> usize {
        match (self.declared_prefix, self.len()) {
            (Some(d), Some(n)) => d.min(n),
            (Some(d), None) => d,
            (None, Some(n)) => n,
            (None, None) => DEFAULT_DECLARED_PREFIX,
        }
    }

    pub fn has_telltales(&self) -> bool {
        !self.telltales.is_empty()
    }

    pub fn telltale_for(&self, index: usize) -> Result<&BTreeSet<Element>, CollectionError> {
        self.telltales
            .get(&index)
            .ok_or_else(|| CollectionError::MissingTelltale {
                name: self.name.clone(),
                index,
            })
    }

    /// Checks that every language within the declared prefix is infinite and
    /// that declared telltales satisfy Angluin's condition against every
    /// other language in the prefix.
    pub fn validate(&self) -> Result<(), CollectionError> {
        let n = self.declared_prefix();
        if n == 0 {
            return Err(CollectionError::Empty {
                name: self.name.clone(),
            });
        }
        let langs: Vec<EventuallyPeriodicSet> = (1..=n).filter_map(|i| self.at(i)).collect();
        for (i, l) in langs.iter().enumerate() {
            if !l.is_infinite() {
                return Err(CollectionError::FiniteMember {
                    name: self.name.clone(),
                    index: i + 1,
                    set: l.to_string(),
                });
            }
        }
        for (&i, tell) in &self.telltales {
            let li = langs
                .get(i - 1)
                .ok_or_else(|| CollectionError::IndexOutOfRange {
                    name: self.name.clone(),
                    index: i,
                })?;
            if !tell.iter().all(|&x| li.member(x)) {
                return Err(CollectionError::TelltaleNotSubset {
                    name: self.name.clone(),
                    index: i,
                });
            }
            for (j, lj) in langs.iter().enumerate() {
                if tell.iter().all(|&x| lj.member(x)) && lj.is_proper_subset(li) {
                    return Err(CollectionError::AngluinViolation {
                        name: self.name.clone(),
                        index: i,
                        other: j + 1,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The two families used against safe identification: true side
/// `I, O, Q(-1), Q(-2), ...` and harmful side `N | E, Y(0), Y(-1), ...`.
pub fn id_impossibility_collections() -> (LanguageCollection, LanguageCollection) {
    (
        LanguageCollection::family("id_true", Family::IdTrue),
        LanguageCollection::family("id_harm", Family::IdHarm),
    )
}

/// A pair of families with the diagonalization property. Index 1 on each
/// side is the top pair `E ⊆ Ray(0, 1)`. Index `j >= 2` corresponds to the
/// bound `M = 2(j - 1)`: the true language keeps every even below `M` and
/// every fourth integer from `M` on, the harmful language keeps `0..M` and
/// the odds above `M`.
pub fn pstar_collections() -> (LanguageCollection, LanguageCollection) {
    (
        LanguageCollection::family("pstar_true", Family::PstarTrue),
        LanguageCollection::family("pstar_harm", Family::PstarHarm),
    )
}

pub fn is_consistent_true(l: &EventuallyPeriodicSet, s: &RevealedSet) -> bool {
    s.pos().iter().all(|&x| l.member(x))
}

pub fn is_consistent_harm(l: &EventuallyPeriodicSet, s: &RevealedSet) -> bool {
    s.neg().iter().all(|&x| l.member(x))
}

/// Indices among the first `t` whose language is consistent with `s` on the
/// given side, ascending.
pub fn consistent_indices(
    coll: &LanguageCollection,
    s: &RevealedSet,
    t: usize,
    side: Side,
) -> Vec<usize> {
    (1..=coll.available(t))
        .filter(|&i| {
            let l = coll.at(i).expect("index within available range");
            match side {
                Side::True => is_consistent_true(&l, s),
                Side::Harm => is_consistent_harm(&l, s),
            }
        })
        .collect()
}

/// Checks that every true language minus every harmful language, within
/// both declared prefixes, is infinite.
pub fn validate_infinite_differences(
    k: &LanguageCollection,
    h: &LanguageCollection,
) -> Result<(), CollectionError> {
    let hs: Vec<EventuallyPeriodicSet> =
        (1..=h.declared_prefix()).filter_map(|j| h.at(j)).collect();
    for i in 1..=k.declared_prefix() {
        let Some(ki) = k.at(i) else { break };
        for (j, hj) in hs.iter().enumerate() {
            if !ki.difference(hj).is_infinite() {
                return Err(CollectionError::FiniteDifference { k: i, h: j + 1 });
            }
        }
    }
    Ok(())
}

/// Searches the first `limit` indices for a pair `(j, j*)` with
/// `t_k ⊆ K_j ⊊ K_top`, `t_h ⊆ H_j* ⊊ H_top` and `K_j \ H_j*` infinite.
pub fn find_pstar_witness(
    k: &LanguageCollection,
    h: &LanguageCollection,
    top: (usize, usize),
    t_k: &BTreeSet<Element>,
    t_h: &BTreeSet<Element>,
    limit: usize,
) -> Option<(usize, usize)> {
    find_pstar_witness_from(k, h, top, t_k, t_h, limit, 1)
}

/// [`find_pstar_witness`] starting at true index `start`. Growing `t_k` and
/// `t_h` never revives a rejected index, so a search for a superset of an
/// earlier sample may resume at the earlier witness.
pub fn find_pstar_witness_from(
    k: &LanguageCollection,
    h: &LanguageCollection,
    top: (usize, usize),
    t_k: &BTreeSet<Element>,
    t_h: &BTreeSet<Element>,
    limit: usize,
    start: usize,
) -> Option<(usize, usize)> {
    let k_top = k.at(top.0)?;
    let h_top = h.at(top.1)?;
    let fits = |l: &EventuallyPeriodicSet, top: &EventuallyPeriodicSet, t: &BTreeSet<Element>| {
        // large elements are the likeliest to fail
        t.iter().rev().all(|&x| l.member(x)) && l.is_proper_subset(top)
    };
    // harmful candidates are materialized only as far as the search reaches
    let mut hs: Vec<(usize, EventuallyPeriodicSet)> = Vec::new();
    let mut h_next = 1;
    for j in start.max(1)..=k.available(limit) {
        let Some(kj) = k.at(j) else { break };
        if !fits(&kj, &k_top, t_k) {
            continue;
        }
        let mut pos = 0;
        loop {
            if pos == hs.len() {
                if h_next > h.available(limit) {
                    break;
                }
                let Some(l) = h.at(h_next) else { break };
                h_next += 1;
                if fits(&l, &h_top, t_h) {
                    hs.push((h_next - 1, l));
                }
                continue;
            }
            if kj.difference(&hs[pos].1).is_infinite() {
                return Some((j, hs[pos].0));
            }
            pos += 1;
        }
    }
    None
}

/// Checks the diagonalization property at desk scale: the top pair is
/// nested, and a witness exists for the members of the top languages among
/// the first `universe_prefix` universe elements. A witness for a set also
/// serves all its subsets, so checking the prefixes suffices.
pub fn validate_pstar(
    k: &LanguageCollection,
    h: &LanguageCollection,
    top: (usize, usize),
    universe_prefix: u64,
    limit: usize,
) -> Result<(), CollectionError> {
    let missing = |side: &str, i| CollectionError::Pstar(format!("{side} index {i} is missing"));
    let k_top = k.at(top.0).ok_or_else(|| missing("true", top.0))?;
    let h_top = h.at(top.1).ok_or_else(|| missing("harmful", top.1))?;
    if !k_top.is_subset(&h_top) {
        return Err(CollectionError::Pstar(format!(
            "top pair is not nested: {k_top} vs {h_top}"
        )));
    }
    let mut t_k = BTreeSet::new();
    let mut t_h = BTreeSet::new();
    let mut start = 1;
    for r in 1..=universe_prefix {
        let x = universe_elem(r);
        let grew = (k_top.member(x) && t_k.insert(x)) | (h_top.member(x) && t_h.insert(x));
        if !grew {
            continue;
        }
        match find_pstar_witness_from(k, h, top, &t_k, &t_h, limit, start) {
            Some((j, _)) => start = j,
            None => {
                return Err(CollectionError::Pstar(format!(
                    "no witness within {limit} indices for the first {r} universe elements"
                )))
            }
        }
    }
    Ok(())
}
