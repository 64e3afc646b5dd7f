//! Learners for the generation and identification games.
//!
//! Every learner is a stateful object fed the whole revealed sample at each
//! step. Generation learners answer with [`LearnerOutput::Generate`] or
//! [`LearnerOutput::Bottom`]; identification learners answer with
//! [`LearnerOutput::Index`].

mod engine;
mod generators;
mod identify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collections::RevealedSet;
use crate::set_algebra::{Element, Rank};

pub use engine::{
    km_generate, km_is_critical, sg_inf_generate, GenerationEngine, Selection, DEFAULT_MAX_CUTOFF,
};
pub use generators::{
    reference_safe_generate, KmGenerator, ReferenceSafeGenerator, SafeGeneratorInf,
    TelltaleOracleGenerator,
};
pub use identify::{
    identify_from_sg_step, order_routine, probe_sample, subset_probe, ConstantIdentifier,
    EagerSafeIdentifier, IdentifierFromSg, NaiveIdentifier, ReferenceSg, SgSubroutine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnerOutput {
    Generate(Element),
    Bottom,
    Index(usize),
}

impl LearnerOutput {
    pub fn kind(&self) -> &'static str {
        match self {
            LearnerOutput::Generate(_) => "generate",
            LearnerOutput::Bottom => "bottom",
            LearnerOutput::Index(_) => "index",
        }
    }

    /// The element or index carried by the output, as a signed integer.
    pub fn value(&self) -> Option<i64> {
        match *self {
            LearnerOutput::Generate(x) => Some(x),
            LearnerOutput::Bottom => None,
            LearnerOutput::Index(i) => Some(i as i64),
        }
    }

    /// Inverse of `kind` and `value`.
    pub fn from_parts(kind: &str, value: Option<i64>) -> Option<Self> {
        match (kind, value) {
            ("generate", Some(x)) => Some(LearnerOutput::Generate(x)),
            ("bottom", None) => Some(LearnerOutput::Bottom),
            ("index", Some(i)) if i >= 1 => Some(LearnerOutput::Index(i as usize)),
            _ => None,
        }
    }
}

impl fmt::Display for LearnerOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerOutput::Generate(x) => write!(f, "generate {x}"),
            LearnerOutput::Bottom => f.write_str("⊥"),
            LearnerOutput::Index(i) => write!(f, "index {i}"),
        }
    }
}

/// Whether a generator may answer ⊥ when it finds nothing safe, or must
/// name some element anyway.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Relaxed,
}

/// How the harmful hypothesis is picked among consistent candidates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HarmChoice {
    /// Highest index whose prefix contains every earlier consistent prefix.
    #[default]
    Largest,
    /// Highest index whose prefix is contained in every earlier one.
    Smallest,
}

/// Collection indices a learner based its latest output on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub k: Option<usize>,
    pub h: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LearnerError {
    #[error("cutoff {needed} exceeds the configured maximum {max}")]
    CutoffExceeded { needed: Rank, max: Rank },
    #[error("infinite-difference promise broken: true index {k} minus harmful index {h:?} has no unseen element")]
    PromiseViolated { k: usize, h: Option<usize> },
}

pub trait Learner {
    fn name(&self) -> &'static str;

    fn respond(&mut self, s: &RevealedSet) -> Result<LearnerOutput, LearnerError>;

    fn hypothesis(&self) -> Option<Hypothesis> {
        None
    }
}

/// First universe element, the arbitrary answer used by fallbacks.
pub const U1: Element = 0;
