//! Scenario files: one game, or a battery of other scenario files.
//!
//! ```toml
//! version = 1
//! name = "km"
//! game = "sg"
//! horizon = 300
//! window = 50
//!
//! [true_collection]
//! languages = ["I", "O", "E", "Q(-1)", "Y(0)"]
//!
//! [pair]
//! k = "O"
//! h = "Fin{}"
//!
//! [adversary]
//! kind = "enumerator"
//!
//! [learner]
//! kind = "km"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::{
    Adversary, DiagonalAdversary, Enumerator, FairInterleaver, PhasedIdAdversary,
};
use crate::collections::{
    id_impossibility_collections, pstar_collections, validate_infinite_differences, validate_pstar,
    CollectionError, LanguageCollection,
};
use crate::learners::{
    ConstantIdentifier, EagerSafeIdentifier, HarmChoice, IdentifierFromSg, KmGenerator, Learner,
    Mode, NaiveIdentifier, ReferenceSafeGenerator, ReferenceSg, SafeGeneratorInf,
    TelltaleOracleGenerator, DEFAULT_MAX_CUTOFF,
};
use crate::set_algebra::{parse_set, EventuallyPeriodicSet, ParseError};

use super::{Arena, GameKind, Outcome};

pub const SCENARIO_VERSION: u32 = 1;

const DEFAULT_WITNESS_LIMIT: usize = 4096;
const PSTAR_CHECK_PREFIX: u64 = 64;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("scenario syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unsupported scenario version {found}, expected {SCENARIO_VERSION}")]
    Version { found: u32 },
    #[error("field `{0}` is required")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("`{field}`: {source}")]
    Set { field: String, source: ParseError },
    #[error(transparent)]
    Collection(#[from] CollectionError),
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    IdTrue,
    IdHarm,
    PstarTrue,
    PstarHarm,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectionSpec {
    pub preset: Option<Preset>,
    pub languages: Option<Vec<String>>,
    /// One finite set per language, in index order.
    pub telltales: Option<Vec<Vec<i64>>>,
    pub declared_prefix: Option<usize>,
}

impl CollectionSpec {
    pub fn build(&self, name: &str) -> Result<LanguageCollection, ScenarioError> {
        let coll = match (&self.preset, &self.languages) {
            (Some(p), None) => {
                let (idt, idh) = id_impossibility_collections();
                let (pt, ph) = pstar_collections();
                match p {
                    Preset::IdTrue => idt,
                    Preset::IdHarm => idh,
                    Preset::PstarTrue => pt,
                    Preset::PstarHarm => ph,
                }
            }
            (None, Some(langs)) => LanguageCollection::from_specs(name, langs)?,
            _ => {
                return Err(ScenarioError::Invalid(format!(
                    "`{name}` needs exactly one of `preset` and `languages`"
                )))
            }
        };
        let coll = match &self.telltales {
            Some(ts) => {
                let map: BTreeMap<usize, BTreeSet<i64>> = ts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (i + 1, t.iter().copied().collect()))
                    .collect();
                coll.with_telltales(map)
            }
            None => coll,
        };
        let coll = match self.declared_prefix {
            Some(n) => coll.with_declared_prefix(n),
            None => coll,
        };
        coll.validate()?;
        Ok(coll)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub k: String,
    pub h: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversarySpec {
    /// Positive examples of `K` only.
    Enumerator,
    FairInterleaver,
    PhasedId,
    Diagonal {
        top: Option<(usize, usize)>,
        witness_limit: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LearnerSpec {
    Km {
        max_cutoff: Option<usize>,
    },
    SgInf {
        #[serde(default)]
        harm_choice: HarmChoice,
        #[serde(default = "yes")]
        promise: bool,
        #[serde(default)]
        mode: Mode,
        max_cutoff: Option<usize>,
    },
    ReferenceSg {
        #[serde(default)]
        harm_choice: HarmChoice,
        #[serde(default)]
        mode: Mode,
        max_cutoff: Option<usize>,
    },
    TelltaleOracle {
        max_cutoff: Option<usize>,
    },
    /// Identification through the exact safe-generation subroutine.
    IdFromSg {
        #[serde(default = "relaxed")]
        mode: Mode,
    },
    NaiveId,
    EagerSi,
    Constant {
        index: usize,
    },
}

fn yes() -> bool {
    true
}

fn relaxed() -> Mode {
    Mode::Relaxed
}

/// The raw file. Either the game fields or `battery` must be present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub name: String,
    pub description: Option<String>,
    pub game: Option<GameKind>,
    pub horizon: Option<usize>,
    pub window: Option<usize>,
    pub true_collection: Option<CollectionSpec>,
    pub harm_collection: Option<CollectionSpec>,
    pub pair: Option<PairSpec>,
    pub adversary: Option<AdversarySpec>,
    pub learner: Option<LearnerSpec>,
    /// Other scenario files, relative to this one, or `builtin:<name>`.
    pub battery: Option<Vec<String>>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        if file.version != SCENARIO_VERSION {
            return Err(ScenarioError::Version {
                found: file.version,
            });
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn is_battery(&self) -> bool {
        self.battery.is_some()
    }

    /// Resolves a battery into its member scenarios. `base` is the
    /// directory relative paths are taken from.
    pub fn battery_members(&self, base: &Path) -> Result<Vec<ScenarioSpec>, ScenarioError> {
        let Some(list) = &self.battery else {
            return Ok(vec![self.to_spec()?]);
        };
        list.iter()
            .map(|entry| match entry.strip_prefix("builtin:") {
                Some(name) => ScenarioSpec::builtin(name),
                None => {
                    let path = base.join(entry);
                    let file = Self::load(&path)?;
                    if file.is_battery() {
                        return Err(ScenarioError::Invalid(format!(
                            "{}: batteries cannot be nested",
                            path.display()
                        )));
                    }
                    file.to_spec()
                }
            })
            .collect()
    }

    pub fn to_spec(&self) -> Result<ScenarioSpec, ScenarioError> {
        if self.is_battery() {
            return Err(ScenarioError::Invalid(format!(
                "`{}` is a battery, not a single scenario",
                self.name
            )));
        }
        let spec = ScenarioSpec {
            name: self.name.clone(),
            game: self.game.ok_or(ScenarioError::Missing("game"))?,
            horizon: self.horizon.ok_or(ScenarioError::Missing("horizon"))?,
            window: self.window.ok_or(ScenarioError::Missing("window"))?,
            true_collection: self
                .true_collection
                .clone()
                .ok_or(ScenarioError::Missing("true_collection"))?,
            harm_collection: self.harm_collection.clone(),
            pair: self.pair.clone(),
            adversary: self
                .adversary
                .clone()
                .ok_or(ScenarioError::Missing("adversary"))?,
            learner: self
                .learner
                .clone()
                .ok_or(ScenarioError::Missing("learner"))?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A fully specified game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub name: String,
    pub game: GameKind,
    pub horizon: usize,
    pub window: usize,
    pub true_collection: CollectionSpec,
    pub harm_collection: Option<CollectionSpec>,
    pub pair: Option<PairSpec>,
    pub adversary: AdversarySpec,
    pub learner: LearnerSpec,
}

const BUILTINS: &[(&str, &str)] = &[
    ("km", include_str!("../../scenarios/km.toml")),
    ("sg_inf", include_str!("../../scenarios/sg_inf.toml")),
    ("naive_li", include_str!("../../scenarios/naive_li.toml")),
    (
        "reduction_li",
        include_str!("../../scenarios/reduction_li.toml"),
    ),
    (
        "phased_eager",
        include_str!("../../scenarios/phased_eager.toml"),
    ),
    (
        "phased_stubborn",
        include_str!("../../scenarios/phased_stubborn.toml"),
    ),
    ("diagonal", include_str!("../../scenarios/diagonal.toml")),
    ("bottom", include_str!("../../scenarios/bottom.toml")),
    (
        "conservative",
        include_str!("../../scenarios/conservative.toml"),
    ),
];

impl ScenarioSpec {
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTINS.iter().map(|(n, _)| *n)
    }

    pub fn builtin(name: &str) -> Result<Self, ScenarioError> {
        let (_, text) = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| ScenarioError::UnknownBuiltin(name.to_string()))?;
        ScenarioFile::parse(text)?.to_spec()
    }

    pub fn with_horizon(mut self, horizon: usize) -> Result<Self, ScenarioError> {
        self.horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_window(mut self, window: usize) -> Result<Self, ScenarioError> {
        self.window = window;
        self.validate()?;
        Ok(self)
    }

    /// Checks everything that can be checked before step 1.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.build().map(|_| ())
    }

    fn collections(
        &self,
    ) -> Result<(LanguageCollection, Option<LanguageCollection>), ScenarioError> {
        let k = self.true_collection.build("true_collection")?;
        let h = self
            .harm_collection
            .as_ref()
            .map(|c| c.build("harm_collection"))
            .transpose()?;
        Ok((k, h))
    }

    fn fixed_pair(&self) -> Result<(EventuallyPeriodicSet, EventuallyPeriodicSet), ScenarioError> {
        let p = self.pair.as_ref().ok_or(ScenarioError::Missing("pair"))?;
        let parse = |field: &str, s: &str| {
            parse_set(s).map_err(|source| ScenarioError::Set {
                field: field.to_string(),
                source,
            })
        };
        Ok((parse("pair.k", &p.k)?, parse("pair.h", &p.h)?))
    }

    /// Constructs a ready-to-run arena.
    pub fn build(&self) -> Result<Arena, ScenarioError> {
        if self.horizon == 0 || self.window == 0 || self.window >= self.horizon {
            return Err(ScenarioError::Invalid(format!(
                "need 0 < window < horizon, got window {} and horizon {}",
                self.window, self.horizon
            )));
        }
        let (k_coll, h_coll) = self.collections()?;
        let need_harm = || {
            h_coll
                .clone()
                .ok_or(ScenarioError::Missing("harm_collection"))
        };
        if self.game == GameKind::SgInf {
            validate_infinite_differences(&k_coll, &need_harm()?)?;
        }

        let adaptive = matches!(
            self.adversary,
            AdversarySpec::PhasedId | AdversarySpec::Diagonal { .. }
        );
        if adaptive && self.pair.is_some() {
            return Err(ScenarioError::Invalid(
                "adaptive adversaries choose their own pair; remove `pair`".into(),
            ));
        }
        let adversary: Box<dyn Adversary> = match &self.adversary {
            AdversarySpec::Enumerator => {
                let (k, h) = self.fixed_pair()?;
                if k.is_empty() {
                    return Err(ScenarioError::Invalid("cannot enumerate an empty K".into()));
                }
                Box::new(Enumerator::new(k, h))
            }
            AdversarySpec::FairInterleaver => {
                let (k, h) = self.fixed_pair()?;
                if !k.is_infinite() || !h.is_infinite() {
                    return Err(ScenarioError::Invalid(
                        "the fair interleaver needs infinite K and H".into(),
                    ));
                }
                Box::new(FairInterleaver::new(k, h))
            }
            AdversarySpec::PhasedId => {
                let presets = (
                    self.true_collection.preset,
                    self.harm_collection.as_ref().and_then(|h| h.preset),
                );
                if presets != (Some(Preset::IdTrue), Some(Preset::IdHarm)) {
                    return Err(ScenarioError::Invalid(
                        "phased_id plays on the id_true / id_harm presets".into(),
                    ));
                }
                Box::new(PhasedIdAdversary::new())
            }
            AdversarySpec::Diagonal { top, witness_limit } => {
                let top = top.unwrap_or((1, 1));
                let limit = witness_limit.unwrap_or(DEFAULT_WITNESS_LIMIT);
                let h = need_harm()?;
                validate_pstar(&k_coll, &h, top, PSTAR_CHECK_PREFIX, limit)?;
                Box::new(DiagonalAdversary::new(k_coll.clone(), h, top, limit))
            }
        };

        let cutoff = |c: &Option<usize>| c.unwrap_or(DEFAULT_MAX_CUTOFF);
        let learner: Box<dyn Learner> = match &self.learner {
            LearnerSpec::Km { max_cutoff } => {
                Box::new(KmGenerator::new(k_coll.clone(), cutoff(max_cutoff)))
            }
            LearnerSpec::SgInf {
                harm_choice,
                promise,
                mode,
                max_cutoff,
            } => Box::new(SafeGeneratorInf::new(
                k_coll.clone(),
                need_harm()?,
                *harm_choice,
                *promise,
                *mode,
                cutoff(max_cutoff),
            )),
            LearnerSpec::ReferenceSg {
                harm_choice,
                mode,
                max_cutoff,
            } => Box::new(ReferenceSafeGenerator::new(
                k_coll.clone(),
                need_harm()?,
                *harm_choice,
                *mode,
                cutoff(max_cutoff),
            )),
            LearnerSpec::TelltaleOracle { max_cutoff } => {
                let h = need_harm()?;
                if !k_coll.has_telltales() || !h.has_telltales() {
                    return Err(ScenarioError::Invalid(
                        "telltale_oracle needs telltales on both collections".into(),
                    ));
                }
                Box::new(TelltaleOracleGenerator::new(
                    k_coll.clone(),
                    h,
                    cutoff(max_cutoff),
                ))
            }
            LearnerSpec::IdFromSg { mode } => Box::new(IdentifierFromSg::new(
                k_coll.clone(),
                Box::new(ReferenceSg { mode: *mode }),
            )),
            LearnerSpec::NaiveId => Box::new(NaiveIdentifier::new(k_coll.clone())),
            LearnerSpec::EagerSi => {
                Box::new(EagerSafeIdentifier::new(k_coll.clone(), need_harm()?))
            }
            LearnerSpec::Constant { index } => {
                if *index == 0 {
                    return Err(ScenarioError::Invalid("indices start at 1".into()));
                }
                Box::new(ConstantIdentifier { index: *index })
            }
        };
        let generates = !matches!(
            self.learner,
            LearnerSpec::IdFromSg { .. }
                | LearnerSpec::NaiveId
                | LearnerSpec::EagerSi
                | LearnerSpec::Constant { .. }
        );
        if generates == self.game.is_identification() {
            return Err(ScenarioError::Invalid(format!(
                "learner {:?} does not play {:?} games",
                self.learner, self.game
            )));
        }
        Ok(Arena::new(self.game, adversary, learner, Some(k_coll)))
    }

    pub fn run(&self) -> Result<Outcome, ScenarioError> {
        Ok(self.build()?.run(self.horizon, self.window))
    }
}
