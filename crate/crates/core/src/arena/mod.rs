//! The game loop, per-step scoring and window verdicts.

mod scenario;

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::{Adversary, Marker, Pair};
use crate::collections::{Label, LabeledExample, LanguageCollection, RevealedSet};
use crate::learners::{Hypothesis, Learner, LearnerOutput};
use crate::set_algebra::{parse_set, EventuallyPeriodicSet};

pub use scenario::{
    AdversarySpec, CollectionSpec, LearnerSpec, PairSpec, ScenarioError, ScenarioFile,
    ScenarioSpec, SCENARIO_VERSION,
};

/// Version of the trace and verdict layouts.
pub const TRACE_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    /// Safe generation with ⊥ allowed.
    Sg,
    /// Safe generation under the infinite-difference promise.
    SgInf,
    /// Safe generation where any element counts once nothing safe is left.
    SgRelaxed,
    /// Identify the safe language `K \ H` in the true collection.
    Si,
    /// Identify `K` itself.
    Li,
}

impl GameKind {
    pub fn is_identification(self) -> bool {
        matches!(self, GameKind::Si | GameKind::Li)
    }
}

/// Whether `output` wins step `t` of a `kind` game against `pair`, where
/// `s` is the sample including the step's example. Identification games
/// look the guessed index up in `coll`.
pub fn score_step(
    kind: GameKind,
    output: &LearnerOutput,
    pair: &Pair,
    s: &RevealedSet,
    coll: Option<&LanguageCollection>,
) -> bool {
    let safe = || pair.k.difference(&pair.h);
    match (kind, output) {
        (GameKind::Sg | GameKind::SgInf, LearnerOutput::Generate(x)) => {
            !s.contains(*x) && safe().member(*x)
        }
        (GameKind::Sg | GameKind::SgInf, LearnerOutput::Bottom) => !safe().is_infinite(),
        (GameKind::SgRelaxed, LearnerOutput::Generate(x)) => {
            let d = safe();
            !d.is_infinite() || (!s.contains(*x) && d.member(*x))
        }
        (GameKind::Si, LearnerOutput::Index(i)) => {
            coll.and_then(|c| c.at(*i)).is_some_and(|l| l == safe())
        }
        (GameKind::Li, LearnerOutput::Index(i)) => {
            coll.and_then(|c| c.at(*i)).is_some_and(|l| l == pair.k)
        }
        _ => false,
    }
}

/// One line of a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub element: i64,
    pub label: Label,
    pub marker: Marker,
    pub output: String,
    pub value: Option<i64>,
    pub correct: bool,
    pub phase: usize,
    /// Pair the step was scored against.
    pub k: String,
    pub h: String,
    pub indices: Option<(usize, usize)>,
    /// Score against the adversary's limit pair, when it has one.
    pub limit_correct: Option<bool>,
    /// Phase after the adversary saw the output.
    pub next_phase: usize,
    pub truthful: bool,
    pub repeat: bool,
    pub hypothesis: Option<Hypothesis>,
    pub error: Option<String>,
}

impl StepRecord {
    pub fn example(&self) -> LabeledExample {
        LabeledExample {
            element: self.element,
            label: self.label,
        }
    }

    pub fn learner_output(&self) -> Option<LearnerOutput> {
        LearnerOutput::from_parts(&self.output, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema: u32,
    pub game: GameKind,
    pub horizon: usize,
    pub window: usize,
    pub converged: bool,
    /// Last incorrect step before the final run of correct steps.
    pub convergence_step: Option<usize>,
    pub correct_in_final_window: usize,
    /// Final-window score against the adversary's limit pair.
    pub limit_correct_in_final_window: Option<usize>,
    pub correct_total: usize,
    pub phase_transitions: usize,
    pub target_index: Option<usize>,
    /// Generated elements that were already in the sample.
    pub repeats: usize,
    pub truthfulness_violations: usize,
    pub learner_errors: usize,
    /// Non-⊥ outputs at phase boundaries that the limit pair scores correct.
    pub boundary_limit_correct: usize,
    pub ledger_violations: Vec<String>,
}

impl Verdict {
    /// Summarizes a trace. `ledger` comes from the adversary.
    pub fn from_records(
        game: GameKind,
        horizon: usize,
        window: usize,
        records: &[StepRecord],
        ledger: Vec<String>,
    ) -> Self {
        let n = records.len();
        let tail = &records[n.saturating_sub(window)..];
        let correct_in_final_window = tail.iter().filter(|r| r.correct).count();
        let converged = n >= window && correct_in_final_window == window;
        let trailing = records.iter().rev().take_while(|r| r.correct).count();
        let convergence_step = converged.then_some(n - trailing);
        let target_index = match (converged, game.is_identification(), records.last()) {
            (true, true, Some(r)) => r.value.map(|v| v as usize),
            _ => None,
        };
        let first_phase = records.first().map_or(1, |r| r.phase);
        let last_phase = records.last().map_or(1, |r| r.next_phase);
        Verdict {
            schema: TRACE_SCHEMA,
            game,
            horizon,
            window,
            converged,
            convergence_step,
            correct_in_final_window,
            limit_correct_in_final_window: tail
                .iter()
                .map(|r| r.limit_correct.map(usize::from))
                .sum(),
            correct_total: records.iter().filter(|r| r.correct).count(),
            phase_transitions: last_phase.saturating_sub(first_phase),
            target_index,
            repeats: records.iter().filter(|r| r.repeat).count(),
            truthfulness_violations: records.iter().filter(|r| !r.truthful).count(),
            learner_errors: records.iter().filter(|r| r.error.is_some()).count(),
            boundary_limit_correct: records
                .iter()
                .filter(|r| r.next_phase > r.phase && r.output != "bottom")
                .filter(|r| r.limit_correct == Some(true))
                .count(),
            ledger_violations: ledger,
        }
    }
}

/// A finished game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub records: Vec<StepRecord>,
    pub verdict: Verdict,
}

pub struct Arena {
    game: GameKind,
    adversary: Box<dyn Adversary>,
    learner: Box<dyn Learner>,
    coll: Option<LanguageCollection>,
    sample: RevealedSet,
    records: Vec<StepRecord>,
}

impl Arena {
    /// `coll` is the collection identification guesses refer to.
    pub fn new(
        game: GameKind,
        adversary: Box<dyn Adversary>,
        learner: Box<dyn Learner>,
        coll: Option<LanguageCollection>,
    ) -> Self {
        Arena {
            game,
            adversary,
            learner,
            coll,
            sample: RevealedSet::new(),
            records: Vec::new(),
        }
    }

    pub fn sample(&self) -> &RevealedSet {
        &self.sample
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn adversary(&self) -> &dyn Adversary {
        self.adversary.as_ref()
    }

    /// Plays one round and returns its record.
    pub fn step(&mut self) -> &StepRecord {
        let emission = self.adversary.emit();
        let example = emission.example;
        let pair = self.adversary.current_pair().clone();
        let truthful = pair.is_truthful(&example);
        let before = (self.sample.step(), self.sample.all().len());
        self.sample.push(example);
        assert!(
            self.sample.step() == before.0 + 1 && self.sample.all().len() >= before.1,
            "sample must grow monotonically"
        );
        let phase = self.adversary.phase();
        let response = self.learner.respond(&self.sample);
        let (output, error) = match response {
            Ok(o) => (Some(o), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let correct = output
            .is_some_and(|o| score_step(self.game, &o, &pair, &self.sample, self.coll.as_ref()));
        let limit_correct = match (output, self.adversary.limit_pair()) {
            (Some(o), Some(limit)) => Some(score_step(
                self.game,
                &o,
                limit,
                &self.sample,
                self.coll.as_ref(),
            )),
            _ => None,
        };
        let repeat = matches!(output, Some(LearnerOutput::Generate(x)) if self.sample.contains(x));
        if let Some(o) = &output {
            self.adversary.observe(o);
        }
        self.records.push(StepRecord {
            t: self.sample.step(),
            element: example.element,
            label: example.label,
            marker: emission.marker,
            output: output.map_or("error", |o| o.kind()).to_string(),
            value: output.and_then(|o| o.value()),
            correct,
            phase,
            k: pair.k.to_string(),
            h: pair.h.to_string(),
            indices: pair.indices,
            limit_correct,
            next_phase: self.adversary.phase(),
            truthful,
            repeat,
            hypothesis: self.learner.hypothesis(),
            error,
        });
        self.records.last().expect("just pushed")
    }

    /// Plays until the trace holds `horizon` rounds and scores it with a
    /// trailing window. Rounds already played through [`Arena::step`] count.
    pub fn run(mut self, horizon: usize, window: usize) -> Outcome {
        while self.records.len() < horizon {
            self.step();
        }
        let verdict = Verdict::from_records(
            self.game,
            horizon,
            window,
            &self.records,
            self.adversary.ledger_violations().to_vec(),
        );
        Outcome {
            records: self.records,
            verdict,
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("trace line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes one JSON object per record.
pub fn write_trace(records: &[StepRecord], mut out: impl Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn trace_bytes(records: &[StepRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trace(records, &mut buf).expect("writing to memory");
    buf
}

pub fn read_trace(input: impl BufRead) -> Result<Vec<StepRecord>, TraceError> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line).map_err(|source| TraceError::Json {
            line: i + 1,
            source,
        })?;
        records.push(r);
    }
    Ok(records)
}

/// Scores a stored trace from scratch: rebuilds the sample, re-parses the
/// recorded pairs and re-applies [`score_step`]. The adversary's ledger is
/// not part of the trace, so `ledger` is passed through.
pub fn replay(
    game: GameKind,
    window: usize,
    coll: Option<&LanguageCollection>,
    records: &[StepRecord],
    ledger: Vec<String>,
) -> Result<Verdict, TraceError> {
    let mut sample = RevealedSet::new();
    let mut rescored = Vec::with_capacity(records.len());
    let mut cached: Option<(String, String, Pair)> = None;
    for (i, r) in records.iter().enumerate() {
        let line = i + 1;
        let invalid = |message: String| TraceError::Invalid { line, message };
        if r.t != line {
            return Err(invalid(format!("expected step {line}, found {}", r.t)));
        }
        sample.push(r.example());
        let pair = match &cached {
            Some((k, h, p)) if *k == r.k && *h == r.h => p.clone(),
            _ => {
                let parse = |spec: &str| -> Result<EventuallyPeriodicSet, TraceError> {
                    parse_set(spec).map_err(|e| invalid(e.to_string()))
                };
                let mut p = Pair::new(parse(&r.k)?, parse(&r.h)?);
                p.indices = r.indices;
                cached = Some((r.k.clone(), r.h.clone(), p.clone()));
                p
            }
        };
        let output = match r.output.as_str() {
            "error" => None,
            kind => Some(
                LearnerOutput::from_parts(kind, r.value)
                    .ok_or_else(|| invalid(format!("bad output `{kind}` {:?}", r.value)))?,
            ),
        };
        let mut fresh = r.clone();
        fresh.correct = output.is_some_and(|o| score_step(game, &o, &pair, &sample, coll));
        fresh.truthful = pair.is_truthful(&r.example());
        fresh.repeat = matches!(output, Some(LearnerOutput::Generate(x)) if sample.contains(x));
        rescored.push(fresh);
    }
    Ok(Verdict::from_records(
        game,
        records.len(),
        window,
        &rescored,
        ledger,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{FairInterleaver, PhasedIdAdversary};
    use crate::collections::id_impossibility_collections;
    use crate::learners::{ConstantIdentifier, EagerSafeIdentifier};

    fn s(spec: &str) -> EventuallyPeriodicSet {
        parse_set(spec).unwrap()
    }

    fn sample(xs: &[i64]) -> RevealedSet {
        RevealedSet::from_examples(xs.iter().map(|&x| LabeledExample::positive(x)))
    }

    #[test]
    fn scoring_examples() {
        let p = Pair::new(s("I"), s("N | E"));
        assert!(score_step(
            GameKind::Sg,
            &LearnerOutput::Generate(7),
            &p,
            &sample(&[]),
            None
        ));
        assert!(!score_step(
            GameKind::Sg,
            &LearnerOutput::Generate(7),
            &p,
            &sample(&[7]),
            None
        ));
        assert!(!score_step(
            GameKind::Sg,
            &LearnerOutput::Generate(8),
            &p,
            &sample(&[]),
            None
        ));
        assert!(!score_step(
            GameKind::Sg,
            &LearnerOutput::Bottom,
            &p,
            &sample(&[]),
            None
        ));

        let p = Pair::new(s("E"), s("I"));
        assert!(score_step(
            GameKind::Sg,
            &LearnerOutput::Bottom,
            &p,
            &sample(&[]),
            None
        ));
        assert!(!score_step(
            GameKind::Sg,
            &LearnerOutput::Generate(1),
            &p,
            &sample(&[]),
            None
        ));
        assert!(score_step(
            GameKind::SgRelaxed,
            &LearnerOutput::Generate(0),
            &p,
            &sample(&[0]),
            None
        ));
        assert!(!score_step(
            GameKind::SgRelaxed,
            &LearnerOutput::Bottom,
            &p,
            &sample(&[]),
            None
        ));

        let (k, _) = id_impossibility_collections();
        let p = Pair::new(s("I"), s("Y(0)"));
        assert!(score_step(
            GameKind::Si,
            &LearnerOutput::Index(3),
            &p,
            &sample(&[]),
            Some(&k)
        ));
        assert!(!score_step(
            GameKind::Si,
            &LearnerOutput::Index(2),
            &p,
            &sample(&[]),
            Some(&k)
        ));
        assert!(score_step(
            GameKind::Li,
            &LearnerOutput::Index(1),
            &p,
            &sample(&[]),
            Some(&k)
        ));
    }

    #[test]
    fn verdict_window_semantics() {
        let mut arena = Arena::new(
            GameKind::Li,
            Box::new(FairInterleaver::new(s("O"), s("E"))),
            Box::new(ConstantIdentifier { index: 2 }),
            Some(LanguageCollection::from_specs("c", &["I", "O"]).unwrap()),
        );
        arena.step();
        let out = arena.run(10, 4);
        assert!(out.verdict.converged);
        assert_eq!(out.verdict.convergence_step, Some(0));
        assert_eq!(out.verdict.correct_in_final_window, 4);
        assert_eq!(out.verdict.target_index, Some(2));
        assert_eq!(out.records.len(), 10);
        assert_eq!(out.verdict.horizon, out.records.len());
    }

    #[test]
    fn window_longer_than_trace_is_not_converged() {
        let out = Arena::new(
            GameKind::Li,
            Box::new(FairInterleaver::new(s("O"), s("E"))),
            Box::new(ConstantIdentifier { index: 2 }),
            Some(LanguageCollection::from_specs("c", &["I", "O"]).unwrap()),
        )
        .run(3, 5);
        assert!(!out.verdict.converged);
    }

    #[test]
    fn trace_round_trip_and_replay() {
        let (k, h) = id_impossibility_collections();
        let out = Arena::new(
            GameKind::Si,
            Box::new(PhasedIdAdversary::new()),
            Box::new(EagerSafeIdentifier::new(k.clone(), h)),
            Some(k.clone()),
        )
        .run(200, 20);
        let bytes = trace_bytes(&out.records);
        let back = read_trace(bytes.as_slice()).unwrap();
        assert_eq!(back, out.records);
        let v = replay(
            GameKind::Si,
            20,
            Some(&k),
            &back,
            out.verdict.ledger_violations.clone(),
        )
        .unwrap();
        assert_eq!(v, out.verdict);
        assert!(out.verdict.phase_transitions >= 5);
        assert_eq!(out.verdict.truthfulness_violations, 0);
    }

    #[test]
    fn replay_rejects_gaps() {
        let (k, h) = id_impossibility_collections();
        let out = Arena::new(
            GameKind::Si,
            Box::new(PhasedIdAdversary::new()),
            Box::new(EagerSafeIdentifier::new(k.clone(), h)),
            Some(k.clone()),
        )
        .run(5, 2);
        let mut recs = out.records;
        recs.remove(2);
        assert!(matches!(
            replay(GameKind::Si, 2, Some(&k), &recs, vec![]),
            Err(TraceError::Invalid { line: 3, .. })
        ));
    }
}
