//! Canned games with a short printed report each.

use std::fmt;

use thiserror::Error;

use crate::arena::{Outcome, ScenarioError, ScenarioSpec};
use crate::collections::{is_consistent_harm, is_consistent_true, LanguageCollection, RevealedSet};
use crate::set_algebra::{parse_set, CardinalityClass, EventuallyPeriodicSet};

pub const DEMOS: &[(&str, &str)] = &[
    ("km", "generation in the limit from positive examples"),
    (
        "sg-inf",
        "safe generation under the infinite-difference promise",
    ),
    (
        "reduction",
        "naive identification against identification via safe generation",
    ),
    (
        "safe-id-impossible",
        "the phased adversary defeats safe identification",
    ),
    (
        "diagonal-oracle",
        "the diagonal adversary defeats safe generation without the promise",
    ),
    ("bottom", "converging to ⊥ when nothing safe exists"),
    (
        "conservative-fails",
        "smallest K and largest H can leave nothing while K \\ H is infinite",
    ),
];

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unknown demo `{0}`; try one of: {list}", list = demo_names())]
    Unknown(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

fn demo_names() -> String {
    DEMOS.iter().map(|d| d.0).collect::<Vec<_>>().join(", ")
}

pub struct DemoReport {
    pub name: String,
    pub lines: Vec<String>,
    /// Scenario name and result of every game played.
    pub runs: Vec<(String, Outcome)>,
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for l in &self.lines {
            writeln!(f, "  {l}")?;
        }
        Ok(())
    }
}

pub fn run_demo(name: &str) -> Result<DemoReport, DemoError> {
    let mut report = DemoReport {
        name: name.to_string(),
        lines: Vec::new(),
        runs: Vec::new(),
    };
    match name {
        "km" | "sg-inf" | "bottom" => {
            let scenario = match name {
                "km" => "km",
                "sg-inf" => "sg_inf",
                _ => "bottom",
            };
            let out = play(scenario, &mut report)?;
            report.lines.push(convergence_line(&out));
            report
                .lines
                .push(format!("repeated elements: {}", out.verdict.repeats));
            if name == "bottom" {
                let bottoms = out
                    .records
                    .iter()
                    .rev()
                    .take_while(|r| r.output == "bottom")
                    .count();
                report.lines.push(format!("trailing ⊥ outputs: {bottoms}"));
            }
        }
        "reduction" => {
            report.lines.push(format!(
                "{:<14} {:>9} {:>13} {:>7}",
                "scenario", "converged", "final window", "target"
            ));
            for scenario in ["naive_li", "reduction_li"] {
                let out = play(scenario, &mut report)?;
                let v = &out.verdict;
                report.lines.push(format!(
                    "{:<14} {:>9} {:>10}/{:<2} {:>7}",
                    scenario,
                    v.converged,
                    v.correct_in_final_window,
                    v.window,
                    v.target_index.map_or("-".to_string(), |i| i.to_string())
                ));
            }
        }
        "safe-id-impossible" => {
            let eager = play("phased_eager", &mut report)?;
            let v = &eager.verdict;
            report.lines.push(format!(
                "eager learner: {} phase transitions in {} steps",
                v.phase_transitions, v.horizon
            ));
            let injected: Vec<String> = eager
                .records
                .iter()
                .filter(|r| r.marker == crate::adversaries::Marker::Injection)
                .take(5)
                .map(|r| format!("t={} ({}, 0)", r.t, r.element))
                .collect();
            report
                .lines
                .push(format!("first injections: {}", injected.join(", ")));
            report.lines.push(format!(
                "final window against the limit pair: {}/{} correct",
                v.limit_correct_in_final_window.unwrap_or(0),
                v.window
            ));
            let stubborn = play("phased_stubborn", &mut report)?;
            let last = stubborn.records.last().expect("nonempty trace");
            report.lines.push(format!(
                "stubborn learner: {} correct steps of {}, committed pair K = {}, H = {}",
                stubborn.verdict.correct_total, stubborn.verdict.horizon, last.k, last.h
            ));
        }
        "diagonal-oracle" => {
            let out = play("diagonal", &mut report)?;
            let v = &out.verdict;
            let boundaries = out
                .records
                .iter()
                .filter(|r| r.next_phase > r.phase && r.output != "bottom")
                .count();
            report.lines.push(format!(
                "{} phase transitions in {} steps",
                v.phase_transitions, v.horizon
            ));
            report.lines.push(format!(
                "non-⊥ outputs at phase boundaries correct against the top pair: {} of {}",
                v.boundary_limit_correct, boundaries
            ));
            report.lines.push(if v.ledger_violations.is_empty() {
                "fairness ledger: clean at every boundary".to_string()
            } else {
                format!("fairness ledger: {}", v.ledger_violations.join("; "))
            });
        }
        "conservative-fails" => {
            let spec = ScenarioSpec::builtin("conservative")?;
            let out = play("conservative", &mut report)?;
            let gaps = conservative_gaps(&spec, &out)?;
            report.lines.push(format!(
                "steps with K_c \\ H_c empty while K \\ H is infinite: {}",
                gaps.len()
            ));
            if let Some(g) = gaps.first() {
                report.lines.push(format!(
                    "first at t={}: K_c = {}, H_c = {}, output {}",
                    g.t, g.k_c, g.h_c, g.output
                ));
            }
            report.lines.push(convergence_line(&out));
        }
        other => return Err(DemoError::Unknown(other.to_string())),
    }
    Ok(report)
}

fn play(scenario: &str, report: &mut DemoReport) -> Result<Outcome, DemoError> {
    let out = ScenarioSpec::builtin(scenario)?.run()?;
    report.runs.push((scenario.to_string(), out.clone()));
    Ok(out)
}

fn convergence_line(out: &Outcome) -> String {
    let v = &out.verdict;
    match v.convergence_step {
        Some(t) if v.converged => format!(
            "converged at step {} of {} ({}/{} correct in the final window)",
            t + 1,
            v.horizon,
            v.correct_in_final_window,
            v.window
        ),
        _ => format!(
            "not converged ({}/{} correct in the final window)",
            v.correct_in_final_window, v.window
        ),
    }
}

/// A step where the conservative hypothesis pair leaves nothing safe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservativeGap {
    pub t: usize,
    pub k_c: EventuallyPeriodicSet,
    pub h_c: EventuallyPeriodicSet,
    pub output: String,
}

/// The consistent candidate among the first `t` with no consistent proper
/// subset (`smallest`) or superset, lowest index first.
fn extreme(
    coll: &LanguageCollection,
    t: usize,
    consistent: impl Fn(&EventuallyPeriodicSet) -> bool,
    smallest: bool,
) -> Option<EventuallyPeriodicSet> {
    let cands: Vec<EventuallyPeriodicSet> = (1..=coll.available(t))
        .filter_map(|i| coll.at(i))
        .filter(|l| consistent(l))
        .collect();
    cands
        .iter()
        .find(|l| {
            !cands.iter().any(|o| {
                if smallest {
                    o.is_proper_subset(l)
                } else {
                    l.is_proper_subset(o)
                }
            })
        })
        .cloned()
}

/// Replays the trace and lists the steps where the smallest consistent true
/// language minus the largest consistent harmful language is empty while
/// the scored pair has an infinite difference.
pub fn conservative_gaps(
    spec: &ScenarioSpec,
    out: &Outcome,
) -> Result<Vec<ConservativeGap>, ScenarioError> {
    let k = spec.true_collection.build("true_collection")?;
    let h = spec
        .harm_collection
        .as_ref()
        .ok_or(ScenarioError::Missing("harm_collection"))?
        .build("harm_collection")?;
    let mut s = RevealedSet::new();
    let mut gaps = Vec::new();
    for r in &out.records {
        s.push(r.example());
        let (Some(k_c), Some(h_c)) = (
            extreme(&k, r.t, |l| is_consistent_true(l, &s), true),
            extreme(&h, r.t, |l| is_consistent_harm(l, &s), false),
        ) else {
            continue;
        };
        let truth = parse_set(&r.k)
            .and_then(|kk| parse_set(&r.h).map(|hh| kk.difference(&hh)))
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        if k_c.difference(&h_c).cardinality() == CardinalityClass::Empty
            && truth.cardinality() == CardinalityClass::Infinite
        {
            gaps.push(ConservativeGap {
                t: r.t,
                k_c,
                h_c,
                output: r.output.clone(),
            });
        }
    }
    Ok(gaps)
}
