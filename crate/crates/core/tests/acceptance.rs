//! Acceptance suite: one printed PASS/FAIL line per criterion, each with a
//! pinned threshold and a wall-clock budget.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use safegen::adversaries::Marker;
use safegen::arena::{trace_bytes, Outcome, ScenarioSpec, StepRecord};
use safegen::cli::{main_with_args, trace_path};
use safegen::collections::{Label, LanguageCollection, RevealedSet};
use safegen::demos::{conservative_gaps, run_demo};
use safegen::learners::{subset_probe, ReferenceSg};
use safegen::set_algebra::fuzz::check_algebra;
use safegen::set_algebra::{parse_set, EventuallyPeriodicSet};

const WINDOW: usize = 50;
const SPAN: i64 = 300;

// Membership predicates written out by hand, independent of the algebra.
fn in_i(_: i64) -> bool {
    true
}
fn in_o(x: i64) -> bool {
    x > 0 && x % 2 == 1
}
fn in_e(x: i64) -> bool {
    x >= 0 && x % 2 == 0
}
fn in_n_or_e(x: i64) -> bool {
    x < 0 || in_e(x)
}
fn in_y(a: i64) -> impl Fn(i64) -> bool {
    move |x| (-a..=0).contains(&x) || in_e(x)
}
fn in_q(b: i64) -> impl Fn(i64) -> bool {
    move |x| x <= -b || in_o(x)
}

fn agrees(set: &EventuallyPeriodicSet, pred: impl Fn(i64) -> bool) -> bool {
    (-SPAN..=SPAN).all(|x| set.member(x) == pred(x))
}

fn set(spec: &str) -> EventuallyPeriodicSet {
    parse_set(spec).unwrap()
}

fn run(name: &str) -> Outcome {
    ScenarioSpec::builtin(name).unwrap().run().unwrap()
}

fn final_window(out: &Outcome) -> &[StepRecord] {
    &out.records[out.records.len() - WINDOW..]
}

/// Checks every generated element against the sample up to and including
/// its own step; returns the number of repeats.
fn count_repeats(records: &[StepRecord]) -> usize {
    let mut seen = BTreeSet::new();
    let mut repeats = 0;
    for r in records {
        seen.insert(r.element);
        if r.output == "generate" && seen.contains(&r.value.unwrap()) {
            repeats += 1;
        }
    }
    repeats
}

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_algebra_fuzz() -> Result<String, String> {
    let r = check_algebra(1, 1000).map_err(|cx| cx.to_string())?;
    ensure(r.cases == 1000, format!("ran {} cases", r.cases))?;
    Ok(format!(
        "1000/1000 pairs agree ({} pointwise checks)",
        r.checks
    ))
}

fn c2_identities() -> Result<String, String> {
    let i = set("I");
    for a in 0..=20u64 {
        let d = i.difference(&EventuallyPeriodicSet::y_set(a));
        ensure(
            d == EventuallyPeriodicSet::q_set(a + 1),
            format!("I \\ Y(-{a}) = {d}"),
        )?;
        ensure(
            agrees(&d, in_q(a as i64 + 1)),
            format!("I \\ Y(-{a}) disagrees with the hand predicate"),
        )?;
    }
    let d = i.difference(&set("N | E"));
    ensure(d == set("O"), format!("I \\ (N | E) = {d}"))?;
    ensure(
        agrees(&d, |x| in_i(x) && !in_n_or_e(x)) && agrees(&d, in_o),
        "I \\ (N | E) disagrees with O pointwise",
    )?;
    Ok("21 Y identities and I \\ (N | E) = O hold exactly".into())
}

fn c3_km() -> Result<String, String> {
    let out = run("km");
    ensure(out.verdict.converged, "not converged")?;
    for r in final_window(&out) {
        let x = r.value.ok_or("non-generate output in final window")?;
        ensure(in_o(x), format!("t={}: {x} is not odd positive", r.t))?;
    }
    let repeats = count_repeats(&out.records);
    ensure(repeats == 0, format!("{repeats} repeats"))?;
    Ok(format!(
        "converged at step {}, 0 repeats in {} steps",
        out.verdict.convergence_step.unwrap() + 1,
        out.records.len()
    ))
}

fn c4_sg_inf() -> Result<String, String> {
    let out = run("sg_inf");
    ensure(out.verdict.converged, "not converged")?;
    let mut s = RevealedSet::new();
    let tail_start = out.records.len() - WINDOW;
    for (n, r) in out.records.iter().enumerate() {
        s.push(r.example());
        if n >= tail_start {
            let x = r.value.ok_or("non-generate output in final window")?;
            ensure(
                in_o(x) && !in_e(x) && !s.contains(x),
                format!("t={}: {x} not in (O \\ E) \\ S_t", r.t),
            )?;
        }
    }
    Ok(format!(
        "converged at step {}, final window inside (O \\ E) \\ S_t",
        out.verdict.convergence_step.unwrap() + 1
    ))
}

fn c5_reduction() -> Result<String, String> {
    let naive = run("naive_li");
    let correct = final_window(&naive).iter().filter(|r| r.correct).count();
    ensure(
        correct == 0,
        format!("naive scored {correct} in the final window"),
    )?;
    let red = run("reduction_li");
    ensure(red.verdict.converged, "reduction did not converge")?;
    ensure(
        final_window(&red).iter().all(|r| r.value == Some(2)),
        "reduction final window is not constantly index 2",
    )?;
    let coll = LanguageCollection::from_specs("c", &["I", "O"]).unwrap();
    ensure(agrees(&coll.at(2).unwrap(), in_o), "index 2 is not O")?;
    Ok("naive 0/50, reduction converges to index 2".into())
}

fn c6_probe() -> Result<String, String> {
    let cases = [("O", "I"), ("I", "O"), ("O", "Ray(1, 2)"), ("O", "E")];
    let mut got = Vec::new();
    for (m, n) in cases {
        let (a, b) = subset_probe(&set(m), &set(n), 8, &mut ReferenceSg::relaxed());
        // oracle: a bit is set exactly when the one-sided difference is nonempty
        let (mm, nn) = (set(m), set(n));
        let oa = (-SPAN..=SPAN).any(|x| mm.member(x) && !nn.member(x));
        let ob = (-SPAN..=SPAN).any(|x| nn.member(x) && !mm.member(x));
        ensure((a, b) == (oa, ob), format!("({m}, {n}) gave {a}{b}"))?;
        got.push(format!("{}{}", a as u8, b as u8));
    }
    ensure(got == ["01", "10", "00", "11"], format!("bits {got:?}"))?;
    Ok(format!("bits {}", got.join(" ")))
}

fn c7_phased() -> Result<String, String> {
    let eager = run("phased_eager");
    let v = &eager.verdict;
    ensure(
        v.phase_transitions >= 5,
        format!("{} transitions", v.phase_transitions),
    )?;
    let injected: Vec<i64> = eager
        .records
        .iter()
        .filter(|r| r.marker == Marker::Injection)
        .map(|r| r.element)
        .collect();
    ensure(injected.len() >= 5, "fewer than 5 injections")?;
    for (l, &x) in (1i64..).zip(&injected) {
        ensure(x == -l, format!("injection {l} is {x}"))?;
        ensure(
            !in_y(l - 1)(x) && in_y(l)(x) && in_n_or_e(x),
            format!("({x}, 0) does not break Y(-{})", l - 1),
        )?;
    }
    ensure(v.truthfulness_violations == 0, "untruthful labels")?;

    let stubborn = run("phased_stubborn");
    ensure(
        stubborn.verdict.correct_total == 0,
        format!("stubborn scored {}", stubborn.verdict.correct_total),
    )?;
    let last = stubborn.records.last().unwrap();
    ensure(
        agrees(&set(&last.k), in_i) && agrees(&set(&last.h), in_y(0)),
        format!("committed pair ({}, {})", last.k, last.h),
    )?;
    Ok(format!(
        "{} transitions vs eager, stubborn 0/{} with committed (I, Y(0))",
        v.phase_transitions,
        stubborn.records.len()
    ))
}

fn c8_diagonal() -> Result<String, String> {
    let out = run("diagonal");
    let v = &out.verdict;
    ensure(
        v.phase_transitions >= 3,
        format!("{} transitions", v.phase_transitions),
    )?;
    ensure(
        v.ledger_violations.is_empty(),
        format!("{:?}", v.ledger_violations),
    )?;
    ensure(v.truthfulness_violations == 0, "untruthful labels")?;
    // independent ledger: at each phase start, every top element up to the
    // largest one shown on its side has been shown
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    let mut boundaries = 0;
    let mut prev_phase = 1;
    for r in &out.records {
        if r.phase != prev_phase {
            let top_k = pos.iter().next_back().copied().unwrap_or(0);
            let top_h = neg.iter().next_back().copied().unwrap_or(0);
            ensure(
                (0..=top_k).filter(|&x| in_e(x)).all(|x| pos.contains(&x)),
                format!("t={}: an even below {top_k} is missing", r.t),
            )?;
            ensure(
                (0..=top_h).all(|x| neg.contains(&x)),
                format!("t={}: a natural below {top_h} is missing", r.t),
            )?;
            prev_phase = r.phase;
        }
        match r.label {
            Label::True => pos.insert(r.element),
            Label::Harm => neg.insert(r.element),
        };
        if r.next_phase > r.phase && r.output != "bottom" {
            boundaries += 1;
            // the top pair is E against the naturals, whose difference is empty
            let x = r.value.unwrap();
            let oracle = in_e(x) && x < 0;
            ensure(
                r.limit_correct == Some(oracle) && !oracle,
                format!("t={}: boundary output {x} scored correct", r.t),
            )?;
        }
    }
    ensure(boundaries >= 3, format!("{boundaries} boundary outputs"))?;
    Ok(format!(
        "{} transitions, ledger clean, {boundaries}/{boundaries} boundary outputs wrong against the top pair",
        v.phase_transitions
    ))
}

fn c9_bottom() -> Result<String, String> {
    let out = run("bottom");
    ensure(
        !(-SPAN..=SPAN).any(|x| in_e(x) && !in_i(x)),
        "E \\ I is not empty",
    )?;
    ensure(out.verdict.converged, "not converged")?;
    ensure(
        final_window(&out)
            .iter()
            .all(|r| r.output == "bottom" && r.correct),
        "final window is not constantly ⊥",
    )?;
    Ok(format!(
        "constant ⊥ from step {}, 50/50 correct",
        out.verdict.convergence_step.unwrap() + 1
    ))
}

fn c10_conservative() -> Result<String, String> {
    let report = run_demo("conservative-fails").map_err(|e| e.to_string())?;
    let spec = ScenarioSpec::builtin("conservative").unwrap();
    let (_, out) = &report.runs[0];
    let gaps = conservative_gaps(&spec, out).map_err(|e| e.to_string())?;
    let g = gaps
        .first()
        .ok_or("no step with an empty conservative difference")?;
    ensure(
        (-SPAN..=SPAN).all(|x| !(g.k_c.member(x) && !g.h_c.member(x))),
        "K_c \\ H_c has a member",
    )?;
    ensure(
        (0..SPAN).filter(|&x| in_i(x) && !in_e(x)).count() as i64 >= SPAN / 2 - 1,
        "I \\ E is not unbounded",
    )?;
    Ok(format!(
        "{} steps, first at t={} with K_c = {}, H_c = {}",
        gaps.len(),
        g.t,
        g.k_c,
        g.h_c
    ))
}

fn c11_determinism() -> Result<String, String> {
    let names: Vec<&str> = ScenarioSpec::builtin_names().collect();
    for name in &names {
        ensure(
            trace_bytes(&run(name).records) == trace_bytes(&run(name).records),
            format!("{name}: in-memory traces differ"),
        )?;
    }
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in &names {
        for dir in [&a, &b] {
            let code = main_with_args(
                [
                    "safegen",
                    "run",
                    &format!("builtin:{name}"),
                    "--out",
                    dir.path().to_str().unwrap(),
                ],
                &mut Vec::new(),
                &mut Vec::new(),
            );
            ensure(code == 0, format!("{name}: exit {code}"))?;
        }
        let read = |d: &tempfile::TempDir| std::fs::read(trace_path(d.path(), name)).unwrap();
        ensure(read(&a) == read(&b), format!("{name}: trace files differ"))?;
    }
    Ok(format!(
        "{} scenarios byte-identical in memory and on disk",
        names.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, Check, u64); 11] = [
        (1, "algebra oracle equivalence", c1_algebra_fuzz, 10),
        (2, "construction identities", c2_identities, 1),
        (3, "KM convergence", c3_km, 5),
        (4, "promise-game convergence", c4_sg_inf, 5),
        (5, "identification separation", c5_reduction, 5),
        (6, "bitstring probe", c6_probe, 1),
        (7, "phased adversary", c7_phased, 10),
        (8, "diagonal adversary", c8_diagonal, 10),
        (9, "⊥ semantics", c9_bottom, 2),
        (10, "conservative failure", c10_conservative, 2),
        (11, "determinism", c11_determinism, 60),
    ];
    let mut failed = Vec::new();
    for (id, title, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        // Straight to stdout so the lines show without --nocapture.
        let mut out = std::io::stdout().lock();
        writeln!(
            out,
            "criterion {id:>2} [{status}] {title}: {detail} ({:.2} s, budget {budget} s)",
            took.as_secs_f64()
        )
        .unwrap();
        if status == "FAIL" {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
