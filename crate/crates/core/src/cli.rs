//! Command-line front end. The binary only forwards to [`main_with_args`].

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arena::{read_trace, replay, trace_bytes, Outcome, ScenarioFile, ScenarioSpec, Verdict};
use crate::demos::{run_demo, DEMOS};
use crate::set_algebra::fuzz::{check_algebra_with, AlgebraOps};

/// Exit code for a completed command whose verdict differs from `--expect`.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for parse, validation and I/O failures.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "safegen",
    version,
    about = "Safe generation and identification games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Converged,
    Failed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a scenario file (or `builtin:<name>`) and write its trace and verdict.
    Run {
        scenario: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Turn the verdict into the exit code.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[arg(long)]
        horizon_override: Option<usize>,
        #[arg(long)]
        window_override: Option<usize>,
    },
    /// Run a built-in demo and print its report.
    Demo {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Fuzz the set algebra against a brute-force oracle.
    CheckAlgebra {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Break one operation on purpose: union, difference or cardinality.
        #[arg(long, hide = true)]
        inject_bug: Option<String>,
    },
    /// Re-score a stored trace against its scenario.
    Replay {
        scenario: String,
        trace: PathBuf,
        /// Stored verdict to compare against.
        #[arg(long)]
        verdict: Option<PathBuf>,
        #[arg(long)]
        window_override: Option<usize>,
    },
}

type CliResult = Result<i32, String>;

/// Parses `args` (program name first) and runs the command, writing reports
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return EXIT_ERROR;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Run {
            scenario,
            out: dir,
            expect,
            horizon_override,
            window_override,
        } => cmd_run(
            &scenario,
            &dir,
            expect,
            horizon_override,
            window_override,
            out,
        ),
        Command::Demo { name, list } => cmd_demo(name.as_deref(), list, out),
        Command::CheckAlgebra {
            seed,
            count,
            inject_bug,
        } => cmd_check_algebra(seed, count, inject_bug.as_deref(), out),
        Command::Replay {
            scenario,
            trace,
            verdict,
            window_override,
        } => cmd_replay(&scenario, &trace, verdict.as_deref(), window_override, out),
    }
}

fn w(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<(), String> {
    writeln!(out, "{line}").map_err(|e| e.to_string())
}

/// Scenarios named by a path or `builtin:<name>`; batteries expand.
fn load_scenarios(scenario: &str) -> Result<Vec<ScenarioSpec>, String> {
    if let Some(name) = scenario.strip_prefix("builtin:") {
        return ScenarioSpec::builtin(name)
            .map(|s| vec![s])
            .map_err(|e| e.to_string());
    }
    let path = Path::new(scenario);
    let file = ScenarioFile::load(path).map_err(|e| e.to_string())?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.battery_members(base)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn overrides(
    spec: ScenarioSpec,
    horizon: Option<usize>,
    window: Option<usize>,
) -> Result<ScenarioSpec, String> {
    let mut spec = spec;
    if let Some(h) = horizon {
        spec = spec.with_horizon(h).map_err(|e| e.to_string())?;
    }
    if let Some(wi) = window {
        spec = spec.with_window(wi).map_err(|e| e.to_string())?;
    }
    Ok(spec)
}

pub fn trace_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.trace.jsonl"))
}

pub fn verdict_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.verdict.json"))
}

fn write_outputs(dir: &Path, name: &str, outcome: &Outcome) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let tp = trace_path(dir, name);
    fs::write(&tp, trace_bytes(&outcome.records)).map_err(|e| format!("{}: {e}", tp.display()))?;
    let vp = verdict_path(dir, name);
    let mut json = serde_json::to_string_pretty(&outcome.verdict).map_err(|e| e.to_string())?;
    json.push('\n');
    fs::write(&vp, json).map_err(|e| format!("{}: {e}", vp.display()))
}

fn cmd_run(
    scenario: &str,
    dir: &Path,
    expect: Option<Expect>,
    horizon: Option<usize>,
    window: Option<usize>,
    out: &mut dyn Write,
) -> CliResult {
    let specs = load_scenarios(scenario)?
        .into_iter()
        .map(|s| overrides(s, horizon, window))
        .collect::<Result<Vec<_>, _>>()?;
    w(
        out,
        format_args!(
            "{:<20} {:>9} {:>12} {:>8} {:>7} {:>9}",
            "scenario", "converged", "final window", "correct", "phases", "converged@"
        ),
    )?;
    let mut mismatch = false;
    for spec in &specs {
        let outcome = spec.run().map_err(|e| e.to_string())?;
        write_outputs(dir, &spec.name, &outcome)?;
        let v = &outcome.verdict;
        w(
            out,
            format_args!(
                "{:<20} {:>9} {:>9}/{:<2} {:>8} {:>7} {:>9}",
                spec.name,
                v.converged,
                v.correct_in_final_window,
                v.window,
                v.correct_total,
                v.phase_transitions,
                v.convergence_step
                    .map_or("-".to_string(), |t| (t + 1).to_string())
            ),
        )?;
        mismatch |= match expect {
            Some(Expect::Converged) => !v.converged,
            Some(Expect::Failed) => v.converged,
            None => false,
        };
    }
    w(
        out,
        format_args!("traces and verdicts written to {}", dir.display()),
    )?;
    Ok(if mismatch { EXIT_MISMATCH } else { 0 })
}

fn cmd_demo(name: Option<&str>, list: bool, out: &mut dyn Write) -> CliResult {
    if list {
        for (n, about) in DEMOS {
            w(out, format_args!("{n:<20} {about}"))?;
        }
        return Ok(0);
    }
    let report = run_demo(name.unwrap_or_default()).map_err(|e| e.to_string())?;
    write!(out, "{report}").map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_check_algebra(
    seed: u64,
    count: usize,
    inject_bug: Option<&str>,
    out: &mut dyn Write,
) -> CliResult {
    let ops = match inject_bug {
        Some(name) => AlgebraOps::with_injected_bug(name)
            .ok_or_else(|| format!("no injectable bug named `{name}`"))?,
        None => AlgebraOps::default(),
    };
    match check_algebra_with(seed, count, &ops) {
        Ok(r) => {
            w(
                out,
                format_args!("ok: {} cases, {} checks (seed {seed})", r.cases, r.checks),
            )?;
            Ok(0)
        }
        Err(cx) => {
            w(out, format_args!("counterexample: {cx}"))?;
            Ok(EXIT_MISMATCH)
        }
    }
}

fn cmd_replay(
    scenario: &str,
    trace: &Path,
    stored: Option<&Path>,
    window: Option<usize>,
    out: &mut dyn Write,
) -> CliResult {
    let mut specs = load_scenarios(scenario)?;
    if specs.len() != 1 {
        return Err("replay needs a single scenario, not a battery".into());
    }
    let spec = specs.pop().expect("one scenario");
    let file = fs::File::open(trace).map_err(|e| format!("{}: {e}", trace.display()))?;
    let records = read_trace(BufReader::new(file)).map_err(|e| e.to_string())?;
    let stored: Option<Verdict> = match stored {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Some(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?)
        }
        None => None,
    };
    let coll = spec
        .true_collection
        .build("true_collection")
        .map_err(|e| e.to_string())?;
    let ledger = stored
        .as_ref()
        .map(|v| v.ledger_violations.clone())
        .unwrap_or_default();
    let verdict = replay(
        spec.game,
        window.unwrap_or(spec.window),
        Some(&coll),
        &records,
        ledger,
    )
    .map_err(|e| e.to_string())?;
    w(
        out,
        serde_json::to_string_pretty(&verdict).map_err(|e| e.to_string())?,
    )?;
    match stored {
        Some(v) if v != verdict => {
            w(out, "replayed verdict differs from the stored one")?;
            Ok(EXIT_MISMATCH)
        }
        Some(_) => {
            w(out, "replayed verdict matches the stored one")?;
            Ok(0)
        }
        None => Ok(0),
    }
}
