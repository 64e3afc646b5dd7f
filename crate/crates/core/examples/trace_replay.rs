//! Writing a trace as JSON lines, reading it back and re-scoring it.
//! Editing one output changes the replayed verdict.

use safegen::arena::{read_trace, replay, trace_bytes, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ScenarioSpec::builtin("sg_inf")?;
    let outcome = spec.run()?;
    let bytes = trace_bytes(&outcome.records);
    let first = std::str::from_utf8(&bytes)?
        .lines()
        .next()
        .unwrap_or_default();
    println!("{} trace lines, first:\n  {first}", outcome.records.len());

    let records = read_trace(bytes.as_slice())?;
    let coll = spec.true_collection.build("true_collection")?;
    let again = replay(spec.game, spec.window, Some(&coll), &records, Vec::new())?;
    println!(
        "replayed verdict equals the original: {}",
        again == outcome.verdict
    );

    let mut edited = records;
    let last = edited.last_mut().expect("nonempty trace");
    last.output = "bottom".into();
    last.value = None;
    let changed = replay(spec.game, spec.window, Some(&coll), &edited, Vec::new())?;
    println!(
        "after turning the last output into ⊥: converged {}, {}/{} in the final window",
        changed.converged, changed.correct_in_final_window, changed.window
    );
    Ok(())
}
