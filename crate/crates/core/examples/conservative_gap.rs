//! Picking the smallest consistent true language and the largest consistent
//! harmful language can leave nothing to generate, even though the actual
//! pair has an infinite difference.

use safegen::arena::ScenarioSpec;
use safegen::demos::conservative_gaps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ScenarioSpec::builtin("conservative")?;
    let outcome = spec.run()?;
    let gaps = conservative_gaps(&spec, &outcome)?;
    println!(
        "{} of {} steps leave K_c \\ H_c empty",
        gaps.len(),
        spec.horizon
    );
    for g in gaps.iter().take(5) {
        println!(
            "  t={:<3} K_c = {}, H_c = {}, learner said {}",
            g.t, g.k_c, g.h_c, g.output
        );
    }
    let last = outcome.records.last().expect("nonempty trace");
    println!("actual pair: K = {}, H = {}", last.k, last.h);
    Ok(())
}
