//! Generation in the limit: a positive enumeration of the odd positives
//! against the critical-language generator.

use safegen::adversaries::Enumerator;
use safegen::arena::{Arena, GameKind};
use safegen::collections::LanguageCollection;
use safegen::learners::{KmGenerator, DEFAULT_MAX_CUTOFF};
use safegen::set_algebra::{parse_set, EventuallyPeriodicSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coll = LanguageCollection::from_specs("k", &["I", "O", "E", "Q(-1)", "Y(0)"])?;
    let target = parse_set("O")?;
    let adversary = Enumerator::new(target.clone(), EventuallyPeriodicSet::empty());
    let learner = KmGenerator::new(coll, DEFAULT_MAX_CUTOFF);
    let outcome =
        Arena::new(GameKind::Sg, Box::new(adversary), Box::new(learner), None).run(200, 40);

    println!(
        "{:>4} {:>8} {:>12} {:>8}",
        "t", "shown", "output", "correct"
    );
    for r in outcome.records.iter().take(12) {
        println!(
            "{:>4} {:>8} {:>12} {:>8}",
            r.t,
            r.element,
            r.learner_output()
                .map_or("error".to_string(), |o| o.to_string()),
            r.correct
        );
    }
    let v = &outcome.verdict;
    println!(
        "converged: {}, correct in final window: {}/{}, repeated outputs: {}",
        v.converged, v.correct_in_final_window, v.window, v.repeats
    );
    Ok(())
}
