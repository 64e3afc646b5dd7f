//! Safe generation: the adversary interleaves true and harmful examples,
//! and the generator must stay inside K \ H.

use safegen::adversaries::FairInterleaver;
use safegen::arena::{Arena, GameKind};
use safegen::collections::LanguageCollection;
use safegen::learners::{HarmChoice, Mode, SafeGeneratorInf, DEFAULT_MAX_CUTOFF};
use safegen::set_algebra::parse_set;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = LanguageCollection::from_specs("k", &["I", "O", "Q(-1)"])?;
    let h = LanguageCollection::from_specs("h", &["E", "Y(0)"])?;
    let adversary = FairInterleaver::new(parse_set("I")?, parse_set("E")?);
    let learner = SafeGeneratorInf::new(
        k,
        h,
        HarmChoice::Largest,
        true,
        Mode::Strict,
        DEFAULT_MAX_CUTOFF,
    );
    let outcome =
        Arena::new(GameKind::Sg, Box::new(adversary), Box::new(learner), None).run(200, 40);

    for r in outcome.records.iter().take(10) {
        let hyp = r
            .hypothesis
            .map(|h| format!("K#{:?} H#{:?}", h.k.unwrap_or(0), h.h.unwrap_or(0)))
            .unwrap_or_default();
        println!(
            "t={:<3} shown ({}, {}) -> {:<12} correct={} {hyp}",
            r.t,
            r.element,
            u8::from(r.label),
            r.learner_output()
                .map_or("error".to_string(), |o| o.to_string()),
            r.correct
        );
    }
    let v = &outcome.verdict;
    println!(
        "pair K = I, H = E: converged {}, {}/{} correct in the final window",
        v.converged, v.correct_in_final_window, v.window
    );
    Ok(())
}
