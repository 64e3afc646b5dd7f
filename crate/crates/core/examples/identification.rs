//! Identification in the limit on `{I, O}` with target `O`: guessing the
//! first consistent index never settles, asking a safe generator about
//! subset relations does.

use safegen::adversaries::Enumerator;
use safegen::arena::{Arena, GameKind};
use safegen::collections::LanguageCollection;
use safegen::learners::{IdentifierFromSg, Learner, NaiveIdentifier, ReferenceSg};
use safegen::set_algebra::{parse_set, EventuallyPeriodicSet};

fn play(
    coll: &LanguageCollection,
    learner: Box<dyn Learner>,
) -> Result<(), Box<dyn std::error::Error>> {
    let name = learner.name();
    let adversary = Enumerator::new(parse_set("O")?, EventuallyPeriodicSet::empty());
    let outcome = Arena::new(
        GameKind::Li,
        Box::new(adversary),
        learner,
        Some(coll.clone()),
    )
    .run(150, 30);
    let guesses: Vec<String> = outcome
        .records
        .iter()
        .take(8)
        .map(|r| r.value.map_or("-".into(), |v| v.to_string()))
        .collect();
    let v = &outcome.verdict;
    println!(
        "{name:<11} first guesses {:<24} converged {:<5} final window {}/{} target {:?}",
        guesses.join(" "),
        v.converged,
        v.correct_in_final_window,
        v.window,
        v.target_index
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coll = LanguageCollection::from_specs("c", &["I", "O"])?;
    play(&coll, Box::new(NaiveIdentifier::new(coll.clone())))?;
    play(
        &coll,
        Box::new(IdentifierFromSg::new(
            coll.clone(),
            Box::new(ReferenceSg::relaxed()),
        )),
    )?;
    Ok(())
}
