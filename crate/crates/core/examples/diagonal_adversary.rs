//! The diagonal adversary against safe generation without the
//! infinite-difference promise. It keeps switching to a new witness pair
//! whenever the generator commits to an element of the current one.

use safegen::adversaries::{Adversary, DiagonalAdversary};
use safegen::arena::{Arena, GameKind};
use safegen::collections::pstar_collections;
use safegen::learners::{HarmChoice, Mode, SafeGeneratorInf, DEFAULT_MAX_CUTOFF};

fn main() {
    let (k, h) = pstar_collections();
    let adversary = DiagonalAdversary::pstar();
    let top = adversary.limit_pair().expect("diagonal has a top pair");
    println!("top pair:     K = {}, H = {}", top.k, top.h);
    let first = adversary.current_pair();
    println!("phase 1 pair: K = {}, H = {}", first.k, first.h);
    let learner = SafeGeneratorInf::new(
        k,
        h,
        HarmChoice::Smallest,
        false,
        Mode::Strict,
        DEFAULT_MAX_CUTOFF,
    );
    let mut arena = Arena::new(GameKind::Sg, Box::new(adversary), Box::new(learner), None);
    let mut shown = 0;
    for _ in 0..400 {
        let r = arena.step();
        if r.next_phase > r.phase && shown < 6 {
            shown += 1;
            println!(
                "t={:<4} output {:<4} lies in the top harmful language; phase {} starts",
                r.t,
                r.value.map_or("⊥".to_string(), |v| v.to_string()),
                r.next_phase
            );
        }
    }
    let outcome = arena.run(1200, 50);
    let v = &outcome.verdict;
    println!(
        "after {} steps: {} phase transitions, converged {}, ledger violations {}",
        v.horizon,
        v.phase_transitions,
        v.converged,
        v.ledger_violations.len()
    );
}
