//! The phased adversary against safe identification. Every time the learner
//! names the current target pair the adversary injects a new harmful
//! example and moves on to the next pair.

use safegen::adversaries::{Adversary, PhasedIdAdversary};
use safegen::arena::{Arena, GameKind};
use safegen::collections::id_impossibility_collections;
use safegen::learners::{ConstantIdentifier, EagerSafeIdentifier, Learner};

fn short(s: &str) -> String {
    if s.len() <= 48 {
        s.to_string()
    } else {
        format!("{}...{}", &s[..20], &s[s.len() - 20..])
    }
}

fn play(learner: Box<dyn Learner>) {
    let name = learner.name();
    let (k, _) = id_impossibility_collections();
    let adversary = PhasedIdAdversary::new();
    let outcome = Arena::new(GameKind::Si, Box::new(adversary), learner, Some(k)).run(600, 50);
    let v = &outcome.verdict;
    let last = outcome.records.last().expect("nonempty");
    println!("{name}");
    println!("  phase transitions: {}", v.phase_transitions);
    println!(
        "  final window: {}/{} against the current pair, {:?} against the limit pair",
        v.correct_in_final_window, v.window, v.limit_correct_in_final_window
    );
    println!(
        "  pair at the horizon: K = {}, H = {}",
        short(&last.k),
        short(&last.h)
    );
}

fn main() {
    let adv = PhasedIdAdversary::new();
    println!(
        "initial pair: K = {}, H = {}",
        adv.current_pair().k,
        adv.current_pair().h
    );
    let (k, h) = id_impossibility_collections();
    play(Box::new(EagerSafeIdentifier::new(k, h)));
    play(Box::new(ConstantIdentifier { index: 2 }));
}
