//! Loading a scenario from TOML text, validating it and running it. A
//! variant whose window exceeds the horizon shows a validation error.

use safegen::arena::{ScenarioFile, ScenarioSpec};

const TEXT: &str = r#"
version = 1
name = "odds_minus_evens"
description = "Safe generation with K = I and H = E"
game = "sg"
horizon = 120
window = 30

[true_collection]
languages = ["I", "O", "Q(-1)"]

[harm_collection]
languages = ["E", "Y(0)"]

[pair]
k = "I"
h = "E"

[adversary]
kind = "fair_interleaver"

[learner]
kind = "sg_inf"
harm_choice = "largest"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ScenarioFile::parse(TEXT)?.to_spec()?;
    spec.validate()?;
    let v = spec.run()?.verdict;
    println!(
        "{}: converged {}, {}/{} correct in the final window",
        spec.name, v.converged, v.correct_in_final_window, v.window
    );

    let broken = TEXT.replace("window = 30", "window = 500");
    match ScenarioFile::parse(&broken).and_then(|f| f.to_spec()) {
        Ok(s) => match s.validate() {
            Ok(()) => println!("broken variant unexpectedly valid"),
            Err(e) => println!("broken variant rejected: {e}"),
        },
        Err(e) => println!("broken variant rejected: {e}"),
    }

    println!("built-in scenarios:");
    for name in ScenarioSpec::builtin_names() {
        let s = ScenarioSpec::builtin(name)?;
        println!("  {name:<18} {:?} horizon {}", s.game, s.horizon);
    }
    Ok(())
}
