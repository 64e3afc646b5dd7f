//! Every built-in demo, one report after another.

use safegen::demos::{run_demo, DEMOS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, about) in DEMOS {
        println!("# {about}");
        print!("{}", run_demo(name)?);
        println!();
    }
    Ok(())
}
