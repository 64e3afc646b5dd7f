//! Fuzzing the set algebra against a brute-force membership oracle, with
//! and without a deliberately broken operation.

use safegen::set_algebra::fuzz::{check_algebra, check_algebra_with, AlgebraOps};

fn main() {
    match check_algebra(7, 300) {
        Ok(r) => println!("clean algebra: {} cases, {} checks", r.cases, r.checks),
        Err(cx) => println!("clean algebra failed: {cx}"),
    }
    for bug in ["union", "difference", "cardinality"] {
        let ops = AlgebraOps::with_injected_bug(bug).expect("known bug");
        match check_algebra_with(7, 300, &ops) {
            Ok(_) => println!("{bug}: bug went unnoticed"),
            Err(cx) => println!("{bug}: caught\n  {cx}"),
        }
    }
}
