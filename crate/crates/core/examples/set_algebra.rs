//! Parsing, combining and inspecting eventually-periodic sets.

use safegen::set_algebra::{parse_set, universe};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let evens = parse_set("E")?;
    let odds = parse_set("O")?;
    let tail = parse_set("Ray(10, 3)")?;
    let small = parse_set("Fin{-3, 0, 4, 5}")?;

    println!(
        "first universe elements: {:?}",
        universe().take(9).map(|(_, x)| x).collect::<Vec<_>>()
    );
    for (name, set) in [("E", &evens), ("O", &odds), ("Ray(10, 3)", &tail)] {
        println!("{name:<12} prefix(12) = {:?}", set.prefix(12));
    }

    let mixed = evens.union(&tail).difference(&small);
    println!("(E | Ray(10, 3)) \\ Fin{{-3, 0, 4, 5}} = {mixed}");
    println!("  cardinality: {:?}", mixed.cardinality());
    println!(
        "  contains 13: {}, contains 4: {}",
        mixed.member(13),
        mixed.member(4)
    );

    println!(
        "E & O = {} ({:?})",
        evens.intersect(&odds),
        evens.intersect(&odds).cardinality()
    );
    println!("complement of N | E = {}", parse_set("N | E")?.complement());
    println!("Y(-2) = {}", parse_set("Y(-2)")?);
    println!("Q(-1) = {}", parse_set("Q(-1)")?);
    println!(
        "Fin{{0, 2}} ⊆ E: {}",
        parse_set("Fin{0, 2}")?.is_subset(&evens)
    );

    match parse_set("Ray(1, 0)") {
        Ok(s) => println!("unexpected: {s}"),
        Err(e) => println!("Ray(1, 0) rejected: {e}"),
    }
    Ok(())
}
