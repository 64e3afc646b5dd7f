//! Indexed collections, consistency with a labeled sample, and the
//! diagonalization check on the built-in families.

use safegen::collections::{
    consistent_indices, find_pstar_witness, id_impossibility_collections, pstar_collections,
    validate_infinite_differences, validate_pstar, LabeledExample, LanguageCollection, RevealedSet,
    Side,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coll = LanguageCollection::from_specs("demo", &["I", "O", "E", "Q(-1)", "Fin{1, 3}"])?;
    let s = RevealedSet::from_examples([
        LabeledExample::positive(1),
        LabeledExample::positive(3),
        LabeledExample::negative(2),
    ]);
    println!(
        "sample: {:?}",
        s.history()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "true-side consistent among first 5: {:?}",
        consistent_indices(&coll, &s, 5, Side::True)
    );
    println!(
        "harm-side consistent among first 5: {:?}",
        consistent_indices(&coll, &s, 5, Side::Harm)
    );

    let (k, h) = id_impossibility_collections();
    for i in 1..=4 {
        println!(
            "id family {i}: K = {}, H = {}",
            k.at(i).unwrap(),
            h.at(i).unwrap()
        );
    }

    let (pk, ph) = pstar_collections();
    for i in 1..=3 {
        println!(
            "pstar family {i}: K = {}, H = {}",
            pk.at(i).unwrap(),
            ph.at(i).unwrap()
        );
    }
    validate_pstar(&pk, &ph, (1, 1), 64, 4096)?;
    println!("pstar families pass the diagonalization check on the first 64 elements");
    let traversed_k = [0, 2, 4];
    let traversed_h = [0, 1, 2, 3];
    println!(
        "witness for K-prefix {traversed_k:?}, H-prefix {traversed_h:?}: {:?}",
        find_pstar_witness(
            &pk,
            &ph,
            (1, 1),
            &traversed_k.into(),
            &traversed_h.into(),
            4096
        )
    );

    let k2 = LanguageCollection::from_specs("k", &["I", "O"])?;
    let h2 = LanguageCollection::from_specs("h", &["E", "I \\ Fin{0}"])?;
    println!(
        "infinite differences: {:?}",
        validate_infinite_differences(&k2, &h2)
    );
    Ok(())
}
