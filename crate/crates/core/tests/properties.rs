use proptest::prelude::*;

use safegen::adversaries::{Adversary, FairInterleaver};
use safegen::collections::{LabeledExample, LanguageCollection, RevealedSet};
use safegen::learners::{km_generate, sg_inf_generate, GenerationEngine, HarmChoice, Selection};
use safegen::set_algebra::fuzz::RawSpec;
use safegen::set_algebra::{
    parse_set, universe_index, CardinalityClass, Element, EventuallyPeriodicSet,
};

// Periods up to 6 keep every pattern visible inside this range.
const LO: Element = -160;
const HI: Element = 160;

fn tail() -> impl Strategy<Value = (u64, Vec<u64>)> {
    (1u64..=6).prop_flat_map(|p| (Just(p), proptest::collection::vec(0..p, 0..=p as usize)))
}

fn raw() -> impl Strategy<Value = RawSpec> {
    (tail(), -40i64..=40, 0usize..=30, tail()).prop_flat_map(|(n, lo, len, p)| {
        proptest::collection::vec(any::<bool>(), len).prop_map(move |window| RawSpec {
            neg_period: n.0,
            neg_residues: n.1.clone(),
            lo,
            hi: lo + window.len() as i64 - 1,
            window,
            pos_period: p.0,
            pos_residues: p.1.clone(),
        })
    })
}

fn members(f: impl Fn(Element) -> bool) -> Vec<Element> {
    (LO..=HI).filter(|&x| f(x)).collect()
}

fn agrees(set: &EventuallyPeriodicSet, f: impl Fn(Element) -> bool) -> bool {
    (LO..=HI).all(|x| set.member(x) == f(x))
}

fn oracle_cardinality(f: impl Fn(Element) -> bool) -> CardinalityClass {
    // Any member beyond the windows repeats forever.
    let far = (LO..LO + 60).chain(HI - 60..=HI).any(&f);
    if far {
        CardinalityClass::Infinite
    } else {
        CardinalityClass::from_count(members(f).len() as u64)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn build_matches_description(a in raw()) {
        prop_assert!(agrees(&a.build(), |x| a.member(x)));
    }

    #[test]
    fn printed_form_parses_back(a in raw()) {
        let set = a.build();
        prop_assert_eq!(parse_set(&set.to_string()).unwrap(), set);
    }

    #[test]
    fn boolean_operations(a in raw(), b in raw()) {
        let (sa, sb) = (a.build(), b.build());
        prop_assert!(agrees(&sa.union(&sb), |x| a.member(x) || b.member(x)));
        prop_assert!(agrees(&sa.intersect(&sb), |x| a.member(x) && b.member(x)));
        prop_assert!(agrees(&sa.difference(&sb), |x| a.member(x) && !b.member(x)));
        prop_assert!(agrees(&sa.complement(), |x| !a.member(x)));
    }

    #[test]
    fn relations_and_cardinality(a in raw(), b in raw()) {
        let (sa, sb) = (a.build(), b.build());
        let subset = (LO..=HI).all(|x| !a.member(x) || b.member(x));
        prop_assert_eq!(sa.is_subset(&sb), subset);
        prop_assert_eq!(sa == sb, (LO..=HI).all(|x| a.member(x) == b.member(x)));
        prop_assert_eq!(sa.cardinality(), oracle_cardinality(|x| a.member(x)));
        prop_assert_eq!(
            sa.difference(&sb).cardinality(),
            oracle_cardinality(|x| a.member(x) && !b.member(x))
        );
    }

    #[test]
    fn prefix_lists_members_in_universe_order(a in raw(), m in 1u64..200) {
        let set = a.build();
        let expected: Vec<Element> = (1..=m)
            .map(safegen::set_algebra::universe_elem)
            .filter(|&x| a.member(x))
            .collect();
        prop_assert_eq!(set.prefix(m), expected);
    }
}

const POOL: &[&str] = &[
    "I",
    "O",
    "E",
    "N",
    "N | E",
    "Q(-1)",
    "Q(-3)",
    "Y(-2)",
    "Y(-5)",
    "Ray(3, 3)",
    "Ray(-2, -4)",
    "Fin{0, 1, 2}",
    "Fin{-1, 4}",
    "I \\ Fin{1, 2}",
];

fn pick(idx: &[usize]) -> Vec<&'static str> {
    idx.iter().map(|&i| POOL[i % POOL.len()]).collect()
}

const REF_CUTOFF: u64 = 256;

/// The reference settles every case within its cutoff; beyond it the engine
/// may only stop or answer with something the reference never reached.
fn consistent_with_reference(
    fast: Result<Option<Element>, ()>,
    slow: Result<Option<Element>, ()>,
) -> bool {
    match (fast, slow) {
        (f, Ok(s)) => f == Ok(s),
        (Ok(Some(x)), Err(())) => universe_index(x) > REF_CUTOFF,
        (_, Err(())) => true,
    }
}

fn outcome(sel: Result<Selection, safegen::learners::LearnerError>) -> Result<Option<Element>, ()> {
    match sel {
        Ok(Selection::Generate { element, .. }) => Ok(Some(element)),
        Ok(Selection::NoCandidate) => Ok(None),
        _ => Err(()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn km_engine_matches_reference(
        idx in proptest::collection::vec(0usize..64, 1..=4),
        target in 0usize..4,
        steps in 1usize..40,
    ) {
        let specs = pick(&idx);
        let coll = LanguageCollection::from_specs("k", &specs).unwrap();
        let k = parse_set(specs[target % specs.len()]).unwrap();
        let h = EventuallyPeriodicSet::empty();
        let mut adv = FairInterleaver::new(k, h);
        let mut engine = GenerationEngine::new(coll.clone(), None, HarmChoice::Largest, 1 << 14);
        let mut s = RevealedSet::new();
        for _ in 0..steps {
            s.push(adv.emit().example);
            let fast = outcome(engine.step(&s));
            let slow = km_generate(&coll, &s, s.step(), REF_CUTOFF).map_err(|_| ());
            prop_assert!(
                consistent_with_reference(fast, slow),
                "engine {:?}, reference {:?}, sample {:?}",
                fast,
                slow,
                s.history()
            );
        }
    }

    #[test]
    fn safe_engine_matches_reference(
        kidx in proptest::collection::vec(0usize..64, 1..=3),
        hidx in proptest::collection::vec(0usize..64, 1..=3),
        kt in 0usize..3,
        ht in 0usize..3,
        smallest in any::<bool>(),
        steps in 1usize..40,
    ) {
        let (ks, hs) = (pick(&kidx), pick(&hidx));
        let kc = LanguageCollection::from_specs("k", &ks).unwrap();
        let hc = LanguageCollection::from_specs("h", &hs).unwrap();
        let choice = if smallest { HarmChoice::Smallest } else { HarmChoice::Largest };
        let k = parse_set(ks[kt % ks.len()]).unwrap();
        let h = parse_set(hs[ht % hs.len()]).unwrap();
        let mut adv = FairInterleaver::new(k, h);
        let mut engine = GenerationEngine::new(kc.clone(), Some(hc.clone()), choice, 1 << 14);
        let mut s = RevealedSet::new();
        for _ in 0..steps {
            s.push(adv.emit().example);
            let fast = outcome(engine.step(&s));
            let slow = sg_inf_generate(&kc, Some(&hc), &s, s.step(), choice, REF_CUTOFF).map_err(|_| ());
            prop_assert!(
                consistent_with_reference(fast, slow),
                "engine {:?}, reference {:?}, sample {:?}",
                fast,
                slow,
                s.history()
            );
        }
    }

    #[test]
    fn interleaver_is_truthful(a in raw(), b in raw(), steps in 1usize..200) {
        let (sa, sb) = (a.build(), b.build());
        prop_assume!(!(sa.is_empty() && sb.is_empty()));
        let mut adv = FairInterleaver::new(sa, sb);
        let pair = adv.current_pair().clone();
        for _ in 0..steps {
            let e: LabeledExample = adv.emit().example;
            prop_assert!(pair.is_truthful(&e));
        }
    }
}
