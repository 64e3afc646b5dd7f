//! Seeded differential checks of the set algebra against brute force.
//!
//! Random sets are described by [`RawSpec`], whose membership test reads the
//! raw description directly and never goes through canonicalization. Every
//! operation of the algebra is compared pointwise with the Boolean
//! combination of raw memberships on a window reaching three common periods
//! past the explicit region.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{lcm, CardinalityClass, Element, EventuallyPeriodicSet, Tail};

/// Explicit windows of generated sets stay inside `[-RADIUS, RADIUS]`.
pub const RADIUS: Element = 64;
/// Largest generated tail period.
pub const MAX_PERIOD: u64 = 12;

/// Uncanonicalized set description used as the independent oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSpec {
    pub neg_period: u64,
    pub neg_residues: Vec<u64>,
    pub lo: Element,
    pub hi: Element,
    pub window: Vec<bool>,
    pub pos_period: u64,
    pub pos_residues: Vec<u64>,
}

impl RawSpec {
    pub fn member(&self, x: Element) -> bool {
        if x < self.lo {
            self.neg_residues
                .contains(&(x.rem_euclid(self.neg_period as Element) as u64))
        } else if x > self.hi {
            self.pos_residues
                .contains(&(x.rem_euclid(self.pos_period as Element) as u64))
        } else {
            self.window[(x - self.lo) as usize]
        }
    }

    pub fn build(&self) -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::from_parts(
            Tail::new(self.neg_period, self.neg_residues.iter().copied()),
            self.lo,
            self.hi,
            |x| self.window[(x - self.lo) as usize],
            Tail::new(self.pos_period, self.pos_residues.iter().copied()),
        )
    }

    /// Draws a description with periods in `1..=12` and a window inside
    /// `[-64, 64]`. Tails are empty a quarter of the time so that finite
    /// sets show up regularly.
    pub fn random(rng: &mut impl Rng) -> Self {
        let tail = |rng: &mut dyn rand::RngCore| {
            let period = rng.random_range(1..=MAX_PERIOD);
            let residues = if rng.random_bool(0.25) {
                Vec::new()
            } else {
                (0..period).filter(|_| rng.random_bool(0.4)).collect()
            };
            (period, residues)
        };
        let (neg_period, neg_residues) = tail(rng);
        let (pos_period, pos_residues) = tail(rng);
        let lo = rng.random_range(-RADIUS..=RADIUS);
        let hi = rng.random_range(lo - 1..=RADIUS);
        let density = rng.random_range(0.0..1.0);
        let window = (lo..=hi).map(|_| rng.random_bool(density)).collect();
        RawSpec {
            neg_period,
            neg_residues,
            lo,
            hi,
            window,
            pos_period,
            pos_residues,
        }
    }

    fn periods(&self) -> [u64; 2] {
        [self.neg_period, self.pos_period]
    }
}

/// The operations under test. Swapping one out for a faulty version is how
/// the harness itself is tested.
#[derive(Clone, Copy)]
pub struct AlgebraOps {
    pub union: fn(&EventuallyPeriodicSet, &EventuallyPeriodicSet) -> EventuallyPeriodicSet,
    pub intersect: fn(&EventuallyPeriodicSet, &EventuallyPeriodicSet) -> EventuallyPeriodicSet,
    pub difference: fn(&EventuallyPeriodicSet, &EventuallyPeriodicSet) -> EventuallyPeriodicSet,
    pub cardinality: fn(&EventuallyPeriodicSet) -> CardinalityClass,
    pub is_subset: fn(&EventuallyPeriodicSet, &EventuallyPeriodicSet) -> bool,
}

impl Default for AlgebraOps {
    fn default() -> Self {
        AlgebraOps {
            union: EventuallyPeriodicSet::union,
            intersect: EventuallyPeriodicSet::intersect,
            difference: EventuallyPeriodicSet::difference,
            cardinality: EventuallyPeriodicSet::cardinality,
            is_subset: EventuallyPeriodicSet::is_subset,
        }
    }
}

impl AlgebraOps {
    /// Deliberately broken operations, for exercising the harness itself.
    /// Known names: `union`, `difference`, `cardinality`.
    pub fn with_injected_bug(name: &str) -> Option<Self> {
        let ok = AlgebraOps::default();
        Some(match name {
            "union" => AlgebraOps {
                union: |a, b| a.intersect(b),
                ..ok
            },
            "difference" => AlgebraOps {
                difference: |a, b| b.difference(a),
                ..ok
            },
            "cardinality" => AlgebraOps {
                cardinality: |s| match s.cardinality() {
                    CardinalityClass::Finite(n) => CardinalityClass::Finite(n + 1),
                    other => other,
                },
                ..ok
            },
            _ => return None,
        })
    }
}

/// First failing check found by the harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub case: usize,
    pub check: String,
    pub left: String,
    pub right: String,
    pub point: Option<Element>,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {}: {} failed for a = {}, b = {}",
            self.case, self.check, self.left, self.right
        )?;
        if let Some(x) = self.point {
            write!(f, " at x = {x}")?;
        }
        write!(f, " (expected {}, got {})", self.expected, self.actual)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub cases: usize,
    pub checks: u64,
}

pub fn check_algebra(seed: u64, count: usize) -> Result<FuzzReport, Box<Counterexample>> {
    check_algebra_with(seed, count, &AlgebraOps::default())
}

pub fn check_algebra_with(
    seed: u64,
    count: usize,
    ops: &AlgebraOps,
) -> Result<FuzzReport, Box<Counterexample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    for case in 0..count {
        let a = RawSpec::random(&mut rng);
        let b = RawSpec::random(&mut rng);
        check_pair(case, &a, &b, ops, &mut report.checks)?;
        report.cases += 1;
    }
    Ok(report)
}

type BoolOp = fn(bool, bool) -> bool;

/// Runs every check on one pair of raw descriptions.
pub fn check_pair(
    case: usize,
    a: &RawSpec,
    b: &RawSpec,
    ops: &AlgebraOps,
    checks: &mut u64,
) -> Result<(), Box<Counterexample>> {
    let period = a.periods().into_iter().chain(b.periods()).fold(1, lcm) as Element;
    let reach = 3 * period + RADIUS;
    let sa = a.build();
    let sb = b.build();
    let fail = |check: &str, point, expected: String, actual: String| {
        Box::new(Counterexample {
            case,
            check: check.to_string(),
            left: sa.to_string(),
            right: sb.to_string(),
            point,
            expected,
            actual,
        })
    };

    for (name, raw, set) in [("canonical(a)", a, &sa), ("canonical(b)", b, &sb)] {
        for x in -reach..=reach {
            *checks += 1;
            if set.member(x) != raw.member(x) {
                return Err(fail(
                    name,
                    Some(x),
                    raw.member(x).to_string(),
                    set.member(x).to_string(),
                ));
            }
        }
    }

    let cases: [(&str, BoolOp, EventuallyPeriodicSet); 3] = [
        ("union", |p, q| p || q, (ops.union)(&sa, &sb)),
        ("intersect", |p, q| p && q, (ops.intersect)(&sa, &sb)),
        ("difference", |p, q| p && !q, (ops.difference)(&sa, &sb)),
    ];
    for (name, op, result) in &cases {
        for x in -reach..=reach {
            *checks += 1;
            let expected = op(a.member(x), b.member(x));
            if result.member(x) != expected {
                return Err(fail(
                    name,
                    Some(x),
                    expected.to_string(),
                    result.member(x).to_string(),
                ));
            }
        }
        let expected = brute_cardinality(|x| op(a.member(x), b.member(x)), period);
        let actual = (ops.cardinality)(result);
        *checks += 1;
        if actual != expected {
            return Err(fail(
                &format!("cardinality({name})"),
                None,
                expected.to_string(),
                actual.to_string(),
            ));
        }
    }

    let expected_subset = (-reach..=reach).all(|x| !a.member(x) || b.member(x));
    *checks += 1;
    if (ops.is_subset)(&sa, &sb) != expected_subset {
        return Err(fail(
            "subset",
            None,
            expected_subset.to_string(),
            (!expected_subset).to_string(),
        ));
    }

    let expected_equal = (-reach..=reach).all(|x| a.member(x) == b.member(x));
    *checks += 1;
    if (sa == sb) != expected_equal {
        return Err(fail(
            "canonical equality",
            None,
            expected_equal.to_string(),
            (!expected_equal).to_string(),
        ));
    }
    Ok(())
}

/// Counts members of a combination of raw sets whose explicit parts lie in
/// `[-RADIUS, RADIUS]` and whose tails have common period `period`.
fn brute_cardinality(member: impl Fn(Element) -> bool, period: Element) -> CardinalityClass {
    let right = (RADIUS + 1..=RADIUS + period).any(&member);
    let left = (-RADIUS - period..-RADIUS).any(&member);
    if right || left {
        CardinalityClass::Infinite
    } else {
        CardinalityClass::from_count((-RADIUS..=RADIUS).filter(|&x| member(x)).count() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cases_is_a_clean_pass() {
        assert_eq!(check_algebra(1, 0).unwrap(), FuzzReport::default());
    }

    #[test]
    fn small_run_passes() {
        let r = check_algebra(7, 50).unwrap();
        assert_eq!(r.cases, 50);
        assert!(r.checks > 0);
    }

    #[test]
    fn injected_union_bug_is_caught() {
        let ops = AlgebraOps::with_injected_bug("union").unwrap();
        let err = check_algebra_with(1, 100, &ops).unwrap_err();
        assert!(err.check.starts_with("union") || err.check.starts_with("cardinality(union"));
    }

    #[test]
    fn injected_cardinality_bug_is_caught() {
        let ops = AlgebraOps::with_injected_bug("cardinality").unwrap();
        assert!(check_algebra_with(3, 200, &ops).is_err());
        let ops = AlgebraOps::with_injected_bug("difference").unwrap();
        assert!(check_algebra_with(3, 200, &ops).is_err());
        assert!(AlgebraOps::with_injected_bug("nothing").is_none());
    }
}
