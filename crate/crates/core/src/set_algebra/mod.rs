//! Exact eventually-periodic subsets of the integers.
//!
//! Every language used by the simulator lives in this algebra. A set is
//! stored as a left tail (residue classes modulo a period, active for all
//! values below `lo`), an explicit membership window `[lo, hi]`, and a right
//! tail (residue classes active above `hi`). The representation is kept in a
//! canonical form so that structural equality coincides with set equality:
//!
//! * both tail periods are minimal,
//! * `lo = min(0, first value that breaks the left tail pattern)`,
//! * `hi = max(0, last value that breaks the right tail pattern)`.
//!
//! The window is therefore anchored at the origin and never empty.

mod parse;
mod universe;

pub mod fuzz;

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

pub use parse::{parse_set, ParseError};
pub use universe::{universe, universe_elem, universe_index, Rank};

/// A member of the universe. Strings are relabeled as integers.
pub type Element = i64;

/// Periodic membership pattern on one unbounded side of a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    period: u64,
    residues: Vec<bool>,
}

impl Tail {
    /// The tail with no members.
    pub fn empty() -> Self {
        Tail {
            period: 1,
            residues: vec![false],
        }
    }

    /// The tail containing every integer.
    pub fn full() -> Self {
        Tail {
            period: 1,
            residues: vec![true],
        }
    }

    /// Builds a tail from a period and the residues that are members.
    ///
    /// Residues are taken modulo `period`. The result is reduced to its
    /// minimal period.
    ///
    /// # Panics
    ///
    /// Panics if `period == 0`.
    pub fn new(period: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        assert!(period > 0, "tail period must be positive");
        let mut bits = vec![false; period as usize];
        for r in residues {
            bits[(r % period) as usize] = true;
        }
        Tail {
            period,
            residues: bits,
        }
        .minimized()
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Active residues in increasing order.
    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| r as u64)
    }

    pub fn is_empty(&self) -> bool {
        !self.residues.iter().any(|&b| b)
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.residues[x.rem_euclid(self.period as i64) as usize]
    }

    fn minimized(self) -> Self {
        let p = self.period as usize;
        for d in 1..p {
            if p.is_multiple_of(d) && (0..p).all(|i| self.residues[i] == self.residues[i % d]) {
                return Tail {
                    period: d as u64,
                    residues: self.residues[..d].to_vec(),
                };
            }
        }
        self
    }

    fn combine(&self, other: &Tail, f: impl Fn(bool, bool) -> bool) -> Tail {
        let period = lcm(self.period, other.period);
        let residues = (0..period as i64)
            .map(|r| f(self.contains(r), other.contains(r)))
            .collect();
        Tail { period, residues }.minimized()
    }
}

/// Exact size class of a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "count")]
pub enum CardinalityClass {
    Empty,
    Finite(u64),
    Infinite,
}

impl CardinalityClass {
    /// `Finite(0)` is reported as `Empty`.
    pub fn from_count(n: u64) -> Self {
        if n == 0 {
            CardinalityClass::Empty
        } else {
            CardinalityClass::Finite(n)
        }
    }

    pub fn is_infinite(self) -> bool {
        self == CardinalityClass::Infinite
    }
}

impl fmt::Display for CardinalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalityClass::Empty => f.write_str("empty"),
            CardinalityClass::Finite(n) => write!(f, "finite({n})"),
            CardinalityClass::Infinite => f.write_str("infinite"),
        }
    }
}

/// A canonical eventually-periodic subset of the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSet {
    neg: Tail,
    lo: Element,
    hi: Element,
    window: Vec<bool>,
    pos: Tail,
}

impl EventuallyPeriodicSet {
    /// Builds a canonical set from an arbitrary description: `neg` holds for
    /// every `x < lo`, `pos` for every `x > hi`, and `window(x)` decides
    /// membership for `lo <= x <= hi`. An empty window (`lo == hi + 1`) is
    /// allowed.
    pub fn from_parts(
        neg: Tail,
        lo: Element,
        hi: Element,
        window: impl Fn(Element) -> bool,
        pos: Tail,
    ) -> Self {
        assert!(lo <= hi + 1, "window bounds out of order: [{lo}, {hi}]");
        let raw = |x: Element| {
            if x < lo {
                neg.contains(x)
            } else if x > hi {
                pos.contains(x)
            } else {
                window(x)
            }
        };
        let neg = neg.clone().minimized();
        let pos = pos.clone().minimized();
        let span = lcm(neg.period, pos.period) as Element;

        // Last value that breaks the right pattern. Below `lo` the left
        // pattern holds, so if the two patterns differ a break shows up
        // within one common period.
        let last_break = (lo - span..=hi).rev().find(|&x| raw(x) != pos.contains(x));
        let first_break = (lo..=hi + span).find(|&x| raw(x) != neg.contains(x));

        let new_lo = first_break.map_or(0, |x| x.min(0));
        let new_hi = last_break.map_or(0, |x| x.max(0));
        let window = (new_lo..=new_hi).map(raw).collect();
        EventuallyPeriodicSet {
            neg,
            lo: new_lo,
            hi: new_hi,
            window,
            pos,
        }
    }

    pub fn empty() -> Self {
        Self::from_parts(Tail::empty(), 0, -1, |_| false, Tail::empty())
    }

    /// All integers.
    pub fn integers() -> Self {
        Self::from_parts(Tail::full(), 0, -1, |_| false, Tail::full())
    }

    pub fn finite(members: impl IntoIterator<Item = Element>) -> Self {
        let members: Vec<Element> = members.into_iter().collect();
        let (Some(&lo), Some(&hi)) = (members.iter().min(), members.iter().max()) else {
            return Self::empty();
        };
        let mut window = vec![false; (hi - lo + 1) as usize];
        for x in &members {
            window[(x - lo) as usize] = true;
        }
        Self::from_parts(
            Tail::empty(),
            lo,
            hi,
            |x| window[(x - lo) as usize],
            Tail::empty(),
        )
    }

    /// `{start + k * step : k >= 0}`. A negative step walks leftwards.
    ///
    /// # Panics
    ///
    /// Panics if `step == 0`.
    pub fn ray(start: Element, step: i64) -> Self {
        assert!(step != 0, "ray step must be nonzero");
        let period = step.unsigned_abs();
        let class = Tail::new(period, [start.rem_euclid(period as i64) as u64]);
        if step > 0 {
            Self::from_parts(Tail::empty(), start, start, |_| true, class)
        } else {
            Self::from_parts(class, start, start, |_| true, Tail::empty())
        }
    }

    /// `{x : x ≡ residue (mod modulus)}` over all integers.
    pub fn residue_class(modulus: u64, residue: u64) -> Self {
        let t = Tail::new(modulus, [residue]);
        Self::from_parts(t.clone(), 0, -1, |_| false, t)
    }

    /// Positive odd integers `{1, 3, 5, ...}`.
    pub fn odd_positive() -> Self {
        Self::ray(1, 2)
    }

    /// Nonnegative even integers `{0, 2, 4, ...}`.
    pub fn even_nonnegative() -> Self {
        Self::ray(0, 2)
    }

    /// Negative integers `{-1, -2, ...}`.
    pub fn negatives() -> Self {
        Self::ray(-1, -1)
    }

    /// `{-a, ..., 0}` together with the nonnegative evens.
    pub fn y_set(a: u64) -> Self {
        let a = a as Element;
        Self::from_parts(Tail::empty(), -a, 0, |_| true, Tail::new(2, [0]))
    }

    /// `{..., -b-1, -b}` together with the positive odds.
    pub fn q_set(b: u64) -> Self {
        assert!(b >= 1, "Q sets are indexed from 1");
        let b = b as Element;
        Self::from_parts(Tail::full(), -b + 1, 0, |_| false, Tail::new(2, [1]))
    }

    pub fn neg_tail(&self) -> &Tail {
        &self.neg
    }

    pub fn pos_tail(&self) -> &Tail {
        &self.pos
    }

    /// Bounds of the explicit window. Always `lo <= 0 <= hi`.
    pub fn window_bounds(&self) -> (Element, Element) {
        (self.lo, self.hi)
    }

    /// Members inside the explicit window, ascending.
    pub fn window_members(&self) -> impl Iterator<Item = Element> + '_ {
        self.window
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| self.lo + i as Element)
    }

    #[inline]
    pub fn member(&self, x: Element) -> bool {
        if x < self.lo {
            self.neg.contains(x)
        } else if x > self.hi {
            self.pos.contains(x)
        } else {
            self.window[(x - self.lo) as usize]
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool + Copy) -> Self {
        let neg = self.neg.combine(&other.neg, f);
        let pos = self.pos.combine(&other.pos, f);
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        Self::from_parts(neg, lo, hi, |x| f(self.member(x), other.member(x)), pos)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement within the integers.
    pub fn complement(&self) -> Self {
        let flip = |t: &Tail| Tail {
            period: t.period,
            residues: t.residues.iter().map(|b| !b).collect(),
        };
        Self::from_parts(
            flip(&self.neg),
            self.lo,
            self.hi,
            |x| !self.member(x),
            flip(&self.pos),
        )
    }

    pub fn cardinality(&self) -> CardinalityClass {
        if !self.neg.is_empty() || !self.pos.is_empty() {
            CardinalityClass::Infinite
        } else {
            CardinalityClass::from_count(self.window.iter().filter(|&&b| b).count() as u64)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == CardinalityClass::Empty
    }

    pub fn is_infinite(&self) -> bool {
        self.cardinality().is_infinite()
    }

    /// `self ⊆ other`, decided without materializing the difference.
    pub fn is_subset(&self, other: &Self) -> bool {
        let tails_ok = |a: &Tail, b: &Tail| {
            let p = lcm(a.period, b.period) as Element;
            (0..p).all(|r| !a.contains(r) || b.contains(r))
        };
        if !tails_ok(&self.neg, &other.neg) || !tails_ok(&self.pos, &other.pos) {
            return false;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        (lo..=hi).all(|x| !self.member(x) || other.member(x))
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self != other && self.is_subset(other)
    }

    /// Members among the first `m` universe elements, in universe order.
    pub fn prefix(&self, m: Rank) -> Vec<Element> {
        (1..=m)
            .map(universe_elem)
            .filter(|&x| self.member(x))
            .collect()
    }

    /// Lazily lists the members in universe order. Terminates for finite sets.
    pub fn enumerate(&self) -> Enumeration<'_> {
        let remaining = match self.cardinality() {
            CardinalityClass::Infinite => None,
            CardinalityClass::Empty => Some(0),
            CardinalityClass::Finite(n) => Some(n),
        };
        Enumeration {
            set: self,
            next_rank: 1,
            remaining,
        }
    }

    /// Owned version of [`enumerate`](Self::enumerate).
    pub fn into_enumeration(self) -> OwnedEnumeration {
        let remaining = self.enumerate().remaining;
        OwnedEnumeration {
            set: self,
            next_rank: 1,
            remaining,
        }
    }

    /// First member (in universe order) that is not in `skip`, if any.
    pub fn first_member_outside(&self, skip: impl Fn(Element) -> bool) -> Option<Element> {
        self.enumerate().find(|&x| !skip(x))
    }

    /// A rank bound beyond which membership is governed by the tails alone.
    pub fn settled_rank(&self) -> Rank {
        let reach = self.lo.unsigned_abs().max(self.hi.unsigned_abs());
        universe_index(-(reach as Element)).max(universe_index(reach as Element))
    }
}

/// Iterator returned by [`EventuallyPeriodicSet::enumerate`].
pub struct Enumeration<'a> {
    set: &'a EventuallyPeriodicSet,
    next_rank: Rank,
    remaining: Option<u64>,
}

impl Iterator for Enumeration<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        next_member(self.set, &mut self.next_rank, &mut self.remaining)
    }
}

/// Owned counterpart of [`Enumeration`], for adversaries that keep a cursor.
#[derive(Clone, Debug)]
pub struct OwnedEnumeration {
    set: EventuallyPeriodicSet,
    next_rank: Rank,
    remaining: Option<u64>,
}

impl OwnedEnumeration {
    pub fn set(&self) -> &EventuallyPeriodicSet {
        &self.set
    }
}

impl Iterator for OwnedEnumeration {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        next_member(&self.set, &mut self.next_rank, &mut self.remaining)
    }
}

fn next_member(
    set: &EventuallyPeriodicSet,
    next_rank: &mut Rank,
    remaining: &mut Option<u64>,
) -> Option<Element> {
    if *remaining == Some(0) {
        return None;
    }
    loop {
        let x = universe_elem(*next_rank);
        *next_rank += 1;
        if set.member(x) {
            if let Some(n) = remaining.as_mut() {
                *n -= 1;
            }
            return Some(x);
        }
    }
}

impl BitOr for &EventuallyPeriodicSet {
    type Output = EventuallyPeriodicSet;
    fn bitor(self, rhs: Self) -> EventuallyPeriodicSet {
        self.union(rhs)
    }
}

impl BitAnd for &EventuallyPeriodicSet {
    type Output = EventuallyPeriodicSet;
    fn bitand(self, rhs: Self) -> EventuallyPeriodicSet {
        self.intersect(rhs)
    }
}

impl Sub for &EventuallyPeriodicSet {
    type Output = EventuallyPeriodicSet;
    fn sub(self, rhs: Self) -> EventuallyPeriodicSet {
        self.difference(rhs)
    }
}

impl Not for &EventuallyPeriodicSet {
    type Output = EventuallyPeriodicSet;
    fn not(self) -> EventuallyPeriodicSet {
        self.complement()
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
