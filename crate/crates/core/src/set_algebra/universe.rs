//! The fixed enumeration of the universe.
//!
//! The universe is the integers, listed in zigzag order
//! `0, 1, -1, 2, -2, 3, -3, ...`. Rank 1 is `0`.

use super::Element;

/// Position of an element in the universe enumeration (1-based).
pub type Rank = u64;

/// Returns the `rank`-th element of the universe.
///
/// # Panics
///
/// Panics if `rank == 0`.
pub fn universe_elem(rank: Rank) -> Element {
    assert!(rank >= 1, "universe ranks start at 1");
    let half = (rank / 2) as Element;
    if rank.is_multiple_of(2) {
        half
    } else {
        -half
    }
}

/// Inverse of [`universe_elem`].
pub fn universe_index(x: Element) -> Rank {
    if x > 0 {
        2 * x as Rank
    } else {
        2 * x.unsigned_abs() + 1
    }
}

/// Iterator over `(rank, element)` pairs in universe order, starting at rank 1.
pub fn universe() -> impl Iterator<Item = (Rank, Element)> {
    (1..).map(|r| (r, universe_elem(r)))
}
