//! Labeled examples and the accumulated sample `S_t`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::set_algebra::{universe_index, Element, Rank};

/// Which language an example was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    Harm = 0,
    True = 1,
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l as u8
    }
}

impl TryFrom<u8> for Label {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(Label::Harm),
            1 => Ok(Label::True),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledExample {
    pub element: Element,
    pub label: Label,
}

impl LabeledExample {
    pub fn positive(element: Element) -> Self {
        LabeledExample {
            element,
            label: Label::True,
        }
    }

    pub fn negative(element: Element) -> Self {
        LabeledExample {
            element,
            label: Label::Harm,
        }
    }
}

impl fmt::Display for LabeledExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.element, self.label as u8)
    }
}

/// Everything revealed so far. Only grows.
#[derive(Clone, Debug, Default)]
pub struct RevealedSet {
    pos: BTreeSet<Element>,
    neg: BTreeSet<Element>,
    all: BTreeSet<Element>,
    history: Vec<LabeledExample>,
    max_rank: Rank,
}

impl RevealedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_examples(examples: impl IntoIterator<Item = LabeledExample>) -> Self {
        let mut s = Self::new();
        for e in examples {
            s.push(e);
        }
        s
    }

    pub fn push(&mut self, e: LabeledExample) {
        match e.label {
            Label::True => self.pos.insert(e.element),
            Label::Harm => self.neg.insert(e.element),
        };
        self.all.insert(e.element);
        self.max_rank = self.max_rank.max(universe_index(e.element));
        self.history.push(e);
    }

    pub fn pos(&self) -> &BTreeSet<Element> {
        &self.pos
    }

    pub fn neg(&self) -> &BTreeSet<Element> {
        &self.neg
    }

    pub fn all(&self) -> &BTreeSet<Element> {
        &self.all
    }

    pub fn contains(&self, x: Element) -> bool {
        self.all.contains(&x)
    }

    /// Number of examples received, i.e. the current step `t`.
    pub fn step(&self) -> usize {
        self.history.len()
    }

    /// Examples in arrival order, duplicates included.
    pub fn history(&self) -> &[LabeledExample] {
        &self.history
    }

    /// Largest universe rank among revealed elements, 0 if nothing was seen.
    pub fn max_rank(&self) -> Rank {
        self.max_rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_tracks_both_sides() {
        let s = RevealedSet::from_examples([
            LabeledExample::positive(1),
            LabeledExample::negative(2),
            LabeledExample::negative(1),
        ]);
        assert_eq!(s.step(), 3);
        assert_eq!(s.pos().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(s.neg().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(s.all().len(), 2);
        // rank of 2 is 4
        assert_eq!(s.max_rank(), 4);
    }

    #[test]
    fn label_serializes_as_integer() {
        let e = LabeledExample::positive(-3);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"element":-3,"label":1}"#);
        assert!(serde_json::from_str::<LabeledExample>(r#"{"element":0,"label":2}"#).is_err());
    }
}
