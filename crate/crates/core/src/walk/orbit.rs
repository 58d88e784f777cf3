//! Inverted orbits `{ρ, ρg_n, ρg_{n−1}g_n, …, ρg_1⋯g_n}` of words.

use std::collections::BTreeSet;

use crate::boundary::Point;

/// The inverted orbit of the word read so far, updated by `O(w·g) = O(w)·g ∪ {ρ}`.
#[derive(Clone, Debug)]
pub struct InvertedOrbitState<P: Point> {
    base: P,
    points: BTreeSet<P>,
    steps: usize,
}

impl<P: Point> InvertedOrbitState<P> {
    pub fn new(base: P) -> Self {
        InvertedOrbitState { points: BTreeSet::from([base.clone()]), base, steps: 0 }
    }

    pub fn push(&mut self, g: &P::Actor) {
        let mut next: BTreeSet<P> = self.points.iter().map(|x| x.act(g)).collect();
        next.insert(self.base.clone());
        self.points = next;
        self.steps += 1;
    }

    pub fn points(&self) -> &BTreeSet<P> {
        &self.points
    }

    /// `δ(w)`, the number of distinct points.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// The inverted orbit straight from its definition: all `ρ·g_{i+1}⋯g_n` for `i = 0..=n`.
pub fn literal_inverted_orbit<P: Point>(base: &P, word: &[P::Actor]) -> BTreeSet<P> {
    (0..=word.len())
        .map(|i| word[i..].iter().fold(base.clone(), |x, g| x.act(g)))
        .collect()
}

/// `δ(w)` counted as the number of times `i` at which the walk restarted at `ρ` does not
/// come back to `ρ` before the end of the word.
pub fn delta_by_first_returns<P: Point>(base: &P, word: &[P::Actor]) -> usize {
    (0..=word.len())
        .filter(|&i| {
            let mut x = base.clone();
            for g in &word[i..] {
                x = x.act(g);
                if x == *base {
                    return false;
                }
            }
            true
        })
        .count()
}
