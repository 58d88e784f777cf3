//! Group elements usable as atoms of finitely supported measures.

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::grig::{GroupElement, GroupSpec, PortraitKey};

pub trait Element: Clone + Debug + Send + Sync {
    type Key: Ord + Hash + Clone + Debug + Send + Sync;

    /// Equal keys iff equal elements.
    fn key(&self) -> Self::Key;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
    /// Human-readable representative, used in reports.
    fn label(&self) -> String;
    /// Length of the stored representative; shorter representatives are preferred.
    fn size(&self) -> usize {
        0
    }
    /// Least `m ≤ cap` with `g^m = 1`.
    fn order(&self, cap: usize) -> Option<usize> {
        let mut p = self.clone();
        for m in 1..=cap {
            if p.is_identity() {
                return Some(m);
            }
            p = p.compose(self);
        }
        None
    }
}

impl Element for GroupElement {
    type Key = PortraitKey;

    fn key(&self) -> PortraitKey {
        GroupElement::key(self).clone()
    }

    fn compose(&self, other: &Self) -> Self {
        self.multiply(other).expect("elements over the same omega")
    }

    fn inverse(&self) -> Self {
        GroupElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        self.is_trivial()
    }

    fn label(&self) -> String {
        self.word().to_string()
    }

    fn size(&self) -> usize {
        self.word_length()
    }
}

impl Element for i64 {
    type Key = i64;

    fn key(&self) -> i64 {
        *self
    }

    fn compose(&self, other: &Self) -> Self {
        self + other
    }

    fn inverse(&self) -> Self {
        -self
    }

    fn is_identity(&self) -> bool {
        *self == 0
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn size(&self) -> usize {
        self.unsigned_abs() as usize
    }

    fn order(&self, _cap: usize) -> Option<usize> {
        (*self == 0).then_some(1)
    }
}

/// An element of a direct product `G_{ω₁} × … × G_{ω_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupTuple(pub Vec<GroupElement>);

impl GroupTuple {
    pub fn new(parts: Vec<GroupElement>) -> GroupTuple {
        GroupTuple(parts)
    }

    pub fn identity(specs: &[GroupSpec]) -> GroupTuple {
        GroupTuple(specs.iter().map(GroupSpec::identity).collect())
    }

    pub fn diagonal(g: &GroupElement, arity: usize) -> GroupTuple {
        GroupTuple(vec![g.clone(); arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn try_compose(&self, other: &GroupTuple) -> Result<GroupTuple> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        self.0.iter().zip(&other.0).map(|(g, h)| g.multiply(h)).collect::<Result<Vec<_>>>().map(GroupTuple)
    }
}

impl Element for GroupTuple {
    type Key = Vec<PortraitKey>;

    fn key(&self) -> Vec<PortraitKey> {
        self.0.iter().map(|g| g.key().clone()).collect()
    }

    fn compose(&self, other: &Self) -> Self {
        self.try_compose(other).expect("tuples of matching arity and omega")
    }

    fn inverse(&self) -> Self {
        GroupTuple(self.0.iter().map(GroupElement::inverse).collect())
    }

    fn is_identity(&self) -> bool {
        self.0.iter().all(GroupElement::is_trivial)
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|g| g.word().to_string()).collect();
        format!("({})", parts.join(","))
    }

    fn size(&self) -> usize {
        self.0.iter().map(GroupElement::word_length).sum()
    }

    fn order(&self, cap: usize) -> Option<usize> {
        let mut l = 1usize;
        for g in &self.0 {
            let m = g.order(cap)?;
            l = l / gcd(l, m) * m;
            if l > cap {
                return None;
            }
        }
        Some(l)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
