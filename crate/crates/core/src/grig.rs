//! Grigorchuk groups `G_ω` acting on the binary rooted tree.
//!
//! Elements are reduced words over `a, b, c, d`. The generator `a` swaps the two
//! subtrees at the root; `b, c, d` fix the root and act on the subtrees by
//! `x = (col(ω₀, x), x')` where `x'` is the same letter over the shifted sequence
//! `σω` and `col` is given by the letter of `ω`:
//!
//! | ω letter | b | c | d |
//! |---|---|---|---|
//! | 0 | a | a | 1 |
//! | 1 | a | 1 | a |
//! | 2 | 1 | a | a |
//!
//! With `ω = (012)^∞` this is the first Grigorchuk group.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::B, Gen::C, Gen::D];
    pub const KLEIN: [Gen; 3] = [Gen::B, Gen::C, Gen::D];

    pub fn from_char(c: char) -> Result<Gen> {
        match c {
            'a' => Ok(Gen::A),
            'b' => Ok(Gen::B),
            'c' => Ok(Gen::C),
            'd' => Ok(Gen::D),
            _ => Err(Error::InvalidLetter(c)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
            Gen::C => 'c',
            Gen::D => 'd',
        }
    }

    #[inline]
    fn klein_bits(self) -> u8 {
        self as u8
    }

    #[inline]
    fn from_klein_bits(v: u8) -> Option<Gen> {
        match v {
            1 => Some(Gen::B),
            2 => Some(Gen::C),
            3 => Some(Gen::D),
            _ => None,
        }
    }

    /// The generator among `b, c, d` whose root section is trivial for this `ω` letter.
    #[inline]
    fn trivial_for(letter: u8) -> Gen {
        match letter {
            0 => Gen::D,
            1 => Gen::C,
            _ => Gen::B,
        }
    }
}

/// True when the left section of `x ∈ {b,c,d}` at a level with this letter is `a`.
#[inline]
pub(crate) fn col_is_a(letter: u8, x: Gen) -> bool {
    x != Gen::trivial_for(letter)
}

/// Appends `g` to a reduced word, keeping it reduced.
#[inline]
pub(crate) fn push_reduced(out: &mut Vec<Gen>, g: Gen) {
    match out.last().copied() {
        Some(Gen::A) if g == Gen::A => {
            out.pop();
        }
        Some(top) if top != Gen::A && g != Gen::A => {
            out.pop();
            if let Some(p) = Gen::from_klein_bits(top.klein_bits() ^ g.klein_bits()) {
                out.push(p);
            }
        }
        _ => out.push(g),
    }
}

/// Free reduction in `Z/2 * (Z/2)^2`: the result alternates between `a` and a letter of `b, c, d`.
pub fn reduce(letters: impl IntoIterator<Item = Gen>) -> Vec<Gen> {
    let mut out = Vec::new();
    for g in letters {
        push_reduced(&mut out, g);
    }
    out
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GenWord(pub Vec<Gen>);

impl GenWord {
    /// Parses letters `a-d`; `1` and the empty string denote the identity.
    pub fn parse(s: &str) -> Result<GenWord> {
        let s = s.trim();
        if s == "1" {
            return Ok(GenWord(Vec::new()));
        }
        s.chars().map(Gen::from_char).collect::<Result<Vec<_>>>().map(GenWord)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reduced(&self) -> GenWord {
        GenWord(reduce(self.0.iter().copied()))
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| (w[0] == Gen::A) != (w[1] == Gen::A))
    }

    /// All generators are involutions, so the inverse is the reversed word.
    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GenWord(v)
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GenWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<GenWord> {
        GenWord::parse(s)
    }
}

/// An eventually periodic sequence over `{0, 1, 2}`, stored in normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OmegaSequence {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl OmegaSequence {
    pub fn new(pre: Vec<u8>, per: Vec<u8>) -> Result<OmegaSequence> {
        if per.is_empty() {
            return Err(Error::InvalidOmega("empty period".into()));
        }
        if let Some(&bad) = pre.iter().chain(per.iter()).find(|&&x| x > 2) {
            return Err(Error::InvalidOmega(format!("letter {bad} outside 0..=2")));
        }
        let (pre, per) = periodic::normalize(pre, per);
        Ok(OmegaSequence { pre, per })
    }

    pub fn parse(pre: &str, per: &str) -> Result<OmegaSequence> {
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d <= 2)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::InvalidOmega(format!("bad letter {c:?}")))
                })
                .collect()
        };
        OmegaSequence::new(digits(pre)?, digits(per)?)
    }

    /// `(012)^∞`, defining the first Grigorchuk group.
    pub fn first_group() -> OmegaSequence {
        OmegaSequence { pre: vec![], per: vec![0, 1, 2] }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    #[inline]
    pub fn letter(&self, k: usize) -> u8 {
        let i = self.canonical_level(k);
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[i - self.pre.len()]
        }
    }

    /// Levels `k` and `canonical_level(k)` have identical tails.
    #[inline]
    pub fn canonical_level(&self, k: usize) -> usize {
        periodic::canonical_index(self.pre.len(), self.per.len(), k)
    }

    /// Number of distinct tails.
    pub fn level_count(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    pub fn shift_by(&self, k: usize) -> OmegaSequence {
        let (pre, per) = periodic::shift(&self.pre, &self.per, k);
        OmegaSequence { pre, per }
    }

    pub fn shift(&self) -> OmegaSequence {
        self.shift_by(1)
    }

    /// Letters occurring in the tail starting at level `k`.
    fn tail_letters(&self, k: usize) -> impl Iterator<Item = u8> + '_ {
        let k = self.canonical_level(k);
        let from_pre = if k < self.pre.len() { &self.pre[k..] } else { &[][..] };
        let per_start = k.saturating_sub(self.pre.len());
        from_pre.iter().chain(self.per[per_start..].iter()).chain(self.per[..per_start].iter()).copied()
    }
}

impl fmt::Display for OmegaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.pre {
            write!(f, "{x}")?;
        }
        f.write_str("(")?;
        for x in &self.per {
            write!(f, "{x}")?;
        }
        f.write_str(")^inf")
    }
}

/// Bijection `π` of `{b, c, d}` under which `x` over `from` and `π(x)` over `to` act identically
/// on the tree, if one exists. Indexed by `x as usize - 1`.
pub fn letter_correspondence(from: &OmegaSequence, to: &OmegaSequence) -> Option<[Gen; 3]> {
    let per = from.per.len() / crate::algebra::gcd(from.per.len(), to.per.len()) * to.per.len();
    let levels = from.pre.len().max(to.pre.len()) + per;
    let mut map: [Option<Gen>; 3] = [None; 3];
    for k in 0..levels {
        let x = Gen::trivial_for(from.letter(k)) as usize - 1;
        let y = Gen::trivial_for(to.letter(k));
        match map[x] {
            Some(z) if z != y => return None,
            Some(_) => {}
            None => {
                if map.contains(&Some(y)) {
                    return None;
                }
                map[x] = Some(y);
            }
        }
    }
    let mut unused = Gen::KLEIN.into_iter().filter(|g| !map.contains(&Some(*g)));
    let mut out = [Gen::B; 3];
    for (i, m) in map.iter().enumerate() {
        out[i] = m.or_else(|| unused.next()).expect("three letters");
    }
    Some(out)
}

/// Level-dependent helpers shared by the word problem, portraits and tree actions.
#[derive(Clone, Copy)]
pub(crate) struct Level<'a> {
    pub omega: &'a OmegaSequence,
    pub k: usize,
}

impl<'a> Level<'a> {
    pub fn root(omega: &'a OmegaSequence) -> Self {
        Level { omega, k: 0 }
    }

    #[inline]
    pub fn next(self) -> Self {
        Level { omega: self.omega, k: self.omega.canonical_level(self.k + 1) }
    }

    #[inline]
    pub fn letter(self) -> u8 {
        self.omega.letter(self.k)
    }

    /// Whether a single `x ∈ {b,c,d}` acts trivially on the subtree at this level.
    pub fn generator_trivial(self, x: Gen) -> bool {
        x != Gen::A && self.omega.tail_letters(self.k).all(|l| !col_is_a(l, x))
    }

    /// Smallest letter acting on the subtree like `x`.
    fn canonical_generator(self, x: Gen) -> Option<Gen> {
        if x == Gen::A {
            return Some(Gen::A);
        }
        if self.generator_trivial(x) {
            return None;
        }
        Gen::KLEIN.into_iter().find(|&y| {
            y == x || self.generator_trivial(Gen::from_klein_bits(x.klein_bits() ^ y.klein_bits()).unwrap())
        })
    }

    /// Root permutation and the two sections of a word, each reduced.
    pub fn split(self, word: &[Gen]) -> (bool, Vec<Gen>, Vec<Gen>) {
        let letter = self.letter();
        let mut swapped = false;
        let mut left = Vec::with_capacity(word.len() / 2 + 1);
        let mut right = Vec::with_capacity(word.len() / 2 + 1);
        for &g in word {
            if g == Gen::A {
                swapped = !swapped;
                continue;
            }
            let (at0, at1) = if swapped { (&mut right, &mut left) } else { (&mut left, &mut right) };
            if col_is_a(letter, g) {
                push_reduced(at0, Gen::A);
            }
            push_reduced(at1, g);
        }
        (swapped, left, right)
    }

    pub fn is_trivial(self, word: &[Gen]) -> bool {
        match word {
            [] => true,
            [g] => self.generator_trivial(*g),
            _ => {
                if word.iter().filter(|&&g| g == Gen::A).count() % 2 == 1 {
                    return false;
                }
                let (_, l, r) = self.split(word);
                let n = self.next();
                n.is_trivial(&l) && n.is_trivial(&r)
            }
        }
    }

    pub fn portrait(self, word: &[Gen]) -> Vec<u8> {
        match word {
            [] => vec![LEAF_ONE],
            [g] => vec![self.leaf(*g)],
            _ => {
                let (swap, l, r) = self.split(word);
                let n = self.next();
                let lk = n.portrait(&l);
                let rk = n.portrait(&r);
                self.collapse(swap, lk, rk)
            }
        }
    }

    fn leaf(self, g: Gen) -> u8 {
        match self.canonical_generator(g) {
            None => LEAF_ONE,
            Some(h) => h as u8 + 1,
        }
    }

    fn collapse(self, swap: bool, lk: Vec<u8>, rk: Vec<u8>) -> Vec<u8> {
        if lk.len() == 1 && rk.len() == 1 {
            let (x, y) = (lk[0], rk[0]);
            if x == LEAF_ONE && y == LEAF_ONE {
                return vec![if swap { LEAF_ONE + 1 } else { LEAF_ONE }];
            }
            if !swap {
                let n = self.next();
                for g in Gen::KLEIN {
                    let el = if col_is_a(self.letter(), g) { LEAF_ONE + 1 } else { LEAF_ONE };
                    if x == el && y == n.leaf(g) {
                        return vec![self.leaf(g)];
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(1 + lk.len() + rk.len());
        out.push(if swap { NODE_SWAP } else { NODE });
        out.extend(lk);
        out.extend(rk);
        out
    }
}

const LEAF_ONE: u8 = 0;
const NODE: u8 = 5;
const NODE_SWAP: u8 = 6;

/// Canonical portrait of an element: equal keys iff equal elements (over the same `ω`).
///
/// Preorder encoding: `0..=4` are the leaves `1, a, b, c, d`; `5` and `6` are
/// internal nodes without and with a root swap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PortraitKey(Arc<[u8]>);

impl PortraitKey {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for PortraitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0.iter() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupSpec {
    omega: Arc<OmegaSequence>,
}

impl GroupSpec {
    pub fn new(omega: OmegaSequence) -> GroupSpec {
        GroupSpec { omega: Arc::new(omega) }
    }

    pub fn first_group() -> GroupSpec {
        GroupSpec::new(OmegaSequence::first_group())
    }

    pub fn omega(&self) -> &OmegaSequence {
        &self.omega
    }

    /// The group `G_{σω}` containing the sections.
    pub fn shift(&self) -> GroupSpec {
        GroupSpec::new(self.omega.shift())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_reduced(self.clone(), Vec::new())
    }

    pub fn generator(&self, g: Gen) -> GroupElement {
        GroupElement::from_reduced(self.clone(), vec![g])
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        Gen::ALL.iter().map(|&g| self.generator(g)).collect()
    }

    pub fn element(&self, word: &GenWord) -> GroupElement {
        GroupElement::new(self.clone(), word)
    }

    pub fn parse(&self, s: &str) -> Result<GroupElement> {
        Ok(self.element(&GenWord::parse(s)?))
    }

    pub(crate) fn level(&self) -> Level<'_> {
        Level::root(&self.omega)
    }
}

/// Root swap and the two first-level sections `g = (g₀, g₁)π`.
#[derive(Clone, Debug)]
pub struct Section {
    pub swap: bool,
    pub left: GroupElement,
    pub right: GroupElement,
}

impl Section {
    pub fn get(&self, i: u8) -> &GroupElement {
        if i == 0 {
            &self.left
        } else {
            &self.right
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    spec: GroupSpec,
    word: GenWord,
    key: OnceLock<PortraitKey>,
}

impl GroupElement {
    pub fn new(spec: GroupSpec, word: &GenWord) -> GroupElement {
        GroupElement::from_reduced(spec, reduce(word.0.iter().copied()))
    }

    pub(crate) fn from_reduced(spec: GroupSpec, word: Vec<Gen>) -> GroupElement {
        debug_assert!(GenWord(word.clone()).is_reduced());
        GroupElement { spec, word: GenWord(word), key: OnceLock::new() }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// The reduced word representing this element (not necessarily geodesic).
    pub fn word(&self) -> &GenWord {
        &self.word
    }

    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.spec != other.spec {
            return Err(Error::OmegaMismatch);
        }
        let mut w = self.word.0.clone();
        for &g in &other.word.0 {
            push_reduced(&mut w, g);
        }
        Ok(GroupElement::from_reduced(self.spec.clone(), w))
    }

    pub fn mul_gen(&self, g: Gen) -> GroupElement {
        let mut w = self.word.0.clone();
        push_reduced(&mut w, g);
        GroupElement::from_reduced(self.spec.clone(), w)
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::from_reduced(self.spec.clone(), self.word.inverse().0)
    }

    pub fn pow(&self, k: usize) -> GroupElement {
        let mut w = Vec::with_capacity(self.word.len() * k);
        for _ in 0..k {
            for &g in &self.word.0 {
                push_reduced(&mut w, g);
            }
        }
        GroupElement::from_reduced(self.spec.clone(), w)
    }

    pub fn sections(&self) -> Section {
        let (swap, l, r) = self.spec.level().split(&self.word.0);
        let s = self.spec.shift();
        Section {
            swap,
            left: GroupElement::from_reduced(s.clone(), l),
            right: GroupElement::from_reduced(s, r),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self.key.get() {
            Some(k) => k.bytes() == [LEAF_ONE],
            None => self.spec.level().is_trivial(&self.word.0),
        }
    }

    pub fn key(&self) -> &PortraitKey {
        self.key.get_or_init(|| PortraitKey(self.spec.level().portrait(&self.word.0).into()))
    }

    /// Smallest `m ≤ cap` with `g^m = 1`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut p = self.spec.identity();
        for m in 1..=cap {
            p = p.multiply(self).expect("same spec");
            if p.is_trivial() {
                return Some(m);
            }
        }
        None
    }

    /// The element of `G_target` acting on the tree exactly as `self` does, via [`letter_correspondence`].
    pub fn relabel(&self, target: &GroupSpec) -> Option<GroupElement> {
        let pi = letter_correspondence(self.spec.omega(), target.omega())?;
        let w = self.word.0.iter().map(|&g| if g == Gen::A { g } else { pi[g as usize - 1] }).collect();
        Some(GroupElement::from_reduced(target.clone(), w))
    }

    /// Image of the vertex `bits` (a finite 0/1 word) under the right action.
    pub fn act_on_vertex(&self, bits: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(bits.len());
        let mut word = self.word.0.clone();
        let mut lvl = self.spec.level();
        for &bit in bits {
            if word.is_empty() {
                out.push(bit);
                continue;
            }
            let (swap, l, r) = lvl.split(&word);
            out.push(bit ^ swap as u8);
            word = if bit == 0 { l } else { r };
            lvl = lvl.next();
        }
        out
    }

    /// Word length in the generators `a, b, c, d`, if at most `radius_cap`.
    pub fn geodesic_length(&self, radius_cap: usize) -> Option<usize> {
        let target = self.key().clone();
        let mut found = None;
        explore_ball(&self.spec, radius_cap, |k, _, r| {
            if *k == target {
                found = Some(r);
                false
            } else {
                true
            }
        });
        found
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &GroupElement) -> bool {
        self.spec == other.spec && self.key() == other.key()
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// Breadth-first enumeration of the Cayley ball; `visit(key, element, radius)` returns
/// `false` to stop early.
pub fn explore_ball(
    spec: &GroupSpec,
    radius: usize,
    mut visit: impl FnMut(&PortraitKey, &GroupElement, usize) -> bool,
) {
    let mut seen: HashMap<PortraitKey, ()> = HashMap::new();
    let id = spec.identity();
    seen.insert(id.key().clone(), ());
    if !visit(id.key(), &id, 0) {
        return;
    }
    let mut frontier = vec![id];
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in Gen::ALL {
                let h = g.mul_gen(s);
                if seen.insert(h.key().clone(), ()).is_none() {
                    if !visit(h.key(), &h, r) {
                        return;
                    }
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
}

/// `|B(r)|` for `r = 0..=radius`.
pub fn ball_sizes(spec: &GroupSpec, radius: usize) -> Vec<usize> {
    let mut counts = vec![0usize; radius + 1];
    explore_ball(spec, radius, |_, _, r| {
        counts[r] += 1;
        true
    });
    for r in 1..=radius {
        counts[r] += counts[r - 1];
    }
    counts
}

/// Word metric on a ball, keyed by portrait.
#[derive(Clone, Debug)]
pub struct DistanceMap {
    spec: GroupSpec,
    radius: usize,
    dist: HashMap<PortraitKey, u32>,
}

impl DistanceMap {
    pub fn new(spec: &GroupSpec, radius: usize) -> DistanceMap {
        let mut dist = HashMap::new();
        explore_ball(spec, radius, |k, _, r| {
            dist.insert(k.clone(), r as u32);
            true
        });
        DistanceMap { spec: spec.clone(), radius, dist }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn distance(&self, g: &GroupElement) -> Option<usize> {
        debug_assert_eq!(g.spec(), &self.spec);
        self.dist.get(g.key()).map(|&d| d as usize)
    }
}
