//! Substitution words with injective inverted orbits, short stabilizer words, binary trees in
//! the wreath product, and counts of orbit sets.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::GroupTuple;
use crate::boundary::{LineOrbit, Point, ProductPoint, Ray, SchreierGraph};
use crate::error::{Error, Result};
use crate::grig::{ball_sizes, Gen, GenWord, GroupElement, GroupSpec};
use crate::wreath::{FiniteGroupA, WreathElement};

/// One block `ab`, `ac` or `ad`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Pair {
    B,
    C,
    D,
}

impl Pair {
    pub fn letter(self) -> Gen {
        match self {
            Pair::B => Gen::B,
            Pair::C => Gen::C,
            Pair::D => Gen::D,
        }
    }

    fn image(self) -> &'static [Pair] {
        match self {
            Pair::B => &[Pair::B, Pair::D, Pair::C],
            Pair::C => &[Pair::B, Pair::B],
            Pair::D => &[Pair::C, Pair::C],
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct PairWord(pub Vec<Pair>);

impl PairWord {
    pub fn parse(s: &str) -> Result<PairWord> {
        let chars: Vec<char> = s.chars().collect();
        if !chars.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("{s:?} is not a word in ab, ac, ad")));
        }
        chars
            .chunks(2)
            .map(|p| match (p[0], p[1]) {
                ('a', 'b') => Ok(Pair::B),
                ('a', 'c') => Ok(Pair::C),
                ('a', 'd') => Ok(Pair::D),
                _ => Err(Error::InvalidParameter(format!("{s:?} is not a word in ab, ac, ad"))),
            })
            .collect::<Result<_>>()
            .map(PairWord)
    }

    /// Number of letters `a, b, c, d`.
    pub fn len(&self) -> usize {
        2 * self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flatten(&self) -> Vec<Gen> {
        self.0.iter().flat_map(|p| [Gen::A, p.letter()]).collect()
    }

    /// Occurrences of `ab, ac, ad`.
    pub fn counts(&self) -> [u64; 3] {
        let mut c = [0; 3];
        for p in &self.0 {
            c[*p as usize] += 1;
        }
        c
    }
}

impl std::fmt::Display for PairWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for g in self.flatten() {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

/// `ab ↦ abadac`, `ac ↦ abab`, `ad ↦ acac`, blockwise.
pub fn zeta(w: &PairWord) -> PairWord {
    PairWord(w.0.iter().flat_map(|p| p.image().iter().copied()).collect())
}

/// Column `j` holds the block counts of the image of block `j`.
pub const SUBST_MATRIX: [[u64; 3]; 3] = [[1, 2, 0], [1, 0, 2], [1, 0, 0]];

#[derive(Clone, Debug, Serialize)]
pub struct SubstWord {
    pub n: usize,
    pub word: PairWord,
    pub counts: [u64; 3],
    /// Whether the counts of every iterate followed [`SUBST_MATRIX`].
    pub matrix_consistent: bool,
}

/// `ζⁿ(ad)`, refusing to build words with more than `budget` letters.
pub fn w_n(n: usize, budget: usize) -> Result<SubstWord> {
    let mut w = PairWord(vec![Pair::D]);
    let mut counts = w.counts();
    let mut ok = true;
    for k in 0..n {
        let predicted = matrix_step(counts);
        let letters: u64 = 2 * predicted.iter().sum::<u64>();
        if letters > budget as u64 {
            return Err(Error::BudgetExceeded(format!("zeta^{} (ad) has {letters} letters", k + 1)));
        }
        w = zeta(&w);
        counts = w.counts();
        ok &= counts == predicted;
    }
    Ok(SubstWord { n, word: w, counts, matrix_consistent: ok })
}

fn matrix_step(c: [u64; 3]) -> [u64; 3] {
    let mut out = [0; 3];
    for (i, row) in SUBST_MATRIX.iter().enumerate() {
        out[i] = row.iter().zip(&c).map(|(m, x)| m * x).sum();
    }
    out
}

/// Letter counts `|ζⁿ(ad)|` straight from the matrix, without building words.
pub fn w_n_lengths(n_max: usize) -> Vec<u64> {
    let mut c = [0, 0, 1];
    let mut out = vec![2];
    for _ in 0..n_max {
        c = matrix_step(c);
        out.push(2 * c.iter().sum::<u64>());
    }
    out
}

/// The real root of `η³ + η² + η = 2`, by bisection.
pub fn eta() -> f64 {
    let f = |x: f64| x * x * x + x * x + x - 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest eigenvalue of [`SUBST_MATRIX`] by power iteration.
pub fn dominant_eigenvalue(iterations: usize) -> f64 {
    let mut v = [1.0f64; 3];
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let mut next = [0.0; 3];
        for (i, row) in SUBST_MATRIX.iter().enumerate() {
            next[i] = row.iter().zip(&v).map(|(m, x)| *m as f64 * x).sum();
        }
        let norm = next.iter().sum::<f64>();
        lambda = norm / v.iter().sum::<f64>();
        v = next.map(|x| x / norm);
    }
    lambda
}

/// The two rays `(01)^∞` and `(10)^∞`.
pub fn alternating_base() -> ProductPoint {
    ProductPoint(vec![Ray::new(vec![], vec![0, 1]).unwrap(), Ray::new(vec![], vec![1, 0]).unwrap()])
}

/// Integer coordinates of an orbit in `X₁ × … × X_k`, one line per factor.
#[derive(Clone, Debug)]
pub struct ProductLines {
    lines: Vec<LineOrbit>,
}

impl ProductLines {
    pub fn build(specs: &[GroupSpec], base: &ProductPoint, radius: usize) -> Result<ProductLines> {
        if specs.len() != base.0.len() {
            return Err(Error::ArityMismatch(specs.len(), base.0.len()));
        }
        let lines = specs.iter().zip(&base.0).map(|(s, r)| LineOrbit::build(s, r, radius)).collect::<Result<_>>()?;
        Ok(ProductLines { lines })
    }

    pub fn lines(&self) -> &[LineOrbit] {
        &self.lines
    }

    /// Moves every coordinate by `g`; `false` if some factor leaves its window.
    #[inline]
    fn step(&self, z: &mut [i64], g: Gen) -> bool {
        for (line, c) in self.lines.iter().zip(z.iter_mut()) {
            match line.step(*c, g) {
                Some(next) => *c = next,
                None => return false,
            }
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitVerdict {
    pub length: usize,
    pub delta: usize,
    /// `δ(w) = |w| + 1`.
    pub injective: bool,
    /// A subword `g_{i+1}⋯g_j` fixing the basepoint, if one exists.
    pub fixing_subword: Option<(usize, usize)>,
}

/// Inverted orbit of `word` from `base` under the diagonal action, via line coordinates.
///
/// A point `ρ·g_{i+1}⋯g_n` is new exactly when the walk started at `ρ` at time `i` never
/// returns to `ρ`, so `δ` counts such `i`.
pub fn verify_distinct_inverted_orbit(specs: &[GroupSpec], base: &ProductPoint, word: &[Gen]) -> Result<OrbitVerdict> {
    let lines = ProductLines::build(specs, base, word.len() + 1)?;
    let k = specs.len();
    let mut delta = 0;
    let mut first = None;
    let mut z = vec![0i64; k];
    for i in 0..=word.len() {
        z.iter_mut().for_each(|c| *c = 0);
        let mut returned = false;
        for (j, &g) in word.iter().enumerate().skip(i) {
            if !lines.step(&mut z, g) {
                return Err(Error::Internal("walk left a window of its own length".into()));
            }
            if z.iter().all(|c| *c == 0) {
                returned = true;
                if first.is_none() {
                    first = Some((i, j + 1));
                }
                break;
            }
        }
        if !returned {
            delta += 1;
        }
    }
    Ok(OrbitVerdict { length: word.len(), delta, injective: delta == word.len() + 1, fixing_subword: first })
}

/// Checks `φ(w_n) = ⟨a w_{n−1} a, w_{n−1}⟩` with no swap at the root.
#[derive(Clone, Debug, Serialize)]
pub struct SectionCheck {
    pub n: usize,
    pub swap: bool,
    pub left_matches: bool,
    pub right_matches: bool,
}

impl SectionCheck {
    pub fn holds(&self) -> bool {
        !self.swap && self.left_matches && self.right_matches
    }
}

pub fn section_identity(spec: &GroupSpec, n: usize, budget: usize) -> Result<SectionCheck> {
    if n == 0 {
        return Err(Error::InvalidParameter("the identity relates w_n to w_(n-1), so n >= 1".into()));
    }
    let w = w_n(n, budget)?;
    let prev = w_n(n - 1, budget)?;
    let g = spec.element(&GenWord(w.word.flatten()));
    let h = spec.element(&GenWord(prev.word.flatten()));
    let a = spec.generator(Gen::A);
    let conj = a.multiply(&h)?.multiply(&a)?;
    let s = g.sections();
    let unshift = |x: &GroupElement| x.relabel(spec).ok_or_else(|| Error::Internal("no letter correspondence".into()));
    Ok(SectionCheck {
        n,
        swap: s.swap,
        left_matches: unshift(&s.left)? == conj,
        right_matches: unshift(&s.right)? == h,
    })
}

/// Most letters the exhaustive stabilizer search accepts.
pub const STABILIZER_MAX_LEN: usize = 14;

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerSearch {
    pub max_len: usize,
    /// Nontrivial reduced words of length `≤ max_len` fixing the basepoint.
    pub witnesses: Vec<String>,
    pub min_length: Option<usize>,
    /// Shortest witness not of the form `y a x a d a x a y`.
    pub min_length_outside_family: Option<usize>,
    /// Words that fix the basepoint but are trivial in every factor.
    pub trivial_fixers: usize,
}

/// Whether `w = y a x a d a x a y` with `x ∈ {b, c}` and `y ∈ {1, c, d}`.
pub fn in_short_family(w: &[Gen]) -> bool {
    let core = match w.len() {
        7 => w,
        9 if w[0] == w[8] && matches!(w[0], Gen::C | Gen::D) => &w[1..8],
        _ => return false,
    };
    let x = core[1];
    matches!(x, Gen::B | Gen::C)
        && core[5] == x
        && core[0] == Gen::A
        && core[2] == Gen::A
        && core[3] == Gen::D
        && core[4] == Gen::A
        && core[6] == Gen::A
}

/// Exhaustive search over reduced words; fixing is read off line coordinates and only
/// fixing words go through the word problem.
pub fn min_stabilizer_search(specs: &[GroupSpec], base: &ProductPoint, max_len: usize) -> Result<StabilizerSearch> {
    if max_len > STABILIZER_MAX_LEN {
        return Err(Error::BudgetExceeded(format!("stabilizer search is capped at {STABILIZER_MAX_LEN} letters")));
    }
    let lines = ProductLines::build(specs, base, max_len + 1)?;
    let mut fixing: Vec<Vec<Gen>> = Vec::new();
    let mut word = Vec::with_capacity(max_len);
    let mut z = vec![0i64; specs.len()];
    dfs_fixing(&lines, &mut word, &mut z, max_len, &mut fixing);
    fixing.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let mut witnesses = Vec::new();
    let mut trivial_fixers = 0;
    let mut min_length = None;
    let mut min_outside = None;
    for w in fixing {
        let gw = GenWord(w.clone());
        if specs.iter().all(|s| s.element(&gw).is_trivial()) {
            trivial_fixers += 1;
            continue;
        }
        min_length.get_or_insert(w.len());
        if !in_short_family(&w) {
            min_outside.get_or_insert(w.len());
        }
        witnesses.push(gw.to_string());
    }
    Ok(StabilizerSearch { max_len, witnesses, min_length, min_length_outside_family: min_outside, trivial_fixers })
}

fn dfs_fixing(lines: &ProductLines, word: &mut Vec<Gen>, z: &mut [i64], max_len: usize, out: &mut Vec<Vec<Gen>>) {
    if word.len() == max_len {
        return;
    }
    let next: &[Gen] = match word.last() {
        None => &Gen::ALL,
        Some(Gen::A) => &Gen::KLEIN,
        Some(_) => &[Gen::A],
    };
    for &g in next {
        let saved = z.to_vec();
        if lines.step(z, g) {
            word.push(g);
            if z.iter().all(|c| *c == 0) {
                out.push(word.clone());
            }
            dfs_fixing(lines, word, z, max_len, out);
            word.pop();
        }
        z.copy_from_slice(&saved);
    }
}

/// A word of `n` letters no nonempty subword of which fixes the alternating basepoint.
pub fn injective_word(n: usize) -> Result<Vec<Gen>> {
    let mut w = PairWord(vec![Pair::D]);
    while w.len() < n {
        w = zeta(&w);
    }
    Ok(w.flatten()[..n].to_vec())
}

/// Binary tree of height `n` in a Cayley graph of `A ≀ G` on `X₁ × X₂`.
///
/// `levels[k]` holds the `2^k` products `a_{i_m} g_m ⋯ a_{i_n} g_n` with `k = n − m + 1`
/// factors; entry `j` of level `k + 1` is `(a_{j mod 2} g_m) · levels[k][j / 2]`.
#[derive(Clone, Debug)]
pub struct TreeEmbedding {
    pub word: Vec<Gen>,
    pub levels: Vec<Vec<WreathElement<ProductPoint>>>,
    /// `parents[k][j]` indexes level `k − 1`; level 0 has none.
    pub parents: Vec<Vec<usize>>,
}

impl TreeEmbedding {
    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

pub fn tree_embedding(n: usize, group: &Arc<FiniteGroupA>, a0: u8, a1: u8) -> Result<TreeEmbedding> {
    if a0 == a1 {
        return Err(Error::InvalidParameter("the two lamp values must differ".into()));
    }
    if a0 as usize >= group.order() || a1 as usize >= group.order() {
        return Err(Error::InvalidParameter("lamp value outside the group".into()));
    }
    let spec = GroupSpec::first_group();
    let specs = [spec.clone(), spec.clone()];
    let base = alternating_base();
    let word = injective_word(n)?;
    let verdict = verify_distinct_inverted_orbit(&specs, &base, &word)?;
    if !verdict.injective {
        return Err(Error::Internal(format!("inverted orbit of {} is not injective", GenWord(word.clone()))));
    }
    let identity = GroupTuple::identity(&specs);
    let step = |value: u8, g: Gen| {
        let lamp = WreathElement::lamp(group, identity.clone(), base.clone(), value);
        lamp.multiply(&WreathElement::from_base(group, GroupTuple::diagonal(&spec.generator(g), 2)))
    };
    let mut levels = vec![vec![WreathElement::from_base(group, identity.clone())]];
    let mut parents = vec![Vec::new()];
    for m in (0..n).rev() {
        let prev = levels.last().unwrap();
        let mut level = Vec::with_capacity(2 * prev.len());
        let mut up = Vec::with_capacity(2 * prev.len());
        for (j, p) in prev.iter().enumerate() {
            for v in [a0, a1] {
                level.push(step(v, word[m]).multiply(p));
                up.push(j);
            }
        }
        levels.push(level);
        parents.push(up);
    }
    let tree = TreeEmbedding { word, levels, parents };
    let mut seen = HashSet::new();
    for (k, level) in tree.levels.iter().enumerate() {
        for (j, x) in level.iter().enumerate() {
            if !seen.insert(x.canonical_key()) {
                return Err(Error::Internal(format!("tree embedding collision at level {k}, node {j}")));
            }
        }
    }
    // each edge is labelled by one generator a_i g
    for k in 1..tree.levels.len() {
        let m = n - k;
        for (j, x) in tree.levels[k].iter().enumerate() {
            let parent = &tree.levels[k - 1][tree.parents[k][j]];
            let label = x.multiply(&parent.inverse());
            let expected = step(if j % 2 == 0 { a0 } else { a1 }, tree.word[m]);
            if label.canonical_key() != expected.canonical_key() {
                return Err(Error::Internal(format!("edge at level {k}, node {j} is not a generator")));
            }
        }
    }
    Ok(tree)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum OrbitMode {
    /// `{ρ, ρg_n, ρg_{n−1}g_n, …}`
    Inverted,
    /// `{ρ, ρg_1, ρg_1g_2, …}`
    Direct,
}

/// Largest number of words `orbit_set_counts` will enumerate.
pub const ORBIT_WORD_BUDGET: u64 = 1 << 26;

/// `counts[k]` is the number of distinct `k`-point orbit sets of length-`n` words over `gens`.
pub fn orbit_set_counts<P: Point>(base: &P, gens: &[(String, P::Actor)], n: usize, mode: OrbitMode) -> Result<Vec<u64>> {
    let words = (gens.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if n > 12 || words > ORBIT_WORD_BUDGET {
        return Err(Error::BudgetExceeded(format!("{} words of length {n}", gens.len())));
    }
    let graph = SchreierGraph::explore(base.clone(), gens, n, usize::MAX);
    let root = graph.index_of(base).expect("basepoint is vertex 0");
    let mut sets: HashSet<Vec<u32>> = HashSet::new();
    let mut state = vec![root as u32];
    match mode {
        OrbitMode::Inverted => inverted_dfs(&graph, root, &mut state, n, &mut sets),
        OrbitMode::Direct => direct_dfs(&graph, &mut state, n, &mut sets),
    }
    let mut counts = vec![0u64; n + 2];
    for s in &sets {
        counts[s.len()] += 1;
    }
    Ok(counts)
}

fn inverted_dfs<P: Point>(g: &SchreierGraph<P>, root: usize, pts: &mut [u32], left: usize, out: &mut HashSet<Vec<u32>>) {
    if left == 0 {
        out.insert(pts.to_vec());
        return;
    }
    for s in 0..g.labels().len() {
        let mut next: Vec<u32> = pts.iter().map(|&v| g.neighbor(v as usize, s).expect("within radius") as u32).collect();
        next.push(root as u32);
        next.sort_unstable();
        next.dedup();
        inverted_dfs(g, root, &mut next, left - 1, out);
    }
}

fn direct_dfs<P: Point>(g: &SchreierGraph<P>, pts: &mut Vec<u32>, left: usize, out: &mut HashSet<Vec<u32>>) {
    // the last pushed point is the current position
    let at = *pts.last().unwrap() as usize;
    if left == 0 {
        let mut s = pts.clone();
        s.sort_unstable();
        s.dedup();
        out.insert(s);
        return;
    }
    for s in 0..g.labels().len() {
        let next = g.neighbor(at, s).expect("within radius") as u32;
        pts.push(next);
        direct_dfs(g, pts, left - 1, out);
        pts.pop();
    }
}

/// Number of tuples `(g_1, …, g_k)` with `k ≤ k_max` and `‖g_1‖ + … + ‖g_k‖ ≤ n`,
/// from the sphere sizes of the Cayley ball.
pub fn v_plus(spec: &GroupSpec, n: usize, k_max: usize) -> u128 {
    let balls = ball_sizes(spec, n);
    let spheres: Vec<u128> = (0..=n).map(|r| (balls[r] - if r > 0 { balls[r - 1] } else { 0 }) as u128).collect();
    v_plus_from_spheres(&spheres, n, k_max)
}

/// `spheres[r]` is the number of elements of norm exactly `r`.
pub fn v_plus_from_spheres(spheres: &[u128], n: usize, k_max: usize) -> u128 {
    // tuples[m] counts k-tuples of total norm exactly m
    let mut tuples = vec![0u128; n + 1];
    tuples[0] = 1;
    let mut total = 1;
    for _ in 0..k_max {
        let mut next = vec![0u128; n + 1];
        for (m, &t) in tuples.iter().enumerate() {
            if t == 0 {
                continue;
            }
            for (r, &s) in spheres.iter().enumerate().take(n + 1 - m) {
                next[m + r] += t * s;
            }
        }
        tuples = next;
        total += tuples.iter().sum::<u128>();
    }
    total
}
