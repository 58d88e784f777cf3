//! Eventually periodic points of the boundary of the binary tree and their orbits.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Debug, Write as _};
use std::hash::Hash;

use crate::algebra::{Element, GroupTuple};
use crate::error::{Error, Result};
use crate::grig::{Gen, GenWord, GroupElement, GroupSpec, Level};
use crate::periodic;

/// An infinite 0/1 sequence `pre · per^∞` in normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl Ray {
    pub fn new(pre: Vec<u8>, per: Vec<u8>) -> Result<Ray> {
        if per.is_empty() {
            return Err(Error::InvalidRay("empty period".into()));
        }
        if pre.iter().chain(&per).any(|&b| b > 1) {
            return Err(Error::InvalidRay("bits must be 0 or 1".into()));
        }
        let (pre, per) = periodic::normalize(pre, per);
        Ok(Ray { pre, per })
    }

    /// Parses `"pre|per"`, e.g. `"|01"` for `(01)^∞` or `"0|1"` for `01^∞`.
    pub fn parse(s: &str) -> Result<Ray> {
        let (p, q) = s.split_once('|').ok_or_else(|| Error::InvalidRay(format!("missing '|' in {s:?}")))?;
        let bits = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::InvalidRay(format!("bad bit {c:?}"))),
                })
                .collect()
        };
        Ray::new(bits(p)?, bits(q)?)
    }

    pub fn encode(&self) -> String {
        let mut s = String::with_capacity(self.pre.len() + self.per.len() + 1);
        for b in &self.pre {
            s.push(if *b == 0 { '0' } else { '1' });
        }
        s.push('|');
        for b in &self.per {
            s.push(if *b == 0 { '0' } else { '1' });
        }
        s
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    #[inline]
    pub fn bit(&self, k: usize) -> u8 {
        let i = self.canonical_position(k);
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[i - self.pre.len()]
        }
    }

    #[inline]
    fn canonical_position(&self, k: usize) -> usize {
        periodic::canonical_index(self.pre.len(), self.per.len(), k)
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|k| self.bit(k)).collect()
    }

    fn with_prefix(&self, prefix: Vec<u8>, from: usize) -> Ray {
        let (pre, per) = periodic::shift(&self.pre, &self.per, from);
        let mut p = prefix;
        p.extend(pre);
        let (pre, per) = periodic::normalize(p, per);
        Ray { pre, per }
    }

    /// Right action `ρ ↦ ρg`; errors only if the section walk fails to close up.
    pub fn try_apply(&self, g: &GroupElement) -> Result<Ray> {
        let omega = g.spec().omega();
        let mut word = g.word().letters().to_vec();
        let mut lvl = Level::root(omega);
        let mut k = 0usize;
        let mut out: Vec<u8> = Vec::new();
        let mut seen: HashMap<(Vec<Gen>, usize, usize), usize> = HashMap::new();
        let cap = (word.len() + 1) * self.per.len() * omega.level_count() * 5 + self.pre.len() + omega.level_count() + 64;
        loop {
            if word.is_empty() {
                return Ok(self.with_prefix(out, k));
            }
            let state = (word.clone(), lvl.k, self.canonical_position(k));
            if let Some(&j) = seen.get(&state) {
                let per = out.split_off(j);
                return Ray::new(out, per);
            }
            if out.len() > cap {
                return Err(Error::Internal(format!("ray action did not close after {cap} levels")));
            }
            seen.insert(state, out.len());
            let (swap, l, r) = lvl.split(&word);
            let bit = self.bit(k);
            out.push(bit ^ swap as u8);
            word = if bit == 0 { l } else { r };
            lvl = lvl.next();
            k += 1;
        }
    }

    pub fn apply(&self, g: &GroupElement) -> Ray {
        self.try_apply(g).expect("ray action closes")
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray({})", self.encode())
    }
}

/// A point of `X₁ × … × X_k`, acted on coordinatewise by tuples.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProductPoint(pub Vec<Ray>);

impl ProductPoint {
    pub fn parse(s: &str) -> Result<ProductPoint> {
        s.split(',').map(|t| Ray::parse(t.trim())).collect::<Result<Vec<_>>>().map(ProductPoint)
    }
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Ray::encode).collect();
        f.write_str(&parts.join(","))
    }
}

/// A space with a right action of some group of [`Element`]s.
pub trait Point: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    type Actor: Element;
    fn act(&self, g: &Self::Actor) -> Self;
    fn encode(&self) -> String;
}

impl Point for Ray {
    type Actor = GroupElement;

    fn act(&self, g: &GroupElement) -> Ray {
        self.apply(g)
    }

    fn encode(&self) -> String {
        Ray::encode(self)
    }
}

impl Point for ProductPoint {
    type Actor = GroupTuple;

    fn act(&self, g: &GroupTuple) -> ProductPoint {
        assert_eq!(self.0.len(), g.arity(), "point and tuple arity differ");
        ProductPoint(self.0.iter().zip(&g.0).map(|(r, h)| r.apply(h)).collect())
    }

    fn encode(&self) -> String {
        self.to_string()
    }
}

/// Breadth-first portion of an orbit with labelled generator edges.
#[derive(Clone, Debug)]
pub struct SchreierGraph<P: Point> {
    vertices: Vec<P>,
    index: HashMap<P, usize>,
    dist: Vec<usize>,
    labels: Vec<String>,
    /// `edges[v][s]` is the image of vertex `v` under generator `s`, if explored.
    edges: Vec<Vec<Option<usize>>>,
    truncated: bool,
}

impl<P: Point> SchreierGraph<P> {
    /// Explores the orbit of `base` up to `radius` edges, stopping at `budget` vertices.
    pub fn explore(base: P, gens: &[(String, P::Actor)], radius: usize, budget: usize) -> SchreierGraph<P> {
        let mut g = SchreierGraph {
            vertices: vec![base.clone()],
            index: HashMap::from([(base, 0)]),
            dist: vec![0],
            labels: gens.iter().map(|(l, _)| l.clone()).collect(),
            edges: Vec::new(),
            truncated: false,
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (_, s) in gens {
                let w = g.vertices[v].act(s);
                let target = match g.index.get(&w) {
                    Some(&i) => Some(i),
                    None if g.dist[v] < radius && g.vertices.len() < budget => {
                        let i = g.vertices.len();
                        g.index.insert(w.clone(), i);
                        g.vertices.push(w);
                        g.dist.push(g.dist[v] + 1);
                        queue.push_back(i);
                        Some(i)
                    }
                    None => {
                        if g.dist[v] < radius {
                            g.truncated = true;
                        }
                        None
                    }
                };
                row.push(target);
            }
            g.edges.push(row);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True if the vertex budget stopped exploration before the radius was reached.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn vertex(&self, i: usize) -> &P {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[P] {
        &self.vertices
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn distance(&self, i: usize) -> usize {
        self.dist[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbor(&self, v: usize, s: usize) -> Option<usize> {
        self.edges[v][s]
    }

    /// Vertex ids ordered by their encoding, for reproducible output.
    fn sorted_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.len()).collect();
        ids.sort_by_cached_key(|&i| self.vertices[i].encode());
        ids
    }

    /// Directed edge list `src,gen,dst` with one row per explored edge.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("src,gen,dst\n");
        for v in self.sorted_ids() {
            for (s, t) in self.edges[v].iter().enumerate() {
                if let Some(t) = t {
                    let _ = writeln!(out, "{},{},{}", self.vertices[v].encode(), self.labels[s], self.vertices[*t].encode());
                }
            }
        }
        out
    }

    /// Undirected DOT graph; valid when every generator is an involution.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph schreier {\n");
        let ids = self.sorted_ids();
        for &v in &ids {
            let _ = writeln!(out, "  \"{}\";", self.vertices[v].encode());
        }
        for &v in &ids {
            let ev = self.vertices[v].encode();
            for (s, t) in self.edges[v].iter().enumerate() {
                let Some(t) = *t else { continue };
                let et = self.vertices[t].encode();
                if ev <= et {
                    let color = edge_color(&self.labels[s]);
                    let _ = writeln!(out, "  \"{ev}\" -- \"{et}\" [label=\"{}\", color=\"{color}\"];", self.labels[s]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn edge_color(label: &str) -> &'static str {
    match label {
        "b" => "red",
        "c" => "green",
        "d" => "blue",
        _ => "black",
    }
}

/// Generators `a, b, c, d` labelled by their letters.
pub fn standard_generators(spec: &GroupSpec) -> Vec<(String, GroupElement)> {
    Gen::ALL.iter().map(|&g| (g.to_char().to_string(), spec.generator(g))).collect()
}

/// Diagonal generators `(s, …, s)` on a product of copies of the same group.
pub fn diagonal_generators(specs: &[GroupSpec]) -> Vec<(String, GroupTuple)> {
    Gen::ALL
        .iter()
        .map(|&g| (g.to_char().to_string(), GroupTuple(specs.iter().map(|s| s.generator(g)).collect())))
        .collect()
}

/// A window of a linear Schreier graph with integer coordinates.
///
/// The basepoint sits at 0 and its `a`-neighbour at 1, so from an even coordinate the
/// `a`-edge goes up and the `b, c, d`-edges go down; from odd coordinates the reverse.
#[derive(Clone, Debug)]
pub struct LineOrbit {
    spec: GroupSpec,
    lo: i64,
    hi: i64,
    rays: Vec<Ray>,
    /// Coordinate of the image under `a, b, c, d`, or `None` outside the window.
    moves: Vec<[Option<i64>; 4]>,
    /// Whether the orbit ends (the line stops) at `lo` / `hi`.
    ends: (bool, bool),
}

impl LineOrbit {
    pub fn build(spec: &GroupSpec, basepoint: &Ray, radius: usize) -> Result<LineOrbit> {
        let r = radius as i64;
        let gens = spec.generators();
        // walk in both directions from the basepoint
        let mut up = vec![basepoint.clone()];
        let mut down = vec![basepoint.clone()];
        let mut end_hi = false;
        let mut end_lo = false;
        for dir in [1i64, -1] {
            let chain = if dir == 1 { &mut up } else { &mut down };
            let mut z = 0i64;
            while z.abs() < r {
                let cur = chain.last().unwrap().clone();
                let use_a = (z.rem_euclid(2) == 0) == (dir == 1);
                let next = if use_a {
                    cur.apply(&gens[0])
                } else {
                    let moved: Vec<Ray> = gens[1..].iter().map(|g| cur.apply(g)).filter(|x| *x != cur).collect();
                    if moved.is_empty() {
                        if dir == 1 {
                            end_hi = true;
                        } else {
                            end_lo = true;
                        }
                        break;
                    }
                    if moved.iter().any(|x| *x != moved[0]) {
                        return Err(Error::Internal("orbit is not linear".into()));
                    }
                    moved[0].clone()
                };
                z += dir;
                chain.push(next);
            }
        }
        let lo = -(down.len() as i64 - 1);
        let hi = up.len() as i64 - 1;
        let mut rays: Vec<Ray> = down.into_iter().skip(1).rev().collect();
        rays.extend(up);
        let mut index: HashMap<&Ray, i64> = HashMap::new();
        for (i, x) in rays.iter().enumerate() {
            if index.insert(x, lo + i as i64).is_some() {
                return Err(Error::Internal("orbit closes up into a cycle".into()));
            }
        }
        let mut moves = Vec::with_capacity(rays.len());
        for (i, x) in rays.iter().enumerate() {
            let z = lo + i as i64;
            let mut m = [None; 4];
            for (s, g) in gens.iter().enumerate() {
                let y = x.apply(g);
                m[s] = index.get(&y).copied();
                if let Some(w) = m[s] {
                    if (w - z).abs() > 1 {
                        return Err(Error::Internal("orbit is not linear".into()));
                    }
                }
            }
            moves.push(m);
        }
        Ok(LineOrbit { spec: spec.clone(), lo, hi, rays, moves, ends: (end_lo, end_hi) })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn ends(&self) -> (bool, bool) {
        self.ends
    }

    pub fn contains(&self, z: i64) -> bool {
        self.lo <= z && z <= self.hi
    }

    pub fn ray(&self, z: i64) -> &Ray {
        &self.rays[(z - self.lo) as usize]
    }

    pub fn coordinate(&self, x: &Ray) -> Option<i64> {
        self.rays.iter().position(|y| y == x).map(|i| self.lo + i as i64)
    }

    /// Image of coordinate `z` under a generator; `None` if it leaves the window.
    #[inline]
    pub fn step(&self, z: i64, g: Gen) -> Option<i64> {
        if !self.contains(z) {
            return None;
        }
        self.moves[(z - self.lo) as usize][g as usize]
    }

    /// Image of coordinate `z` under a word, applied letter by letter.
    pub fn step_word(&self, mut z: i64, word: &[Gen]) -> Option<i64> {
        for &g in word {
            z = self.step(z, g)?;
        }
        Some(z)
    }
}

/// All reduced words of length exactly `len`; these alternate between `a` and `b, c, d`.
pub fn alternating_words(len: usize) -> Vec<Vec<Gen>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for start_a in [true, false] {
        let mut words: Vec<Vec<Gen>> = vec![Vec::new()];
        for i in 0..len {
            let is_a = (i % 2 == 0) == start_a;
            words = if is_a {
                words.into_iter().map(|mut w| { w.push(Gen::A); w }).collect()
            } else {
                words
                    .into_iter()
                    .flat_map(|w| Gen::KLEIN.iter().map(move |&x| { let mut v = w.clone(); v.push(x); v }))
                    .collect()
            };
        }
        out.extend(words);
    }
    out
}

/// Nontrivial reduced words of length `≤ max_len` whose diagonal action fixes `base`,
/// in order of increasing length.
pub fn stabilizer_words(specs: &[GroupSpec], base: &ProductPoint, max_len: usize) -> Vec<GenWord> {
    (1..=max_len).flat_map(|len| fixing_words(specs, base, len)).collect()
}

/// Length of the shortest nontrivial reduced word fixing `base`, if some has length `≤ max_len`.
pub fn min_stabilizer_word_length(specs: &[GroupSpec], base: &ProductPoint, max_len: usize) -> Option<usize> {
    (1..=max_len).find(|&len| !fixing_words(specs, base, len).is_empty())
}

fn fixing_words(specs: &[GroupSpec], base: &ProductPoint, len: usize) -> Vec<GenWord> {
    alternating_words(len)
        .into_iter()
        .map(GenWord)
        .filter(|word| {
            base.0.iter().zip(specs).all(|(r, s)| r.apply(&s.element(word)) == *r)
                && specs.iter().any(|s| !s.element(word).is_trivial())
        })
        .collect()
}
