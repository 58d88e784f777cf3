//! Centred Markov chains from torsion measures: cycle decompositions, symmetrisation, escape
//! probabilities on finite windows.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::Element;
use crate::boundary::{LineOrbit, Point, ProductPoint, SchreierGraph};
use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;

/// A finite set of points with a fixed order; everything else counts as outside.
#[derive(Clone, Debug)]
pub struct Window<P: Point> {
    points: Vec<P>,
    index: HashMap<P, usize>,
    base: usize,
}

impl<P: Point> Window<P> {
    pub fn new(points: Vec<P>, base: &P) -> Result<Window<P>> {
        let index: HashMap<P, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        if index.len() != points.len() {
            return Err(Error::InvalidParameter("window points repeat".into()));
        }
        let base = *index.get(base).ok_or_else(|| Error::InvalidParameter("basepoint outside the window".into()))?;
        Ok(Window { points, index, base })
    }

    /// The explored vertices of a Schreier graph, basepoint first.
    pub fn from_graph(graph: &SchreierGraph<P>) -> Result<Window<P>> {
        Window::new(graph.vertices().to_vec(), graph.vertex(0))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn point(&self, i: usize) -> &P {
        &self.points[i]
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.index.get(p).copied()
    }
}

impl Window<ProductPoint> {
    /// All points with every line coordinate in `[−radius, radius]`, ordered lexicographically
    /// by coordinates so that the kernel is banded.
    pub fn product_box(lines: &[LineOrbit], radius: usize) -> Result<Window<ProductPoint>> {
        let r = radius as i64;
        for l in lines {
            let (lo, hi) = l.bounds();
            if lo > -r || hi < r {
                return Err(Error::InvalidParameter(format!("line window [{lo},{hi}] smaller than radius {r}")));
            }
        }
        let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in lines {
            coords = coords.into_iter().flat_map(|c| (-r..=r).map(move |z| { let mut v = c.clone(); v.push(z); v })).collect();
        }
        let points = coords.iter().map(|c| ProductPoint(c.iter().zip(lines).map(|(&z, l)| l.ray(z).clone()).collect())).collect();
        let base = ProductPoint(lines.iter().map(|l| l.ray(0).clone()).collect());
        Window::new(points, &base)
    }
}

/// The orbit `(x, xg, …, xg^{m−1})` of one atom, with `None` for points outside the window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<Option<usize>>,
    pub weight: f64,
    /// Index of the atom generating the cycle; edges are `(vertices[k], tag, vertices[k+1])`.
    pub tag: usize,
}

impl Cycle {
    /// Directed edges `(from, to)`, cyclically.
    pub fn edges(&self) -> impl Iterator<Item = (Option<usize>, Option<usize>)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |k| (self.vertices[k], self.vertices[(k + 1) % m]))
    }
}

#[derive(Clone, Debug)]
pub struct CenteredChain {
    pub n: usize,
    pub base: usize,
    pub cycles: Vec<Cycle>,
}

/// Row-substochastic kernel on a window; `out[x]` is the mass leaving it.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub rows: Vec<BTreeMap<usize, f64>>,
    pub out: Vec<f64>,
    pub base: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Violation {
    /// The edge leaving `vertex` with label `tag` lies on more than one cycle.
    DuplicateEdge { vertex: usize, tag: usize },
    /// Cycle weights through `vertex` do not sum to one.
    VertexSum { vertex: usize, sum: f64 },
}

/// Decomposes the walk of a torsion measure into the `⟨g⟩`-orbits of its atoms.
pub fn cycles_from_torsion_measure<P: Point>(
    mu: &FiniteMeasure<P::Actor>,
    window: &Window<P>,
    order_cap: usize,
) -> Result<CenteredChain> {
    let atoms = mu.atoms();
    for (g, _) in &atoms {
        if g.order(order_cap).is_none() {
            return Err(Error::InvalidMeasure(format!("atom {} has no order up to {order_cap}", g.label())));
        }
    }
    let mut cycles = Vec::new();
    for (tag, (g, w)) in atoms.iter().enumerate() {
        let mut covered = vec![false; window.len()];
        for start in 0..window.len() {
            if covered[start] {
                continue;
            }
            let x0 = window.point(start);
            let mut vertices = vec![Some(start)];
            covered[start] = true;
            let mut x = x0.act(g);
            while x != *x0 {
                if vertices.len() >= order_cap {
                    return Err(Error::BudgetExceeded(format!("orbit of {} longer than {order_cap}", g.label())));
                }
                let i = window.index_of(&x);
                if let Some(i) = i {
                    covered[i] = true;
                }
                vertices.push(i);
                x = x.act(g);
            }
            cycles.push(Cycle { vertices, weight: *w, tag });
        }
    }
    Ok(CenteredChain { n: window.len(), base: window.base(), cycles })
}

/// `q(x, y) = Σ_g μ(g) [x·g = y]` straight from the measure.
pub fn kernel_from_measure<P: Point>(mu: &FiniteMeasure<P::Actor>, window: &Window<P>) -> Kernel {
    let atoms = mu.atoms();
    let mut rows = vec![BTreeMap::new(); window.len()];
    let mut out = vec![0.0; window.len()];
    for (x, row) in rows.iter_mut().enumerate() {
        for (g, w) in &atoms {
            match window.index_of(&window.point(x).act(g)) {
                Some(y) => *row.entry(y).or_insert(0.0) += w,
                None => out[x] += w,
            }
        }
    }
    Kernel { rows, out, base: window.base() }
}

impl CenteredChain {
    /// `q(x, y) = Σ_{i : (x,y) ∈ γ_i} q_i`.
    pub fn kernel(&self) -> Kernel {
        let mut rows = vec![BTreeMap::new(); self.n];
        let mut out = vec![0.0; self.n];
        for c in &self.cycles {
            for (a, b) in c.edges() {
                match (a, b) {
                    (Some(x), Some(y)) => *rows[x].entry(y).or_insert(0.0) += c.weight,
                    (Some(x), None) => out[x] += c.weight,
                    _ => {}
                }
            }
        }
        Kernel { rows, out, base: self.base }
    }

    /// Mass entering each window vertex from outside.
    fn inflow_from_outside(&self) -> Vec<f64> {
        let mut inflow = vec![0.0; self.n];
        for c in &self.cycles {
            for (a, b) in c.edges() {
                if let (None, Some(y)) = (a, b) {
                    inflow[y] += c.weight;
                }
            }
        }
        inflow
    }

    /// Every edge leaving a window vertex lies on exactly one cycle, and the cycle weights
    /// through each window vertex sum to one.
    pub fn validate(&self) -> (bool, Vec<Violation>) {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut sums = vec![0.0; self.n];
        for c in &self.cycles {
            for v in c.vertices.iter().flatten() {
                sums[*v] += c.weight;
                *seen.entry((*v, c.tag)).or_insert(0) += 1;
            }
        }
        let mut bad: Vec<Violation> = Vec::new();
        let mut dups: Vec<(usize, usize)> = seen.into_iter().filter(|(_, k)| *k > 1).map(|(e, _)| e).collect();
        dups.sort_unstable();
        bad.extend(dups.into_iter().map(|(vertex, tag)| Violation::DuplicateEdge { vertex, tag }));
        for (vertex, sum) in sums.into_iter().enumerate() {
            if (sum - 1.0).abs() > 1e-12 {
                bad.push(Violation::VertexSum { vertex, sum });
            }
        }
        (bad.is_empty(), bad)
    }

    /// `q₀(x, y) = ½(q(x, y) + q(y, x))`; mass to and from outside is pooled into `out`.
    pub fn symmetrize(&self) -> Kernel {
        let q = self.kernel();
        let inflow = self.inflow_from_outside();
        let mut rows = vec![BTreeMap::new(); self.n];
        for (x, row) in q.rows.iter().enumerate() {
            for (&y, &w) in row {
                *rows[x].entry(y).or_insert(0.0) += 0.5 * w;
                *rows[y].entry(x).or_insert(0.0) += 0.5 * w;
            }
        }
        let out = q.out.iter().zip(&inflow).map(|(o, i)| 0.5 * (o + i)).collect();
        Kernel { rows, out, base: self.base }
    }
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest deviation of a row sum (including `out`) from one.
    pub fn row_defect(&self) -> f64 {
        self.rows
            .iter()
            .zip(&self.out)
            .map(|(r, o)| (r.values().sum::<f64>() + o - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows.iter().enumerate().all(|(x, r)| r.iter().all(|(&y, &w)| (self.rows[y].get(&x).copied().unwrap_or(0.0) - w).abs() <= tol))
    }

    /// Largest `|q(x,y) − p(x,y)|` including the outside column.
    pub fn max_difference(&self, other: &Kernel) -> f64 {
        let mut d: f64 = 0.0;
        for x in 0..self.len() {
            for (y, w) in &self.rows[x] {
                d = d.max((w - other.rows[x].get(y).copied().unwrap_or(0.0)).abs());
            }
            for (y, w) in &other.rows[x] {
                d = d.max((w - self.rows[x].get(y).copied().unwrap_or(0.0)).abs());
            }
            d = d.max((self.out[x] - other.out[x]).abs());
        }
        d
    }

    /// Probability that the chain from the basepoint leaves the window before coming back.
    pub fn escape_probability(&self) -> Result<f64> {
        let n = self.len();
        let b = self.base;
        // unknowns h(x) for x ≠ base, in window order with the base removed
        let pos = |x: usize| if x < b { x } else { x - 1 };
        let m = n - 1;
        if m == 0 {
            return Ok(self.out[b]);
        }
        let mut bw = 0usize;
        for x in (0..n).filter(|&x| x != b) {
            for &y in self.rows[x].keys().filter(|&&y| y != b) {
                bw = bw.max(pos(x).abs_diff(pos(y)));
            }
        }
        let mut band = Band::new(m, bw);
        let mut rhs = vec![0.0; m];
        for x in (0..n).filter(|&x| x != b) {
            let i = pos(x);
            band.add(i, i, 1.0);
            for (&y, &w) in &self.rows[x] {
                if y != b {
                    band.add(i, pos(y), -w);
                }
            }
            rhs[i] = self.out[x];
        }
        let h = band.solve(rhs)?;
        let mut e = self.out[b];
        for (&y, &w) in &self.rows[b] {
            if y != b {
                e += w * h[pos(y)];
            }
        }
        Ok(e.clamp(0.0, 1.0))
    }
}

/// Banded matrix stored row-wise over columns `i − bw ..= i + bw`; LU without pivoting, which
/// is safe for the diagonally dominant M-matrices `I − Q` arising here.
struct Band {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, bw: usize) -> Band {
        Band { n, bw, data: vec![0.0; n * (2 * bw + 1)] }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * (2 * self.bw + 1) + (j + self.bw - i)
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.at(i, j);
        self.data[k] += v;
    }

    fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let pivot = self.data[self.at(k, k)];
            if pivot.abs() < 1e-14 {
                return Err(Error::Singular(k));
            }
            let last = (k + bw).min(n - 1);
            for i in k + 1..=last {
                let ik = self.at(i, k);
                let f = self.data[ik] / pivot;
                if f == 0.0 {
                    continue;
                }
                self.data[ik] = 0.0;
                for j in k + 1..=last {
                    let kj = self.data[self.at(k, j)];
                    if kj != 0.0 {
                        let ij = self.at(i, j);
                        self.data[ij] -= f * kj;
                    }
                }
                rhs[i] -= f * rhs[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = rhs[k];
            for j in k + 1..=(k + bw).min(n - 1) {
                s -= self.data[self.at(k, j)] * rhs[j];
            }
            rhs[k] = s / self.data[self.at(k, k)];
        }
        Ok(rhs)
    }
}

/// Whether a sequence is strictly decreasing, the trend used to compare `q` and `q₀`.
pub fn is_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeRow {
    pub radius: usize,
    pub escape_q: f64,
    pub escape_q0: f64,
}

/// CSV with header `radius,escape_q,escape_q0`.
pub fn escape_csv(rows: &[EscapeRow]) -> String {
    let mut s = String::from("radius,escape_q,escape_q0\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.radius, r.escape_q, r.escape_q0));
    }
    s
}

/// Escape probabilities of `q` and `q₀` on product boxes of the given radii.
pub fn product_escape_rows(
    specs: &[crate::grig::GroupSpec],
    basepoints: &[crate::boundary::Ray],
    mu: &FiniteMeasure<crate::algebra::GroupTuple>,
    radii: &[usize],
    order_cap: usize,
) -> Result<Vec<EscapeRow>> {
    use rayon::prelude::*;
    let r_max = radii.iter().copied().max().unwrap_or(0);
    let lines = specs
        .iter()
        .zip(basepoints)
        .map(|(s, b)| LineOrbit::build(s, b, r_max))
        .collect::<Result<Vec<_>>>()?;
    crate::walk::with_workers(|| {
        radii
            .par_iter()
            .map(|&radius| {
                let window = Window::product_box(&lines, radius)?;
                let chain = cycles_from_torsion_measure(mu, &window, order_cap)?;
                Ok(EscapeRow {
                    radius,
                    escape_q: chain.kernel().escape_probability()?,
                    escape_q0: chain.symmetrize().escape_probability()?,
                })
            })
            .collect()
    })
}
