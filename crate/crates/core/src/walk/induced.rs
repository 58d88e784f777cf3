//! Exact distributions of the walk induced on an orbit, by pushing mass along a Schreier graph.

use crate::boundary::{Point, SchreierGraph};
use crate::error::{Error, Result};
use crate::measures::{DenseMeasure, FiniteMeasure, NuGamma};

/// The Markov kernel `x ↦ x·g` with `g ~ μ`, on an explored window of the orbit.
#[derive(Clone, Debug)]
pub struct InducedChain<P: Point> {
    graph: SchreierGraph<P>,
    weights: Vec<f64>,
}

/// `distributions[n][v]` is the probability of vertex `v` after `n` steps.
#[derive(Clone, Debug)]
pub struct InducedSeries {
    pub distributions: Vec<Vec<f64>>,
    /// Mass that left the window by step `n`.
    pub escaped: Vec<f64>,
    /// Probability of being back at the basepoint at step `n`.
    pub returns: Vec<f64>,
}

impl<P: Point> InducedChain<P> {
    /// Explores `radius` steps of the walk from `base`; enough for exact distributions up to `radius` steps.
    pub fn new(mu: &FiniteMeasure<P::Actor>, base: P, radius: usize, budget: usize) -> Result<InducedChain<P>> {
        if mu.slack() > crate::measures::MASS_TOL {
            return Err(Error::InvalidMeasure("walk measure must have total mass 1".into()));
        }
        let atoms = mu.atoms();
        let gens: Vec<(String, P::Actor)> = atoms.iter().map(|(g, _)| (crate::algebra::Element::label(g), g.clone())).collect();
        let graph = SchreierGraph::explore(base, &gens, radius, budget);
        Ok(InducedChain { graph, weights: atoms.iter().map(|(_, w)| *w).collect() })
    }

    pub fn graph(&self) -> &SchreierGraph<P> {
        &self.graph
    }

    /// Exact `n`-step distributions for `n = 0..=n_max`.
    pub fn series(&self, n_max: usize) -> InducedSeries {
        let v = self.graph.len();
        let mut dist = vec![0.0; v];
        dist[0] = 1.0;
        let mut distributions = vec![dist.clone()];
        let mut escaped = vec![0.0];
        let mut returns = vec![1.0];
        let mut lost = 0.0;
        for _ in 0..n_max {
            let mut next = vec![0.0; v];
            for (x, &p) in dist.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (s, &w) in self.weights.iter().enumerate() {
                    match self.graph.neighbor(x, s) {
                        Some(y) => next[y] += p * w,
                        None => lost += p * w,
                    }
                }
            }
            dist = next;
            returns.push(dist[0]);
            escaped.push(lost);
            distributions.push(dist.clone());
        }
        InducedSeries { distributions, escaped, returns }
    }
}

/// Bounds on `λ^{*n}(stab) = Σ_i ν^{*n}(i) r(i)` for `n` in `ns`, given `r(i) = μ^{*i}(stab)` for
/// `i ≤ K = r.len() − 1`. Mass of `ν^{*n}` beyond `K` contributes at most `tail_bound` per unit.
#[derive(Clone, Debug)]
pub struct MixtureReturns {
    pub n: Vec<u32>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

pub fn mixture_return_series(nu: &NuGamma, r: &[f64], ns: &[u32], tail_bound: f64) -> MixtureReturns {
    let k = r.len() - 1;
    let d = DenseMeasure::from_nu(nu, k);
    let powers = d.powers(ns);
    let mut lower = Vec::with_capacity(ns.len());
    let mut upper = Vec::with_capacity(ns.len());
    for p in &powers {
        let s: f64 = p.probs().iter().zip(r).map(|(a, b)| a * b).sum();
        let missing = (1.0 - p.mass()).max(0.0);
        lower.push(s);
        upper.push(s + missing * tail_bound);
    }
    MixtureReturns { n: ns.to_vec(), lower, upper }
}
