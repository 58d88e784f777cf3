//! Renormalisation of measures along the first level of the tree, and self-similar sequences.
//!
//! Running `μ` from the root, we follow the section of the product at the vertex that started
//! at `0`; the walk is stopped the first time (at least one step) that vertex is back at `0`.
//! The law of the accumulated section at that moment is `μ'`, a measure on the shifted group.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grig::{GroupElement, GroupSpec, PortraitKey};
use crate::measures::{FiniteMeasure, MASS_TOL};

/// Paths whose mass falls below this are dropped into the tail.
pub const PRUNE: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct RenormResult {
    /// `μ'` on the shifted group, with slack equal to `tail`.
    pub measure: FiniteMeasure<GroupElement>,
    /// `stopping[k]` is `P(T = k)`; index 0 is always 0.
    pub stopping: Vec<f64>,
    /// Mass not stopped by the cutoff, plus pruned mass.
    pub tail: f64,
}

/// Exact enumeration of stopped paths of length at most `cutoff`.
pub fn renormalize(mu: &FiniteMeasure<GroupElement>, spec: &GroupSpec, cutoff: usize) -> Result<RenormResult> {
    if cutoff == 0 {
        return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
    }
    if mu.slack() > MASS_TOL {
        return Err(Error::InvalidMeasure("renormalisation needs a probability measure".into()));
    }
    let steps: Vec<(crate::grig::Section, f64)> = mu
        .atoms()
        .into_iter()
        .map(|(g, w)| {
            if g.spec() != spec {
                return Err(Error::OmegaMismatch);
            }
            Ok((g.sections(), w))
        })
        .collect::<Result<_>>()?;
    let shifted = spec.shift();
    let mut stopped: BTreeMap<PortraitKey, (GroupElement, f64)> = BTreeMap::new();
    let mut stopping = vec![0.0; cutoff + 1];
    let mut pruned = 0.0;
    let id = shifted.identity();
    let mut frontier = vec![(id, 0u8, 1.0f64)];
    for t in 1..=cutoff {
        let mut next: BTreeMap<PortraitKey, (GroupElement, f64)> = BTreeMap::new();
        for (acc, coord, mass) in frontier.drain(..) {
            for (s, w) in &steps {
                let m = mass * w;
                let section = acc.multiply(s.get(coord)).expect("same shifted spec");
                let c = coord ^ s.swap as u8;
                let bucket = if c == 0 { &mut stopped } else { &mut next };
                if c == 0 {
                    stopping[t] += m;
                }
                let entry = bucket.entry(section.key().clone()).or_insert_with(|| (section.clone(), 0.0));
                entry.1 += m;
            }
        }
        for (_, (g, m)) in next {
            if m < PRUNE {
                pruned += m;
            } else {
                frontier.push((g, 1, m));
            }
        }
    }
    // paths still away from 0 at the cutoff
    let remaining: f64 = frontier.iter().map(|f| f.2).sum::<f64>() + pruned;
    let atoms: Vec<(GroupElement, f64)> = stopped.into_values().collect();
    let measure = FiniteMeasure::new(atoms)?;
    Ok(RenormResult { measure, stopping, tail: remaining })
}

/// First-return law of the two-state chain that flips with probability `p`:
/// `P(T=1) = 1−p`, `P(T=k) = p²(1−p)^{k−2}`.
pub fn flip_return_law(p: f64, cutoff: usize) -> Vec<f64> {
    let mut out = vec![0.0; cutoff + 1];
    if cutoff >= 1 {
        out[1] = 1.0 - p;
    }
    for (k, slot) in out.iter_mut().enumerate().skip(2) {
        *slot = p * p * (1.0 - p).powi(k as i32 - 2);
    }
    out
}

/// Mass of the atoms that swap the two subtrees.
pub fn swap_mass(mu: &FiniteMeasure<GroupElement>) -> f64 {
    mu.expect(|g| g.sections().swap as u8 as f64)
}

/// Measures `μ_i` on the groups `G_{σ^i ω}` with laziness `α_i`.
#[derive(Clone, Debug)]
pub struct SelfSimilarSeq {
    pub measures: Vec<FiniteMeasure<GroupElement>>,
    pub alphas: Vec<f64>,
}

impl SelfSimilarSeq {
    /// The same recipe on every shift of `spec`; `depth + 1` measures are built.
    pub fn constant(
        spec: &GroupSpec,
        build: impl Fn(&GroupSpec) -> FiniteMeasure<GroupElement>,
        alpha: f64,
        depth: usize,
    ) -> Result<SelfSimilarSeq> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("laziness {alpha} outside [0,1]")));
        }
        let mut s = spec.clone();
        let mut measures = Vec::with_capacity(depth + 1);
        for _ in 0..=depth {
            measures.push(build(&s));
            s = s.shift();
        }
        Ok(SelfSimilarSeq { measures, alphas: vec![alpha; depth + 1] })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarLevel {
    pub index: usize,
    pub tv_gap: f64,
    pub tail: f64,
    pub stopping: Vec<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarReport {
    pub levels: Vec<SelfSimilarLevel>,
    pub tol: f64,
}

impl SelfSimilarReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.holds)
    }
}

/// Checks `TV(μ'_i, (1−α_i)δ₁ + α_i μ_{i+1}) ≤ tol + tail` for `i < depth`.
pub fn verify_self_similar(seq: &SelfSimilarSeq, depth: usize, cutoff: usize, tol: f64) -> Result<SelfSimilarReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    if seq.measures.len() <= depth || seq.alphas.len() < depth {
        return Err(Error::InvalidParameter("sequence shorter than depth".into()));
    }
    let mut levels = Vec::with_capacity(depth);
    for i in 0..depth {
        let mu = &seq.measures[i];
        let spec = match mu.atoms().first() {
            Some((g, _)) => g.spec().clone(),
            None => return Err(Error::InvalidMeasure("empty measure".into())),
        };
        let r = renormalize(mu, &spec, cutoff)?;
        let next = &seq.measures[i + 1];
        let delta = FiniteMeasure::dirac(spec.shift().identity());
        let a = seq.alphas[i];
        let target = FiniteMeasure::mixture(&[(1.0 - a, &delta), (a, next)]);
        let tv_gap = r.measure.total_variation(&target);
        levels.push(SelfSimilarLevel { index: i, tv_gap, tail: r.tail, stopping: r.stopping, holds: tv_gap <= tol + r.tail });
    }
    Ok(SelfSimilarReport { levels, tol })
}

/// Fit of `H(n) ≤ K n^β` with `β = log d / (log d − log sup α)`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyBoundReport {
    pub beta: f64,
    /// Least `K` with `H(n) ≤ K n^β` on the measured range.
    pub k: f64,
    /// `H(n)/n^β` for `n ≥ 1`.
    pub ratios: Vec<f64>,
    /// The last `window` ratios never exceed an earlier one in the window by more than `slack`.
    pub non_increasing_tail: bool,
    pub window: usize,
    pub slack: f64,
}

pub fn entropy_exponent(d: f64, sup_alpha: f64) -> f64 {
    d.ln() / (d.ln() - sup_alpha.ln())
}

/// `h[n] = H(n)` from `n = 0`.
pub fn entropy_bound_experiment(h: &[f64], d: f64, sup_alpha: f64, window: usize, slack: f64) -> EntropyBoundReport {
    let beta = entropy_exponent(d, sup_alpha);
    let ratios: Vec<f64> = h.iter().enumerate().skip(1).map(|(n, v)| v / (n as f64).powf(beta)).collect();
    let k = ratios.iter().copied().fold(0.0, f64::max);
    let tail = &ratios[ratios.len().saturating_sub(window)..];
    let mut non_increasing_tail = true;
    let mut best = f64::INFINITY;
    for &r in tail {
        if r > best * (1.0 + slack) {
            non_increasing_tail = false;
        }
        best = best.min(r);
    }
    EntropyBoundReport { beta, k, ratios, non_increasing_tail, window, slack }
}
