//! Exact entropy and drift of convolution powers, and the checks relating them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Element;
use crate::error::Result;
use crate::grig::{push_reduced, DistanceMap, Gen, GroupElement};
use crate::measures::FiniteMeasure;

use super::series::{EstimateSeries, SeriesAccumulator};
use super::sim::with_workers;

/// `H(μ^{*n})` for `n = 0..len`, stopping early when the support exceeds the budget.
#[derive(Clone, Debug, Serialize)]
pub struct EntropySeries {
    pub h: Vec<f64>,
    pub support: Vec<usize>,
    /// Whether the budget cut the series short of the requested `n_max`.
    pub truncated: bool,
}

impl EntropySeries {
    pub fn n_max(&self) -> usize {
        self.h.len() - 1
    }

    /// `H(n)/n` for `n ≥ 1`.
    pub fn per_step(&self) -> Vec<f64> {
        self.h.iter().enumerate().skip(1).map(|(n, h)| h / n as f64).collect()
    }

    /// `H(n+1) − H(n)` for `n ≥ 0`.
    pub fn increments(&self) -> Vec<f64> {
        self.h.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn to_series(&self) -> EstimateSeries {
        EstimateSeries::exact((0..self.h.len() as u32).collect(), self.h.clone())
    }

    /// Pairs `(m, n)` with `H(m+n) > H(m) + H(n) + tol`.
    pub fn subadditivity_violations(&self, tol: f64) -> Vec<(usize, usize)> {
        let k = self.n_max();
        let mut bad = Vec::new();
        for m in 1..=k {
            for n in m..=k - m {
                if self.h[m + n] > self.h[m] + self.h[n] + tol {
                    bad.push((m, n));
                }
            }
        }
        bad
    }
}

/// Exact `H(n)` by repeated convolution.
pub fn exact_entropy_series<E: Element>(mu: &FiniteMeasure<E>, n_max: usize, budget: usize) -> EntropySeries {
    let identity = mu.atoms().first().map(|(g, _)| g.compose(&g.inverse()));
    let mut h = vec![0.0];
    let mut support = vec![1];
    let Some(id) = identity else {
        return EntropySeries { h, support, truncated: n_max > 0 };
    };
    let mut power = FiniteMeasure::dirac(id);
    for _ in 0..n_max {
        match power.convolve_within(mu, budget) {
            Ok(next) => power = next,
            Err(_) => return EntropySeries { h, support, truncated: true },
        }
        h.push(power.entropy());
        support.push(power.support_size());
    }
    EntropySeries { h, support, truncated: false }
}

/// Mean word length `L(n)`: exact for `n ≤ n_exact`, then the reduced-word-length proxy by simulation.
#[derive(Clone, Debug, Serialize)]
pub struct DriftSeries {
    pub series: EstimateSeries,
    /// Exact values only: whether `supp μ^{*n}` lies in the ball of radius `n·max|s|`.
    pub support_in_ball: Vec<bool>,
    /// Exact values only: `H(n)` along the way.
    pub entropy: Vec<f64>,
    pub support: Vec<usize>,
}

impl DriftSeries {
    /// Number of leading exact values, starting at `n = 0`.
    pub fn exact_len(&self) -> usize {
        self.series.exact.iter().take_while(|e| **e).count()
    }

    /// Pairs `(m, n)` in the exact range with `L(m+n) > L(m) + L(n) + tol`.
    pub fn subadditivity_violations(&self, tol: f64) -> Vec<(usize, usize)> {
        let l = &self.series.mean[..self.exact_len()];
        let k = l.len().saturating_sub(1);
        let mut bad = Vec::new();
        for m in 1..=k {
            for n in m..=k - m {
                if l[m + n] > l[m] + l[n] + tol {
                    bad.push((m, n));
                }
            }
        }
        bad
    }
}

#[derive(Clone, Debug)]
pub struct DriftConfig {
    pub n_exact: usize,
    pub n_max: usize,
    /// Radius of the ball of exact distances.
    pub radius_cap: usize,
    pub budget: usize,
    pub trials: u64,
    pub seed: u64,
}

pub fn drift_series(mu: &FiniteMeasure<GroupElement>, cfg: &DriftConfig) -> Result<DriftSeries> {
    let atoms = mu.atoms();
    let spec = match atoms.first() {
        Some((g, _)) => g.spec().clone(),
        None => return Err(crate::error::Error::InvalidMeasure("empty measure".into())),
    };
    let step = atoms.iter().map(|(g, _)| g.word_length()).max().unwrap_or(0);
    let dist = DistanceMap::new(&spec, cfg.radius_cap);
    let mut n = vec![0u32];
    let mut values = vec![0.0];
    let mut in_ball = vec![true];
    let mut entropy = vec![0.0];
    let mut support = vec![1];
    let mut power = FiniteMeasure::dirac(spec.identity());
    for k in 1..=cfg.n_exact.min(cfg.n_max) {
        let Ok(next) = power.convolve_within(mu, cfg.budget) else { break };
        let mut mean = 0.0;
        let mut inside = true;
        let mut complete = true;
        for (_, g, w) in next.iter() {
            match dist.distance(g) {
                Some(d) => {
                    mean += w * d as f64;
                    inside &= d <= k * step;
                }
                None => complete = false,
            }
        }
        if !complete {
            break;
        }
        n.push(k as u32);
        values.push(mean);
        in_ball.push(inside);
        entropy.push(next.entropy());
        support.push(next.support_size());
        power = next;
    }
    let exact_until = n.len() - 1;
    let mut series = EstimateSeries::exact(n, values);
    if cfg.n_max > exact_until && cfg.trials > 0 {
        let proxy = proxy_lengths(&atoms, exact_until + 1, cfg.n_max, cfg.trials, cfg.seed);
        series.n.extend(proxy.n);
        series.mean.extend(proxy.mean);
        series.stderr.extend(proxy.stderr);
        series.trials.extend(proxy.trials);
        series.exact.extend(proxy.exact);
    }
    Ok(DriftSeries { series, support_in_ball: in_ball, entropy, support })
}

/// Mean reduced word length of the product of `n` sampled atoms, for `n = from..=to`.
fn proxy_lengths(atoms: &[(GroupElement, f64)], from: usize, to: usize, trials: u64, seed: u64) -> EstimateSeries {
    let words: Vec<&[Gen]> = atoms.iter().map(|(g, _)| g.word().letters()).collect();
    let weights: Vec<(usize, f64)> = atoms.iter().enumerate().map(|(j, (_, w))| (j, *w)).collect();
    let len = to - from + 1;
    let run = |trial: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut w: Vec<Gen> = Vec::new();
        let mut out = Vec::with_capacity(len);
        for n in 1..=to {
            let j = *crate::measures::sample_atom(&weights, &mut rng);
            for &g in words[j] {
                push_reduced(&mut w, g);
            }
            if n >= from {
                out.push(w.len() as i64);
            }
        }
        out
    };
    let rows: Vec<Vec<i64>> = with_workers(|| (0..trials).into_par_iter().map(run).collect());
    let mut acc = SeriesAccumulator::new(len);
    for r in &rows {
        acc.push(r);
    }
    acc.finish((from as u32..=to as u32).collect())
}

/// Diagnostics relating drift, entropy and growth on the common exact range.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    /// Largest `C` with `C (L/n)² ≤ H/n` on the range.
    pub c_fit: f64,
    /// Smallest `D` with `H/n ≤ D L/n` on the range.
    pub d_fit: f64,
    /// Smallest `K` with `L(n) ≤ K √(n log v(n) + log n)` on the range.
    pub growth_k: f64,
    /// `H(n) ≤ log |supp μ^{*n}|` for every `n`.
    pub entropy_within_support: bool,
    /// Every support lies in the ball of radius `n·max|s|`.
    pub support_within_ball: bool,
    pub range: usize,
}

impl ConsistencyReport {
    pub fn holds(&self) -> bool {
        self.entropy_within_support && self.support_within_ball
    }
}

/// `ball_log_sizes[n] = log |B(n)|`.
pub fn consistency_report(drift: &DriftSeries, entropy: &EntropySeries, ball_log_sizes: &[f64]) -> ConsistencyReport {
    let range = drift.exact_len().min(entropy.h.len()).min(ball_log_sizes.len());
    let mut c_fit = f64::INFINITY;
    let mut d_fit: f64 = 0.0;
    let mut growth_k: f64 = 0.0;
    for n in 1..range {
        let (l, h) = (drift.series.mean[n], entropy.h[n]);
        if l > 0.0 {
            c_fit = c_fit.min(h * n as f64 / (l * l));
            d_fit = d_fit.max(h / l);
        } else if h > 0.0 {
            d_fit = f64::INFINITY;
        }
        let scale = (n as f64 * ball_log_sizes[n] + (n as f64).ln()).sqrt();
        if scale > 0.0 {
            growth_k = growth_k.max(l / scale);
        }
    }
    let entropy_within_support =
        entropy.h.iter().zip(&entropy.support).all(|(h, s)| *h <= (*s as f64).ln() + 1e-12);
    ConsistencyReport {
        c_fit: if c_fit.is_finite() { c_fit } else { 0.0 },
        d_fit,
        growth_k,
        entropy_within_support,
        support_within_ball: drift.support_in_ball.iter().all(|b| *b),
        range,
    }
}
