//! Monte Carlo trajectories of walks on `G₁ × ⋯ × G_k` seen through their action on line orbits.
//!
//! Only coordinates are simulated. Returns to `stab(ρ)` are returns of the coordinate chain
//! to 0, and the expected inverted orbit size is `E[δ(n)] = E[min(T, n+1)]` with `T` the first
//! return time, since the chain restarted at `ρ` after each step has the law of the original.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::Ray;
use crate::error::{Error, Result};
use crate::grig::{push_reduced, Gen, GroupElement, GroupSpec};
use crate::measures::{FiniteMeasure, NuGamma};

use super::line::{LazyLine, LineChain};
use super::series::{EstimateSeries, SeriesAccumulator};

/// Step distribution of the walk on the product group.
#[derive(Clone, Debug)]
pub enum StepLaw {
    /// Independent factors: the product measure `μ₁ × ⋯ × μ_k`.
    Finite(Vec<FiniteMeasure<GroupElement>>),
    /// `Σ_i ν(i) μ^{*i}` with `μ` the product of the factors; one `i` per step, shared by all factors.
    Mixture { nu: NuGamma, factors: Vec<FiniteMeasure<GroupElement>> },
}

/// Lamp increments in `Z/m`: switch, translate, switch.
#[derive(Clone, Debug)]
pub struct LampLaw {
    /// `probs[k] = μ_A(k)`; the length is `m`.
    pub probs: Vec<f64>,
}

impl LampLaw {
    /// Uniform measure on `Z/m`.
    pub fn uniform(m: usize) -> LampLaw {
        LampLaw { probs: vec![1.0 / m as f64; m] }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>();
        let mut acc = 0.0;
        for (k, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        self.probs.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub specs: Vec<GroupSpec>,
    pub basepoints: Vec<Ray>,
    pub law: StepLaw,
    /// Ascending times at which the series are recorded; the last one is the horizon.
    pub checkpoints: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    /// Track the lamp at `sigma` under the switch-translate-switch walk.
    pub lamps: Option<LampLaw>,
    /// Point whose lamp is watched; defaults to the basepoint.
    pub sigma: Option<Vec<Ray>>,
    /// Record the reduced word length of the product (finite laws only).
    pub track_word_length: bool,
}

impl WalkConfig {
    pub fn horizon(&self) -> u64 {
        self.checkpoints.last().copied().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        let k = self.specs.len();
        if k == 0 || self.basepoints.len() != k {
            return Err(Error::ArityMismatch(k, self.basepoints.len()));
        }
        let factors = match &self.law {
            StepLaw::Finite(f) => f,
            StepLaw::Mixture { factors, .. } => factors,
        };
        if factors.len() != k {
            return Err(Error::ArityMismatch(k, factors.len()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.checkpoints.is_empty() || self.horizon() == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("checkpoints must be strictly increasing".into()));
        }
        if let Some(l) = &self.lamps {
            let total: f64 = l.probs.iter().sum();
            if l.probs.is_empty() || l.probs.iter().any(|p| *p < 0.0) || (total - 1.0).abs() > crate::measures::MASS_TOL {
                return Err(Error::InvalidMeasure("lamp law must be a probability vector".into()));
            }
        }
        if let Some(s) = &self.sigma {
            if s.len() != k {
                return Err(Error::ArityMismatch(k, s.len()));
            }
        }
        Ok(())
    }
}

/// Series recorded at the checkpoints.
#[derive(Clone, Debug)]
pub struct WalkBundle {
    /// `P(x_n = ρ)`: the product walk lies in `stab(ρ)`.
    pub returns: EstimateSeries,
    /// `E[δ(n)]`.
    pub delta: EstimateSeries,
    pub word_length: Option<EstimateSeries>,
    /// Mean number of changes of the lamp at `σ` up to time `n`.
    pub changes: Option<EstimateSeries>,
    /// `change_counts[j][t]`: changes up to checkpoint `j` in trial `t`.
    pub change_counts: Option<Vec<Vec<u32>>>,
}

impl WalkBundle {
    /// Fraction of trials with more than `k` lamp changes by checkpoint `j`.
    pub fn change_tail(&self, j: usize, k: u32) -> Option<f64> {
        let counts = &self.change_counts.as_ref()?[j];
        Some(counts.iter().filter(|&&c| c > k).count() as f64 / counts.len() as f64)
    }
}

enum Mover {
    Finite(Vec<LineChain>),
    Mixture { nu: crate::measures::NuSampler, lines: Vec<LazyLine> },
}

/// Number of worker threads: `GRIGWALK_WORKERS` if set, else rayon's default.
pub fn worker_count() -> usize {
    std::env::var("GRIGWALK_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool sized by [`worker_count`].
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(worker_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

const TRIAL_CHUNK: u64 = 16;

struct Partial {
    ret: SeriesAccumulator,
    delta: SeriesAccumulator,
    len: SeriesAccumulator,
    chg: SeriesAccumulator,
    counts: Vec<Vec<u32>>,
}

impl Partial {
    fn new(len: usize) -> Partial {
        Partial {
            ret: SeriesAccumulator::new(len),
            delta: SeriesAccumulator::new(len),
            len: SeriesAccumulator::new(len),
            chg: SeriesAccumulator::new(len),
            counts: vec![Vec::new(); len],
        }
    }
}

struct TrialRecord {
    returns: Vec<i64>,
    delta: Vec<i64>,
    length: Vec<i64>,
    changes: Vec<i64>,
}

pub fn simulate(config: &WalkConfig) -> Result<WalkBundle> {
    config.validate()?;
    let horizon = config.horizon();
    let mover = match &config.law {
        StepLaw::Finite(factors) => {
            let mut chains = Vec::new();
            for ((spec, bp), mu) in config.specs.iter().zip(&config.basepoints).zip(factors) {
                let step = mu.atoms().iter().map(|(g, _)| g.word_length()).max().unwrap_or(0).max(1);
                let radius = usize::try_from(horizon).ok().and_then(|h| h.checked_mul(step)).and_then(|r| r.checked_add(2));
                let radius = radius.filter(|&r| r <= 50_000_000).ok_or_else(|| Error::BudgetExceeded("orbit window too large".into()))?;
                chains.push(LineChain::new(spec, bp, mu, radius)?);
            }
            Mover::Finite(chains)
        }
        StepLaw::Mixture { nu, factors } => {
            if config.track_word_length {
                return Err(Error::InvalidParameter("word length is only tracked for finite laws".into()));
            }
            let mut lines = Vec::new();
            for ((spec, bp), mu) in config.specs.iter().zip(&config.basepoints).zip(factors) {
                lines.push(LineChain::new(spec, bp, mu, 64)?.lazy_line()?);
            }
            Mover::Mixture { nu: nu.sampler(), lines }
        }
    };
    // coordinates of σ on each line, or None if σ is not on the explored orbit
    let sigma: Option<Option<Vec<i64>>> = match (&config.sigma, &mover) {
        (None, _) => None,
        (Some(s), _) if *s == config.basepoints => None,
        (Some(_), Mover::Mixture { .. }) => {
            return Err(Error::InvalidParameter("σ ≠ ρ needs a finite step law".into()));
        }
        (Some(s), Mover::Finite(chains)) => Some(chains.iter().zip(s).map(|(c, r)| c.orbit().coordinate(r)).collect()),
    };
    let run = |trial: u64| -> Result<TrialRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial);
        run_trial(config, &mover, sigma.as_ref(), horizon, &mut rng)
    };
    let len = config.checkpoints.len();
    let lamps = config.lamps.is_some();
    // fixed-size chunks keep the merge order independent of the worker count
    let chunks: Vec<u64> = (0..config.trials.div_ceil(TRIAL_CHUNK)).collect();
    let parts: Vec<Result<Partial>> = with_workers(|| {
        chunks
            .into_par_iter()
            .map(|c| {
                let mut part = Partial::new(len);
                for trial in c * TRIAL_CHUNK..((c + 1) * TRIAL_CHUNK).min(config.trials) {
                    let r = run(trial)?;
                    part.ret.push(&r.returns);
                    part.delta.push(&r.delta);
                    if config.track_word_length {
                        part.len.push(&r.length);
                    }
                    if lamps {
                        part.chg.push(&r.changes);
                        for (j, c) in r.changes.iter().enumerate() {
                            part.counts[j].push(*c as u32);
                        }
                    }
                }
                Ok(part)
            })
            .collect()
    });
    let mut total = Partial::new(len);
    for p in parts {
        let p = p?;
        total.ret = total.ret.merge(&p.ret);
        total.delta = total.delta.merge(&p.delta);
        total.len = total.len.merge(&p.len);
        total.chg = total.chg.merge(&p.chg);
        for (j, c) in p.counts.into_iter().enumerate() {
            total.counts[j].extend(c);
        }
    }
    let Partial { ret: acc_ret, delta: acc_delta, len: acc_len, chg: acc_chg, counts } = total;
    let ns: Vec<u32> = config.checkpoints.iter().map(|&n| n as u32).collect();
    Ok(WalkBundle {
        returns: acc_ret.finish(ns.clone()),
        delta: acc_delta.finish(ns.clone()),
        word_length: config.track_word_length.then(|| acc_len.finish(ns.clone())),
        changes: lamps.then(|| acc_chg.finish(ns.clone())),
        change_counts: lamps.then_some(counts),
    })
}

fn run_trial(
    config: &WalkConfig,
    mover: &Mover,
    sigma: Option<&Option<Vec<i64>>>,
    horizon: u64,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord> {
    let k = config.specs.len();
    let len = config.checkpoints.len();
    let mut rec = TrialRecord {
        returns: Vec::with_capacity(len),
        delta: Vec::with_capacity(len),
        length: Vec::with_capacity(len),
        changes: Vec::with_capacity(len),
    };
    let mut x = vec![0i64; k];
    // σ's coordinates when it is watched separately from the walker
    let mut y: Option<Vec<i64>> = match sigma {
        Some(Some(c)) => Some(c.clone()),
        _ => None,
    };
    let sigma_absent = matches!(sigma, Some(None));
    let mut words: Vec<Vec<Gen>> = vec![Vec::new(); k];
    let mut first_return: Option<u64> = None;
    let mut lamp = 0usize;
    let mut changes = 0i64;
    let mut next_cp = 0usize;
    let at_base = |c: &[i64]| c.iter().all(|&z| z == 0);
    let mut record = |n: u64, x: &[i64], words: &[Vec<Gen>], first_return: Option<u64>, changes: i64, rec: &mut TrialRecord| {
        while next_cp < len && config.checkpoints[next_cp] == n {
            rec.returns.push(at_base(x) as i64);
            rec.delta.push(first_return.map_or(n + 1, |t| t.min(n + 1)) as i64);
            if config.track_word_length {
                rec.length.push(words.iter().map(|w| w.len() as i64).sum());
            }
            rec.changes.push(changes);
            next_cp += 1;
        }
    };
    record(0, &x, &words, first_return, changes, &mut rec);
    for n in 1..=horizon {
        let before = lamp;
        let watched_here = |x: &[i64], y: &Option<Vec<i64>>| -> bool {
            if sigma_absent {
                return false;
            }
            match y {
                Some(y) => at_base(y),
                None => at_base(x),
            }
        };
        if let Some(l) = &config.lamps {
            if watched_here(&x, &y) {
                lamp = (lamp + l.sample(rng)) % l.probs.len();
            }
        }
        match mover {
            Mover::Finite(chains) => {
                for (f, chain) in chains.iter().enumerate() {
                    let j = chain.sample_atom(rng);
                    x[f] = chain.apply(j, x[f]).ok_or_else(|| Error::BudgetExceeded("walk left the orbit window".into()))?;
                    if let Some(y) = y.as_mut() {
                        y[f] = chain.apply(j, y[f]).ok_or_else(|| Error::BudgetExceeded("σ left the orbit window".into()))?;
                    }
                    if config.track_word_length {
                        for &g in chain.atoms()[j].0.word().letters() {
                            push_reduced(&mut words[f], g);
                        }
                    }
                }
            }
            Mover::Mixture { nu, lines } => {
                let i = nu.sample(rng);
                for (f, line) in lines.iter().enumerate() {
                    x[f] += line.sample_displacement(i, rng);
                }
            }
        }
        if let Some(l) = &config.lamps {
            if watched_here(&x, &y) {
                lamp = (lamp + l.sample(rng)) % l.probs.len();
            }
            if lamp != before {
                changes += 1;
            }
        }
        if first_return.is_none() && at_base(&x) {
            first_return = Some(n);
        }
        record(n, &x, &words, first_return, changes, &mut rec);
    }
    Ok(rec)
}
