//! The heavy-tailed step-count law `ν_γ(i) = C_γ i^{-γ}` and the mixtures `λ_γ = Σ α_i μ^{*i}`.

use rand::Rng;
use rand_distr::{Distribution, Zipf};
use serde::Serialize;
use statrs::function::gamma::gamma as gamma_fn;

use super::finite::FiniteMeasure;
use super::special::{gauss_legendre, hurwitz_zeta, integrate_geometric, zeta, Polylog};
use crate::algebra::Element;
use crate::error::{Error, Result};

/// `ν_γ` truncated at `i_max`; the dropped mass `Σ_{i>i_max} α_i` is kept as `tail_mass`.
///
/// Weights are not renormalised: `α_i = C_γ i^{-γ}` exactly, so `Σ_{i≤i_max} α_i + tail_mass = 1`.
#[derive(Clone, Debug)]
pub struct NuGamma {
    gamma: f64,
    c_gamma: f64,
    i_max: u64,
    tail_mass: f64,
    eps_tail: f64,
    polylog: Polylog,
}

impl NuGamma {
    /// `i_max` is the least `N` with `C_γ/(γ−1)·N^{1−γ} ≤ eps_tail`, which bounds the tail beyond `N`.
    pub fn new(gamma: f64, eps_tail: f64) -> Result<NuGamma> {
        if !(gamma > 1.0 && gamma < 2.0) {
            return Err(Error::InvalidParameter(format!("gamma {gamma} outside (1,2)")));
        }
        if !(eps_tail > 0.0 && eps_tail < 1.0) {
            return Err(Error::InvalidParameter(format!("eps_tail {eps_tail} outside (0,1)")));
        }
        let c_gamma = 1.0 / zeta(gamma);
        let n = (c_gamma / ((gamma - 1.0) * eps_tail)).powf(1.0 / (gamma - 1.0)).ceil();
        if n > 9.0e15 {
            return Err(Error::InvalidParameter(format!("eps_tail {eps_tail} needs i_max {n:e}")));
        }
        let i_max = (n as u64).max(1);
        let tail_mass = c_gamma * hurwitz_zeta(gamma, i_max as f64 + 1.0);
        Ok(NuGamma { gamma, c_gamma, i_max, tail_mass, eps_tail, polylog: Polylog::new(gamma) })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `C_γ = 1/ζ(γ)`.
    pub fn c_gamma(&self) -> f64 {
        self.c_gamma
    }

    pub fn i_max(&self) -> u64 {
        self.i_max
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn eps_tail(&self) -> f64 {
        self.eps_tail
    }

    /// Stable exponent `γ − 1`.
    pub fn stable_index(&self) -> f64 {
        self.gamma - 1.0
    }

    /// `α_i` for `1 ≤ i ≤ i_max`, else 0.
    pub fn alpha(&self, i: u64) -> f64 {
        if i == 0 || i > self.i_max {
            0.0
        } else {
            self.c_gamma * (i as f64).powf(-self.gamma)
        }
    }

    /// `α_1, …, α_len` (zero past `i_max`).
    pub fn alphas(&self, len: usize) -> Vec<f64> {
        (1..=len as u64).map(|i| self.alpha(i)).collect()
    }

    /// Untruncated `1 − F(x) = Σ_{i>x} α_i`.
    pub fn survival(&self, x: u64) -> f64 {
        self.c_gamma * hurwitz_zeta(self.gamma, x as f64 + 1.0)
    }

    /// `(C_γ/(γ−1)(x+1)^{1−γ}, C_γ/(γ−1)x^{1−γ})`, which bracket `1 − F(x)` for `x ≥ 1`.
    pub fn survival_bounds(&self, x: u64) -> (f64, f64) {
        let k = self.c_gamma / (self.gamma - 1.0);
        let x = x as f64;
        (k * (x + 1.0).powf(1.0 - self.gamma), k * x.powf(1.0 - self.gamma))
    }

    /// Draws `i`; the tail mass is folded into `i_max`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if rng.random::<f64>() < self.tail_mass {
            return self.i_max;
        }
        let zipf = Zipf::new(self.i_max as f64, self.gamma).expect("valid Zipf parameters");
        (zipf.sample(rng) as u64).clamp(1, self.i_max)
    }

    /// Reusable sampler, avoiding the per-draw Zipf setup.
    pub fn sampler(&self) -> NuSampler {
        NuSampler {
            zipf: Zipf::new(self.i_max as f64, self.gamma).expect("valid Zipf parameters"),
            tail_mass: self.tail_mass,
            i_max: self.i_max,
        }
    }

    /// Characteristic function `Σ_i α_i e^{iti}` of the untruncated law, `0 < |t| ≤ π`.
    pub fn characteristic(&self, t: f64) -> rustfft::num_complex::Complex64 {
        self.polylog.unit_circle(t) * self.c_gamma
    }

    /// Laplace transform `Σ_i α_i e^{-ui}` of the untruncated law.
    pub fn laplace(&self, u: f64) -> f64 {
        self.c_gamma * self.polylog.exp_neg(u)
    }

    /// Upper bound `(1/π)∫_0^π |φ(t)|^n dt ≥ sup_k ν^{*n}(k)`.
    ///
    /// Holds for the untruncated law, hence for the truncated one too, whose convolution powers are smaller pointwise.
    pub fn sup_bound(&self, n: u32) -> f64 {
        let scale = (n as f64).powf(-1.0 / self.stable_index());
        let lo = 1e-9 * scale;
        let rule = gauss_legendre(24);
        let f = |t: f64| (n as f64 * self.characteristic(t).norm().ln()).exp();
        (lo + integrate_geometric(f, lo, std::f64::consts::PI, 1.5, &rule)) / std::f64::consts::PI
    }

    /// `Σ_i ν^{*n}(i) i^{-δ}` for the untruncated law, via `Γ(δ)^{-1} ∫_0^∞ u^{δ−1} L(u)^n du`.
    pub fn negative_moment(&self, n: u32, delta: f64) -> f64 {
        if delta == 0.0 {
            return 1.0;
        }
        assert!(delta > 0.0 && n >= 1);
        let scale = (n as f64).powf(-1.0 / self.stable_index());
        let lo = 1e-12 * scale;
        // L(u) ≤ e^{-u}, so beyond 60/n the integrand is below e^{-60}
        let hi = 60.0 / n as f64 + 60.0;
        let rule = gauss_legendre(24);
        let f = |u: f64| ((delta - 1.0) * u.ln() + n as f64 * self.laplace(u).ln()).exp();
        (lo.powf(delta) / delta + integrate_geometric(f, lo, hi, 1.5, &rule)) / gamma_fn(delta)
    }
}

#[derive(Clone, Debug)]
pub struct NuSampler {
    zipf: Zipf<f64>,
    tail_mass: f64,
    i_max: u64,
}

impl NuSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if rng.random::<f64>() < self.tail_mass {
            return self.i_max;
        }
        (self.zipf.sample(rng) as u64).clamp(1, self.i_max)
    }
}

/// `λ_γ = Σ α_i μ^{*i}`, held symbolically.
#[derive(Clone, Debug)]
pub struct MixtureMeasure<E: Element> {
    pub nu: NuGamma,
    pub base: FiniteMeasure<E>,
}

impl<E: Element> MixtureMeasure<E> {
    pub fn new(nu: NuGamma, base: FiniteMeasure<E>) -> Result<MixtureMeasure<E>> {
        if base.slack() > super::MASS_TOL || base.support_size() == 0 {
            return Err(Error::InvalidMeasure("mixture base must be a probability measure".into()));
        }
        Ok(MixtureMeasure { nu, base })
    }

    /// Draws `i ~ ν`, then multiplies `i` independent `μ`-steps. Cost is linear in `i`.
    pub fn sample_step<R: Rng + ?Sized>(&self, identity: &E, rng: &mut R) -> (E, u64) {
        let i = self.nu.sample(rng);
        let atoms = self.base.atoms();
        let mut g = identity.clone();
        for _ in 0..i {
            g = g.compose(sample_atom(&atoms, rng));
        }
        (g, i)
    }
}

/// Inverse-CDF draw from a list of weighted atoms summing to one.
pub fn sample_atom<'a, E, R: Rng + ?Sized>(atoms: &'a [(E, f64)], rng: &mut R) -> &'a E {
    let mut u = rng.random::<f64>();
    for (e, w) in atoms {
        if u < *w {
            return e;
        }
        u -= w;
    }
    &atoms.last().expect("nonempty measure").0
}

/// Partial sums `S_N = Σ_{i≤N} ν(i) L(i)` with a convergence diagnostic.
#[derive(Clone, Debug, Serialize)]
pub struct MomentPartials {
    pub partial_sums: Vec<f64>,
    /// `(S_N − S_{N/10}) / S_N` at the last `N`; small when the series has converged.
    pub last_decade_ratio: f64,
}

pub fn first_moment_partial(nu: &NuGamma, l_series: &[f64]) -> MomentPartials {
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = l_series
        .iter()
        .enumerate()
        .map(|(j, l)| {
            acc += nu.alpha(j as u64 + 1) * l;
            acc
        })
        .collect();
    let last_decade_ratio = match partial_sums.last() {
        Some(&s) if s > 0.0 => {
            let k = partial_sums.len() / 10;
            let earlier = if k == 0 { 0.0 } else { partial_sums[k - 1] };
            (s - earlier) / s
        }
        _ => 0.0,
    };
    MomentPartials { partial_sums, last_decade_ratio }
}
