//! Measures on `{0, 1, …, K}` stored densely, with direct and FFT convolution truncated at `K`.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::nu::NuGamma;
use crate::error::{Error, Result};

/// A sub-probability measure on `0..=K`; mass pushed beyond `K` is counted in `escaped`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMeasure {
    probs: Vec<f64>,
    escaped: f64,
}

impl DenseMeasure {
    pub fn new(probs: Vec<f64>, escaped: f64) -> Result<DenseMeasure> {
        if probs.is_empty() || probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidMeasure("dense weights must be finite and nonnegative".into()));
        }
        Ok(DenseMeasure { probs, escaped })
    }

    pub fn dirac(k: usize, k_max: usize) -> DenseMeasure {
        let mut probs = vec![0.0; k_max + 1];
        let escaped = if k <= k_max {
            probs[k] = 1.0;
            0.0
        } else {
            1.0
        };
        DenseMeasure { probs, escaped }
    }

    /// `ν` restricted to `0..=k_max`; mass beyond, truncated or not, is escaped.
    pub fn from_nu(nu: &NuGamma, k_max: usize) -> DenseMeasure {
        let mut probs = vec![0.0; k_max + 1];
        for (k, p) in probs.iter_mut().enumerate().skip(1) {
            *p = nu.alpha(k as u64);
        }
        let kept: f64 = probs.iter().sum();
        DenseMeasure { probs, escaped: (1.0 - nu.tail_mass() - kept).max(0.0) }
    }

    pub fn k_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn escaped(&self) -> f64 {
        self.escaped
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(argmax, max)` over `0..=K`.
    pub fn sup(&self) -> (usize, f64) {
        self.probs.iter().copied().enumerate().fold((0, 0.0), |acc, (k, p)| if p > acc.1 { (k, p) } else { acc })
    }

    /// `Σ_{k≥1} p(k) k^{-δ}` over the stored range.
    pub fn negative_moment(&self, delta: f64) -> Result<f64> {
        if self.probs[0] > 0.0 && delta > 0.0 {
            return Err(Error::InvalidMeasure("negative moment needs support in k ≥ 1".into()));
        }
        Ok(self.probs.iter().enumerate().skip(1).map(|(k, p)| p * (k as f64).powf(-delta)).sum::<f64>()
            + if delta == 0.0 { self.probs[0] } else { 0.0 })
    }

    /// Schoolbook convolution, truncated at the smaller `K`.
    pub fn convolve_direct(&self, other: &DenseMeasure) -> DenseMeasure {
        let k_max = self.k_max().min(other.k_max());
        let mut probs = vec![0.0; k_max + 1];
        for (i, &p) in self.probs.iter().enumerate().take(k_max + 1) {
            if p == 0.0 {
                continue;
            }
            for (j, &q) in other.probs.iter().enumerate().take(k_max + 1 - i) {
                probs[i + j] += p * q;
            }
        }
        self.finish(other, probs)
    }

    /// FFT convolution, truncated at the smaller `K`. Round-off is clamped to zero.
    pub fn convolve_fft(&self, other: &DenseMeasure) -> DenseMeasure {
        let k_max = self.k_max().min(other.k_max());
        let len = (2 * (k_max + 1)).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        // both real inputs share one complex transform: z = x + i y
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for k in 0..=k_max {
            buf[k] = Complex64::new(self.probs[k], other.probs[k]);
        }
        fwd.process(&mut buf);
        let mut prod = vec![Complex64::new(0.0, 0.0); len];
        for k in 0..len {
            let zk = buf[k];
            let zc = buf[(len - k) % len].conj();
            let x = (zk + zc) * 0.5;
            let y = (zk - zc) * Complex64::new(0.0, -0.5);
            prod[k] = x * y;
        }
        drop(buf);
        inv.process(&mut prod);
        let scale = 1.0 / len as f64;
        let probs = prod[..=k_max].iter().map(|z| (z.re * scale).max(0.0)).collect();
        self.finish(other, probs)
    }

    fn finish(&self, other: &DenseMeasure, probs: Vec<f64>) -> DenseMeasure {
        let total = (self.mass() + self.escaped) * (other.mass() + other.escaped);
        let kept: f64 = probs.iter().sum();
        DenseMeasure { probs, escaped: (total - kept).max(0.0) }
    }

    /// `n`-fold convolution power by repeated squaring. Truncation only drops mass above `K`,
    /// so the stored values are those of the untruncated power, up to round-off.
    pub fn power(&self, n: u32) -> DenseMeasure {
        let mut result = DenseMeasure::dirac(0, self.k_max());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.convolve_fft(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.convolve_fft(&base);
            }
        }
        result
    }

    /// Powers `ν^{*n}` for every `n` in the ascending list, reusing one chain of squares.
    pub fn powers(&self, ns: &[u32]) -> Vec<DenseMeasure> {
        let mut squares = vec![self.clone()];
        let mut out = Vec::with_capacity(ns.len());
        let mut current: Option<DenseMeasure> = None;
        let mut at = 0u32;
        for &n in ns {
            assert!(n >= at, "powers expects ascending exponents");
            let mut step = n - at;
            let mut bit = 0;
            while step > 0 {
                if bit == squares.len() {
                    let last = squares.last().expect("nonempty");
                    squares.push(last.convolve_fft(last));
                }
                if step & 1 == 1 {
                    current = Some(match current {
                        None => squares[bit].clone(),
                        Some(c) => c.convolve_fft(&squares[bit]),
                    });
                }
                step >>= 1;
                bit += 1;
            }
            at = n;
            out.push(current.clone().unwrap_or_else(|| DenseMeasure::dirac(0, self.k_max())));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct() {
        let nu = NuGamma::new(1.5, 1e-6).unwrap();
        let d = DenseMeasure::from_nu(&nu, 3000);
        let a = d.convolve_direct(&d).convolve_direct(&d);
        let b = d.convolve_fft(&d).convolve_fft(&d);
        for k in 0..=3000 {
            assert!((a.get(k) - b.get(k)).abs() < 1e-15, "k={k}");
        }
        assert!((a.escaped() - b.escaped()).abs() < 1e-12);
        let c = d.power(3);
        assert!((c.mass() - a.mass()).abs() < 1e-12);
        let ps = d.powers(&[0, 1, 3, 7]);
        assert_eq!(ps[0], DenseMeasure::dirac(0, 3000));
        assert!((ps[2].get(1234) - c.get(1234)).abs() < 1e-15);
        let seven = d.power(7);
        assert!((ps[3].get(2999) - seven.get(2999)).abs() < 1e-15);
    }

    #[test]
    fn trivial_moments() {
        let d = DenseMeasure::dirac(2, 10);
        assert_eq!(d.negative_moment(1.0).unwrap(), 0.5);
        assert_eq!(d.negative_moment(0.0).unwrap(), 1.0);
        assert!(DenseMeasure::dirac(0, 4).negative_moment(1.0).is_err());
    }
}
