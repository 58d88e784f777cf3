//! Walks induced on linear Schreier graphs, in integer coordinates.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::boundary::{LineOrbit, Ray};
use crate::error::{Error, Result};
use crate::grig::{GroupElement, GroupSpec};
use crate::measures::FiniteMeasure;

/// A finite measure pushed onto a [`LineOrbit`] window: one move table per atom.
#[derive(Clone, Debug)]
pub struct LineChain {
    orbit: LineOrbit,
    atoms: Vec<(GroupElement, f64)>,
    /// `moves[j][z − lo]`: image of `z` under atom `j`.
    moves: Vec<Vec<Option<i64>>>,
    cumulative: Vec<f64>,
}

impl LineChain {
    pub fn new(spec: &GroupSpec, basepoint: &Ray, mu: &FiniteMeasure<GroupElement>, radius: usize) -> Result<LineChain> {
        if mu.slack() > crate::measures::MASS_TOL {
            return Err(Error::InvalidMeasure("walk measure must have total mass 1".into()));
        }
        let orbit = LineOrbit::build(spec, basepoint, radius)?;
        let atoms = mu.atoms();
        let (lo, hi) = orbit.bounds();
        let moves = atoms
            .iter()
            .map(|(g, _)| (lo..=hi).map(|z| orbit.step_word(z, g.word().letters())).collect())
            .collect();
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|(_, w)| {
                acc += w;
                acc
            })
            .collect();
        Ok(LineChain { orbit, atoms, moves, cumulative })
    }

    pub fn orbit(&self) -> &LineOrbit {
        &self.orbit
    }

    pub fn atoms(&self) -> &[(GroupElement, f64)] {
        &self.atoms
    }

    /// Longest atom word; bounds the distance moved per step.
    pub fn max_step(&self) -> usize {
        self.atoms.iter().map(|(g, _)| g.word_length()).max().unwrap_or(0)
    }

    #[inline]
    pub fn apply(&self, atom: usize, z: i64) -> Option<i64> {
        let (lo, hi) = self.orbit.bounds();
        if z < lo || z > hi {
            return None;
        }
        self.moves[atom][(z - lo) as usize]
    }

    #[inline]
    pub fn sample_atom<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>() * self.cumulative.last().copied().unwrap_or(1.0);
        self.cumulative.partition_point(|&c| c <= u).min(self.atoms.len() - 1)
    }

    /// Transition law from `z` as displacement → probability, or `None` if some atom leaves the window.
    pub fn kernel_at(&self, z: i64) -> Option<BTreeMap<i64, f64>> {
        let mut k = BTreeMap::new();
        for (j, (_, w)) in self.atoms.iter().enumerate() {
            *k.entry(self.apply(j, z)? - z).or_insert(0.0) += w;
        }
        Some(k)
    }

    /// The kernel from even and from odd coordinates, checked to be the same at every
    /// window point where it is defined.
    pub fn parity_kernel(&self) -> Result<[BTreeMap<i64, f64>; 2]> {
        let (lo, hi) = self.orbit.bounds();
        let mut found: [Option<BTreeMap<i64, f64>>; 2] = [None, None];
        for z in lo..=hi {
            let Some(k) = self.kernel_at(z) else { continue };
            let slot = &mut found[z.rem_euclid(2) as usize];
            match slot {
                None => *slot = Some(k),
                Some(prev) => {
                    let same = prev.len() == k.len()
                        && prev.iter().zip(&k).all(|((d1, p1), (d2, p2))| d1 == d2 && (p1 - p2).abs() < 1e-12);
                    if !same {
                        return Err(Error::InvalidMeasure(format!("induced kernel is not homogeneous at coordinate {z}")));
                    }
                }
            }
        }
        match found {
            [Some(e), Some(o)] => Ok([e, o]),
            _ => Err(Error::InvalidParameter("window too small to read the induced kernel".into())),
        }
    }

    /// The induced walk as a lazy simple walk `±1` with probability `p` each, if it is one.
    pub fn lazy_line(&self) -> Result<LazyLine> {
        let [even, odd] = self.parity_kernel()?;
        let p = even.get(&1).copied().unwrap_or(0.0);
        let ok = |k: &BTreeMap<i64, f64>| {
            k.keys().all(|d| d.abs() <= 1)
                && (k.get(&1).copied().unwrap_or(0.0) - p).abs() < 1e-12
                && (k.get(&-1).copied().unwrap_or(0.0) - p).abs() < 1e-12
        };
        if !(ok(&even) && ok(&odd)) || p <= 0.0 {
            return Err(Error::InvalidMeasure("induced walk is not a lazy symmetric nearest-neighbour walk".into()));
        }
        Ok(LazyLine { p_move: p })
    }

    /// `P(z_i = 0)` for `i = 0..=i_max` by pushing the distribution across the window.
    pub fn return_probabilities(&self, i_max: usize) -> Result<Vec<f64>> {
        let (lo, hi) = self.orbit.bounds();
        let reach = (i_max * self.max_step()) as i64;
        if -reach < lo || reach > hi {
            return Err(Error::BudgetExceeded(format!("window [{lo},{hi}] does not contain radius {reach}")));
        }
        let width = (hi - lo + 1) as usize;
        let mut dist = vec![0.0; width];
        dist[(-lo) as usize] = 1.0;
        let mut out = vec![1.0];
        let (mut a, mut b) = (-lo as usize, -lo as usize);
        for _ in 0..i_max {
            let mut next = vec![0.0; width];
            let (mut na, mut nb) = (usize::MAX, 0);
            for idx in a..=b {
                let p = dist[idx];
                if p == 0.0 {
                    continue;
                }
                let z = lo + idx as i64;
                for (j, (_, w)) in self.atoms.iter().enumerate() {
                    let t = (self.apply(j, z).expect("inside window") - lo) as usize;
                    next[t] += p * w;
                    na = na.min(t);
                    nb = nb.max(t);
                }
            }
            dist = next;
            a = na;
            b = nb;
            out.push(dist[(-lo) as usize]);
        }
        Ok(out)
    }
}

/// Lazy simple random walk on `Z`: `±1` with probability `p_move` each, else stay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LazyLine {
    pub p_move: f64,
}

impl LazyLine {
    /// Exact draw of the displacement after `i` steps.
    pub fn sample_displacement<R: Rng + ?Sized>(&self, i: u64, rng: &mut R) -> i64 {
        if i == 0 {
            return 0;
        }
        let moves = Binomial::new(i, 2.0 * self.p_move).expect("valid binomial").sample(rng);
        if moves == 0 {
            return 0;
        }
        let ups = Binomial::new(moves, 0.5).expect("valid binomial").sample(rng);
        2 * ups as i64 - moves as i64
    }

    /// `P(z_i = 0)` for `i = 0..=i_max` from the three-term recurrence for central coefficients
    /// of `(s + p x + p/x)^i`: `i c_i = s(2i−1)c_{i−1} − (s² − 4p²)(i−1)c_{i−2}`.
    pub fn return_probabilities(&self, i_max: usize) -> Vec<f64> {
        let p = self.p_move;
        let s = 1.0 - 2.0 * p;
        let mut c = Vec::with_capacity(i_max + 1);
        c.push(1.0);
        if i_max >= 1 {
            c.push(s);
        }
        for i in 2..=i_max {
            let fi = i as f64;
            let v = (s * (2.0 * fi - 1.0) * c[i - 1] - (s * s - 4.0 * p * p) * (fi - 1.0) * c[i - 2]) / fi;
            c.push(v);
        }
        c
    }
}
