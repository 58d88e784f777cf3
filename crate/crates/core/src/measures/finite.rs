use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GroupTuple};
use crate::error::{Error, Result};
use crate::grig::{Gen, GroupElement, GroupSpec};

/// Tolerance on `Σ weights + slack = 1`.
pub const MASS_TOL: f64 = 1e-12;

/// Atoms per work unit in parallel convolution; fixed so results do not depend on the worker count.
const CHUNK: usize = 512;

/// A finitely supported sub-probability measure; `slack` is the mass dropped by truncation.
#[derive(Clone, Debug)]
pub struct FiniteMeasure<E: Element> {
    atoms: BTreeMap<E::Key, (E, f64)>,
    slack: f64,
}

/// Serializable form: `{"atoms": [[label, weight], ...], "slack": r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub atoms: Vec<(String, f64)>,
    pub slack: f64,
}

fn insert_atom<E: Element>(map: &mut BTreeMap<E::Key, (E, f64)>, key: E::Key, e: E, w: f64) {
    match map.get_mut(&key) {
        Some((rep, acc)) => {
            *acc += w;
            if e.size() < rep.size() {
                *rep = e;
            }
        }
        None => {
            map.insert(key, (e, w));
        }
    }
}

impl<E: Element> FiniteMeasure<E> {
    /// Merges duplicate elements; the missing mass `1 − Σw` becomes slack.
    pub fn new(atoms: Vec<(E, f64)>) -> Result<FiniteMeasure<E>> {
        let mut map = BTreeMap::new();
        let mut total = 0.0;
        for (e, w) in atoms {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMeasure(format!("weight {w} for {}", e.label())));
            }
            if w == 0.0 {
                continue;
            }
            total += w;
            insert_atom(&mut map, e.key(), e, w);
        }
        if total > 1.0 + MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total} exceeds 1")));
        }
        Ok(FiniteMeasure { atoms: map, slack: (1.0 - total).max(0.0) })
    }

    /// A probability measure; the weights must sum to one.
    pub fn probability(atoms: Vec<(E, f64)>) -> Result<FiniteMeasure<E>> {
        let m = FiniteMeasure::new(atoms)?;
        if m.slack > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {} is not 1", m.mass())));
        }
        Ok(FiniteMeasure { slack: 0.0, ..m })
    }

    pub fn dirac(e: E) -> FiniteMeasure<E> {
        FiniteMeasure::new(vec![(e, 1.0)]).expect("unit mass")
    }

    pub fn mass(&self) -> f64 {
        self.atoms.values().map(|(_, w)| w).sum()
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn weight_of(&self, e: &E) -> f64 {
        self.atoms.get(&e.key()).map_or(0.0, |(_, w)| *w)
    }

    pub fn weight(&self, key: &E::Key) -> f64 {
        self.atoms.get(key).map_or(0.0, |(_, w)| *w)
    }

    /// Atoms in key order: `(key, representative, weight)`.
    pub fn iter(&self) -> impl Iterator<Item = (&E::Key, &E, f64)> {
        self.atoms.iter().map(|(k, (e, w))| (k, e, *w))
    }

    pub fn atoms(&self) -> Vec<(E, f64)> {
        self.atoms.values().cloned().collect()
    }

    /// `μ̌(g) = μ(g⁻¹)`.
    pub fn reflected(&self) -> FiniteMeasure<E> {
        let mut map = BTreeMap::new();
        for (e, w) in self.atoms.values() {
            let inv = e.inverse();
            insert_atom(&mut map, inv.key(), inv, *w);
        }
        FiniteMeasure { atoms: map, slack: self.slack }
    }

    /// `μ * ν`; the product of supports is enumerated exactly.
    pub fn convolve(&self, other: &FiniteMeasure<E>) -> FiniteMeasure<E> {
        self.convolve_within(other, usize::MAX).expect("unbounded budget")
    }

    /// As [`convolve`](Self::convolve), failing if the result would exceed `budget` atoms.
    pub fn convolve_within(&self, other: &FiniteMeasure<E>, budget: usize) -> Result<FiniteMeasure<E>> {
        let left: Vec<&(E, f64)> = self.atoms.values().collect();
        let right: Vec<&(E, f64)> = other.atoms.values().collect();
        let partials: Vec<BTreeMap<E::Key, (E, f64)>> = left
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut map = BTreeMap::new();
                for (g, wg) in chunk.iter().map(|x| (&x.0, x.1)) {
                    for (h, wh) in right.iter().map(|x| (&x.0, x.1)) {
                        let gh = g.compose(h);
                        insert_atom(&mut map, gh.key(), gh, wg * wh);
                    }
                }
                map
            })
            .collect();
        let mut atoms = BTreeMap::new();
        for part in partials {
            for (k, (e, w)) in part {
                insert_atom(&mut atoms, k, e, w);
            }
            if atoms.len() > budget {
                return Err(Error::BudgetExceeded(format!("convolution support above {budget} atoms")));
            }
        }
        let mass: f64 = atoms.values().map(|(_, w)| w).sum();
        Ok(FiniteMeasure { atoms, slack: (1.0 - mass).max(0.0) })
    }

    /// Shannon entropy in nats of the atoms; slack is excluded.
    pub fn entropy(&self) -> f64 {
        self.atoms.values().map(|(_, w)| if *w > 0.0 { -w * w.ln() } else { 0.0 }).sum()
    }

    /// Total-variation distance `½ Σ |μ(g) − ν(g)|` over the atoms.
    pub fn total_variation(&self, other: &FiniteMeasure<E>) -> f64 {
        let mut d = 0.0;
        for (k, (_, w)) in &self.atoms {
            d += (w - other.weight(k)).abs();
        }
        for (k, (_, w)) in &other.atoms {
            if !self.atoms.contains_key(k) {
                d += w;
            }
        }
        0.5 * d
    }

    /// `Σ_g μ(g) f(g)`.
    pub fn expect(&self, f: impl Fn(&E) -> f64) -> f64 {
        self.atoms.values().map(|(e, w)| w * f(e)).sum()
    }

    /// Convex combination `Σ c_j μ_j`.
    pub fn mixture(parts: &[(f64, &FiniteMeasure<E>)]) -> FiniteMeasure<E> {
        let mut atoms = BTreeMap::new();
        let mut slack = 0.0;
        for (c, m) in parts {
            for (k, (e, w)) in &m.atoms {
                insert_atom(&mut atoms, k.clone(), e.clone(), c * w);
            }
            slack += c * m.slack;
        }
        FiniteMeasure { atoms, slack }
    }

    pub fn to_record(&self) -> MeasureRecord {
        MeasureRecord { atoms: self.atoms.values().map(|(e, w)| (e.label(), *w)).collect(), slack: self.slack }
    }
}

impl FiniteMeasure<GroupElement> {
    /// `μ(1)=5/12, μ(a)=1/3, μ(b)=μ(c)=μ(d)=1/12`.
    pub fn kaimanovich(spec: &GroupSpec) -> FiniteMeasure<GroupElement> {
        let mut atoms = vec![(spec.identity(), 5.0 / 12.0), (spec.generator(Gen::A), 1.0 / 3.0)];
        atoms.extend(Gen::KLEIN.iter().map(|&g| (spec.generator(g), 1.0 / 12.0)));
        FiniteMeasure::probability(atoms).expect("weights sum to one")
    }

    /// Uniform measure on the given words.
    pub fn uniform(spec: &GroupSpec, words: &[&str]) -> Result<FiniteMeasure<GroupElement>> {
        let w = 1.0 / words.len() as f64;
        let atoms = words.iter().map(|s| Ok((spec.parse(s)?, w))).collect::<Result<Vec<_>>>()?;
        FiniteMeasure::probability(atoms)
    }

    /// Parses `[(word, weight)]`.
    pub fn from_words(spec: &GroupSpec, atoms: &[(String, f64)]) -> Result<FiniteMeasure<GroupElement>> {
        let atoms = atoms.iter().map(|(s, w)| Ok((spec.parse(s)?, *w))).collect::<Result<Vec<_>>>()?;
        FiniteMeasure::probability(atoms)
    }
}

/// `μ₁ × μ₂ × …` on the direct product.
pub fn product_measure(factors: &[FiniteMeasure<GroupElement>]) -> FiniteMeasure<GroupTuple> {
    let mut acc: Vec<(Vec<GroupElement>, f64)> = vec![(Vec::new(), 1.0)];
    for m in factors {
        acc = acc
            .into_iter()
            .flat_map(|(parts, w)| {
                m.atoms.values().map(move |(g, wg)| {
                    let mut p = parts.clone();
                    p.push(g.clone());
                    (p, w * wg)
                })
            })
            .collect();
    }
    FiniteMeasure::new(acc.into_iter().map(|(p, w)| (GroupTuple(p), w)).collect()).expect("product of measures")
}
