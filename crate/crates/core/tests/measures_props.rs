use std::collections::HashSet;

use grigwalk::measures::*;
use grigwalk::{Gen, GroupElement, GroupSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Average number of distinct entries over all `n^k` tuples.
fn enumerate_distinct(n: u64, k: u32) -> BigRational {
    let total = n.pow(k);
    let mut sum = 0u64;
    for code in 0..total {
        let mut c = code;
        let mut seen = HashSet::new();
        for _ in 0..k {
            seen.insert(c % n);
            c /= n;
        }
        sum += seen.len() as u64;
    }
    BigRational::new(BigInt::from(sum), BigInt::from(total))
}

#[test]
fn stirling_matches_enumeration() {
    for n in 1..=6u64 {
        for k in 1..=n {
            assert_eq!(stirling_expected(n, k).unwrap().value, enumerate_distinct(n, k as u32), "n={n} k={k}");
        }
    }
    assert_eq!(stirling_expected(10, 5).unwrap().value, enumerate_distinct(10, 5));
    for n in 1..=100u64 {
        for k in 1..=n {
            assert!(stirling_expected(n, k).unwrap().bound_holds, "n={n} k={k}");
        }
    }
}

#[test]
fn entropy_anchors() {
    let spec = GroupSpec::first_group();
    assert_eq!(FiniteMeasure::dirac(spec.identity()).entropy(), 0.0);
    let u = FiniteMeasure::uniform(&spec, &["a", "b", "c", "d"]).unwrap();
    assert!((u.entropy() - 4f64.ln()).abs() < 1e-15);
    let a = FiniteMeasure::uniform(&spec, &["a"]).unwrap();
    let aa = a.convolve(&a);
    assert_eq!(aa.support_size(), 1);
    assert_eq!(aa.weight_of(&spec.identity()), 1.0);
}

#[test]
fn entropy_is_subadditive_for_kaimanovich() {
    let spec = GroupSpec::first_group();
    let mu = FiniteMeasure::kaimanovich(&spec);
    let mut powers = vec![FiniteMeasure::dirac(spec.identity())];
    for _ in 0..7 {
        let next = powers.last().unwrap().convolve(&mu);
        powers.push(next);
    }
    let h: Vec<f64> = powers.iter().map(|m| m.entropy()).collect();
    for m in 1..h.len() {
        for n in 1..h.len() - m {
            assert!(h[m + n] <= h[m] + h[n] + 1e-12, "H({}) > H({m}) + H({n})", m + n);
        }
    }
    for m in &powers {
        assert!((m.mass() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn record_roundtrip() {
    let spec = GroupSpec::first_group();
    let mu = FiniteMeasure::kaimanovich(&spec);
    let json = serde_json::to_string(&mu.to_record()).unwrap();
    let back: MeasureRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, mu.to_record());
    let again = FiniteMeasure::from_words(&spec, &back.atoms).unwrap();
    assert!(again.total_variation(&mu) < 1e-15);
}

fn small_measure() -> impl Strategy<Value = Vec<(String, f64)>> {
    prop::collection::vec(("[abcd]{0,5}", 0.05f64..1.0), 1..5).prop_map(|atoms| {
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        atoms.into_iter().map(|(s, w)| (if s.is_empty() { "1".into() } else { s }, w / total)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative(x in small_measure(), y in small_measure(), z in small_measure()) {
        let spec = GroupSpec::first_group();
        let (x, y, z) = (
            FiniteMeasure::new(x.iter().map(|(s, w)| (spec.parse(s).unwrap(), *w)).collect()).unwrap(),
            FiniteMeasure::new(y.iter().map(|(s, w)| (spec.parse(s).unwrap(), *w)).collect()).unwrap(),
            FiniteMeasure::new(z.iter().map(|(s, w)| (spec.parse(s).unwrap(), *w)).collect()).unwrap(),
        );
        let l = x.convolve(&y).convolve(&z);
        let r = x.convolve(&y.convolve(&z));
        prop_assert_eq!(l.support_size(), r.support_size());
        for (k, _, w) in l.iter() {
            prop_assert!((w - r.weight(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn nu_survival_is_bracketed(x in 1u64..1_000_000_000_000, g in 1.25f64..1.95) {
        let nu = NuGamma::new(g, 1e-2).unwrap();
        let (lo, hi) = nu.survival_bounds(x);
        let s = nu.survival(x);
        prop_assert!(lo <= s * (1.0 + 1e-12) && s <= hi * (1.0 + 1e-12));
    }
}

#[test]
fn nu_tail_accounts_for_mass() {
    for g in [1.3, 1.5, 1.7] {
        let nu = NuGamma::new(g, 1e-3).unwrap();
        assert!(nu.tail_mass() <= nu.eps_tail());
        let head: f64 = nu.alphas(nu.i_max().min(2_000_000) as usize).iter().sum();
        let rest = nu.survival(2_000_000.min(nu.i_max())) - nu.tail_mass();
        assert!((head + rest + nu.tail_mass() - 1.0).abs() < 1e-12, "gamma {g}");
    }
}

#[test]
fn sup_bound_dominates_dense_powers() {
    for g in [1.3, 1.5, 1.7] {
        let nu = NuGamma::new(g, 1e-3).unwrap();
        let d = DenseMeasure::from_nu(&nu, 1 << 14);
        let ns = [1u32, 2, 3, 5, 8];
        for (n, p) in ns.iter().zip(d.powers(&ns)) {
            let (_, sup) = p.sup();
            assert!(sup <= nu.sup_bound(*n), "gamma {g} n {n}");
        }
    }
}

#[test]
fn negative_moment_integral_matches_direct_convolution() {
    let nu = NuGamma::new(1.5, 1e-8).unwrap();
    let d = DenseMeasure::from_nu(&nu, 1 << 18);
    let direct = d.convolve_direct(&DenseMeasure::from_nu(&nu, 1 << 12));
    let squared = d.power(2);
    for delta in [0.5, 1.0, 1.5] {
        let single = nu.negative_moment(1, delta);
        let series: f64 = (1..=1_000_000u64).map(|i| nu.alpha(i) * (i as f64).powf(-delta)).sum();
        assert!((single - series).abs() < 1e-6, "delta {delta}");
        let pair = nu.negative_moment(2, delta);
        let dense = squared.negative_moment(delta).unwrap();
        assert!((pair - dense).abs() < 2e-4 * pair, "delta {delta}: {pair} vs {dense}");
    }
    let small: f64 = (2..=4096).map(|k| direct.get(k) / k as f64).sum();
    let fft: f64 = (2..=4096).map(|k| squared.get(k) / k as f64).sum();
    assert!((small - fft).abs() < 1e-13);
}

#[test]
fn mixture_sampling_edge_cases() {
    let spec = GroupSpec::first_group();
    let id = spec.identity();
    let nu = NuGamma::new(1.5, 1e-2).unwrap();
    let trivial = MixtureMeasure::new(nu.clone(), FiniteMeasure::dirac(id.clone())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (g, i) = trivial.sample_step(&id, &mut rng);
        assert!(g.is_trivial() && i >= 1);
    }
    let a = spec.generator(Gen::A);
    let flip = MixtureMeasure::new(nu, FiniteMeasure::dirac(a.clone())).unwrap();
    for _ in 0..50 {
        let (g, i): (GroupElement, u64) = flip.sample_step(&id, &mut rng);
        assert_eq!(g.is_trivial(), i % 2 == 0);
    }
}
