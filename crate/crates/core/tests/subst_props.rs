use std::collections::BTreeSet;
use std::sync::Arc;

use grigwalk::boundary::{min_stabilizer_word_length, standard_generators, stabilizer_words};
use grigwalk::grig::{explore_ball, ball_sizes};
use grigwalk::subst::*;
use grigwalk::walk::literal_inverted_orbit;
use grigwalk::wreath::{self, FiniteGroupA, WreathElement};
use grigwalk::{Element, Gen, GenWord, GroupElement, GroupSpec, GroupTuple, Point, ProductPoint, Ray};
use proptest::prelude::*;

fn pair_specs() -> [GroupSpec; 2] {
    let s = GroupSpec::first_group();
    [s.clone(), s]
}

fn letters(s: &str) -> Vec<Gen> {
    GenWord::parse(s).unwrap().0
}

fn tuple(spec: &GroupSpec, g: Gen) -> GroupTuple {
    GroupTuple::diagonal(&spec.generator(g), 2)
}

#[test]
fn zeta_by_hand() {
    assert_eq!(zeta(&PairWord::parse("ad").unwrap()).to_string(), "acac");
    assert!(zeta(&PairWord::default()).is_empty());
    let two = zeta(&zeta(&PairWord::parse("ad").unwrap()));
    assert_eq!(two.to_string(), "abababab");
    // ζ(abababab) = (abadac)^4, then ζ of that: 4·(6 + 4 + 4) letters... counted by blocks
    let three = zeta(&two);
    assert_eq!(three.to_string(), "abadac".repeat(4));
    assert_eq!(three.len(), 24);
    assert_eq!(PairWord::parse("abadac").unwrap().counts(), [1, 1, 1]);
    assert!(PairWord::parse("aba").is_err());
    assert!(PairWord::parse("abba").is_err());
}

#[test]
fn lengths_follow_the_matrix() {
    let lengths = w_n_lengths(12);
    assert_eq!(&lengths[..4], &[2, 4, 8, 24]);
    for n in 0..=10 {
        let w = w_n(n, 1 << 20).unwrap();
        assert!(w.matrix_consistent);
        assert_eq!(w.word.len() as u64, lengths[n]);
        assert_eq!(2 * w.counts.iter().sum::<u64>(), lengths[n]);
    }
    assert!(matches!(w_n(12, 10_000), Err(grigwalk::Error::BudgetExceeded(_))));
}

#[test]
fn growth_rate_is_two_over_eta() {
    let e = eta();
    assert!((e * e * e + e * e + e - 2.0).abs() < 1e-12);
    assert!((e - 0.8105).abs() < 1e-3);
    let rate = 2.0 / e;
    // λ = 2/η is the root of λ³ − λ² − 2λ − 4
    assert!((rate.powi(3) - rate.powi(2) - 2.0 * rate - 4.0).abs() < 1e-9);
    let lengths = w_n_lengths(12);
    for n in 6..=12 {
        let r = lengths[n] as f64 / lengths[n - 1] as f64;
        assert!((r / rate - 1.0).abs() < 0.05, "n={n} ratio {r}");
    }
    let r10 = lengths[10] as f64 / lengths[9] as f64;
    assert!((r10 / rate - 1.0).abs() < 0.02);
    assert!((dominant_eigenvalue(200) - rate).abs() < 1e-9);
}

#[test]
fn inverted_orbit_anchors() {
    let specs = pair_specs();
    let base = alternating_base();
    let v = verify_distinct_inverted_orbit(&specs, &base, &letters("acac")).unwrap();
    assert_eq!(v.delta, 5);
    assert!(v.injective);
    let v = verify_distinct_inverted_orbit(&specs, &base, &[Gen::A, Gen::A]).unwrap();
    assert!(v.delta < 3);
    assert_eq!(v.fixing_subword, Some((0, 2)));
    // acac via literal application of the four letters
    let spec = &specs[0];
    let word: Vec<GroupTuple> = letters("acac").into_iter().map(|g| tuple(spec, g)).collect();
    assert_eq!(literal_inverted_orbit(&base, &word).len(), 5);
}

#[test]
fn substitution_words_are_injective() {
    let specs = pair_specs();
    let base = alternating_base();
    for n in 0..=8 {
        let w = w_n(n, 1 << 16).unwrap().word.flatten();
        let v = verify_distinct_inverted_orbit(&specs, &base, &w).unwrap();
        assert!(v.injective, "n={n}");
        assert_eq!(v.delta, w.len() + 1);
    }
    // literal orbits agree for the small ones
    let spec = &specs[0];
    for n in 0..=3 {
        let w: Vec<GroupTuple> = w_n(n, 1 << 16).unwrap().word.flatten().into_iter().map(|g| tuple(spec, g)).collect();
        assert_eq!(literal_inverted_orbit(&base, &w).len(), w.len() + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn delta_matches_literal_orbit(idx in prop::collection::vec(0usize..4, 0..14)) {
        let specs = pair_specs();
        let base = alternating_base();
        let word: Vec<Gen> = idx.iter().map(|&i| Gen::ALL[i]).collect();
        let v = verify_distinct_inverted_orbit(&specs, &base, &word).unwrap();
        let tuples: Vec<GroupTuple> = word.iter().map(|&g| tuple(&specs[0], g)).collect();
        prop_assert_eq!(v.delta, literal_inverted_orbit(&base, &tuples).len());
        prop_assert!(v.delta <= word.len() + 1);
    }

    #[test]
    fn subwords_of_injective_words_stay_injective(n in 0usize..200, cut in 0usize..50) {
        let w = injective_word(n).unwrap();
        let lo = cut.min(w.len());
        let v = verify_distinct_inverted_orbit(&pair_specs(), &alternating_base(), &w[lo..]).unwrap();
        prop_assert!(v.injective);
    }
}

#[test]
fn sections_of_substitution_words() {
    let spec = GroupSpec::first_group();
    for n in 1..=8 {
        let c = section_identity(&spec, n, 1 << 16).unwrap();
        assert!(c.holds(), "{c:?}");
    }
    assert!(section_identity(&spec, 0, 100).is_err());
}

fn fixes_by_rays(specs: &[GroupSpec], base: &ProductPoint, w: &GenWord) -> bool {
    base.0.iter().zip(specs).all(|(r, s)| r.apply(&s.element(w)) == *r)
}

#[test]
fn short_stabilizer_words() {
    let specs = pair_specs();
    let base = alternating_base();
    assert_eq!(min_stabilizer_search(&specs, &base, 2).unwrap().min_length, None);
    for g in Gen::ALL {
        assert!(!fixes_by_rays(&specs, &base, &GenWord(vec![g])));
    }
    let r = min_stabilizer_search(&specs, &base, 12).unwrap();
    for w in &r.witnesses {
        let w = GenWord::parse(w).unwrap();
        assert!(fixes_by_rays(&specs, &base, &w), "{w}");
        assert!(specs.iter().any(|s| !s.element(&w).is_trivial()));
    }
    // the two shortest fixers are a x a d a x a
    assert_eq!(r.min_length, Some(7));
    assert_eq!(&r.witnesses[..2], &["abadaba".to_string(), "acadaca".to_string()]);
    assert!(r.witnesses.iter().filter(|w| w.len() == 7).all(|w| in_short_family(&letters(w))));
    assert_eq!(r.min_length_outside_family, Some(9));
    assert_eq!(min_stabilizer_word_length(&specs, &base, 9), Some(7));
    let slow: Vec<String> = stabilizer_words(&specs, &base, 9).iter().map(|w| w.to_string()).collect();
    let fast: Vec<String> = r.witnesses.iter().filter(|w| w.len() <= 9).cloned().collect();
    assert_eq!(slow.iter().collect::<BTreeSet<_>>(), fast.iter().collect::<BTreeSet<_>>());
    assert!(min_stabilizer_search(&specs, &base, 15).is_err());
}

#[test]
fn short_family_membership() {
    assert!(in_short_family(&letters("abadaba")));
    assert!(in_short_family(&letters("cacadacac")));
    assert!(in_short_family(&letters("dabadabad")));
    assert!(!in_short_family(&letters("babadabab")));
    assert!(!in_short_family(&letters("adadada")));
    assert!(!in_short_family(&letters("cabadabad")));
}

#[test]
fn wreath_standard_generators() {
    let spec = GroupSpec::first_group();
    let c2 = Arc::new(FiniteGroupA::cyclic(2));
    let rho = Ray::parse("|01").unwrap();
    let s = wreath::standard_generators(&c2, &[1], &standard_generators(&spec), spec.identity(), std::slice::from_ref(&rho))
        .unwrap();
    assert_eq!(s.len(), 5);
    assert_eq!(s[0].1.lamp_at(&rho), 1);

    let specs = pair_specs();
    let id = GroupTuple::identity(&specs);
    let mut factorwise = Vec::new();
    for f in 0..2 {
        for g in Gen::ALL {
            let mut parts = id.0.clone();
            parts[f] = specs[f].generator(g);
            factorwise.push((format!("{}{f}", g.to_char()), GroupTuple::new(parts)));
        }
    }
    let s = wreath::standard_generators(&c2, &[1], &factorwise, id.clone(), &[alternating_base()]).unwrap();
    assert_eq!(s.len(), 9);

    let c3 = Arc::new(FiniteGroupA::cyclic(3));
    let s = wreath::standard_generators(&c3, &[1], &standard_generators(&spec), spec.identity(), std::slice::from_ref(&rho))
        .unwrap();
    assert_eq!(s[0].1.order(10), Some(3));

    let trivial = Arc::new(FiniteGroupA::cyclic(1));
    assert!(wreath::standard_generators(&trivial, &[0], &standard_generators(&spec), spec.identity(), &[rho.clone()])
        .is_err());
    assert!(wreath::standard_generators::<Ray>(&c2, &[1], &[], spec.identity(), &[rho]).is_err());
}

#[test]
fn binary_trees() {
    let c2 = Arc::new(FiniteGroupA::cyclic(2));
    let t = tree_embedding(0, &c2, 0, 1).unwrap();
    assert_eq!(t.len(), 1);
    assert!(t.levels[0][0].is_identity());
    let t = tree_embedding(2, &c2, 0, 1).unwrap();
    assert_eq!(t.len(), 7);
    let t = tree_embedding(8, &c2, 0, 1).unwrap();
    assert_eq!(t.len(), 511);
    assert_eq!(t.levels[8].len(), 256);
    // a leaf has lamps at distinct points, one per factor carrying a nontrivial value
    let leaf: &WreathElement<ProductPoint> = t.levels[8].last().unwrap();
    assert_eq!(leaf.lamps().len(), 8);
    let c3 = Arc::new(FiniteGroupA::cyclic(3));
    assert_eq!(tree_embedding(5, &c3, 1, 2).unwrap().len(), 63);
    assert!(tree_embedding(3, &c2, 1, 1).is_err());
}

#[test]
fn a_fixing_subword_makes_leaves_collide() {
    let spec = GroupSpec::first_group();
    let c2 = Arc::new(FiniteGroupA::cyclic(2));
    let base = alternating_base();
    let id = GroupTuple::identity(&pair_specs());
    let step = |v: u8, g: Gen| {
        WreathElement::lamp(&c2, id.clone(), base.clone(), v).multiply(&WreathElement::from_base(&c2, tuple(&spec, g)))
    };
    // abadaba fixes the basepoint, so the lamps of the first and last factors share a point
    let mut word = letters("abadaba");
    word.push(Gen::C);
    let prod = |bits: &[u8]| {
        word.iter().zip(bits).fold(WreathElement::from_base(&c2, id.clone()), |acc, (&g, &v)| acc.multiply(&step(v, g)))
    };
    let x = prod(&[1, 0, 0, 0, 0, 0, 0, 1]);
    assert!(x.lamps().is_empty());
    assert_eq!(x.canonical_key(), prod(&[0; 8]).canonical_key());
}

fn ray_gens(spec: &GroupSpec) -> Vec<(String, GroupElement)> {
    standard_generators(spec)
}

#[test]
fn orbit_set_counts_anchors() {
    let spec = GroupSpec::first_group();
    let rho = Ray::parse("|01").unwrap();
    let gens = ray_gens(&spec);
    let moved: BTreeSet<Ray> = gens.iter().map(|(_, g)| rho.act(g)).filter(|x| *x != rho).collect();
    let v = orbit_set_counts(&rho, &gens, 1, OrbitMode::Inverted).unwrap();
    assert_eq!(v[2], moved.len() as u64);
    assert_eq!(v[1], 1);
    for n in 1..=6 {
        let d = orbit_set_counts(&rho, &gens, n, OrbitMode::Direct).unwrap();
        for (k, &c) in d.iter().enumerate() {
            assert!(c <= 4u64.pow(2 * k as u32), "n={n} k={k}");
        }
        // direct orbits are connected sets containing ρ, so a line allows at most k of them
        for (k, &c) in d.iter().enumerate().skip(1) {
            assert!(c <= k as u64);
        }
    }
    assert!(orbit_set_counts(&rho, &gens, 13, OrbitMode::Inverted).is_err());
}

#[test]
fn inverted_pairs_grow_with_stabilizer_generators() {
    let spec = GroupSpec::first_group();
    let rho = Ray::parse("|01").unwrap();
    let mut gens = ray_gens(&spec);
    let plain: Vec<u64> = (1..=7).map(|n| orbit_set_counts(&rho, &gens, n, OrbitMode::Inverted).unwrap()[2]).collect();
    assert!(plain.iter().all(|&c| c <= 3));
    for w in ["d", "aba"] {
        let g = spec.parse(w).unwrap();
        assert_eq!(rho.act(&g), rho);
        gens.push((w.to_string(), g));
    }
    let aug: Vec<u64> = (1..=7).map(|n| orbit_set_counts(&rho, &gens, n, OrbitMode::Inverted).unwrap()[2]).collect();
    for (i, &c) in aug.iter().enumerate() {
        assert!(c > (i + 1) as u64, "n={} v={c}", i + 1);
    }
    assert!(aug.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn v_plus_against_tuples() {
    let spec = GroupSpec::first_group();
    let mut norms = Vec::new();
    explore_ball(&spec, 4, |_, _, r| {
        norms.push(r);
        true
    });
    for n in 0..=4 {
        for k_max in 0..=3 {
            let mut count: u128 = 1;
            let inside: Vec<usize> = norms.iter().copied().filter(|&r| r <= n).collect();
            let mut partial: Vec<usize> = vec![0];
            for _ in 0..k_max {
                let mut next = Vec::new();
                for &s in &partial {
                    for &r in &inside {
                        if s + r <= n {
                            next.push(s + r);
                        }
                    }
                }
                count += next.len() as u128;
                partial = next;
            }
            assert_eq!(v_plus(&spec, n, k_max), count, "n={n} k={k_max}");
        }
    }
    let balls = ball_sizes(&spec, 6);
    assert_eq!(v_plus(&spec, 6, 1), 1 + balls[6] as u128);
    // subexponential: per-letter growth shrinks when k is held small
    let a = (v_plus(&spec, 6, 2) as f64).ln() / 6.0;
    assert!(a < (4.0f64).ln());
}
