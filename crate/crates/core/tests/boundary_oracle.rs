use grigwalk::boundary::{diagonal_generators, min_stabilizer_word_length, stabilizer_words, standard_generators};
use grigwalk::{Gen, GroupSpec, LineOrbit, OmegaSequence, ProductPoint, Ray, SchreierGraph};
use proptest::prelude::*;

fn word_strategy(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'd']), 0..max)
        .prop_map(|v| v.into_iter().collect())
}

fn ray_strategy() -> impl Strategy<Value = Ray> {
    (prop::collection::vec(0u8..2, 0..4), prop::collection::vec(0u8..2, 1..5))
        .prop_map(|(pre, per)| Ray::new(pre, per).unwrap())
}

proptest! {
    #[test]
    fn ray_action_extends_vertex_action(r in ray_strategy(), w in word_strategy(30),
                                        pre in prop::collection::vec(0u8..3, 0..2), per in prop::collection::vec(0u8..3, 1..4)) {
        let spec = GroupSpec::new(OmegaSequence::new(pre, per).unwrap());
        let g = spec.parse(&w).unwrap();
        let image = r.apply(&g);
        prop_assert_eq!(image.prefix(40), g.act_on_vertex(&r.prefix(40)));
    }

    #[test]
    fn ray_action_is_a_right_action(r in ray_strategy(), w1 in word_strategy(12), w2 in word_strategy(12)) {
        let spec = GroupSpec::first_group();
        let (g, h) = (spec.parse(&w1).unwrap(), spec.parse(&w2).unwrap());
        prop_assert_eq!(r.apply(&g).apply(&h), r.apply(&g.multiply(&h).unwrap()));
        prop_assert_eq!(r.apply(&g).apply(&g.inverse()), r.clone());
    }

    #[test]
    fn normal_form_is_canonical(pre in prop::collection::vec(0u8..2, 0..5), per in prop::collection::vec(0u8..2, 1..5), k in 1usize..3) {
        let r = Ray::new(pre.clone(), per.clone()).unwrap();
        let mut longer = pre.clone();
        longer.extend(per.iter().copied());
        let per_k: Vec<u8> = per.iter().copied().cycle().take(per.len() * k).collect();
        prop_assert_eq!(Ray::new(longer, per_k).unwrap(), r.clone());
        prop_assert_eq!(r.prefix(20), (0..20).map(|i| if i < pre.len() { pre[i] } else { per[(i - pre.len()) % per.len()] }).collect::<Vec<_>>());
    }
}

#[test]
fn line_orbit_matches_schreier_graph() {
    let spec = GroupSpec::first_group();
    for base in ["|01", "|10", "|001", "0|1"] {
        let rho = Ray::parse(base).unwrap();
        let line = LineOrbit::build(&spec, &rho, 40).unwrap();
        let graph = SchreierGraph::explore(rho.clone(), &standard_generators(&spec), 40, 10_000);
        let (lo, hi) = line.bounds();
        assert_eq!((hi - lo + 1) as usize, graph.len(), "{base}");
        for z in lo..=hi {
            let v = graph.index_of(line.ray(z)).unwrap();
            assert_eq!(graph.distance(v), z.unsigned_abs() as usize);
            for (s, g) in Gen::ALL.iter().enumerate() {
                if let (Some(t), Some(u)) = (line.step(z, *g), graph.neighbor(v, s)) {
                    assert_eq!(graph.vertex(u), line.ray(t));
                }
            }
        }
    }
    let end = LineOrbit::build(&spec, &Ray::parse("|1").unwrap(), 10).unwrap();
    assert_eq!(end.ends(), (true, false));
}

#[test]
fn alternating_ray_loop_labels() {
    // around each vertex: one a-edge, and on the other side two of b, c, d cross while one loops
    let spec = GroupSpec::first_group();
    for base in ["|01", "|10"] {
        let line = LineOrbit::build(&spec, &Ray::parse(base).unwrap(), 30).unwrap();
        for z in -29i64..29 {
            let crossing: Vec<Gen> = Gen::KLEIN.into_iter().filter(|&g| line.step(z, g) != Some(z)).collect();
            assert_eq!(crossing.len(), 2);
            let up_a = z.rem_euclid(2) == 0;
            assert_eq!(line.step(z, Gen::A), Some(if up_a { z + 1 } else { z - 1 }));
        }
    }
    let l1 = LineOrbit::build(&spec, &Ray::parse("|01").unwrap(), 4).unwrap();
    assert_eq!(l1.step(0, Gen::D), Some(0));
    assert_eq!(l1.step(0, Gen::B), Some(-1));
    let l2 = LineOrbit::build(&spec, &Ray::parse("|10").unwrap(), 4).unwrap();
    assert_eq!(l2.step(0, Gen::C), Some(0));
}

#[test]
fn exports_are_deterministic() {
    let spec = GroupSpec::first_group();
    let specs = [spec.clone(), spec];
    let base = ProductPoint::parse("|01,|10").unwrap();
    let g1 = SchreierGraph::explore(base.clone(), &diagonal_generators(&specs), 4, 1000);
    let g2 = SchreierGraph::explore(base, &diagonal_generators(&specs), 4, 1000);
    assert_eq!(g1.to_dot(), g2.to_dot());
    assert_eq!(g1.to_csv(), g2.to_csv());
    assert!(g1.to_dot().starts_with("graph schreier {"));
}

#[test]
fn short_stabilizer_words_of_alternating_pair() {
    let spec = GroupSpec::first_group();
    let specs = [spec.clone(), spec];
    let base = ProductPoint::parse("|01,|10").unwrap();
    let words = stabilizer_words(&specs, &base, 7);
    let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    assert!(shown.contains(&"abadaba".to_string()), "{shown:?}");
    assert_eq!(min_stabilizer_word_length(&specs, &base, 10), Some(7));
}

#[test]
fn loop_labels_along_both_lines() {
    // generator looping at each b,c,d-link, walking outwards from the basepoint
    let spec = GroupSpec::first_group();
    let links = [0i64, 1, -2, 3, -4, 5, -6, 7];
    for (base, expected) in [("|01", "dbcddccd"), ("|10", "cdddbddc")] {
        let line = LineOrbit::build(&spec, &Ray::parse(base).unwrap(), 12).unwrap();
        let got: String = links
            .iter()
            .map(|&z| Gen::KLEIN.into_iter().find(|&g| line.step(z, g) == Some(z)).unwrap().to_char())
            .collect();
        assert_eq!(got, expected, "{base}");
    }
}
