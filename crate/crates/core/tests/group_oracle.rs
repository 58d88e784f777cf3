use grigwalk::grig::{ball_sizes, DistanceMap};
use grigwalk::{Gen, GenWord, GroupElement, GroupSpec, OmegaSequence};
use proptest::prelude::*;

/// Letter-by-letter action on a finite vertex, written without sections.
fn bit_rule(omega: &OmegaSequence, word: &str, v: &[u8]) -> Vec<u8> {
    // rows: omega letter, columns: b c d; true = section on the 0-branch is `a`
    const TABLE: [[bool; 3]; 3] = [[true, true, false], [true, false, true], [false, true, true]];
    let mut v = v.to_vec();
    for ch in word.chars() {
        if ch == 'a' {
            v[0] ^= 1;
            continue;
        }
        let col = (ch as u8 - b'b') as usize;
        if let Some(k) = v.iter().position(|&x| x == 0) {
            if TABLE[omega.letter(k) as usize][col] && k + 1 < v.len() {
                v[k + 1] ^= 1;
            }
        }
    }
    v
}

fn all_vertices(depth: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << depth).map(move |m| (0..depth).map(|i| ((m >> i) & 1) as u8).collect())
}

fn word_strategy(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'd']), 0..max)
        .prop_map(|v| v.into_iter().collect())
}

fn omega_strategy() -> impl Strategy<Value = OmegaSequence> {
    (prop::collection::vec(0u8..3, 0..3), prop::collection::vec(0u8..3, 1..4))
        .prop_map(|(pre, per)| OmegaSequence::new(pre, per).unwrap())
}

fn acts_trivially(omega: &OmegaSequence, word: &str, depth: usize) -> bool {
    all_vertices(depth).all(|v| bit_rule(omega, word, &v) == v)
}

#[test]
fn orders_of_small_elements() {
    let spec = GroupSpec::first_group();
    let order = |s: &str| spec.parse(s).unwrap().order(64);
    assert_eq!(order("a"), Some(2));
    assert_eq!(order("b"), Some(2));
    assert_eq!(order("ad"), Some(4));
    assert_eq!(order("ac"), Some(8));
    assert_eq!(order("ab"), Some(16));
    assert_eq!(order("1"), Some(1));
}

#[test]
fn ball_sizes_of_first_group() {
    let sizes = ball_sizes(&GroupSpec::first_group(), 6);
    assert_eq!(&sizes[..4], &[1, 5, 11, 23]);
    for r in 1..=3 {
        for s in 1..=3 {
            assert!(sizes[r + s] <= sizes[r] * sizes[s]);
        }
    }
}

#[test]
fn geodesics_on_small_ball() {
    let spec = GroupSpec::first_group();
    let dm = DistanceMap::new(&spec, 5);
    assert_eq!(dm.distance(&spec.parse("abcd").unwrap()), Some(1));
    assert_eq!(dm.distance(&spec.parse("abab").unwrap()), Some(4));
    assert_eq!(spec.parse("ada").unwrap().geodesic_length(5), Some(3));
}

#[test]
fn sections_relabel_to_first_group() {
    // over the shifted sequence (120) the letter c plays the role of d in (012)
    let spec = GroupSpec::first_group();
    let s = spec.parse("acac").unwrap().sections();
    assert_eq!(s.left.word().to_string(), "ca");
    assert_eq!(s.right.word().to_string(), "ac");
    let shifted = s.left.spec().omega().clone();
    let base = spec.omega().clone();
    for v in all_vertices(9) {
        assert_eq!(bit_rule(&shifted, "ca", &v), bit_rule(&base, "da", &v));
        assert_eq!(bit_rule(&shifted, "ac", &v), bit_rule(&base, "ad", &v));
    }
}

proptest! {
    #[test]
    fn action_matches_bit_rule(omega in omega_strategy(), w in word_strategy(24), bits in prop::collection::vec(0u8..2, 12)) {
        let g = GroupSpec::new(omega.clone()).parse(&w).unwrap();
        prop_assert_eq!(g.act_on_vertex(&bits), bit_rule(&omega, &w, &bits));
    }

    #[test]
    fn word_problem_agrees_with_tree_action(omega in omega_strategy(), w in word_strategy(14)) {
        let g = GroupSpec::new(omega.clone()).parse(&w).unwrap();
        if g.is_trivial() {
            prop_assert!(acts_trivially(&omega, &w, 12));
        } else {
            // a nontrivial element of length <= 14 moves some vertex of depth 12
            prop_assert!(!acts_trivially(&omega, &w, 12));
        }
    }

    #[test]
    fn keys_separate_elements(w1 in word_strategy(10), w2 in word_strategy(10)) {
        let spec = GroupSpec::first_group();
        let (g, h) = (spec.parse(&w1).unwrap(), spec.parse(&w2).unwrap());
        let same = g.multiply(&h.inverse()).unwrap().is_trivial();
        prop_assert_eq!(g.key() == h.key(), same);
        let omega = spec.omega();
        let same_action = all_vertices(11).all(|v| bit_rule(omega, &w1, &v) == bit_rule(omega, &w2, &v));
        prop_assert_eq!(same, same_action);
    }

    #[test]
    fn sections_are_multiplicative(w1 in word_strategy(16), w2 in word_strategy(16)) {
        let spec = GroupSpec::first_group();
        let (g, h) = (spec.parse(&w1).unwrap(), spec.parse(&w2).unwrap());
        let gh = g.multiply(&h).unwrap().sections();
        let (sg, sh) = (g.sections(), h.sections());
        prop_assert_eq!(gh.swap, sg.swap ^ sh.swap);
        for i in 0..2u8 {
            let j = i ^ sg.swap as u8;
            let composed = sg.get(i).multiply(sh.get(j)).unwrap();
            prop_assert_eq!(gh.get(i), &composed);
        }
    }

    #[test]
    fn reduction_preserves_element(w in word_strategy(20)) {
        let spec = GroupSpec::first_group();
        let word = GenWord::parse(&w).unwrap();
        prop_assert!(word.reduced().is_reduced());
        let g = spec.element(&word);
        let bits: Vec<u8> = vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 1];
        prop_assert_eq!(g.act_on_vertex(&bits), bit_rule(spec.omega(), &w, &bits));
        let inv = GroupElement::new(spec.clone(), &word.inverse());
        prop_assert!(g.multiply(&inv).unwrap().is_trivial());
    }

    #[test]
    fn section_lengths_bounded(w in word_strategy(40)) {
        let g = GroupSpec::first_group().parse(&w).unwrap();
        let n = g.word_length();
        let s = g.sections();
        prop_assert!(s.left.word_length() + s.right.word_length() <= n + 1);
        prop_assert_eq!(s.swap, g.word().letters().iter().filter(|&&x| x == Gen::A).count() % 2 == 1);
    }
}
