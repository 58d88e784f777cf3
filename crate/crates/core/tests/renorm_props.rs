use grigwalk::measures::FiniteMeasure;
use grigwalk::renorm::*;
use grigwalk::walk::exact_entropy_series;
use grigwalk::{GroupElement, GroupSpec};

fn spec() -> GroupSpec {
    GroupSpec::first_group()
}

fn perturbed(s: &GroupSpec) -> FiniteMeasure<GroupElement> {
    FiniteMeasure::from_words(
        s,
        &[("1".into(), 5.0 / 12.0 + 1.0 / 30.0), ("a".into(), 0.3), ("b".into(), 1.0 / 12.0), ("c".into(), 1.0 / 12.0), ("d".into(), 1.0 / 12.0)],
    )
    .unwrap()
}

#[test]
fn identity_renormalises_to_itself() {
    let r = renormalize(&FiniteMeasure::dirac(spec().identity()), &spec(), 5).unwrap();
    assert_eq!(r.measure.support_size(), 1);
    assert_eq!(r.measure.weight_of(&spec().shift().identity()), 1.0);
    assert_eq!(r.stopping[1], 1.0);
    assert_eq!(r.tail, 0.0);
    assert!(renormalize(&FiniteMeasure::dirac(spec().identity()), &spec(), 0).is_err());
}

#[test]
fn kaimanovich_identity() {
    let mu = FiniteMeasure::kaimanovich(&spec());
    let r = renormalize(&mu, &spec(), 40).unwrap();
    assert!(r.tail <= 1e-4, "tail {}", r.tail);
    assert!((r.measure.mass() + r.tail - 1.0).abs() < 1e-12);
    let target = FiniteMeasure::mixture(&[
        (0.5, &FiniteMeasure::dirac(spec().shift().identity())),
        (0.5, &FiniteMeasure::kaimanovich(&spec().shift())),
    ]);
    let tv = r.measure.total_variation(&target);
    assert!(tv <= r.tail + 1e-9, "tv {tv} tail {}", r.tail);
    assert!((r.stopping[1] - 2.0 / 3.0).abs() < 1e-15);
    let oracle = flip_return_law(swap_mass(&mu), 40);
    for (a, b) in r.stopping.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn self_similar_sequences() {
    let seq = SelfSimilarSeq::constant(&spec(), FiniteMeasure::kaimanovich, 0.5, 3).unwrap();
    let rep = verify_self_similar(&seq, 3, 40, 1e-9).unwrap();
    assert!(rep.holds());
    assert_eq!(rep.levels.len(), 3);
    let trivial = SelfSimilarSeq::constant(&spec(), |s| FiniteMeasure::dirac(s.identity()), 1.0, 2).unwrap();
    assert!(verify_self_similar(&trivial, 2, 10, 1e-12).unwrap().holds());
    let off = SelfSimilarSeq::constant(&spec(), perturbed, 0.5, 1).unwrap();
    let rep = verify_self_similar(&off, 1, 40, 1e-9).unwrap();
    assert!(!rep.holds());
    assert!(rep.levels[0].tv_gap > 1e-3);
}

#[test]
fn total_variation_is_a_metric_on_renormalised_measures() {
    let a = renormalize(&FiniteMeasure::kaimanovich(&spec()), &spec(), 30).unwrap().measure;
    let b = renormalize(&perturbed(&spec()), &spec(), 30).unwrap().measure;
    let c = FiniteMeasure::kaimanovich(&spec().shift());
    let (ab, bc, ac) = (a.total_variation(&b), b.total_variation(&c), a.total_variation(&c));
    assert!(ab >= 0.0 && (ab - b.total_variation(&a)).abs() < 1e-15);
    assert!(ac <= ab + bc + 1e-15 && ab <= ac + bc + 1e-15 && bc <= ab + ac + 1e-15);
}

#[test]
fn entropy_exponents() {
    assert!((entropy_exponent(2.0, 0.5) - 0.5).abs() < 1e-15);
    assert!((entropy_exponent(2.0, 0.25) - 1.0 / 3.0).abs() < 1e-15);
    let zero = entropy_bound_experiment(&[0.0; 12], 2.0, 0.5, 10, 0.05);
    assert_eq!(zero.k, 0.0);
    assert!(zero.non_increasing_tail);
    let e = exact_entropy_series(&FiniteMeasure::kaimanovich(&spec()), 10, 1_000_000);
    let rep = entropy_bound_experiment(&e.h, 2.0, 0.5, 10, 0.05);
    assert!(rep.k.is_finite() && rep.k > 0.0);
}
