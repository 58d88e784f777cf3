use std::collections::BTreeMap;

use grigwalk::boundary::standard_generators;
use grigwalk::centered::*;
use grigwalk::measures::{product_measure, FiniteMeasure};
use grigwalk::{GroupSpec, LineOrbit, ProductPoint, Ray, SchreierGraph};

fn spec() -> GroupSpec {
    GroupSpec::first_group()
}

fn rho1() -> Ray {
    Ray::parse("|01").unwrap()
}

fn rho2() -> Ray {
    Ray::parse("|10").unwrap()
}

fn line_window(radius: usize) -> Window<Ray> {
    let g = SchreierGraph::explore(rho1(), &standard_generators(&spec()), radius, 100_000);
    Window::from_graph(&g).unwrap()
}

fn torsion() -> FiniteMeasure<grigwalk::GroupElement> {
    FiniteMeasure::uniform(&spec(), &["a", "ab", "ac", "ad"]).unwrap()
}

#[test]
fn dirac_a_gives_two_cycles_and_loops() {
    let w = line_window(10);
    let chain = cycles_from_torsion_measure(&FiniteMeasure::uniform(&spec(), &["a"]).unwrap(), &w, 8).unwrap();
    assert!(chain.cycles.iter().all(|c| c.vertices.len() <= 2));
    assert!(chain.validate().0);
    let q = chain.kernel();
    for (x, row) in q.rows.iter().enumerate() {
        let image = w.index_of(&w.point(x).apply(&spec().parse("a").unwrap()));
        match image {
            Some(y) => assert_eq!(row.get(&y), Some(&1.0)),
            None => assert_eq!(q.out[x], 1.0),
        }
    }
}

#[test]
fn involutions_give_symmetric_kernels() {
    let w = line_window(12);
    let mu = FiniteMeasure::uniform(&spec(), &["a", "b", "c", "d"]).unwrap();
    for g in ["a", "b", "c", "d"] {
        assert_eq!(spec().parse(g).unwrap().order(4), Some(2));
    }
    let chain = cycles_from_torsion_measure(&mu, &w, 4).unwrap();
    assert!(chain.cycles.iter().all(|c| c.vertices.len() <= 2));
    let q = chain.kernel();
    assert!(q.is_symmetric(0.0));
    assert!(chain.symmetrize().max_difference(&q) < 1e-15);
}

#[test]
fn cycles_reproduce_the_induced_kernel() {
    let w = line_window(30);
    let chain = cycles_from_torsion_measure(&torsion(), &w, 32).unwrap();
    let (ok, bad) = chain.validate();
    assert!(ok, "{bad:?}");
    assert!(chain.kernel().max_difference(&kernel_from_measure(&torsion(), &w)) < 1e-15);
    let q0 = chain.symmetrize();
    assert!(q0.is_symmetric(1e-15));
    assert!(q0.row_defect() < 1e-12);
    assert!(chain.kernel().row_defect() < 1e-12);
}

#[test]
fn order_four_atom_gives_four_cycles() {
    let ad = spec().parse("ad").unwrap();
    assert_eq!(ad.order(8), Some(4));
    let w = line_window(20);
    let chain = cycles_from_torsion_measure(&FiniteMeasure::uniform(&spec(), &["ad"]).unwrap(), &w, 8).unwrap();
    // the orbit oracle: apply ad until the point comes back
    for c in &chain.cycles {
        let x = w.point(c.vertices[0].unwrap());
        let mut y = x.apply(&ad);
        let mut len = 1;
        while y != *x {
            y = y.apply(&ad);
            len += 1;
        }
        assert_eq!(c.vertices.len(), len);
        assert!(len == 1 || len == 2 || len == 4);
    }
    assert!(chain.cycles.iter().any(|c| c.vertices.len() == 4));
    let ab = FiniteMeasure::uniform(&spec(), &["ab"]).unwrap();
    assert!(cycles_from_torsion_measure(&ab, &w, 8).is_err());
}

#[test]
fn negative_controls() {
    let w = line_window(10);
    let mut chain = cycles_from_torsion_measure(&torsion(), &w, 32).unwrap();
    let dup = chain.cycles[0].clone();
    chain.cycles.push(dup);
    let (ok, bad) = chain.validate();
    assert!(!ok);
    let v = chain.cycles[0].vertices[0].unwrap();
    assert!(bad.contains(&Violation::DuplicateEdge { vertex: v, tag: chain.cycles[0].tag }));
    let mut chain = cycles_from_torsion_measure(&torsion(), &w, 32).unwrap();
    chain.cycles[0].weight -= 0.1;
    let x = chain.cycles[0].vertices[0].unwrap();
    let (ok, bad) = chain.validate();
    assert!(!ok);
    assert!(bad.iter().any(|b| matches!(b, Violation::VertexSum { vertex, sum } if *vertex == x && (sum - 0.9).abs() < 1e-12)));
}

#[test]
fn deterministic_four_cycle_symmetrises_to_half_steps() {
    let chain = CenteredChain {
        n: 4,
        base: 0,
        cycles: vec![Cycle { vertices: (0..4).map(Some).collect(), weight: 1.0, tag: 0 }],
    };
    assert!(chain.validate().0);
    let q0 = chain.symmetrize();
    for x in 0..4 {
        assert_eq!(q0.rows[x].get(&((x + 1) % 4)), Some(&0.5));
        assert_eq!(q0.rows[x].get(&((x + 3) % 4)), Some(&0.5));
    }
}

fn path_kernel(radius: usize, p: f64) -> Kernel {
    let n = 2 * radius + 1;
    let mut rows = vec![BTreeMap::new(); n];
    let mut out = vec![0.0; n];
    for i in 0..n {
        if i > 0 {
            rows[i].insert(i - 1, p);
        } else {
            out[i] += p;
        }
        if i + 1 < n {
            rows[i].insert(i + 1, p);
        } else {
            out[i] += p;
        }
        if p < 0.5 {
            rows[i].insert(i, 1.0 - 2.0 * p);
        }
    }
    Kernel { rows, out, base: radius }
}

#[test]
fn gamblers_ruin() {
    for r in [1usize, 4, 16, 100] {
        let e = path_kernel(r, 0.5).escape_probability().unwrap();
        assert!((e - 1.0 / (r as f64 + 1.0)).abs() < 1e-12, "r={r}: {e}");
    }
    // lazy walk on the real Schreier line
    let lazy = FiniteMeasure::from_words(
        &spec(),
        &[("1".into(), 1.0 / 6.0), ("a".into(), 1.0 / 3.0), ("b".into(), 1.0 / 6.0), ("c".into(), 1.0 / 6.0), ("d".into(), 1.0 / 6.0)],
    )
    .unwrap();
    let line = LineOrbit::build(&spec(), &rho1(), 20).unwrap();
    let pts: Vec<Ray> = (-20..=20).map(|z| line.ray(z).clone()).collect();
    let w = Window::new(pts, &rho1()).unwrap();
    let e = kernel_from_measure(&lazy, &w).escape_probability().unwrap();
    assert!((e - (2.0 / 3.0) / 21.0).abs() < 1e-12, "{e}");
    let mut stuck = path_kernel(3, 0.5);
    stuck.rows[3] = BTreeMap::from([(3, 1.0)]);
    assert_eq!(stuck.escape_probability().unwrap(), 0.0);
}

#[test]
fn singular_windows_are_flagged() {
    let mut k = path_kernel(2, 0.5);
    // an isolated absorbing vertex away from the base
    k.rows[0] = BTreeMap::from([(0, 1.0)]);
    k.out[0] = 0.0;
    k.rows[1].remove(&0);
    k.out[1] = 0.5;
    assert!(matches!(k.escape_probability(), Err(grigwalk::Error::Singular(_))));
}

#[test]
fn product_escape_decreases() {
    let mu = product_measure(&[torsion(), torsion()]);
    let rows = product_escape_rows(&[spec(), spec()], &[rho1(), rho2()], &mu, &[4, 8, 16], 32).unwrap();
    let q: Vec<f64> = rows.iter().map(|r| r.escape_q).collect();
    let q0: Vec<f64> = rows.iter().map(|r| r.escape_q0).collect();
    assert!(is_decreasing(&q) && is_decreasing(&q0), "{q:?} {q0:?}");
    assert!(q.iter().chain(&q0).all(|e| (0.0..=1.0).contains(e)));
    assert!(escape_csv(&rows).starts_with("radius,escape_q,escape_q0\n4,"));
    let lines = [LineOrbit::build(&spec(), &rho1(), 4).unwrap(), LineOrbit::build(&spec(), &rho2(), 4).unwrap()];
    let w = Window::product_box(&lines, 4).unwrap();
    assert_eq!(w.len(), 81);
    assert_eq!(w.point(w.base()), &ProductPoint(vec![rho1(), rho2()]));
    let chain = cycles_from_torsion_measure(&mu, &w, 32).unwrap();
    assert!(chain.validate().0);
    assert!(chain.kernel().max_difference(&kernel_from_measure(&mu, &w)) < 1e-15);
}
