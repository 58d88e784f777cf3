//! The acceptance checks, each producing a [`Verdict`].

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use grigwalk::boundary::alternating_words;
use grigwalk::centered::{is_decreasing, product_escape_rows, EscapeRow};
use grigwalk::measures::{product_measure, stirling_expected, FiniteMeasure, NuGamma};
use grigwalk::renorm::{entropy_bound_experiment, verify_self_similar, SelfSimilarSeq};
use grigwalk::subst::{
    alternating_base, min_stabilizer_search, section_identity, tree_embedding, verify_distinct_inverted_orbit, w_n,
};
use grigwalk::walk::{
    exact_entropy_series, loglog_slope, mixture_return_series, simulate, InducedChain, LampLaw, LazyLine, StepLaw,
    WalkConfig,
};
use grigwalk::wreath::FiniteGroupA;
use grigwalk::{Gen, GenWord, GroupElement, GroupSpec, OmegaSequence, ProductPoint, Ray};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Verdict {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
    pub seconds: f64,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!("{} {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.summary)
    }
}

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "word-problem"),
    (2, "stirling"),
    (3, "substitution-injectivity"),
    (4, "minimal-stabilizer"),
    (5, "section-identity"),
    (6, "renormalization"),
    (7, "entropy-bound"),
    (8, "product-returns"),
    (9, "mixture-local-bound"),
    (10, "transience-dichotomy"),
    (11, "centered-escape"),
    (12, "tree-embedding"),
    (13, "lamp-stabilization"),
];

pub fn criterion_name(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, n)| *n)
}

pub fn criterion_id(name: &str) -> Option<u8> {
    CRITERIA.iter().find(|(_, n)| *n == name).map(|(i, _)| *i)
}

/// Runs one criterion; `seed` feeds the Monte Carlo ones.
pub fn run_criterion(id: u8, seed: u64) -> Result<Verdict> {
    let start = Instant::now();
    let (passed, summary, details) = match id {
        1 => word_problem()?,
        2 => stirling()?,
        3 => injectivity()?,
        4 => minimal_stabilizer()?,
        5 => sections()?,
        6 => renormalization()?,
        7 => entropy_bound()?,
        8 => product_returns()?,
        9 => mixture_local_bound()?,
        10 => dichotomy(seed)?,
        11 => centered_escape()?,
        12 => trees()?,
        13 => lamp_stabilization(seed)?,
        _ => return Err(grigwalk::Error::InvalidParameter(format!("no criterion {id}")).into()),
    };
    Ok(Verdict {
        id,
        name: criterion_name(id).unwrap_or_default().to_string(),
        passed,
        summary,
        details,
        seconds: start.elapsed().as_secs_f64(),
    })
}

type Outcome = Result<(bool, String, Value)>;

fn spec() -> GroupSpec {
    GroupSpec::first_group()
}

fn rays() -> Vec<Ray> {
    alternating_base().0
}

fn torsion(s: &GroupSpec) -> FiniteMeasure<GroupElement> {
    FiniteMeasure::uniform(s, &["a", "ab", "ac", "ad"]).expect("valid words")
}

fn lazy(s: &GroupSpec) -> FiniteMeasure<GroupElement> {
    let w = |x: &str, p: f64| (x.to_string(), p);
    FiniteMeasure::from_words(s, &[w("1", 1.0 / 6.0), w("a", 1.0 / 3.0), w("b", 1.0 / 6.0), w("c", 1.0 / 6.0), w("d", 1.0 / 6.0)])
        .expect("valid words")
}

/// Action on a finite vertex read letter by letter: `a` flips the first bit; `x ∈ {b,c,d}`
/// skips leading 1s and, at the first 0 at level `k`, flips the next bit iff `x` has an
/// `a` section there.
fn act_by_bits(omega: &OmegaSequence, word: &[Gen], v: &mut [u8]) {
    for &g in word {
        if g == Gen::A {
            v[0] ^= 1;
            continue;
        }
        for k in 0..v.len() {
            if v[k] == 0 {
                let has_a = !matches!((omega.letter(k), g), (0, Gen::D) | (1, Gen::C) | (2, Gen::B));
                if has_a && k + 1 < v.len() {
                    v[k + 1] ^= 1;
                }
                break;
            }
        }
    }
}

fn word_problem() -> Outcome {
    const DEPTH: usize = 12;
    let s = spec();
    let omega = s.omega().clone();
    let mut words = 0usize;
    let mut trivial = 0usize;
    let mut disagreements = Vec::new();
    for len in 0..=8 {
        for w in alternating_words(len) {
            words += 1;
            let claimed = s.element(&GenWord(w.clone())).is_trivial();
            let fixes = (0..1u32 << DEPTH).all(|code| {
                let v: Vec<u8> = (0..DEPTH).map(|i| (code >> i & 1) as u8).collect();
                let mut x = v.clone();
                act_by_bits(&omega, &w, &mut x);
                x == v
            });
            trivial += claimed as usize;
            if claimed != fixes {
                disagreements.push(GenWord(w).to_string());
            }
        }
    }
    let ad = s.parse("ad")?.order(64);
    let ab = s.parse("ab")?.order(64);
    let passed = disagreements.is_empty() && ad == Some(4) && ab == Some(16);
    let summary = format!("{words} reduced words, {} disagreements; ord(ad)={ad:?}, ord(ab)={ab:?}", disagreements.len());
    Ok((passed, summary, json!({"words": words, "trivial": trivial, "disagreements": disagreements, "order_ad": ad, "order_ab": ab})))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn stirling() -> Outcome {
    let mut mismatches = Vec::new();
    for n in 1..=6u64 {
        for k in 1..=n {
            let total = n.pow(k as u32);
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
            let g = gcd(sum, total);
            let expected = if total / g == 1 { format!("{}", sum / g) } else { format!("{}/{}", sum / g, total / g) };
            let got = stirling_expected(n, k)?.value.to_string();
            if got != expected {
                mismatches.push(json!({"n": n, "k": k, "exact": got, "enumerated": expected}));
            }
        }
    }
    let mut bound_failures = Vec::new();
    for n in 1..=100u64 {
        for k in 1..=n {
            if !stirling_expected(n, k)?.bound_holds {
                bound_failures.push((n, k));
            }
        }
    }
    let passed = mismatches.is_empty() && bound_failures.is_empty();
    let summary = format!("{} enumeration mismatches, {} bound failures", mismatches.len(), bound_failures.len());
    Ok((passed, summary, json!({"mismatches": mismatches, "bound_failures": bound_failures})))
}

fn injectivity() -> Outcome {
    let s = spec();
    let specs = [s.clone(), s];
    let base = alternating_base();
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 0..=8 {
        let w = w_n(n, 1 << 16)?.word.flatten();
        let v = verify_distinct_inverted_orbit(&specs, &base, &w)?;
        passed &= v.injective;
        rows.push(json!({"n": n, "length": v.length, "delta": v.delta, "injective": v.injective}));
    }
    let last = &rows[8];
    let summary = format!("delta(w_n) = |w_n|+1 for n <= 8: {passed}; |w_8| = {}", last["length"]);
    Ok((passed, summary, json!({"claim": "delta(w_n) = |w_n| + 1", "rows": rows})))
}

fn minimal_stabilizer() -> Outcome {
    let s = spec();
    let r = min_stabilizer_search(&[s.clone(), s], &alternating_base(), 10)?;
    let passed = r.min_length.is_none();
    let summary = match r.min_length {
        None => "no nontrivial word of length <= 10 fixes the basepoint".to_string(),
        Some(m) => format!(
            "shortest fixing word has length {m} ({}); shortest outside y a x a d a x a y: {:?}",
            r.witnesses.first().cloned().unwrap_or_default(),
            r.min_length_outside_family
        ),
    };
    Ok((passed, summary, serde_json::to_value(&r)?))
}

fn sections() -> Outcome {
    let s = spec();
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 1..=8 {
        let c = section_identity(&s, n, 1 << 16)?;
        passed &= c.holds();
        rows.push(serde_json::to_value(&c)?);
    }
    Ok((passed, format!("phi(w_n) = <a w_(n-1) a, w_(n-1)> without swap for n = 1..8: {passed}"), json!({"rows": rows})))
}

fn renormalization() -> Outcome {
    let s = spec();
    let seq = SelfSimilarSeq::constant(&s, FiniteMeasure::kaimanovich, 0.5, 1)?;
    let rep = verify_self_similar(&seq, 1, 40, 1e-9)?;
    let l = &rep.levels[0];
    let passed = rep.holds() && l.tail <= 1e-4;
    let summary = format!("TV = {:.3e}, tail = {:.3e}", l.tv_gap, l.tail);
    Ok((passed, summary, json!({"tv": l.tv_gap, "tail": l.tail, "stopping": &l.stopping[..8]})))
}

fn entropy_bound() -> Outcome {
    let e = exact_entropy_series(&FiniteMeasure::kaimanovich(&spec()), 40, 1_000_000);
    let violations = e.subadditivity_violations(1e-12);
    let rep = entropy_bound_experiment(&e.h, 2.0, 0.5, 10, 0.05);
    let passed = violations.is_empty() && rep.non_increasing_tail && rep.k.is_finite();
    let summary = format!(
        "H(n) exact to n = {}, {} subadditivity violations, max H(n)/n^{:.2} = {:.4}, last = {:.4}, tail non-increasing: {}",
        e.n_max(),
        violations.len(),
        rep.beta,
        rep.k,
        rep.ratios.last().copied().unwrap_or(f64::NAN),
        rep.non_increasing_tail
    );
    Ok((passed, summary, json!({"h": e.h, "support": e.support, "report": rep, "violations": violations})))
}

fn product_returns() -> Outcome {
    const N: usize = 64;
    let s = spec();
    let rs = rays();
    let joint = InducedChain::new(&product_measure(&[torsion(&s), torsion(&s)]), ProductPoint(rs.clone()), N, 200_000)?
        .series(N);
    let m1 = InducedChain::new(&torsion(&s), rs[0].clone(), N, 200_000)?.series(N);
    let m2 = InducedChain::new(&torsion(&s), rs[1].clone(), N, 200_000)?.series(N);
    let gap = (0..=N).map(|k| (joint.returns[k] - m1.returns[k] * m2.returns[k]).abs()).fold(0.0, f64::max);
    let escaped = joint.escaped[N].max(m1.escaped[N]).max(m2.escaped[N]);
    let passed = gap <= 1e-12 && escaped == 0.0;
    let summary = format!("max |P_joint - P_1 P_2| = {gap:.2e} over n <= {N}, escaped mass {escaped:.1e}");
    Ok((passed, summary, json!({"max_gap": gap, "returns": joint.returns})))
}

/// Least squares fit of `y = b0 + b1 x1 + b2 x2`.
fn fit3(x1: &[f64], x2: &[f64], y: &[f64]) -> [f64; 3] {
    let mut a = [[0.0; 4]; 3];
    for i in 0..y.len() {
        let r = [1.0, x1[i], x2[i]];
        for p in 0..3 {
            for q in 0..3 {
                a[p][q] += r[p] * r[q];
            }
            a[p][3] += r[p] * y[i];
        }
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        for r in 0..3 {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..4 {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]]
}

fn mixture_local_bound() -> Outcome {
    let ns: Vec<u32> = (0..=10).map(|k| 1u32 << k).collect();
    let mut rows = Vec::new();
    let mut passed = true;
    for gamma in [1.3, 1.5, 1.7] {
        // the bound uses the untruncated law, so the truncation level does not matter here
        let nu = NuGamma::new(gamma, 1e-4)?;
        let scaled: Vec<f64> = ns.iter().map(|&n| nu.sup_bound(n) * (n as f64).powf(1.0 / (gamma - 1.0))).collect();
        let tail: Vec<usize> = (0..ns.len()).filter(|&i| ns[i] >= 64).collect();
        let xs: Vec<f64> = tail.iter().map(|&i| ns[i] as f64).collect();
        let ys: Vec<f64> = tail.iter().map(|&i| scaled[i]).collect();
        let slope = loglog_slope(&xs, &ys);
        let ok = scaled.iter().all(|v| v.is_finite()) && slope < 0.05;
        passed &= ok;
        rows.push(json!({"gamma": gamma, "scaled_sup": scaled, "tail_slope": slope, "ok": ok}));
    }
    // E[S_n^{-1}] for γ = 1.5 against n^{-2}, with a log log correction term
    let nu = NuGamma::new(1.5, 1e-8)?;
    let mn: Vec<u32> = (4..=10).map(|k| 1u32 << k).collect();
    let m: Vec<f64> = mn.iter().map(|&n| nu.negative_moment(n, 1.0)).collect();
    let lx: Vec<f64> = mn.iter().map(|&n| (n as f64).ln()).collect();
    let llx: Vec<f64> = lx.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = m.iter().map(|v| v.ln()).collect();
    let plain = -loglog_slope(&mn.iter().map(|&n| n as f64).collect::<Vec<_>>(), &m);
    let corrected = -fit3(&lx, &llx, &ly)[1];
    let moment_ok = (corrected - 2.0).abs() <= 0.3;
    passed &= moment_ok;
    let summary = format!(
        "scaled sup slopes {} (need < 0.05); negative-moment exponent {corrected:.3} (plain {plain:.3}, target 2 +- 0.3)",
        rows.iter().map(|r| format!("{:.3}", r["tail_slope"].as_f64().unwrap())).collect::<Vec<_>>().join("/")
    );
    Ok((passed, summary, json!({"sup": rows, "moment": {"n": mn, "value": m, "exponent": corrected, "plain": plain}})))
}

fn torsion_walk(seed: u64, checkpoints: Vec<u64>, lamps: bool) -> WalkConfig {
    let s = spec();
    WalkConfig {
        specs: vec![s.clone(), s.clone()],
        basepoints: rays(),
        law: StepLaw::Finite(vec![torsion(&s), torsion(&s)]),
        checkpoints,
        trials: 1000,
        seed,
        lamps: lamps.then(|| LampLaw::uniform(2)),
        sigma: None,
        track_word_length: false,
    }
}

fn mixture_walk(seed: u64, checkpoints: Vec<u64>, lamps: bool) -> Result<WalkConfig> {
    let s = spec();
    let mut cfg = torsion_walk(seed, checkpoints, lamps);
    cfg.law = StepLaw::Mixture { nu: NuGamma::new(1.5, 1e-8)?, factors: vec![lazy(&s), lazy(&s)] };
    Ok(cfg)
}

fn escape_rows() -> Result<Vec<EscapeRow>> {
    let s = spec();
    Ok(product_escape_rows(&[s.clone(), s.clone()], &rays(), &product_measure(&[torsion(&s), torsion(&s)]), &[16, 32, 64], 64)?)
}

fn dichotomy(seed: u64) -> Outcome {
    // (a) torsion walk: δ(n)/n falls and escape probabilities shrink
    let cps = vec![10, 100, 1000, 10_000];
    let t = simulate(&torsion_walk(seed, cps.clone(), false))?;
    let t_ratio: Vec<f64> = t.delta.mean.iter().zip(&cps).map(|(d, n)| d / *n as f64).collect();
    let rows = escape_rows()?;
    let q: Vec<f64> = rows.iter().map(|r| r.escape_q).collect();
    let a_ok = is_decreasing(&t_ratio) && is_decreasing(&q);

    // (b) mixture walk: δ(n)/n bounded below and steady; return probabilities summable
    let mcps = vec![1000, 2000, 5000, 10_000];
    let m = simulate(&mixture_walk(seed, mcps.clone(), false)?)?;
    let m_ratio: Vec<f64> = m.delta.mean.iter().zip(&mcps).map(|(d, n)| d / *n as f64).collect();
    let lo = m_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = m_ratio.iter().copied().fold(0.0, f64::max);
    let steady = hi <= 1.25 * lo;
    let nu = NuGamma::new(1.5, 1e-8)?;
    let k = 1 << 20;
    let r: Vec<f64> = LazyLine { p_move: 1.0 / 3.0 }.return_probabilities(k).into_iter().map(|p| p * p).collect();
    let ns: Vec<u32> = (4..=8).map(|j| 1u32 << j).collect();
    let mr = mixture_return_series(&nu, &r, &ns, r[k]);
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let e_lo = -loglog_slope(&xs, &mr.upper);
    let e_hi = -loglog_slope(&xs, &mr.lower);
    let exponent = e_lo.min(e_hi);
    let b_ok = lo >= 0.05 && steady && exponent - 0.15 > 1.0;
    let summary = format!(
        "(a) torsion delta/n {} escape {}; (b) mixture delta/n {}, return exponent {exponent:.3}",
        fmt_list(&t_ratio),
        fmt_list(&q),
        fmt_list(&m_ratio)
    );
    Ok((
        a_ok && b_ok,
        summary,
        json!({
            "torsion": {"n": cps, "delta_over_n": t_ratio, "escape_q": q, "ok": a_ok},
            "mixture": {"n": mcps, "delta_over_n": m_ratio, "stderr": m.delta.stderr, "returns_n": ns,
                        "returns_lower": mr.lower, "returns_upper": mr.upper, "exponent": exponent, "ok": b_ok},
        }),
    ))
}

fn fmt_list(xs: &[f64]) -> String {
    format!("[{}]", xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", "))
}

fn centered_escape() -> Outcome {
    let rows = escape_rows()?;
    let q: Vec<f64> = rows.iter().map(|r| r.escape_q).collect();
    let q0: Vec<f64> = rows.iter().map(|r| r.escape_q0).collect();
    let (dq, dq0) = (is_decreasing(&q), is_decreasing(&q0));
    let passed = dq && dq0;
    let summary = format!("escape(q) {} escape(q0) {}", fmt_list(&q), fmt_list(&q0));
    Ok((passed, summary, json!({"rows": rows, "q_decreasing": dq, "q0_decreasing": dq0})))
}

fn trees() -> Outcome {
    let c2 = Arc::new(FiniteGroupA::cyclic(2));
    let t = tree_embedding(8, &c2, 0, 1)?;
    let passed = t.len() == 511;
    let word = GenWord(t.word.clone()).to_string();
    Ok((passed, format!("{} distinct elements with generator edges, word {word}", t.len()), json!({"nodes": t.len(), "word": word})))
}

fn lamp_stabilization(seed: u64) -> Outcome {
    let cps = vec![1000, 10_000];
    let m = simulate(&mixture_walk(seed, cps.clone(), true)?)?;
    let tails: Vec<f64> = (0..cps.len()).map(|j| m.change_tail(j, 20).unwrap_or(1.0)).collect();
    let flat = (tails[1] - tails[0]).abs() <= 0.02;
    let mix_ok = tails.iter().all(|t| *t < 0.05) && flat;
    let t = simulate(&torsion_walk(seed, cps.clone(), true))?;
    let ch = t.changes.as_ref().expect("lamps were tracked");
    let grows = ch.mean[1] > ch.mean[0] + 3.0 * (ch.stderr[0].powi(2) + ch.stderr[1].powi(2)).sqrt();
    let mean_mix = m.changes.as_ref().map(|c| c.mean.clone()).unwrap_or_default();
    let summary = format!(
        "mixture P(changes > 20) {} ; torsion mean changes {} (grows: {grows})",
        fmt_list(&tails),
        fmt_list(&ch.mean)
    );
    Ok((
        mix_ok && grows,
        summary,
        json!({"n": cps, "mixture_tail": tails, "mixture_mean": mean_mix, "torsion_mean": ch.mean, "torsion_stderr": ch.stderr}),
    ))
}
