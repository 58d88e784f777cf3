//! Dispatch of a config to the library, writing outputs and the manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use grigwalk::boundary::{diagonal_generators, standard_generators};
use grigwalk::centered::{escape_csv, is_decreasing, product_escape_rows};
use grigwalk::measures::{product_measure, NuGamma};
use grigwalk::renorm::{verify_self_similar, SelfSimilarSeq};
use grigwalk::subst::{min_stabilizer_search, section_identity, verify_distinct_inverted_orbit, w_n};
use grigwalk::walk::{exact_entropy_series, simulate, worker_count, InducedChain, LampLaw, StepLaw, WalkConfig};
use grigwalk::{GenWord, SchreierGraph};
use serde_json::json;

use crate::config::{
    group, point, rays, AcceptanceSpec, CenteredSpec, ExactSeriesSpec, Experiment, ExperimentConfig, RenormSpec,
    SchreierSpec, SubstitutionSpec, WalkSpec, SCHEMA_VERSION,
};
use crate::criteria::{criterion_id, run_criterion, CRITERIA};
use crate::error::{io_err, CliError, Result};
use crate::manifest::{Check, RunManifest};

/// Files written so far in one run directory.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(io_err(&path))?;
        self.files.push(name.to_string());
        Ok(())
    }
}

struct Outcome {
    checks: Vec<Check>,
    partial: bool,
}

fn check(name: &str, passed: bool, summary: impl Into<String>) -> Check {
    Check { name: name.to_string(), passed, summary: summary.into() }
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs `config`, writing into `out` (created if missing).
pub fn run(config: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let start = Instant::now();
    let mut o = Outputs { dir: out.to_path_buf(), files: Vec::new() };
    o.write("config.json", &(config.to_json() + "\n"))?;
    let outcome = match &config.experiment {
        Experiment::Walk(s) => walk(s, config.seed, &mut o)?,
        Experiment::ExactSeries(s) => exact_series(s, &mut o)?,
        Experiment::Renorm(s) => renorm(s, &mut o)?,
        Experiment::Centered(s) => centered(s, &mut o)?,
        Experiment::Substitution(s) => substitution(s, &mut o)?,
        Experiment::Schreier(s) => schreier(s, &mut o)?,
        Experiment::Acceptance(s) => acceptance(s, config.seed, &mut o)?,
    };
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config.hash(),
        kind: config.experiment.kind().to_string(),
        seed: config.seed,
        workers: worker_count(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: o.files,
        passed: outcome.checks.iter().all(|c| c.passed),
        checks: outcome.checks,
        partial: outcome.partial,
    };
    manifest.write(out)?;
    Ok(manifest)
}

fn walk(s: &WalkSpec, seed: u64, o: &mut Outputs) -> Result<Outcome> {
    let spec = group(&s.omega)?;
    let k = s.basepoints.len();
    let factor = s.measure.build(&spec)?;
    let factors = vec![factor; k];
    let law = match &s.mixture {
        None => StepLaw::Finite(factors),
        Some(m) => StepLaw::Mixture { nu: NuGamma::new(m.gamma, m.eps_tail)?, factors },
    };
    let cfg = WalkConfig {
        specs: vec![spec; k],
        basepoints: rays(&s.basepoints)?,
        law,
        checkpoints: s.checkpoints.clone(),
        trials: s.trials,
        seed,
        lamps: s.lamps.map(LampLaw::uniform),
        sigma: s.sigma.as_deref().map(rays).transpose()?,
        track_word_length: s.track_word_length,
    };
    let b = simulate(&cfg)?;
    o.write("returns.csv", &b.returns.to_csv())?;
    o.write("delta.csv", &b.delta.to_csv())?;
    if let Some(c) = &b.changes {
        o.write("changes.csv", &c.to_csv())?;
    }
    if let Some(w) = &b.word_length {
        o.write("word_length.csv", &w.to_csv())?;
    }
    let bounded = b.delta.mean.iter().zip(&b.delta.n).all(|(d, n)| *d >= 1.0 && *d <= *n as f64 + 1.0);
    let last = b.delta.mean.len() - 1;
    let summary = format!("E[delta({})] = {:.4}", b.delta.n[last], b.delta.mean[last]);
    Ok(Outcome { checks: vec![check("delta-range", bounded, summary)], partial: false })
}

fn exact_series(s: &ExactSeriesSpec, o: &mut Outputs) -> Result<Outcome> {
    let spec = group(&s.omega)?;
    let mu = s.measure.build(&spec)?;
    match &s.basepoints {
        None => {
            let e = exact_entropy_series(&mu, s.n_max, s.budget);
            let mut csv = String::from("n,entropy,support\n");
            for (n, (h, sup)) in e.h.iter().zip(&e.support).enumerate() {
                let _ = writeln!(csv, "{n},{h},{sup}");
            }
            o.write("entropy.csv", &csv)?;
            let bad = e.subadditivity_violations(1e-12);
            let summary = format!("H(n) to n = {}, {} subadditivity violations", e.n_max(), bad.len());
            Ok(Outcome { checks: vec![check("entropy-subadditive", bad.is_empty(), summary)], partial: e.truncated })
        }
        Some(points) => {
            let rs = rays(points)?;
            let joint_mu = product_measure(&vec![mu.clone(); rs.len()]);
            let joint = InducedChain::new(&joint_mu, point(points)?, s.n_max, s.budget)?.series(s.n_max);
            let mut product = vec![1.0; s.n_max + 1];
            let mut marg_escaped = 0.0f64;
            for r in &rs {
                let m = InducedChain::new(&mu, r.clone(), s.n_max, s.budget)?.series(s.n_max);
                marg_escaped = marg_escaped.max(m.escaped[s.n_max]);
                for (p, q) in product.iter_mut().zip(&m.returns) {
                    *p *= q;
                }
            }
            let mut csv = String::from("n,returns,product_of_marginals,escaped\n");
            for n in 0..=s.n_max {
                let _ = writeln!(csv, "{n},{},{},{}", joint.returns[n], product[n], joint.escaped[n]);
            }
            o.write("returns.csv", &csv)?;
            let gap = joint.returns.iter().zip(&product).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let partial = joint.escaped[s.n_max] > 0.0 || marg_escaped > 0.0;
            let summary = format!("max |joint - product| = {gap:.2e}");
            Ok(Outcome { checks: vec![check("returns-factor", partial || gap <= 1e-12, summary)], partial })
        }
    }
}

fn renorm(s: &RenormSpec, o: &mut Outputs) -> Result<Outcome> {
    let spec = group(&s.omega)?;
    // build once on every shift up front so the closure below cannot fail
    let mut shifted = spec.clone();
    for _ in 0..=s.depth {
        s.measure.build(&shifted)?;
        shifted = shifted.shift();
    }
    let seq = SelfSimilarSeq::constant(&spec, |g| s.measure.build(g).expect("checked above"), s.alpha, s.depth)?;
    let rep = verify_self_similar(&seq, s.depth, s.cutoff, s.tol)?;
    o.write("renorm.json", &(serde_json::to_string_pretty(&rep)? + "\n"))?;
    let mut csv = String::from("level,k,probability\n");
    for l in &rep.levels {
        for (k, p) in l.stopping.iter().enumerate().skip(1) {
            let _ = writeln!(csv, "{},{k},{p}", l.index);
        }
    }
    o.write("stopping.csv", &csv)?;
    let checks = rep
        .levels
        .iter()
        .map(|l| check(&format!("level-{}", l.index), l.holds, format!("TV {:.3e}, tail {:.3e}", l.tv_gap, l.tail)))
        .collect();
    Ok(Outcome { checks, partial: false })
}

fn centered(s: &CenteredSpec, o: &mut Outputs) -> Result<Outcome> {
    let spec = group(&s.omega)?;
    let k = s.basepoints.len();
    let mu = product_measure(&vec![s.measure.build(&spec)?; k]);
    let rows = product_escape_rows(&vec![spec; k], &rays(&s.basepoints)?, &mu, &s.radii, s.order_cap)?;
    o.write("escape.csv", &escape_csv(&rows))?;
    let q: Vec<f64> = rows.iter().map(|r| r.escape_q).collect();
    let q0: Vec<f64> = rows.iter().map(|r| r.escape_q0).collect();
    let same = is_decreasing(&q) == is_decreasing(&q0);
    Ok(Outcome {
        checks: vec![
            check("same-trend", same, format!("q decreasing: {}, q0 decreasing: {}", is_decreasing(&q), is_decreasing(&q0))),
        ],
        partial: false,
    })
}

fn substitution(s: &SubstitutionSpec, o: &mut Outputs) -> Result<Outcome> {
    let spec = group("|012")?;
    let specs = [spec.clone(), spec.clone()];
    let base = grigwalk::subst::alternating_base();
    let w = w_n(s.n, 1 << 24)?;
    let word = w.word.flatten();
    let v = verify_distinct_inverted_orbit(&specs, &base, &word)?;
    let mut checks = vec![check("injective", v.injective, format!("delta = {} for |w| = {}", v.delta, v.length))];
    if s.n >= 1 {
        let c = section_identity(&spec, s.n, 1 << 24)?;
        checks.push(check("sections", c.holds(), format!("{c:?}")));
    }
    let search = s.stabilizer_max_len.map(|m| min_stabilizer_search(&specs, &base, m)).transpose()?;
    let verdict = json!({
        "claim": "inverted orbit of w_n has |w_n| + 1 points",
        "n": s.n,
        "verified": v.injective,
        "delta": v.delta,
        "length": v.length,
        "counts": w.counts,
        "witnesses": search.as_ref().map(|r| r.witnesses.clone()).unwrap_or_default(),
        "stabilizer_search": search,
    });
    o.write("verdict.json", &(serde_json::to_string_pretty(&verdict)? + "\n"))?;
    o.write("word.txt", &(GenWord(word).to_string() + "\n"))?;
    Ok(Outcome { checks, partial: false })
}

fn schreier(s: &SchreierSpec, o: &mut Outputs) -> Result<Outcome> {
    let spec = group(&s.omega)?;
    let (dot, csv, truncated, size) = if s.basepoints.len() == 1 {
        let g = SchreierGraph::explore(rays(&s.basepoints)?.remove(0), &standard_generators(&spec), s.radius, s.budget);
        (g.to_dot(), g.to_csv(), g.truncated(), g.len())
    } else {
        let specs = vec![spec; s.basepoints.len()];
        let g = SchreierGraph::explore(point(&s.basepoints)?, &diagonal_generators(&specs), s.radius, s.budget);
        (g.to_dot(), g.to_csv(), g.truncated(), g.len())
    };
    o.write("schreier.dot", &dot)?;
    o.write("schreier.csv", &csv)?;
    Ok(Outcome { checks: vec![check("within-budget", !truncated, format!("{size} vertices"))], partial: truncated })
}

fn acceptance(s: &AcceptanceSpec, seed: u64, o: &mut Outputs) -> Result<Outcome> {
    let ids: Vec<u8> = if s.criteria.is_empty() {
        CRITERIA.iter().map(|(i, _)| *i).collect()
    } else {
        s.criteria
            .iter()
            .map(|n| {
                criterion_id(n).ok_or_else(|| CliError::Schema {
                    path: "/experiment/criteria".into(),
                    message: format!("unknown criterion {n:?}"),
                })
            })
            .collect::<Result<_>>()?
    };
    let verdicts = ids.iter().map(|&i| run_criterion(i, seed)).collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("id,name,passed,summary\n");
    for v in &verdicts {
        let _ = writeln!(csv, "{},{},{},{}", v.id, v.name, v.passed, csv_field(&v.summary));
    }
    o.write("acceptance.csv", &csv)?;
    o.write("verdicts.json", &(serde_json::to_string_pretty(&verdicts)? + "\n"))?;
    let checks = verdicts.iter().map(|v| check(&v.name, v.passed, v.summary.clone())).collect();
    Ok(Outcome { checks, partial: false })
}
