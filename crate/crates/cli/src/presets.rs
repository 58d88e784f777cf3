//! Built-in configurations, runnable by name.

use crate::config::{
    AcceptanceSpec, CenteredSpec, ExactSeriesSpec, Experiment, ExperimentConfig, MeasureSpec, MixtureSpec, RenormSpec,
    SchreierSpec, SubstitutionSpec, WalkSpec, SCHEMA_VERSION,
};
use crate::criteria::CRITERIA;
use crate::error::{CliError, Result};

const PAIR: [&str; 2] = ["|01", "|10"];

fn pair() -> Vec<String> {
    PAIR.iter().map(|s| s.to_string()).collect()
}

fn named(n: &str) -> MeasureSpec {
    MeasureSpec::Named(n.into())
}

/// Named experiments other than the single acceptance checks.
pub const EXPERIMENTS: [&str; 7] =
    ["inverted-orbit", "transience", "centered", "renorm", "substitution", "schreier", "entropy"];

/// Every preset name: the experiments, one per acceptance check, and `acceptance`.
pub fn names() -> Vec<String> {
    let mut out: Vec<String> = EXPERIMENTS.iter().map(|s| s.to_string()).collect();
    out.extend(CRITERIA.iter().map(|(_, n)| n.to_string()));
    out.push("acceptance".into());
    out
}

pub fn preset(name: &str, seed: u64) -> Result<ExperimentConfig> {
    let experiment = match name {
        "inverted-orbit" => Experiment::Walk(WalkSpec {
            omega: "|012".into(),
            basepoints: pair(),
            measure: named("torsion"),
            mixture: None,
            checkpoints: vec![10, 100, 1000, 10000],
            trials: 1000,
            lamps: None,
            sigma: None,
            track_word_length: false,
        }),
        "transience" => Experiment::Walk(WalkSpec {
            omega: "|012".into(),
            basepoints: pair(),
            measure: named("lazy"),
            mixture: Some(MixtureSpec { gamma: 1.5, eps_tail: 1e-8 }),
            checkpoints: vec![1000, 2000, 5000, 10000],
            trials: 1000,
            lamps: Some(2),
            sigma: None,
            track_word_length: false,
        }),
        "centered" => Experiment::Centered(CenteredSpec {
            omega: "|012".into(),
            basepoints: pair(),
            measure: named("torsion"),
            radii: vec![16, 32, 64],
            order_cap: 64,
        }),
        "renorm" => Experiment::Renorm(RenormSpec {
            omega: "|012".into(),
            measure: named("kaimanovich"),
            alpha: 0.5,
            depth: 1,
            cutoff: 40,
            tol: 1e-9,
        }),
        "substitution" => Experiment::Substitution(SubstitutionSpec { n: 8, stabilizer_max_len: Some(10) }),
        "schreier" => Experiment::Schreier(SchreierSpec {
            omega: "|012".into(),
            basepoints: vec!["|01".into()],
            radius: 25,
            budget: 100_000,
        }),
        "entropy" => Experiment::ExactSeries(ExactSeriesSpec {
            omega: "|012".into(),
            measure: named("kaimanovich"),
            n_max: 24,
            budget: 1_000_000,
            basepoints: None,
        }),
        "acceptance" => Experiment::Acceptance(AcceptanceSpec { criteria: Vec::new() }),
        other if CRITERIA.iter().any(|(_, n)| *n == other) => {
            Experiment::Acceptance(AcceptanceSpec { criteria: vec![other.to_string()] })
        }
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    Ok(ExperimentConfig { version: SCHEMA_VERSION, seed, output: None, experiment })
}
