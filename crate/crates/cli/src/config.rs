//! JSON experiment configurations.

use std::path::{Path, PathBuf};

use grigwalk::measures::FiniteMeasure;
use grigwalk::{GroupElement, GroupSpec, OmegaSequence, ProductPoint, Ray};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    /// Output directory; the command line may override it. Not part of the hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    Walk(WalkSpec),
    ExactSeries(ExactSeriesSpec),
    Renorm(RenormSpec),
    Centered(CenteredSpec),
    Substitution(SubstitutionSpec),
    Schreier(SchreierSpec),
    Acceptance(AcceptanceSpec),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Walk(_) => "walk",
            Experiment::ExactSeries(_) => "exact-series",
            Experiment::Renorm(_) => "renorm",
            Experiment::Centered(_) => "centered",
            Experiment::Substitution(_) => "substitution",
            Experiment::Schreier(_) => "schreier",
            Experiment::Acceptance(_) => "acceptance",
        }
    }
}

fn default_omega() -> String {
    "|012".into()
}

fn default_pair() -> Vec<String> {
    vec!["|01".into(), "|10".into()]
}

/// Step measure on one factor.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// `torsion`, `lazy`, `kaimanovich` or `simple`.
    Named(String),
    /// `[[word, weight], …]`
    Atoms(Vec<(String, f64)>),
}

impl MeasureSpec {
    pub fn build(&self, spec: &GroupSpec) -> Result<FiniteMeasure<GroupElement>> {
        let w = |x: &str, p: f64| (x.to_string(), p);
        let m = match self {
            MeasureSpec::Named(n) => match n.as_str() {
                "torsion" => FiniteMeasure::uniform(spec, &["a", "ab", "ac", "ad"])?,
                "lazy" => FiniteMeasure::from_words(
                    spec,
                    &[w("1", 1.0 / 6.0), w("a", 1.0 / 3.0), w("b", 1.0 / 6.0), w("c", 1.0 / 6.0), w("d", 1.0 / 6.0)],
                )?,
                "kaimanovich" => FiniteMeasure::kaimanovich(spec),
                "simple" => FiniteMeasure::uniform(spec, &["a", "b", "c", "d"])?,
                other => {
                    return Err(CliError::Schema {
                        path: "experiment.measure.named".into(),
                        message: format!("unknown measure {other:?}"),
                    })
                }
            },
            MeasureSpec::Atoms(a) => FiniteMeasure::from_words(spec, a)?,
        };
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    pub gamma: f64,
    pub eps_tail: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    #[serde(default = "default_omega")]
    pub omega: String,
    #[serde(default = "default_pair")]
    pub basepoints: Vec<String>,
    pub measure: MeasureSpec,
    /// Replaces the step law by `Σ ν_γ(i) μ^{*i}`.
    #[serde(default)]
    pub mixture: Option<MixtureSpec>,
    pub checkpoints: Vec<u64>,
    pub trials: u64,
    /// Order of a cyclic lamp group with uniform increments.
    #[serde(default)]
    pub lamps: Option<usize>,
    #[serde(default)]
    pub sigma: Option<Vec<String>>,
    #[serde(default)]
    pub track_word_length: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExactSeriesSpec {
    #[serde(default = "default_omega")]
    pub omega: String,
    pub measure: MeasureSpec,
    pub n_max: usize,
    pub budget: usize,
    /// With basepoints: return probabilities of the induced walk; without: entropy.
    #[serde(default)]
    pub basepoints: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RenormSpec {
    #[serde(default = "default_omega")]
    pub omega: String,
    pub measure: MeasureSpec,
    pub alpha: f64,
    #[serde(default = "one")]
    pub depth: usize,
    pub cutoff: usize,
    pub tol: f64,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CenteredSpec {
    #[serde(default = "default_omega")]
    pub omega: String,
    #[serde(default = "default_pair")]
    pub basepoints: Vec<String>,
    pub measure: MeasureSpec,
    pub radii: Vec<usize>,
    #[serde(default = "order_cap")]
    pub order_cap: usize,
}

fn order_cap() -> usize {
    64
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SubstitutionSpec {
    pub n: usize,
    /// Also search for short words fixing the basepoint, up to this length.
    #[serde(default)]
    pub stabilizer_max_len: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchreierSpec {
    #[serde(default = "default_omega")]
    pub omega: String,
    #[serde(default = "default_pair")]
    pub basepoints: Vec<String>,
    pub radius: usize,
    #[serde(default = "schreier_budget")]
    pub budget: usize,
}

fn schreier_budget() -> usize {
    100_000
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceSpec {
    /// Criterion names; empty means all of them.
    #[serde(default)]
    pub criteria: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        // the tagged enum buffers its content and would lose error paths, so decode in two passes
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            version: u32,
            #[serde(default)]
            seed: u64,
            #[serde(default)]
            output: Option<PathBuf>,
            experiment: Value,
        }
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: Raw = serde_path_to_error::deserialize(de).map_err(|e| schema_err("", e))?;
        if raw.version != SCHEMA_VERSION {
            return Err(CliError::Version(raw.version, SCHEMA_VERSION));
        }
        let mut body = raw.experiment;
        let kind = match body.as_object_mut().map(|o| o.remove("kind")) {
            Some(Some(Value::String(k))) => k,
            _ => {
                return Err(CliError::Schema {
                    path: "/experiment/kind".into(),
                    message: "expected an object with a string `kind`".into(),
                })
            }
        };
        let experiment = match kind.as_str() {
            "walk" => Experiment::Walk(body_as(body)?),
            "exact-series" => Experiment::ExactSeries(body_as(body)?),
            "renorm" => Experiment::Renorm(body_as(body)?),
            "centered" => Experiment::Centered(body_as(body)?),
            "substitution" => Experiment::Substitution(body_as(body)?),
            "schreier" => Experiment::Schreier(body_as(body)?),
            "acceptance" => Experiment::Acceptance(body_as(body)?),
            other => {
                return Err(CliError::Schema {
                    path: "/experiment/kind".into(),
                    message: format!("unknown kind {other:?}"),
                })
            }
        };
        Ok(ExperimentConfig { version: raw.version, seed: raw.seed, output: raw.output, experiment })
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    /// SHA-256 of the canonical JSON form, leaving out the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let bytes = serde_json::to_vec(&c).expect("configs serialize");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn body_as<T: serde::de::DeserializeOwned>(body: Value) -> Result<T> {
    serde_path_to_error::deserialize(body).map_err(|e| schema_err("/experiment", e))
}

fn schema_err<E: std::fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> CliError {
    let mut path = json_pointer(&e.path().to_string());
    if !prefix.is_empty() {
        path = if path == "/" { prefix.to_string() } else { format!("{prefix}{path}") };
    }
    CliError::Schema { path, message: e.inner().to_string() }
}

/// `a.b[2]` becomes `/a/b/2`.
fn json_pointer(dotted: &str) -> String {
    if dotted == "." || dotted.is_empty() {
        return "/".into();
    }
    let mut out = String::new();
    for part in dotted.split('.') {
        let mut rest = part;
        while let Some(open) = rest.find('[') {
            if open > 0 {
                out.push('/');
                out.push_str(&rest[..open]);
            }
            let close = rest[open..].find(']').map(|c| open + c).unwrap_or(rest.len());
            out.push('/');
            out.push_str(&rest[open + 1..close]);
            rest = &rest[(close + 1).min(rest.len())..];
        }
        if !rest.is_empty() {
            out.push('/');
            out.push_str(rest);
        }
    }
    out
}

pub(crate) fn group(omega: &str) -> Result<GroupSpec> {
    let (pre, per) = omega.split_once('|').unwrap_or(("", omega));
    Ok(GroupSpec::new(OmegaSequence::parse(pre, per)?))
}

pub(crate) fn rays(points: &[String]) -> Result<Vec<Ray>> {
    Ok(points.iter().map(|p| Ray::parse(p)).collect::<grigwalk::Result<_>>()?)
}

pub(crate) fn point(points: &[String]) -> Result<ProductPoint> {
    Ok(ProductPoint(rays(points)?))
}
