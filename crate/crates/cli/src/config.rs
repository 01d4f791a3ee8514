//! Run configuration: command-line flags, optionally layered over a JSON file
//! whose keys are the long flag names (`{"model": "heisenberg", "T": 2, "n": "1/2"}`).

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use zhu_core::subspace::Escalation;
use zhu_core::{FracIndex, Model, Rational, Vector};

use crate::element::parse_element;
use crate::UsageError;

#[derive(Args, Deserialize, Clone, Debug, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with defaults for any of the flags below.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// heisenberg or virasoro.
    #[arg(long)]
    pub model: Option<String>,
    /// Order of the automorphism g (1 or 2; Virasoro only admits 1).
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<u32>,
    /// Central charge of the Virasoro model (default 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Mode index for `modes`.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<i64>,
    /// Weight cutoff for generator inputs (default 3).
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Last escalation cutoff (default cutoff + 6).
    #[arg(long = "w-max")]
    #[serde(rename = "w-max")]
    pub w_max: Option<u32>,
    /// Escalation step (default 2).
    #[arg(long)]
    pub step: Option<u32>,
    /// Highest order for vacuum-congruence and the conjugation identity (default 3).
    #[arg(long)]
    pub order: Option<u32>,
    /// Weight window of the quotient or the functionals (default 4).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    /// Span cutoff used against that window (default 6).
    #[arg(long = "W")]
    #[serde(rename = "W")]
    pub big_w: Option<u32>,
    /// Negative powers tested by `regularity` (default 6).
    #[arg(long = "neg-depth")]
    #[serde(rename = "neg-depth")]
    pub neg_depth: Option<u32>,
    /// Degree cap of the Ω window (default 3).
    #[arg(long = "degree-cap")]
    #[serde(rename = "degree-cap")]
    pub degree_cap: Option<u32>,
    /// Weight cap of the probes cutting out the Ω window (default 3).
    #[arg(long = "probe-cap")]
    #[serde(rename = "probe-cap")]
    pub probe_cap: Option<u32>,
    /// Grades p1, p2, p3 range over k/T for 0 <= k <= grid-top * T (default 1).
    #[arg(long = "grid-top")]
    #[serde(rename = "grid-top")]
    pub grid_top: Option<i64>,
    /// Shift parameter of the z0 identity (default 0, -1 and 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Spell out membership certificates in the report.
    #[arg(long)]
    pub certificates: bool,
}

macro_rules! layer {
    ($top:expr, $base:expr, $($f:ident),*) => {
        RunConfig { config: $top.config, certificates: $top.certificates || $base.certificates, $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    /// Flags take precedence over the file named by `--config`.
    pub fn resolve(self) -> Result<RunConfig, UsageError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let base = load(&path)?;
        Ok(layer!(
            self, base, model, t, c, n, m, p, u, v, j, cutoff, w_max, step, order, big_n, big_w, neg_depth,
            degree_cap, probe_cap, grid_top, z0, out
        ))
    }

    pub fn model(&self) -> Result<Model, UsageError> {
        let kind = self.model.as_deref().unwrap_or("heisenberg");
        match kind {
            "heisenberg" => Ok(Model::heisenberg(self.t.unwrap_or(2))?),
            "virasoro" => {
                if self.t.is_some_and(|t| t != 1) {
                    return Err(UsageError("the virasoro model only admits T = 1".into()));
                }
                let c = self.c.as_deref().unwrap_or("1/2");
                Ok(Model::virasoro(rational("c", c)?))
            }
            other => Err(UsageError(format!("unknown model '{other}' (expected heisenberg or virasoro)"))),
        }
    }

    /// A grade parameter in `(1/T)Z`, defaulting to 0.
    pub fn grade(&self, name: &str, model: &Model) -> Result<FracIndex, UsageError> {
        let text = match name {
            "n" => &self.n,
            "m" => &self.m,
            "p" => &self.p,
            _ => unreachable!("unknown grade {name}"),
        };
        match text {
            None => Ok(FracIndex::zero(model.t())),
            Some(s) => FracIndex::parse(s, model.t()).map_err(|e| UsageError(format!("--{name}: {e}"))),
        }
    }

    pub fn element(&self, name: &str, model: &Model) -> Result<Option<Vector>, UsageError> {
        let text = match name {
            "u" => &self.u,
            "v" => &self.v,
            _ => unreachable!("unknown element {name}"),
        };
        text.as_deref()
            .map(|s| parse_element(model, s).map(|e| e.vector).map_err(|e| UsageError(format!("--{name}: {e}"))))
            .transpose()
    }

    pub fn required_element(&self, name: &str, model: &Model) -> Result<Vector, UsageError> {
        self.element(name, model)?.ok_or_else(|| UsageError(format!("--{name} is required")))
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff.unwrap_or(3)
    }

    pub fn escalation(&self) -> Result<Escalation, UsageError> {
        let std = Escalation::standard(self.cutoff());
        let w_max = self.w_max.unwrap_or(std.w_max);
        if w_max < std.w0 {
            return Err(UsageError(format!("--w-max {w_max} is below --cutoff {}", std.w0)));
        }
        Ok(Escalation::new(std.w0, w_max, self.step.unwrap_or(std.step)))
    }

    pub fn z0_values(&self) -> Result<Vec<Rational>, UsageError> {
        match &self.z0 {
            Some(s) => Ok(vec![rational("z0", s)?]),
            None => ["0", "-1", "1/2"].iter().map(|s| rational("z0", s)).collect(),
        }
    }
}

fn rational(name: &str, text: &str) -> Result<Rational, UsageError> {
    zhu_core::rational::parse(text).ok_or_else(|| UsageError(format!("--{name}: malformed fraction '{text}'")))
}

fn load(path: &Path) -> Result<RunConfig, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}
