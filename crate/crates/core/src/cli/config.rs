//! TOML experiment configuration.

use crate::basis::{FunctionSystem, Interval, SystemKind};
use crate::error::{Error, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must match the experiment named on the command line when present.
    pub experiment: Option<String>,
    #[serde(default)]
    pub systems: Systems,
    #[serde(default)]
    pub sizes: Sizes,
    #[serde(default)]
    pub knobs: Knobs,
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub output: Output,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Systems {
    pub sampling: Option<String>,
    pub reconstruction: Option<String>,
    pub domain: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Sizes {
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub m: Vec<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    /// Sampling level boundaries `N_1 < … < N_r`.
    #[serde(default)]
    pub levels: Vec<usize>,
    /// Samples drawn per sampling level.
    #[serde(default)]
    pub counts: Vec<usize>,
    /// Sparsity level boundaries `M_1 < … < M_r`.
    #[serde(default)]
    pub sparsity_levels: Vec<usize>,
    /// Nonzeros per sparsity level.
    #[serde(default)]
    pub sparsity: Vec<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Knobs {
    pub theta: Option<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    /// Relative noise level for the inverse problem.
    pub eps_rel: Option<f64>,
    pub probe_depth: Option<usize>,
    pub constant: Option<f64>,
    pub function: Option<String>,
    /// `gs` or `consistent`.
    pub method: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: Option<String>,
    /// File stem; defaults to the experiment name.
    pub stem: Option<String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    fn domain(&self) -> Result<Interval> {
        match self.systems.domain {
            None => Ok(Interval::UNIT),
            Some([a, b]) if a.is_finite() && b.is_finite() && a < b => Ok(Interval::new(a, b)),
            Some(d) => Err(Error::InvalidArgument(format!("bad domain {d:?}"))),
        }
    }

    fn system(&self, name: &Option<String>, what: &str) -> Result<FunctionSystem> {
        let name = name
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument(format!("systems.{what} is required")))?;
        let kind: SystemKind = name.parse()?;
        FunctionSystem::new(kind, self.domain()?)
    }

    pub fn sampling(&self) -> Result<FunctionSystem> {
        self.system(&self.systems.sampling, "sampling")
    }

    pub fn reconstruction(&self) -> Result<FunctionSystem> {
        self.system(&self.systems.reconstruction, "reconstruction")
    }
}

pub(crate) fn required<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("{key} is required")))
}

pub(crate) fn nonempty<'a, T>(v: &'a [T], key: &str) -> Result<&'a [T]> {
    if v.is_empty() {
        Err(Error::InvalidArgument(format!("{key} must be a nonempty list")))
    } else {
        Ok(v)
    }
}
