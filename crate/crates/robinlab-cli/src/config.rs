//! Run configuration. A `RunConfig` fully determines a run's outputs.

use crate::error::{CliError, Result};
use robinlab::geometry::{BoundaryData, DomainSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Nodal,
    Pleijel,
    CourantSharp,
    Bounds,
    Isoperimetric,
    PolyaSzego,
    Verify,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    #[default]
    Disk,
    Square,
    Rectangle,
}

/// Boundary mode. `Robin` uses the `h` field; `Neumann` forces `h = 0`.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Robin,
    Neumann,
    Dirichlet,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative FEM vs analytic eigenvalue agreement.
    pub fem_relative: f64,
    /// Half-width of the Weyl ratio band around 1.
    pub weyl_band: f64,
    /// Fraction of `j₀²π` required of interior mixed eigenvalue products.
    pub mixed_interior: f64,
    /// Relative tolerance of the boundary half-disk product around `j₀²π/2`.
    pub mixed_half: f64,
    /// Scale-law self-check tolerance.
    pub scale: f64,
    pub fem_seconds: f64,
    pub sharp_seconds: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fem_relative: 0.02,
            weyl_band: 0.05,
            mixed_interior: 0.95,
            mixed_half: 0.05,
            scale: 1e-10,
            fem_seconds: 60.0,
            sharp_seconds: 30.0,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub domain: DomainKind,
    /// Disk radius or square side.
    #[serde(default = "one")]
    pub size: f64,
    /// Second side of a rectangle.
    #[serde(default = "default_b")]
    pub b: f64,
    /// JSON domain file; overrides `domain`, `size` and `b`.
    #[serde(default)]
    pub domain_file: Option<PathBuf>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub h: f64,
    /// Number of eigenpairs (spectrum, nodal, polya-szego).
    #[serde(default = "default_count")]
    pub count: usize,
    /// Largest index for pleijel and courant-sharp.
    #[serde(default = "default_kmax")]
    pub k_max: usize,
    /// Use the finite element solver for `spectrum`.
    #[serde(default)]
    pub fem: bool,
    #[serde(default = "default_target_h")]
    pub target_h: f64,
    /// Directory for artifacts; without it the main table goes to stdout.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_corpus")]
    pub corpus_size: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_c1")]
    pub c1: f64,
    /// Constant used by the Courant-sharp bound families.
    #[serde(default = "one")]
    pub cs_constant: f64,
}

fn one() -> f64 {
    1.0
}
fn default_b() -> f64 {
    0.72
}
fn default_count() -> usize {
    10
}
fn default_kmax() -> usize {
    200
}
fn default_target_h() -> f64 {
    0.03
}
fn default_seed() -> u64 {
    20_240_601
}
fn default_corpus() -> usize {
    50
}
fn default_eps() -> f64 {
    0.1
}
fn default_c1() -> f64 {
    robinlab::asymmetry::DEFAULT_C1
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            domain: DomainKind::Disk,
            size: 1.0,
            b: default_b(),
            domain_file: None,
            mode: Mode::Robin,
            h: 0.0,
            count: default_count(),
            k_max: default_kmax(),
            fem: false,
            target_h: default_target_h(),
            out_dir: None,
            tolerances: Tolerances::default(),
            seed: default_seed(),
            corpus_size: default_corpus(),
            eps: default_eps(),
            c1: default_c1(),
            cs_constant: 1.0,
        }
    }

    /// Parses JSON; errors carry the line and column, and unknown fields are named.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&s).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn boundary(&self) -> BoundaryData {
        match self.mode {
            Mode::Robin => BoundaryData::Constant(self.h),
            Mode::Neumann => BoundaryData::Constant(0.0),
            Mode::Dirichlet => BoundaryData::Dirichlet,
        }
    }

    pub fn domain_spec(&self) -> Result<DomainSpec> {
        let spec = match &self.domain_file {
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                let d: DomainSpec =
                    serde_json::from_str(&s).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                return Ok(d);
            }
            None => match self.domain {
                DomainKind::Disk => DomainSpec::disk(self.size, self.boundary()),
                DomainKind::Square => DomainSpec::rectangle(self.size, self.size, self.boundary()),
                DomainKind::Rectangle => DomainSpec::rectangle(self.size, self.b, self.boundary()),
            },
        };
        spec.validate().map_err(|e| CliError::module("domain", e))?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_defaults() {
        let c = RunConfig::from_json(r#"{"command": "pleijel", "domain": "square", "mode": "dirichlet"}"#).unwrap();
        assert_eq!(c.k_max, 200);
        assert_eq!(c.domain_spec().unwrap().h, BoundaryData::Dirichlet);
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn diagnostics_name_field_and_line() {
        let e = RunConfig::from_json("{\n  \"command\": \"bounds\",\n  \"kmax\": 3\n}").unwrap_err().to_string();
        assert!(e.contains("kmax") && e.contains("line 3"), "{e}");
        let e = RunConfig::from_json("{\"command\": \"nope\"}").unwrap_err().to_string();
        assert!(e.contains("nope"), "{e}");
    }
}
