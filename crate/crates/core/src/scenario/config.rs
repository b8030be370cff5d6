use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::entropy::{EnvelopeMode, DEFAULT_DENSITY, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};

/// A scenario file. See the bundled scenarios for complete examples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Output times, nonnegative and strictly increasing.
    pub times: Vec<f64>,
    pub hamiltonian: HamiltonianSpec,
    pub initial: InitialSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub solvers: SolverSpec,
    #[serde(default)]
    pub checks: CheckSpec,
    /// Relative to the working directory; overridden by `--out`.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub id: String,
    #[serde(default = "one")]
    pub dim: usize,
    /// Overrides the model's bound on its second derivatives.
    #[serde(default)]
    pub bound_a: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub id: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        let axes = self
            .axes
            .iter()
            .map(|a| Axis::new(a.min, a.max, a.count))
            .collect::<Result<Vec<_>>>()?;
        Grid::new(axes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    InfFamily,
    Variational,
    Iterated,
    Hopf,
    LaxOleinik,
    FdOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_run")]
    pub run: Vec<SolverKind>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub site_step: Option<f64>,
    /// Covector nodes per axis for the Legendre dual and the Lagrangian.
    #[serde(default = "default_dual_resolution")]
    pub dual_resolution: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            run: default_run(),
            dt: default_dt(),
            k: default_k(),
            site_step: None,
            dual_resolution: default_dual_resolution(),
            cfl: default_cfl(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    #[serde(default = "default_ordering_tol")]
    pub ordering_tol: f64,
    #[serde(default)]
    pub entropy: Option<EntropySpec>,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self {
            ordering_tol: default_ordering_tol(),
            entropy: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropySpec {
    /// Which family-backed field to scan.
    #[serde(default = "default_entropy_field")]
    pub field: SolverKind,
    #[serde(default = "default_mode")]
    pub mode: EnvelopeMode,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_density")]
    pub density: usize,
}

fn one() -> usize {
    1
}
fn default_run() -> Vec<SolverKind> {
    vec![SolverKind::InfFamily, SolverKind::Variational]
}
fn default_dt() -> f64 {
    0.05
}
fn default_k() -> usize {
    16
}
fn default_dual_resolution() -> usize {
    401
}
fn default_cfl() -> f64 {
    0.9
}
fn default_ordering_tol() -> f64 {
    5e-2
}
fn default_entropy_field() -> SolverKind {
    SolverKind::InfFamily
}
fn default_mode() -> EnvelopeMode {
    EnvelopeMode::Convex
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_density() -> usize {
    DEFAULT_DENSITY
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks the invariants that do not need the registries.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.times.is_empty() {
            return bad("`times` is empty".into());
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("times must be finite and nonnegative".into());
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("times must be strictly increasing".into());
        }
        if self.grid.axes.len() != self.hamiltonian.dim {
            return bad(format!(
                "grid has {} axes but the Hamiltonian dimension is {}",
                self.grid.axes.len(),
                self.hamiltonian.dim
            ));
        }
        if self.grid.axes.iter().any(|a| a.count < 2) {
            return bad("every grid axis needs at least 2 nodes".into());
        }
        self.grid
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        let s = &self.solvers;
        if s.run.is_empty() {
            return bad("no solver selected".into());
        }
        if !(s.dt > 0.0) || s.k == 0 || s.dual_resolution < 2 || !(s.cfl > 0.0 && s.cfl <= 1.0) {
            return bad(
                "solver parameters out of range (dt > 0, k ≥ 1, dual_resolution ≥ 2, cfl ∈ (0, 1])"
                    .into(),
            );
        }
        if s.site_step.is_some_and(|h| !(h > 0.0)) {
            return bad("site_step must be positive".into());
        }
        if let Some(e) = &self.checks.entropy {
            if !s.run.contains(&e.field) {
                return bad(format!("entropy check on {:?}, which is not run", e.field));
            }
            if !matches!(
                e.field,
                SolverKind::InfFamily
                    | SolverKind::Variational
                    | SolverKind::Hopf
                    | SolverKind::Iterated
            ) {
                return bad(format!("{:?} fields carry no generating family", e.field));
            }
        }
        Ok(())
    }
}
