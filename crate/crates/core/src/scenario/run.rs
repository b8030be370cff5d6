use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::config::{ScenarioConfig, SolverKind};
use super::initial::InitialCondition;
use crate::entropy::{scan_field, EntropyScan};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};
use crate::hamiltonian::{Convexity, HamiltonianModel};
use crate::semiconcave::GeneratorKind;
use crate::vector::Vector;
use crate::weak_solvers::{
    compare_solutions, fd_viscosity_oracle, hopf_solution, inf_family_solution,
    iterated_variational, lax_oleinik, legendre_concave_dual_at, variational_solution,
    DualFunction, EvolveParams, OrderingReport, Provenance, SolutionField, VariationalParams,
};

/// A failure together with the stage that raised it.
#[derive(Debug)]
pub struct RunError {
    pub stage: String,
    pub source: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.source)
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

impl RunError {
    fn at(stage: impl Into<String>) -> impl FnOnce(Error) -> RunError {
        let stage = stage.into();
        move |source| RunError { stage, source }
    }

    /// 2 for invalid configurations, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self.source {
            Error::Config(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => 2,
            _ => 3,
        }
    }
}

/// Checks that `--assert` can turn into a nonzero exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Ordering,
    EntropyPass,
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ordering" => Ok(Check::Ordering),
            "entropy-pass" => Ok(Check::EntropyPass),
            _ => Err(format!(
                "unknown check `{s}` (expected `ordering` or `entropy-pass`)"
            )),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunOutcome {
    pub name: String,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub ordering: Vec<OrderingReport>,
    pub entropy: Vec<EntropyScan>,
}

impl RunOutcome {
    /// Descriptions of the requested checks that failed.
    pub fn failed_checks(&self, checks: &[Check]) -> Vec<String> {
        let mut out = Vec::new();
        for c in checks {
            match c {
                Check::Ordering => {
                    for r in self.ordering.iter().filter(|r| !r.pass) {
                        out.push(format!(
                            "ordering at t = {}: violation {:.3e} > {:.3e}",
                            r.t, r.max_violation, r.tol
                        ));
                    }
                }
                Check::EntropyPass => {
                    if self.entropy.is_empty() {
                        out.push("entropy: no entropy check configured".into());
                    }
                    for s in self.entropy.iter().filter(|s| !s.pass) {
                        out.push(format!(
                            "entropy at t = {}: {} of {} nonsmooth nodes fail",
                            s.t,
                            s.failures,
                            s.reports.len()
                        ));
                    }
                }
            }
        }
        out
    }
}

struct Prepared {
    model: HamiltonianModel,
    initial: InitialCondition,
    grid: Grid,
}

fn prepare(cfg: &ScenarioConfig, base: &Path) -> Result<Prepared> {
    cfg.validate()?;
    let hs = &cfg.hamiltonian;
    let config = |e: Error| Error::Config(e.to_string());
    let mut model = HamiltonianModel::from_id(&hs.id, hs.dim).map_err(config)?;
    if let Some(a) = hs.bound_a {
        model = model.with_bound_a(a);
    }
    let grid = cfg.grid.build()?;
    let initial = InitialCondition::from_id(&cfg.initial.id, hs.dim, base, &grid)?;
    for solver in &cfg.solvers.run {
        let reject = |why: &str| Err(Error::Config(format!("{solver:?}: {why}")));
        match solver {
            SolverKind::InfFamily | SolverKind::Variational | SolverKind::Iterated
                if !model.is_smooth() =>
            {
                return reject("characteristics need a smooth Hamiltonian");
            }
            SolverKind::Iterated | SolverKind::FdOracle if hs.dim != 1 => {
                return reject("one-dimensional only");
            }
            SolverKind::Hopf if !model.is_momentum_only() => {
                return reject("the Hopf formula needs H = H(p)");
            }
            SolverKind::Hopf if !initial.is_concave() => {
                return reject("the Hopf formula needs concave initial data");
            }
            SolverKind::LaxOleinik
                if model.convexity() != Convexity::ConvexInP || !model.is_momentum_only() =>
            {
                return reject("Lax–Oleinik needs a convex H = H(p)");
            }
            _ => {}
        }
    }
    Ok(Prepared {
        model,
        initial,
        grid,
    })
}

/// Symmetric covector box `[−r, r]^d` with `n` nodes per axis.
fn covector_box(dim: usize, r: f64, n: usize) -> Result<Grid> {
    Grid::new(
        (0..dim)
            .map(|_| Axis::new(-r, r, n))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn dual_for(p: &Prepared, resolution: usize) -> Result<DualFunction> {
    let r = 2.0 * p.initial.lipschitz() + 1.0;
    let (x_grid, _) = p.grid.expanded(r);
    let mut p_nodes: Vec<Vector> = covector_box(p.grid.dim(), r, resolution)?.nodes().collect();
    // the slopes of affine data are the corners of the dual domain
    if let InitialCondition::Family { family, .. } = &p.initial {
        for g in family.generators() {
            if matches!(g.kind, GeneratorKind::Affine) && !p_nodes.contains(&g.p) {
                p_nodes.push(g.p);
            }
        }
    }
    let u = |x: &Vector| p.initial.value(x);
    legendre_concave_dual_at(&u, &x_grid, &p_nodes)
}

fn lax_oleinik_field(p: &Prepared, t: f64, resolution: usize) -> Result<SolutionField> {
    let u = |x: &Vector| p.initial.value(x);
    if t == 0.0 {
        let values = p.grid.nodes().map(|x| u(&x)).collect();
        return Ok(
            SolutionField::new(0.0, p.grid.clone(), values, Provenance::LaxOleinik)?
                .with_meta("identity", true),
        );
    }
    let l = p.initial.lipschitz();
    let r = 2.0 * l + 1.0;
    let centre = Vector::zeros(p.grid.dim());
    let margin = 1.1 * t * p.model.max_speed(0.0, &centre, l) + 2.0 * p.grid.max_spacing();
    let (y_grid, _) = p.grid.expanded(margin);
    let p_grid = covector_box(p.grid.dim(), r, resolution)?;
    lax_oleinik(&p.model, &u, t, &p.grid, &y_grid, &p_grid)
}

fn solve(
    p: &Prepared,
    cfg: &ScenarioConfig,
    solver: SolverKind,
    t: f64,
    dual: &Option<DualFunction>,
) -> Result<SolutionField> {
    let s = &cfg.solvers;
    let evolve = EvolveParams {
        dt: s.dt,
        start_time: 0.0,
    };
    let vparams = VariationalParams {
        evolve,
        site_step: s.site_step,
    };
    match solver {
        SolverKind::InfFamily => {
            inf_family_solution(&p.model, &p.initial.family()?, t, &p.grid, &evolve)
        }
        SolverKind::Variational => variational_solution(
            &p.model,
            p.initial.as_superdifferentiable(),
            t,
            &p.grid,
            &vparams,
        ),
        SolverKind::Iterated => iterated_variational(
            &p.model,
            p.initial.as_superdifferentiable(),
            t,
            &p.grid,
            &vparams,
            s.k,
        ),
        SolverKind::Hopf => hopf_solution(
            &p.model,
            dual.as_ref().expect("dual computed when Hopf is requested"),
            t,
            &p.grid,
        ),
        SolverKind::LaxOleinik => lax_oleinik_field(p, t, s.dual_resolution),
        SolverKind::FdOracle => {
            let u = |x: &Vector| p.initial.value(x);
            fd_viscosity_oracle(&p.model, &u, t, &p.grid, s.cfl)
        }
    }
}

/// File name of the fields at time `t`.
pub fn fields_file_name(t: f64) -> String {
    format!("fields_t{t}.csv")
}

fn write_fields(dir: &Path, t: f64, fields: &[SolutionField]) -> Result<Vec<PathBuf>> {
    let grid = &fields[0].grid;
    let mut header: Vec<String> = if grid.dim() == 1 {
        vec!["x".into()]
    } else {
        vec!["x".into(), "y".into()]
    };
    header.extend(fields.iter().map(|f| f.provenance.to_string()));
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            let x = grid.node(i);
            x.as_slice()
                .iter()
                .copied()
                .chain(fields.iter().map(|f| f.values[i]))
                .map(|v| format!("{v:.16e}"))
                .collect()
        })
        .collect();

    let csv_path = dir.join(fields_file_name(t));
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(&header)?;
    for r in &rows {
        w.write_record(r)?;
    }
    w.flush()?;

    let dat_path = csv_path.with_extension("dat");
    let mut dat = format!("# t = {t}\n# {}\n", header.join(" "));
    let [_, n1] = grid.shape();
    for (i, r) in rows.iter().enumerate() {
        dat.push_str(&r.join(" "));
        dat.push('\n');
        // blank line between scan lines for surface plots
        if grid.dim() == 2 && (i + 1) % n1 == 0 {
            dat.push('\n');
        }
    }
    fs::write(&dat_path, dat)?;
    Ok(vec![csv_path, dat_path])
}

/// Runs every configured solver at every time, writes the field tables and
/// the reports into the output directory (`out`, else the configured one,
/// else `out/<name>`), and returns the reports.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    base: &Path,
    out: Option<&Path>,
) -> std::result::Result<RunOutcome, RunError> {
    let prepared = prepare(cfg, base).map_err(RunError::at("config"))?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    fs::create_dir_all(&dir).map_err(|e| RunError::at("output")(e.into()))?;
    let dual = if cfg.solvers.run.contains(&SolverKind::Hopf) {
        Some(
            dual_for(&prepared, cfg.solvers.dual_resolution)
                .map_err(RunError::at("legendre dual"))?,
        )
    } else {
        None
    };
    let mut outcome = RunOutcome {
        name: cfg.name.clone(),
        output_dir: dir.clone(),
        files: Vec::new(),
        ordering: Vec::new(),
        entropy: Vec::new(),
    };
    for &t in &cfg.times {
        let mut fields = Vec::with_capacity(cfg.solvers.run.len());
        for &solver in &cfg.solvers.run {
            let f = solve(&prepared, cfg, solver, t, &dual)
                .map_err(RunError::at(format!("{solver:?} at t = {t}")))?;
            fields.push((solver, f));
        }
        let plain: Vec<SolutionField> = fields.iter().map(|(_, f)| f.clone()).collect();
        let files = write_fields(&dir, t, &plain).map_err(RunError::at("output"))?;
        outcome.files.extend(files);
        outcome.ordering.push(
            compare_solutions(&plain, cfg.checks.ordering_tol)
                .map_err(RunError::at(format!("ordering at t = {t}")))?,
        );
        if let Some(spec) = &cfg.checks.entropy {
            let (_, field) = fields
                .iter()
                .find(|(s, _)| *s == spec.field)
                .expect("validated: the scanned field is run");
            let scan = scan_field(&prepared.model, field, spec.mode, spec.density, spec.tol)
                .map_err(RunError::at(format!("entropy at t = {t}")))?;
            outcome.entropy.push(scan);
        }
    }
    let p = write_json(&dir, "ordering_report.json", &outcome.ordering)
        .map_err(RunError::at("output"))?;
    outcome.files.push(p);
    if cfg.checks.entropy.is_some() {
        let p = write_json(&dir, "entropy_report.json", &outcome.entropy)
            .map_err(RunError::at("output"))?;
        outcome.files.push(p);
    }
    Ok(outcome)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(path)
}
