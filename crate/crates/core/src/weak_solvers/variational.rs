use serde::Serialize;

use super::field::{Provenance, SolutionField};
use super::inf_family::{evolve_family, family_field, travel_margin, EvolveParams};
use crate::error::{check_dim, invalid, Result};
use crate::grid::{Axis, Grid};
use crate::hamiltonian::HamiltonianModel;
use crate::semiconcave::{build_family_f0, SuperdifferentiableFn, ESTIMATE_MAX, ESTIMATE_MIN};
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VariationalParams {
    pub evolve: EvolveParams,
    /// Spacing of the family's base points; the grid spacing when `None`.
    pub site_step: Option<f64>,
}

/// Sites covering `grid` plus `margin`: the enlarged grid itself when no step
/// is given (so sites coincide with data nodes), otherwise a lattice of
/// spacing `step` anchored at the grid's lower corner.
pub(crate) fn site_grid(grid: &Grid, margin: f64, step: Option<f64>) -> Result<Grid> {
    let Some(h) = step else {
        return Ok(grid.expanded(margin).0);
    };
    if !(h > 0.0) {
        return Err(invalid(format!("site step must be positive, got {h}")));
    }
    let axes = grid
        .axes()
        .iter()
        .map(|a| {
            let before = (margin / h).ceil();
            let lo = a.min - before * h;
            let count = ((a.max + margin - lo) / h).ceil() as usize + 1;
            Axis::new(lo, lo + (count - 1) as f64 * h, count.max(2))
        })
        .collect::<Result<Vec<_>>>()?;
    Grid::new(axes)
}

/// Variational solution at time `t`: rebuilds the generating family of `u0`
/// from its supergradients on a site grid and takes the minimum of the family
/// evolved by characteristics.
pub fn variational_solution(
    model: &HamiltonianModel,
    u0: &dyn SuperdifferentiableFn,
    t: f64,
    grid: &Grid,
    params: &VariationalParams,
) -> Result<SolutionField> {
    variational_between(model, u0, params.evolve.start_time, t, grid, params)
}

pub(crate) fn variational_between(
    model: &HamiltonianModel,
    u0: &dyn SuperdifferentiableFn,
    t0: f64,
    t1: f64,
    grid: &Grid,
    params: &VariationalParams,
) -> Result<SolutionField> {
    check_dim(model.dim(), u0.dim())?;
    check_dim(model.dim(), grid.dim())?;
    if !(t1 >= t0) {
        return Err(invalid(format!("need t >= {t0}, got {t1}")));
    }
    let declared_l = u0.lipschitz();
    let margin = travel_margin(model, grid, declared_l, t1 - t0);
    let sites = site_grid(grid, margin, params.site_step)?;
    let site_points: Vec<Vector> = sites.nodes().collect();
    let observed_l = site_points
        .iter()
        .flat_map(|x| u0.supergradients(x))
        .map(|p| p.norm())
        .fold(0.0, f64::max);
    let l = declared_l.max(observed_l).clamp(ESTIMATE_MIN, ESTIMATE_MAX);
    let b = u0.semiconcavity().clamp(ESTIMATE_MIN, ESTIMATE_MAX);
    let family = build_family_f0(u0, &site_points, b, l)?;
    let evolved = evolve_family(model, family.generators(), t0, t1, grid, params.evolve.dt)?;
    let field = if t1 == t0 {
        let values = grid.nodes().map(|x| family.eval_min(&x).0).collect();
        SolutionField::new(t1, grid.clone(), values, Provenance::Variational)?
    } else {
        family_field(evolved, grid, Provenance::Variational)?
    };
    Ok(field
        .with_meta("dt", params.evolve.dt)
        .with_meta("sites", sites.len())
        .with_meta("b", b)
        .with_meta("l", l))
}

/// Both sides of `G_{s1}^{s2} ∘ G_{s0}^{s1} u ≤ G_{s0}^{s2} u` on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct SemigroupReport {
    pub times: [f64; 3],
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// `max(left − right)`.
    pub max_violation: f64,
    pub max_abs_difference: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Computes the two-leg and one-leg variational solutions. The intermediate
/// field is turned back into an initial condition through its nodal samples
/// (`d = 1`) on a grid enlarged by the travel distance of the second leg.
pub fn semigroup_inequality_check(
    model: &HamiltonianModel,
    u0: &dyn SuperdifferentiableFn,
    times: [f64; 3],
    grid: &Grid,
    params: &VariationalParams,
    tol: f64,
) -> Result<SemigroupReport> {
    let [s0, s1, s2] = times;
    if !(s0 <= s1 && s1 <= s2) {
        return Err(invalid(format!("times must be ordered, got {times:?}")));
    }
    if grid.dim() != 1 {
        return Err(invalid(
            "the semigroup check resamples in one dimension only",
        ));
    }
    let right = variational_between(model, u0, s0, s2, grid, params)?;
    let left = if s1 == s0 {
        right.values.clone()
    } else {
        let margin = travel_margin(model, grid, u0.lipschitz(), s2 - s1);
        let (wide, offset) = grid.expanded(margin);
        let mid = variational_between(model, u0, s0, s1, &wide, params)?;
        let data = crate::semiconcave::SampledFn1d::new(wide.axis(0).values(), mid.values.clone())?;
        let second = variational_between(model, &data, s1, s2, &wide, params)?;
        second.restrict(grid, offset).values
    };
    let max_violation = left
        .iter()
        .zip(&right.values)
        .map(|(l, r)| l - r)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_abs_difference = right.sup_distance(&left);
    Ok(SemigroupReport {
        times,
        left,
        right: right.values,
        max_violation,
        max_abs_difference,
        tol,
        pass: max_violation <= tol,
    })
}
