use super::field::{Provenance, SolutionField};
use super::inf_family::transported_slope;
use crate::error::{check_dim, invalid, Error, Result};
use crate::grid::Grid;
use crate::hamiltonian::HamiltonianModel;
use crate::vector::Vector;

/// Values beyond this magnitude are treated as a blow-up of the scheme.
const OVERFLOW: f64 = 1e12;

/// Monotone Lax–Friedrichs approximation of the viscosity solution in one
/// dimension. The scheme runs on a grid enlarged by its numerical domain of
/// dependence, with linearly extrapolated ghost values, and is restricted back
/// to `grid`.
pub fn fd_viscosity_oracle(
    model: &HamiltonianModel,
    u0: &(dyn Fn(&Vector) -> f64 + Sync),
    t: f64,
    grid: &Grid,
    cfl: f64,
) -> Result<SolutionField> {
    check_dim(model.dim(), grid.dim())?;
    if grid.dim() != 1 {
        return Err(invalid("the finite-difference oracle is one-dimensional"));
    }
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(invalid(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    if !(t >= 0.0) {
        return Err(invalid(format!("t must be nonnegative, got {t}")));
    }
    let h = grid.max_spacing();
    let (lo, hi) = grid.bounds();
    let centre = (lo + hi) * 0.5;
    // viscosity from the slopes on the enlarged grid, which in turn depends on
    // the viscosity through the travel distance
    let mut alpha: f64 = 1e-9;
    let mut margin = 10.0 * h;
    let mut wide = grid.expanded(margin);
    for _ in 0..4 {
        let (g, _) = &wide;
        let initial: Vec<f64> = g.nodes().map(|x| u0(&x)).collect();
        let slope = initial
            .windows(2)
            .map(|w| ((w[1] - w[0]) / h).abs())
            .fold(0.0, f64::max);
        let radius = transported_slope(model, slope, t) * 1.05 + 1e-9;
        let (wlo, whi) = g.bounds();
        let speed = [wlo, whi, centre]
            .iter()
            .map(|x| model.max_speed(0.0, x, radius))
            .fold(0.0, f64::max);
        alpha = alpha.max(1.05 * speed);
        let next = 1.1 * t * alpha + 10.0 * h;
        if next <= margin {
            break;
        }
        margin = next;
        wide = grid.expanded(margin);
    }
    let (wide, offset) = wide;
    let dt_max = cfl * h / alpha;
    let steps = (t / dt_max).ceil() as usize;
    let xs: Vec<Vector> = wide.nodes().collect();
    let mut u: Vec<f64> = xs.iter().map(u0).collect();
    let n = u.len();
    let mut next = vec![0.0; n];
    let dt = if steps > 0 { t / steps as f64 } else { 0.0 };
    for step in 0..steps {
        let s = step as f64 * dt;
        let at = |i: isize, u: &[f64]| -> f64 {
            if i < 0 {
                2.0 * u[0] - u[1]
            } else if i as usize >= n {
                2.0 * u[n - 1] - u[n - 2]
            } else {
                u[i as usize]
            }
        };
        for i in 0..n {
            let (l, c, r) = (at(i as isize - 1, &u), u[i], at(i as isize + 1, &u));
            let forward = (r - c) / h;
            let backward = (c - l) / h;
            let p = Vector::d1(0.5 * (forward + backward));
            next[i] = c - dt * (model.value(s, &xs[i], &p) - 0.5 * alpha * (forward - backward));
        }
        std::mem::swap(&mut u, &mut next);
        if let Some(i) = u.iter().position(|v| !v.is_finite() || v.abs() > OVERFLOW) {
            return Err(Error::Stability(format!(
                "value {} at x = {} after t = {}",
                u[i],
                xs[i][0],
                (step + 1) as f64 * dt
            )));
        }
    }
    let values = wide
        .sub_indices(grid, offset)
        .into_iter()
        .map(|i| u[i])
        .collect();
    Ok(
        SolutionField::new(t, grid.clone(), values, Provenance::FdOracle)?
            .with_meta("cfl", cfl)
            .with_meta("steps", steps)
            .with_meta("viscosity", alpha),
    )
}
