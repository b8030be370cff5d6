use rayon::prelude::*;

use super::field::{Provenance, SolutionField};
use crate::error::{check_dim, invalid, Error, Result};
use crate::grid::{Axis, Grid};
use crate::hamiltonian::{Convexity, HamiltonianModel};
use crate::vector::Vector;

/// Nodes per axis of the tabulated Lagrangian.
const TABLE_NODES_1D: usize = 4001;
const TABLE_NODES_2D: usize = 201;

/// `L(q) = max_p (p·q − H(p))` over a sampled p-box, tabulated on a q-box.
struct ConjugateTable {
    grid: Grid,
    values: Vec<f64>,
}

impl ConjugateTable {
    fn build(model: &HamiltonianModel, p_grid: &Grid, q_lo: Vector, q_hi: Vector) -> Result<Self> {
        let n = if p_grid.dim() == 1 {
            TABLE_NODES_1D
        } else {
            TABLE_NODES_2D
        };
        let axes = (0..p_grid.dim())
            .map(|k| {
                let (lo, hi) = (q_lo[k], q_hi[k]);
                let pad = 1e-9 + 1e-9 * (hi - lo).abs();
                Axis::new(lo - pad, hi + pad, n)
            })
            .collect::<Result<Vec<_>>>()?;
        let grid = Grid::new(axes)?;
        let origin = Vector::zeros(p_grid.dim());
        let ps: Vec<(Vector, f64)> = p_grid
            .nodes()
            .map(|p| (p, model.value(0.0, &origin, &p)))
            .collect();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let q = grid.node(i);
                ps.iter()
                    .map(|(p, h)| p.dot(&q) - h)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        Ok(Self { grid, values })
    }

    fn eval(&self, q: &Vector) -> f64 {
        self.grid.interpolate(&self.values, q)
    }
}

/// `u(t, x) = min_y [u0(y) + t L((x − y)/t)]` over the nodes of `y_grid`, with
/// the Lagrangian `L` computed from `H` by maximization over `p_grid`.
/// Requires a convex, momentum-only Hamiltonian.
pub fn lax_oleinik(
    model: &HamiltonianModel,
    u0: &(dyn Fn(&Vector) -> f64 + Sync),
    t: f64,
    grid: &Grid,
    y_grid: &Grid,
    p_grid: &Grid,
) -> Result<SolutionField> {
    if model.convexity() != Convexity::ConvexInP {
        return Err(Error::Contract(format!(
            "Lax–Oleinik needs a convex-in-p Hamiltonian, `{}` is tagged {:?}",
            model.id(),
            model.convexity()
        )));
    }
    if !model.is_momentum_only() {
        return Err(Error::Contract(format!(
            "Lax–Oleinik is implemented for H = H(p); `{}` depends on (t, x)",
            model.id()
        )));
    }
    if !(t > 0.0) {
        return Err(invalid(format!("Lax–Oleinik needs t > 0, got {t}")));
    }
    check_dim(model.dim(), grid.dim())?;
    check_dim(model.dim(), y_grid.dim())?;
    check_dim(model.dim(), p_grid.dim())?;
    let (x_lo, x_hi) = grid.bounds();
    let (y_lo, y_hi) = y_grid.bounds();
    let table = ConjugateTable::build(
        model,
        p_grid,
        (x_lo - y_hi) * t.recip(),
        (x_hi - y_lo) * t.recip(),
    )?;
    let ys: Vec<(Vector, f64)> = y_grid.nodes().map(|y| (y, u0(&y))).collect();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            ys.iter()
                .map(|(y, u)| u + t * table.eval(&((x - *y) * t.recip())))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(
        SolutionField::new(t, grid.clone(), values, Provenance::LaxOleinik)?
            .with_meta("y_nodes", y_grid.len())
            .with_meta("p_nodes", p_grid.len()),
    )
}
