use super::field::{Provenance, SolutionField};
use super::inf_family::travel_margin;
use super::variational::{variational_between, VariationalParams};
use crate::error::{check_dim, invalid, Result};
use crate::grid::Grid;
use crate::hamiltonian::HamiltonianModel;
use crate::semiconcave::{SampledFn1d, SuperdifferentiableFn};

/// Composition of `k`-per-unit-time variational steps: at every substep the
/// current nodal values are turned into a fresh generating family, evolved by
/// one substep and minimized again. One-dimensional only.
pub fn iterated_variational(
    model: &HamiltonianModel,
    u0: &dyn SuperdifferentiableFn,
    t: f64,
    grid: &Grid,
    params: &VariationalParams,
    k: usize,
) -> Result<SolutionField> {
    check_dim(model.dim(), u0.dim())?;
    check_dim(model.dim(), grid.dim())?;
    if grid.dim() != 1 {
        return Err(invalid(
            "the iterated operator is implemented in one dimension",
        ));
    }
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let t0 = params.evolve.start_time;
    if !(t >= t0) {
        return Err(invalid(format!("need t >= {t0}, got {t}")));
    }
    let step = 1.0 / k as f64;
    if step >= t - t0 {
        let f = variational_between(model, u0, t0, t, grid, params)?;
        return Ok(relabel(f, k, 1));
    }
    // the data outside `grid` influence it only through characteristics, so a
    // margin covering the whole run keeps the boundary error out
    let margin = travel_margin(model, grid, u0.lipschitz(), t - t0);
    let (wide, offset) = grid.expanded(margin);
    let xs = wide.axis(0).values();
    let mut values: Vec<f64> = wide.nodes().map(|x| u0.value(&x)).collect();
    let mut s = t0;
    let mut steps = 0;
    let mut field = None;
    while s < t {
        let next = if t - (s + step) < 1e-12 { t } else { s + step };
        let data = SampledFn1d::new(xs.clone(), values)?;
        let f = variational_between(model, &data, s, next, &wide, params)?;
        values = f.values.clone();
        field = Some(f);
        s = next;
        steps += 1;
    }
    let f = field.expect("at least one substep").restrict(grid, offset);
    Ok(relabel(f, k, steps))
}

fn relabel(mut f: SolutionField, k: usize, steps: usize) -> SolutionField {
    f.provenance = Provenance::Iterated(k);
    f.with_meta("k", k).with_meta("substeps", steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiconcave::SemiConcaveFn;
    use crate::vector::Vector;

    fn neg_abs() -> SemiConcaveFn {
        SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0]).unwrap()
    }

    #[test]
    fn a_single_long_step_is_the_variational_solution() {
        let m = HamiltonianModel::quadratic(1).unwrap();
        let g = Grid::line(-1.0, 1.0, 21).unwrap();
        let p = VariationalParams::default();
        let a = iterated_variational(&m, &neg_abs(), 0.5, &g, &p, 1).unwrap();
        let b = crate::weak_solvers::variational_solution(&m, &neg_abs(), 0.5, &g, &p).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.provenance, Provenance::Iterated(1));
    }

    #[test]
    fn concave_hamiltonian_reaches_the_rarefaction() {
        let m = HamiltonianModel::neg_quadratic(1).unwrap();
        let g = Grid::line(-2.0, 2.0, 81).unwrap();
        let f = iterated_variational(&m, &neg_abs(), 1.0, &g, &Default::default(), 16).unwrap();
        for (x, v) in g.nodes().zip(&f.values) {
            let x = x[0];
            let exact = if x.abs() <= 1.0 {
                -x * x / 2.0
            } else {
                -x.abs() + 0.5
            };
            assert!((v - exact).abs() < 5e-2, "{x}: {v} vs {exact}");
        }
    }
}
