//! Convergence of the iterated variational operator to the viscosity
//! solution of a concave rarefaction as the number of substeps grows.

use hjlab::semiconcave::SemiConcaveFn;
use hjlab::weak_solvers::iterated_variational;
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let model = HamiltonianModel::neg_quadratic(1)?;
    let u = SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
    let grid = Grid::line(-2.0, 2.0, 201)?;
    // viscosity solution: a rarefaction fan -x²/2 for |x| <= 1, -|x| + 1/2 outside
    let exact: Vec<f64> = grid
        .nodes()
        .map(|x| {
            if x[0].abs() <= 1.0 {
                -x[0] * x[0] / 2.0
            } else {
                0.5 - x[0].abs()
            }
        })
        .collect();
    for k in [1, 2, 4, 8, 16, 32] {
        let f = iterated_variational(&model, &u, 1.0, &grid, &Default::default(), k)?;
        println!(
            "k = {k:2}: distance to the exact fan {:.3e}",
            f.sup_distance(&exact)
        );
    }
    Ok(())
}
