//! For convex H all solution concepts coincide: five solvers on Burgers data.

use hjlab::semiconcave::SemiConcaveFn;
use hjlab::weak_solvers::{
    fd_viscosity_oracle, hopf_solution, iterated_variational, lax_oleinik, legendre_concave_dual,
    variational_solution,
};
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let model = HamiltonianModel::quadratic(1)?;
    let u0 = |x: &Vector| -x[0].abs();
    let family = SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
    let grid = Grid::line(-2.0, 2.0, 201)?;
    let y = Grid::line(-4.0, 4.0, 801)?;
    let p = Grid::line(-3.0, 3.0, 601)?;
    let dual = legendre_concave_dual(&u0, &y, &p)?;
    let fields = [
        hopf_solution(&model, &dual, 1.0, &grid)?,
        lax_oleinik(&model, &u0, 1.0, &grid, &y, &p)?,
        variational_solution(&model, &family, 1.0, &grid, &Default::default())?,
        iterated_variational(&model, &family, 1.0, &grid, &Default::default(), 8)?,
        fd_viscosity_oracle(&model, &u0, 1.0, &grid, 0.9)?,
    ];
    for f in &fields {
        println!(
            "{:>14}: u(1,0) = {:+.5}, distance to hopf {:.2e}",
            f.provenance.to_string(),
            f.nearest(&Vector::d1(0.0)),
            f.sup_distance(&fields[0].values)
        );
    }
    Ok(())
}
