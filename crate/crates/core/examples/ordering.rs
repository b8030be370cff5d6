//! Compares the viscosity, variational and inf-family solutions for a
//! concave Hamiltonian and prints the ordering report.

use hjlab::semiconcave::SemiConcaveFn;
use hjlab::weak_solvers::{
    compare_solutions, fd_viscosity_oracle, inf_family_solution, variational_solution, EvolveParams,
};
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let model = HamiltonianModel::neg_quadratic(1)?;
    let u = SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
    let grid = Grid::line(-2.0, 2.0, 201)?;
    let fields = vec![
        fd_viscosity_oracle(&model, &|x: &Vector| -x[0].abs(), 1.0, &grid, 0.9)?,
        variational_solution(&model, &u, 1.0, &grid, &Default::default())?,
        inf_family_solution(&model, &u, 1.0, &grid, &EvolveParams::default())?,
    ];
    for f in &fields {
        println!(
            "{:>12}: u(1, 0) = {:+.4}",
            f.provenance.to_string(),
            f.nearest(&Vector::d1(0.0))
        );
    }
    let report = compare_solutions(&fields, 5e-2)?;
    for p in &report.pairs {
        println!(
            "{} <= {}: {} (max violation {:.2e})",
            p.lower, p.upper, p.ordered, p.max_violation
        );
    }
    Ok(())
}
