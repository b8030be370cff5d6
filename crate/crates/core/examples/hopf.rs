//! Concave dual of u0 = -|x| and the Hopf solution for two Hamiltonians.

use hjlab::weak_solvers::{hopf_solution, legendre_concave_dual};
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let dual = legendre_concave_dual(
        &|x: &Vector| -x[0].abs(),
        &Grid::line(-4.0, 4.0, 401)?,
        &Grid::line(-2.0, 2.0, 41)?,
    )?;
    let kept: Vec<String> = dual
        .p_nodes
        .iter()
        .map(|p| format!("{:.1}", p[0]))
        .collect();
    println!("dual domain nodes: {}", kept.join(" "));
    let grid = Grid::line(-2.0, 2.0, 9)?;
    for model in [
        HamiltonianModel::quadratic(1)?,
        HamiltonianModel::rel_kinetic(1)?,
    ] {
        let f = hopf_solution(&model, &dual, 1.0, &grid)?;
        let row: Vec<String> = f.values.iter().map(|v| format!("{v:+.3}")).collect();
        println!("{:>13}: {}", model.id(), row.join(" "));
    }
    Ok(())
}
