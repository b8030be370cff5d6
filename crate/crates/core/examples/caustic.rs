//! Focusing initial data -x²/2 under H = p²/2: characteristics cross at t = 1.

use hjlab::characteristics::evolve_generator;
use hjlab::semiconcave::{AnalyticForm, Generator};
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let model = HamiltonianModel::quadratic(1)?;
    let launch = Grid::line(-1.0, 1.0, 41)?;
    for curvature in [-1.0, -0.5, 0.5] {
        let gen = Generator::analytic(
            Vector::d1(0.0),
            Vector::d1(0.0),
            0.0,
            AnalyticForm::Poly1d(vec![0.0, 0.0, curvature / 2.0]),
        );
        let patch = evolve_generator(&model, &gen, &launch, 3.0, 0.01)?;
        println!(
            "u0 = {curvature} x²/2: caustic at t = {:.4}",
            patch.caustic_time
        );
    }
    Ok(())
}
