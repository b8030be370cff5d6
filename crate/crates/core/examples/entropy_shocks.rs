//! Shock admissibility for convex and concave H, then a full field scan.

use hjlab::entropy::{classify_shock_d1, scan_field, EnvelopeMode, DEFAULT_DENSITY, DEFAULT_TOL};
use hjlab::semiconcave::SemiConcaveFn;
use hjlab::weak_solvers::{inf_family_solution, EvolveParams};
use hjlab::{Grid, HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let u = SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
    let grid = Grid::line(-2.0, 2.0, 81)?;
    for model in [
        HamiltonianModel::quadratic(1)?,
        HamiltonianModel::neg_quadratic(1)?,
    ] {
        let shock = classify_shock_d1(&model, 1.0, -1.0, DEFAULT_TOL)?;
        println!(
            "{}: jump 1 -> -1 has speed {:+.3}, admissible {}, worst chord point s = {}",
            model.id(),
            shock.speed,
            shock.admissible,
            shock.chord.worst_s
        );
        let field = inf_family_solution(&model, &u, 1.0, &grid, &EvolveParams::default())?;
        let scan = scan_field(
            &model,
            &field,
            EnvelopeMode::Convex,
            DEFAULT_DENSITY,
            DEFAULT_TOL,
        )?;
        for r in &scan.reports {
            println!(
                "  kink at x = {:+.3}: pass {}, worst margin {:?}",
                r.x[0], r.pass, r.worst_margin
            );
        }
    }
    Ok(())
}
