//! Builds the radial cap profile and a generating family for u0 = -|x|.

use hjlab::semiconcave::{build_family_f0, build_phi, hessian_norm_radial, SemiConcaveFn};
use hjlab::{Grid, Vector};

fn main() -> hjlab::Result<()> {
    let profile = build_phi(1.0, 1.0, 9)?;
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>8}",
        "r", "psi", "Psi", "phi", "|D²|"
    );
    for row in profile.table() {
        println!(
            "{:8.3} {:10.5} {:10.5} {:10.5} {:8.4}",
            row[0],
            row[1],
            row[2],
            row[3],
            hessian_norm_radial(&profile, row[0])
        );
    }

    let u = SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
    let sites: Vec<Vector> = Grid::line(-2.0, 2.0, 81)?.nodes().collect();
    let family = build_family_f0(&u, &sites, 1.0, 1.0)?;
    let err = Grid::line(-2.0, 2.0, 401)?
        .nodes()
        .map(|x| (family.eval_min(&x).0 + x[0].abs()).abs())
        .fold(0.0, f64::max);
    println!(
        "{} generators, reconstruction error {err:.2e}",
        family.generators().len()
    );
    Ok(())
}
