//! Superdifferential of the minimum of three planes at their common point.

use hjlab::semiconcave::{SemiConcaveFn, CLUSTER_TOL};
use hjlab::Vector;

fn main() -> hjlab::Result<()> {
    let slopes = [
        Vector::d2(1.0, 0.0),
        Vector::d2(-1.0, 0.5),
        Vector::d2(0.0, -1.0),
    ];
    let u = SemiConcaveFn::min_affine(&slopes, &[0.0; 3])?;
    for x in [Vector::zeros(2), Vector::d2(0.3, 0.0), Vector::d2(2.0, 2.0)] {
        let sd = u.superdifferential(&x, CLUSTER_TOL);
        let verts: Vec<String> = sd
            .extreme_vertices()
            .map(|v| format!("({:.2}, {:.2})", v.p[0], v.p[1]))
            .collect();
        println!(
            "x = ({:.1}, {:.1}): extreme supergradients {}",
            x[0],
            x[1],
            verts.join(" ")
        );
    }
    Ok(())
}
