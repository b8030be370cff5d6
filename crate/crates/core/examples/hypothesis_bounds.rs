//! Samples the growth bounds of a few built-in Hamiltonians.

use hjlab::hamiltonian::{check_hypothesis1, SampleBox};
use hjlab::HamiltonianModel;

fn main() -> hjlab::Result<()> {
    let sample_box = SampleBox {
        t: (0.0, 1.0),
        x: vec![(-3.0, 3.0)],
        p: vec![(-5.0, 5.0)],
    };
    for id in ["quadratic", "rel-kinetic", "pendulum", "poly:0,0,0.5,0.1"] {
        let model = HamiltonianModel::from_id(id, 1)?;
        let r = check_hypothesis1(&model, &sample_box, 11)?;
        println!(
            "{id:>18}: A = {:<6} value {:.3} gradient {:.3} hessian {:.3} -> {}",
            r.bound_a,
            r.max_value_ratio,
            r.max_gradient_ratio,
            r.max_hessian_norm,
            if r.pass { "ok" } else { "violated" }
        );
    }
    Ok(())
}
