//! Traces one characteristic of the harmonic oscillator and prints the path.

use hjlab::characteristics::{integrate_hs, PhaseState};
use hjlab::{HamiltonianModel, Vector};

fn main() -> hjlab::Result<()> {
    let model = HamiltonianModel::oscillator()?;
    let start = PhaseState {
        q: Vector::d1(1.0),
        p: Vector::d1(0.0),
    };
    let arc = integrate_hs(&model, start, 0.0, std::f64::consts::PI, 0.05)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "t", "q", "p", "action");
    for (i, (t, s)) in arc.times.iter().zip(&arc.states).enumerate().step_by(8) {
        println!(
            "{t:8.4} {:10.6} {:10.6} {:10.6}",
            s.q[0], s.p[0], arc.action[i]
        );
    }
    let (t, s, _) = arc.last();
    println!("at t = {t:.4}: q = {:.8} (exact -1)", s.q[0]);
    Ok(())
}
