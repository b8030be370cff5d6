//! Convex and concave envelopes of scattered data in the plane.

use hjlab::entropy::{envelope_value, EnvelopeMode, EnvelopeQuery};
use hjlab::Vector;

fn main() -> hjlab::Result<()> {
    let points = vec![
        (Vector::d2(0.0, 0.0), 1.0),
        (Vector::d2(1.0, 0.0), 0.0),
        (Vector::d2(0.0, 1.0), 0.0),
        (Vector::d2(1.0, 1.0), 1.0),
        (Vector::d2(0.5, 0.5), -0.2),
    ];
    for q in [
        Vector::d2(0.5, 0.5),
        Vector::d2(0.25, 0.5),
        Vector::d2(0.9, 0.1),
    ] {
        let at = |mode| {
            envelope_value(&EnvelopeQuery {
                points: points.clone(),
                query: q,
                mode,
            })
        };
        println!(
            "q = ({:.2}, {:.2}): convex {:+.4}, concave {:+.4}",
            q[0],
            q[1],
            at(EnvelopeMode::Convex)?,
            at(EnvelopeMode::Concave)?
        );
    }
    Ok(())
}
