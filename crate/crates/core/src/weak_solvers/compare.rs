use serde::Serialize;

use super::field::SolutionField;
use crate::error::{invalid, Result};
use crate::vector::Vector;

/// Comparison of two fields; `lower` is expected to be below `upper` when
/// `ordered` is set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub lower: String,
    pub upper: String,
    pub ordered: bool,
    /// `max(lower − upper)`; positive values violate the ordering.
    pub max_violation: f64,
    pub worst_x: Vector,
    pub max_abs_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingReport {
    pub t: f64,
    pub tol: f64,
    pub pairs: Vec<PairReport>,
    pub max_violation: f64,
    pub pass: bool,
}

/// Checks `viscosity ≤ variational ≤ inf-family` on every node for each pair
/// of fields with different ranks; pairs of equal rank only report their
/// distance.
pub fn compare_solutions(fields: &[SolutionField], tol: f64) -> Result<OrderingReport> {
    let first = fields
        .first()
        .ok_or_else(|| invalid("no fields to compare"))?;
    for f in &fields[1..] {
        if f.grid != first.grid {
            return Err(invalid(format!(
                "{} and {} live on different grids",
                first.provenance, f.provenance
            )));
        }
        if f.t != first.t {
            return Err(invalid(format!(
                "{} is at t = {} but {} at t = {}",
                first.provenance, first.t, f.provenance, f.t
            )));
        }
    }
    let mut pairs = Vec::new();
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i + 1..] {
            let (lo, hi) = if a.provenance.rank() <= b.provenance.rank() {
                (a, b)
            } else {
                (b, a)
            };
            let ordered = lo.provenance.rank() < hi.provenance.rank();
            let (mut worst, mut at) = (f64::NEG_INFINITY, 0);
            for (k, (x, y)) in lo.values.iter().zip(&hi.values).enumerate() {
                if x - y > worst {
                    worst = x - y;
                    at = k;
                }
            }
            pairs.push(PairReport {
                lower: lo.provenance.to_string(),
                upper: hi.provenance.to_string(),
                ordered,
                max_violation: worst,
                worst_x: first.grid.node(at),
                max_abs_difference: lo.sup_distance(&hi.values),
            });
        }
    }
    let max_violation = pairs
        .iter()
        .filter(|p| p.ordered)
        .map(|p| p.max_violation)
        .fold(0.0, f64::max);
    Ok(OrderingReport {
        t: first.t,
        tol,
        pairs,
        max_violation,
        pass: max_violation <= tol,
    })
}
