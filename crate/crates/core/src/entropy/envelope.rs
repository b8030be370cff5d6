use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::vector::Vector;

/// Feasibility slack for convex-combination coefficients.
const COEFF_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeMode {
    /// Largest convex minorant: infimum over convex combinations.
    Convex,
    /// Smallest concave majorant: supremum over convex combinations.
    Concave,
}

/// Points `(p_i, H(p_i))` and a query covector.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeQuery {
    pub points: Vec<(Vector, f64)>,
    pub query: Vector,
    pub mode: EnvelopeMode,
}

/// Optimum of `Σ a_i H_i` over convex combinations `Σ a_i p_i = query` of at
/// most `d + 1` points, by enumeration of singletons, pairs and (in two
/// dimensions) triples. Fails with [`Error::Infeasible`] when the query lies
/// outside the hull of the points.
pub fn envelope_value(q: &EnvelopeQuery) -> Result<f64> {
    let dim = q.query.dim();
    if q.points.is_empty() {
        return Err(invalid("an envelope needs at least one point"));
    }
    for (p, _) in &q.points {
        check_dim(dim, p.dim())?;
    }
    let better = |a: f64, b: f64| match q.mode {
        EnvelopeMode::Convex => a < b,
        EnvelopeMode::Concave => a > b,
    };
    let mut best: Option<f64> = None;
    let mut offer = |v: f64| {
        if best.is_none_or(|b| better(v, b)) {
            best = Some(v);
        }
    };
    let pts = &q.points;
    let x = q.query;
    let scale = pts.iter().map(|(p, _)| p.norm()).fold(x.norm(), f64::max) + 1.0;
    let tol = COEFF_TOL * scale;
    for (p, h) in pts {
        if p.distance(&x) <= tol {
            offer(*h);
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(s) = on_segment(&pts[i].0, &pts[j].0, &x, tol) {
                offer((1.0 - s) * pts[i].1 + s * pts[j].1);
            }
        }
    }
    if dim == 2 {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    if let Some(a) = in_triangle(&pts[i].0, &pts[j].0, &pts[k].0, &x) {
                        offer(a[0] * pts[i].1 + a[1] * pts[j].1 + a[2] * pts[k].1);
                    }
                }
            }
        }
    }
    best.ok_or(Error::Infeasible)
}

/// Parameter `s ∈ [0, 1]` with `x = (1 − s) a + s b`, if `x` lies on the segment.
fn on_segment(a: &Vector, b: &Vector, x: &Vector, tol: f64) -> Option<f64> {
    let d = *b - *a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return None;
    }
    let s = (*x - *a).dot(&d) / len2;
    if !(-COEFF_TOL..=1.0 + COEFF_TOL).contains(&s) {
        return None;
    }
    let s = s.clamp(0.0, 1.0);
    let foot = *a + d * s;
    (foot.distance(x) <= tol).then_some(s)
}

/// Barycentric coordinates of `x` in a nondegenerate triangle, if inside.
fn in_triangle(a: &Vector, b: &Vector, c: &Vector, x: &Vector) -> Option<[f64; 3]> {
    let (u, v, r) = (*b - *a, *c - *a, *x - *a);
    let det = u[0] * v[1] - u[1] * v[0];
    let area = u.norm() * v.norm();
    if det.abs() <= 1e-12 * area || area == 0.0 {
        return None;
    }
    let l1 = (r[0] * v[1] - r[1] * v[0]) / det;
    let l2 = (u[0] * r[1] - u[1] * r[0]) / det;
    let l0 = 1.0 - l1 - l2;
    (l0 >= -COEFF_TOL && l1 >= -COEFF_TOL && l2 >= -COEFF_TOL)
        .then(|| [l0.max(0.0), l1.max(0.0), l2.max(0.0)])
}
