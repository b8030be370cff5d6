//! Convex hulls of small point sets in dimension 1 to 3.

use serde::{Deserialize, Serialize};

/// Convex hull of a finite point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hull {
    Point(Vec<f64>),
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Counter-clockwise vertex list (two vertices for a segment).
    Polygon(Vec<[f64; 2]>),
    /// Extreme points of a 3-d polytope.
    Polytope(Vec<Vec<f64>>),
}

impl Hull {
    /// Hull of `points`, all of the same dimension (1 to 3).
    pub fn of(points: &[Vec<f64>]) -> Hull {
        assert!(!points.is_empty(), "hull of an empty set");
        let dim = points[0].len();
        let flags = extreme_flags(points, 1e-12);
        let ext: Vec<Vec<f64>> = points
            .iter()
            .zip(&flags)
            .filter(|(_, e)| **e)
            .map(|(p, _)| p.clone())
            .collect();
        if ext.len() == 1 {
            return Hull::Point(ext[0].clone());
        }
        match dim {
            1 => Hull::Interval {
                lo: ext.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
                hi: ext.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max),
            },
            2 => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                Hull::Polygon(convex_hull_2d(&pts).into_iter().map(|i| pts[i]).collect())
            }
            _ => Hull::Polytope(ext),
        }
    }

    /// Vertices of the hull (extreme points).
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        match self {
            Hull::Point(p) => vec![p.clone()],
            Hull::Interval { lo, hi } => vec![vec![*lo], vec![*hi]],
            Hull::Polygon(v) => v.iter().map(|p| p.to_vec()).collect(),
            Hull::Polytope(v) => v.clone(),
        }
    }

    /// Sample points covering a spatial hull (point, interval or polygon):
    /// `density` uniform points on an interval, a barycentric grid with
    /// `density` points per edge on each triangle of a fan triangulation.
    pub fn sample(&self, density: usize) -> Vec<Vec<f64>> {
        let n = density.max(2);
        match self {
            Hull::Point(p) => vec![p.clone()],
            Hull::Interval { lo, hi } => (0..n)
                .map(|i| vec![lo + (hi - lo) * i as f64 / (n - 1) as f64])
                .collect(),
            Hull::Polygon(v) if v.len() == 2 => (0..n)
                .map(|i| {
                    let s = i as f64 / (n - 1) as f64;
                    vec![
                        v[0][0] + s * (v[1][0] - v[0][0]),
                        v[0][1] + s * (v[1][1] - v[0][1]),
                    ]
                })
                .collect(),
            Hull::Polygon(v) => {
                let mut out: Vec<Vec<f64>> = Vec::new();
                let m = n - 1;
                for k in 1..v.len() - 1 {
                    let (a, b, c) = (v[0], v[k], v[k + 1]);
                    for i in 0..=m {
                        for j in 0..=(m - i) {
                            let (wa, wb) = (i as f64 / m as f64, j as f64 / m as f64);
                            let wc = 1.0 - wa - wb;
                            let q = vec![
                                wa * a[0] + wb * b[0] + wc * c[0],
                                wa * a[1] + wb * b[1] + wc * c[1],
                            ];
                            let dup = out.iter().any(|o| {
                                (o[0] - q[0]).abs() < 1e-14 && (o[1] - q[1]).abs() < 1e-14
                            });
                            if !dup {
                                out.push(q);
                            }
                        }
                    }
                }
                out
            }
            Hull::Polytope(v) => v.clone(),
        }
    }

    /// Membership of `q`, with distance tolerance `tol`.
    pub fn contains(&self, q: &[f64], tol: f64) -> bool {
        match self {
            Hull::Interval { lo, hi } => q[0] >= lo - tol && q[0] <= hi + tol,
            _ => in_hull(q, &self.vertices(), tol),
        }
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Angular-sort (Graham) hull. Returns indices of the strict hull vertices in
/// counter-clockwise order; collinear boundary points are dropped.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let pivot = (0..n)
        .min_by(|&i, &j| {
            let (a, b) = (points[i], points[j]);
            a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0]))
        })
        .unwrap();
    let o = points[pivot];
    let scale = points
        .iter()
        .map(|p| (p[0] - o[0]).abs().max((p[1] - o[1]).abs()))
        .fold(0.0, f64::max);
    let eps = 1e-12 * scale.max(1e-300) * scale.max(1.0);
    let mut rest: Vec<usize> = (0..n)
        .filter(|&i| {
            i != pivot && ((points[i][0] - o[0]).abs() > 0.0 || (points[i][1] - o[1]).abs() > 0.0)
        })
        .collect();
    if rest.is_empty() {
        return vec![pivot];
    }
    let dist2 = |i: usize| {
        let (dx, dy) = (points[i][0] - o[0], points[i][1] - o[1]);
        dx * dx + dy * dy
    };
    rest.sort_by(|&i, &j| {
        let ai = (points[i][1] - o[1]).atan2(points[i][0] - o[0]);
        let aj = (points[j][1] - o[1]).atan2(points[j][0] - o[0]);
        ai.total_cmp(&aj).then(dist2(i).total_cmp(&dist2(j)))
    });
    let mut stack = vec![pivot];
    for i in rest {
        while stack.len() >= 2 {
            let a = points[stack[stack.len() - 2]];
            let b = points[stack[stack.len() - 1]];
            if cross(a, b, points[i]) <= eps {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    // all points collinear: keep the two ends
    if stack.len() == 2 {
        return stack;
    }
    stack
}

/// Solves a small dense system in place; `None` when (nearly) singular.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Barycentric coordinates of `q` with respect to the simplex `verts`
/// (least squares in its affine hull). Returns `(coeffs, residual)`.
pub fn barycentric(q: &[f64], verts: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let k = verts.len() - 1;
    let v0 = verts[0];
    let dim = q.len();
    if k == 0 {
        let r: f64 = (0..dim).map(|i| (q[i] - v0[i]).powi(2)).sum::<f64>().sqrt();
        return Some((vec![1.0], r));
    }
    let edges: Vec<Vec<f64>> = verts[1..]
        .iter()
        .map(|v| (0..dim).map(|i| v[i] - v0[i]).collect())
        .collect();
    let rhs: Vec<f64> = (0..dim).map(|i| q[i] - v0[i]).collect();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| (0..dim).map(|i| edges[a][i] * edges[b][i]).sum())
                .collect()
        })
        .collect();
    let proj: Vec<f64> = (0..k)
        .map(|a| (0..dim).map(|i| edges[a][i] * rhs[i]).sum())
        .collect();
    let lambda = solve_small(gram, proj)?;
    let mut residual = 0.0;
    for i in 0..dim {
        let approx: f64 = (0..k).map(|a| lambda[a] * edges[a][i]).sum();
        residual += (approx - rhs[i]).powi(2);
    }
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(1.0 - lambda.iter().sum::<f64>());
    coeffs.extend(lambda);
    Some((coeffs, residual.sqrt()))
}

fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        start: usize,
        n: usize,
        size: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, size, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, size, &mut Vec::with_capacity(size), f)
}

/// Carathéodory membership test: `q` lies in the hull of `points` iff it is a
/// convex combination of at most `dim + 1` of them.
pub fn in_hull(q: &[f64], points: &[Vec<f64>], tol: f64) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = q.len();
    let max_size = (dim + 1).min(points.len());
    for size in 1..=max_size {
        let found = for_each_subset(points.len(), size, &mut |idx| {
            let verts: Vec<&[f64]> = idx.iter().map(|&i| points[i].as_slice()).collect();
            match barycentric(q, &verts) {
                Some((coeffs, residual)) => residual <= tol && coeffs.iter().all(|&a| a >= -1e-9),
                None => false,
            }
        });
        if found {
            return true;
        }
    }
    false
}

/// `flags[i]` is `true` iff `points[i]` is an extreme point of the hull.
/// Duplicates (within `tol`) are reported once, on their first occurrence.
pub fn extreme_flags(points: &[Vec<f64>], tol: f64) -> Vec<bool> {
    let n = points.len();
    let dim = points.first().map_or(0, Vec::len);
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol);
    let first = |i: usize| (0..i).all(|j| !same(&points[i], &points[j]));
    match dim {
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points
                .iter()
                .map(|p| p[0])
                .fold(f64::NEG_INFINITY, f64::max);
            (0..n)
                .map(|i| {
                    first(i)
                        && ((points[i][0] - lo).abs() <= tol || (points[i][0] - hi).abs() <= tol)
                })
                .collect()
        }
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            let hull = convex_hull_2d(&pts);
            (0..n)
                .map(|i| first(i) && hull.iter().any(|&h| same(&points[h], &points[i])))
                .collect()
        }
        _ => (0..n)
            .map(|i| {
                if !first(i) {
                    return false;
                }
                let others: Vec<Vec<f64>> = (0..n)
                    .filter(|&j| j != i && !same(&points[i], &points[j]))
                    .map(|j| points[j].clone())
                    .collect();
                !in_hull(&points[i], &others, tol.max(1e-12))
            })
            .collect(),
    }
}
