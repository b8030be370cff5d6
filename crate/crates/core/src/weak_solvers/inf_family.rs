use std::sync::Arc;

use rayon::prelude::*;

use super::field::{ActiveMember, FamilyBacking, Provenance, SolutionField};
use crate::characteristics::{lipschitz_bound, transport_generator};
use crate::error::{check_dim, invalid, Error, Result};
use crate::grid::Grid;
use crate::hamiltonian::HamiltonianModel;
use crate::semiconcave::{Generator, SemiConcaveFn};
use crate::vector::Vector;

/// Time stepping shared by the characteristic-based solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveParams {
    pub dt: f64,
    /// Time at which the family is given.
    pub start_time: f64,
}

impl Default for EvolveParams {
    fn default() -> Self {
        Self {
            dt: 0.05,
            start_time: 0.0,
        }
    }
}

/// One evolved generator, kept as its traced points `(q, p, f)` at the final time.
#[derive(Clone, Debug)]
struct TracedMember {
    q: Vec<Vector>,
    p: Vec<Vector>,
    f: Vec<f64>,
    tri: Option<TriangleIndex>,
}

/// Triangles of the deformed launch mesh, binned over their bounding box.
#[derive(Clone, Debug)]
struct TriangleIndex {
    tris: Vec<[usize; 3]>,
    lo: [f64; 2],
    cell: [f64; 2],
    bins: usize,
    buckets: Vec<Vec<usize>>,
}

impl TriangleIndex {
    fn build(q: &[Vector], shape: [usize; 2]) -> Self {
        let [n0, n1] = shape;
        let idx = |a: usize, b: usize| a * n1 + b;
        let mut tris = Vec::with_capacity(2 * (n0 - 1) * (n1 - 1));
        for a in 0..n0 - 1 {
            for b in 0..n1 - 1 {
                tris.push([idx(a, b), idx(a + 1, b), idx(a + 1, b + 1)]);
                tris.push([idx(a, b), idx(a + 1, b + 1), idx(a, b + 1)]);
            }
        }
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in q {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let bins = n0.max(n1).max(1);
        let cell = [
            ((hi[0] - lo[0]) / bins as f64).max(1e-300),
            ((hi[1] - lo[1]) / bins as f64).max(1e-300),
        ];
        let mut index = Self {
            tris,
            lo,
            cell,
            bins,
            buckets: vec![Vec::new(); bins * bins],
        };
        for (t, tri) in index.tris.iter().enumerate() {
            let (mut a0, mut a1) = (usize::MAX, 0);
            let (mut b0, mut b1) = (usize::MAX, 0);
            for &v in tri {
                let (a, b) = index.bin_of(&q[v]);
                a0 = a0.min(a);
                a1 = a1.max(a);
                b0 = b0.min(b);
                b1 = b1.max(b);
            }
            for a in a0..=a1 {
                for b in b0..=b1 {
                    index.buckets[a * bins + b].push(t);
                }
            }
        }
        index
    }

    fn bin_of(&self, x: &Vector) -> (usize, usize) {
        let f = |k: usize| {
            (((x[k] - self.lo[k]) / self.cell[k]).floor().max(0.0) as usize).min(self.bins - 1)
        };
        (f(0), f(1))
    }

    /// Barycentric coordinates of `x` in a containing triangle.
    fn locate(&self, q: &[Vector], x: &Vector) -> Option<([usize; 3], [f64; 3])> {
        let (a, b) = self.bin_of(x);
        for &t in &self.buckets[a * self.bins + b] {
            let [i, j, k] = self.tris[t];
            let (u, v, w) = (q[i], q[j] - q[i], q[k] - q[i]);
            let det = v[0] * w[1] - v[1] * w[0];
            if det.abs() < 1e-300 {
                continue;
            }
            let r = *x - u;
            let l1 = (r[0] * w[1] - r[1] * w[0]) / det;
            let l2 = (v[0] * r[1] - v[1] * r[0]) / det;
            let l0 = 1.0 - l1 - l2;
            let eps = -1e-10;
            if l0 >= eps && l1 >= eps && l2 >= eps {
                return Some(([i, j, k], [l0, l1, l2]));
            }
        }
        None
    }
}

impl TracedMember {
    fn new(mut traced: Vec<(Vector, Vector, f64)>, shape: [usize; 2], dim: usize) -> Self {
        if dim == 1 {
            // sorted below the caustic; ties keep the smaller value
            traced.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.2.total_cmp(&b.2)));
            traced.dedup_by(|b, a| b.0[0] == a.0[0]);
        }
        let q: Vec<Vector> = traced.iter().map(|t| t.0).collect();
        let tri = (dim == 2).then(|| TriangleIndex::build(&q, shape));
        Self {
            p: traced.iter().map(|t| t.1).collect(),
            f: traced.iter().map(|t| t.2).collect(),
            q,
            tri,
        }
    }

    /// Value and gradient of the evolved generator at `x`.
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        match &self.tri {
            None => self.eval_1d(x[0]),
            Some(index) => match index.locate(&self.q, x) {
                Some((ids, w)) => {
                    let mut v = 0.0;
                    let mut p = Vector::zeros(2);
                    for (&i, &l) in ids.iter().zip(&w) {
                        v += l * (self.f[i] + self.p[i].dot(&(*x - self.q[i])));
                        p = p + self.p[i] * l;
                    }
                    (v, p)
                }
                None => self.extrapolate(self.nearest(x), x),
            },
        }
    }

    fn extrapolate(&self, i: usize, x: &Vector) -> (f64, Vector) {
        (self.f[i] + self.p[i].dot(&(*x - self.q[i])), self.p[i])
    }

    fn nearest(&self, x: &Vector) -> usize {
        (0..self.q.len())
            .min_by(|&a, &b| self.q[a].distance(x).total_cmp(&self.q[b].distance(x)))
            .expect("traced member is nonempty")
    }

    /// Cubic Hermite interpolation using the transported slopes.
    fn eval_1d(&self, x: f64) -> (f64, Vector) {
        let n = self.q.len();
        if n == 1 || x <= self.q[0][0] {
            return self.extrapolate(0, &Vector::d1(x));
        }
        if x >= self.q[n - 1][0] {
            return self.extrapolate(n - 1, &Vector::d1(x));
        }
        let j = self.q.partition_point(|q| q[0] <= x).clamp(1, n - 1);
        let i = j - 1;
        let (x0, x1) = (self.q[i][0], self.q[j][0]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (f0, f1, m0, m1) = (self.f[i], self.f[j], self.p[i][0], self.p[j][0]);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * f0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * f1
            + (s3 - s2) * h * m1;
        let p = m0 + s * (m1 - m0);
        (v, Vector::d1(p))
    }
}

/// The generators of a family transported to a common time.
#[derive(Clone, Debug)]
pub struct EvolvedFamily {
    model: HamiltonianModel,
    t: f64,
    dim: usize,
    members: Vec<TracedMember>,
}

impl EvolvedFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Minimum over members at `x`.
    pub fn value(&self, x: &Vector) -> f64 {
        self.members
            .iter()
            .map(|m| m.eval(x).0)
            .fold(f64::INFINITY, f64::min)
    }
}

impl FamilyBacking for EvolvedFamily {
    fn time(&self) -> f64 {
        self.t
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn active(&self, x: &Vector, tol: f64) -> Vec<ActiveMember> {
        let evals: Vec<(f64, Vector)> = self.members.iter().map(|m| m.eval(x)).collect();
        let min = evals.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
        evals
            .into_iter()
            .filter(|e| e.0 <= min + tol)
            .map(|(value, p)| ActiveMember {
                value,
                eta: -self.model.value(self.t, x, &p),
                p,
            })
            .collect()
    }
}

/// Largest launch gradient of `gens` over `grid`.
fn max_launch_slope(gens: &[Generator], grid: &Grid) -> f64 {
    gens.par_iter()
        .map(|g| {
            grid.nodes()
                .map(|x| g.gradient(&x).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Bound on `|p|` along arcs launched with `|p| ≤ slope` over a time `span`.
pub(crate) fn transported_slope(model: &HamiltonianModel, slope: f64, span: f64) -> f64 {
    if model.is_momentum_only() {
        slope
    } else if model.bound_a().is_finite() {
        lipschitz_bound(slope, model.bound_a(), span)
    } else {
        (slope + 1.0) * span.exp()
    }
}

/// Distance characteristics with `|p| ≤ slope` can travel in `span`.
pub(crate) fn travel_margin(model: &HamiltonianModel, grid: &Grid, slope: f64, span: f64) -> f64 {
    let (lo, hi) = grid.bounds();
    let centre = (lo + hi) * 0.5;
    let radius = transported_slope(model, slope, span);
    let mut speed = model.max_speed(0.0, &centre, radius);
    for x in [lo, hi] {
        speed = speed.max(model.max_speed(0.0, &x, radius));
    }
    1.1 * span * speed + 2.0 * grid.max_spacing()
}

/// Transports every generator from `t0` to `t1` from a launch grid covering
/// `grid` plus the distance characteristics can travel.
pub(crate) fn evolve_family(
    model: &HamiltonianModel,
    gens: &[Generator],
    t0: f64,
    t1: f64,
    grid: &Grid,
    dt: f64,
) -> Result<EvolvedFamily> {
    let span = t1 - t0;
    let mut launch = grid.clone();
    let mut margin = 0.0;
    for _ in 0..3 {
        let slope = max_launch_slope(gens, &launch);
        let m = travel_margin(model, grid, slope, span);
        if m <= margin {
            break;
        }
        margin = m;
        launch = grid.expanded(margin).0;
    }
    let results: Vec<Result<TracedMember>> = gens
        .par_iter()
        .enumerate()
        .map(|(id, g)| {
            let (traced, caustic) = transport_generator(model, g, &launch, t0, t1, dt)?;
            if caustic <= t1 {
                return Err(Error::Horizon {
                    generator: id,
                    caustic,
                    requested: t1,
                });
            }
            Ok(TracedMember::new(traced, launch.shape(), grid.dim()))
        })
        .collect();
    let members = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(EvolvedFamily {
        model: model.clone(),
        t: t1,
        dim: grid.dim(),
        members,
    })
}

/// Nodal minimum of an evolved family.
pub(crate) fn family_field(
    family: EvolvedFamily,
    grid: &Grid,
    provenance: Provenance,
) -> Result<SolutionField> {
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| family.value(&grid.node(i)))
        .collect();
    let t = family.t;
    Ok(SolutionField::new(t, grid.clone(), values, provenance)?
        .with_meta("generators", family.len())
        .with_backing(Arc::new(family)))
}

/// Evolves every generator of `family` by characteristics and takes the
/// pointwise minimum on `grid`. Fails with a horizon error if some generator
/// reaches a caustic before `t`.
pub fn inf_family_solution(
    model: &HamiltonianModel,
    family: &SemiConcaveFn,
    t: f64,
    grid: &Grid,
    params: &EvolveParams,
) -> Result<SolutionField> {
    check_dim(model.dim(), family.dim())?;
    check_dim(model.dim(), grid.dim())?;
    let t0 = params.start_time;
    if !(t >= t0) {
        return Err(invalid(format!("need t >= {t0}, got {t}")));
    }
    let evolved = evolve_family(model, family.generators(), t0, t, grid, params.dt)?;
    let field = if t == t0 {
        let values = grid.nodes().map(|x| family.eval_min(&x).0).collect();
        SolutionField::new(t, grid.clone(), values, Provenance::InfFamily)?
            .with_backing(Arc::new(evolved))
    } else {
        family_field(evolved, grid, Provenance::InfFamily)?
    };
    Ok(field.with_meta("dt", params.dt))
}
