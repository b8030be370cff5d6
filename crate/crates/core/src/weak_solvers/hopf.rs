use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::field::{ActiveMember, FamilyBacking, Provenance, SolutionField};
use crate::error::{check_dim, Error, Result};
use crate::grid::Grid;
use crate::hamiltonian::HamiltonianModel;
use crate::semiconcave::SemiConcaveFn;
use crate::vector::Vector;

/// Concave Legendre dual `u*(p) = inf_x (p·x − u(x))` on its sampled domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualFunction {
    pub p_nodes: Vec<Vector>,
    pub values: Vec<f64>,
}

impl DualFunction {
    pub fn len(&self) -> usize {
        self.p_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_nodes.is_empty()
    }

    /// The affine family `{p·x − u*(p)}` whose minimum is the biconjugate.
    pub fn affine_family(&self) -> Result<SemiConcaveFn> {
        let offsets: Vec<f64> = self.values.iter().map(|v| -v).collect();
        SemiConcaveFn::min_affine(&self.p_nodes, &offsets)
    }
}

/// Grid minimization of `p·x − u0(x)` over `x_grid` for every node of
/// `p_grid`. A node is dropped when the minimum over the box is strictly
/// below the minimum over the box without its outer tenth: the objective then
/// keeps decreasing toward the boundary, which signals an infimum of `−∞`.
pub fn legendre_concave_dual(
    u0: &(dyn Fn(&Vector) -> f64 + Sync),
    x_grid: &Grid,
    p_grid: &Grid,
) -> Result<DualFunction> {
    check_dim(x_grid.dim(), p_grid.dim())?;
    let p_nodes: Vec<Vector> = p_grid.nodes().collect();
    legendre_concave_dual_at(u0, x_grid, &p_nodes)
}

/// [`legendre_concave_dual`] on an explicit list of covectors.
pub fn legendre_concave_dual_at(
    u0: &(dyn Fn(&Vector) -> f64 + Sync),
    x_grid: &Grid,
    p_nodes: &[Vector],
) -> Result<DualFunction> {
    for p in p_nodes {
        check_dim(x_grid.dim(), p.dim())?;
    }
    let us: Vec<f64> = x_grid.nodes().map(|x| u0(&x)).collect();
    let xs: Vec<Vector> = x_grid.nodes().collect();
    let shape = x_grid.shape();
    let dim = x_grid.dim();
    // nodes of the box without its outer band
    let inner: Vec<bool> = (0..xs.len())
        .map(|i| {
            let m = x_grid.unflatten(i);
            (0..dim).all(|k| {
                let band = (shape[k] / 10).max(1);
                m[k] >= band && m[k] + band < shape[k]
            })
        })
        .collect();
    let kept: Vec<Option<(Vector, f64)>> = p_nodes
        .par_iter()
        .map(|&p| {
            let (mut best, mut best_inner) = (f64::INFINITY, f64::INFINITY);
            for i in 0..xs.len() {
                let v = p.dot(&xs[i]) - us[i];
                best = best.min(v);
                if inner[i] {
                    best_inner = best_inner.min(v);
                }
            }
            let tol = 1e-9 * (1.0 + best.abs());
            (best >= best_inner - tol).then_some((p, best))
        })
        .collect();
    let (p_nodes, values): (Vec<Vector>, Vec<f64>) = kept.into_iter().flatten().unzip();
    if p_nodes.is_empty() {
        return Err(Error::EmptyDualDomain);
    }
    Ok(DualFunction { p_nodes, values })
}

/// The affine generators `p·x − u*(p) − tH(p)` behind a Hopf field.
#[derive(Clone, Debug)]
pub struct HopfFamily {
    t: f64,
    dim: usize,
    p: Vec<Vector>,
    offset: Vec<f64>,
    h: Vec<f64>,
}

impl HopfFamily {
    fn member(&self, i: usize, x: &Vector) -> f64 {
        self.p[i].dot(x) - self.offset[i] - self.t * self.h[i]
    }

    fn argmin(&self, x: &Vector) -> (f64, usize) {
        (0..self.p.len())
            .map(|i| (self.member(i, x), i))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    }
}

impl FamilyBacking for HopfFamily {
    fn time(&self) -> f64 {
        self.t
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn active(&self, x: &Vector, tol: f64) -> Vec<ActiveMember> {
        let (min, _) = self.argmin(x);
        (0..self.p.len())
            .filter_map(|i| {
                let value = self.member(i, x);
                (value <= min + tol).then(|| ActiveMember {
                    value,
                    eta: -self.h[i],
                    p: self.p[i],
                })
            })
            .collect()
    }
}

/// `min_p (p·x − u*(p) − tH(p))` over the dual nodes.
pub fn hopf_solution(
    model: &HamiltonianModel,
    dual: &DualFunction,
    t: f64,
    grid: &Grid,
) -> Result<SolutionField> {
    if !model.is_momentum_only() {
        return Err(Error::Contract(format!(
            "the Hopf formula needs H = H(p); `{}` depends on (t, x)",
            model.id()
        )));
    }
    if dual.is_empty() {
        return Err(Error::EmptyDualDomain);
    }
    if !(t >= 0.0) {
        return Err(crate::error::invalid(format!(
            "t must be nonnegative, got {t}"
        )));
    }
    check_dim(model.dim(), grid.dim())?;
    check_dim(model.dim(), dual.p_nodes[0].dim())?;
    let origin = Vector::zeros(model.dim());
    let family = HopfFamily {
        t,
        dim: model.dim(),
        p: dual.p_nodes.clone(),
        offset: dual.values.clone(),
        h: dual
            .p_nodes
            .iter()
            .map(|p| model.value(0.0, &origin, p))
            .collect(),
    };
    let (values, on_edge): (Vec<f64>, Vec<bool>) = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (v, j) = family.argmin(&grid.node(i));
            (v, is_extreme_node(dual, j))
        })
        .unzip();
    let edge = on_edge.iter().filter(|e| **e).count();
    let mut field = SolutionField::new(t, grid.clone(), values, Provenance::Hopf)?
        .with_meta("dual_nodes", dual.len());
    if edge > 0 {
        // the minimizer sits on the edge of the sampled dual domain: the
        // growth of u*(p) + tH(p) may not be resolved
        field = field.with_meta(
            "warning",
            format!("{edge} nodes minimized on the dual boundary"),
        );
    }
    Ok(field.with_backing(Arc::new(family)))
}

/// Whether `p_nodes[j]` attains an extreme coordinate of the dual sample.
fn is_extreme_node(dual: &DualFunction, j: usize) -> bool {
    let p = dual.p_nodes[j];
    (0..p.dim()).any(|k| {
        let (lo, hi) = dual
            .p_nodes
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| {
                (a.min(q[k]), b.max(q[k]))
            });
        p[k] == lo || p[k] == hi
    })
}
