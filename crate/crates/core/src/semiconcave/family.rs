use std::sync::Arc;

use rayon::prelude::*;

use super::generator::Generator;
use super::phi::build_phi;
use super::superdiff::{SuperDifferential, SuperVertex};
use crate::error::{check_dim, invalid, Result};
use crate::vector::Vector;

/// Generators within this distance of the minimum count as active.
pub const ACTIVATION_TOL: f64 = 1e-9;
/// Default gradient clustering radius.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Rows of the tabulated `φ` profile kept for inspection.
const PHI_TABLE_SAMPLES: usize = 257;

/// A Lipschitz function that can report samples of its superdifferential.
pub trait SuperdifferentiableFn: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vector) -> f64;
    /// Nonempty finite sample of `Du(x)`.
    fn supergradients(&self, x: &Vector) -> Vec<Vector>;
    /// A semi-concavity constant (`u − B|x|²/2` concave).
    fn semiconcavity(&self) -> f64;
    /// A Lipschitz constant.
    fn lipschitz(&self) -> f64;
}

/// Pointwise minimum of a finite family of C² generators.
#[derive(Clone, Debug)]
pub struct SemiConcaveFn {
    generators: Vec<Generator>,
    b: f64,
    l: f64,
    hull_samples: usize,
}

impl SemiConcaveFn {
    /// `b` is a semi-concavity constant and `l` a Lipschitz constant of the
    /// minimum, both declared by the caller.
    pub fn new(generators: Vec<Generator>, b: f64, l: f64) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| invalid("a semi-concave function needs at least one generator"))?;
        let dim = first.dim();
        for g in &generators {
            check_dim(dim, g.dim())?;
            check_dim(dim, g.p.dim())?;
        }
        if !(b >= 0.0 && l >= 0.0) {
            return Err(invalid("B and L must be nonnegative"));
        }
        Ok(Self {
            generators,
            b,
            l,
            hull_samples: if dim == 1 { 33 } else { 5 },
        })
    }

    /// `min_i (p_i·x + c_i)`, a concave function (`B = 0`).
    pub fn min_affine(slopes: &[Vector], offsets: &[f64]) -> Result<Self> {
        if slopes.len() != offsets.len() {
            return Err(invalid("slopes and offsets differ in length"));
        }
        let l = slopes.iter().map(Vector::norm).fold(0.0, f64::max);
        let gens = slopes
            .iter()
            .zip(offsets)
            .map(|(p, c)| Generator::affine(*p, *c))
            .collect();
        Self::new(gens, 0.0, l)
    }

    /// Number of points used to sample the hull of `dF(x)` when this function
    /// is asked for supergradients.
    pub fn with_hull_samples(mut self, n: usize) -> Self {
        self.hull_samples = n.max(2);
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Same family with every offset raised by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            generators: self.generators.iter().map(|g| g.shifted(delta)).collect(),
            ..self.clone()
        }
    }

    /// Minimum value and the ids of all generators within [`ACTIVATION_TOL`] of it.
    pub fn eval_min(&self, x: &Vector) -> (f64, Vec<usize>) {
        let values: Vec<f64> = self.generators.iter().map(|g| g.value(x)).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let active = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v <= min + ACTIVATION_TOL)
            .map(|(i, _)| i)
            .collect();
        (min, active)
    }

    /// `dF(x)`: gradients of the active generators, clustered, with their hull.
    pub fn superdifferential(&self, x: &Vector, cluster_tol: f64) -> SuperDifferential {
        let (_, active) = self.eval_min(x);
        let raw: Vec<SuperVertex> = active
            .iter()
            .map(|&i| SuperVertex::spatial(self.generators[i].gradient(x)))
            .collect();
        SuperDifferential::from_raw(&raw, cluster_tol)
    }
}

impl SuperdifferentiableFn for SemiConcaveFn {
    fn dim(&self) -> usize {
        SemiConcaveFn::dim(self)
    }

    fn value(&self, x: &Vector) -> f64 {
        self.eval_min(x).0
    }

    fn supergradients(&self, x: &Vector) -> Vec<Vector> {
        let sd = self.superdifferential(x, CLUSTER_TOL);
        if sd.is_singleton() {
            return vec![sd.vertices[0].p];
        }
        sd.hull
            .sample(self.hull_samples)
            .into_iter()
            .map(|c| Vector::new(&c).expect("hull sample has the function's dimension"))
            .collect()
    }

    fn semiconcavity(&self) -> f64 {
        self.b
    }

    fn lipschitz(&self) -> f64 {
        self.l
    }
}

/// Builds the family `{u(x0) + p·(x−x0) + φ(|x−x0|) : x0 ∈ sites, p ∈ Du(x0)}`
/// whose minimum reproduces `u` when `u` is `b`-semi-concave and `l`-Lipschitz.
pub fn build_family_f0(
    u: &dyn SuperdifferentiableFn,
    sites: &[Vector],
    b: f64,
    l: f64,
) -> Result<SemiConcaveFn> {
    if sites.is_empty() {
        return Err(invalid("no sites for the generating family"));
    }
    for s in sites {
        check_dim(u.dim(), s.dim())?;
    }
    let profile = Arc::new(build_phi(b, l, PHI_TABLE_SAMPLES)?);
    let per_site: Vec<Vec<Generator>> = sites
        .par_iter()
        .map(|x0| {
            let c = u.value(x0);
            let mut slopes: Vec<Vector> = Vec::new();
            for p in u.supergradients(x0) {
                if !slopes.iter().any(|q| q.distance(&p) <= 1e-12) {
                    slopes.push(p);
                }
            }
            slopes
                .into_iter()
                .map(|p| Generator::phi_cap(*x0, p, c, profile.clone()))
                .collect()
        })
        .collect();
    let gens: Vec<Generator> = per_site.into_iter().flatten().collect();
    let mut f = SemiConcaveFn::new(gens, b, l)?;
    f.hull_samples = if u.dim() == 1 { 33 } else { 5 };
    Ok(f)
}
