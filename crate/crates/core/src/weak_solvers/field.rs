use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::semiconcave::{SuperDifferential, SuperVertex};
use crate::vector::Vector;

/// Which pipeline produced a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    InfFamily,
    Variational,
    Iterated(usize),
    Hopf,
    LaxOleinik,
    FdOracle,
}

impl Provenance {
    /// Position in the ordering `viscosity ≤ variational ≤ inf-family`.
    pub fn rank(&self) -> u8 {
        match self {
            Provenance::FdOracle
            | Provenance::LaxOleinik
            | Provenance::Iterated(_)
            | Provenance::Hopf => 0,
            Provenance::Variational => 1,
            Provenance::InfFamily => 2,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::InfFamily => f.write_str("inf-family"),
            Provenance::Variational => f.write_str("variational"),
            Provenance::Iterated(k) => write!(f, "iterated-{k}"),
            Provenance::Hopf => f.write_str("hopf"),
            Provenance::LaxOleinik => f.write_str("lax-oleinik"),
            Provenance::FdOracle => f.write_str("fd-oracle"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A generator of the family behind a field, active at a query point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActiveMember {
    pub value: f64,
    /// `∂_t f`, equal to `−H(t, x, p)` along a classical solution.
    pub eta: f64,
    pub p: Vector,
}

/// Access to the family of classical solutions whose minimum is a field.
pub trait FamilyBacking: Send + Sync {
    fn time(&self) -> f64;
    fn dim(&self) -> usize;
    /// Members whose value at `x` is within `tol` of the minimum.
    fn active(&self, x: &Vector, tol: f64) -> Vec<ActiveMember>;

    /// Space-time superdifferential spanned by the active members at `x`.
    fn superdifferential(&self, x: &Vector, tol: f64, cluster_tol: f64) -> SuperDifferential {
        let raw: Vec<SuperVertex> = self
            .active(x, tol)
            .iter()
            .map(|m| SuperVertex::space_time(m.eta, m.p))
            .collect();
        SuperDifferential::from_raw(&raw, cluster_tol)
    }
}

/// Scalar field on a rectangular grid at a fixed time.
#[derive(Clone, Serialize)]
pub struct SolutionField {
    pub t: f64,
    pub grid: Grid,
    pub values: Vec<f64>,
    pub provenance: Provenance,
    pub meta: BTreeMap<String, String>,
    #[serde(skip)]
    backing: Option<Arc<dyn FamilyBacking>>,
}

impl fmt::Debug for SolutionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionField")
            .field("t", &self.t)
            .field("grid", &self.grid)
            .field("provenance", &self.provenance)
            .field("meta", &self.meta)
            .field("backed", &self.backing.is_some())
            .finish()
    }
}

impl SolutionField {
    pub fn new(t: f64, grid: Grid, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!(
                "{provenance} field is not finite at node {i}"
            )));
        }
        Ok(Self {
            t,
            grid,
            values,
            provenance,
            meta: BTreeMap::new(),
            backing: None,
        })
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_backing(mut self, backing: Arc<dyn FamilyBacking>) -> Self {
        self.backing = Some(backing);
        self
    }

    pub fn backing(&self) -> Option<&Arc<dyn FamilyBacking>> {
        self.backing.as_ref()
    }

    /// Value at node `x` of the grid, or multilinear interpolation elsewhere.
    pub fn sample(&self, x: &Vector) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    /// Value at the node nearest to `x`.
    pub fn nearest(&self, x: &Vector) -> f64 {
        let mut m = [0usize; 2];
        for (k, a) in self.grid.axes().iter().enumerate() {
            let s = ((x[k] - a.min) / a.spacing()).round();
            m[k] = s.clamp(0.0, (a.count - 1) as f64) as usize;
        }
        self.values[self.grid.flatten(m)]
    }

    /// Largest difference quotient between neighbouring nodes (axis and
    /// diagonal neighbours in two dimensions).
    pub fn lipschitz_constant(&self) -> f64 {
        let g = &self.grid;
        let [n0, n1] = g.shape();
        let hs: Vec<f64> = g.axes().iter().map(|a| a.spacing()).collect();
        let mut best: f64 = 0.0;
        let steps: &[(usize, usize)] = if g.dim() == 1 {
            &[(1, 0)]
        } else {
            &[(1, 0), (0, 1), (1, 1)]
        };
        for a in 0..n0 {
            for b in 0..n1 {
                let here = self.values[g.flatten([a, b])];
                for &(da, db) in steps {
                    if a + da >= n0 || b + db >= n1 {
                        continue;
                    }
                    let there = self.values[g.flatten([a + da, b + db])];
                    let mut dist2 = (da as f64 * hs[0]).powi(2);
                    if g.dim() == 2 {
                        dist2 += (db as f64 * hs[1]).powi(2);
                    }
                    best = best.max((there - here).abs() / dist2.sqrt());
                }
            }
        }
        // also the anti-diagonal in two dimensions
        if g.dim() == 2 {
            let d = (hs[0] * hs[0] + hs[1] * hs[1]).sqrt();
            for a in 0..n0 - 1 {
                for b in 1..n1 {
                    let u = self.values[g.flatten([a, b])];
                    let v = self.values[g.flatten([a + 1, b - 1])];
                    best = best.max((u - v).abs() / d);
                }
            }
        }
        best
    }

    /// `max |self − other|` over nodes; the grids must match.
    pub fn sup_distance(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The same field restricted to `inner`, a subgrid at `offset` (see
    /// [`Grid::expanded`]). The family backing is kept.
    pub fn restrict(&self, inner: &Grid, offset: [usize; 2]) -> Self {
        let values = self
            .grid
            .sub_indices(inner, offset)
            .into_iter()
            .map(|i| self.values[i])
            .collect();
        Self {
            t: self.t,
            grid: inner.clone(),
            values,
            provenance: self.provenance,
            meta: self.meta.clone(),
            backing: self.backing.clone(),
        }
    }
}
