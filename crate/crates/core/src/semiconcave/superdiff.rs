use serde::Serialize;

use super::hull::{extreme_flags, Hull};
use crate::vector::Vector;

/// A gradient `p` of an active generator, with its time slope `η` when the
/// generator is a space-time solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuperVertex {
    pub eta: Option<f64>,
    pub p: Vector,
}

impl SuperVertex {
    pub fn spatial(p: Vector) -> Self {
        Self { eta: None, p }
    }

    pub fn space_time(eta: f64, p: Vector) -> Self {
        Self { eta: Some(eta), p }
    }

    /// `(η, p)` or `p`.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(3);
        if let Some(eta) = self.eta {
            c.push(eta);
        }
        c.extend_from_slice(self.p.as_slice());
        c
    }
}

/// Finite description of a superdifferential: the gradients of the active
/// generators (clustered), their convex hull and the extreme subset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperDifferential {
    pub vertices: Vec<SuperVertex>,
    pub hull: Hull,
    pub extreme: Vec<bool>,
}

impl SuperDifferential {
    /// Clusters `raw` (greedy, first representative wins) and computes the hull.
    pub fn from_raw(raw: &[SuperVertex], cluster_tol: f64) -> Self {
        assert!(!raw.is_empty(), "superdifferential of an empty set");
        let mut vertices: Vec<SuperVertex> = Vec::new();
        for v in raw {
            let c = v.coords();
            let close = vertices.iter().any(|w| {
                let d: f64 = w
                    .coords()
                    .iter()
                    .zip(&c)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                d <= cluster_tol
            });
            if !close {
                vertices.push(*v);
            }
        }
        let coords: Vec<Vec<f64>> = vertices.iter().map(SuperVertex::coords).collect();
        let extreme = extreme_flags(&coords, 1e-12);
        let hull = Hull::of(&coords);
        Self {
            vertices,
            hull,
            extreme,
        }
    }

    pub fn is_space_time(&self) -> bool {
        self.vertices[0].eta.is_some()
    }

    pub fn extreme_vertices(&self) -> impl Iterator<Item = &SuperVertex> {
        self.vertices
            .iter()
            .zip(&self.extreme)
            .filter(|(_, e)| **e)
            .map(|(v, _)| v)
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Hull of the spatial projections `D_x u`.
    pub fn spatial_hull(&self) -> Hull {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.p.as_slice().to_vec())
            .collect();
        Hull::of(&pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_merges_close_gradients() {
        let raw = [
            SuperVertex::spatial(Vector::d1(1.0)),
            SuperVertex::spatial(Vector::d1(1.0 + 1e-8)),
            SuperVertex::spatial(Vector::d1(-1.0)),
        ];
        let sd = SuperDifferential::from_raw(&raw, 1e-6);
        assert_eq!(sd.vertices.len(), 2);
        assert_eq!(sd.hull, Hull::Interval { lo: -1.0, hi: 1.0 });
        assert!(sd.extreme.iter().all(|e| *e));
    }
}
