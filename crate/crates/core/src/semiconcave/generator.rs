use std::sync::Arc;

use serde::Serialize;

use super::phi::PhiProfile;
use crate::vector::Vector;

/// Symmetric `d × d` matrix stored in a fixed 2×2 block.
pub type Sym = [[f64; 2]; 2];

/// Closed-form generators used by tests and built-in initial conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AnalyticForm {
    /// `½ (x−x0)ᵀ M (x−x0)`
    Quadratic { hessian: Sym },
    /// `Σ a_k (x−x0)^k` (d = 1)
    Poly1d(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum GeneratorKind {
    Affine,
    /// `φ(|x−x0|)` added to the affine part.
    PhiCap(#[serde(skip)] Arc<PhiProfile>),
    Analytic(AnalyticForm),
}

/// One C² member of a generating family:
/// `f(x) = c + p·(x−x0) + extra(x−x0)` where `extra` depends on `kind`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub x0: Vector,
    pub p: Vector,
    pub c: f64,
}

impl Generator {
    pub fn affine(p: Vector, c: f64) -> Self {
        Self {
            kind: GeneratorKind::Affine,
            x0: Vector::zeros(p.dim()),
            p,
            c,
        }
    }

    pub fn phi_cap(x0: Vector, p: Vector, c: f64, profile: Arc<PhiProfile>) -> Self {
        Self {
            kind: GeneratorKind::PhiCap(profile),
            x0,
            p,
            c,
        }
    }

    pub fn analytic(x0: Vector, p: Vector, c: f64, form: AnalyticForm) -> Self {
        Self {
            kind: GeneratorKind::Analytic(form),
            x0,
            p,
            c,
        }
    }

    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            c: self.c + delta,
            ..self.clone()
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        let y = *x - self.x0;
        let base = self.c + self.p.dot(&y);
        base + match &self.kind {
            GeneratorKind::Affine => 0.0,
            GeneratorKind::PhiCap(phi) => phi.phi(y.norm()),
            GeneratorKind::Analytic(AnalyticForm::Quadratic { hessian }) => {
                0.5 * quad_form(hessian, &y)
            }
            GeneratorKind::Analytic(AnalyticForm::Poly1d(a)) => {
                a.iter().rev().fold(0.0, |acc, c| acc * y[0] + c)
            }
        }
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        let y = *x - self.x0;
        self.p
            + match &self.kind {
                GeneratorKind::Affine => Vector::zeros(y.dim()),
                GeneratorKind::PhiCap(phi) => {
                    let r = y.norm();
                    if r == 0.0 {
                        Vector::zeros(y.dim())
                    } else {
                        y * (phi.big_psi(r) / r)
                    }
                }
                GeneratorKind::Analytic(AnalyticForm::Quadratic { hessian }) => {
                    mat_vec(hessian, &y)
                }
                GeneratorKind::Analytic(AnalyticForm::Poly1d(a)) => Vector::d1(
                    a.iter()
                        .enumerate()
                        .skip(1)
                        .rev()
                        .fold(0.0, |acc, (k, c)| acc * y[0] + k as f64 * c),
                ),
            }
    }

    /// Exact Hessian; the unused block entries are zero in d = 1.
    pub fn hessian(&self, x: &Vector) -> Sym {
        let y = *x - self.x0;
        let d = y.dim();
        match &self.kind {
            GeneratorKind::Affine => [[0.0; 2]; 2],
            GeneratorKind::PhiCap(phi) => {
                let r = y.norm();
                let b = phi.psi(r);
                if r == 0.0 || d == 1 {
                    let mut m = [[0.0; 2]; 2];
                    for (i, row) in m.iter_mut().enumerate().take(d) {
                        row[i] = b;
                    }
                    return m;
                }
                // φ'/r on the tangent space, φ'' along e = y/r
                let tangential = phi.big_psi(r) / r;
                let e = y * r.recip();
                let mut m = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        m[i][j] = tangential * delta + (b - tangential) * e[i] * e[j];
                    }
                }
                m
            }
            GeneratorKind::Analytic(AnalyticForm::Quadratic { hessian }) => *hessian,
            GeneratorKind::Analytic(AnalyticForm::Poly1d(a)) => {
                let v = a
                    .iter()
                    .enumerate()
                    .skip(2)
                    .rev()
                    .fold(0.0, |acc, (k, c)| acc * y[0] + (k * (k - 1)) as f64 * c);
                [[v, 0.0], [0.0, 0.0]]
            }
        }
    }
}

fn quad_form(m: &Sym, y: &Vector) -> f64 {
    mat_vec(m, y).dot(y)
}

fn mat_vec(m: &Sym, y: &Vector) -> Vector {
    match y.dim() {
        1 => Vector::d1(m[0][0] * y[0]),
        _ => Vector::d2(
            m[0][0] * y[0] + m[0][1] * y[1],
            m[1][0] * y[0] + m[1][1] * y[1],
        ),
    }
}

/// Spectral norm of a symmetric block restricted to its leading `d × d` part.
pub fn sym_norm(m: &Sym, d: usize) -> f64 {
    if d == 1 {
        return m[0][0].abs();
    }
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (mean + rad).abs().max((mean - rad).abs())
}

/// Largest eigenvalue of the leading `d × d` block.
pub fn sym_max_eigen(m: &Sym, d: usize) -> f64 {
    if d == 1 {
        return m[0][0];
    }
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b * b).sqrt()
}
