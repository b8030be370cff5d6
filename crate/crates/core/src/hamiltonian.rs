//! Hamiltonians `H(t, x, p)`, a small library of built-in models addressable by
//! string id, and sampled verification of the growth bounds
//! `|d²H| ≤ A`, `|dH| ≤ A(1+|p|)`, `|H| ≤ A(1+|p|)²`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::vector::Vector;

/// Finite-difference step used for second-derivative estimates.
pub const HESSIAN_FD_STEP: f64 = 1e-3;
/// Slack factor applied to `bound_a` when checking the growth bounds.
pub const BOUND_SLACK: f64 = 1.01;

/// Convexity of `p ↦ H(t, x, p)`. Declared, never detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convexity {
    ConvexInP,
    ConcaveInP,
    Nonconvex,
    Unknown,
}

type ScalarMap = dyn Fn(f64, &Vector, &Vector) -> f64 + Send + Sync;
type VectorMap = dyn Fn(f64, &Vector, &Vector) -> Vector + Send + Sync;

/// User-supplied Hamiltonian with its two partial gradients.
#[derive(Clone)]
pub struct CustomForm {
    pub eval: Arc<ScalarMap>,
    pub grad_x: Arc<VectorMap>,
    pub grad_p: Arc<VectorMap>,
    /// `true` when `H` depends on `p` only.
    pub momentum_only: bool,
    pub smooth: bool,
}

#[derive(Clone)]
enum Form {
    /// `scale · |p|² / 2`
    Quadratic {
        scale: f64,
    },
    /// `sqrt(1 + |p|²)`
    RelKinetic,
    /// `p₁²/2 − p₂²/2`
    Saddle,
    /// `Σ c_k p^k` (d = 1)
    Poly(Vec<f64>),
    /// `|p|`, continuous only
    Abs,
    /// `p²/2 − a cos(x)` (d = 1)
    Pendulum {
        amplitude: f64,
    },
    /// `p²/2 + x²/2` (d = 1)
    Oscillator,
    /// `V(x) = Σ c_k x^k`, independent of `p` (d = 1)
    Potential(Vec<f64>),
    Custom(CustomForm),
}

/// An immutable Hamiltonian model.
#[derive(Clone)]
pub struct HamiltonianModel {
    id: String,
    dim: usize,
    bound_a: f64,
    convexity: Convexity,
    form: Form,
}

impl fmt::Debug for HamiltonianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianModel")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("bound_a", &self.bound_a)
            .field("convexity", &self.convexity)
            .finish()
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_deriv(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
}

fn degree(coeffs: &[f64]) -> usize {
    coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
}

fn parse_coeffs(list: &str) -> Result<Vec<f64>> {
    let coeffs = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad coefficient {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(invalid("empty coefficient list"));
    }
    Ok(coeffs)
}

impl HamiltonianModel {
    fn make(id: &str, dim: usize, bound_a: f64, convexity: Convexity, form: Form) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(invalid(format!("dimension must be 1 or 2, got {dim}")));
        }
        Ok(Self {
            id: id.to_string(),
            dim,
            bound_a,
            convexity,
            form,
        })
    }

    /// `H(p) = |p|²/2`.
    pub fn quadratic(dim: usize) -> Result<Self> {
        Self::make(
            "quadratic",
            dim,
            1.0,
            Convexity::ConvexInP,
            Form::Quadratic { scale: 1.0 },
        )
    }

    /// `H(p) = −|p|²/2`.
    pub fn neg_quadratic(dim: usize) -> Result<Self> {
        Self::make(
            "neg-quadratic",
            dim,
            1.0,
            Convexity::ConcaveInP,
            Form::Quadratic { scale: -1.0 },
        )
    }

    /// `H(p) = sqrt(1+|p|²)`.
    pub fn rel_kinetic(dim: usize) -> Result<Self> {
        Self::make(
            "rel-kinetic",
            dim,
            1.0,
            Convexity::ConvexInP,
            Form::RelKinetic,
        )
    }

    /// `H(p) = p₁²/2 − p₂²/2` in d = 2.
    pub fn saddle() -> Result<Self> {
        Self::make("saddle", 2, 1.0, Convexity::Nonconvex, Form::Saddle)
    }

    /// `H(p) = |p|`, continuous but not C², usable only by Hopf and entropy paths.
    pub fn abs(dim: usize) -> Result<Self> {
        Self::make("abs", dim, 1.0, Convexity::ConvexInP, Form::Abs)
    }

    /// `H(p) = Σ c_k p^k` in d = 1.
    pub fn poly(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("polynomial Hamiltonian needs finite coefficients"));
        }
        let deg = degree(&coeffs);
        let c = |k: usize| coeffs.get(k).copied().unwrap_or(0.0).abs();
        let bound_a = if deg <= 2 {
            (c(0) + c(1) + c(2)).max(c(1) + 2.0 * c(2))
        } else {
            f64::INFINITY
        };
        let convexity = match deg {
            0 | 1 => Convexity::ConvexInP,
            2 if coeffs[2] > 0.0 => Convexity::ConvexInP,
            2 => Convexity::ConcaveInP,
            _ => Convexity::Unknown,
        };
        let id = format!(
            "poly:{}",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::make(&id, 1, bound_a, convexity, Form::Poly(coeffs))
    }

    /// `H(x, p) = p²/2 − a cos(x)` in d = 1.
    pub fn pendulum(amplitude: f64) -> Result<Self> {
        Self::make(
            &format!("pendulum:{amplitude}"),
            1,
            amplitude.abs().max(1.0),
            Convexity::ConvexInP,
            Form::Pendulum { amplitude },
        )
    }

    /// `H(x, p) = p²/2 + x²/2` in d = 1. Its characteristics are rotations.
    pub fn oscillator() -> Result<Self> {
        // |H| is not bounded by A(1+|p|)² uniformly in x
        Self::make(
            "oscillator",
            1,
            f64::INFINITY,
            Convexity::ConvexInP,
            Form::Oscillator,
        )
    }

    /// `H(x, p) = V(x) = Σ c_k x^k` in d = 1.
    pub fn potential(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("potential needs finite coefficients"));
        }
        let bound_a = if degree(&coeffs) == 0 {
            coeffs[0].abs()
        } else {
            f64::INFINITY
        };
        let id = format!(
            "potential:{}",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::make(
            &id,
            1,
            bound_a,
            Convexity::ConvexInP,
            Form::Potential(coeffs),
        )
    }

    pub fn custom(
        id: &str,
        dim: usize,
        bound_a: f64,
        convexity: Convexity,
        form: CustomForm,
    ) -> Result<Self> {
        Self::make(id, dim, bound_a, convexity, Form::Custom(form))
    }

    /// Resolves a built-in id: `quadratic`, `neg-quadratic`, `rel-kinetic`,
    /// `saddle`, `abs`, `oscillator`, `pendulum[:a]`, `poly:<c0,c1,..>`,
    /// `potential:<c0,c1,..>`.
    pub fn from_id(id: &str, dim: usize) -> Result<Self> {
        let (head, tail) = match id.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (id, None),
        };
        let fixed_d1 = |m: Result<Self>| -> Result<Self> {
            if dim != 1 {
                return Err(invalid(format!("model {id:?} exists only in dimension 1")));
            }
            m
        };
        match (head, tail) {
            ("quadratic", None) => Self::quadratic(dim),
            ("neg-quadratic", None) => Self::neg_quadratic(dim),
            ("rel-kinetic", None) => Self::rel_kinetic(dim),
            ("abs", None) => Self::abs(dim),
            ("saddle", None) => {
                if dim != 2 {
                    return Err(invalid("model \"saddle\" exists only in dimension 2"));
                }
                Self::saddle()
            }
            ("oscillator", None) => fixed_d1(Self::oscillator()),
            ("pendulum", None) => fixed_d1(Self::pendulum(1.0)),
            ("pendulum", Some(a)) => {
                let a = a
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad pendulum amplitude {a:?}")))?;
                fixed_d1(Self::pendulum(a))
            }
            ("poly", Some(list)) => fixed_d1(Self::poly(parse_coeffs(list)?)),
            ("potential", Some(list)) => fixed_d1(Self::potential(parse_coeffs(list)?)),
            _ => Err(invalid(format!("unknown Hamiltonian id {id:?}"))),
        }
    }

    /// Built-in ids with their parameter schema, sorted.
    pub fn builtin_ids() -> Vec<(&'static str, &'static str)> {
        let mut ids = vec![
            (
                "abs",
                "H(p) = |p|, continuous only (hopf/entropy paths); d = 1 or 2",
            ),
            ("neg-quadratic", "H(p) = -|p|^2/2; d = 1 or 2"),
            ("oscillator", "H(x,p) = p^2/2 + x^2/2; d = 1"),
            (
                "pendulum[:<a>]",
                "H(x,p) = p^2/2 - a cos(x), default a = 1; d = 1",
            ),
            ("poly:<c0,c1,...>", "H(p) = sum c_k p^k; d = 1"),
            ("potential:<c0,c1,...>", "H(x,p) = sum c_k x^k; d = 1"),
            ("quadratic", "H(p) = |p|^2/2; d = 1 or 2"),
            ("rel-kinetic", "H(p) = sqrt(1+|p|^2); d = 1 or 2"),
            ("saddle", "H(p) = p1^2/2 - p2^2/2; d = 2"),
        ];
        ids.sort_by_key(|(id, _)| *id);
        ids
    }

    pub fn with_bound_a(mut self, bound_a: f64) -> Self {
        self.bound_a = bound_a;
        self
    }

    pub fn with_convexity(mut self, convexity: Convexity) -> Self {
        self.convexity = convexity;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound_a(&self) -> f64 {
        self.bound_a
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    /// `true` when `H` depends on `p` only.
    pub fn is_momentum_only(&self) -> bool {
        match &self.form {
            Form::Pendulum { .. } | Form::Oscillator | Form::Potential(_) => false,
            Form::Custom(c) => c.momentum_only,
            _ => true,
        }
    }

    /// `false` for models that are only continuous (no characteristics).
    pub fn is_smooth(&self) -> bool {
        match &self.form {
            Form::Abs => false,
            Form::Custom(c) => c.smooth,
            _ => true,
        }
    }

    fn check_args(&self, x: &Vector, p: &Vector) -> Result<()> {
        check_dim(self.dim, x.dim())?;
        check_dim(self.dim, p.dim())
    }

    /// `H(t, x, p)`, with dimension checks.
    pub fn eval_h(&self, t: f64, x: &Vector, p: &Vector) -> Result<f64> {
        self.check_args(x, p)?;
        Ok(self.value(t, x, p))
    }

    /// `H(t, x, p)` without dimension checks.
    #[inline]
    pub fn value(&self, t: f64, x: &Vector, p: &Vector) -> f64 {
        match &self.form {
            Form::Quadratic { scale } => 0.5 * scale * p.norm_sq(),
            Form::RelKinetic => (1.0 + p.norm_sq()).sqrt(),
            Form::Saddle => 0.5 * (p[0] * p[0] - p[1] * p[1]),
            Form::Poly(c) => poly_eval(c, p[0]),
            Form::Abs => p.norm(),
            Form::Pendulum { amplitude } => 0.5 * p[0] * p[0] - amplitude * x[0].cos(),
            Form::Oscillator => 0.5 * (p[0] * p[0] + x[0] * x[0]),
            Form::Potential(c) => poly_eval(c, x[0]),
            Form::Custom(c) => (c.eval)(t, x, p),
        }
    }

    /// `∂_x H(t, x, p)`.
    #[inline]
    pub fn grad_x(&self, t: f64, x: &Vector, p: &Vector) -> Vector {
        match &self.form {
            Form::Pendulum { amplitude } => Vector::d1(amplitude * x[0].sin()),
            Form::Oscillator => Vector::d1(x[0]),
            Form::Potential(c) => Vector::d1(poly_deriv(c, x[0])),
            Form::Custom(c) => (c.grad_x)(t, x, p),
            _ => Vector::zeros(self.dim),
        }
    }

    /// `∂_p H(t, x, p)`.
    #[inline]
    pub fn grad_p(&self, t: f64, x: &Vector, p: &Vector) -> Vector {
        match &self.form {
            Form::Quadratic { scale } => *p * *scale,
            Form::RelKinetic => *p * (1.0 + p.norm_sq()).sqrt().recip(),
            Form::Saddle => Vector::d2(p[0], -p[1]),
            Form::Poly(c) => Vector::d1(poly_deriv(c, p[0])),
            Form::Abs => {
                let n = p.norm();
                if n == 0.0 {
                    Vector::zeros(self.dim)
                } else {
                    *p * n.recip()
                }
            }
            Form::Pendulum { .. } | Form::Oscillator => Vector::d1(p[0]),
            Form::Potential(_) => Vector::d1(0.0),
            Form::Custom(c) => (c.grad_p)(t, x, p),
        }
    }

    /// Largest `|∂_p H|` over a sample of covectors with `|p_k| ≤ radius` at `x`.
    pub fn max_speed(&self, t: f64, x: &Vector, radius: f64) -> f64 {
        const N: usize = 17;
        let mut best: f64 = 0.0;
        let r = radius.max(0.0);
        for i in 0..N {
            let a = -r + 2.0 * r * i as f64 / (N - 1) as f64;
            if self.dim == 1 {
                best = best.max(self.grad_p(t, x, &Vector::d1(a)).norm());
            } else {
                for j in 0..N {
                    let b = -r + 2.0 * r * j as f64 / (N - 1) as f64;
                    best = best.max(self.grad_p(t, x, &Vector::d2(a, b)).norm());
                }
            }
        }
        best
    }
}

/// Axis-aligned sampling box in `(t, x, p)` space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub t: (f64, f64),
    pub x: Vec<(f64, f64)>,
    pub p: Vec<(f64, f64)>,
}

/// Outcome of [`check_hypothesis1`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub bound_a: f64,
    pub slack: f64,
    /// max `|H| / (1+|p|)²`
    pub max_value_ratio: f64,
    /// max `|dH| / (1+|p|)` with `dH = (∂_x H, ∂_p H)`
    pub max_gradient_ratio: f64,
    /// max spectral norm of the finite-difference Hessian in `(x, p)`
    pub max_hessian_norm: f64,
    pub value_ok: bool,
    pub gradient_ok: bool,
    pub hessian_ok: bool,
    pub pass: bool,
}

fn spectral_norm(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, e| acc.max(e.abs()))
}

fn fd_hessian(model: &HamiltonianModel, t: f64, x: &Vector, p: &Vector) -> DMatrix<f64> {
    let d = model.dim;
    let n = 2 * d;
    let h = HESSIAN_FD_STEP;
    let shift = |k: usize, delta: f64, x: Vector, p: Vector| -> (Vector, Vector) {
        if k < d {
            (x + Vector::unit(d, k) * delta, p)
        } else {
            (x, p + Vector::unit(d, k - d) * delta)
        }
    };
    let f = |x: Vector, p: Vector| model.value(t, &x, &p);
    let f0 = f(*x, *p);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let (xp, pp) = shift(i, h, *x, *p);
        let (xm, pm) = shift(i, -h, *x, *p);
        m[(i, i)] = (f(xp, pp) - 2.0 * f0 + f(xm, pm)) / (h * h);
        for j in (i + 1)..n {
            let corner = |si: f64, sj: f64| {
                let (a, b) = shift(i, si * h, *x, *p);
                let (a, b) = shift(j, sj * h, a, b);
                f(a, b)
            };
            let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0))
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Samples the growth bounds of the model on a box with `samples` nodes per axis.
pub fn check_hypothesis1(
    model: &HamiltonianModel,
    sample_box: &SampleBox,
    samples: usize,
) -> Result<BoundsReport> {
    if samples < 2 {
        return Err(invalid("need at least 2 samples per axis"));
    }
    check_dim(model.dim, sample_box.x.len())?;
    check_dim(model.dim, sample_box.p.len())?;
    let mut ranges = vec![sample_box.t];
    ranges.extend(sample_box.x.iter().copied());
    ranges.extend(sample_box.p.iter().copied());
    if ranges
        .iter()
        .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && hi > lo))
    {
        return Err(invalid("sampling box has empty interior"));
    }
    let d = model.dim;
    let axes = ranges.len();
    let total = samples.pow(axes as u32);
    let coord = |range: (f64, f64), i: usize| {
        range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64
    };
    let (mut vr, mut gr, mut hn) = (0.0_f64, 0.0_f64, 0.0_f64);
    for flat in 0..total {
        let mut rem = flat;
        let mut z = [0.0; 5];
        for (k, range) in ranges.iter().enumerate() {
            z[k] = coord(*range, rem % samples);
            rem /= samples;
        }
        let t = z[0];
        let x = Vector::new(&z[1..1 + d])?;
        let p = Vector::new(&z[1 + d..1 + 2 * d])?;
        let w = 1.0 + p.norm();
        vr = vr.max(model.value(t, &x, &p).abs() / (w * w));
        let gx = model.grad_x(t, &x, &p);
        let gp = model.grad_p(t, &x, &p);
        gr = gr.max((gx.norm_sq() + gp.norm_sq()).sqrt() / w);
        hn = hn.max(spectral_norm(fd_hessian(model, t, &x, &p)));
    }
    let limit = model.bound_a * BOUND_SLACK;
    let value_ok = vr <= limit;
    let gradient_ok = gr <= limit;
    let hessian_ok = hn <= limit;
    Ok(BoundsReport {
        bound_a: model.bound_a,
        slack: BOUND_SLACK,
        max_value_ratio: vr,
        max_gradient_ratio: gr,
        max_hessian_norm: hn,
        value_ok,
        gradient_ok,
        hessian_ok,
        pass: value_ok && gradient_ok && hessian_ok,
    })
}

impl From<Convexity> for &'static str {
    fn from(c: Convexity) -> Self {
        match c {
            Convexity::ConvexInP => "convex-in-p",
            Convexity::ConcaveInP => "concave-in-p",
            Convexity::Nonconvex => "nonconvex",
            Convexity::Unknown => "unknown",
        }
    }
}

pub(crate) fn require_smooth(model: &HamiltonianModel) -> Result<()> {
    if model.is_smooth() {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "model {:?} is only continuous; use the Hopf or entropy paths",
            model.id()
        )))
    }
}
