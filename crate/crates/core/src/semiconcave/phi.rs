//! The radial cap profile `φ` used to write a semi-concave function as a
//! minimum of C² functions with Hessian bounded by `B` and gradient by `6L`.
//!
//! `ψ` equals `B` on `[0, 4L/B]`, tapers linearly to `0` on `[4L/B, 5L/B]` and
//! vanishes beyond. `Ψ` and `φ` are its first and second primitives anchored at
//! zero, so all three are piecewise polynomials evaluated in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiProfile {
    b: f64,
    l: f64,
    /// `(r, ψ, Ψ, φ)` on a uniform grid of `[0, 6L/B]`.
    table: Vec<[f64; 4]>,
}

/// Builds the profile for semi-concavity constant `b` and Lipschitz constant `l`,
/// tabulated at `samples` radii.
pub fn build_phi(b: f64, l: f64, samples: usize) -> Result<PhiProfile> {
    if !(b.is_finite() && b > 0.0) {
        return Err(invalid(format!("B must be positive, got {b}")));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(invalid(format!("L must be positive, got {l}")));
    }
    if samples < 2 {
        return Err(invalid("need at least 2 table samples"));
    }
    let mut profile = PhiProfile {
        b,
        l,
        table: Vec::new(),
    };
    let r_max = 6.0 * l / b;
    profile.table = (0..samples)
        .map(|i| {
            let r = r_max * i as f64 / (samples - 1) as f64;
            [r, profile.psi(r), profile.big_psi(r), profile.phi(r)]
        })
        .collect();
    Ok(profile)
}

impl PhiProfile {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// End of the plateau `ψ = B`.
    pub fn plateau_end(&self) -> f64 {
        4.0 * self.l / self.b
    }

    /// Start of the zone where `ψ = 0`.
    pub fn support_end(&self) -> f64 {
        5.0 * self.l / self.b
    }

    fn taper_width(&self) -> f64 {
        self.l / self.b
    }

    pub fn table(&self) -> &[[f64; 4]] {
        &self.table
    }

    /// `ψ(r) = φ''(r)`.
    pub fn psi(&self, r: f64) -> f64 {
        let (a, e) = (self.plateau_end(), self.support_end());
        if r <= a {
            self.b
        } else if r < e {
            self.b * (e - r) / self.taper_width()
        } else {
            0.0
        }
    }

    /// `Ψ(r) = φ'(r)`.
    pub fn big_psi(&self, r: f64) -> f64 {
        let (a, e, w) = (self.plateau_end(), self.support_end(), self.taper_width());
        let b = self.b;
        if r <= a {
            b * r
        } else if r < e {
            let s = r - a;
            b * a + b * (s - s * s / (2.0 * w))
        } else {
            b * a + b * w / 2.0
        }
    }

    /// `φ(r)`.
    pub fn phi(&self, r: f64) -> f64 {
        let (a, e, w) = (self.plateau_end(), self.support_end(), self.taper_width());
        let b = self.b;
        let at_a = 0.5 * b * a * a;
        let taper = |s: f64| at_a + b * a * s + b * (s * s / 2.0 - s * s * s / (6.0 * w));
        if r <= a {
            0.5 * b * r * r
        } else if r < e {
            taper(r - a)
        } else {
            taper(w) + self.big_psi(e) * (r - e)
        }
    }

    /// Limit of `Ψ` at infinity (`4.5 L`).
    pub fn slope_limit(&self) -> f64 {
        self.big_psi(self.support_end())
    }
}

/// Operator norm of the Hessian of `x ↦ φ(|x|)` at radius `r`:
/// `max(|φ''(r)|, |φ'(r)|/r)`, and `φ''(0)` at the origin.
pub fn hessian_norm_radial(profile: &PhiProfile, r: f64) -> f64 {
    if r <= 0.0 {
        return profile.psi(0.0);
    }
    profile.psi(r).abs().max(profile.big_psi(r).abs() / r)
}
