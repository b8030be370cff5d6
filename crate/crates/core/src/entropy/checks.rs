use rayon::prelude::*;
use serde::Serialize;

use super::envelope::{envelope_value, EnvelopeMode, EnvelopeQuery};
use crate::error::{check_dim, invalid, Error, Result};
use crate::hamiltonian::HamiltonianModel;
use crate::semiconcave::{Hull, SuperDifferential, CLUSTER_TOL};
use crate::vector::Vector;
use crate::weak_solvers::SolutionField;

/// Default number of hull samples per dimension.
pub const DEFAULT_DENSITY: usize = 33;
/// Default tolerance for algebraic checks.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default activation tolerance when scanning family-backed fields.
pub const SCAN_ACTIVATION_TOL: f64 = 1e-6;

/// Spatial projections of the extreme vertices, clustered within `cluster_tol`.
pub fn extreme_spatial_gradients(sd: &SuperDifferential, cluster_tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in sd.extreme_vertices() {
        if !out.iter().any(|q| q.distance(&v.p) <= cluster_tol) {
            out.push(v.p);
        }
    }
    out
}

/// What a verdict proves about the solution at the checked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The convex-envelope condition holds: viscosity solution at this point.
    Viscosity,
    /// The concave-envelope condition fails: not a viscosity solution.
    NotViscosity,
    /// The verdict carries no conclusion in this mode.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub t: f64,
    pub x: Vector,
    pub mode: EnvelopeMode,
    pub tol: f64,
    /// Spatial projection of the extreme superdifferential.
    pub extreme: Vec<Vector>,
    /// Covectors sampled in the hull of `extreme`.
    pub samples: Vec<Vector>,
    /// Envelope minus `H` at each sample.
    pub margins: Vec<f64>,
    pub pass: bool,
    pub certificate: Certificate,
    pub worst_margin: Option<f64>,
    pub worst_p: Option<Vector>,
}

/// Checks `H ≤ Ȟ` (convex mode) or `H ≤ Ĥ` (concave mode) on samples of the
/// hull of the extreme spatial gradients at `(t, x)`, where the envelopes are
/// built from the values of `H` at the extreme gradients.
pub fn check_entropy_at(
    model: &HamiltonianModel,
    t: f64,
    x: &Vector,
    sd: &SuperDifferential,
    mode: EnvelopeMode,
    density: usize,
    tol: f64,
) -> Result<EntropyReport> {
    check_dim(model.dim(), x.dim())?;
    let extreme = extreme_spatial_gradients(sd, CLUSTER_TOL);
    if extreme.is_empty() {
        return Err(invalid("empty extreme set"));
    }
    let mut report = EntropyReport {
        t,
        x: *x,
        mode,
        tol,
        extreme: extreme.clone(),
        samples: Vec::new(),
        margins: Vec::new(),
        pass: true,
        certificate: Certificate::None,
        worst_margin: None,
        worst_p: None,
    };
    if extreme.len() >= 2 {
        let coords: Vec<Vec<f64>> = extreme.iter().map(|p| p.as_slice().to_vec()).collect();
        let samples: Vec<Vector> = Hull::of(&coords)
            .sample(density.max(2))
            .iter()
            .map(|c| Vector::new(c))
            .collect::<Result<_>>()?;
        let points: Vec<(Vector, f64)> =
            extreme.iter().map(|p| (*p, model.value(t, x, p))).collect();
        let mut margins = Vec::with_capacity(samples.len());
        for p in &samples {
            let env = envelope_value(&EnvelopeQuery {
                points: points.clone(),
                query: *p,
                mode,
            })?;
            margins.push(env - model.value(t, x, p));
        }
        let (worst, at) =
            margins.iter().enumerate().fold(
                (f64::INFINITY, 0),
                |a, (i, m)| if *m < a.0 { (*m, i) } else { a },
            );
        report.pass = worst >= -tol;
        report.worst_margin = Some(worst);
        report.worst_p = Some(samples[at]);
        report.samples = samples;
        report.margins = margins;
    }
    report.certificate = match (mode, report.pass) {
        (EnvelopeMode::Convex, true) => Certificate::Viscosity,
        (EnvelopeMode::Concave, false) => Certificate::NotViscosity,
        _ => Certificate::None,
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoBranchReport {
    pub p_minus: Vector,
    pub p_plus: Vector,
    pub s: Vec<f64>,
    /// `H(s p⁻ + (1−s) p⁺) − s H(p⁻) − (1−s) H(p⁺)` per sample.
    pub violations: Vec<f64>,
    pub max_violation: f64,
    pub worst_s: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Chord condition between two branches on `s = k/(n−1)`, `k = 0..n`.
pub fn check_two_branch(
    model: &HamiltonianModel,
    t: f64,
    x: &Vector,
    p_minus: &Vector,
    p_plus: &Vector,
    s_samples: usize,
    tol: f64,
) -> Result<TwoBranchReport> {
    check_dim(model.dim(), x.dim())?;
    check_dim(model.dim(), p_minus.dim())?;
    check_dim(model.dim(), p_plus.dim())?;
    if p_minus == p_plus {
        return Err(invalid("the two branches must differ"));
    }
    if s_samples < 2 {
        return Err(invalid("at least two s samples are needed"));
    }
    let h_minus = model.value(t, x, p_minus);
    let h_plus = model.value(t, x, p_plus);
    let s: Vec<f64> = (0..s_samples)
        .map(|k| k as f64 / (s_samples - 1) as f64)
        .collect();
    let violations: Vec<f64> = s
        .iter()
        .map(|&s| {
            let p = *p_minus * s + *p_plus * (1.0 - s);
            model.value(t, x, &p) - (s * h_minus + (1.0 - s) * h_plus)
        })
        .collect();
    let (max_violation, at) =
        violations
            .iter()
            .enumerate()
            .fold(
                (f64::NEG_INFINITY, 0),
                |a, (i, v)| if *v > a.0 { (*v, i) } else { a },
            );
    Ok(TwoBranchReport {
        p_minus: *p_minus,
        p_plus: *p_plus,
        worst_s: s[at],
        s,
        violations,
        max_violation,
        tol,
        pass: max_violation <= tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShockReport {
    /// Rankine–Hugoniot speed `(H(p⁻) − H(p⁺)) / (p⁻ − p⁺)`.
    pub speed: f64,
    pub admissible: bool,
    pub chord: TwoBranchReport,
}

/// Classifies the jump `p⁻ ≥ p⁺` of the gradient of a semi-concave solution,
/// seen as a shock of `∂_t p + ∂_x H(p) = 0`.
pub fn classify_shock_d1(
    model: &HamiltonianModel,
    p_minus: f64,
    p_plus: f64,
    tol: f64,
) -> Result<ShockReport> {
    check_dim(1, model.dim())?;
    if !model.is_momentum_only() {
        return Err(Error::Contract(format!(
            "shock classification needs H = H(p); `{}` depends on (t, x)",
            model.id()
        )));
    }
    if p_minus < p_plus {
        return Err(Error::Orientation { p_minus, p_plus });
    }
    let x = Vector::d1(0.0);
    let (pm, pp) = (Vector::d1(p_minus), Vector::d1(p_plus));
    let chord = check_two_branch(model, 0.0, &x, &pm, &pp, DEFAULT_DENSITY, tol)?;
    let speed = (model.value(0.0, &x, &pm) - model.value(0.0, &x, &pp)) / (p_minus - p_plus);
    Ok(ShockReport {
        speed,
        admissible: chord.pass,
        chord,
    })
}

/// Margin of the sub-solution test `η + H(t, x, p) ≤ 0` over samples of the
/// space-time hull: the largest value of `η + H`.
pub fn subsolution_margin(
    model: &HamiltonianModel,
    t: f64,
    x: &Vector,
    sd: &SuperDifferential,
    density: usize,
) -> Result<f64> {
    if !sd.is_space_time() {
        return Err(invalid("the sub-solution test needs space-time vertices"));
    }
    let mut worst = f64::NEG_INFINITY;
    for c in sd.hull.sample(density.max(2)) {
        let p = Vector::new(&c[1..])?;
        worst = worst.max(c[0] + model.value(t, x, &p));
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyScan {
    pub t: f64,
    pub mode: EnvelopeMode,
    pub nodes: usize,
    /// Reports for the nodes with at least two extreme gradients, in grid order.
    pub reports: Vec<EntropyReport>,
    pub failures: usize,
    pub pass: bool,
}

/// Runs [`check_entropy_at`] at every node of a family-backed field where the
/// superdifferential has at least two extreme spatial gradients.
pub fn scan_field(
    model: &HamiltonianModel,
    field: &SolutionField,
    mode: EnvelopeMode,
    density: usize,
    tol: f64,
) -> Result<EntropyScan> {
    let backing = field.backing().ok_or_else(|| {
        Error::Capability(format!(
            "{} fields carry no generating family to differentiate",
            field.provenance
        ))
    })?;
    let grid = &field.grid;
    let reports = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            let sd = backing.superdifferential(&x, SCAN_ACTIVATION_TOL, CLUSTER_TOL);
            if extreme_spatial_gradients(&sd, CLUSTER_TOL).len() < 2 {
                return Ok(None);
            }
            check_entropy_at(model, field.t, &x, &sd, mode, density, tol).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<EntropyReport> = reports.into_iter().flatten().collect();
    let failures = reports.iter().filter(|r| !r.pass).count();
    Ok(EntropyScan {
        t: field.t,
        mode,
        nodes: grid.len(),
        failures,
        pass: failures == 0,
        reports,
    })
}
