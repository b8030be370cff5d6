//! Characteristics of `∂_t u + H(t, x, ∂_x u) = 0`: the Hamiltonian system
//! `q̇ = ∂_p H`, `ṗ = −∂_q H`, integrated together with the action
//! `∫ p·q̇ − H ds`, and the classical solution patches it transports.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, invalid, Error, Result};
use crate::grid::Grid;
use crate::hamiltonian::{require_smooth, HamiltonianModel};
use crate::semiconcave::Generator;
use crate::vector::Vector;

/// Relative Jacobian level below which the launch map counts as folded.
pub const CAUSTIC_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseState {
    pub q: Vector,
    pub p: Vector,
}

/// A characteristic sampled at every integrator step, with the running value
/// of the transported solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacteristicArc {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub action: Vec<f64>,
}

impl CharacteristicArc {
    pub fn last(&self) -> (f64, PhaseState, f64) {
        let n = self.times.len() - 1;
        (self.times[n], self.states[n], self.action[n])
    }
}

/// Characteristics launched from a grid of base points for one generator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionPatch {
    pub generator: usize,
    pub launch: Grid,
    pub arcs: Vec<CharacteristicArc>,
    pub caustic_time: f64,
}

impl SolutionPatch {
    /// `(q, p, f(t, q))` at the final time, in launch order.
    pub fn traced(&self) -> Vec<(Vector, Vector, f64)> {
        self.arcs
            .iter()
            .map(|a| {
                let (_, s, v) = a.last();
                (s.q, s.p, v)
            })
            .collect()
    }

    pub fn final_time(&self) -> f64 {
        self.arcs[0].last().0
    }
}

/// `(q, p, value)` at the end of one characteristic.
pub(crate) type Traced = (Vector, Vector, f64);

#[derive(Clone, Copy)]
struct Rates {
    q: Vector,
    p: Vector,
    a: f64,
}

#[inline]
fn rates(model: &HamiltonianModel, t: f64, q: &Vector, p: &Vector) -> Rates {
    let hp = model.grad_p(t, q, p);
    let hq = model.grad_x(t, q, p);
    Rates {
        q: hp,
        p: -hq,
        a: p.dot(&hp) - model.value(t, q, p),
    }
}

/// Step times from `t0` to `t1` with fixed `dt`, the last step clipped.
fn step_times(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = (((t1 - t0) / dt) - 1e-9).ceil().max(1.0) as usize;
    let mut times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * dt).collect();
    times.push(t1);
    times
}

#[inline]
fn rk4_step(
    model: &HamiltonianModel,
    t: f64,
    h: f64,
    q: Vector,
    p: Vector,
    a: f64,
) -> (Vector, Vector, f64) {
    let k1 = rates(model, t, &q, &p);
    let k2 = rates(
        model,
        t + 0.5 * h,
        &(q + k1.q * (0.5 * h)),
        &(p + k1.p * (0.5 * h)),
    );
    let k3 = rates(
        model,
        t + 0.5 * h,
        &(q + k2.q * (0.5 * h)),
        &(p + k2.p * (0.5 * h)),
    );
    let k4 = rates(model, t + h, &(q + k3.q * h), &(p + k3.p * h));
    let w6 = h / 6.0;
    (
        q + (k1.q + k2.q * 2.0 + k3.q * 2.0 + k4.q) * w6,
        p + (k1.p + k2.p * 2.0 + k3.p * 2.0 + k4.p) * w6,
        a + (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a) * w6,
    )
}

fn integrate_from(
    model: &HamiltonianModel,
    s0: PhaseState,
    a0: f64,
    times: &[f64],
) -> Result<CharacteristicArc> {
    let mut states = Vec::with_capacity(times.len());
    let mut action = Vec::with_capacity(times.len());
    let (mut q, mut p, mut a) = (s0.q, s0.p, a0);
    states.push(s0);
    action.push(a0);
    for w in times.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        (q, p, a) = rk4_step(model, t, h, q, p, a);
        if !(q.is_finite() && p.is_finite() && a.is_finite()) {
            return Err(Error::BlowUp { time: t });
        }
        states.push(PhaseState { q, p });
        action.push(a);
    }
    Ok(CharacteristicArc {
        times: times.to_vec(),
        states,
        action,
    })
}

/// Classical four-stage integration of the Hamiltonian system and the action
/// from `t0` to `t1`, starting with zero action.
pub fn integrate_hs(
    model: &HamiltonianModel,
    s0: PhaseState,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<CharacteristicArc> {
    if !(dt > 0.0) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    if !(t1 > t0) {
        return Err(invalid(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    require_smooth(model)?;
    check_dim(model.dim(), s0.q.dim())?;
    check_dim(model.dim(), s0.p.dim())?;
    integrate_from(model, s0, 0.0, &step_times(t0, t1, dt))
}

/// Transports generator `gen` from time 0 to `t`.
pub fn evolve_generator(
    model: &HamiltonianModel,
    gen: &Generator,
    launch: &Grid,
    t: f64,
    dt: f64,
) -> Result<SolutionPatch> {
    evolve_generator_between(model, gen, 0, launch, 0.0, t, dt)
}

/// Transports generator `gen` (recorded under `id`) from `t0` to `t1`.
pub fn evolve_generator_between(
    model: &HamiltonianModel,
    gen: &Generator,
    id: usize,
    launch: &Grid,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<SolutionPatch> {
    require_smooth(model)?;
    check_dim(model.dim(), gen.dim())?;
    check_dim(model.dim(), launch.dim())?;
    if !(t1 >= t0) {
        return Err(invalid(format!("need t1 >= t0, got [{t0}, {t1}]")));
    }
    if t1 > t0 && !(dt > 0.0) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    let times = if t1 > t0 {
        step_times(t0, t1, dt)
    } else {
        vec![t0]
    };
    let arcs = (0..launch.len())
        .into_par_iter()
        .map(|i| {
            let x0 = launch.node(i);
            let s0 = PhaseState {
                q: x0,
                p: gen.gradient(&x0),
            };
            integrate_from(model, s0, gen.value(&x0), &times)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut patch = SolutionPatch {
        generator: id,
        launch: launch.clone(),
        arcs,
        caustic_time: f64::INFINITY,
    };
    patch.caustic_time = caustic_time(&patch);
    Ok(patch)
}

/// Transports `gen` without recording arcs: returns the final `(q, p, f)` per
/// launch point and the caustic time estimated as in [`caustic_time`].
pub(crate) fn transport_generator(
    model: &HamiltonianModel,
    gen: &Generator,
    launch: &Grid,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<(Vec<Traced>, f64)> {
    let mut q: Vec<Vector> = launch.nodes().collect();
    let mut p: Vec<Vector> = q.iter().map(|x| gen.gradient(x)).collect();
    let mut a: Vec<f64> = q.iter().map(|x| gen.value(x)).collect();
    if t1 == t0 {
        let traced = q
            .into_iter()
            .zip(p)
            .zip(a)
            .map(|((q, p), a)| (q, p, a))
            .collect();
        return Ok((traced, f64::INFINITY));
    }
    let initial = cell_jacobians(launch, &q);
    let mut prev = 1.0;
    let mut caustic = f64::INFINITY;
    let times = step_times(t0, t1, dt);
    for w in times.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        for i in 0..q.len() {
            let (nq, np, na) = rk4_step(model, t, h, q[i], p[i], a[i]);
            if !(nq.is_finite() && np.is_finite() && na.is_finite()) {
                return Err(Error::BlowUp { time: t });
            }
            q[i] = nq;
            p[i] = np;
            a[i] = na;
        }
        if caustic.is_infinite() {
            let cur = cell_jacobians(launch, &q)
                .iter()
                .zip(&initial)
                .map(|(j, j0)| j / j0)
                .fold(f64::INFINITY, f64::min);
            if cur < CAUSTIC_THRESHOLD {
                let s = ((prev - CAUSTIC_THRESHOLD) / (prev - cur)).clamp(0.0, 1.0);
                caustic = t + s * h;
            }
            prev = cur;
        }
    }
    let traced = q
        .into_iter()
        .zip(p)
        .zip(a)
        .map(|((q, p), a)| (q, p, a))
        .collect();
    Ok((traced, caustic))
}

/// Signed length (d = 1) or forward-difference area (d = 2) of every launch cell.
fn cell_jacobians(g: &Grid, q: &[Vector]) -> Vec<f64> {
    match g.dim() {
        1 => q.windows(2).map(|w| w[1][0] - w[0][0]).collect(),
        _ => {
            let [n0, n1] = g.shape();
            let mut out = Vec::with_capacity((n0 - 1) * (n1 - 1));
            for a in 0..n0 - 1 {
                for b in 0..n1 - 1 {
                    let c = q[g.flatten([a, b])];
                    let u = q[g.flatten([a + 1, b])] - c;
                    let v = q[g.flatten([a, b + 1])] - c;
                    out.push(u[0] * v[1] - u[1] * v[0]);
                }
            }
            out
        }
    }
}

/// First time at which some cell of the launch map has its Jacobian fall below
/// [`CAUSTIC_THRESHOLD`] times its initial value (linearly interpolated
/// between steps), or `+∞` within the integrated horizon.
pub fn caustic_time(patch: &SolutionPatch) -> f64 {
    let times = &patch.arcs[0].times;
    let at_step = |k: usize| -> Vec<Vector> { patch.arcs.iter().map(|a| a.states[k].q).collect() };
    let initial = cell_jacobians(&patch.launch, &at_step(0));
    let mut prev = 1.0;
    for k in 1..times.len() {
        let cur = cell_jacobians(&patch.launch, &at_step(k))
            .iter()
            .zip(&initial)
            .map(|(j, j0)| j / j0)
            .fold(f64::INFINITY, f64::min);
        if cur < CAUSTIC_THRESHOLD {
            let w = ((prev - CAUSTIC_THRESHOLD) / (prev - cur)).clamp(0.0, 1.0);
            return times[k - 1] + w * (times[k] - times[k - 1]);
        }
        prev = cur;
    }
    f64::INFINITY
}

/// Lipschitz growth estimate `(L0 + 1) e^{A t} − 1`.
pub fn lipschitz_bound(l0: f64, a: f64, t: f64) -> f64 {
    (l0 + 1.0) * (a * t).exp() - 1.0
}

/// Sup-distance estimate `A t ((L0 + 1) e^{A t})²`.
pub fn drift_bound(l0: f64, a: f64, t: f64) -> f64 {
    let g = (l0 + 1.0) * (a * t).exp();
    a * t * g * g
}
