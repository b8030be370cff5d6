//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use hjlab::characteristics::{evolve_generator, lipschitz_bound};
use hjlab::entropy::{
    check_two_branch, envelope_value, scan_field, EnvelopeMode, EnvelopeQuery, DEFAULT_DENSITY,
    DEFAULT_TOL,
};
use hjlab::semiconcave::{
    build_family_f0, build_phi, hessian_norm_radial, AnalyticForm, Generator, SemiConcaveFn,
};
use hjlab::weak_solvers::{
    fd_viscosity_oracle, hopf_solution, inf_family_solution, iterated_variational, lax_oleinik,
    legendre_concave_dual, semigroup_inequality_check, variational_solution, EvolveParams,
    SolutionField, VariationalParams,
};
use hjlab::{Grid, HamiltonianModel, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn neg_abs_family() -> SemiConcaveFn {
    SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0]).unwrap()
}

fn neg_abs(x: &Vector) -> f64 {
    -x[0].abs()
}

fn line401() -> Grid {
    Grid::line(-2.0, 2.0, 401).unwrap()
}

fn at_zero(f: &SolutionField) -> f64 {
    f.nearest(&Vector::d1(0.0))
}

fn max_over<I: Iterator<Item = f64>>(it: I) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

fn within_budget(started: Instant, budget: Duration) -> Result<(), String> {
    let took = started.elapsed();
    if took > budget {
        Err(format!("took {took:.1?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

fn ordering() -> Outcome {
    let start = Instant::now();
    let model = HamiltonianModel::neg_quadratic(1).unwrap();
    let grid = line401();
    let v = fd_viscosity_oracle(&model, &neg_abs, 1.0, &grid, 0.9).map_err(|e| e.to_string())?;
    let g = variational_solution(&model, &neg_abs_family(), 1.0, &grid, &Default::default())
        .map_err(|e| e.to_string())?;
    let inf = inf_family_solution(
        &model,
        &neg_abs_family(),
        1.0,
        &grid,
        &EvolveParams::default(),
    )
    .map_err(|e| e.to_string())?;
    let v_le_g = max_over(v.values.iter().zip(&g.values).map(|(a, b)| a - b));
    let g_le_inf = max_over(g.values.iter().zip(&inf.values).map(|(a, b)| a - b));
    let gap = at_zero(&g) - at_zero(&v);
    let detail = format!(
        "v(1,0)={:.4} g(1,0)={:.4} inf(1,0)={:.4}; max(v-g)={v_le_g:.2e} max(g-inf)={g_le_inf:.2e} gap={gap:.4}",
        at_zero(&v),
        at_zero(&g),
        at_zero(&inf)
    );
    within_budget(start, Duration::from_secs(30))?;
    if v_le_g <= 5e-2 && g_le_inf <= 1e-3 && gap >= 0.4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn convex_collapse() -> Outcome {
    let start = Instant::now();
    let model = HamiltonianModel::quadratic(1).unwrap();
    let grid = line401();
    let err = |e: hjlab::Error| e.to_string();
    let dual = legendre_concave_dual(
        &neg_abs,
        &Grid::line(-4.0, 4.0, 801).unwrap(),
        &Grid::line(-3.0, 3.0, 601).unwrap(),
    )
    .map_err(err)?;
    let fields = [
        hopf_solution(&model, &dual, 1.0, &grid).map_err(err)?,
        lax_oleinik(
            &model,
            &neg_abs,
            1.0,
            &grid,
            &Grid::line(-4.0, 4.0, 801).unwrap(),
            &Grid::line(-3.0, 3.0, 601).unwrap(),
        )
        .map_err(err)?,
        variational_solution(&model, &neg_abs_family(), 1.0, &grid, &Default::default())
            .map_err(err)?,
        iterated_variational(
            &model,
            &neg_abs_family(),
            1.0,
            &grid,
            &Default::default(),
            16,
        )
        .map_err(err)?,
        fd_viscosity_oracle(&model, &neg_abs, 1.0, &grid, 0.9).map_err(err)?,
    ];
    let mut worst: f64 = 0.0;
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i + 1..] {
            worst = worst.max(a.sup_distance(&b.values));
        }
    }
    let centre = max_over(fields.iter().map(|f| (at_zero(f) + 0.5).abs()));
    within_budget(start, Duration::from_secs(60))?;
    let detail = format!("max pairwise distance {worst:.2e}, max |u(1,0)+0.5| = {centre:.2e}");
    if worst <= 5e-2 && centre <= 5e-2 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn entropy_admissibility() -> Outcome {
    let start = Instant::now();
    let grid = line401();
    let err = |e: hjlab::Error| e.to_string();
    let burgers = HamiltonianModel::quadratic(1).unwrap();
    let f = inf_family_solution(
        &burgers,
        &neg_abs_family(),
        1.0,
        &grid,
        &EvolveParams::default(),
    )
    .map_err(err)?;
    let shock = scan_field(
        &burgers,
        &f,
        EnvelopeMode::Convex,
        DEFAULT_DENSITY,
        DEFAULT_TOL,
    )
    .map_err(err)?;
    let anti = HamiltonianModel::neg_quadratic(1).unwrap();
    let f = inf_family_solution(
        &anti,
        &neg_abs_family(),
        1.0,
        &grid,
        &EvolveParams::default(),
    )
    .map_err(err)?;
    let fan = scan_field(
        &anti,
        &f,
        EnvelopeMode::Convex,
        DEFAULT_DENSITY,
        DEFAULT_TOL,
    )
    .map_err(err)?;
    let failing: Vec<_> = fan.reports.iter().filter(|r| !r.pass).collect();
    let at_origin = failing.len() == 1 && failing[0].x[0].abs() < 1e-9;
    let worst = failing
        .first()
        .and_then(|r| r.worst_margin)
        .unwrap_or(f64::NAN);
    let chord = check_two_branch(
        &anti,
        1.0,
        &Vector::d1(0.0),
        &Vector::d1(1.0),
        &Vector::d1(-1.0),
        DEFAULT_DENSITY,
        DEFAULT_TOL,
    )
    .map_err(err)?;
    within_budget(start, Duration::from_secs(5))?;
    let detail = format!(
        "burgers: {} nonsmooth nodes, {} fail; anti-burgers: {} fail, worst margin {worst:.4} at x=0: {at_origin}, chord worst s={}",
        shock.reports.len(),
        shock.failures,
        fan.failures,
        chord.worst_s
    );
    let ok = !shock.reports.is_empty()
        && shock.pass
        && at_origin
        && (worst + 0.5).abs() <= 1e-3
        && chord.worst_s == 0.5
        && !chord.pass;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn generating_family() -> Outcome {
    let start = Instant::now();
    let u = neg_abs_family();
    let sites: Vec<Vector> = Grid::line(-2.0, 2.0, 81).unwrap().nodes().collect();
    let family = build_family_f0(&u, &sites, 1.0, 1.0).map_err(|e| e.to_string())?;
    let recon = max_over(
        Grid::line(-2.0, 2.0, 4001)
            .unwrap()
            .nodes()
            .map(|x| (family.eval_min(&x).0 - neg_abs(&x)).abs()),
    );
    let h = 1e-3;
    let probes: Vec<Vector> = Grid::line(-6.0, 6.0, 241).unwrap().nodes().collect();
    let mut hess: f64 = 0.0;
    let mut grad: f64 = 0.0;
    for g in family.generators() {
        for x in &probes {
            let (xm, xp) = (Vector::d1(x[0] - h), Vector::d1(x[0] + h));
            hess = hess.max(((g.value(&xp) - 2.0 * g.value(x) + g.value(&xm)) / (h * h)).abs());
            grad = grad.max(g.gradient(x).norm());
        }
    }
    within_budget(start, Duration::from_secs(5))?;
    let detail = format!(
        "{} generators; reconstruction error {recon:.2e}, max FD hessian {hess:.6}, max gradient {grad:.4}",
        family.generators().len()
    );
    if recon <= 1e-2 && hess <= 1.0 + 1e-3 && grad <= 6.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn radial_hessian() -> Outcome {
    let profile = build_phi(1.0, 1.0, 257).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-4;
    let f = |x: f64, y: f64| profile.phi((x * x + y * y).sqrt());
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let r: f64 = rng.gen_range(0.05..6.0);
        let th: f64 = rng.gen_range(0.0..2.0 * PI);
        let (x, y) = (r * th.cos(), r * th.sin());
        let fxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
        let fyy = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
        let fxy =
            (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        let m = nalgebra::Matrix2::new(fxx, fxy, fxy, fyy);
        let norm = m
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |a, e| a.max(e.abs()));
        worst = worst.max((norm - hessian_norm_radial(&profile, r)).abs());
    }
    let detail = format!("max deviation over 50 radii {worst:.2e}");
    if worst <= 1e-4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Lower (convex) or upper (concave) hull of sorted points, evaluated at `q`.
fn monotone_chain(points: &[(f64, f64)], q: f64, upper: bool) -> f64 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let sign = if upper { -1.0 } else { 1.0 };
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if sign * cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        if hull.last().is_some_and(|l| l.0 == p.0) {
            // equal abscissae: keep the lower (resp. upper) value
            let l = hull.last_mut().unwrap();
            if sign * (p.1 - l.1) < 0.0 {
                *l = p;
            }
            continue;
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        if q >= w[0].0 && q <= w[1].0 {
            let s = (q - w[0].0) / (w[1].0 - w[0].0);
            return w[0].1 + s * (w[1].1 - w[0].1);
        }
    }
    hull.iter()
        .find(|p| p.0 == q)
        .map(|p| p.1)
        .unwrap_or(f64::NAN)
}

/// Convex envelope in the plane by LP duality: the best affine minorant of
/// the data through three of the points.
fn dual_plane_envelope(points: &[(Vector, f64)], q: &Vector) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = nalgebra::Matrix3::new(
                    points[i].0[0],
                    points[i].0[1],
                    1.0,
                    points[j].0[0],
                    points[j].0[1],
                    1.0,
                    points[k].0[0],
                    points[k].0[1],
                    1.0,
                );
                let rhs = nalgebra::Vector3::new(points[i].1, points[j].1, points[k].1);
                let Some(c) = m.lu().solve(&rhs) else {
                    continue;
                };
                let plane = |p: &Vector| c[0] * p[0] + c[1] * p[1] + c[2];
                if points.iter().all(|(p, h)| plane(p) <= h + 1e-9) {
                    best = best.max(plane(q));
                }
            }
        }
    }
    best
}

fn envelope_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_1d: f64 = 0.0;
    for _ in 0..100 {
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let (lo, hi) = pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.0), b.max(p.0))
            });
        let q = rng.gen_range(lo..=hi);
        for (mode, upper) in [(EnvelopeMode::Convex, false), (EnvelopeMode::Concave, true)] {
            let v = envelope_value(&EnvelopeQuery {
                points: pts.iter().map(|(p, h)| (Vector::d1(*p), *h)).collect(),
                query: Vector::d1(q),
                mode,
            })
            .map_err(|e| e.to_string())?;
            worst_1d = worst_1d.max((v - monotone_chain(&pts, q, upper)).abs());
        }
    }
    let mut worst_2d: f64 = 0.0;
    let mut above_combination: f64 = f64::NEG_INFINITY;
    for _ in 0..20 {
        let pts: Vec<(Vector, f64)> = (0..6)
            .map(|_| {
                (
                    Vector::d2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let w: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = w.iter().sum();
        let mut q = Vector::zeros(2);
        let mut combo = 0.0;
        for (a, (p, h)) in w.iter().zip(&pts) {
            q = q + *p * (a / total);
            combo += h * a / total;
        }
        let v = envelope_value(&EnvelopeQuery {
            points: pts.clone(),
            query: q,
            mode: EnvelopeMode::Convex,
        })
        .map_err(|e| e.to_string())?;
        worst_2d = worst_2d.max((v - dual_plane_envelope(&pts, &q)).abs());
        above_combination = above_combination.max(v - combo);
    }
    let detail = format!(
        "d=1 max error {worst_1d:.2e} (100 sets), d=2 max error {worst_2d:.2e} (20 sets), envelope minus generating combination <= {above_combination:.2e}"
    );
    if worst_1d <= 1e-9 && worst_2d <= 1e-6 && above_combination <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn semigroup() -> Outcome {
    let grid = line401();
    let params = VariationalParams::default();
    let err = |e: hjlab::Error| e.to_string();
    let concave = HamiltonianModel::neg_quadratic(1).unwrap();
    let c = semigroup_inequality_check(
        &concave,
        &neg_abs_family(),
        [0.0, 0.5, 1.0],
        &grid,
        &params,
        2e-2,
    )
    .map_err(err)?;
    let convex = HamiltonianModel::quadratic(1).unwrap();
    let v = semigroup_inequality_check(
        &convex,
        &neg_abs_family(),
        [0.0, 0.5, 1.0],
        &grid,
        &params,
        2e-2,
    )
    .map_err(err)?;
    let detail = format!(
        "concave: max(left-right)={:.2e}; convex: max|left-right|={:.2e}",
        c.max_violation, v.max_abs_difference
    );
    if c.max_violation <= 2e-2 && v.max_abs_difference <= 2e-2 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn estimates() -> Outcome {
    let grid = line401();
    let err = |e: hjlab::Error| e.to_string();
    let l0 = 1.0;
    let y = Grid::line(-4.0, 4.0, 801).unwrap();
    let p = Grid::line(-3.0, 3.0, 601).unwrap();
    let dual = legendre_concave_dual(&neg_abs, &y, &p).map_err(err)?;
    let mut worst_lip = f64::NEG_INFINITY;
    let mut worst_drift = f64::NEG_INFINITY;
    let mut count = 0;
    for model in [
        HamiltonianModel::quadratic(1).unwrap(),
        HamiltonianModel::neg_quadratic(1).unwrap(),
    ] {
        let a = model.bound_a();
        for t in [0.05, 0.1, 1.0] {
            let mut fields = vec![
                inf_family_solution(
                    &model,
                    &neg_abs_family(),
                    t,
                    &grid,
                    &EvolveParams::default(),
                )
                .map_err(err)?,
                variational_solution(&model, &neg_abs_family(), t, &grid, &Default::default())
                    .map_err(err)?,
                iterated_variational(&model, &neg_abs_family(), t, &grid, &Default::default(), 4)
                    .map_err(err)?,
                fd_viscosity_oracle(&model, &neg_abs, t, &grid, 0.9).map_err(err)?,
                hopf_solution(&model, &dual, t, &grid).map_err(err)?,
            ];
            if model.id() == "quadratic" {
                fields.push(lax_oleinik(&model, &neg_abs, t, &grid, &y, &p).map_err(err)?);
            }
            for f in &fields {
                count += 1;
                worst_lip =
                    worst_lip.max(f.lipschitz_constant() - (lipschitz_bound(l0, a, t) + 1e-2));
                if t <= 0.1 {
                    let drift = max_over(
                        grid.nodes()
                            .zip(&f.values)
                            .map(|(x, v)| (v - neg_abs(&x)).abs()),
                    );
                    let bound = a * t * ((l0 + 1.0) * (a * t).exp()).powi(2);
                    worst_drift = worst_drift.max(drift - 1.1 * bound);
                }
            }
        }
    }
    let detail = format!(
        "{count} fields; max(Lip - bound) = {worst_lip:.3}, max(drift - 1.1 bound) = {worst_drift:.3}"
    );
    if worst_lip <= 0.0 && worst_drift <= 0.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn characteristic_consistency() -> Outcome {
    let model = HamiltonianModel::quadratic(1).unwrap();
    let err = |e: hjlab::Error| e.to_string();
    let launch = Grid::line(-2.0, 2.0, 401).unwrap();
    let quad = |a: f64| {
        Generator::analytic(
            Vector::d1(0.0),
            Vector::d1(0.0),
            0.0,
            AnalyticForm::Poly1d(vec![0.0, 0.0, a]),
        )
    };
    let mut worst: f64 = 0.0;
    for (gen, model) in [
        (quad(0.5), model.clone()),
        (quad(-0.5), model.clone()),
        (quad(0.5), HamiltonianModel::pendulum(1.0).unwrap()),
    ] {
        let patch = evolve_generator(&model, &gen, &launch, 0.5, 1e-3).map_err(err)?;
        if patch.caustic_time <= 0.5 {
            return Err(format!("unexpected caustic at {}", patch.caustic_time));
        }
        let traced = patch.traced();
        for w in traced.windows(3) {
            let fd = (w[2].2 - w[0].2) / (w[2].0[0] - w[0].0[0]);
            worst = worst.max((fd - w[1].1[0]).abs());
        }
    }
    let focusing = evolve_generator(&model, &quad(-0.5), &launch, 1.5, 1e-3).map_err(err)?;
    let caustic = focusing.caustic_time;
    let detail =
        format!("max |p - FD gradient| = {worst:.2e}; focusing caustic at t = {caustic:.4}");
    if worst <= 1e-3 && (caustic - 1.0).abs() <= 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "ordering v <= g <= inf-family with strict gap (concave H)",
            ordering,
        ),
        ("convex collapse of the five solvers", convex_collapse),
        (
            "entropy condition on shock and rarefaction",
            entropy_admissibility,
        ),
        (
            "generating family reconstruction and bounds",
            generating_family,
        ),
        (
            "radial hessian formula vs finite differences",
            radial_hessian,
        ),
        ("envelope values vs independent oracles", envelope_oracle),
        ("semigroup inequality", semigroup),
        ("Lipschitz and drift estimates", estimates),
        (
            "characteristic consistency and caustic time",
            characteristic_consistency,
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] criterion {}: {name} ({:.1?}): {detail}",
            i + 1,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
