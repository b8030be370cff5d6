use std::sync::Arc;

use hjlab::characteristics::{evolve_generator, integrate_hs, PhaseState};
use hjlab::entropy::{
    check_two_branch, envelope_value, scan_field, subsolution_margin, EnvelopeMode, EnvelopeQuery,
    DEFAULT_DENSITY, DEFAULT_TOL,
};
use hjlab::hamiltonian::{check_hypothesis1, SampleBox};
use hjlab::semiconcave::{
    build_family_f0, build_phi, hessian_norm_radial, sym_norm, AnalyticForm, Generator,
    SemiConcaveFn, SuperdifferentiableFn, CLUSTER_TOL,
};
use hjlab::weak_solvers::{
    fd_viscosity_oracle, hopf_solution, inf_family_solution, iterated_variational, lax_oleinik,
    legendre_concave_dual, variational_solution, EvolveParams,
};
use hjlab::{Grid, HamiltonianModel, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn neg_abs() -> SemiConcaveFn {
    SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0]).unwrap()
}

fn neg_abs_fn(x: &Vector) -> f64 {
    -x[0].abs()
}

fn builtin_models() -> Vec<HamiltonianModel> {
    vec![
        HamiltonianModel::quadratic(1).unwrap(),
        HamiltonianModel::quadratic(2).unwrap(),
        HamiltonianModel::neg_quadratic(2).unwrap(),
        HamiltonianModel::rel_kinetic(2).unwrap(),
        HamiltonianModel::saddle().unwrap(),
        HamiltonianModel::oscillator().unwrap(),
        HamiltonianModel::pendulum(1.5).unwrap(),
        HamiltonianModel::poly(vec![0.1, -0.3, 0.5]).unwrap(),
        HamiltonianModel::potential(vec![0.0, 1.0, -0.2]).unwrap(),
    ]
}

#[test]
fn analytic_gradients_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    for model in builtin_models() {
        let d = model.dim();
        for _ in 0..100 {
            let mut rv = || {
                Vector::new(&(0..d).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>()).unwrap()
            };
            let (x, p) = (rv(), rv());
            let t = 0.3;
            let gp = model.grad_p(t, &x, &p);
            let gx = model.grad_x(t, &x, &p);
            for i in 0..d {
                let e = Vector::unit(d, i) * h;
                let fd_p =
                    (model.value(t, &x, &(p + e)) - model.value(t, &x, &(p - e))) / (2.0 * h);
                let fd_x =
                    (model.value(t, &(x + e), &p) - model.value(t, &(x - e), &p)) / (2.0 * h);
                assert!(
                    (fd_p - gp[i]).abs() <= 1e-5 * (1.0 + gp.norm()),
                    "{}: grad_p",
                    model.id()
                );
                assert!(
                    (fd_x - gx[i]).abs() <= 1e-5 * (1.0 + gx.norm()),
                    "{}: grad_x",
                    model.id()
                );
            }
        }
    }
}

#[test]
fn growth_bounds_are_sampled() {
    let sample = SampleBox {
        t: (0.0, 1.0),
        x: vec![(-1.0, 1.0)],
        p: vec![(-2.0, 2.0)],
    };
    let quad = check_hypothesis1(&HamiltonianModel::quadratic(1).unwrap(), &sample, 21).unwrap();
    assert!(quad.pass);
    assert!((quad.max_hessian_norm - 1.0).abs() < 1e-3);
    let quartic = HamiltonianModel::poly(vec![0.0, 0.0, 0.0, 0.0, 1.0])
        .unwrap()
        .with_bound_a(1.0);
    let r = check_hypothesis1(&quartic, &sample, 21).unwrap();
    assert!(!r.hessian_ok && !r.pass);
    assert!(r.max_hessian_norm > 40.0);
    let flat = SampleBox {
        p: vec![(1.0, 1.0)],
        ..sample
    };
    assert!(check_hypothesis1(&quartic, &flat, 21).is_err());
}

#[test]
fn linear_potential_fixes_sign_convention() {
    let model = HamiltonianModel::potential(vec![0.0, 1.0]).unwrap();
    let start = PhaseState {
        q: Vector::d1(0.4),
        p: Vector::d1(0.25),
    };
    let (_, s, _) = integrate_hs(&model, start, 0.0, 1.0, 1e-3).unwrap().last();
    assert!((s.p[0] - (0.25 - 1.0)).abs() < 1e-12);
    assert!((s.q[0] - 0.4).abs() < 1e-12);
}

#[test]
fn patch_invariants_below_caustic() {
    let model = HamiltonianModel::pendulum(1.0).unwrap();
    let gen = Generator::analytic(
        Vector::d1(0.0),
        Vector::d1(0.1),
        0.2,
        AnalyticForm::Poly1d(vec![0.0, 0.0, 0.3]),
    );
    let launch = Grid::line(-1.0, 1.0, 41).unwrap();
    let at_zero = evolve_generator(&model, &gen, &launch, 0.0, 0.01).unwrap();
    for ((q, _, v), x) in at_zero.traced().iter().zip(launch.nodes()) {
        assert_eq!(q, &x);
        assert_eq!(*v, gen.value(&x));
    }
    let patch = evolve_generator(&model, &gen, &launch, 1.0, 0.01).unwrap();
    assert!(patch.caustic_time > 1.0);
    for (arc, x) in patch.arcs.iter().zip(launch.nodes()) {
        assert!(arc.times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(arc.times.len(), arc.states.len());
        assert_eq!(arc.action[0], gen.value(&x));
    }
    let qs: Vec<f64> = patch.traced().iter().map(|(q, _, _)| q[0]).collect();
    assert!(qs.windows(2).all(|w| w[1] - w[0] > 1e-9));
}

#[test]
fn phi_profile_invariants() {
    for (b, l) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.2)] {
        let p = build_phi(b, l, 16).unwrap();
        let mut prev_psi = f64::INFINITY;
        for i in 0..=2000 {
            let r = i as f64 * 8.0 * l / b / 2000.0;
            let psi = p.psi(r);
            assert!(psi <= prev_psi + 1e-15 && (0.0..=b).contains(&psi));
            prev_psi = psi;
            if r <= 4.0 * l / b {
                assert_eq!(psi, b);
            }
            if r >= 5.0 * l / b {
                assert_eq!(psi, 0.0);
            }
            assert!((0.0..=5.0 * l + 1e-12).contains(&p.big_psi(r)));
            assert!(p.phi(r) >= (b * r * r / 2.0).min(2.0 * l * r) - 1e-12);
        }
        assert_eq!(p.phi(0.0), 0.0);
        assert_eq!(p.big_psi(0.0), 0.0);
    }
    let unit = build_phi(1.0, 1.0, 16).unwrap();
    assert!(unit.phi(10.0) - unit.phi(9.0) <= 5.0);
    assert!((hessian_norm_radial(&unit, 2.0) - 1.0).abs() < 1e-15);
    assert!(hessian_norm_radial(&unit, 100.0) <= 0.05);
    assert_eq!(hessian_norm_radial(&unit, 0.0), 1.0);
}

#[test]
fn planar_caps_have_bounded_derivatives() {
    let profile = Arc::new(build_phi(1.0, 1.0, 64).unwrap());
    let gen = Generator::phi_cap(
        Vector::d2(0.2, -0.1),
        Vector::d2(0.6, -0.8),
        0.3,
        profile.clone(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let h = 1e-4;
    for _ in 0..50 {
        let x = Vector::d2(rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0));
        let f = |dx: f64, dy: f64| gen.value(&Vector::d2(x[0] + dx, x[1] + dy));
        let fxx = (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
        let fyy = (f(0.0, h) - 2.0 * f(0.0, 0.0) + f(0.0, -h)) / (h * h);
        let fxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
        let fd = sym_norm(&[[fxx, fxy], [fxy, fyy]], 2);
        assert!(fd <= 1.0 + 1e-3, "{fd}");
        let r = x.distance(&gen.x0);
        assert!((sym_norm(&gen.hessian(&x), 2) - hessian_norm_radial(&profile, r)).abs() < 1e-4);
        assert!(gen.gradient(&x).norm() <= 6.0);
    }
}

#[test]
fn reconstruction_touches_at_sites_and_never_undercuts() {
    let u = neg_abs();
    let coarse = [Vector::d1(-1.0), Vector::d1(0.0), Vector::d1(1.0)];
    let sites: Vec<Vector> = Grid::line(-2.0, 2.0, 81)
        .unwrap()
        .nodes()
        .chain(coarse)
        .collect();
    let family = build_family_f0(&u, &sites, 1.0, 1.0).unwrap();
    for s in &sites {
        assert!((family.eval_min(s).0 - u.value(s)).abs() <= 1e-12);
    }
    let mut worst: f64 = 0.0;
    for x in Grid::line(-3.0, 3.0, 6001).unwrap().nodes() {
        for g in family.generators() {
            assert!(g.value(&x) >= u.value(&x) - 1e-12);
        }
        if x[0].abs() <= 2.0 {
            worst = worst.max(family.eval_min(&x).0 - u.value(&x));
        }
    }
    assert!(worst <= 1e-2);

    let affine = SemiConcaveFn::min_affine(&[Vector::d1(0.7)], &[0.1]).unwrap();
    let fam = build_family_f0(&affine, &[Vector::d1(0.5)], 1.0, 1.0).unwrap();
    for x in Grid::line(-5.0, 5.0, 101).unwrap().nodes() {
        let gap = fam.eval_min(&x).0 - affine.value(&x);
        assert!(gap >= 0.0);
        assert_eq!(gap == 0.0, (x[0] - 0.5).abs() < 1e-12);
    }
}

#[test]
fn semiconcavity_witness_and_midpoint_concavity() {
    let u = neg_abs();
    let sites: Vec<Vector> = Grid::line(-2.0, 2.0, 41).unwrap().nodes().collect();
    let family = build_family_f0(&u, &sites, 1.0, 1.0).unwrap();
    let xs: Vec<Vector> = Grid::line(-2.5, 2.5, 101).unwrap().nodes().collect();
    let val = |x: &Vector| family.eval_min(x).0;
    for x0 in &xs {
        let sd = family.superdifferential(x0, CLUSTER_TOL);
        for v in sd.extreme_vertices() {
            for x in &xs {
                let lhs = val(x) - val(x0) - v.p.dot(&(*x - *x0));
                assert!(lhs <= 0.5 * x.distance(x0).powi(2) + 1e-9);
            }
        }
    }
    let w = |x: f64| val(&Vector::d1(x)) - x * x / 2.0;
    for i in 0..200 {
        let (a, b) = (-2.5 + 0.02 * i as f64, 2.5 - 0.013 * i as f64);
        assert!(w(0.5 * (a + b)) >= 0.5 * (w(a) + w(b)) - 1e-9);
    }
}

#[test]
fn reachable_gradients_lie_in_the_hull() {
    let slopes = [
        Vector::d2(1.0, 0.0),
        Vector::d2(0.0, 1.0),
        Vector::d2(-1.0, -1.0),
    ];
    let u = SemiConcaveFn::min_affine(&slopes, &[0.0, 0.1, 0.05]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let x = Vector::d2(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
        let hull = u.superdifferential(&x, CLUSTER_TOL).spatial_hull();
        for _ in 0..8 {
            let y = x + Vector::d2(rng.gen_range(-1e-7..1e-7), rng.gen_range(-1e-7..1e-7));
            let sd = u.superdifferential(&y, CLUSTER_TOL);
            if sd.is_singleton() {
                let p = sd.extreme_vertices().next().unwrap().p;
                assert!(hull.contains(p.as_slice(), CLUSTER_TOL));
            }
        }
    }
}

#[test]
fn concave_dual_is_an_infimum() {
    let x_grid = Grid::line(-4.0, 4.0, 401).unwrap();
    let dual = legendre_concave_dual(
        &|x: &Vector| -x[0] * x[0] / 2.0,
        &x_grid,
        &Grid::line(-2.0, 2.0, 41).unwrap(),
    )
    .unwrap();
    for (p, v) in dual.p_nodes.iter().zip(&dual.values) {
        assert!((v + p[0] * p[0] / 2.0).abs() < 1e-9);
        for x in x_grid.nodes() {
            assert!(*v <= p[0] * x[0] + x[0] * x[0] / 2.0 + 1e-9);
        }
    }
    let affine = legendre_concave_dual(
        &|x: &Vector| 0.5 * x[0] - 0.2,
        &x_grid,
        &Grid::line(-1.0, 1.0, 21).unwrap(),
    )
    .unwrap();
    assert_eq!(affine.p_nodes.len(), 1);
    assert!((affine.p_nodes[0][0] - 0.5).abs() < 1e-12);
    assert!((affine.values[0] - 0.2).abs() < 1e-12);
}

#[test]
fn hopf_at_time_zero_recovers_concave_data() {
    let dual = legendre_concave_dual(
        &neg_abs_fn,
        &Grid::line(-4.0, 4.0, 401).unwrap(),
        &Grid::line(-2.0, 2.0, 81).unwrap(),
    )
    .unwrap();
    let grid = Grid::line(-2.0, 2.0, 81).unwrap();
    let f = hopf_solution(&HamiltonianModel::quadratic(1).unwrap(), &dual, 0.0, &grid).unwrap();
    for (x, v) in grid.nodes().zip(&f.values) {
        assert!((v - neg_abs_fn(&x)).abs() <= 1e-2);
    }
}

#[test]
fn affine_data_move_by_translation() {
    let grid = Grid::line(-2.0, 2.0, 201).unwrap();
    let u0 = |x: &Vector| 0.6 * x[0] - 0.1;
    let model = HamiltonianModel::quadratic(1).unwrap();
    let lo = lax_oleinik(
        &model,
        &u0,
        0.8,
        &grid,
        &Grid::line(-4.0, 4.0, 801).unwrap(),
        &Grid::line(-3.0, 3.0, 601).unwrap(),
    )
    .unwrap();
    for model in [
        model,
        HamiltonianModel::rel_kinetic(1).unwrap(),
        HamiltonianModel::neg_quadratic(1).unwrap(),
    ] {
        let fd = fd_viscosity_oracle(&model, &u0, 0.8, &grid, 0.9).unwrap();
        let h = model.value(0.0, &Vector::d1(0.0), &Vector::d1(0.6));
        for (x, v) in grid.nodes().zip(&fd.values) {
            assert!((v - (u0(&x) - 0.8 * h)).abs() <= 1e-2, "{}", model.id());
        }
    }
    for (x, v) in grid.nodes().zip(&lo.values) {
        assert!((v - (u0(&x) - 0.8 * 0.18)).abs() <= 1e-3);
    }
}

#[test]
fn finite_differences_find_the_rarefaction_value() {
    let f = fd_viscosity_oracle(
        &HamiltonianModel::neg_quadratic(1).unwrap(),
        &neg_abs_fn,
        1.0,
        &Grid::line(-2.0, 2.0, 401).unwrap(),
        0.9,
    )
    .unwrap();
    assert!(f.nearest(&Vector::d1(0.0)).abs() <= 5e-2);
}

#[test]
fn iteration_is_idle_for_convex_hamiltonian() {
    let model = HamiltonianModel::quadratic(1).unwrap();
    let grid = Grid::line(-2.0, 2.0, 201).unwrap();
    let one = iterated_variational(&model, &neg_abs(), 1.0, &grid, &Default::default(), 1).unwrap();
    let many =
        iterated_variational(&model, &neg_abs(), 1.0, &grid, &Default::default(), 16).unwrap();
    assert!(one.sup_distance(&many.values) <= 5e-3);
}

#[test]
fn iteration_reaches_rarefaction_value_for_concave_hamiltonian() {
    let model = HamiltonianModel::neg_quadratic(1).unwrap();
    let grid = Grid::line(-2.0, 2.0, 201).unwrap();
    let f = iterated_variational(&model, &neg_abs(), 1.0, &grid, &Default::default(), 64).unwrap();
    assert!(f.nearest(&Vector::d1(0.0)).abs() <= 5e-2);
}

#[test]
fn variational_matches_classical_characteristics() {
    let model = HamiltonianModel::quadratic(1).unwrap();
    let grid = Grid::line(-1.0, 1.0, 41).unwrap();
    for (a, b, t) in [(-0.5, 1e-6, 0.5), (0.5, 1.0, 0.5), (-0.25, 1e-6, 1.0)] {
        let gen = Generator::analytic(
            Vector::d1(0.0),
            Vector::d1(0.0),
            0.0,
            AnalyticForm::Poly1d(vec![0.0, 0.0, a]),
        );
        let u0 = SemiConcaveFn::new(vec![gen], b, 3.0).unwrap();
        let f = variational_solution(&model, &u0, t, &grid, &Default::default()).unwrap();
        for (x, v) in grid.nodes().zip(&f.values) {
            let classical = a * x[0] * x[0] / (1.0 + 2.0 * a * t);
            assert!((v - classical).abs() <= 1e-6, "{x:?}: {v} vs {classical}");
        }
    }
}

#[test]
fn variational_is_monotone_and_shift_equivariant() {
    let model = HamiltonianModel::neg_quadratic(1).unwrap();
    let grid = Grid::line(-1.0, 1.0, 41).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..20 {
        let a = rng.gen_range(-1.0..1.0);
        let u = SemiConcaveFn::min_affine(
            &[Vector::d1(1.0), Vector::d1(a)],
            &[0.0, rng.gen_range(-0.5..0.5)],
        )
        .unwrap();
        let c = rng.gen_range(0.0..1.0);
        let lo = variational_solution(&model, &u, 0.5, &grid, &Default::default()).unwrap();
        let hi =
            variational_solution(&model, &u.shifted(c), 0.5, &grid, &Default::default()).unwrap();
        for (l, h) in lo.values.iter().zip(&hi.values) {
            assert!(l <= &(h + 1e-9));
            assert!((h - l - c).abs() <= 1e-9);
        }
    }
}

#[test]
fn envelope_examples_and_sandwich() {
    let pts = vec![
        (Vector::d1(-1.0), 1.0),
        (Vector::d1(0.0), 0.0),
        (Vector::d1(1.0), 1.0),
    ];
    let at = |q: f64, mode| {
        envelope_value(&EnvelopeQuery {
            points: pts.clone(),
            query: Vector::d1(q),
            mode,
        })
        .unwrap()
    };
    assert!((at(0.5, EnvelopeMode::Convex) - 0.5).abs() < 1e-15);
    assert_eq!(at(0.0, EnvelopeMode::Convex), 0.0);
    assert!((at(0.0, EnvelopeMode::Concave) - 1.0).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let pts: Vec<(Vector, f64)> = (0..5)
            .map(|_| {
                (
                    Vector::d2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        for (p, h) in &pts {
            let q = |mode| {
                envelope_value(&EnvelopeQuery {
                    points: pts.clone(),
                    query: *p,
                    mode,
                })
                .unwrap()
            };
            let (lo, hi) = (q(EnvelopeMode::Convex), q(EnvelopeMode::Concave));
            assert!(lo <= h + 1e-12 && hi >= h - 1e-12 && lo <= hi + 1e-12);
        }
    }
}

#[test]
fn endpoint_only_chord_sampling_is_vacuous() {
    let anti = HamiltonianModel::neg_quadratic(1).unwrap();
    let r = check_two_branch(
        &anti,
        0.0,
        &Vector::d1(0.0),
        &Vector::d1(1.0),
        &Vector::d1(-1.0),
        2,
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(r.pass);
}

#[test]
fn smooth_field_has_no_kinks() {
    let model = HamiltonianModel::quadratic(1).unwrap();
    let u = SemiConcaveFn::min_affine(&[Vector::d1(0.4)], &[0.0]).unwrap();
    let f = inf_family_solution(
        &model,
        &u,
        1.0,
        &Grid::line(-1.0, 1.0, 21).unwrap(),
        &EvolveParams::default(),
    )
    .unwrap();
    let scan = scan_field(
        &model,
        &f,
        EnvelopeMode::Convex,
        DEFAULT_DENSITY,
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(scan.reports.is_empty() && scan.pass);
}

#[test]
fn entropy_verdict_predicts_agreement_with_viscosity_oracle() {
    let grid = Grid::line(-2.0, 2.0, 401).unwrap();
    for (model, expect_pass) in [
        (HamiltonianModel::quadratic(1).unwrap(), true),
        (HamiltonianModel::neg_quadratic(1).unwrap(), false),
    ] {
        let f =
            inf_family_solution(&model, &neg_abs(), 1.0, &grid, &EvolveParams::default()).unwrap();
        let fd = fd_viscosity_oracle(&model, &neg_abs_fn, 1.0, &grid, 0.9).unwrap();
        let convex = scan_field(
            &model,
            &f,
            EnvelopeMode::Convex,
            DEFAULT_DENSITY,
            DEFAULT_TOL,
        )
        .unwrap();
        let concave = scan_field(
            &model,
            &f,
            EnvelopeMode::Concave,
            DEFAULT_DENSITY,
            DEFAULT_TOL,
        )
        .unwrap();
        let distance = f.sup_distance(&fd.values);
        assert_eq!(convex.pass, expect_pass);
        if expect_pass {
            assert!(distance <= 5e-2, "{distance}");
            let backing = f.backing().unwrap();
            for r in &convex.reports {
                let sd = backing.superdifferential(&r.x, 1e-6, CLUSTER_TOL);
                assert!(
                    subsolution_margin(&model, 1.0, &r.x, &sd, DEFAULT_DENSITY).unwrap() <= 1e-3
                );
            }
        } else {
            assert!(!concave.pass);
            assert!(distance > 5e-2, "{distance}");
        }
    }
}
