use proptest::prelude::*;
use stickslip::escape::{escape_exact, escape_quadrature};
use stickslip::friction::{friction_noise, friction_system};
use stickslip::*;

fn friction(mu: f64, kappa: f64, z0: f64) -> FrictionParams<f64> {
    FrictionParams::reference(mu, kappa, z0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // V and T̃ depend on (ε, κ, r) only through κ̃ = κ/√ε and r̃ = r/ε.
    #[test]
    fn reduced_problem_is_scale_invariant(lambda in 0.2f64..5.0, z0 in -1.4f64..-0.1) {
        let p = friction(3.0, 0.05, z0);
        let q = FrictionParams { eps: p.eps * lambda, kappa: p.kappa * lambda.sqrt(), r: p.r * lambda, ..p };
        let (a, b) = (reduced_from_friction(&p).unwrap(), reduced_from_friction(&q).unwrap());
        prop_assert!((a.kappa_tilde() - b.kappa_tilde()).abs() < 1e-12);
        let (va, vb) = (PiecewisePotential::new(&a).unwrap(), PiecewisePotential::new(&b).unwrap());
        for k in 0..=20 {
            let y = -12.0 + 24.0 * k as f64 / 20.0;
            prop_assert!((va.eval(y) - vb.eval(y)).abs() < 1e-12);
        }
        let (ta, tb) = (escape_time_exact(&a).unwrap(), escape_time_exact(&b).unwrap());
        prop_assert!((ta / tb - 1.0).abs() < 1e-9);
    }

    #[test]
    fn c_never_exceeds_its_bound(z0 in -1.4f64..-0.05, kappa in 0.01f64..0.3, mu in 0.0f64..5.0) {
        let red = reduced_from_friction(&friction(mu, kappa, z0)).unwrap();
        let c = escape_c(&red).unwrap();
        prop_assert!(c.within_bound(), "ln C {} > ln bound {}", c.ln_c, c.ln_c_bound);
    }

    #[test]
    fn stokes_multiplier_is_a_step(mu in 0.6f64..5.0, t in 0.0f64..1.0) {
        let p = friction(mu, 0.05, 0.0);
        let zp = breakaway(&p).z0_plus.unwrap();
        let (lo, hi) = (zp - 1.0, zp.min(0.0));
        let z0 = lo + t * (hi - lo);
        prop_assume!((z0 - zp).abs() > 1e-6 && z0 < -1e-6);
        let w = turning_points(&reduced_from_friction(&p.with_z0(z0)).unwrap()).unwrap();
        prop_assert_eq!(w.stokes, u8::from(z0 > zp));
    }

    #[test]
    fn breakaway_force_bounds_the_layer_force(mu in 0.0f64..6.0, alpha in 0.2f64..3.0) {
        let p = FrictionParams { alpha, mu, ..friction(mu, 0.05, 0.0) };
        let b = breakaway(&p);
        let peak = (0..=4000)
            .map(|k| friction_force(-p.eps + 2.0 * p.eps * k as f64 / 4000.0, &p))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(peak <= b.beta * (1.0 + 1e-12));
        prop_assert!(b.beta - peak < 1e-5 * b.beta);
        if let Some(zp) = b.z0_plus {
            prop_assert!((zp - (1.0 - b.beta)).abs() < 1e-15);
        }
    }

    // ỹ → −ỹ maps a leftward-crossing system onto a rightward one.
    #[test]
    fn reflected_system_has_same_escape_time(
        am in 0.2f64..3.0, ap in 0.2f64..3.0, bump in -1.0f64..1.0, kt in 0.3f64..2.0,
    ) {
        let mid = 0.5 * (am + ap);
        let half = 0.5 * (ap - am);
        let poly = Polynomial::new(vec![mid + bump, half, -bump]);
        let red = ReducedSystem::scaled(am, ap, Interior::Polynomial(poly), kt, 6.0).unwrap();
        let t = escape_time_exact(&red).unwrap();
        let tr = escape_time_exact(&red.reflected()).unwrap();
        prop_assert!((t / tr - 1.0).abs() < 1e-10);
    }

    #[test]
    fn occupation_probability_is_a_probability(am in 0.1f64..4.0, ap in -4.0f64..-0.1, kt in 0.05f64..20.0) {
        let red = ReducedSystem::scaled(am, ap, Interior::linear(am, ap), kt, 10.0).unwrap();
        let pot = PiecewisePotential::new(&red).unwrap();
        let p = occupation_probability_exact(&pot).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        let d = stationary_density(&pot).unwrap();
        prop_assert!((d.total_mass().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn escape_time_decreases_with_noise_inside_the_well() {
    let p = friction(3.0, 0.05, -0.5);
    let mut prev = f64::INFINITY;
    for k in 0..=40 {
        let kt = 0.05 * (1.0f64 / 0.05).powf(k as f64 / 40.0);
        let red = reduced_from_friction(&p).unwrap().with_kappa_tilde(kt).unwrap();
        assert_eq!(turning_points(&red).unwrap().stokes, 1);
        let t = escape_exact(&red).unwrap().ln_t_tilde;
        assert!(t.is_finite() && t < prev, "kt = {kt}: {t} !< {prev}");
        prev = t;
    }
}

#[test]
fn refinement_is_stable_at_small_noise() {
    // 2·depth/κ̃² ≈ 36: T̃ ~ 10¹⁶
    let red = reduced_from_friction(&friction(3.0, 0.01, -0.3)).unwrap();
    let e = escape_exact(&red).unwrap();
    assert!(e.ln_t_tilde > 30.0 && e.ln_t_tilde.is_finite());
    let d = escape_quadrature(&red, 2 * e.panels_per_segment).unwrap();
    assert!(((d.ln_t_tilde - e.ln_t_tilde).exp() - 1.0).abs() < 1e-6);
}

#[test]
fn turning_points_of_the_sliding_cubic() {
    // A(u) = −4u + 3u³: roots 0 and ±2/√3; only 0 lies in the layer
    let red = reduced_from_friction(&friction(3.0, 0.05, 1.0)).unwrap();
    let w = turning_points(&red).unwrap();
    assert_eq!(w.roots.len(), 1);
    assert!(w.roots[0].y.abs() < 1e-14);
    assert!((w.roots[0].slope + 4.0).abs() < 1e-12);
}

#[test]
fn friction_asymptotic_matches_closed_form_well() {
    let p = friction(3.0, 0.01, -0.5);
    let red = reduced_from_friction(&p).unwrap();
    let well = turning_points(&red).unwrap();
    let w = well.well.unwrap();
    // roots of 1.5 − 4u + 3u³ by Newton from the bracketing points
    let a = |u: f64| 1.5 - 4.0 * u + 3.0 * u * u * u;
    let da = |u: f64| -4.0 + 9.0 * u * u;
    let newton = |mut u: f64| {
        for _ in 0..50 {
            u -= a(u) / da(u);
        }
        u
    };
    let (y1, y2) = (newton(0.4), newton(0.9));
    assert!((w.y1 - y1).abs() < 1e-12 && (w.y2 - y2).abs() < 1e-12);
    // depth = ∫_{y1}^{y2} −A
    let prim = |u: f64| 1.5 * u - 2.0 * u * u + 0.75 * u.powi(4);
    let depth = -(prim(y2) - prim(y1));
    assert!((w.depth - depth).abs() < 1e-12);
    let asym = escape_time_asymptotic(&red, &well).unwrap();
    let kt = red.kappa_tilde();
    let ln_first = (std::f64::consts::TAU / (-da(y1) * da(y2)).sqrt()).ln() + 2.0 * depth / (kt * kt);
    let ln_drift = (10.0f64 / red.a_plus()).ln();
    assert!(ln_first > ln_drift + 10.0, "first term dominates");
    let ln_both = ln_first + (ln_drift - ln_first).exp().ln_1p();
    assert!((asym.ln_value - ln_both).abs() < 1e-9);
}

#[test]
fn pipeline_without_well_gives_drift_time() {
    let red = reduced_from_friction(&friction(3.0, 0.005, -1.0)).unwrap();
    let r = escape_pipeline(&red).unwrap();
    assert_eq!(r.well.stokes, 0);
    assert!((r.t_tilde_asym - 10.0).abs() < 1e-12);
    // small noise: close to the deterministic transit time from 0, ∫₀¹ du/A + (r̃ − 1)/a⁺
    let transit = stickslip::quadrature::GaussLegendre::new(64).integrate(0.0, 1.0, |u: f64| 1.0 / (2.0 - 4.0 * u + 3.0 * u.powi(3)));
    assert!((r.t_tilde_exact / (transit + 9.0) - 1.0).abs() < 1e-3, "{} vs {}", r.t_tilde_exact, transit + 9.0);
    assert!((r.t_unscaled - 0.01 * r.t_tilde_exact).abs() < 1e-15);
    let deep = escape_pipeline(&reduced_from_friction(&friction(3.0, 0.01, -0.5)).unwrap()).unwrap();
    assert_eq!(deep.well.stokes, 1);
    assert!(deep.ln_t_tilde_exact > 15.0);
}

#[test]
fn full_and_reduced_simulations_agree() {
    // small r keeps the frozen-z error of the reduction at a few percent
    let p = FrictionParams::new(1.0f64, 3.0, 0.01, 0.1, 0.03, -1.0).unwrap();
    let red = reduced_from_friction(&p).unwrap();
    let cfg = McConfig::new(0.01, 4000, 77, 200.0).unwrap();
    let reduced = mc_escape_time(&red, &cfg).unwrap();
    let sys = friction_system(&p).unwrap();
    let noise = friction_noise(&p).unwrap();
    let full_cfg = McConfig { step: cfg.step * p.eps, t_max: cfg.t_max * p.eps, ..cfg };
    let full = mc_escape_time_full(&sys, &noise, &[0.0, p.z0], p.r, &full_cfg).unwrap();
    let scaled = full.mean / p.eps;
    let spread = 3.0 * (reduced.stderr.powi(2) + (full.stderr / p.eps).powi(2)).sqrt();
    assert!(
        (scaled - reduced.mean).abs() <= spread + 0.05 * reduced.mean,
        "full {scaled} vs reduced {}",
        reduced.mean
    );
}

#[test]
fn f32_instantiation_runs_end_to_end() {
    let p = FrictionParamsF32::reference(3.0, 0.05, -1.0);
    let red = reduced_from_friction(&p).unwrap();
    let t = escape_time_exact(&red).unwrap();
    let t64 = escape_time_exact(&reduced_from_friction(&FrictionParamsF64::reference(3.0, 0.05, -1.0)).unwrap()).unwrap();
    assert!((t as f64 / t64 - 1.0).abs() < 1e-4, "{t} vs {t64}");
}

#[test]
fn mu_scan_at_fixed_small_noise() {
    // κ = 0.01 throughout: the well term sets T̃ on the spurious side of z0+
    let grid = stickslip::friction::linspace(-1.4, -0.1, 27);
    for &mu in &[0.5, 1.0, 2.0, 3.0, 4.0] {
        let p = friction(mu, 0.01, 0.0);
        let zp = breakaway(&p).z0_plus;
        let rows = scan_escape_times(&grid, &[0.01], &p);
        for r in &rows {
            assert!(r.status.succeeded() && r.log10_t_exact.unwrap().is_finite());
            let expect = u8::from(zp.is_some_and(|z| r.z0 > z));
            assert_eq!(r.stokes, Some(expect), "mu = {mu}, z0 = {}", r.z0);
            // away from z0+ the layer bottleneck is mild and the drift time dominates
            if zp.is_none_or(|z| r.z0 < z - 0.25) {
                assert!((r.t_exact.unwrap() * p.with_z0(r.z0).a_plus() / 10.0 - 1.0).abs() < 0.2);
            }
        }
    }
}
