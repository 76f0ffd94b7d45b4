use siph_core::decomposition::{build_decomposition, DecompositionConfig, Hints};
use siph_core::euler::{
    euler_residual, general_euler_point, general_euler_residual, levelset_gradient_constancy,
    paired_level_solver, positive_gradient_region, saddle_levels, DeltaStop,
};
use siph_core::gallery::{make_builtin, Params, RandomSi};
use siph_core::levelset::{
    check_ph_sandwich, check_si_sandwich, compactness_probe, negligibility_probe, probe_directions,
    sphere_extrema, Compactness,
};
use siph_core::ray::{classify_ray, Monotonicity};
use siph_core::sampling::geometric_grid;
use siph_core::{Field64, GradientSpec, SamplingPlan, Verdict};

fn g(name: &str, n: usize) -> Field64 {
    make_builtin(name, n, &Params::new()).unwrap()
}

fn plan(samples: usize) -> SamplingPlan {
    SamplingPlan::default().with_samples(samples)
}

fn random(seed: u64, n: usize, eps: f64) -> RandomSi {
    RandomSi::new(seed, n, eps, 4).unwrap()
}

#[test]
fn euler_residual_on_half_norm_away_from_axes() {
    let r = euler_residual(&g("half_norm", 2), 1.0, &plan(2000), &GradientSpec::numeric(1e-5), Some(0.1), 1e-6)
        .unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);
    assert!(r.skipped > 0);
}

#[test]
fn halving_the_step_quarters_the_residual() {
    for (name, alpha, min_coord) in [("norm", 1.0, None), ("half_norm", 1.0, Some(0.1))] {
        let p = g(name, 3);
        let a = euler_residual(&p, alpha, &plan(500), &GradientSpec::numeric(1e-3), min_coord, 1.0).unwrap();
        let b = euler_residual(&p, alpha, &plan(500), &GradientSpec::numeric(5e-4), min_coord, 1.0).unwrap();
        let ratio = a.max_residual / b.max_residual;
        assert!((2.5..=6.0).contains(&ratio), "{name}: ratio {ratio}");
    }
}

#[test]
fn general_euler_examples() {
    let f = g("gauss_si", 3);
    let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default().with_alpha(2.0)).unwrap();
    let r = general_euler_residual(&f, &d, &plan(500), &GradientSpec::default(), 1e-5).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);
    let pt = general_euler_point(&f, &d, &[1.0, 0.0, 0.0], &GradientSpec::default()).unwrap();
    assert!((pt.rhs + 2.0 * (-1.0f64).exp()).abs() < 1e-5);

    let f = g("sq_norm", 3);
    let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default()).unwrap();
    let r = general_euler_residual(&f, &d, &plan(500), &GradientSpec::default(), 1e-6).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);

    let f: Field64 = random(11, 3, 0.2).field();
    let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default()).unwrap();
    let r = general_euler_residual(&f, &d, &plan(500), &GradientSpec::default(), 1e-4).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);
}

#[test]
fn random_si_level_constancy() {
    let rs = random(5, 4, 0.25);
    let f: Field64 = rs.field();
    let r = levelset_gradient_constancy(&f, rs.phi(1.0), 128, &GradientSpec::default(), &plan(1), 1e-4).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    assert_eq!(r.skipped, 0);
}

#[test]
fn paired_gauss_levels_share_radial_derivative() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let s = paired_level_solver(r, 1e-15).unwrap().s;
    let f = g("gauss_si", 2);
    let spec = GradientSpec::default();
    let a = levelset_gradient_constancy(&f, (-r * r).exp(), 32, &spec, &plan(1), 1e-6).unwrap();
    let b = levelset_gradient_constancy(&f, (-s * s).exp(), 32, &spec, &plan(1), 1e-6).unwrap();
    assert_eq!(a.verdict, Verdict::Pass);
    assert_eq!(b.verdict, Verdict::Pass);
    assert!((a.min - b.max).abs() < 1e-6 && (a.max - b.min).abs() < 1e-6);
    assert!(((-r * r).exp() - (-s * s).exp()).abs() > 1e-3);
}

#[test]
fn saddle_certificate_avoids_shells() {
    let f = g("saddle_si", 3);
    let spec = GradientSpec::default();
    let rep = saddle_levels(&f, 3, 16, &spec, &plan(1), 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    let c = positive_gradient_region(&f, &plan(2000), &spec, 64, 8).unwrap();
    assert!(c.epsilon > 0.0 && c.delta > 0.0);
    for k in 1..=3 {
        let shell = (k as f64 * std::f64::consts::PI).sqrt();
        assert!(c.level_radius_max + c.delta < shell || c.level_radius_min - c.delta > shell);
    }
    // rays cross the shells while increasing
    for u in probe_directions::<f64>(3, 8, 1) {
        let v = classify_ray(&f, &u, &geometric_grid(0.02, 3.0, 200)).unwrap();
        assert_eq!(v.kind, Monotonicity::Increasing);
    }
}

#[test]
fn random_si_certificate() {
    let f: Field64 = random(2, 3, 0.2).field();
    let c = positive_gradient_region(&f, &plan(2000), &GradientSpec::default(), 64, 8).unwrap();
    assert!(c.epsilon > 0.0);
    assert!(matches!(c.delta_stop, DeltaStop::Violation | DeltaStop::Cap));
}

#[test]
fn extrema_oracles() {
    let p = make_builtin::<f64>("ellipsoid", 2, &Params::new().with("diag", vec![1.0, 4.0])).unwrap();
    let e = sphere_extrema(&p, 4096, 8, 0).unwrap();
    assert!((e.m - 1.0).abs() < 1e-5 && (e.big_m - 4.0).abs() < 1e-5);
    let e = sphere_extrema(&g("half_norm", 2), 4096, 8, 0).unwrap();
    assert!((e.m - 1.0).abs() < 1e-6, "{}", e.m);
    assert!((e.big_m - 2f64.powf(1.5)).abs() < 1e-6, "{}", e.big_m);
}

#[test]
fn sandwiches_on_qualifying_entries() {
    for (name, alpha) in [("sphere", 2.0), ("norm", 1.0), ("ellipsoid", 2.0), ("half_norm", 1.0)] {
        for n in [2, 5] {
            let p = g(name, n);
            let e = sphere_extrema(&p, 4096, 8, 0).unwrap();
            let r = check_ph_sandwich(&p, alpha, e.m, e.big_m, &plan(10_000)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{name} n={n}: {:?}", r.witnesses.first());
        }
    }
    let mut fields: Vec<(String, Field64)> = vec![
        ("sphere".into(), g("sphere", 3)),
        ("ellipsoid".into(), g("ellipsoid", 3)),
        ("saddle_si".into(), g("saddle_si", 3)),
    ];
    for seed in [1, 2, 3] {
        fields.push((format!("random_si {seed}"), random(seed, 3, 0.3).field()));
    }
    for (name, f) in fields {
        let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default()).unwrap();
        let r = check_si_sandwich(&f, &d, &plan(10_000), 4096).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{name}: {:?}", r.witnesses.first());
        // radial fields sit on both bounds
        assert_eq!(r.strict_somewhere, name != "sphere" && name != "saddle_si", "{name}");
    }
}

#[test]
fn compactness_matches_tags_in_two_dimensions() {
    let dirs = probe_directions::<f64>(2, 32, 0);
    let grid = geometric_grid(0.02, 20.0, 64);
    for e in siph_core::gallery::registry() {
        if !e.tags.is_si || e.min_dim > 2 {
            continue;
        }
        let f = g(e.name, 2);
        let c = f.evaluate(&[0.5, 0.25]).unwrap();
        let r = compactness_probe(&f, &dirs, c, &grid).unwrap();
        let bounded = r.verdict == Compactness::Bounded;
        assert_eq!(bounded, e.tags.compact, "{}", e.name);
    }
    let r = compactness_probe(&g("sphere", 2), &dirs, 2.0, &grid).unwrap();
    assert!((r.max_radius.unwrap() - 2f64.sqrt()).abs() < 1e-8);
    let r = compactness_probe(&g("gauss_si", 2), &dirs, (-1.0f64).exp(), &grid).unwrap();
    assert!(r.witnesses.iter().any(|w| w.reason == Monotonicity::Decreasing));
}

#[test]
fn sphere_shell_fraction() {
    let r = negligibility_probe(&g("sphere", 2), 1.0, &[0.1, 0.05], 200_000, 2.0, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let (a, b) = (&r.shells[0], &r.shells[1]);
    let exact = 0.2 * std::f64::consts::PI / 16.0;
    assert!((a.fraction - exact).abs() <= 3.0 * a.sigma, "{}", a.fraction);
    assert!((b.fraction - a.fraction / 2.0).abs() <= 3.0 * (b.sigma.powi(2) + a.sigma.powi(2) / 4.0).sqrt());
}
