//! Acceptance criteria AC1–AC12. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde_json::Value;
use siph_core::decomposition::{
    build_decomposition, order_equivalence, uniqueness_check, verify_decomposition, CaseTag, DecompositionConfig, Hints,
};
use siph_core::euler::{
    euler_residual, general_euler_point, levelset_gradient_constancy, paired_level_solver, positive_gradient_region,
    saddle_levels,
};
use siph_core::gallery::{make_builtin, registry, Params, RandomSi};
use siph_core::levelset::{
    check_ph_sandwich, check_si_sandwich, compactness_probe, negligibility_probe, sphere_extrema, Compactness,
};
use siph_core::ray::{check_decomposability, classify_ray, Decomposability, DecompositionWitness, Monotonicity};
use siph_core::sampling::{default_directions, geometric_grid};
use siph_core::{Field64, GradientSpec, SamplingPlan, Verdict};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)*));
        }
    };
}

fn g(name: &str, n: usize) -> Field64 {
    make_builtin(name, n, &Params::new()).unwrap()
}

fn plan(samples: usize) -> SamplingPlan {
    SamplingPlan::default().with_samples(samples)
}

fn random(seed: u64, n: usize, eps: f64) -> Field64 {
    RandomSi::new(seed, n, eps, 4).unwrap().field()
}

fn cli(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["siph"];
    argv.extend_from_slice(args);
    let o = siph_cli::run(argv);
    let v = serde_json::from_str(&o.output).unwrap_or(Value::Null);
    (o.code, v)
}

fn ac1() -> Check {
    let mut runs = 0;
    for e in registry().iter().filter(|e| e.tags.is_si) {
        for n in [2usize, 5, 10] {
            if n < e.min_dim {
                continue;
            }
            let (code, rep) = cli(&["check", "si", "--gallery", e.name, "--n", &n.to_string(), "--N", "10000"]);
            ensure!(code == 0, "{} n={n}: exit {code}", e.name);
            ensure!(rep["witnesses"].as_array().is_some_and(|w| w.is_empty()), "{} n={n}: witnesses", e.name);
            runs += 1;
        }
    }
    let (code, rep) = cli(&["check", "si", "--gallery", "footnote_1d", "--n", "2"]);
    ensure!(code == 1, "footnote_1d exit {code}");
    let w = &rep["witnesses"][0];
    let got = (w["x"][0].as_f64(), w["y"][0].as_f64(), w["rho"].as_f64());
    ensure!(got == (Some(0.5), Some(-0.5), Some(4.0)), "first witness {got:?}");
    ensure!(
        w["f_rho_x"].as_f64() == Some(2.0) && w["f_rho_y"].as_f64() == Some(4.0),
        "f(2) = {}, f(-2) = {}",
        w["f_rho_x"],
        w["f_rho_y"]
    );
    Ok(format!("{runs} SI runs clean; footnote_1d witness (1/2, -1/2, 4) with f(2)=2 < 4=f(-2)"))
}

fn ac2() -> Check {
    let mut fields: Vec<(String, Field64)> = ["sphere", "sq_norm", "ellipsoid", "half_norm", "linear_x1", "gauss_si"]
        .iter()
        .map(|n| (n.to_string(), g(n, 3)))
        .collect();
    for seed in [1, 2, 3] {
        fields.push((format!("random_si({seed})"), random(seed, 3, 0.3)));
    }
    let (mut worst_r, mut worst_p) = (0f64, 0f64);
    for (name, f) in &fields {
        for alpha in [1.0, 2.0] {
            let d = build_decomposition(f, &Hints::default(), &DecompositionConfig::default().with_alpha(alpha))
                .map_err(|e| format!("{name}: {e}"))?;
            let r = verify_decomposition(f, &d, &plan(1000), 1e-7).unwrap();
            ensure!(
                r.max_reconstruction <= 1e-7 && r.max_ph_residual <= 1e-7 && r.failures.is_empty(),
                "{name} α={alpha}: reconstruction {:e}, ph {:e}",
                r.max_reconstruction,
                r.max_ph_residual
            );
            worst_r = worst_r.max(r.max_reconstruction);
            worst_p = worst_p.max(r.max_ph_residual);
        }
    }
    Ok(format!("max |f − φ∘p| = {worst_r:.2e}, max PH residual = {worst_p:.2e}"))
}

fn ac3() -> Check {
    let cfg = DecompositionConfig::default();
    let f = g("sq_norm", 3);
    let d1 = build_decomposition(&f, &Hints::one_sided(vec![1.0, 0.0, 0.0]), &cfg).unwrap();
    let d2 = build_decomposition(&f, &Hints::one_sided(vec![0.3, -0.4, 1.2]), &cfg).unwrap();
    let u = uniqueness_check(&f, &d1, &d2, &plan(2000), 1e-6).unwrap();
    let cv1 = u.positive.as_ref().map_or(f64::NAN, |s| s.cv);
    ensure!(u.verdict.is_pass() && cv1 <= 1e-6, "sq_norm cv {cv1:e}");
    let f = g("linear_x1", 2);
    let d1 = build_decomposition(&f, &Hints::two_sided(vec![1.0, 0.0], vec![-1.0, 0.0]), &cfg).unwrap();
    let d2 = build_decomposition(&f, &Hints::two_sided(vec![2.0, 1.0], vec![-0.5, 3.0]), &cfg).unwrap();
    ensure!(d1.case() == CaseTag::TwoSided, "linear_x1 not two-sided");
    let u = uniqueness_check(&f, &d1, &d2, &plan(2000), 1e-6).unwrap();
    let (pos, neg) = (u.positive.clone().unwrap(), u.negative.clone().unwrap());
    ensure!(u.verdict.is_pass() && pos.cv <= 1e-6 && neg.cv <= 1e-6, "linear cv {:e} {:e}", pos.cv, neg.cv);
    Ok(format!(
        "sq_norm cv {cv1:.1e}; linear_x1 constants {:.6} (cv {:.1e}) and {:.6} (cv {:.1e})",
        pos.mean, pos.cv, neg.mean, neg.cv
    ))
}

fn ac4() -> Check {
    let f = g("tanh_exp", 2);
    let r = check_decomposability(&f, &default_directions(2, 32, 0), &geometric_grid(0.02, 20.0, 64)).unwrap();
    ensure!(r.verdict == Decomposability::NotDecomposable, "verdict {:?}", r.verdict);
    ensure!(r.scale == 20.0, "scale {}", r.scale);
    let pair = r.witnesses.iter().find_map(|w| match w {
        DecompositionWitness::DisjointImage { range_a, range_b, .. } => Some((*range_a, *range_b)),
        _ => None,
    });
    let (a, b) = pair.ok_or("no disjoint-image witness")?;
    let (lo, hi) = if a.1 <= 1.0 { (a, b) } else { (b, a) };
    // tanh(20) rounds to 1 in double precision; the exact supremum is below 1
    ensure!(lo.0 >= 0.0 && lo.1 <= 1.0 && hi.0 > 2.0, "ranges {lo:?} {hi:?}");
    Ok(format!("ranges [{:.3}, {:.17}] vs [{:.3}, {:.3e}]", lo.0, lo.1, hi.0, hi.1))
}

fn ac5() -> Check {
    let mut fields: Vec<(String, Field64)> = Vec::new();
    for e in registry() {
        for n in [2usize, 5] {
            if n >= e.min_dim {
                fields.push((format!("{} n={n}", e.name), g(e.name, n)));
            }
        }
    }
    for seed in [1, 2, 3] {
        fields.push((format!("random_si({seed}) n=3"), random(seed, 3, 0.3)));
    }
    let (mut checked, mut skipped) = (0, Vec::new());
    for (name, f) in &fields {
        let Ok(d) = build_decomposition(f, &Hints::default(), &DecompositionConfig::default()) else {
            skipped.push(name.clone());
            continue;
        };
        if !verify_decomposition(f, &d, &plan(200), 1e-7).unwrap().verdict.is_pass() {
            skipped.push(name.clone());
            continue;
        }
        let r = order_equivalence(f, &d.p_field(), &plan(10_000)).unwrap();
        ensure!(r.verdict.is_pass() && r.witnesses.is_empty(), "{name}: {} disagreements", r.witnesses.len());
        checked += 1;
    }
    ensure!(checked >= 15, "only {checked} decompositions succeeded");
    Ok(format!("{checked} decompositions, zero disagreements at N=10^4; not decomposed: {}", skipped.join(", ")))
}

fn ac6() -> Check {
    let grid = geometric_grid(0.02, 20.0, 64);
    let mut msg = Vec::new();
    for n in [2, 5] {
        let dirs = default_directions::<f64>(n, 32, 0);
        let c = 2.5;
        let r = compactness_probe(&g("sphere", n), &dirs, c, &grid).unwrap();
        let rad = r.max_radius.ok_or("sphere: no radius")?;
        ensure!(r.verdict == Compactness::Bounded && (rad - c.sqrt()).abs() <= 1e-8, "sphere n={n}: {rad}");
        msg.push(format!("sphere n={n} radius err {:.1e}", (rad - c.sqrt()).abs()));
        let r = compactness_probe(&g("linear_x1", n), &dirs, 1.0, &grid).unwrap();
        ensure!(
            r.verdict == Compactness::UnboundedEvidence
                && r.witnesses.iter().any(|w| w.reason == Monotonicity::Constant),
            "linear_x1 n={n}"
        );
        let r = compactness_probe(&g("gauss_si", n), &dirs, (-1.0f64).exp(), &grid).unwrap();
        ensure!(
            r.verdict == Compactness::UnboundedEvidence
                && r.witnesses.iter().any(|w| w.reason == Monotonicity::Decreasing),
            "gauss_si n={n}"
        );
    }
    Ok(format!("{}; linear_x1 constant ray; gauss_si decreasing ray", msg.join(", ")))
}

fn ac7() -> Check {
    let r = negligibility_probe(&g("sphere", 2), 1.0, &[0.1, 0.05], 1_000_000, 2.0, 0).unwrap();
    let (a, b) = (&r.shells[0], &r.shells[1]);
    let exact = 0.2 * std::f64::consts::PI / 16.0;
    ensure!((a.fraction - exact).abs() <= 3.0 * a.sigma, "fraction {} vs {exact} (σ {})", a.fraction, a.sigma);
    let sigma_half = (b.sigma.powi(2) + a.sigma.powi(2) / 4.0).sqrt();
    ensure!((b.fraction - a.fraction / 2.0).abs() <= 3.0 * sigma_half, "halving: {} vs {}", b.fraction, a.fraction / 2.0);
    ensure!(r.verdict.is_pass(), "probe verdict {:?}", r.verdict);
    Ok(format!("q(0.1) = {:.5} ± {:.5} (exact {exact:.5}), q(0.05) = {:.5}", a.fraction, a.sigma, b.fraction))
}

fn ac8() -> Check {
    let mut ph = 0;
    for e in registry() {
        let Some(alpha) = e.tags.ph_degree else { continue };
        if !e.tags.compact {
            continue; // p must be positive away from 0
        }
        for n in [2usize, 5] {
            let p = g(e.name, n.max(e.min_dim));
            let ext = sphere_extrema(&p, 4096, 8, 0).unwrap();
            let r = check_ph_sandwich(&p, alpha, ext.m, ext.big_m, &plan(10_000)).unwrap();
            ensure!(r.witnesses.is_empty(), "{} n={n}: {:?}", e.name, r.witnesses.first());
            ph += 1;
        }
    }
    let mut si = 0;
    let mut fields: Vec<(String, Field64)> = registry()
        .iter()
        .filter(|e| e.tags.is_si && e.tags.compact && e.tags.decomposable)
        .map(|e| (e.name.to_string(), g(e.name, 3)))
        .collect();
    for seed in [1, 2, 3] {
        fields.push((format!("random_si({seed})"), random(seed, 3, 0.3)));
    }
    for (name, f) in &fields {
        let d = build_decomposition(f, &Hints::default(), &DecompositionConfig::default()).unwrap();
        let r = check_si_sandwich(f, &d, &plan(10_000), 4096).unwrap();
        ensure!(r.verdict == Verdict::Pass && r.witnesses.is_empty(), "{name}: {:?} {:?}", r.verdict, r.witnesses.first());
        si += 1;
    }
    let p = make_builtin::<f64>("ellipsoid", 2, &Params::new().with("diag", vec![1.0, 4.0])).unwrap();
    let e = sphere_extrema(&p, 4096, 8, 0).unwrap();
    ensure!((e.m - 1.0).abs() <= 1e-5 && (e.big_m - 4.0).abs() <= 1e-5, "extrema ({}, {})", e.m, e.big_m);
    Ok(format!("{ph} PH and {si} SI sandwiches clean; diag(1,4) extrema ({:.10}, {:.10})", e.m, e.big_m))
}

fn ac9() -> Check {
    let num = GradientSpec::numeric(1e-5);
    let mut parts = Vec::new();
    for (name, alpha, min_coord) in [("sphere", 2.0, None), ("linear_x1", 1.0, None), ("half_norm", 1.0, Some(0.1))] {
        let r = euler_residual(&g(name, 3), alpha, &plan(2000), &num, min_coord, 1e-6).unwrap();
        ensure!(r.max_residual <= 1e-6, "{name}: {:e}", r.max_residual);
        parts.push(format!("{name} {:.1e}", r.max_residual));
    }
    // truncation error dominates only for non-polynomial p and steps well above roundoff
    for (name, min_coord) in [("norm", None), ("half_norm", Some(0.1))] {
        let p = g(name, 3);
        let a = euler_residual(&p, 1.0, &plan(1000), &GradientSpec::numeric(1e-3), min_coord, 1.0).unwrap();
        let b = euler_residual(&p, 1.0, &plan(1000), &GradientSpec::numeric(5e-4), min_coord, 1.0).unwrap();
        let ratio = a.max_residual / b.max_residual;
        ensure!((2.5..=6.0).contains(&ratio), "{name}: halving ratio {ratio}");
        parts.push(format!("{name} ratio {ratio:.3}"));
    }
    let f = g("gauss_si", 3);
    let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default().with_alpha(2.0)).unwrap();
    let exact = -2.0 * (-1.0f64).exp();
    for z in [[1.0, 0.0, 0.0], [0.0, 0.6, -0.8]] {
        let pt = general_euler_point(&f, &d, &z, &GradientSpec::default()).unwrap();
        ensure!((pt.rhs - exact).abs() <= 1e-5 && (pt.lhs - exact).abs() <= 1e-5, "gauss at {z:?}: {pt:?}");
    }
    parts.push("gauss ∇f·x = −2/e".into());
    Ok(parts.join(", "))
}

fn ac10() -> Check {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let p = paired_level_solver(r, 1e-15).map_err(|e| e.to_string())?;
    ensure!(p.residual <= 1e-10, "residual {:e}", p.residual);
    // independent oracle: plain bisection on s itself
    let h = |s: f64| s * s * (-s * s).exp() - r * r * (-r * r).exp();
    let (mut lo, mut hi) = (1.0f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ensure!((p.s - lo).abs() <= 1e-3, "s = {} vs oracle {lo}", p.s);
    let f = g("gauss_si", 2);
    let spec = GradientSpec::default();
    let a = levelset_gradient_constancy(&f, (-r * r).exp(), 32, &spec, &plan(1), 1e-6).unwrap();
    let b = levelset_gradient_constancy(&f, (-p.s * p.s).exp(), 32, &spec, &plan(1), 1e-6).unwrap();
    let spread = a.max.max(b.max) - a.min.min(b.min);
    ensure!(spread <= 1e-6, "joint spread {spread:e}");
    let gap = ((-r * r).exp() - (-p.s * p.s).exp()).abs();
    ensure!(gap > 1e-3, "level gap {gap}");
    Ok(format!("s = {:.10} (oracle {lo:.10}), joint ∇f·z spread {spread:.1e}, level gap {gap:.4}", p.s))
}

fn ac11() -> Check {
    let f = g("saddle_si", 3);
    let spec = GradientSpec::default();
    let rep = saddle_levels(&f, 3, 16, &spec, &plan(1), 1e-6).unwrap();
    for s in &rep.shells {
        ensure!(s.max_grad_norm <= 1e-6, "shell k={}: ‖∇f‖ = {:e}", s.k, s.max_grad_norm);
    }
    let grid = geometric_grid(0.02, 4.0, 400);
    let dirs = default_directions::<f64>(3, 32, 0);
    for d in &dirs {
        let v = classify_ray(&f, d, &grid).unwrap();
        ensure!(v.kind == Monotonicity::Increasing, "ray {d:?}: {:?}", v.kind);
    }
    let c = positive_gradient_region(&f, &plan(4000), &spec, 64, 8).map_err(|e| e.to_string())?;
    ensure!(c.epsilon > 0.0 && c.delta > 0.0, "ε = {}, δ = {}", c.epsilon, c.delta);
    for k in 1..=3 {
        let shell = (k as f64 * std::f64::consts::PI).sqrt();
        ensure!(
            c.level_radius_max + c.delta < shell || c.level_radius_min - c.delta > shell,
            "fattened level set meets shell {k}"
        );
    }
    Ok(format!(
        "max ‖∇f‖ on shells {:.1e}; {} rays increasing; ε = {:.4}, δ = {}",
        rep.shells.iter().map(|s| s.max_grad_norm).fold(0.0, f64::max),
        dirs.len(),
        c.epsilon,
        c.delta
    ))
}

fn strip_time(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_ms\"")).collect::<Vec<_>>().join("\n")
}

fn ac12() -> Check {
    let commands: &[&[&str]] = &[
        &["gallery", "list"],
        &["check", "si", "--gallery", "random_si", "--n", "3", "--N", "5000"],
        &["check", "decomposable", "--gallery", "tanh_exp"],
        &["decompose", "--gallery", "linear_x1", "--ref", "1,0", "--ref-neg", "-1,0", "--ref2", "2,0", "--ref2-neg", "-3,0", "--N", "500"],
        &["verify", "euler", "--gallery", "half_norm", "--min-coord", "0.1", "--N", "500"],
        &["verify", "general-euler", "--gallery", "gauss_si", "--alpha", "2", "--N", "300"],
        &["verify", "levelset-grad", "--gallery", "random_si", "--n", "3", "--points", "32"],
        &["verify", "saddle", "--gallery", "saddle_si", "--n", "3"],
        &["levelset", "radii", "--gallery", "ellipsoid", "--level", "2", "--format", "csv"],
        &["levelset", "bounds", "--gallery", "random_si", "--n", "3", "--N", "2000"],
        &["levelset", "compact", "--gallery", "gauss_si"],
        &["levelset", "negligible", "--gallery", "sphere", "--level", "1", "--N", "50000"],
        &["cert", "positive-region", "--gallery", "random_si", "--n", "3", "--param", "seed=2", "--param", "eps=0.2", "--N", "2000"],
        &["solve", "paired-level", "--r", "0.70710678"],
    ];
    for cmd in commands {
        let run = |threads: &str| {
            let mut argv = vec!["siph"];
            argv.extend_from_slice(cmd);
            argv.extend_from_slice(&["--seed", "7", "--threads", threads]);
            let o = siph_cli::run(argv);
            (o.code, strip_time(&o.output))
        };
        let (c1, a) = run("1");
        let (c2, b) = run("1");
        let (c3, c) = run("4");
        ensure!(c1 != 2, "{cmd:?}: usage error {a}");
        ensure!(a == b && c1 == c2, "{cmd:?}: rerun differs");
        // the config echo records the thread count itself
        let no_threads = |t: &str| t.lines().filter(|l| !l.trim_start().starts_with("\"threads\"")).collect::<Vec<_>>().join("\n");
        ensure!(no_threads(&a) == no_threads(&c) && c1 == c3, "{cmd:?}: thread count changes the report");
    }
    Ok(format!("{} commands byte-identical across reruns and 1 vs 4 threads", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1 scaling invariance certification", ac1),
        ("AC2 decomposition round trip", ac2),
        ("AC3 uniqueness up to linear maps", ac3),
        ("AC4 non-decomposability of tanh_exp", ac4),
        ("AC5 order equivalence of canonical p", ac5),
        ("AC6 compactness verdicts", ac6),
        ("AC7 negligibility of level sets", ac7),
        ("AC8 ball sandwich", ac8),
        ("AC9 Euler residuals", ac9),
        ("AC10 weak Euler strictness", ac10),
        ("AC11 saddle structure", ac11),
        ("AC12 determinism", ac12),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.1}s): {why}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
