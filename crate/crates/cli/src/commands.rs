use serde_json::json;
use siph_core::decomposition::{
    build_decomposition, order_equivalence, uniqueness_check, verify_decomposition, Decomposition,
    DecompositionConfig, Hints,
};
use siph_core::euler::{
    euler_residual, general_euler_point, general_euler_residual, levelset_gradient_constancy,
    paired_level_solver, positive_gradient_region, saddle_levels,
};
use siph_core::expr::{bind, parse};
use siph_core::gallery::{compose, make_builtin, registry, MonotoneTransform, Params};
use siph_core::levelset::{
    check_ph_sandwich, check_si_sandwich, compactness_probe, direction_angle, level_probe,
    negligibility_probe, sphere_extrema, Compactness, Radius,
};
use siph_core::ray::{check_decomposability, check_scaling_invariance, Decomposability};
use siph_core::sampling::{default_directions, geometric_grid, validate_grid};
use siph_core::scalar::lit;
use siph_core::{Error, GradientSpec, Real, SamplingPlan, ScalarField, Verdict};

use crate::args::*;
use crate::error::CliError;
use crate::report::Report;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub(crate) fn plan(g: &Global) -> Result<SamplingPlan, CliError> {
    if g.grid_points < 3 || !(g.grid_max > 0.02) {
        return Err(usage("need --grid-points ≥ 3 and --grid-max > 0.02"));
    }
    let grid = geometric_grid(0.02, g.grid_max, g.grid_points);
    validate_grid(&grid)?;
    let p = SamplingPlan {
        seed: g.seed,
        samples: g.samples,
        box_radius: g.box_radius,
        rho_min: g.rho_min,
        rho_max: g.rho_max,
        grid,
    };
    p.validate()?;
    Ok(p)
}

fn grad_spec(g: &Global) -> Result<GradientSpec, CliError> {
    if !(g.h > 0.0 && g.h.is_finite()) {
        return Err(usage("--h must be positive"));
    }
    Ok(if g.numeric_grad {
        GradientSpec::numeric(g.h)
    } else {
        GradientSpec::default().with_h(g.h)
    })
}

fn tol(g: &Global, default: f64) -> Result<f64, CliError> {
    match g.tol {
        Some(t) if !(t > 0.0) => Err(usage("--tol must be positive")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn point<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| lit(x)).collect()
}

pub(crate) fn build_field<T: Real>(g: &Global) -> Result<ScalarField<T>, CliError> {
    let mut f = match (&g.gallery, &g.expr) {
        (Some(name), None) => {
            let mut params = Params::new();
            for a in &g.params {
                params.insert_assignment(a)?;
            }
            make_builtin::<T>(name, g.n, &params)?
        }
        (None, Some(src)) => {
            if !g.params.is_empty() {
                return Err(usage("--param applies to gallery functions only"));
            }
            let e = parse(src).map_err(Error::from)?;
            bind::<T>(&e, g.n).map_err(Error::from)?
        }
        (Some(_), Some(_)) => return Err(usage("give either --gallery or --expr, not both")),
        (None, None) => return Err(usage("select a function with --gallery or --expr")),
    };
    if let Some(a) = g.ph_degree {
        if !(a > 0.0) {
            return Err(usage("--ph-degree must be positive"));
        }
        let mut meta = f.meta().clone();
        meta.ph_degree = Some(a);
        f = f.with_meta(meta);
    }
    if let Some(spec) = &g.phi {
        f = compose(&MonotoneTransform::parse(spec)?, &f)?;
    }
    if let Some(c) = &g.center {
        f = f.translated(point(c))?;
    }
    Ok(f)
}

fn default_level<T: Real>(f: &ScalarField<T>, level: Option<f64>) -> T {
    match level {
        Some(c) => lit(c),
        None => {
            let mut x = f.reference().to_vec();
            x[0] = x[0] + T::one();
            f.evaluate(&x).unwrap_or_else(|_| T::nan())
        }
    }
}

fn decomposition<T: Real>(
    f: &ScalarField<T>,
    g: &Global,
    pos: Option<&Vec<f64>>,
    neg: Option<&Vec<f64>>,
) -> Result<Decomposition<T>, CliError> {
    let hints = match (pos, neg) {
        (Some(p), Some(n)) => Hints::two_sided(point(p), point(n)),
        (Some(p), None) => Hints::one_sided(point(p)),
        (None, Some(_)) => return Err(usage("--ref-neg needs --ref")),
        (None, None) => Hints::default(),
    };
    let alpha = g.alpha.unwrap_or(1.0);
    let cfg = DecompositionConfig::default().with_alpha(alpha).with_seed(g.seed);
    Ok(build_decomposition(f, &hints, &cfg)?)
}

/// Fills `report` for the parsed command. Usage and configuration problems
/// come back as errors; probe outcomes land in the report.
pub(crate) fn execute<T: Real>(cmd: &Command, g: &Global, r: &mut Report) -> Result<(), CliError> {
    let max_w = g.max_witnesses;
    match cmd {
        Command::Gallery(GalleryCmd::List) => {
            r.metric("entries", registry());
            r.verdict = Verdict::Pass;
        }
        Command::Check(CheckCmd::Si) => {
            let f = build_field::<T>(g)?;
            let rep = check_scaling_invariance(&f, &plan(g)?)?;
            r.metric("trials", rep.trials)
                .metric("anchor_trials", rep.anchor_trials)
                .metric("tie_mismatches", rep.tie_mismatches)
                .metric("tie_band", rep.tie_band)
                .witnesses(&rep.witnesses, max_w);
            r.verdict = rep.verdict;
        }
        Command::Check(CheckCmd::Decomposable) => {
            let f = build_field::<T>(g)?;
            let p = plan(g)?;
            let dirs = default_directions::<T>(f.dim(), g.dirs, g.seed);
            let rep = check_decomposability(&f, &dirs, &p.grid)?;
            r.metric("decomposability", rep.verdict)
                .metric("scale", rep.scale)
                .metric("increasing", rep.increasing)
                .metric("decreasing", rep.decreasing)
                .metric("constant", rep.constant)
                .metric("rays", &rep.rays)
                .metric("note", &rep.note)
                .witnesses(&rep.witnesses, max_w);
            r.verdict = match rep.verdict {
                Decomposability::Decomposable => Verdict::Pass,
                Decomposability::NotDecomposable => Verdict::Fail,
                Decomposability::Inconclusive => Verdict::Inconclusive,
            };
        }
        Command::Decompose(a) => {
            let f = build_field::<T>(g)?;
            let p = plan(g)?;
            let tolerance = tol(g, 1e-7)?;
            let d = match decomposition(&f, g, a.reference.as_ref(), a.reference_neg.as_ref()) {
                Ok(d) => d,
                Err(CliError::Core(e @ (Error::BracketExhausted { .. } | Error::NonMonotoneRay { .. }))) => {
                    r.witnesses(&[json!({"kind": "build_failure", "error": e.to_string()})], max_w);
                    r.verdict = Verdict::Fail;
                    return Ok(());
                }
                Err(e) => return Err(e),
            };
            let v = verify_decomposition(&f, &d, &p, tolerance)?;
            let order = order_equivalence(&f, &d.p_field(), &p)?;
            r.metric("decomposition", d.summary())
                .metric("max_reconstruction", v.max_reconstruction)
                .metric("max_ph_residual", v.max_ph_residual)
                .metric("tolerance", tolerance)
                .metric("worst_point", &v.worst_point)
                .metric("order_equivalence", order.verdict)
                .metric("order_tie_mismatches", order.tie_mismatches);
            let mut witnesses: Vec<serde_json::Value> = v
                .failures
                .iter()
                .map(|x| json!({"kind": "evaluation_failure", "x": x}))
                .collect();
            if v.verdict == Verdict::Fail && v.failures.is_empty() {
                witnesses.push(json!({
                    "kind": "residual",
                    "x": v.worst_point,
                    "max_reconstruction": v.max_reconstruction,
                    "max_ph_residual": v.max_ph_residual,
                }));
            }
            witnesses.extend(order.witnesses.iter().map(|w| json!({"kind": "order", "witness": w})));
            let mut verdict = if v.verdict.is_pass() && order.verdict.is_pass() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            if let Some(r2) = &a.reference2 {
                let d2 = decomposition(&f, g, Some(r2), a.reference2_neg.as_ref())?;
                let u = uniqueness_check(&f, &d, &d2, &p, tol(g, 1e-6)?)?;
                if !u.verdict.is_pass() {
                    witnesses.push(json!({"kind": "uniqueness", "report": &u}));
                    verdict = Verdict::Fail;
                }
                r.metric("uniqueness", &u);
            }
            r.witnesses(&witnesses, max_w);
            r.verdict = verdict;
        }
        Command::Verify(VerifyCmd::Euler(a)) => {
            let p = build_field::<T>(g)?;
            let alpha = g.alpha.or(p.meta().ph_degree).ok_or_else(|| {
                usage("euler needs a PH degree: use a PH gallery entry, --ph-degree or --alpha")
            })?;
            let rep = euler_residual(&p, alpha, &plan(g)?, &grad_spec(g)?, a.min_coord, tol(g, 1e-6)?)?;
            euler_metrics(r, &rep, max_w);
        }
        Command::Verify(VerifyCmd::GeneralEuler) => {
            let f = build_field::<T>(g)?;
            let d = decomposition(&f, g, None, None)?;
            let spec = grad_spec(g)?;
            let rep = general_euler_residual(&f, &d, &plan(g)?, &spec, tol(g, 1e-5)?)?;
            let mut e1 = vec![T::zero(); f.dim()];
            e1[0] = T::one();
            if let Ok(pt) = general_euler_point(&f, &d, &e1, &spec) {
                r.metric("at_e1", pt);
            }
            r.metric("decomposition", d.summary());
            euler_metrics(r, &rep, max_w);
        }
        Command::Verify(VerifyCmd::LevelsetGrad(a)) => {
            let f = build_field::<T>(g)?;
            let c = default_level(&f, a.level);
            let rep = levelset_gradient_constancy(&f, c, a.points, &grad_spec(g)?, &plan(g)?, tol(g, 1e-6)?)?;
            r.metric("level", rep.level)
                .metric("min", rep.min)
                .metric("max", rep.max)
                .metric("spread", rep.spread)
                .metric("tolerance", rep.tolerance)
                .metric("points", rep.points)
                .metric("skipped", rep.skipped)
                .metric("gradient", rep.gradient);
            let w = if rep.verdict == Verdict::Fail {
                vec![json!({"kind": "spread", "min": rep.min, "max": rep.max})]
            } else {
                vec![]
            };
            r.witnesses(&w, max_w);
            r.verdict = rep.verdict;
        }
        Command::Verify(VerifyCmd::Saddle(a)) => {
            let f = build_field::<T>(g)?;
            let rep = saddle_levels(&f, a.k_max, a.points, &grad_spec(g)?, &plan(g)?, tol(g, 1e-6)?)?;
            r.metric("shells", &rep.shells)
                .metric("rays_increasing", rep.rays_increasing)
                .metric("tolerance", rep.tolerance);
            let bad: Vec<_> = rep
                .shells
                .iter()
                .filter(|s| s.max_grad_norm > rep.tolerance || !s.increasing_across)
                .collect();
            let mut w: Vec<serde_json::Value> = bad.iter().map(|s| json!({"kind": "shell", "shell": s})).collect();
            if !rep.rays_increasing {
                w.push(json!({"kind": "ray", "detail": "a sampled ray is not strictly increasing"}));
            }
            r.witnesses(&w, max_w);
            r.verdict = rep.verdict;
        }
        Command::Levelset(LevelsetCmd::Radii(a)) => {
            let f = build_field::<T>(g)?;
            let c = default_level(&f, a.level);
            let dirs = default_directions::<T>(f.dim(), g.dirs, g.seed);
            let probe = level_probe(&f, c, &dirs, &plan(g)?.grid)?;
            let rows: Vec<_> = probe
                .directions
                .iter()
                .zip(&probe.radii)
                .map(|(d, rad)| {
                    json!({
                        "radius": rad.finite(),
                        "unbounded": *rad == Radius::Unbounded,
                        "angle": direction_angle(d),
                        "direction": d,
                    })
                })
                .collect();
            let w: Vec<_> = probe
                .rejected
                .iter()
                .map(|(k, lo, hi)| json!({"kind": "non_monotone_ray", "direction_index": k, "t_pair": [lo, hi]}))
                .collect();
            r.metric("level", probe.level).metric("radii", rows).witnesses(&w, max_w);
            r.verdict = Verdict::from_ok(w.is_empty());
        }
        Command::Levelset(LevelsetCmd::Bounds(a)) => {
            let f = build_field::<T>(g)?;
            let p = plan(g)?;
            let mode = a
                .mode
                .unwrap_or(if f.meta().ph_degree.is_some() { BoundsMode::Ph } else { BoundsMode::Si });
            let rep = match mode {
                BoundsMode::Ph => {
                    let alpha = g
                        .alpha
                        .or(f.meta().ph_degree)
                        .ok_or_else(|| usage("ph bounds need a PH degree (--ph-degree or --alpha)"))?;
                    let e = sphere_extrema(&f, a.extrema_samples, a.refine_steps, g.seed)?;
                    r.metric("extrema", &e);
                    check_ph_sandwich(&f, alpha, e.m, e.big_m, &p)?
                }
                BoundsMode::Si => {
                    let d = decomposition(&f, g, None, None)?;
                    check_si_sandwich(&f, &d, &p, a.extrema_samples)?
                }
            };
            r.metric("mode", mode)
                .metric("m", rep.m)
                .metric("M", rep.big_m)
                .metric("samples", rep.samples)
                .metric("strict_somewhere", rep.strict_somewhere)
                .metric("note", &rep.note)
                .witnesses(&rep.witnesses, max_w);
            if rep.verdict == Verdict::NotRun {
                r.witnesses(&[json!({"kind": "precondition", "detail": rep.note})], max_w);
            }
            r.verdict = rep.verdict;
        }
        Command::Levelset(LevelsetCmd::Compact(a)) => {
            let f = build_field::<T>(g)?;
            let c = default_level(&f, a.level);
            let dirs = default_directions::<T>(f.dim(), g.dirs, g.seed);
            let rep = compactness_probe(&f, &dirs, c, &plan(g)?.grid)?;
            r.metric("compactness", rep.verdict)
                .metric("level", rep.level)
                .metric("max_radius", rep.max_radius)
                .metric("directions", rep.directions)
                .metric("bracket_cap", rep.bracket_cap)
                .witnesses(&rep.witnesses, max_w);
            r.verdict = Verdict::from_ok(rep.verdict == Compactness::Bounded);
        }
        Command::Levelset(LevelsetCmd::Negligible(a)) => {
            let f = build_field::<T>(g)?;
            let c = default_level(&f, a.level);
            let rep = negligibility_probe(&f, c, &a.eps, g.samples, g.box_radius, g.seed)?;
            r.metric("level", rep.level)
                .metric("samples", rep.samples)
                .metric("box_radius", rep.box_radius)
                .metric("shells", &rep.shells)
                .metric("note", &rep.note);
            let w = if rep.verdict == Verdict::Fail {
                vec![json!({"kind": "shell_fractions", "shells": rep.shells})]
            } else {
                vec![]
            };
            r.witnesses(&w, max_w);
            r.verdict = rep.verdict;
        }
        Command::Cert(CertCmd::PositiveRegion(a)) => {
            let f = build_field::<T>(g)?;
            match positive_gradient_region(&f, &plan(g)?, &grad_spec(g)?, a.points, a.fatten) {
                Ok(c) => {
                    r.metric("certificate", &c).witnesses::<()>(&[], max_w);
                    r.verdict = Verdict::Pass;
                }
                Err(Error::NoCertificate(why)) => {
                    r.witnesses(&[json!({"kind": "no_certificate", "detail": why})], max_w);
                    r.verdict = Verdict::Fail;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Solve(SolveCmd::PairedLevel(a)) => {
            let t = tol(g, 1e-14)?;
            let s = paired_level_solver(a.r, t)?;
            r.metric("r", s.r)
                .metric("s", s.s)
                .metric("residual", s.residual)
                .metric("upper_bracket", s.upper_bracket)
                .metric("tolerance", t);
            r.verdict = Verdict::from_ok(s.residual <= t.max(1e-10));
            if !r.verdict.is_pass() {
                r.witnesses(&[json!({"kind": "residual", "residual": s.residual})], max_w);
            }
        }
    }
    Ok(())
}

fn euler_metrics(r: &mut Report, rep: &siph_core::euler::EulerReport, max_w: usize) {
    r.metric("alpha", rep.alpha)
        .metric("max_residual", rep.max_residual)
        .metric("mean_residual", rep.mean_residual)
        .metric("tolerance", rep.tolerance)
        .metric("samples", rep.samples)
        .metric("skipped", rep.skipped)
        .metric("gradient", rep.gradient)
        .metric("residuals", &rep.residuals);
    let w = if rep.verdict == Verdict::Fail {
        vec![json!({"kind": "residual", "x": rep.worst_at, "residual": rep.max_residual})]
    } else {
        vec![]
    };
    r.witnesses(&w, max_w);
    r.verdict = rep.verdict;
}
