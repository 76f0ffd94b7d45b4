//! Euler-type identities: `αp = ∇p·x` for PH functions, its SI form
//! `∇f·x = αφ'(p)p`, level-set constancy of `∇f(z)·z`, the paired-level
//! solver for `exp(−‖x‖²)`, saddle shells and positive-gradient
//! neighborhoods.

use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::field::{GradientSpec, ScalarField};
use crate::levelset::{radial_derivative, sample_level_set, sphere_extrema};
use crate::ray::{classify_ray, Monotonicity};
use crate::report::{to_f64, Verdict};
use crate::root::bisect;
use crate::sampling::{chunk_rng, par_chunks, sphere_point, SamplingPlan};
use crate::scalar::{add, lit, norm, scale, Real};

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub residuals: Vec<f64>,
    /// Point of the largest residual (offset from x★).
    pub worst_at: Option<Vec<f64>>,
    pub samples: usize,
    /// Samples excluded (near a coordinate hyperplane, `p` too close to 0,
    /// or a non-finite side of the identity).
    pub skipped: usize,
    pub gradient: GradientSpec,
}

/// Sample radii for Euler checks.
const R_LO: f64 = 0.5;
const R_HI: f64 = 2.0;

fn euler_samples<T: Real, F>(n: usize, plan: &SamplingPlan, residual: F) -> Vec<(Vec<T>, Option<f64>)>
where
    F: Fn(&[T]) -> Option<f64> + Sync,
{
    par_chunks(plan.samples, plan.seed, |_, range, rng| {
        range
            .map(|_| {
                let u: Vec<T> = sphere_point(rng, n);
                let r = rng.random_range(R_LO..=R_HI);
                let x = scale(&u, lit(r));
                let v = residual(&x);
                (x, v)
            })
            .collect::<Vec<_>>()
    })
    .concat()
}

fn summarize<T: Real>(
    rows: Vec<(Vec<T>, Option<f64>)>,
    alpha: f64,
    tol: f64,
    gradient: GradientSpec,
) -> EulerReport {
    let samples = rows.len();
    let mut residuals = Vec::with_capacity(samples);
    let mut worst: Option<(f64, Vec<T>)> = None;
    for (x, r) in rows {
        let Some(r) = r else { continue };
        if worst.as_ref().is_none_or(|w| r > w.0) {
            worst = Some((r, x));
        }
        residuals.push(r);
    }
    let skipped = samples - residuals.len();
    let max_residual = worst.as_ref().map_or(f64::NAN, |w| w.0);
    let mean_residual = if residuals.is_empty() {
        f64::NAN
    } else {
        residuals.iter().sum::<f64>() / residuals.len() as f64
    };
    EulerReport {
        verdict: if residuals.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::from_ok(max_residual <= tol)
        },
        alpha,
        max_residual,
        mean_residual,
        tolerance: tol,
        residuals,
        worst_at: worst.map(|w| to_f64(&w.1)),
        samples,
        skipped,
        gradient,
    }
}

/// `max |αp(x) − ∇p(x)·x|` over `x = r·u`, `r ∈ [0.5, 2]`, `u` on the
/// sphere (offsets from x★). With `min_coord = Some(c)`, samples with some
/// `|xᵢ| < c` are skipped (for fields that are only piecewise smooth).
pub fn euler_residual<T: Real>(
    p: &ScalarField<T>,
    alpha: f64,
    plan: &SamplingPlan,
    spec: &GradientSpec,
    min_coord: Option<f64>,
    tol: f64,
) -> Result<EulerReport> {
    plan.validate()?;
    let rows = euler_samples(p.dim(), plan, |x: &[T]| {
        if let Some(c) = min_coord {
            if x.iter().any(|v| v.abs().as_f64() < c) {
                return None;
            }
        }
        let lhs = alpha * p.centered_raw(x).as_f64();
        let rhs = radial_derivative(p, x, spec).ok()?.as_f64();
        let r = (lhs - rhs).abs();
        r.is_finite().then_some(r)
    });
    Ok(summarize(rows, alpha, tol, *spec))
}

/// Central difference of `φ` on the profile with step `1e-5·|t|`.
pub fn phi_derivative<T: Real>(d: &Decomposition<T>, t: T) -> Result<T> {
    let h = lit::<T>(1e-5) * t.abs().max(lit(1e-8));
    let hi = d.phi_centered(t + h)?;
    let lo = d.phi_centered(t - h)?;
    Ok((hi - lo) / (h + h))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerPoint {
    pub x: Vec<f64>,
    pub p: f64,
    /// `∇f(x★+z)·z`
    pub lhs: f64,
    /// `αφ'(p)p`
    pub rhs: f64,
    pub residual: f64,
}

/// Both sides of `∇f·z = αφ'(p(z))p(z)` at a single offset `z`.
pub fn general_euler_point<T: Real>(
    f: &ScalarField<T>,
    d: &Decomposition<T>,
    z: &[T],
    spec: &GradientSpec,
) -> Result<EulerPoint> {
    let p = d.p(z)?;
    let lhs = radial_derivative(f, z, spec)?.as_f64();
    let rhs = (d.alpha() * phi_derivative(d, p)? * p).as_f64();
    Ok(EulerPoint {
        x: to_f64(z),
        p: p.as_f64(),
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// The identity `∇f(x)·x = αφ'(p(x))p(x)` on samples with
/// `|p(x)| ≥ 0.01·M_p`, where `M_p` is the largest `|p|` on the unit sphere.
pub fn general_euler_residual<T: Real>(
    f: &ScalarField<T>,
    d: &Decomposition<T>,
    plan: &SamplingPlan,
    spec: &GradientSpec,
    tol: f64,
) -> Result<EulerReport> {
    plan.validate()?;
    let ext = sphere_extrema(&d.p_field(), 1024, 4, plan.seed)?;
    let cutoff = 0.01 * ext.m.abs().max(ext.big_m.abs());
    let rows = euler_samples(f.dim(), plan, |x: &[T]| {
        let pt = general_euler_point(f, d, x, spec).ok()?;
        (pt.p.abs() >= cutoff && pt.residual.is_finite()).then_some(pt.residual)
    });
    Ok(summarize(rows, d.alpha().as_f64(), tol, *spec))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadReport {
    pub verdict: Verdict,
    pub level: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub tolerance: f64,
    pub points: usize,
    /// Directions whose ray never met the level (or was not monotone).
    pub skipped: usize,
    pub gradient: GradientSpec,
}

/// Spread `max − min` of `∇f(z)·z` over points `z` of the level set
/// `{f = c}` found along seeded rays.
pub fn levelset_gradient_constancy<T: Real>(
    f: &ScalarField<T>,
    c: T,
    n_points: usize,
    spec: &GradientSpec,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<SpreadReport> {
    plan.validate()?;
    let (pts, skipped) = sample_level_set(f, c, n_points, plan.seed, &plan.grid)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for z in &pts {
        let v = radial_derivative(f, z, spec)?.as_f64();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let spread = hi - lo;
    Ok(SpreadReport {
        verdict: if pts.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::from_ok(spread <= tol)
        },
        level: c.as_f64(),
        min: lo,
        max: hi,
        spread: if pts.is_empty() { f64::NAN } else { spread },
        tolerance: tol,
        points: pts.len(),
        skipped,
        gradient: *spec,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedLevel {
    pub r: f64,
    pub s: f64,
    /// `|r²e^{−r²} − s²e^{−s²}|`
    pub residual: f64,
    pub upper_bracket: f64,
}

/// For `0 < r < 1`, the unique `s > 1` with `r²e^{−r²} = s²e^{−s²}`,
/// by bisection on `u = s²` over `(1, B]` with `B` doubled until bracketing.
pub fn paired_level_solver(r: f64, tol: f64) -> Result<PairedLevel> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter {
            name: "r".into(),
            reason: format!("must lie in (0, 1), got {r}"),
        });
    }
    let h = |u: f64| u * (-u).exp();
    let target = h(r * r);
    let mut b = 2.0;
    while h(b) > target {
        b *= 2.0;
        if b > 1e6 {
            return Err(Error::BracketExhausted { target, cap: b });
        }
    }
    // h decreases on (1, ∞), so h(u) − target changes sign on (1, B].
    let u = bisect(|u| h(u) - target, 1.0, b, tol.max(0.0), 400);
    let s = u.sqrt();
    Ok(PairedLevel { r, s, residual: (target - h(u)).abs(), upper_bracket: b })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleShell {
    pub k: usize,
    pub radius: f64,
    pub max_grad_norm: f64,
    pub points: usize,
    /// `f(x★+(ρ+0.1)u) > f(x★+(ρ−0.1)u)` at every sampled `u`.
    pub increasing_across: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleReport {
    pub verdict: Verdict,
    pub shells: Vec<SaddleShell>,
    /// Every sampled ray classified strictly increasing on the grid.
    pub rays_increasing: bool,
    pub tolerance: f64,
    pub gradient: GradientSpec,
}

/// Checks the stationary shells `‖x‖ = √(kπ)` of `saddle_si`: vanishing
/// gradient on each shell and strict increase along rays across them.
pub fn saddle_levels<T: Real>(
    f: &ScalarField<T>,
    k_max: usize,
    points: usize,
    spec: &GradientSpec,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<SaddleReport> {
    if f.meta().name != "saddle_si" {
        return Err(Error::Precondition(format!(
            "saddle levels are only known for `saddle_si`, got `{}`",
            f.meta().name
        )));
    }
    if k_max == 0 || points == 0 {
        return Err(Error::InvalidParameter {
            name: "k_max/points".into(),
            reason: "must be at least 1".into(),
        });
    }
    let n = f.dim();
    let mut rng = chunk_rng(plan.seed, 0x5add1e);
    let dirs: Vec<Vec<T>> = (0..points).map(|_| sphere_point(&mut rng, n)).collect();
    let at = |u: &[T], t: f64| add(f.reference(), &scale(u, lit(t)));
    let mut shells = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let radius = (k as f64 * std::f64::consts::PI).sqrt();
        let mut max_g = 0.0f64;
        let mut across = true;
        for u in &dirs {
            let g = f.gradient(&at(u, radius), spec)?;
            max_g = max_g.max(norm(&g).as_f64());
            across &= f.evaluate(&at(u, radius + 0.1))? > f.evaluate(&at(u, radius - 0.1))?;
        }
        shells.push(SaddleShell { k, radius, max_grad_norm: max_g, points, increasing_across: across });
    }
    let mut rays_increasing = true;
    for u in &dirs {
        rays_increasing &= classify_ray(f, u, &plan.grid)?.kind == Monotonicity::Increasing;
    }
    let ok = rays_increasing && shells.iter().all(|s| s.max_grad_norm <= tol && s.increasing_across);
    Ok(SaddleReport { verdict: Verdict::from_ok(ok), shells, rays_increasing, tolerance: tol, gradient: *spec })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaStop {
    /// A fattened sample dropped below `ε/2`.
    Violation,
    /// δ reached the cap.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodCertificate {
    /// `z₀ = t·s` as an offset from x★, `‖z₀‖ ≤ 1`.
    pub z0: Vec<f64>,
    pub t: f64,
    pub level: f64,
    /// Minimum of `∇f(z)·z` over the sampled level set (an estimate; the
    /// true minimum may be lower between samples).
    pub epsilon: f64,
    pub delta: f64,
    pub delta_stop: DeltaStop,
    /// Largest `‖z‖` on the sampled level set.
    pub level_radius_max: f64,
    pub level_radius_min: f64,
    pub level_samples: usize,
    pub level_skipped: usize,
    pub fattened_samples: usize,
    /// `(t, f_s'(t))` pairs visited by the scan.
    pub scan: Vec<(f64, f64)>,
}

pub const DELTA_START: f64 = 1e-4;
pub const DELTA_CAP: f64 = 0.5;

/// Finds `z₀` in the closed unit ball around x★ and `δ > 0` such that
/// `∇f(z)·z ≥ ε/2 > 0` on the sampled `δ`-neighborhood of the level set
/// through `z₀`. The scan visits `t = 1, 63/64, …` along the sphere argmin
/// `s` and stops at the first `t` with `f_s'(t) > 0`.
pub fn positive_gradient_region<T: Real>(
    f: &ScalarField<T>,
    plan: &SamplingPlan,
    spec: &GradientSpec,
    level_points: usize,
    fatten_per_point: usize,
) -> Result<NeighborhoodCertificate> {
    plan.validate()?;
    let n = f.dim();
    let s: Vec<T> = sphere_extrema(f, 4096.min(plan.samples.max(64)), 6, plan.seed)?
        .m_at
        .iter()
        .map(|&v| lit(v))
        .collect();
    let mut scan = Vec::new();
    let mut found = None;
    for k in 0..64 {
        let t = 1.0 - k as f64 / 64.0;
        let z = scale(&s, lit(t));
        let dv = radial_derivative(f, &z, spec)?.as_f64() / t;
        scan.push((t, dv));
        if dv > 0.0 && dv.is_finite() {
            found = Some((t, z));
            break;
        }
    }
    let Some((t, z0)) = found else {
        return Err(Error::NoCertificate(format!(
            "no t in (0, 1] with positive radial derivative; scan: {scan:?}"
        )));
    };
    let level = f.centered_raw(&z0) + f.base_value();
    let (mut pts, skipped) = sample_level_set(f, level, level_points, plan.seed, &plan.grid)?;
    pts.push(z0.clone());
    let mut eps = f64::INFINITY;
    for z in &pts {
        eps = eps.min(radial_derivative(f, z, spec)?.as_f64());
    }
    if !(eps > 0.0) {
        return Err(Error::NoCertificate(format!(
            "∇f(z)·z reaches {eps} on the sampled level set through z₀ = {:?}",
            to_f64(&z0)
        )));
    }
    let radii: Vec<f64> = pts.iter().map(|z| norm(z).as_f64()).collect();
    let fattened_ok = |delta: f64, round: u64| -> Result<(bool, usize)> {
        let results: Vec<Result<(bool, usize)>> = par_chunks(pts.len(), plan.seed ^ round, |_, range, rng| {
            let mut count = 0;
            for z in &pts[range] {
                let rz = norm(z).as_f64();
                let mut offsets: Vec<Vec<T>> = Vec::with_capacity(fatten_per_point + 2);
                // radial extremes first
                offsets.push(scale(z, lit(delta / rz)));
                offsets.push(scale(z, lit(-delta / rz)));
                for _ in 0..fatten_per_point {
                    let u: Vec<T> = sphere_point(rng, n);
                    let rad = delta * rng.random::<f64>().powf(1.0 / n as f64);
                    offsets.push(scale(&u, lit(rad)));
                }
                for w in offsets {
                    let y = add(z, &w);
                    count += 1;
                    if !(radial_derivative(f, &y, spec)?.as_f64() >= eps / 2.0) {
                        return Ok((false, count));
                    }
                }
            }
            Ok((true, count))
        });
        let mut total = 0;
        let mut all = true;
        for r in results {
            let (ok, c) = r?;
            total += c;
            all &= ok;
        }
        Ok((all, total))
    };
    let mut delta = 0.0;
    let mut trial = DELTA_START;
    let mut fattened = 0;
    let mut round = 0u64;
    let stop = loop {
        let (ok, c) = fattened_ok(trial, round)?;
        fattened += c;
        round += 1;
        if !ok {
            break DeltaStop::Violation;
        }
        delta = trial;
        if trial >= DELTA_CAP {
            break DeltaStop::Cap;
        }
        trial = (trial * 2.0).min(DELTA_CAP);
    };
    if delta == 0.0 {
        return Err(Error::NoCertificate(format!("violation already at δ = {DELTA_START}")));
    }
    Ok(NeighborhoodCertificate {
        z0: to_f64(&z0),
        t,
        level: level.as_f64(),
        epsilon: eps,
        delta,
        delta_stop: stop,
        level_radius_max: radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        level_radius_min: radii.iter().cloned().fold(f64::INFINITY, f64::min),
        level_samples: pts.len(),
        level_skipped: skipped,
        fattened_samples: fattened,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{build_decomposition, DecompositionConfig, Hints};
    use crate::gallery::{make_builtin, Params};

    fn g(name: &str, n: usize) -> ScalarField<f64> {
        make_builtin(name, n, &Params::new()).unwrap()
    }

    fn plan(samples: usize) -> SamplingPlan {
        SamplingPlan::default().with_samples(samples)
    }

    #[test]
    fn euler_on_simple_ph_fields() {
        let num = GradientSpec::numeric(1e-5);
        let r = euler_residual(&g("sphere", 3), 2.0, &plan(500), &num, None, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);
        let r = euler_residual(&g("linear_x1", 3), 1.0, &plan(500), &num, None, 1e-10).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_residual);
        // wrong degree
        let r = euler_residual(&g("sphere", 3), 1.0, &plan(100), &num, None, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn half_norm_at_one_one() {
        let p = g("half_norm", 2);
        let grad = p.gradient(&[1.0, 1.0], &GradientSpec::numeric(1e-5)).unwrap();
        assert!((grad[0] - 2.0).abs() < 1e-6 && (grad[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn gauss_general_euler_point() {
        let f = g("gauss_si", 2);
        let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default().with_alpha(2.0)).unwrap();
        let z = [0.6, 0.8];
        let pt = general_euler_point(&f, &d, &z, &GradientSpec::default()).unwrap();
        let exact = -2.0 * (-1.0f64).exp();
        assert!((pt.lhs - exact).abs() < 1e-12);
        assert!((pt.rhs - exact).abs() < 1e-5, "{}", pt.rhs);
    }

    #[test]
    fn paired_levels() {
        let p = paired_level_solver(std::f64::consts::FRAC_1_SQRT_2, 1e-14).unwrap();
        assert!(p.residual <= 1e-10);
        assert!((p.s - 1.3253).abs() < 1e-3, "{}", p.s);
        assert!(paired_level_solver(0.999, 1e-14).unwrap().s <= 1.05);
        assert!(paired_level_solver(0.3, 1e-14).unwrap().s > paired_level_solver(0.7, 1e-14).unwrap().s);
        assert!(paired_level_solver(p.s, 1e-14).is_err());
        assert!(paired_level_solver(0.0, 1e-14).is_err());
    }

    #[test]
    fn sphere_level_constancy() {
        let r = levelset_gradient_constancy(&g("sphere", 3), 4.0, 64, &GradientSpec::default(), &plan(10), 1e-6)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.min - 8.0).abs() < 1e-6);
    }

    #[test]
    fn saddle_shells() {
        let f = g("saddle_si", 3);
        let r = saddle_levels(&f, 3, 16, &GradientSpec::default(), &plan(10), 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!((r.shells[0].radius - 1.772_453_850_905_516).abs() < 1e-12);
        assert!(saddle_levels(&g("sphere", 3), 1, 4, &GradientSpec::default(), &plan(10), 1e-6).is_err());
    }

    #[test]
    fn certificate_for_sphere() {
        let c = positive_gradient_region(&g("sphere", 2), &plan(1000), &GradientSpec::default(), 64, 8).unwrap();
        assert!((c.epsilon - 2.0).abs() < 1e-9);
        assert!(c.delta > 0.0 && c.delta < 1.0 - std::f64::consts::FRAC_1_SQRT_2);
    }
}
