//! Scaling-invariance certification, ray monotonicity and the
//! shared-image decomposability test.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::report::{to_f64, Verdict};
use crate::root::{solve_on_half_line, BracketConfig, RootFailure};
use crate::sampling::{log_uniform, par_chunks, uniform_box, validate_grid, SamplingPlan};
use crate::scalar::{banded_cmp, lit, scale, Real};

/// Relative tie band for comparisons of function values.
pub const TIE_REL: f64 = 1e-12;
/// Constancy tolerance relative to `1 + |f(x★)|`.
pub const CONST_REL: f64 = 1e-10;
/// Minimum step for a strict increase or decrease on the ray grid.
pub const STEP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SiViolation {
    /// The order of `f(x), f(y)` is strictly reversed after scaling.
    OrderReversed,
    /// One of the four values is NaN or infinite.
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub rho: f64,
    pub fx: f64,
    pub fy: f64,
    pub f_rho_x: f64,
    pub f_rho_y: f64,
    pub kind: SiViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiReport {
    pub verdict: Verdict,
    pub seed: u64,
    /// Random triples drawn from the plan.
    pub trials: usize,
    /// Deterministic axis triples checked before the random ones.
    pub anchor_trials: usize,
    /// Pairs that tie on one side only; floating-point saturation produces
    /// these, so they are counted but not treated as violations.
    pub tie_mismatches: usize,
    pub tie_band: f64,
    pub witnesses: Vec<SiWitness>,
}

/// Compares `f(x) ? f(y)` with `f(ρx) ? f(ρy)` (values centered at `x★`).
fn si_trial<T: Real>(f: &ScalarField<T>, x: &[T], y: &[T], rho: T) -> (Option<SiWitness>, bool) {
    let rx = scale(x, rho);
    let ry = scale(y, rho);
    let v = [f.centered_raw(x), f.centered_raw(y), f.centered_raw(&rx), f.centered_raw(&ry)];
    let band = lit::<T>(TIE_REL);
    let before = banded_cmp(v[0], v[1], band);
    let after = banded_cmp(v[2], v[3], band);
    let witness = |kind| SiWitness {
        x: to_f64(x),
        y: to_f64(y),
        rho: rho.as_f64(),
        fx: v[0].as_f64(),
        fy: v[1].as_f64(),
        f_rho_x: v[2].as_f64(),
        f_rho_y: v[3].as_f64(),
        kind,
    };
    match (before, after) {
        (None, _) | (_, None) => (Some(witness(SiViolation::NonFinite)), false),
        (Some(a), Some(b)) if a == b => (None, false),
        (Some(Ordering::Equal), _) | (_, Some(Ordering::Equal)) => (None, true),
        _ => (Some(witness(SiViolation::OrderReversed)), false),
    }
}

/// Tests `f(x★+x) ≤ f(x★+y) ⟺ f(x★+ρx) ≤ f(x★+ρy)` on seeded triples.
///
/// Before the random triples, axis triples `(a·eᵢ, −a·eᵢ, ρ)` with
/// `a ∈ {½, 1, 2}`, `ρ ∈ {¼, ½, 2, 4}` are checked, since sign-structured
/// counterexamples live on the axes.
pub fn check_scaling_invariance<T: Real>(f: &ScalarField<T>, plan: &SamplingPlan) -> Result<SiReport> {
    plan.validate()?;
    let n = f.dim();
    let mut witnesses = Vec::new();
    let mut ties = 0;
    let mut anchors = 0;
    for i in 0..n {
        for a in [0.5, 1.0, 2.0] {
            for rho in [0.25, 0.5, 2.0, 4.0] {
                let mut x = vec![T::zero(); n];
                x[i] = lit(a);
                let y: Vec<T> = x.iter().map(|&v| -v).collect();
                let (w, tie) = si_trial(f, &x, &y, lit(rho));
                witnesses.extend(w);
                ties += tie as usize;
                anchors += 1;
            }
        }
    }
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let mut w = Vec::new();
        let mut t = 0;
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let y: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let rho = lit::<T>(log_uniform(rng, plan.rho_min, plan.rho_max));
            let (wi, tie) = si_trial(f, &x, &y, rho);
            w.extend(wi);
            t += tie as usize;
        }
        (w, t)
    });
    for (w, t) in chunks {
        witnesses.extend(w);
        ties += t;
    }
    Ok(SiReport {
        verdict: Verdict::from_ok(witnesses.is_empty()),
        seed: plan.seed,
        trials: plan.samples,
        anchor_trials: anchors,
        tie_mismatches: ties,
        tie_band: TIE_REL,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Increasing,
    Decreasing,
    NonMonotone,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVerdict {
    pub kind: Monotonicity,
    /// `max |f_x(tᵢ) − f_x(0)|` over the grid.
    pub max_deviation: f64,
    /// Steps below the strict-sign tolerance inside a monotone ray
    /// (floating-point saturation, flat stretches).
    pub flat_steps: usize,
    /// Inversion pair `(t_a, t_b)` when non-monotone.
    pub witness: Option<(f64, f64)>,
    /// First abscissa with a non-finite value, if any (reported as
    /// non-monotone).
    pub non_finite_at: Option<f64>,
}

impl MonotoneVerdict {
    pub fn is_strict(&self) -> bool {
        matches!(self.kind, Monotonicity::Increasing | Monotonicity::Decreasing)
    }
}

/// Classifies `t ↦ f(x★ + t·x)` on `{0} ∪ grid`.
pub fn classify_ray<T: Real>(f: &ScalarField<T>, direction: &[T], grid: &[f64]) -> Result<MonotoneVerdict> {
    validate_grid(grid)?;
    let ray = f.ray(direction)?;
    let ts: Vec<f64> = std::iter::once(0.0).chain(grid.iter().copied()).collect();
    let vals: Vec<T> = ts.iter().map(|&t| ray.eval_centered(lit(t))).collect();
    if let Some(k) = vals.iter().position(|v| !v.is_finite()) {
        let prev = if k > 0 { ts[k - 1] } else { ts[k] };
        return Ok(MonotoneVerdict {
            kind: Monotonicity::NonMonotone,
            max_deviation: f64::INFINITY,
            flat_steps: 0,
            witness: Some((prev, ts[k])),
            non_finite_at: Some(ts[k]),
        });
    }
    let max_dev = vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let const_tol = lit::<T>(CONST_REL) * (T::one() + f.base_value().abs());
    if max_dev <= const_tol {
        return Ok(MonotoneVerdict {
            kind: Monotonicity::Constant,
            max_deviation: max_dev.as_f64(),
            flat_steps: 0,
            witness: None,
            non_finite_at: None,
        });
    }
    let step = lit::<T>(STEP_TOL);
    let mut first_dir: Option<bool> = None;
    let mut flats = 0;
    let mut witness = None;
    for k in 0..vals.len() - 1 {
        let d = vals[k + 1] - vals[k];
        let dir = if d > step {
            Some(true)
        } else if d < -step {
            Some(false)
        } else {
            None
        };
        match (dir, first_dir) {
            (None, _) => flats += 1,
            (Some(s), None) => first_dir = Some(s),
            (Some(s), Some(f0)) if s != f0 && witness.is_none() => witness = Some((ts[k], ts[k + 1])),
            _ => {}
        }
    }
    let kind = match (witness, first_dir) {
        (Some(_), _) => Monotonicity::NonMonotone,
        (None, Some(true)) => Monotonicity::Increasing,
        (None, Some(false)) => Monotonicity::Decreasing,
        // every step is below tolerance but the ray drifts overall
        (None, None) => {
            if vals[vals.len() - 1] > vals[0] {
                Monotonicity::Increasing
            } else {
                Monotonicity::Decreasing
            }
        }
    };
    Ok(MonotoneVerdict {
        kind,
        max_deviation: max_dev.as_f64(),
        flat_steps: flats,
        witness,
        non_finite_at: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposability {
    /// Consistent with a decomposition at the probed scale (evidence only).
    Decomposable,
    NotDecomposable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaySummary {
    pub direction: Vec<f64>,
    pub kind: Monotonicity,
    /// Centered value range over the grid points `t > 0`.
    pub range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompositionWitness {
    NonMonotone { direction: Vec<f64>, t_pair: (f64, f64) },
    /// `value` (taken on ray `a` at `t = 1`) is never reached on ray `b`.
    DisjointImage {
        a: Vec<f64>,
        range_a: (f64, f64),
        b: Vec<f64>,
        range_b: (f64, f64),
        value: f64,
    },
    /// Rays sharing the value at `t = 1` (after rescaling by `t_star`)
    /// disagree elsewhere, contradicting level-set homothety.
    RayMismatch {
        a: Vec<f64>,
        b: Vec<f64>,
        t_star: f64,
        t: f64,
        f_a: f64,
        f_b: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposabilityReport {
    pub verdict: Decomposability,
    /// Largest grid abscissa; a positive verdict holds at this scale only.
    pub scale: f64,
    pub increasing: usize,
    pub decreasing: usize,
    pub constant: usize,
    pub rays: Vec<RaySummary>,
    pub witnesses: Vec<DecompositionWitness>,
    pub note: String,
}

/// Relative tolerance for the homothety comparison between rays.
pub const HOMOTHETY_REL: f64 = 1e-6;

/// Finite-scale version of the shared-image criterion: every ray must be
/// constant or strictly monotone, and rays of the same monotonicity must
/// reach each other's values and agree up to rescaling of `t`.
pub fn check_decomposability<T: Real>(
    f: &ScalarField<T>,
    directions: &[Vec<T>],
    grid: &[f64],
) -> Result<DecomposabilityReport> {
    if directions.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "directions".into(),
            reason: "need at least two directions".into(),
        });
    }
    validate_grid(grid)?;
    let mut rays = Vec::with_capacity(directions.len());
    let mut witnesses = Vec::new();
    for d in directions {
        let v = classify_ray(f, d, grid)?;
        let ray = f.ray(d)?;
        let vals: Vec<f64> = grid.iter().map(|&t| ray.eval_centered(lit(t)).as_f64()).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if v.kind == Monotonicity::NonMonotone {
            witnesses.push(DecompositionWitness::NonMonotone {
                direction: to_f64(d),
                t_pair: v.witness.unwrap_or((0.0, 0.0)),
            });
        }
        rays.push(RaySummary {
            direction: to_f64(d),
            kind: v.kind,
            range: (lo, hi),
        });
    }
    let count = |k| rays.iter().filter(|r| r.kind == k).count();
    let (inc, dec, cst) = (
        count(Monotonicity::Increasing),
        count(Monotonicity::Decreasing),
        count(Monotonicity::Constant),
    );
    let mut inconclusive = false;
    if witnesses.is_empty() {
        for kind in [Monotonicity::Increasing, Monotonicity::Decreasing] {
            let members: Vec<usize> = (0..rays.len()).filter(|&i| rays[i].kind == kind).collect();
            let Some((&anchor, rest)) = members.split_first() else { continue };
            for &other in rest {
                for (a, b) in [(anchor, other), (other, anchor)] {
                    match compare_rays(f, &directions[a], &directions[b], grid) {
                        Ok(None) => {}
                        Ok(Some(mut w)) => {
                            if let DecompositionWitness::DisjointImage { range_a, range_b, .. } = &mut w {
                                *range_a = rays[a].range;
                                *range_b = rays[b].range;
                            }
                            witnesses.push(w);
                        }
                        Err(_) => inconclusive = true,
                    }
                }
            }
        }
    }
    let verdict = if !witnesses.is_empty() {
        Decomposability::NotDecomposable
    } else if inconclusive {
        Decomposability::Inconclusive
    } else {
        Decomposability::Decomposable
    };
    let scale = grid[grid.len() - 1];
    let note = match verdict {
        Decomposability::Decomposable => format!(
            "images consistent at scale T = {scale}; shared images cannot be confirmed by finite sampling"
        ),
        Decomposability::NotDecomposable => "refuted by the listed witnesses".into(),
        Decomposability::Inconclusive => "non-finite values prevented ray matching".into(),
    };
    Ok(DecomposabilityReport {
        verdict,
        scale,
        increasing: inc,
        decreasing: dec,
        constant: cst,
        rays,
        witnesses,
        note,
    })
}

/// Matches `f_a(1)` on ray `b`, then checks `f_a(t) = f_b(t·t*)` on the grid.
/// `Err` means a non-finite value stopped the root finder.
fn compare_rays<T: Real>(
    f: &ScalarField<T>,
    a: &[T],
    b: &[T],
    grid: &[f64],
) -> std::result::Result<Option<DecompositionWitness>, ()> {
    let ra = f.ray(a).map_err(|_| ())?;
    let rb = f.ray(b).map_err(|_| ())?;
    let target = ra.eval_centered(T::one());
    let t_star = match solve_on_half_line(|t| rb.eval_centered(t), target, &BracketConfig::default()) {
        Ok(t) => t,
        Err(RootFailure::NotFinite { .. }) => return Err(()),
        Err(_) => {
            return Ok(Some(DecompositionWitness::DisjointImage {
                a: to_f64(a),
                range_a: (0.0, 0.0),
                b: to_f64(b),
                range_b: (0.0, 0.0),
                value: target.as_f64(),
            }))
        }
    };
    for &t in grid {
        let t = lit::<T>(t);
        let fa = ra.eval_centered(t);
        let fb = rb.eval_centered(t * t_star);
        if !fa.is_finite() || !fb.is_finite() {
            return Err(());
        }
        if (fa - fb).abs() > lit::<T>(HOMOTHETY_REL) * (T::one() + fa.abs()) {
            return Ok(Some(DecompositionWitness::RayMismatch {
                a: to_f64(a),
                b: to_f64(b),
                t_star: t_star.as_f64(),
                t: t.as_f64(),
                f_a: fa.as_f64(),
                f_b: fb.as_f64(),
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhWitness {
    pub x: Vec<f64>,
    pub rho: f64,
    pub p_x: f64,
    pub p_rho_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub samples: usize,
    /// `max |p(ρx) − ρ^α p(x)| / (1 + ρ^α |p(x)|)`.
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub witnesses: Vec<PhWitness>,
}

/// Checks `|p(ρx) − ρ^α p(x)| ≤ tol·(1 + ρ^α|p(x)|)` on seeded `(x, ρ)`.
pub fn check_positive_homogeneity<T: Real>(
    p: &ScalarField<T>,
    alpha: f64,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<PhReport> {
    plan.validate()?;
    let n = p.dim();
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let mut worst = 0f64;
        let mut w = Vec::new();
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let rho: f64 = log_uniform(rng, plan.rho_min, plan.rho_max);
            let px = p.centered_raw(&x);
            let prx = p.centered_raw(&scale(&x, lit(rho)));
            let ra = lit::<T>(rho).powf(lit(alpha));
            let rel = ((prx - ra * px).abs() / (T::one() + ra * px.abs())).as_f64();
            if !(rel <= tol) {
                w.push(PhWitness {
                    x: to_f64(&x),
                    rho,
                    p_x: px.as_f64(),
                    p_rho_x: prx.as_f64(),
                });
            }
            worst = if rel.is_nan() { f64::NAN } else { worst.max(rel) };
        }
        (worst, w)
    });
    let mut worst = 0f64;
    let mut witnesses = Vec::new();
    for (m, w) in chunks {
        worst = if m.is_nan() || worst.is_nan() { f64::NAN } else { worst.max(m) };
        witnesses.extend(w);
    }
    Ok(PhReport {
        verdict: Verdict::from_ok(witnesses.is_empty()),
        alpha,
        samples: plan.samples,
        max_rel_residual: worst,
        tolerance: tol,
        witnesses,
    })
}
