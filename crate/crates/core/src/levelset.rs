//! Level-set geometry: ray/level intersections, extrema of PH functions on
//! the unit sphere, ball sandwiches, compactness and negligibility probes.

use serde::Serialize;

use crate::decomposition::{CaseTag, Decomposition};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::ray::{classify_ray, Monotonicity};
use crate::report::{to_f64, Verdict};
use crate::root::{solve_on_half_line, BracketConfig, RootFailure};
use crate::sampling::{chunk_rng, par_chunks, sphere_point, uniform_box, SamplingPlan};
use crate::scalar::{dot, lit, norm, normalized, scale, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Radius {
    Finite(f64),
    /// The bracket expansion reached its cap without meeting the level
    /// (evidence of an unbounded level set along this ray, not a proof).
    Unbounded,
}

impl Radius {
    pub fn finite(self) -> Option<f64> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Unbounded => None,
        }
    }
}

/// `t*` with `f(x★ + t*·d) = c` on a strictly monotone ray.
pub fn ray_level_radius<T: Real>(f: &ScalarField<T>, d: &[T], c: T, grid: &[f64]) -> Result<Radius> {
    let v = classify_ray(f, d, grid)?;
    match v.kind {
        Monotonicity::NonMonotone => {
            let (t_lo, t_hi) = v.witness.unwrap_or((f64::NAN, f64::NAN));
            return Err(Error::NonMonotoneRay { t_lo, t_hi });
        }
        Monotonicity::Constant => return Ok(Radius::Unbounded),
        _ => {}
    }
    let target = c - f.base_value();
    if target == T::zero() {
        return Ok(Radius::Finite(0.0));
    }
    let ray = f.ray(d)?;
    match solve_on_half_line(|t| ray.eval_centered(t), target, &BracketConfig::default()) {
        Ok(t) => Ok(Radius::Finite(t.as_f64())),
        Err(RootFailure::NotFinite { t }) => Err(Error::OutOfDomain {
            value: t,
            reason: "non-finite value on the ray".into(),
        }),
        Err(_) => Ok(Radius::Unbounded),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelProbe {
    pub level: f64,
    pub directions: Vec<Vec<f64>>,
    pub radii: Vec<Radius>,
    /// Directions whose ray was not monotone, with the inversion pair.
    pub rejected: Vec<(usize, f64, f64)>,
}

/// Radii of the level `c` along each direction.
pub fn level_probe<T: Real>(f: &ScalarField<T>, c: T, directions: &[Vec<T>], grid: &[f64]) -> Result<LevelProbe> {
    let mut radii = Vec::with_capacity(directions.len());
    let mut rejected = Vec::new();
    for (k, d) in directions.iter().enumerate() {
        match ray_level_radius(f, d, c, grid) {
            Ok(r) => radii.push(r),
            Err(Error::NonMonotoneRay { t_lo, t_hi }) => {
                rejected.push((k, t_lo, t_hi));
                radii.push(Radius::Unbounded);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(LevelProbe {
        level: c.as_f64(),
        directions: directions.iter().map(|d| to_f64(d)).collect(),
        radii,
        rejected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereExtrema {
    pub m: f64,
    pub m_at: Vec<f64>,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "M_at")]
    pub big_m_at: Vec<f64>,
    pub samples: usize,
    pub refine_steps: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search of `h` on `[a, b]`; returns the best abscissa.
fn golden_min<F: Fn(f64) -> f64>(h: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = h(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Local refinement of `sign·p` on the sphere: golden-section searches
/// along great circles through the current point in each coordinate
/// tangent direction, with a shrinking arc.
fn refine_on_sphere<T: Real>(p: &ScalarField<T>, start: Vec<T>, sign: f64, steps: usize) -> (Vec<T>, f64) {
    let n = start.len();
    let obj = |u: &[T]| sign * p.centered_raw(u).as_f64();
    let mut s = start;
    let mut best = obj(&s);
    let mut arc = 0.2f64;
    for _ in 0..steps {
        for i in 0..n {
            let mut e = vec![T::zero(); n];
            e[i] = T::one();
            let si = s[i];
            let tangent: Vec<T> = e.iter().zip(&s).map(|(&ei, &sj)| ei - si * sj).collect();
            let Some(v) = normalized(&tangent) else { continue };
            let point = |th: f64| -> Vec<T> {
                let (c, sn) = (lit::<T>(th.cos()), lit::<T>(th.sin()));
                let q: Vec<T> = s.iter().zip(&v).map(|(&a, &b)| a * c + b * sn).collect();
                normalized(&q).unwrap_or_else(|| s.clone())
            };
            let th = golden_min(|th| obj(&point(th)), -arc, arc, 60);
            let cand = point(th);
            let val = obj(&cand);
            if val < best {
                best = val;
                s = cand;
            }
        }
        arc *= 0.5;
    }
    (s, sign * best)
}

/// `m_p = min_{‖u‖=1} p(u)` and `M_p = max_{‖u‖=1} p(u)` by seeded sphere
/// sampling followed by great-circle refinement of the best few points.
pub fn sphere_extrema<T: Real>(p: &ScalarField<T>, samples: usize, refine_steps: usize, seed: u64) -> Result<SphereExtrema> {
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            reason: "must be at least 1".into(),
        });
    }
    let n = p.dim();
    let mut pts: Vec<(Vec<T>, f64)> = par_chunks(samples, seed, |_, range, rng| {
        range
            .map(|_| {
                let u: Vec<T> = sphere_point(rng, n);
                let v = p.centered_raw(&u).as_f64();
                (u, v)
            })
            .collect::<Vec<_>>()
    })
    .concat();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![T::zero(); n];
            e[i] = lit(s);
            let v = p.centered_raw(&e).as_f64();
            pts.push((e, v));
        }
    }
    pts.retain(|(_, v)| v.is_finite());
    if pts.is_empty() {
        return Err(Error::OutOfDomain {
            value: f64::NAN,
            reason: "p is not finite anywhere on the sampled sphere".into(),
        });
    }
    const TOP_K: usize = 8;
    let mut extreme = |sign: f64| {
        pts.sort_by(|a, b| (sign * a.1).total_cmp(&(sign * b.1)));
        let mut best: Option<(Vec<T>, f64)> = None;
        for (u, _) in pts.iter().take(TOP_K) {
            let (s, v) = refine_on_sphere(p, u.clone(), sign, refine_steps);
            if best.as_ref().is_none_or(|b| sign * v < sign * b.1) {
                best = Some((s, v));
            }
        }
        best.expect("non-empty sample")
    };
    let (m_at, m) = extreme(1.0);
    let (big_m_at, big_m) = extreme(-1.0);
    Ok(SphereExtrema {
        m,
        m_at: to_f64(&m_at),
        big_m,
        big_m_at: to_f64(&big_m_at),
        samples,
        refine_steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundWitness {
    pub x: Vec<f64>,
    pub value: f64,
    pub bound: f64,
    pub violated: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub verdict: Verdict,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub samples: usize,
    /// Some sample lies strictly inside the sandwich.
    pub strict_somewhere: bool,
    pub witnesses: Vec<BoundWitness>,
    pub note: String,
}

/// Relative slack allowed on sandwich inequalities.
pub const SANDWICH_REL: f64 = 1e-8;

/// `‖x‖ m_p^{1/α} ≤ p(x)^{1/α} ≤ ‖x‖ M_p^{1/α}` on seeded samples.
pub fn check_ph_sandwich<T: Real>(
    p: &ScalarField<T>,
    alpha: f64,
    m_p: f64,
    big_m_p: f64,
    plan: &SamplingPlan,
) -> Result<BoundsReport> {
    plan.validate()?;
    if !(m_p > 0.0 && m_p <= big_m_p) {
        return Err(Error::Precondition(format!("need 0 < m_p ≤ M_p, got m_p = {m_p}, M_p = {big_m_p}")));
    }
    let n = p.dim();
    let inv = 1.0 / alpha;
    let (lo_c, hi_c) = (m_p.powf(inv), big_m_p.powf(inv));
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let (mut w, mut strict) = (Vec::new(), false);
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let r = norm(&x).as_f64();
            if r == 0.0 {
                continue;
            }
            let px = p.centered_raw(&x).as_f64();
            if !(px > 0.0) {
                w.push(BoundWitness { x: to_f64(&x), value: px, bound: 0.0, violated: "p(x) > 0".into() });
                continue;
            }
            let q = px.powf(inv);
            let (lo, hi) = (r * lo_c, r * hi_c);
            let slack = SANDWICH_REL * (1.0 + q);
            if q < lo - slack {
                w.push(BoundWitness { x: to_f64(&x), value: q, bound: lo, violated: "lower".into() });
            } else if q > hi + slack {
                w.push(BoundWitness { x: to_f64(&x), value: q, bound: hi, violated: "upper".into() });
            } else if q > lo + slack && q < hi - slack {
                strict = true;
            }
        }
        (w, strict)
    });
    let (mut witnesses, mut strict) = (Vec::new(), false);
    for (w, s) in chunks {
        witnesses.extend(w);
        strict |= s;
    }
    Ok(BoundsReport {
        verdict: Verdict::from_ok(witnesses.is_empty()),
        m: m_p,
        big_m: big_m_p,
        samples: plan.samples,
        strict_somewhere: strict,
        witnesses,
        note: format!("α = {alpha}"),
    })
}

/// Sandwich `φ(m_p‖x‖) ≤ f(x) ≤ φ(M_p‖x‖)` for the degree-1 decomposition,
/// with the ball inclusions `{‖x‖ < ρ} ⊆ {f ≤ φ(ρM_p)}` and
/// `{f ≤ f(y)} ⊆ {‖x‖ ≤ p(y)/m_p}`. Requires a one-sided decomposition
/// with increasing rays; otherwise the report is `not_run`.
pub fn check_si_sandwich<T: Real>(
    f: &ScalarField<T>,
    d: &Decomposition<T>,
    plan: &SamplingPlan,
    extrema_samples: usize,
) -> Result<BoundsReport> {
    plan.validate()?;
    if d.case() != CaseTag::OneSided || !d.is_increasing() {
        return Ok(BoundsReport {
            verdict: Verdict::NotRun,
            m: f64::NAN,
            big_m: f64::NAN,
            samples: 0,
            strict_somewhere: false,
            witnesses: Vec::new(),
            note: "precondition failed: x★ is not the unique argmin (rays are not all increasing)".into(),
        });
    }
    let d1 = d.with_alpha(1.0)?;
    let p1 = d1.p_field();
    let ext = sphere_extrema(&p1, extrema_samples, 8, plan.seed)?;
    let (m_p, big_m_p) = (ext.m, ext.big_m);
    let phi = |t: f64| d1.phi_centered(lit(t)).map(|v| v.as_f64());
    let m = phi(m_p)?;
    let big_m = phi(big_m_p)?;
    let n = f.dim();
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let (mut w, mut strict) = (Vec::new(), false);
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let y: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let r = norm(&x).as_f64();
            let fx = f.centered_raw(&x).as_f64();
            let slack = |v: f64| SANDWICH_REL * (1.0 + v.abs());
            match (phi(m_p * r), phi(big_m_p * r)) {
                (Ok(lo), Ok(hi)) => {
                    if fx < lo - slack(lo) {
                        w.push(BoundWitness { x: to_f64(&x), value: fx, bound: lo, violated: "lower".into() });
                    } else if fx > hi + slack(hi) {
                        w.push(BoundWitness { x: to_f64(&x), value: fx, bound: hi, violated: "upper".into() });
                    } else if fx > lo + slack(lo) && fx < hi - slack(hi) {
                        strict = true;
                    }
                }
                _ => w.push(BoundWitness { x: to_f64(&x), value: fx, bound: f64::NAN, violated: "φ undefined".into() }),
            }
            // ball of radius ρ inside the sublevel set at φ(ρ M_p), with ρ = ‖y‖
            let rho = norm(&y).as_f64();
            if r < rho {
                if let Ok(b) = phi(rho * big_m_p) {
                    if fx > b + slack(b) {
                        w.push(BoundWitness { x: to_f64(&x), value: fx, bound: b, violated: "inner ball".into() });
                    }
                }
            }
            // sublevel set of y inside the ball of radius p(y)/m_p
            let fy = f.centered_raw(&y).as_f64();
            if fx <= fy {
                let py = p1.centered_raw(&y).as_f64();
                let radius = py / m_p;
                if r > radius * (1.0 + SANDWICH_REL) + SANDWICH_REL {
                    w.push(BoundWitness { x: to_f64(&x), value: r, bound: radius, violated: "outer ball".into() });
                }
            }
        }
        (w, strict)
    });
    let (mut witnesses, mut strict) = (Vec::new(), false);
    for (w, s) in chunks {
        witnesses.extend(w);
        strict |= s;
    }
    Ok(BoundsReport {
        verdict: Verdict::from_ok(witnesses.is_empty()),
        m,
        big_m,
        samples: plan.samples,
        strict_somewhere: strict,
        witnesses,
        note: format!("degree-1 decomposition; m_p = {m_p}, M_p = {big_m_p}; values centered at f(x★)"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Bounded,
    UnboundedEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactWitness {
    pub direction: Vec<f64>,
    pub reason: Monotonicity,
    /// True when the ray increases but never reaches the level before the
    /// bracket cap.
    pub bracket_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub verdict: Compactness,
    pub level: f64,
    /// Largest radius over the directions (only meaningful when bounded).
    pub max_radius: Option<f64>,
    pub directions: usize,
    pub witnesses: Vec<CompactWitness>,
    pub bracket_cap: f64,
}

/// All rays strictly increasing and meeting the level ⇒ bounded; any
/// constant, decreasing or non-monotone ray, or a ray that never reaches
/// the level, is evidence of an unbounded sublevel set.
pub fn compactness_probe<T: Real>(
    f: &ScalarField<T>,
    directions: &[Vec<T>],
    c: T,
    grid: &[f64],
) -> Result<CompactnessReport> {
    let mut witnesses = Vec::new();
    let mut max_r: Option<f64> = None;
    for d in directions {
        let kind = classify_ray(f, d, grid)?.kind;
        if kind != Monotonicity::Increasing {
            witnesses.push(CompactWitness { direction: to_f64(d), reason: kind, bracket_exhausted: false });
            continue;
        }
        match ray_level_radius(f, d, c, grid)? {
            Radius::Finite(r) => {
                let r = r * norm(d).as_f64();
                max_r = Some(max_r.map_or(r, |m| m.max(r)));
            }
            Radius::Unbounded => witnesses.push(CompactWitness {
                direction: to_f64(d),
                reason: kind,
                bracket_exhausted: true,
            }),
        }
    }
    let verdict = if witnesses.is_empty() {
        Compactness::Bounded
    } else {
        Compactness::UnboundedEvidence
    };
    Ok(CompactnessReport {
        verdict,
        level: c.as_f64(),
        max_radius: if witnesses.is_empty() { max_r } else { None },
        directions: directions.len(),
        witnesses,
        bracket_cap: BracketConfig::default().cap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellFraction {
    pub eps: f64,
    pub hits: u64,
    pub fraction: f64,
    /// Binomial standard error `√(q(1−q)/N)`.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegligibilityReport {
    pub verdict: Verdict,
    pub level: f64,
    pub samples: usize,
    pub box_radius: f64,
    pub seed: u64,
    pub shells: Vec<ShellFraction>,
    pub note: String,
}

/// Monte Carlo fraction of the box `x★ + [−R, R]ⁿ` where `|f − c| ≤ ε`, for
/// each ε. Passes when the fractions decrease with ε (strictly, unless
/// already zero) and the smallest is at most `10·ε_min`.
pub fn negligibility_probe<T: Real>(
    f: &ScalarField<T>,
    c: T,
    eps_list: &[f64],
    samples: usize,
    box_radius: f64,
    seed: u64,
) -> Result<NegligibilityReport> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "eps".into(),
            reason: "need a non-empty, strictly decreasing list of positive values".into(),
        });
    }
    SamplingPlan::default().with_samples(samples).with_box_radius(box_radius).validate()?;
    let n = f.dim();
    let k = eps_list.len();
    let counts = par_chunks(samples, seed, |_, range, rng| {
        let mut h = vec![0u64; k];
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, box_radius);
            let dev = (f.centered_raw(&x) + f.base_value() - c).abs().as_f64();
            for (j, e) in eps_list.iter().enumerate() {
                if dev <= *e {
                    h[j] += 1;
                }
            }
        }
        h
    })
    .into_iter()
    .fold(vec![0u64; k], |mut acc, h| {
        acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
        acc
    });
    let nn = samples as f64;
    let shells: Vec<ShellFraction> = eps_list
        .iter()
        .zip(&counts)
        .map(|(&eps, &hits)| {
            let q = hits as f64 / nn;
            ShellFraction { eps, hits, fraction: q, sigma: (q * (1.0 - q) / nn).sqrt() }
        })
        .collect();
    let decreasing = shells
        .windows(2)
        .all(|w| w[1].fraction < w[0].fraction || (w[1].fraction == 0.0 && w[0].fraction == 0.0));
    let last = shells.last().expect("non-empty");
    let ok = decreasing && last.fraction <= 10.0 * last.eps;
    Ok(NegligibilityReport {
        verdict: Verdict::from_ok(ok),
        level: c.as_f64(),
        samples,
        box_radius,
        seed,
        shells,
        note: "assumes every ray restriction is continuous".into(),
    })
}

/// Seeded unit directions for level probes: the axes plus `extra` sphere
/// points.
pub fn probe_directions<T: Real>(n: usize, extra: usize, seed: u64) -> Vec<Vec<T>> {
    crate::sampling::default_directions(n, extra, seed)
}

/// Angle(s) of a direction for CSV output: `atan2(d₂, d₁)` in 2-D, the
/// polar angle from `e₁` otherwise.
pub fn direction_angle(d: &[f64]) -> f64 {
    if d.len() == 2 {
        d[1].atan2(d[0])
    } else {
        let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        (d[0] / r).clamp(-1.0, 1.0).acos()
    }
}

/// Points on the level `c` along seeded directions (offsets from `x★`).
pub fn sample_level_set<T: Real>(
    f: &ScalarField<T>,
    c: T,
    count: usize,
    seed: u64,
    grid: &[f64],
) -> Result<(Vec<Vec<T>>, usize)> {
    let n = f.dim();
    let mut rng = chunk_rng(seed, 0x1e5e1);
    let mut pts = Vec::with_capacity(count);
    let mut skipped = 0;
    for _ in 0..count {
        let d: Vec<T> = sphere_point(&mut rng, n);
        match ray_level_radius(f, &d, c, grid) {
            Ok(Radius::Finite(t)) => pts.push(scale(&d, lit(t))),
            Ok(Radius::Unbounded) | Err(Error::NonMonotoneRay { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((pts, skipped))
}

/// `∇f(z)·z` at offset `z` from `x★`.
pub(crate) fn radial_derivative<T: Real>(f: &ScalarField<T>, z: &[T], spec: &crate::GradientSpec) -> Result<T> {
    let x: Vec<T> = f.reference().iter().zip(z).map(|(&r, &v)| r + v).collect();
    Ok(dot(&f.gradient(&x, spec)?, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{build_decomposition, DecompositionConfig, Hints};
    use crate::gallery::{make_builtin, Params};
    use crate::sampling::geometric_grid;

    fn g(name: &str, n: usize) -> ScalarField<f64> {
        make_builtin(name, n, &Params::new()).unwrap()
    }

    fn grid() -> Vec<f64> {
        geometric_grid(0.02, 20.0, 64)
    }

    #[test]
    fn radius_examples() {
        let s = g("sphere", 3);
        let u = [0.0, 0.6, 0.8];
        assert!((ray_level_radius(&s, &u, 4.0, &grid()).unwrap().finite().unwrap() - 2.0).abs() < 1e-9);
        let l = g("linear_x1", 2);
        assert_eq!(ray_level_radius(&l, &[0.0, 1.0], 1.0, &grid()).unwrap(), Radius::Unbounded);
        let sin = ScalarField::new(1, crate::FieldMeta::named("sin"), |x: &[f64]| x[0].sin());
        assert!(matches!(
            ray_level_radius(&sin, &[1.0], 0.5, &grid()),
            Err(Error::NonMonotoneRay { .. })
        ));
    }

    #[test]
    fn extrema_of_quadratic_form() {
        let e = sphere_extrema(&g("ellipsoid", 2), 2000, 8, 0).unwrap();
        assert!((e.m - 1.0).abs() < 1e-9 && (e.big_m - 4.0).abs() < 1e-9);
        let e = sphere_extrema(&g("norm", 4), 500, 4, 0).unwrap();
        assert!((e.m - 1.0).abs() < 1e-12 && (e.big_m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ph_sandwich_on_ellipsoid_is_strict() {
        let r = check_ph_sandwich(&g("ellipsoid", 2), 2.0, 1.0, 4.0, &SamplingPlan::default().with_samples(2000)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.strict_somewhere);
        let bad = check_ph_sandwich(&g("ellipsoid", 2), 2.0, 1.5, 4.0, &SamplingPlan::default().with_samples(2000))
            .unwrap();
        assert_eq!(bad.verdict, Verdict::Fail);
    }

    #[test]
    fn si_sandwich_precondition() {
        let f = g("gauss_si", 2);
        let d = build_decomposition(&f, &Hints::default(), &DecompositionConfig::default()).unwrap();
        let r = check_si_sandwich(&f, &d, &SamplingPlan::default().with_samples(100), 200).unwrap();
        assert_eq!(r.verdict, Verdict::NotRun);
    }

    #[test]
    fn compactness_examples() {
        let dirs = probe_directions::<f64>(2, 8, 0);
        let r = compactness_probe(&g("sphere", 2), &dirs, 1.0, &grid()).unwrap();
        assert_eq!(r.verdict, Compactness::Bounded);
        assert!((r.max_radius.unwrap() - 1.0).abs() < 1e-9);
        let r = compactness_probe(&g("linear_x1", 2), &dirs, 1.0, &grid()).unwrap();
        assert_eq!(r.verdict, Compactness::UnboundedEvidence);
        assert!(r.witnesses.iter().any(|w| w.direction == vec![0.0, 1.0] && w.reason == Monotonicity::Constant));
    }

    #[test]
    fn negligibility_on_zero_field_fails() {
        let z = ScalarField::new(2, crate::FieldMeta::named("zero"), |_x: &[f64]| 0.0);
        let r = negligibility_probe(&z, 0.0, &[0.1, 0.05], 5000, 2.0, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.shells.iter().all(|s| s.fraction == 1.0));
        assert!(negligibility_probe(&z, 0.0, &[0.05, 0.1], 10, 2.0, 0).is_err());
    }

    #[test]
    fn angles() {
        assert!((direction_angle(&[0.0, 1.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((direction_angle(&[0.0, 0.0, 1.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
