//! Canonical decomposition `f = φ ∘ p` with `p` positively homogeneous of
//! degree α and `φ` strictly increasing.
//!
//! For `x ≠ x★` on the positive side, `λ_x > 0` solves
//! `f(x★ + λ_x x) = f(x★ + x₁)` and `p(x) = λ_x^{−α}`; on the negative side
//! the reference is `x₋₁` and `p(x) = −λ_x^{−α}`. Then
//! `φ(t) = f_{x₁}(t^{1/α})` for `t ≥ 0` and `φ(t) = f_{x₋₁}((−t)^{1/α})` for
//! `t ≤ 0`. A one-sided decomposition has a single reference: increasing
//! rays put it on the positive side, decreasing rays on the negative side,
//! which keeps `φ` increasing in every case.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Regularity, ScalarField};
use crate::ray::{classify_ray, Monotonicity, TIE_REL};
use crate::report::{to_f64, Verdict};
use crate::root::{solve_on_half_line, BracketConfig, RootFailure};
use crate::sampling::{chunk_rng, geometric_grid, log_uniform, par_chunks, sphere_point, uniform_box, SamplingPlan};
use crate::scalar::{banded_cmp, lit, scale, Real};

/// Relative threshold below which `f(x) − f(x★)` counts as zero.
pub const ZERO_REL: f64 = 1e-12;
const CACHE_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionConfig {
    pub alpha: f64,
    pub bracket: BracketConfig,
    pub zero_rel: f64,
    /// Seed of the reference-point search.
    pub seed: u64,
    /// The search scans `search_per_dim · n` sphere points plus the axes.
    pub search_per_dim: usize,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            bracket: BracketConfig::default(),
            zero_rel: ZERO_REL,
            seed: 0,
            search_per_dim: 64,
        }
    }
}

impl DecompositionConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Reference points supplied by the caller instead of the sphere search.
/// Offsets are relative to `x★`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hints<T> {
    /// One-sided reference `x₀`.
    pub reference: Option<Vec<T>>,
    /// Two-sided references `x₁` (with `f(x₁) > f(x★)`) and `x₋₁`.
    pub positive: Option<Vec<T>>,
    pub negative: Option<Vec<T>>,
}

impl<T> Hints<T> {
    pub fn one_sided(x0: Vec<T>) -> Self {
        Self { reference: Some(x0), positive: None, negative: None }
    }

    pub fn two_sided(x1: Vec<T>, x_neg: Vec<T>) -> Self {
        Self { reference: None, positive: Some(x1), negative: Some(x_neg) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Zero,
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionSummary {
    pub case: CaseTag,
    pub alpha: f64,
    pub f_star: f64,
    /// Positive-side reference offset and its centered value.
    pub positive_reference: Option<(Vec<f64>, f64)>,
    pub negative_reference: Option<(Vec<f64>, f64)>,
    pub candidates_scanned: usize,
    /// Search rays that were neither constant nor strictly monotone.
    pub rays_skipped: usize,
}

struct Inner<T: Real> {
    field: ScalarField<T>,
    case: CaseTag,
    alpha: T,
    pos: Option<(Vec<T>, T)>,
    neg: Option<(Vec<T>, T)>,
    cfg: DecompositionConfig,
    scanned: usize,
    skipped: usize,
    cache: RwLock<HashMap<Vec<u64>, T>>,
}

/// A built decomposition. Cloning is cheap; clones share the λ cache.
#[derive(Clone)]
pub struct Decomposition<T: Real> {
    inner: Arc<Inner<T>>,
}

impl<T: Real> std::fmt::Debug for Decomposition<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Decomposition({:?})", self.summary())
    }
}

fn root_error<T: Real>(e: RootFailure, target: T, cfg: &BracketConfig) -> Error {
    match e {
        RootFailure::NotFinite { t } => Error::OutOfDomain {
            value: t,
            reason: "non-finite function value on the ray".into(),
        },
        RootFailure::Exhausted { .. } | RootFailure::Flat => Error::BracketExhausted {
            target: target.as_f64(),
            cap: cfg.cap,
        },
    }
}

/// Builds the canonical decomposition. Without hints the case and the
/// references come from a seeded sphere search: rays are classified and
/// the reference on each side maximizes `|f − f(x★)|` at unit distance.
pub fn build_decomposition<T: Real>(
    field: &ScalarField<T>,
    hints: &Hints<T>,
    cfg: &DecompositionConfig,
) -> Result<Decomposition<T>> {
    if !(cfg.alpha > 0.0 && cfg.alpha.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha".into(),
            reason: "must be positive and finite".into(),
        });
    }
    let n = field.dim();
    let zero_tol = lit::<T>(cfg.zero_rel) * (T::one() + field.base_value().abs());
    let g = |x: &[T]| field.centered_raw(x);
    let check_len = |x: &Vec<T>| {
        if x.len() != n {
            Err(Error::DimensionMismatch { expected: n, got: x.len() })
        } else {
            Ok(())
        }
    };
    let (mut pos, mut neg) = (None, None);
    let (mut scanned, mut skipped) = (0, 0);
    let hinted = hints.reference.is_some() || hints.positive.is_some() || hints.negative.is_some();
    if hinted {
        if let Some(x0) = &hints.reference {
            check_len(x0)?;
            let v = g(x0);
            if !v.is_finite() || v.abs() <= zero_tol {
                return Err(Error::Precondition("f(x₀) must differ from f(x★)".into()));
            }
            if v > T::zero() {
                pos = Some((x0.clone(), v));
            } else {
                neg = Some((x0.clone(), v));
            }
        }
        if let Some(x1) = &hints.positive {
            check_len(x1)?;
            let v = g(x1);
            if !(v > zero_tol) {
                return Err(Error::Precondition("f(x₁) must exceed f(x★)".into()));
            }
            pos = Some((x1.clone(), v));
        }
        if let Some(xm) = &hints.negative {
            check_len(xm)?;
            let v = g(xm);
            if !(v < -zero_tol) {
                return Err(Error::Precondition("f(x₋₁) must be below f(x★)".into()));
            }
            neg = Some((xm.clone(), v));
        }
    } else {
        let mut cands: Vec<Vec<T>> = Vec::new();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut e = vec![T::zero(); n];
                e[i] = lit(s);
                cands.push(e);
            }
        }
        let mut rng = chunk_rng(cfg.seed, 0xdec0);
        cands.extend((0..cfg.search_per_dim * n).map(|_| sphere_point(&mut rng, n)));
        let grid = geometric_grid(0.02, 20.0, 32);
        let mut best_pos: Option<(Vec<T>, T)> = None;
        let mut best_neg: Option<(Vec<T>, T)> = None;
        for u in cands {
            scanned += 1;
            let kind = classify_ray(field, &u, &grid)?.kind;
            let v = g(&u);
            let slot = match kind {
                Monotonicity::Increasing => &mut best_pos,
                Monotonicity::Decreasing => &mut best_neg,
                Monotonicity::Constant => continue,
                Monotonicity::NonMonotone => {
                    skipped += 1;
                    continue;
                }
            };
            if v.is_finite() && slot.as_ref().is_none_or(|(_, b)| v.abs() > b.abs()) {
                *slot = Some((u, v));
            }
        }
        // refine along the best ray until the level is well separated from f(x★)
        let floor = lit::<T>(1e-3) * (T::one() + field.base_value().abs());
        for slot in [&mut best_pos, &mut best_neg] {
            if let Some((u, v)) = slot.as_mut() {
                let mut t = T::one();
                let mut cur = *v;
                while cur.abs() < floor && t < lit(2f64.powi(20)) {
                    t = t + t;
                    let next = g(&scale(u, t));
                    if !next.is_finite() {
                        break;
                    }
                    cur = next;
                }
                if t > T::one() && cur.is_finite() {
                    *u = scale(u, t);
                    *v = cur;
                }
            }
        }
        pos = best_pos.filter(|(_, v)| v.abs() > zero_tol);
        neg = best_neg.filter(|(_, v)| v.abs() > zero_tol);
    }
    let case = match (&pos, &neg) {
        (None, None) => CaseTag::Zero,
        (Some(_), Some(_)) => CaseTag::TwoSided,
        _ => CaseTag::OneSided,
    };
    Ok(Decomposition {
        inner: Arc::new(Inner {
            field: field.clone(),
            case,
            alpha: lit(cfg.alpha),
            pos,
            neg,
            cfg: cfg.clone(),
            scanned,
            skipped,
            cache: RwLock::new(HashMap::new()),
        }),
    })
}

impl<T: Real> Decomposition<T> {
    pub fn case(&self) -> CaseTag {
        self.inner.case
    }

    pub fn alpha(&self) -> T {
        self.inner.alpha
    }

    pub fn field(&self) -> &ScalarField<T> {
        &self.inner.field
    }

    /// Same references, different degree.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha".into(),
                reason: "must be positive and finite".into(),
            });
        }
        let i = &self.inner;
        Ok(Self {
            inner: Arc::new(Inner {
                field: i.field.clone(),
                case: i.case,
                alpha: lit(alpha),
                pos: i.pos.clone(),
                neg: i.neg.clone(),
                cfg: DecompositionConfig { alpha, ..i.cfg.clone() },
                scanned: i.scanned,
                skipped: i.skipped,
                cache: RwLock::new(HashMap::new()),
            }),
        })
    }

    /// Orientation of the single reference in the one-sided case.
    pub fn is_increasing(&self) -> bool {
        self.inner.neg.is_none()
    }

    pub fn positive_reference(&self) -> Option<&[T]> {
        self.inner.pos.as_ref().map(|(x, _)| x.as_slice())
    }

    pub fn negative_reference(&self) -> Option<&[T]> {
        self.inner.neg.as_ref().map(|(x, _)| x.as_slice())
    }

    pub fn summary(&self) -> DecompositionSummary {
        let i = &self.inner;
        let r = |s: &Option<(Vec<T>, T)>| s.as_ref().map(|(x, v)| (to_f64(x), v.as_f64()));
        DecompositionSummary {
            case: i.case,
            alpha: i.alpha.as_f64(),
            f_star: i.field.base_value().as_f64(),
            positive_reference: r(&i.pos),
            negative_reference: r(&i.neg),
            candidates_scanned: i.scanned,
            rays_skipped: i.skipped,
        }
    }

    fn zero_tol(&self) -> T {
        lit::<T>(self.inner.cfg.zero_rel) * (T::one() + self.inner.field.base_value().abs())
    }

    /// `λ_x`, or `None` when `x` lies on the level of `x★`. Offsets are
    /// relative to `x★`.
    pub fn lambda(&self, x: &[T]) -> Result<Option<T>> {
        let i = &self.inner;
        if x.len() != i.field.dim() {
            return Err(Error::DimensionMismatch { expected: i.field.dim(), got: x.len() });
        }
        let v = i.field.centered_raw(x);
        if !v.is_finite() {
            return Err(Error::OutOfDomain {
                value: v.as_f64(),
                reason: "non-finite function value".into(),
            });
        }
        if v == T::zero() {
            return Ok(None);
        }
        // Inside the zero band the value may still be a genuine (very flat)
        // nonzero level; the band only decides what happens if the solve fails.
        let in_band = v.abs() <= self.zero_tol();
        let key: Vec<u64> = x.iter().map(|c| c.as_f64().to_bits()).collect();
        if let Some(&l) = i.cache.read().ok().and_then(|c| c.get(&key).copied()).as_ref() {
            return Ok(Some(l));
        }
        let Some((_, target)) = (if v > T::zero() { &i.pos } else { &i.neg }).as_ref() else {
            if in_band {
                return Ok(None);
            }
            return Err(Error::OutOfDomain {
                value: v.as_f64(),
                reason: "no reference on this side of f(x★)".into(),
            });
        };
        let l = match solve_on_half_line(|t| i.field.centered_raw(&scale(x, t)), *target, &i.cfg.bracket) {
            Ok(l) => l,
            Err(_) if in_band => return Ok(None),
            Err(e) => return Err(root_error(e, *target, &i.cfg.bracket)),
        };
        if let Ok(mut c) = i.cache.write() {
            if c.len() < CACHE_CAP {
                c.insert(key, l);
            }
        }
        Ok(Some(l))
    }

    /// `p(x)` at offset `x` from `x★`.
    pub fn p(&self, x: &[T]) -> Result<T> {
        let v = self.inner.field.centered_raw(x);
        Ok(match self.lambda(x)? {
            None => T::zero(),
            Some(l) => {
                let m = l.recip().powf(self.inner.alpha);
                if v > T::zero() {
                    m
                } else {
                    -m
                }
            }
        })
    }

    /// `φ(t) − f(x★)`.
    pub fn phi_centered(&self, t: T) -> Result<T> {
        let i = &self.inner;
        if t == T::zero() {
            return Ok(T::zero());
        }
        let side = if t > T::zero() { &i.pos } else { &i.neg };
        let (x, _) = side.as_ref().ok_or_else(|| Error::OutOfDomain {
            value: t.as_f64(),
            reason: if t > T::zero() {
                "φ is only defined on ℝ₋ for this decomposition".into()
            } else {
                "φ is only defined on ℝ₊ for this decomposition".into()
            },
        })?;
        let s = t.abs().powf(i.alpha.recip());
        Ok(i.field.centered_raw(&scale(x, s)))
    }

    /// `φ(t)`, in the units of `f` (so `φ(0) = f(x★)`).
    pub fn phi(&self, t: T) -> Result<T> {
        Ok(self.phi_centered(t)? + self.inner.field.base_value())
    }

    /// `φ⁻¹(y)` by monotone root finding on the reference ray.
    pub fn phi_inverse(&self, y: T) -> Result<T> {
        let i = &self.inner;
        let c = y - i.field.base_value();
        if c.abs() <= self.zero_tol() {
            return Ok(T::zero());
        }
        let side = if c > T::zero() { &i.pos } else { &i.neg };
        let (x, _) = side.as_ref().ok_or_else(|| Error::OutOfDomain {
            value: y.as_f64(),
            reason: "outside the range of φ".into(),
        })?;
        let mu = solve_on_half_line(|s| i.field.centered_raw(&scale(x, s)), c, &i.cfg.bracket)
            .map_err(|e| root_error(e, c, &i.cfg.bracket))?;
        let m = mu.powf(i.alpha);
        Ok(if c > T::zero() { m } else { -m })
    }

    /// `p` as a field (errors become NaN), tagged PH of degree α.
    pub fn p_field(&self) -> ScalarField<T> {
        let d = self.clone();
        let dim = self.inner.field.dim();
        let meta = FieldMeta {
            name: format!("p[{}]", self.inner.field.meta().name),
            ph_degree: Some(self.inner.alpha.as_f64()),
            declared_si: true,
            regularity: Regularity::Unknown,
        };
        let reference = self.inner.field.reference().to_vec();
        let r2 = reference.clone();
        ScalarField::new(dim, meta, move |x: &[T]| {
            let off: Vec<T> = x.iter().zip(&r2).map(|(&a, &b)| a - b).collect();
            d.p(&off).unwrap_or_else(|_| T::nan())
        })
        .with_reference(reference)
        .expect("reference has the field dimension")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub samples: usize,
    /// `max |f(x) − φ(p(x))|`.
    pub max_reconstruction: f64,
    /// `max |p(ρx) − ρ^α p(x)| / (1 + ρ^α|p(x)|)`.
    pub max_ph_residual: f64,
    pub tolerance: f64,
    /// Points where `p` or `φ` could not be evaluated.
    pub failures: Vec<Vec<f64>>,
    pub worst_point: Option<Vec<f64>>,
}

/// Residuals of `f = φ ∘ p` and of the homogeneity of `p` on seeded
/// samples from the plan box (offsets from `x★`) and log-uniform `ρ`.
pub fn verify_decomposition<T: Real>(
    field: &ScalarField<T>,
    d: &Decomposition<T>,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<VerifyReport> {
    plan.validate()?;
    let n = field.dim();
    let alpha = d.alpha();
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let mut rec = 0f64;
        let mut ph = 0f64;
        let mut worst: Option<Vec<f64>> = None;
        let mut worst_val = -1f64;
        let mut fails = Vec::new();
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let rho = lit::<T>(log_uniform(rng, plan.rho_min, plan.rho_max));
            let out = (|| -> Result<(f64, f64)> {
                let px = d.p(&x)?;
                let fx = field.centered_raw(&x) + field.base_value();
                let r = (fx - d.phi(px)?).abs().as_f64();
                let prx = d.p(&scale(&x, rho))?;
                let ra = rho.powf(alpha);
                let h = ((prx - ra * px).abs() / (T::one() + ra * px.abs())).as_f64();
                Ok((r, h))
            })();
            match out {
                Ok((r, h)) if r.is_finite() && h.is_finite() => {
                    rec = rec.max(r);
                    ph = ph.max(h);
                    if r.max(h) > worst_val {
                        worst_val = r.max(h);
                        worst = Some(to_f64(&x));
                    }
                }
                _ => fails.push(to_f64(&x)),
            }
        }
        (rec, ph, worst_val, worst, fails)
    });
    let (mut rec, mut ph, mut wv) = (0f64, 0f64, -1f64);
    let mut worst = None;
    let mut failures = Vec::new();
    for (r, h, v, w, f) in chunks {
        rec = rec.max(r);
        ph = ph.max(h);
        if v > wv {
            wv = v;
            worst = w;
        }
        failures.extend(f);
    }
    let ok = failures.is_empty() && rec <= tol && ph <= tol;
    Ok(VerifyReport {
        verdict: Verdict::from_ok(ok),
        samples: plan.samples,
        max_reconstruction: rec,
        max_ph_residual: ph,
        tolerance: tol,
        failures,
        worst_point: worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioStats {
    pub count: usize,
    pub mean: f64,
    /// Coefficient of variation `std / |mean|`.
    pub cv: f64,
    pub min: f64,
    pub max: f64,
}

fn ratio_stats(v: &[f64]) -> Option<RatioStats> {
    if v.is_empty() {
        return None;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    Some(RatioStats {
        count: v.len(),
        mean,
        cv: var.sqrt() / mean.abs(),
        min: v.iter().cloned().fold(f64::INFINITY, f64::min),
        max: v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub verdict: Verdict,
    /// Statistics of `p₁(x)/p₂(x)` where both are positive.
    pub positive: Option<RatioStats>,
    /// Statistics of `p₁(x)/p₂(x)` where both are negative.
    pub negative: Option<RatioStats>,
    /// Points where the two `p` disagree in sign or only one vanishes.
    pub sign_mismatches: usize,
    pub tolerance: f64,
}

/// Two decompositions of the same field with the same α differ by a
/// linear map on each sign class: `p₁/p₂` is constant on `{p > 0}` and on
/// `{p < 0}`.
pub fn uniqueness_check<T: Real>(
    field: &ScalarField<T>,
    d1: &Decomposition<T>,
    d2: &Decomposition<T>,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<UniquenessReport> {
    plan.validate()?;
    if (d1.alpha() - d2.alpha()).abs() > T::eps() * lit(16.0) * d1.alpha() {
        return Err(Error::Precondition("both decompositions need the same α".into()));
    }
    let n = field.dim();
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let (mut pos, mut neg, mut bad) = (Vec::new(), Vec::new(), 0usize);
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            match (d1.p(&x), d2.p(&x)) {
                (Ok(a), Ok(b)) => {
                    let (a, b) = (a.as_f64(), b.as_f64());
                    if a == 0.0 && b == 0.0 {
                        continue;
                    }
                    if a > 0.0 && b > 0.0 {
                        pos.push(a / b);
                    } else if a < 0.0 && b < 0.0 {
                        neg.push(a / b);
                    } else {
                        bad += 1;
                    }
                }
                _ => bad += 1,
            }
        }
        (pos, neg, bad)
    });
    let (mut pos, mut neg, mut bad) = (Vec::new(), Vec::new(), 0);
    for (p, q, b) in chunks {
        pos.extend(p);
        neg.extend(q);
        bad += b;
    }
    let positive = ratio_stats(&pos);
    let negative = ratio_stats(&neg);
    let within = |s: &Option<RatioStats>| s.as_ref().is_none_or(|s| s.cv <= tol);
    let ok = bad == 0 && (positive.is_some() || negative.is_some()) && within(&positive) && within(&negative);
    Ok(UniquenessReport {
        verdict: Verdict::from_ok(ok),
        positive,
        negative,
        sign_mismatches: bad,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f: (f64, f64),
    pub p: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub verdict: Verdict,
    pub pairs: usize,
    /// Pairs tied on one side only (within the tie band); not counted as
    /// disagreements.
    pub tie_mismatches: usize,
    pub witnesses: Vec<OrderWitness>,
}

/// `f` and `p` order every sampled pair the same way.
pub fn order_equivalence<T: Real>(f: &ScalarField<T>, p: &ScalarField<T>, plan: &SamplingPlan) -> Result<OrderReport> {
    plan.validate()?;
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: p.dim() });
    }
    let n = f.dim();
    let band = lit::<T>(TIE_REL);
    let chunks = par_chunks(plan.samples, plan.seed, |_, range, rng| {
        let (mut w, mut ties) = (Vec::new(), 0usize);
        for _ in range {
            let x: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let y: Vec<T> = uniform_box(rng, n, plan.box_radius);
            let (fx, fy) = (f.centered_raw(&x), f.centered_raw(&y));
            let (px, py) = (p.centered_raw(&x), p.centered_raw(&y));
            let a = banded_cmp(fx, fy, band);
            let b = banded_cmp(px, py, band);
            let disagree = match (a, b) {
                (Some(a), Some(b)) if a == b => false,
                (Some(std::cmp::Ordering::Equal), Some(_)) | (Some(_), Some(std::cmp::Ordering::Equal)) => {
                    ties += 1;
                    false
                }
                _ => true,
            };
            if disagree {
                w.push(OrderWitness {
                    x: to_f64(&x),
                    y: to_f64(&y),
                    f: (fx.as_f64(), fy.as_f64()),
                    p: (px.as_f64(), py.as_f64()),
                });
            }
        }
        (w, ties)
    });
    let (mut witnesses, mut ties) = (Vec::new(), 0);
    for (w, t) in chunks {
        witnesses.extend(w);
        ties += t;
    }
    Ok(OrderReport {
        verdict: Verdict::from_ok(witnesses.is_empty()),
        pairs: plan.samples,
        tie_mismatches: ties,
        witnesses,
    })
}
