//! Scalar fields on ℝⁿ, numerical gradients and ray restrictions.
//!
//! A [`ScalarField`] carries a reference point `x★`. Every probe in the crate
//! works on the centered function `x ↦ f(x★ + x) − f(x★)`, whose reference is
//! the origin and whose value there is zero; user-facing evaluation
//! ([`ScalarField::evaluate`]) stays un-shifted.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{axpy, lit, norm, Real};

type Evaluator<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
type GradientFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

/// Smoothness the author of a field claims for it. Probes only rely on the
/// hypotheses they need and echo the claim in their reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Unknown,
    LowerSemicontinuous,
    Continuous,
    /// Differentiable on ℝⁿ minus a closed null set (the origin, coordinate
    /// hyperplanes, ...).
    PiecewiseDifferentiable,
    ContinuouslyDifferentiable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMeta {
    pub name: String,
    /// Declared degree of positive homogeneity, if the field is PH.
    pub ph_degree: Option<f64>,
    pub declared_si: bool,
    pub regularity: Regularity,
}

impl FieldMeta {
    pub fn named(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ph_degree: None,
            declared_si: false,
            regularity: Regularity::Unknown,
        }
    }
}

/// A deterministic real-valued function on ℝⁿ with a reference point.
#[derive(Clone)]
pub struct ScalarField<T: Real> {
    dim: usize,
    reference: Vec<T>,
    base_value: T,
    eval: Evaluator<T>,
    grad: Option<GradientFn<T>>,
    meta: FieldMeta,
}

impl<T: Real> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("reference", &self.reference)
            .field("analytic_gradient", &self.grad.is_some())
            .field("meta", &self.meta)
            .finish()
    }
}

impl<T: Real> ScalarField<T> {
    /// Builds a field with reference point at the origin.
    pub fn new<F>(dim: usize, meta: FieldMeta, eval: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        assert!(dim > 0, "a scalar field needs a positive dimension");
        let eval: Evaluator<T> = Arc::new(eval);
        let reference = vec![T::zero(); dim];
        let base_value = eval(&reference);
        Self {
            dim,
            reference,
            base_value,
            eval,
            grad: None,
            meta,
        }
    }

    pub fn with_gradient<G>(mut self, grad: G) -> Self
    where
        G: Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    /// Moves the reference point. Values are unchanged; only the centered
    /// view used by the probes shifts.
    pub fn with_reference(mut self, reference: Vec<T>) -> Result<Self> {
        self.check_dim(&reference)?;
        self.base_value = (self.eval)(&reference);
        self.reference = reference;
        Ok(self)
    }

    /// Translates the function so that the current origin behaviour is
    /// reproduced around `center`: `g(x) = f(x − center)`, reference `center`.
    pub fn translated(&self, center: Vec<T>) -> Result<Self> {
        self.check_dim(&center)?;
        let inner = self.eval.clone();
        let c = center.clone();
        let mut out = Self::new(self.dim, self.meta.clone(), move |x: &[T]| {
            let y: Vec<T> = x.iter().zip(&c).map(|(&a, &b)| a - b).collect();
            inner(&y)
        });
        if let Some(g) = self.grad.clone() {
            let c = center.clone();
            out = out.with_gradient(move |x: &[T]| {
                let y: Vec<T> = x.iter().zip(&c).map(|(&a, &b)| a - b).collect();
                g(&y)
            });
        }
        let shifted: Vec<T> = self
            .reference
            .iter()
            .zip(&center)
            .map(|(&a, &b)| a + b)
            .collect();
        out.with_reference(shifted)
    }

    pub fn with_meta(mut self, meta: FieldMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reference(&self) -> &[T] {
        &self.reference
    }

    /// `f(x★)`.
    pub fn base_value(&self) -> T {
        self.base_value
    }

    pub fn meta(&self) -> &FieldMeta {
        &self.meta
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `f(x)`. Non-finite results are returned as-is.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        self.check_dim(x)?;
        Ok((self.eval)(x))
    }

    /// Unchecked evaluation for internal sweeps whose inputs are built with
    /// the right length.
    #[inline]
    pub(crate) fn eval_raw(&self, x: &[T]) -> T {
        (self.eval)(x)
    }

    /// `f(x★ + x) − f(x★)`.
    #[inline]
    pub(crate) fn centered_raw(&self, x: &[T]) -> T {
        let y: Vec<T> = self.reference.iter().zip(x).map(|(&r, &v)| r + v).collect();
        (self.eval)(&y) - self.base_value
    }

    /// `f(x★ + x) − f(x★)`, the normalized view used by every probe.
    pub fn evaluate_centered(&self, x: &[T]) -> Result<T> {
        self.check_dim(x)?;
        Ok(self.centered_raw(x))
    }

    /// Gradient at `x`: the analytic one when present and preferred,
    /// otherwise central differences.
    pub fn gradient(&self, x: &[T], spec: &GradientSpec) -> Result<Vec<T>> {
        self.check_dim(x)?;
        if spec.prefer_analytic {
            if let Some(g) = &self.grad {
                return Ok(g(x));
            }
        }
        Ok(central_difference(|y| (self.eval)(y), x, spec))
    }

    /// Restriction `t ↦ f(x★ + t·x)` to the half-line spanned by `x`.
    pub fn ray(&self, direction: &[T]) -> Result<RaySection<'_, T>> {
        self.check_dim(direction)?;
        Ok(RaySection {
            field: self,
            direction: direction.to_vec(),
        })
    }

    /// Owned evaluator handle, for building derived fields.
    pub(crate) fn evaluator(&self) -> Evaluator<T> {
        self.eval.clone()
    }

    pub(crate) fn gradient_fn(&self) -> Option<GradientFn<T>> {
        self.grad.clone()
    }
}

/// Central-difference settings. The effective step at `x` is
/// `h · (1 + ‖x‖)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientSpec {
    pub h: f64,
    /// Use an analytic gradient when the field carries one.
    pub prefer_analytic: bool,
}

impl Default for GradientSpec {
    fn default() -> Self {
        Self {
            h: 1e-5,
            prefer_analytic: true,
        }
    }
}

impl GradientSpec {
    pub fn numeric(h: f64) -> Self {
        assert!(h > 0.0, "finite-difference step must be positive");
        Self {
            h,
            prefer_analytic: false,
        }
    }

    pub fn with_h(self, h: f64) -> Self {
        assert!(h > 0.0, "finite-difference step must be positive");
        Self { h, ..self }
    }
}

pub fn central_difference<T: Real, F: Fn(&[T]) -> T>(f: F, x: &[T], spec: &GradientSpec) -> Vec<T> {
    let h = lit::<T>(spec.h) * (T::one() + norm(x));
    let two_h = h + h;
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let xi = x[i];
            y[i] = xi + h;
            let fp = f(&y);
            y[i] = xi - h;
            let fm = f(&y);
            y[i] = xi;
            (fp - fm) / two_h
        })
        .collect()
}

/// One-dimensional restriction of a field to a half-line from its
/// reference point.
#[derive(Debug, Clone)]
pub struct RaySection<'a, T: Real> {
    field: &'a ScalarField<T>,
    direction: Vec<T>,
}

impl<'a, T: Real> RaySection<'a, T> {
    pub fn direction(&self) -> &[T] {
        &self.direction
    }

    pub fn field(&self) -> &'a ScalarField<T> {
        self.field
    }

    /// `f(x★ + t·x)`.
    pub fn eval(&self, t: T) -> T {
        self.field.eval_raw(&axpy(self.field.reference(), t, &self.direction))
    }

    /// `f(x★ + t·x) − f(x★)`.
    pub fn eval_centered(&self, t: T) -> T {
        self.eval(t) - self.field.base_value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> ScalarField<f64> {
        ScalarField::new(2, FieldMeta::named("sq"), |x: &[f64]| x[0] * x[0] + x[1] * x[1])
            .with_gradient(|x: &[f64]| vec![2.0 * x[0], 2.0 * x[1]])
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        let f = sq();
        assert_eq!(f.evaluate(&[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(
            f.evaluate(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn analytic_gradient_wins_unless_numeric_requested() {
        let f = sq();
        let g = f.gradient(&[1.0, 2.0], &GradientSpec::default()).unwrap();
        assert_eq!(g, vec![2.0, 4.0]);
        let g = f.gradient(&[1.0, 2.0], &GradientSpec::numeric(1e-5)).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-8 && (g[1] - 4.0).abs() < 1e-8);
    }

    #[test]
    fn reference_point_shifts_centered_view_only() {
        let f = sq().with_reference(vec![1.0, 0.0]).unwrap();
        assert_eq!(f.evaluate(&[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(f.evaluate_centered(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(f.evaluate_centered(&[1.0, 0.0]).unwrap(), 3.0);
        let ray = f.ray(&[0.0, 1.0]).unwrap();
        assert_eq!(ray.eval(0.0), f.base_value());
        assert_eq!(ray.eval(2.0), 5.0);
    }

    #[test]
    fn translated_field_moves_reference() {
        let f = sq().translated(vec![2.0, -1.0]).unwrap();
        assert_eq!(f.reference(), &[2.0, -1.0]);
        assert_eq!(f.base_value(), 0.0);
        assert_eq!(f.evaluate(&[3.0, -1.0]).unwrap(), 1.0);
        let g = f.gradient(&[3.0, -1.0], &GradientSpec::default()).unwrap();
        assert_eq!(g, vec![2.0, 0.0]);
    }

    #[test]
    fn non_finite_values_propagate() {
        let f = ScalarField::new(1, FieldMeta::named("log"), |x: &[f64]| x[0].ln());
        assert!(f.evaluate(&[-1.0]).unwrap().is_nan());
    }
}
