//! Strictly monotone scalar transforms and their composition with PH fields.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Regularity, ScalarField};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneTransform {
    Identity,
    /// `t ↦ sign(t)·|t|^β`, β > 0.
    Power { beta: f64 },
    /// `t ↦ e^{−t}` (strictly decreasing).
    ExpNeg,
    /// `t ↦ a·t + b`, a > 0.
    Affine { a: f64, b: f64 },
    Tanh,
    /// Piecewise-linear interpolation through strictly monotone knots,
    /// extended linearly with the end slopes.
    Table { knots: Vec<(f64, f64)> },
}

impl MonotoneTransform {
    /// Parses `identity`, `power:β`, `exp_neg`, `affine:a,b`, `tanh` or
    /// `table:t0,y0,t1,y1,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, args) = match spec.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (spec.trim(), None),
        };
        let nums = |s: Option<&str>| -> Result<Vec<f64>> {
            s.unwrap_or("")
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    p.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                        name: "phi".into(),
                        reason: format!("`{p}` is not a number"),
                    })
                })
                .collect()
        };
        let arity = |v: &[f64], k: usize| {
            if v.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name: "phi".into(),
                    reason: format!("`{head}` expects {k} parameter(s), got {}", v.len()),
                })
            }
        };
        let v = nums(args)?;
        let t = match head {
            "identity" => {
                arity(&v, 0)?;
                Self::Identity
            }
            "power" => {
                arity(&v, 1)?;
                Self::Power { beta: v[0] }
            }
            "exp_neg" => {
                arity(&v, 0)?;
                Self::ExpNeg
            }
            "affine" => {
                arity(&v, 2)?;
                Self::Affine { a: v[0], b: v[1] }
            }
            "tanh" => {
                arity(&v, 0)?;
                Self::Tanh
            }
            "table" => {
                if v.len() < 4 || v.len() % 2 != 0 {
                    return Err(Error::InvalidParameter {
                        name: "phi".into(),
                        reason: "table needs at least two (t, y) pairs".into(),
                    });
                }
                Self::Table {
                    knots: v.chunks(2).map(|c| (c[0], c[1])).collect(),
                }
            }
            other => {
                return Err(Error::InvalidParameter {
                    name: "phi".into(),
                    reason: format!("unknown transform `{other}`"),
                })
            }
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidParameter {
                name: "phi".into(),
                reason: reason.into(),
            })
        };
        match self {
            Self::Power { beta } if !(*beta > 0.0 && beta.is_finite()) => bad("power needs β > 0"),
            Self::Affine { a, b } if !(*a > 0.0 && a.is_finite() && b.is_finite()) => {
                bad("affine needs a > 0 (a ≤ 0 is not strictly increasing)")
            }
            Self::Table { knots } => {
                if knots.len() < 2 || knots.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
                    return bad("table needs at least two finite knots");
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("table abscissae must be strictly increasing");
                }
                let up = knots[1].1 > knots[0].1;
                if knots
                    .windows(2)
                    .any(|w| if up { w[1].1 <= w[0].1 } else { w[1].1 >= w[0].1 })
                {
                    return bad("table values must be strictly monotone");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_increasing(&self) -> bool {
        match self {
            Self::ExpNeg => false,
            Self::Table { knots } => knots[1].1 > knots[0].1,
            _ => true,
        }
    }

    pub fn apply<T: Real>(&self, t: T) -> T {
        match self {
            Self::Identity => t,
            Self::Power { beta } => t.signum() * t.abs().powf(lit(*beta)),
            Self::ExpNeg => (-t).exp(),
            Self::Affine { a, b } => lit::<T>(*a) * t + lit(*b),
            Self::Tanh => t.tanh(),
            Self::Table { knots } => {
                let (k, s) = table_segment(knots, t.as_f64());
                let (t0, y0) = knots[k];
                lit::<T>(y0) + lit::<T>(s) * (t - lit(t0))
            }
        }
    }

    pub fn derivative<T: Real>(&self, t: T) -> T {
        match self {
            Self::Identity => T::one(),
            Self::Power { beta } => {
                let b = lit::<T>(*beta);
                b * t.abs().powf(b - T::one())
            }
            Self::ExpNeg => -(-t).exp(),
            Self::Affine { a, .. } => lit(*a),
            Self::Tanh => {
                let th = t.tanh();
                T::one() - th * th
            }
            Self::Table { knots } => lit(table_segment(knots, t.as_f64()).1),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Identity => "identity".into(),
            Self::Power { beta } => format!("power:{beta}"),
            Self::ExpNeg => "exp_neg".into(),
            Self::Affine { a, b } => format!("affine:{a},{b}"),
            Self::Tanh => "tanh".into(),
            Self::Table { knots } => format!("table[{}]", knots.len()),
        }
    }
}

/// Index of the segment containing `t` (clamped to the end segments) and
/// its slope.
fn table_segment(knots: &[(f64, f64)], t: f64) -> (usize, f64) {
    let last = knots.len() - 2;
    let k = knots[1..=last].partition_point(|&(tk, _)| tk <= t).min(last);
    let (t0, y0) = knots[k];
    let (t1, y1) = knots[k + 1];
    (k, (y1 - y0) / (t1 - t0))
}

/// `φ ∘ p` for a PH field `p`. The result is SI; its PH degree is tracked
/// for the identity and power transforms.
pub fn compose<T: Real>(phi: &MonotoneTransform, p: &ScalarField<T>) -> Result<ScalarField<T>> {
    phi.validate()?;
    let alpha = p.meta().ph_degree.ok_or_else(|| {
        Error::Precondition(format!("`{}` is not tagged positively homogeneous", p.meta().name))
    })?;
    let ph_degree = match phi {
        MonotoneTransform::Identity => Some(alpha),
        MonotoneTransform::Power { beta } => Some(alpha * beta),
        _ => None,
    };
    let meta = FieldMeta {
        name: format!("{}∘{}", phi.label(), p.meta().name),
        ph_degree,
        declared_si: true,
        regularity: p.meta().regularity.min(match phi {
            MonotoneTransform::Table { .. } => Regularity::Continuous,
            _ => Regularity::ContinuouslyDifferentiable,
        }),
    };
    let inner = p.evaluator();
    let phi_eval = Arc::new(phi.clone());
    let pe = phi_eval.clone();
    let mut out = ScalarField::new(p.dim(), meta, move |x: &[T]| pe.apply(inner(x)));
    if let Some(grad) = p.gradient_fn() {
        let inner = p.evaluator();
        out = out.with_gradient(move |x: &[T]| {
            let d = phi_eval.derivative(inner(x));
            grad(x).into_iter().map(|g| g * d).collect()
        });
    }
    out.with_reference(p.reference().to_vec())
}
