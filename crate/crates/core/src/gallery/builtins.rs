//! Closed-form gallery functions.

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Regularity, ScalarField};
use crate::quadrature::integrate;
use crate::scalar::{dot, lit, norm, Real};

fn meta(name: &str, ph: Option<f64>, si: bool, reg: Regularity) -> FieldMeta {
    FieldMeta {
        name: name.into(),
        ph_degree: ph,
        declared_si: si,
        regularity: reg,
    }
}

pub(crate) fn sq_norm<T: Real>(name: &str, n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta(name, Some(2.0), true, Regularity::ContinuouslyDifferentiable), |x: &[T]| {
        dot(x, x)
    })
    .with_gradient(|x: &[T]| x.iter().map(|&v| v + v).collect())
}

pub(crate) fn euclidean_norm<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("norm", Some(1.0), true, Regularity::PiecewiseDifferentiable), |x: &[T]| {
        norm(x)
    })
    .with_gradient(|x: &[T]| {
        let r = norm(x);
        if r > T::zero() {
            x.iter().map(|&v| v / r).collect()
        } else {
            vec![T::zero(); x.len()]
        }
    })
}

/// Default ellipsoid matrix `diag(4^{i/(n−1)})`, i.e. `diag(1, 4)` in 2-D.
pub fn default_ellipsoid_matrix(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = if n == 1 { 1.0 } else { 4f64.powf(i as f64 / (n - 1) as f64) };
    }
    a
}

/// Checks that the row-major `n×n` matrix is symmetric positive definite
/// (Cholesky must succeed).
pub fn check_spd(a: &[f64], n: usize) -> Result<()> {
    let bad = |reason: String| Err(Error::InvalidParameter { name: "A".into(), reason });
    if a.len() != n * n {
        return bad(format!("expected {} entries for a {n}×{n} matrix, got {}", n * n, a.len()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return bad("entries must be finite".into());
    }
    let scale = a.iter().fold(0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (a[i * n + j] - a[j * n + i]).abs() > 1e-12 * scale {
                return bad(format!("not symmetric at ({}, {})", i + 1, j + 1));
            }
        }
    }
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let d = a[j * n + j] - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
        if !(d > 0.0) {
            return bad("not positive definite".into());
        }
        l[j * n + j] = d.sqrt();
        for i in (j + 1)..n {
            let s = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            l[i * n + j] = s / l[j * n + j];
        }
    }
    Ok(())
}

pub(crate) fn ellipsoid<T: Real>(n: usize, a: Vec<f64>) -> Result<ScalarField<T>> {
    check_spd(&a, n)?;
    let a: Vec<T> = a.into_iter().map(lit).collect();
    let a2 = a.clone();
    let f = ScalarField::new(n, meta("ellipsoid", Some(2.0), true, Regularity::ContinuouslyDifferentiable), move |x: &[T]| {
        (0..n).map(|i| x[i] * dot(&a[i * n..(i + 1) * n], x)).sum()
    })
    .with_gradient(move |x: &[T]| {
        (0..n)
            .map(|i| lit::<T>(2.0) * dot(&a2[i * n..(i + 1) * n], x))
            .collect()
    });
    Ok(f)
}

/// `(Σ √|xᵢ|)²`. The gradient reported on coordinate hyperplanes, where
/// the function has infinite partial derivatives, is 0 in that coordinate.
pub(crate) fn half_norm<T: Real>(n: usize) -> ScalarField<T> {
    fn s<T: Real>(x: &[T]) -> T {
        x.iter().map(|v| v.abs().sqrt()).sum()
    }
    ScalarField::new(n, meta("half_norm", Some(1.0), true, Regularity::PiecewiseDifferentiable), |x: &[T]| {
        let v = s(x);
        v * v
    })
    .with_gradient(|x: &[T]| {
        let sum = s(x);
        x.iter()
            .map(|&v| {
                if v == T::zero() {
                    T::zero()
                } else {
                    sum * v.signum() / v.abs().sqrt()
                }
            })
            .collect()
    })
}

pub(crate) fn linear_x1<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("linear_x1", Some(1.0), true, Regularity::ContinuouslyDifferentiable), |x: &[T]| x[0])
        .with_gradient(move |_x: &[T]| {
            let mut g = vec![T::zero(); n];
            g[0] = T::one();
            g
        })
}

/// `x₁` if `x₁x₂ > 0`, else 0.
pub(crate) fn piecewise_ph<T: Real>(n: usize) -> Result<ScalarField<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: "piecewise_ph needs n ≥ 2".into(),
        });
    }
    Ok(ScalarField::new(n, meta("piecewise_ph", Some(1.0), true, Regularity::Unknown), |x: &[T]| {
        if x[0] * x[1] > T::zero() {
            x[0]
        } else {
            T::zero()
        }
    }))
}

/// `tanh(x₁)` for `x₁ ≥ 0`, `1 + e^{−x₁}` otherwise.
pub(crate) fn tanh_exp<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("tanh_exp", None, true, Regularity::LowerSemicontinuous), |x: &[T]| {
        if x[0] >= T::zero() {
            x[0].tanh()
        } else {
            T::one() + (-x[0]).exp()
        }
    })
}

pub(crate) fn gauss_si<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("gauss_si", None, true, Regularity::ContinuouslyDifferentiable), |x: &[T]| {
        (-dot(x, x)).exp()
    })
    .with_gradient(|x: &[T]| {
        let e = (-dot(x, x)).exp();
        x.iter().map(|&v| lit::<T>(-2.0) * v * e).collect()
    })
}

/// `t/2 − sin(2t)/4`, with a series for small `t` where the closed form
/// cancels.
pub fn saddle_phi<T: Real>(t: T) -> T {
    if t.abs() < lit(0.1) {
        let t2 = t * t;
        let mut term = t * t2 / lit(3.0);
        let mut sum = term;
        for k in 1..9 {
            let k = lit::<T>(k as f64);
            let two = lit::<T>(2.0);
            term = -term * lit::<T>(4.0) * t2 / ((two * k + two) * (two * k + lit(3.0)));
            sum = sum + term;
        }
        sum
    } else {
        t / lit(2.0) - (t + t).sin() / lit(4.0)
    }
}

/// `φ(‖x‖²)` with `φ' = sin²`, which vanishes on the shells `‖x‖² = kπ`.
pub(crate) fn saddle_si<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("saddle_si", None, true, Regularity::ContinuouslyDifferentiable), |x: &[T]| {
        saddle_phi(dot(x, x))
    })
    .with_gradient(|x: &[T]| {
        let s = dot(x, x).sin();
        let d = s * s;
        x.iter().map(|&v| (v + v) * d).collect()
    })
}

/// `∫₀ᵗ du / (1 + ln²u)`, computed as `∫_{−ln t}^{∞} e^{−v}/(1+v²) dv`.
pub fn logsq_phi<T: Real>(t: T) -> T {
    if t <= T::zero() {
        return if t == T::zero() { T::zero() } else { T::nan() };
    }
    if !t.is_finite() {
        return t;
    }
    let a = -t.ln();
    // e^{−v} < 1e-20 relative to the peak past this point
    let b = a.max(T::zero()) + lit(50.0);
    let g = |v: T| (-v).exp() / (T::one() + v * v);
    let abs_tol = lit::<T>(1e-10).max(T::eps() * lit(4.0));
    integrate(g, a, b, abs_tol, lit::<T>(1e-14).max(T::eps() * lit(4.0)))
}

pub fn logsq_phi_derivative<T: Real>(t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    let l = t.ln();
    T::one() / (T::one() + l * l)
}

/// `φ(|x₁|)` with `φ` from [`logsq_phi`].
pub(crate) fn logsq_si<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("logsq_si", None, true, Regularity::ContinuouslyDifferentiable), |x: &[T]| {
        logsq_phi(x[0].abs())
    })
    .with_gradient(move |x: &[T]| {
        let mut g = vec![T::zero(); n];
        g[0] = logsq_phi_derivative(x[0].abs()) * x[0].signum();
        if x[0] == T::zero() {
            g[0] = T::zero();
        }
        g
    })
}

/// `t` for `t ≥ 0`, `t²` for `t < 0`, along the first coordinate.
pub(crate) fn footnote_1d<T: Real>(n: usize) -> ScalarField<T> {
    ScalarField::new(n, meta("footnote_1d", None, false, Regularity::Continuous), |x: &[T]| {
        if x[0] >= T::zero() {
            x[0]
        } else {
            x[0] * x[0]
        }
    })
}
