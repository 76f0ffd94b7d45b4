//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library is generic over: `f32` or `f64`.
///
/// Tolerances throughout the crate are specified as `f64` literals and
/// converted with [`lit`]; on `f32` they saturate at what single precision
/// can resolve, so the default tolerances are tuned for `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Machine epsilon, exposed for tolerance floors.
    fn eps() -> Self {
        Self::epsilon()
    }

    /// Lossless widening to `f64` (used for hashing and reporting).
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap_or_else(T::nan)
}

/// Converts a count into the working scalar.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).unwrap_or_else(T::nan)
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<T: Real>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

pub fn scale<T: Real>(x: &[T], s: T) -> Vec<T> {
    x.iter().map(|&v| v * s).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `base + t * dir`, evaluated coordinate-wise in that order.
pub fn axpy<T: Real>(base: &[T], t: T, dir: &[T]) -> Vec<T> {
    base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect()
}

/// Returns `x / ‖x‖`, or `None` for the zero vector.
pub fn normalized<T: Real>(x: &[T]) -> Option<Vec<T>> {
    let n = norm(x);
    if n > T::zero() && n.is_finite() {
        Some(scale(x, T::one() / n))
    } else {
        None
    }
}

/// Infinity norm of the difference of two vectors.
pub fn max_abs_diff<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs())
        .fold(T::zero(), T::max)
}

/// Three-way comparison with a relative tie band: values closer than
/// `rel * (1 + max(|a|, |b|))` compare as `Equal`. Non-finite inputs yield
/// `None`.
pub fn banded_cmp<T: Real>(a: T, b: T, rel: T) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering;
    if !a.is_finite() || !b.is_finite() {
        return None;
    }
    let band = rel * (T::one() + a.abs().max(b.abs()));
    let d = a - b;
    Some(if d.abs() <= band {
        Ordering::Equal
    } else if d < T::zero() {
        Ordering::Less
    } else {
        Ordering::Greater
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn banded_cmp_ties_and_orders() {
        assert_eq!(banded_cmp(1.0, 1.0 + 1e-14, 1e-12), Some(Ordering::Equal));
        assert_eq!(banded_cmp(1.0, 2.0, 1e-12), Some(Ordering::Less));
        assert_eq!(banded_cmp(3.0f32, 2.0, 1e-6), Some(Ordering::Greater));
        assert_eq!(banded_cmp(f64::NAN, 2.0, 1e-12), None);
        assert_eq!(banded_cmp(f64::INFINITY, f64::INFINITY, 1e-12), None);
    }

    #[test]
    fn vector_helpers() {
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert_eq!(axpy(&[1.0, 1.0], 2.0, &[1.0, -1.0]), vec![3.0, -1.0]);
        assert!(normalized(&[0.0f64, 0.0]).is_none());
        let u = normalized(&[0.0f32, 2.0]).unwrap();
        assert_eq!(u, vec![0.0, 1.0]);
    }
}
