//! Bracketed root finding for monotone one-dimensional functions.

use serde::Serialize;

use crate::scalar::{lit, Real};

/// Bracket search on the half-line `t > 0`: starts from `[t_lo, t_hi]`,
/// doubles the upper end up to `cap` and halves the lower end down to
/// `floor` until the target value is straddled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketConfig {
    pub t_lo: f64,
    pub t_hi: f64,
    pub cap: f64,
    pub floor: f64,
    pub max_iter: usize,
}

impl Default for BracketConfig {
    fn default() -> Self {
        Self {
            t_lo: 1e-8,
            t_hi: 1.0,
            cap: 2f64.powi(60),
            floor: 1e-8 * 2f64.powi(-60),
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootFailure {
    /// The target was never straddled; `reached` is the last abscissa tried.
    Exhausted { reached: f64 },
    /// The function returned NaN at `t`.
    NotFinite { t: f64 },
    /// The function does not change over the explored range.
    Flat,
}

/// Solves `g(t) = target` for `t > 0`, assuming `g` is monotone on the
/// half-line. Returns the root to near machine precision.
pub fn solve_on_half_line<T: Real, G: Fn(T) -> T>(
    g: G,
    target: T,
    cfg: &BracketConfig,
) -> Result<T, RootFailure> {
    let h = |t: T| g(t) - target;
    let mut lo = lit::<T>(cfg.t_lo);
    let mut hi = lit::<T>(cfg.t_hi);
    let mut h_lo = h(lo);
    let mut h_hi = h(hi);
    for (t, v) in [(lo, h_lo), (hi, h_hi)] {
        if v.is_nan() {
            return Err(RootFailure::NotFinite { t: t.as_f64() });
        }
        if v == T::zero() {
            return Ok(t);
        }
    }
    if same_sign(h_lo, h_hi) {
        if h_lo == h_hi {
            return Err(RootFailure::Flat);
        }
        let two = lit::<T>(2.0);
        if h_hi.abs() < h_lo.abs() {
            let cap = lit::<T>(cfg.cap);
            while same_sign(h_lo, h_hi) {
                if hi >= cap {
                    return Err(RootFailure::Exhausted { reached: hi.as_f64() });
                }
                lo = hi;
                h_lo = h_hi;
                hi = hi * two;
                h_hi = h(hi);
                if h_hi.is_nan() {
                    return Err(RootFailure::NotFinite { t: hi.as_f64() });
                }
            }
        } else {
            let floor = lit::<T>(cfg.floor);
            while same_sign(h_lo, h_hi) {
                if lo <= floor {
                    return Err(RootFailure::Exhausted { reached: lo.as_f64() });
                }
                hi = lo;
                h_hi = h_lo;
                lo = lo / two;
                h_lo = h(lo);
                if h_lo.is_nan() {
                    return Err(RootFailure::NotFinite { t: lo.as_f64() });
                }
            }
        }
        if h_lo == T::zero() {
            return Ok(lo);
        }
        if h_hi == T::zero() {
            return Ok(hi);
        }
    }
    Ok(brent(&h, lo, hi, h_lo, h_hi, cfg.max_iter))
}

#[inline]
fn same_sign<T: Real>(a: T, b: T) -> bool {
    (a > T::zero()) == (b > T::zero())
}

/// Brent's method on a bracket `[a, b]` with `f(a)`, `f(b)` of opposite
/// signs. Terminates when the bracket shrinks to a few ulps.
pub fn brent<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, fa: T, fb: T, max_iter: usize) -> T {
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let half = lit::<T>(0.5);
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if same_sign(fb, fc) && fb != T::zero() && fc != T::zero() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::eps() * b.abs() + T::min_positive_value();
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return b;
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else if m > T::zero() {
            b + tol
        } else {
            b - tol
        };
        fb = f(b);
        if fb.is_nan() {
            return b;
        }
    }
    b
}

/// Plain bisection on `[a, b]` until `|f(mid)| <= ftol` or the bracket
/// collapses. `f(a)` and `f(b)` must have opposite signs.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, ftol: T, max_iter: usize) -> T {
    let half = lit::<T>(0.5);
    let mut fa = f(a);
    let mut mid = half * (a + b);
    for _ in 0..max_iter {
        mid = half * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm.abs() <= ftol && (b - a).abs() <= T::eps() * mid.abs() * lit(16.0) {
            break;
        }
        if fm == T::zero() {
            break;
        }
        if same_sign(fm, fa) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    mid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let r = brent(&f, 0.0, 2.0, f(0.0), f(2.0), 200);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn half_line_expands_upward_and_downward() {
        let cfg = BracketConfig::default();
        let r = solve_on_half_line(|t: f64| t * t, 1e6, &cfg).unwrap();
        assert!((r - 1e3).abs() < 1e-9);
        let r = solve_on_half_line(|t: f64| t * t, 1e-20, &cfg).unwrap();
        assert!((r - 1e-10).abs() < 1e-22);
        let r = solve_on_half_line(|t: f64| (-t * t).exp(), (-1.0f64).exp(), &cfg).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn half_line_reports_exhaustion_and_flat_rays() {
        let cfg = BracketConfig::default();
        assert!(matches!(
            solve_on_half_line(|t: f64| t.tanh(), 2.0, &cfg),
            Err(RootFailure::Exhausted { .. })
        ));
        assert_eq!(
            solve_on_half_line(|_t: f64| 0.0, 1.0, &cfg),
            Err(RootFailure::Flat)
        );
    }

    #[test]
    fn works_in_single_precision() {
        let r = solve_on_half_line(|t: f32| t * t, 9.0, &BracketConfig::default()).unwrap();
        assert!((r - 3.0).abs() < 1e-6);
    }

    #[test]
    fn bisection_matches_target() {
        let r = bisect(|x: f64| x.powi(3) - 8.0, 0.0, 5.0, 1e-14, 200);
        assert!((r - 2.0).abs() < 1e-13);
    }
}
