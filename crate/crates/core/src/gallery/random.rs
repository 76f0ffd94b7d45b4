//! Seeded random SI benchmark: a smoothly perturbed sphere.
//!
//! `p(x) = ‖x‖ (1 + ε g(x/‖x‖))` with `g(u) = Σ a_k cos(ω_k·u + θ_k)`,
//! `Σ|a_k| = 1`, and `φ(t) = t + Σ b_j (sin(ν_j t + ψ_j) − sin ψ_j)/ν_j`
//! with `Σ|b_j| ≤ 1/2`, so `φ' ≥ 1/2`.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Regularity, ScalarField};
use crate::sampling::chunk_rng;
use crate::scalar::{dot, lit, norm, Real};

#[derive(Debug, Clone, Serialize)]
struct Mode {
    amp: f64,
    freq: Vec<f64>,
    phase: f64,
}

#[derive(Debug, Clone, Serialize)]
struct PhiMode {
    amp: f64,
    freq: f64,
    phase: f64,
}

/// The parts of a random SI function, kept so tests can compare against
/// the known decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct RandomSi {
    pub seed: u64,
    pub dim: usize,
    pub eps: f64,
    pub modes: usize,
    perturbation: Vec<Mode>,
    profile: Vec<PhiMode>,
}

impl RandomSi {
    pub fn new(seed: u64, n: usize, eps: f64, modes: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter {
                name: "eps".into(),
                reason: format!("must lie in [0, 1) so that p stays positive, got {eps}"),
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter { name: "n".into(), reason: "must be positive".into() });
        }
        let mut rng = chunk_rng(seed, 0x5151);
        let modes = modes.max(1);
        let raw: Vec<f64> = (0..modes).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let perturbation = raw
            .iter()
            .map(|w| Mode {
                amp: w / total * if rng.random::<bool>() { 1.0 } else { -1.0 },
                freq: (0..n).map(|_| 1.5 * rng.sample::<f64, _>(StandardNormal)).collect(),
                phase: rng.random_range(0.0..std::f64::consts::TAU),
            })
            .collect();
        let raw: Vec<f64> = (0..modes).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let profile = raw
            .iter()
            .map(|w| PhiMode {
                amp: 0.5 * w / total,
                freq: rng.random_range(0.5..3.0),
                phase: rng.random_range(0.0..std::f64::consts::TAU),
            })
            .collect();
        Ok(Self { seed, dim: n, eps, modes, perturbation, profile })
    }

    fn g<T: Real>(&self, u: &[T]) -> T {
        self.perturbation
            .iter()
            .map(|m| lit::<T>(m.amp) * (dot(&to_t::<T>(&m.freq), u) + lit(m.phase)).cos())
            .sum()
    }

    fn grad_g<T: Real>(&self, u: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); u.len()];
        for m in &self.perturbation {
            let w = to_t::<T>(&m.freq);
            let s = lit::<T>(-m.amp) * (dot(&w, u) + lit(m.phase)).sin();
            for (o, wi) in out.iter_mut().zip(&w) {
                *o = *o + s * *wi;
            }
        }
        out
    }

    /// The PH₁ part.
    pub fn p<T: Real>(&self, x: &[T]) -> T {
        let r = norm(x);
        if r == T::zero() {
            return T::zero();
        }
        let u: Vec<T> = x.iter().map(|&v| v / r).collect();
        r * (T::one() + lit::<T>(self.eps) * self.g(&u))
    }

    pub fn grad_p<T: Real>(&self, x: &[T]) -> Vec<T> {
        let r = norm(x);
        if r == T::zero() {
            return vec![T::zero(); x.len()];
        }
        let u: Vec<T> = x.iter().map(|&v| v / r).collect();
        let eps = lit::<T>(self.eps);
        let radial = T::one() + eps * self.g(&u);
        let gg = self.grad_g(&u);
        let along = dot(&gg, &u);
        u.iter()
            .zip(&gg)
            .map(|(&ui, &gi)| ui * radial + eps * (gi - along * ui))
            .collect()
    }

    /// The strictly increasing profile.
    pub fn phi<T: Real>(&self, t: T) -> T {
        self.profile.iter().fold(t, |acc, m| {
            let nu = lit::<T>(m.freq);
            let psi = lit::<T>(m.phase);
            acc + lit::<T>(m.amp) * ((nu * t + psi).sin() - psi.sin()) / nu
        })
    }

    pub fn phi_derivative<T: Real>(&self, t: T) -> T {
        self.profile
            .iter()
            .fold(T::one(), |acc, m| acc + lit::<T>(m.amp) * (lit::<T>(m.freq) * t + lit(m.phase)).cos())
    }

    fn meta(&self, name: &str, ph: Option<f64>) -> FieldMeta {
        FieldMeta {
            name: format!("{name}(seed={}, eps={}, modes={})", self.seed, self.eps, self.modes),
            ph_degree: ph,
            declared_si: true,
            regularity: Regularity::PiecewiseDifferentiable,
        }
    }

    /// `φ ∘ p`.
    pub fn field<T: Real>(&self) -> ScalarField<T> {
        let a = Arc::new(self.clone());
        let b = a.clone();
        ScalarField::new(self.dim, self.meta("random_si", None), move |x: &[T]| a.phi(a.p(x)))
            .with_gradient(move |x: &[T]| {
                let d = b.phi_derivative(b.p(x));
                b.grad_p(x).into_iter().map(|g| g * d).collect()
            })
    }

    /// The PH₁ factor `p` alone.
    pub fn p_field<T: Real>(&self) -> ScalarField<T> {
        let a = Arc::new(self.clone());
        let b = a.clone();
        ScalarField::new(self.dim, self.meta("random_si_p", Some(1.0)), move |x: &[T]| a.p(x))
            .with_gradient(move |x: &[T]| b.grad_p(x))
    }
}

fn to_t<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| lit(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GradientSpec;

    #[test]
    fn rejects_eps_out_of_range() {
        assert!(RandomSi::new(0, 3, 1.0, 4).is_err());
        assert!(RandomSi::new(0, 3, -0.1, 4).is_err());
    }

    #[test]
    fn p_is_ph1_and_bounded_by_construction() {
        let r = RandomSi::new(4, 3, 0.3, 5).unwrap();
        let mut rng = chunk_rng(1, 0);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let p = r.p(&x);
            let nx = norm(&x);
            assert!(p >= 0.7 * nx - 1e-12 && p <= 1.3 * nx + 1e-12);
            let p2 = r.p(&x.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
            assert!((p2 - 2.0 * p).abs() < 1e-12 * (1.0 + p2));
        }
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let r = RandomSi::new(9, 4, 0.25, 3).unwrap();
        let f = r.field::<f64>();
        let x = [0.3, -0.7, 1.1, 0.2];
        let a = f.gradient(&x, &GradientSpec::default()).unwrap();
        let n = f.gradient(&x, &GradientSpec::numeric(1e-6)).unwrap();
        for (ai, ni) in a.iter().zip(&n) {
            assert!((ai - ni).abs() < 1e-7, "{a:?} vs {n:?}");
        }
    }

    #[test]
    fn profile_is_strictly_increasing() {
        let r = RandomSi::new(2, 2, 0.2, 6).unwrap();
        for k in 0..2000 {
            let t = k as f64 * 0.01;
            assert!(r.phi_derivative(t) >= 0.5 - 1e-12);
            assert!(r.phi(t + 0.01) > r.phi(t));
        }
        assert_eq!(r.phi(0.0f64), 0.0);
    }
}
