//! Named test functions with known ground truth.

mod builtins;
mod random;
mod transforms;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};
use crate::scalar::Real;

pub use builtins::{check_spd, default_ellipsoid_matrix, logsq_phi, logsq_phi_derivative, saddle_phi};
pub use random::RandomSi;
pub use transforms::{compose, MonotoneTransform};

/// Ground-truth properties of a gallery entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tags {
    pub is_si: bool,
    pub ph_degree: Option<f64>,
    pub decomposable: bool,
    /// Sublevel sets are compact (equivalently x★ is the unique argmin).
    pub compact: bool,
    pub differentiable: bool,
    pub regularity: Regularity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub min_dim: usize,
    pub params: &'static [&'static str],
    pub tags: Tags,
}

const fn tags(
    is_si: bool,
    ph_degree: Option<f64>,
    decomposable: bool,
    compact: bool,
    differentiable: bool,
    regularity: Regularity,
) -> Tags {
    Tags { is_si, ph_degree, decomposable, compact, differentiable, regularity }
}

use Regularity::*;

static REGISTRY: &[GalleryEntry] = &[
    GalleryEntry {
        name: "sphere",
        description: "‖x‖²",
        min_dim: 1,
        params: &[],
        tags: tags(true, Some(2.0), true, true, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "sq_norm",
        description: "‖x‖² (alias of sphere)",
        min_dim: 1,
        params: &[],
        tags: tags(true, Some(2.0), true, true, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "norm",
        description: "‖x‖",
        min_dim: 1,
        params: &[],
        tags: tags(true, Some(1.0), true, true, false, PiecewiseDifferentiable),
    },
    GalleryEntry {
        name: "ellipsoid",
        description: "xᵀAx, A symmetric positive definite (default diag(4^{i/(n-1)}))",
        min_dim: 1,
        params: &["A", "diag"],
        tags: tags(true, Some(2.0), true, true, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "half_norm",
        description: "(Σ √|xᵢ|)²",
        min_dim: 1,
        params: &[],
        tags: tags(true, Some(1.0), true, true, false, PiecewiseDifferentiable),
    },
    GalleryEntry {
        name: "linear_x1",
        description: "x₁",
        min_dim: 1,
        params: &[],
        tags: tags(true, Some(1.0), true, false, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "piecewise_ph",
        description: "x₁ if x₁x₂ > 0, else 0",
        min_dim: 2,
        params: &[],
        tags: tags(true, Some(1.0), true, false, false, Unknown),
    },
    GalleryEntry {
        name: "tanh_exp",
        description: "tanh(x₁) if x₁ ≥ 0, else 1 + exp(−x₁)",
        min_dim: 1,
        params: &[],
        tags: tags(true, None, false, false, false, LowerSemicontinuous),
    },
    GalleryEntry {
        name: "gauss_si",
        description: "exp(−‖x‖²)",
        min_dim: 1,
        params: &[],
        tags: tags(true, None, true, false, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "saddle_si",
        description: "φ(‖x‖²) with φ(t) = t/2 − sin(2t)/4",
        min_dim: 1,
        params: &[],
        tags: tags(true, None, true, true, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "logsq_si",
        description: "φ(|x₁|) with φ(t) = ∫₀ᵗ du/(1 + log²u)",
        min_dim: 1,
        params: &[],
        tags: tags(true, None, true, false, true, ContinuouslyDifferentiable),
    },
    GalleryEntry {
        name: "footnote_1d",
        description: "x₁ if x₁ ≥ 0, else x₁² (not SI)",
        min_dim: 1,
        params: &[],
        tags: tags(false, None, false, false, false, Continuous),
    },
    GalleryEntry {
        name: "random_si",
        description: "φ(‖x‖(1 + eps·g(x/‖x‖))) with seeded trigonometric g and φ",
        min_dim: 1,
        params: &["seed", "eps", "modes"],
        tags: tags(true, None, true, true, true, PiecewiseDifferentiable),
    },
];

pub fn registry() -> &'static [GalleryEntry] {
    REGISTRY
}

pub fn entry(name: &str) -> Result<&'static GalleryEntry> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// Numeric constructor parameters, each a list of reals.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params(pub BTreeMap<String, Vec<f64>>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, values: Vec<f64>) -> Self {
        self.0.insert(key.to_string(), values);
        self
    }

    /// Parses `key=v1,v2,...`.
    pub fn insert_assignment(&mut self, text: &str) -> Result<()> {
        let (k, v) = text.split_once('=').ok_or_else(|| Error::InvalidParameter {
            name: text.into(),
            reason: "expected key=value".into(),
        })?;
        let values = v
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                    name: k.into(),
                    reason: format!("`{s}` is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.0.insert(k.trim().to_string(), values);
        Ok(())
    }

    pub fn scalar(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) if v.len() == 1 => Ok(v[0]),
            Some(_) => Err(Error::InvalidParameter {
                name: key.into(),
                reason: "expected a single value".into(),
            }),
        }
    }

    fn integer(&self, key: &str, default: u64) -> Result<u64> {
        let v = self.scalar(key, default as f64)?;
        if v < 0.0 || v.fract() != 0.0 || v > 2f64.powi(53) {
            return Err(Error::InvalidParameter {
                name: key.into(),
                reason: "expected a non-negative integer".into(),
            });
        }
        Ok(v as u64)
    }
}

/// Builds the named gallery function in dimension `n`.
pub fn make_builtin<T: Real>(name: &str, n: usize, params: &Params) -> Result<ScalarField<T>> {
    let e = entry(name)?;
    if n < e.min_dim {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: format!("`{name}` needs n ≥ {}", e.min_dim),
        });
    }
    if let Some(k) = params.0.keys().find(|k| !e.params.contains(&k.as_str())) {
        return Err(Error::InvalidParameter {
            name: k.clone(),
            reason: format!("not a parameter of `{name}`"),
        });
    }
    Ok(match name {
        "sphere" | "sq_norm" => builtins::sq_norm(name, n),
        "norm" => builtins::euclidean_norm(n),
        "ellipsoid" => {
            let a = match (params.0.get("A"), params.0.get("diag")) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidParameter {
                        name: "A".into(),
                        reason: "give either A or diag, not both".into(),
                    })
                }
                (Some(a), None) => a.clone(),
                (None, Some(d)) => {
                    if d.len() != n {
                        return Err(Error::InvalidParameter {
                            name: "diag".into(),
                            reason: format!("expected {n} entries, got {}", d.len()),
                        });
                    }
                    let mut a = vec![0.0; n * n];
                    for (i, v) in d.iter().enumerate() {
                        a[i * n + i] = *v;
                    }
                    a
                }
                (None, None) => default_ellipsoid_matrix(n),
            };
            builtins::ellipsoid(n, a)?
        }
        "half_norm" => builtins::half_norm(n),
        "linear_x1" => builtins::linear_x1(n),
        "piecewise_ph" => builtins::piecewise_ph(n)?,
        "tanh_exp" => builtins::tanh_exp(n),
        "gauss_si" => builtins::gauss_si(n),
        "saddle_si" => builtins::saddle_si(n),
        "logsq_si" => builtins::logsq_si(n),
        "footnote_1d" => builtins::footnote_1d(n),
        "random_si" => RandomSi::new(
            params.integer("seed", 0)?,
            n,
            params.scalar("eps", 0.3)?,
            params.integer("modes", 4)? as usize,
        )?
        .field(),
        _ => unreachable!("registry and constructor out of sync"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_are_consistent() {
        for e in registry() {
            if e.tags.ph_degree.is_some() {
                assert!(e.tags.is_si, "{}", e.name);
            }
            if e.tags.compact {
                assert!(e.tags.decomposable, "{}", e.name);
            }
        }
    }

    #[test]
    fn every_entry_builds() {
        for e in registry() {
            let f = make_builtin::<f64>(e.name, 3, &Params::new()).unwrap();
            assert_eq!(f.dim(), 3);
            assert_eq!(f.meta().ph_degree, e.tags.ph_degree);
            let _ = make_builtin::<f32>(e.name, 3, &Params::new()).unwrap();
        }
    }

    #[test]
    fn spec_values() {
        let p = Params::new();
        let f = make_builtin::<f64>("piecewise_ph", 2, &p).unwrap();
        assert_eq!(f.evaluate(&[1.0, -1.0]).unwrap(), 0.0);
        assert_eq!(f.evaluate(&[2.0, 3.0]).unwrap(), 2.0);
        let f = make_builtin::<f64>("tanh_exp", 2, &p).unwrap();
        assert!((f.evaluate(&[-1.0, 0.3]).unwrap() - (1.0 + std::f64::consts::E)).abs() < 1e-15);
        let f = make_builtin::<f64>("half_norm", 2, &p).unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0]).unwrap(), 4.0);
        let f = make_builtin::<f64>("sphere", 2, &p).unwrap();
        assert_eq!(f.evaluate(&[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn bad_requests() {
        assert_eq!(
            make_builtin::<f64>("nope", 2, &Params::new()).unwrap_err(),
            Error::UnknownFunction("nope".into())
        );
        assert!(make_builtin::<f64>("piecewise_ph", 1, &Params::new()).is_err());
        let bad = Params::new().with("A", vec![1.0, 2.0, 2.0, 1.0]);
        assert!(make_builtin::<f64>("ellipsoid", 2, &bad).is_err());
        assert!(make_builtin::<f64>("sphere", 2, &Params::new().with("eps", vec![0.1])).is_err());
        assert!(make_builtin::<f64>("random_si", 2, &Params::new().with("eps", vec![1.0])).is_err());
    }

    #[test]
    fn params_parse_assignments() {
        let mut p = Params::new();
        p.insert_assignment("diag=1, 4").unwrap();
        assert_eq!(p.0["diag"], vec![1.0, 4.0]);
        assert!(p.insert_assignment("eps").is_err());
        assert!(p.insert_assignment("eps=x").is_err());
    }
}
