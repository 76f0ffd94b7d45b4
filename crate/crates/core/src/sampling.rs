//! Seeded sampling plans and chunk-parallel sweeps.
//!
//! Work is split into fixed-size chunks; chunk `k` draws from a ChaCha
//! stream seeded with the plan seed and stream id `k`, so results do not
//! depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, normalized, Real};

pub const CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingPlan {
    pub seed: u64,
    /// Number of samples (triples, points or pairs depending on the probe).
    pub samples: usize,
    /// Half-width of the coordinate box `[-R, R]ⁿ`.
    pub box_radius: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// Strictly increasing ray abscissae in `(0, T]`.
    pub grid: Vec<f64>,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            box_radius: 2.0,
            rho_min: 1e-2,
            rho_max: 1e2,
            grid: geometric_grid(0.02, 20.0, 64),
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_box_radius(mut self, r: f64) -> Self {
        self.box_radius = r;
        self
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, reason: &str| {
            Err(Error::InvalidParameter {
                name: name.into(),
                reason: reason.into(),
            })
        };
        if self.samples == 0 {
            return bad("samples", "must be at least 1");
        }
        if !(self.box_radius > 0.0 && self.box_radius.is_finite()) {
            return bad("box_radius", "must be positive and finite");
        }
        if !(self.rho_min > 0.0 && self.rho_min < self.rho_max && self.rho_max.is_finite()) {
            return bad("rho", "need 0 < rho_min < rho_max < inf");
        }
        validate_grid(&self.grid)
    }

    /// Largest grid abscissa `T`.
    pub fn grid_span(&self) -> f64 {
        self.grid.last().copied().unwrap_or(0.0)
    }
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let err = |reason: &str| {
        Err(Error::InvalidParameter {
            name: "grid".into(),
            reason: reason.into(),
        })
    };
    if grid.len() < 3 {
        return err("needs at least 3 points");
    }
    if !(grid[0] > 0.0) || grid.iter().any(|t| !t.is_finite()) {
        return err("points must be positive and finite");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return err("must be strictly increasing");
    }
    Ok(())
}

/// `k` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    assert!(k >= 2 && lo > 0.0 && hi > lo);
    let r = (hi / lo).ln() / (k - 1) as f64;
    (0..k)
        .map(|i| if i + 1 == k { hi } else { lo * (r * i as f64).exp() })
        .collect()
}

/// RNG for chunk `chunk` of a sweep seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub fn uniform_box<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<T> {
    (0..n)
        .map(|_| lit(rng.random_range(-radius..=radius)))
        .collect()
}

/// Uniform point on the unit sphere `S^{n-1}` (normalized Gaussian).
pub fn sphere_point<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    loop {
        let g: Vec<T> = (0..n)
            .map(|_| lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        if let Some(u) = normalized(&g) {
            return u;
        }
    }
}

/// Log-uniform draw on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// Runs `work(chunk_index, item_range, rng)` over `items` split into chunks
/// of [`CHUNK`], in parallel, returning the per-chunk outputs in chunk order.
pub fn par_chunks<O, F>(items: usize, seed: u64, work: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize, std::ops::Range<usize>, &mut ChaCha8Rng) -> O + Sync,
{
    let chunks = items.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let start = c * CHUNK;
            work(c, start..(start + CHUNK).min(items), &mut rng)
        })
        .collect()
}

/// Seeded list of unit directions: `±e_i` for every axis, then `extra`
/// uniform sphere points.
pub fn default_directions<T: Real>(n: usize, extra: usize, seed: u64) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(2 * n + extra);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![T::zero(); n];
            e[i] = lit(s);
            out.push(e);
        }
    }
    let mut rng = chunk_rng(seed, u64::MAX);
    out.extend((0..extra).map(|_| sphere_point(&mut rng, n)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::norm;

    #[test]
    fn default_plan_is_valid() {
        let p = SamplingPlan::default();
        p.validate().unwrap();
        assert_eq!(p.grid.len(), 64);
        assert_eq!(p.grid_span(), 20.0);
        assert!((p.grid[0] - 0.02).abs() < 1e-15);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        assert!(SamplingPlan::default().with_samples(0).validate().is_err());
        assert!(SamplingPlan::default()
            .with_grid(vec![1.0, 0.5, 2.0])
            .validate()
            .is_err());
        assert!(SamplingPlan::default().with_grid(vec![0.1, 0.2]).validate().is_err());
    }

    #[test]
    fn chunk_streams_are_reproducible_and_distinct() {
        let a: f64 = chunk_rng(5, 0).random();
        let b: f64 = chunk_rng(5, 0).random();
        let c: f64 = chunk_rng(5, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sphere_points_are_unit() {
        let mut rng = chunk_rng(1, 0);
        for _ in 0..100 {
            let u: Vec<f64> = sphere_point(&mut rng, 7);
            assert!((norm(&u) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn par_chunks_is_independent_of_thread_count() {
        let run = || {
            par_chunks(5000, 9, |_, r, rng| r.map(|_| rng.random::<u32>()).collect::<Vec<_>>())
                .concat()
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
        assert_eq!(one.len(), 5000);
        assert_eq!(one, four);
    }

    #[test]
    fn directions_cover_axes() {
        let d: Vec<Vec<f64>> = default_directions(3, 6, 0);
        assert_eq!(d.len(), 12);
        assert_eq!(d[1], vec![-1.0, 0.0, 0.0]);
    }
}
