use alloc::vec;
use alloc::vec::Vec;

use super::rng::SampleStream;
use super::IntegrateError;
use crate::qubit::BlochVector;

/// Smallest sample count whose standard errors the checkers trust.
pub const MIN_RELIABLE_SAMPLES: u64 = 100;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_BATCH_SIZE: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    n_samples: u64,
    seed: u64,
    batch_size: u64,
}

impl McConfig {
    pub fn new(n_samples: u64, seed: u64, batch_size: u64) -> Result<Self, IntegrateError> {
        if n_samples == 0 {
            return Err(IntegrateError::Config("n_samples must be positive"));
        }
        if batch_size == 0 {
            return Err(IntegrateError::Config("batch_size must be positive"));
        }
        Ok(Self {
            n_samples,
            seed,
            batch_size,
        })
    }

    pub fn with_samples(n_samples: u64, seed: u64) -> Result<Self, IntegrateError> {
        Self::new(n_samples, seed, DEFAULT_BATCH_SIZE)
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch_size(&self) -> u64 {
        self.batch_size
    }

    /// False when fewer than [`MIN_RELIABLE_SAMPLES`] are drawn.
    pub fn is_reliable(&self) -> bool {
        self.n_samples >= MIN_RELIABLE_SAMPLES
    }

    pub fn n_batches(&self) -> u64 {
        self.n_samples.div_ceil(self.batch_size)
    }

    /// Sample indices `[start, end)` of batch `b`.
    pub fn batch_range(&self, b: u64) -> core::ops::Range<u64> {
        let start = b * self.batch_size;
        start..(start + self.batch_size).min(self.n_samples)
    }

    pub fn reseeded(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: DEFAULT_SAMPLES,
            seed: 42,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

impl McEstimate {
    /// An exactly known value (zero error), e.g. from a support predicate
    /// that cannot fire.
    pub fn exact(mean: f64, n: u64, seed: u64) -> Self {
        Self {
            mean,
            std_error: 0.0,
            n,
            seed,
        }
    }
}

/// Running mean and second central moment of one integrand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    /// Pairwise merge; `self` holds the earlier samples.
    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let frac = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + delta * frac,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * frac,
        }
    }

    pub fn estimate(&self, seed: u64) -> McEstimate {
        let std_error = if self.n > 1 {
            libm::sqrt((self.m2 / (self.n - 1) as f64).max(0.0) / self.n as f64)
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error,
            n: self.n,
            seed,
        }
    }
}

/// Uniform point on S₂: `z ~ U(−1, 1)`, azimuth `~ U(0, 2π)`.
pub fn uniform_sphere_from(stream: &mut SampleStream) -> BlochVector {
    let z = 2.0 * stream.next_open01() - 1.0;
    let phi = core::f64::consts::TAU * stream.next_open01();
    let r = libm::sqrt((1.0 - z * z).max(0.0));
    BlochVector::new_unchecked(r * libm::cos(phi), r * libm::sin(phi), z)
}

/// The `index`-th draw of the uniform stream keyed by `seed`.
pub fn uniform_sphere_sampler(seed: u64, index: u64) -> BlochVector {
    uniform_sphere_from(&mut SampleStream::new(seed, index))
}

/// Moments of `k` integrands over one batch of the schedule. `f` writes the
/// integrand values for one sample into its output slice.
pub fn batch_moments<T, S, F>(
    sampler: &S,
    f: &F,
    k: usize,
    cfg: &McConfig,
    batch: u64,
) -> Result<Vec<Moments>, IntegrateError>
where
    S: Fn(u64, u64) -> T + ?Sized,
    F: Fn(&T, &mut [f64]) + ?Sized,
{
    let mut acc = vec![Moments::default(); k];
    let mut out = vec![0.0; k];
    for index in cfg.batch_range(batch) {
        let sample = sampler(cfg.seed, index);
        f(&sample, &mut out);
        for (m, &v) in acc.iter_mut().zip(&out) {
            if !v.is_finite() {
                return Err(IntegrateError::NonFinite { index });
            }
            m.push(v);
        }
    }
    Ok(acc)
}

/// Folds per-batch moments in batch order.
pub fn combine_batches<I>(k: usize, batches: I) -> Vec<Moments>
where
    I: IntoIterator<Item = Vec<Moments>>,
{
    batches.into_iter().fold(vec![Moments::default(); k], |acc, b| {
        acc.iter().zip(&b).map(|(a, b)| a.merge(b)).collect()
    })
}

/// Estimates `k` expectations from one shared sample stream.
pub fn mc_expectations<T, S, F>(f: &F, k: usize, sampler: &S, cfg: &McConfig) -> Result<Vec<McEstimate>, IntegrateError>
where
    S: Fn(u64, u64) -> T + ?Sized,
    F: Fn(&T, &mut [f64]) + ?Sized,
{
    let batches = (0..cfg.n_batches())
        .map(|b| batch_moments(sampler, f, k, cfg, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(combine_batches(k, batches)
        .iter()
        .map(|m| m.estimate(cfg.seed))
        .collect())
}

/// Estimates `E[f]` under `sampler`.
pub fn mc_expectation<T, S, F>(f: F, sampler: S, cfg: &McConfig) -> Result<McEstimate, IntegrateError>
where
    S: Fn(u64, u64) -> T,
    F: Fn(&T) -> f64,
{
    let wrapped = |t: &T, out: &mut [f64]| out[0] = f(t);
    Ok(mc_expectations(&wrapped, 1, &sampler, cfg)?[0])
}
