//! Monte Carlo over worker threads.
//!
//! Batches are evaluated concurrently and merged in batch order, so the
//! result is bit-identical to the serial estimator in `ontic-core` for any
//! number of threads.

use ontic_core::integrate::{batch_moments, combine_batches, IntegrateError};
use ontic_core::{McConfig, McEstimate};
use rayon::prelude::*;

pub fn par_mc_expectations<T, S, F>(
    f: &F,
    k: usize,
    sampler: &S,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>, IntegrateError>
where
    S: Fn(u64, u64) -> T + Sync + ?Sized,
    F: Fn(&T, &mut [f64]) + Sync + ?Sized,
{
    let batches = (0..cfg.n_batches())
        .into_par_iter()
        .map(|b| batch_moments(sampler, f, k, cfg, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(combine_batches(k, batches)
        .iter()
        .map(|m| m.estimate(cfg.seed()))
        .collect())
}

pub fn par_mc_expectation<T, S, F>(f: F, sampler: S, cfg: &McConfig) -> Result<McEstimate, IntegrateError>
where
    S: Fn(u64, u64) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let wrapped = |t: &T, out: &mut [f64]| out[0] = f(t);
    Ok(par_mc_expectations(&wrapped, 1, &sampler, cfg)?[0])
}
