//! Parallel ensemble driver with a deterministic, index-ordered reduction.
//!
//! Trajectory `r` always draws from `NoiseStream::new(seed, r)`. Workers
//! produce records in batches; records are folded into the accumulators in
//! increasing `r` regardless of completion order, so results are bit-identical
//! for every thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::noise::NoiseStream;
use crate::scalar::Real;
use crate::sde::{simulate_trajectory, DiffusionModel, Functional, LinearSse, SchemeId, TimeGrid, TrajectoryRecord};
use crate::stats::{EnsembleAccumulator, EnsembleEstimate};

/// Fraction of aborted trajectories above which an ensemble run fails.
pub const MAX_ABORT_FRACTION: f64 = 1e-3;

const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub realizations: usize,
    pub seed: u64,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

impl EnsembleConfig {
    pub fn new(realizations: usize, seed: u64) -> Self {
        Self {
            realizations,
            seed,
            threads: 0,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

/// Accumulated statistics of a run, one accumulator per functional.
#[derive(Debug, Clone)]
pub struct EnsembleOutcome<T> {
    pub functionals: Vec<Functional>,
    pub accumulators: Vec<EnsembleAccumulator<T>>,
    /// Cumulative output `B`, when every accepted record carried one.
    pub output: Option<EnsembleAccumulator<T>>,
    /// Failed trajectories, excluded from the statistics.
    pub aborted: Vec<Error>,
    /// Number of accepted trajectories flagged by the model's truncation guard.
    pub truncation_warnings: usize,
    pub total: usize,
}

impl<T: Real> EnsembleOutcome<T> {
    pub fn accepted(&self) -> usize {
        self.total - self.aborted.len()
    }

    /// Fails when more than [`MAX_ABORT_FRACTION`] of the trajectories aborted.
    pub fn check_abort_rate(&self) -> Result<()> {
        if self.aborted.len() as f64 > MAX_ABORT_FRACTION * self.total as f64 {
            Err(Error::AbortRateExceeded {
                aborted: self.aborted.len(),
                total: self.total,
            })
        } else {
            Ok(())
        }
    }

    pub fn accumulator(&self, f: Functional) -> Option<&EnsembleAccumulator<T>> {
        self.functionals
            .iter()
            .position(|&g| g == f)
            .map(|i| &self.accumulators[i])
    }

    pub fn estimate(&self, f: Functional) -> Result<EnsembleEstimate<T>> {
        let acc = if f == Functional::OutputB && !self.functionals.contains(&f) {
            self.output.as_ref()
        } else {
            self.accumulator(f)
        };
        acc.ok_or_else(|| Error::InvalidParameter {
            name: "functional",
            reason: format!("{} was not accumulated", f.name()),
        })?
        .finalize()
    }
}

fn with_pool<R: Send>(threads: usize, job: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Runs `cfg.realizations` independent trajectories produced by `trajectory`
/// and accumulates `functionals` over `grid`.
pub fn run_ensemble<T, F>(
    grid: TimeGrid<T>,
    functionals: &[Functional],
    cfg: EnsembleConfig,
    trajectory: F,
) -> EnsembleOutcome<T>
where
    T: Real,
    F: Fn(&mut NoiseStream) -> Result<TrajectoryRecord<T>> + Sync,
{
    let times = grid.times();
    let mut accumulators: Vec<_> = functionals.iter().map(|_| EnsembleAccumulator::new(times.clone())).collect();
    let mut output = Some(EnsembleAccumulator::new(times.clone()));
    let mut aborted = Vec::new();
    let mut truncation_warnings = 0;

    with_pool(cfg.threads, || {
        let mut start = 0;
        while start < cfg.realizations {
            let end = (start + BATCH).min(cfg.realizations);
            let batch: Vec<Result<TrajectoryRecord<T>>> = (start..end)
                .into_par_iter()
                .map(|r| trajectory(&mut NoiseStream::new(cfg.seed, r as u64)))
                .collect();
            for rec in batch {
                let rec = match rec {
                    Ok(rec) => rec,
                    Err(e) => {
                        aborted.push(e);
                        continue;
                    }
                };
                let mut fold = || -> Result<()> {
                    for (acc, &f) in accumulators.iter_mut().zip(functionals) {
                        acc.add(&rec, f)?;
                    }
                    match (&mut output, &rec.output_path) {
                        (Some(acc), Some(path)) => acc.add_samples(&times, path)?,
                        (o, _) => *o = None,
                    }
                    Ok(())
                };
                match fold() {
                    Ok(()) => truncation_warnings += usize::from(rec.truncation_warning),
                    Err(e) => aborted.push(e),
                }
            }
            start = end;
        }
    });

    EnsembleOutcome {
        functionals: functionals.to_vec(),
        accumulators,
        output,
        aborted,
        truncation_warnings,
        total: cfg.realizations,
    }
}

/// Ensemble of the nonlinear equation for `model`.
pub fn simulate_ensemble<T: Real, M: DiffusionModel<T> + ?Sized>(
    model: &M,
    scheme: SchemeId,
    psi0: &StateVector<T>,
    grid: TimeGrid<T>,
    functionals: &[Functional],
    cfg: EnsembleConfig,
) -> Result<EnsembleOutcome<T>> {
    for f in functionals {
        f.check(model)?;
    }
    Ok(run_ensemble(grid, functionals, cfg, |stream| {
        simulate_trajectory(model, scheme, psi0, grid, stream, functionals)
    }))
}

/// Ensemble of the linear equation under the reference measure.
pub fn simulate_linear_ensemble<T: Real>(
    sse: &LinearSse<T>,
    phi0: &StateVector<T>,
    grid: TimeGrid<T>,
    functionals: &[Functional],
    cfg: EnsembleConfig,
) -> Result<EnsembleOutcome<T>> {
    Ok(run_ensemble(grid, functionals, cfg, |stream| sse.simulate(phi0, grid, stream, functionals)))
}
