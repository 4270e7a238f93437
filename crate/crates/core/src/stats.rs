//! Sample mean and standard error over independent realizations.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sde::{Functional, TrajectoryRecord};

/// Streaming per-grid-point mean and centred second moment (Welford updates).
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAccumulator<T> {
    times: Vec<T>,
    count: usize,
    mean: Vec<T>,
    m2: Vec<T>,
}

/// Finalized estimate on the accumulator grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate<T> {
    pub times: Vec<T>,
    pub mean: Vec<T>,
    /// Sample standard error `σ̂ = √(Σ(F − M̂)² / (R(R−1)))`.
    pub stderr: Vec<T>,
    pub count: usize,
}

impl<T: Real> EnsembleAccumulator<T> {
    pub fn new(times: Vec<T>) -> Self {
        let n = times.len();
        Self {
            times,
            count: 0,
            mean: vec![T::zero(); n],
            m2: vec![T::zero(); n],
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    /// Adds one realization sampled on `times`.
    pub fn add_samples(&mut self, times: &[T], values: &[T]) -> Result<()> {
        if times != self.times.as_slice() {
            return Err(Error::GridMismatch(format!(
                "{} record points vs {} accumulator points",
                times.len(),
                self.times.len()
            )));
        }
        if values.len() != self.times.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} grid points",
                values.len(),
                self.times.len()
            )));
        }
        self.count += 1;
        let r = T::of_usize(self.count);
        for ((mean, m2), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(values) {
            let delta = x - *mean;
            *mean += delta / r;
            *m2 += delta * (x - *mean);
        }
        Ok(())
    }

    /// Adds functional `f` of a trajectory record.
    pub fn add(&mut self, record: &TrajectoryRecord<T>, f: Functional) -> Result<()> {
        let values = record
            .series(f)
            .ok_or_else(|| Error::GridMismatch(format!("record does not carry {}", f.name())))?;
        self.add_samples(&record.times(), values)
    }

    /// Combines two accumulators on the same grid (Chan et al. pairwise update).
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.times != other.times {
            return Err(Error::GridMismatch("accumulators on different grids".into()));
        }
        if other.count == 0 {
            return Ok(());
        }
        if self.count == 0 {
            *self = other.clone();
            return Ok(());
        }
        let na = T::of_usize(self.count);
        let nb = T::of_usize(other.count);
        let n = na + nb;
        for i in 0..self.times.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.count += other.count;
        Ok(())
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    /// `σ̂² = Σ(F − M̂)² / (R(R−1))` at each grid point.
    pub fn variance_of_mean(&self) -> Result<Vec<T>> {
        if self.count < 2 {
            return Err(Error::InsufficientSamples(self.count));
        }
        let r = T::of_usize(self.count);
        let scale = r * (r - T::one());
        Ok(self.m2.iter().map(|&m| (m / scale).max(T::zero())).collect())
    }

    pub fn finalize(&self) -> Result<EnsembleEstimate<T>> {
        let var = self.variance_of_mean()?;
        Ok(EnsembleEstimate {
            times: self.times.clone(),
            mean: self.mean.clone(),
            stderr: var.into_iter().map(|v| v.sqrt()).collect(),
            count: self.count,
        })
    }
}

impl<T: Real> EnsembleEstimate<T> {
    /// Index of the grid point closest to `t`.
    pub fn index_of(&self, t: T) -> usize {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (*a.1 - t)
                    .abs()
                    .partial_cmp(&(*b.1 - t).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}
