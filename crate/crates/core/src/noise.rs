//! Reproducible random streams, Wiener increments and the Ornstein-Uhlenbeck process.
//!
//! Every trajectory owns one [`NoiseStream`] identified by `(master_seed,
//! stream_index)`. The generator is ChaCha8 seeded from `master_seed`, with
//! `stream_index` selecting the ChaCha stream (nonce), so substreams are
//! disjoint keystreams of the same key and a trajectory's variates do not
//! depend on which worker runs it.
//!
//! Uniforms take the top 53 bits of one `u64` output. Normals use the polar
//! Box-Muller method: draw `u = 2U₁ − 1`, then `v = 2U₂ − 1`, reject unless
//! `0 < u² + v² < 1`, return `u·f` and cache `v·f` for the next call.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single-owner pseudo-random stream.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NoiseStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
            spare: None,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform variate in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate.
    pub fn standard_normal<T: Real>(&mut self) -> T {
        T::lit(self.standard_normal_f64())
    }

    fn standard_normal_f64(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    /// `n_steps` increments `Z·√dt`.
    pub fn wiener_increments<T: Real>(&mut self, n_steps: usize, dt: T) -> Result<WienerIncrements<T>> {
        check_dt(dt)?;
        let sq = dt.sqrt();
        let values = (0..n_steps).map(|_| self.standard_normal::<T>() * sq).collect();
        Ok(WienerIncrements { dt, values })
    }

    /// One Wiener increment over `dt`. The caller guarantees `dt > 0`.
    #[inline]
    pub fn wiener_increment<T: Real>(&mut self, dt: T) -> T {
        self.standard_normal::<T>() * dt.sqrt()
    }
}

fn check_dt<T: Real>(dt: T) -> Result<()> {
    if dt > T::zero() && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("time step must be positive and finite, got {dt}"),
        })
    }
}

/// Increments `ΔW_n = W(t_{n+1}) − W(t_n)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerIncrements<T> {
    pub dt: T,
    pub values: Vec<T>,
}

impl<T: Real> WienerIncrements<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Path `W(t_n)` for `n = 0..=len`, starting at 0.
    pub fn path(&self) -> Vec<T> {
        let mut w = T::zero();
        let mut out = Vec::with_capacity(self.values.len() + 1);
        out.push(w);
        for &dw in &self.values {
            w += dw;
            out.push(w);
        }
        out
    }

    /// Sums consecutive groups of `factor` increments, giving the same path on a grid `factor·dt`.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.values.len().is_multiple_of(factor) {
            return Err(Error::InvalidParameter {
                name: "factor",
                reason: format!("{factor} does not divide {} increments", self.values.len()),
            });
        }
        Ok(Self {
            dt: self.dt * T::of_usize(factor),
            values: self.values.chunks(factor).map(|c| c.iter().copied().sum()).collect(),
        })
    }
}

/// Stationary Ornstein-Uhlenbeck process `dX = −kX dt + dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUState<T> {
    k: T,
    x: T,
}

impl<T: Real> OUState<T> {
    /// Draws `X(0) = Z/√(2k)` from the stationary law.
    pub fn init(k: T, stream: &mut NoiseStream) -> Result<Self> {
        let x = stream.standard_normal::<T>();
        Self::with_value(k, x / (T::lit(2.0) * k).sqrt())
    }

    pub fn with_value(k: T, x: T) -> Result<Self> {
        if !(k > T::zero() && k.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("O-U rate must be positive, got {k}"),
            });
        }
        Ok(Self { k, x })
    }

    #[inline]
    pub fn k(&self) -> T {
        self.k
    }

    #[inline]
    pub fn value(&self) -> T {
        self.x
    }

    /// Euler step `x' = x − k·x·dt + dW`.
    #[inline]
    pub fn step(self, dt: T, dw: T) -> Self {
        debug_assert!(dt > T::zero());
        Self {
            k: self.k,
            x: self.x - self.k * self.x * dt + dw,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn replay_is_bit_identical() {
        let mut a = NoiseStream::new(42, 0);
        let mut b = NoiseStream::new(42, 0);
        let pa: (f64, f64) = (a.standard_normal(), a.standard_normal());
        let pb: (f64, f64) = (b.standard_normal(), b.standard_normal());
        assert_eq!(pa.0.to_bits(), pb.0.to_bits());
        assert_eq!(pa.1.to_bits(), pb.1.to_bits());
        let mut c = NoiseStream::new(42, 1);
        assert_ne!(pa.0, c.standard_normal::<f64>());
    }

    #[test]
    fn normal_moments() {
        let mut s = NoiseStream::new(7, 3);
        let xs: Vec<f64> = (0..1_000_000).map(|_| s.standard_normal()).collect();
        let (m, v) = moments(&xs);
        assert!(m.abs() < 4.0 / 1000.0, "mean {m}");
        assert!((v - 1.0).abs() < 0.01, "variance {v}");
    }

    #[test]
    fn substreams_are_uncorrelated() {
        let n = 100_000;
        let mut a = NoiseStream::new(11, 0);
        let mut b = NoiseStream::new(11, 1);
        let xs: Vec<f64> = (0..n).map(|_| a.standard_normal()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.standard_normal()).collect();
        let (mx, vx) = moments(&xs);
        let (my, vy) = moments(&ys);
        let cov = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / (n as f64 - 1.0);
        let corr = cov / (vx * vy).sqrt();
        assert!(corr.abs() <= 4.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn wiener_increment_examples() {
        let mut s = NoiseStream::new(1, 0);
        assert!(s.wiener_increments::<f64>(0, 0.1).unwrap().is_empty());
        assert!(s.wiener_increments::<f64>(3, 0.0).is_err());
        assert!(s.wiener_increments::<f64>(3, -1.0).is_err());

        let inc = s.wiener_increments::<f64>(100_000, 0.01).unwrap();
        let (_, v) = moments(&inc.values);
        assert!((v - 0.01).abs() < 0.05 * 0.01, "variance {v}");
    }

    #[test]
    fn wiener_covariance_is_min_t_s() {
        // Cov[W(t)W(s)] = min(t, s) at t = 0.3, s = 0.8
        let dt = 0.01;
        let (i_t, i_s) = (30, 80);
        let mut prod = 0.0;
        let mut var_s = 0.0;
        let n = 10_000;
        for r in 0..n {
            let mut st = NoiseStream::new(5, r);
            let path = st.wiener_increments::<f64>(80, dt).unwrap().path();
            prod += path[i_t] * path[i_s];
            var_s += path[i_s] * path[i_s];
        }
        let cov = prod / n as f64;
        assert!((cov - 0.3).abs() < 0.05 * 0.3, "cov {cov}");
        assert!((var_s / n as f64 - 0.8).abs() < 0.05 * 0.8);
    }

    #[test]
    fn coarsen_preserves_path() {
        let mut s = NoiseStream::new(9, 0);
        let fine = s.wiener_increments::<f64>(100, 0.001).unwrap();
        let coarse = fine.coarsen(10).unwrap();
        assert_eq!(coarse.len(), 10);
        assert!((coarse.dt - 0.01).abs() < 1e-15);
        let (pf, pc) = (fine.path(), coarse.path());
        for (j, w) in pc.iter().enumerate() {
            assert!((w - pf[10 * j]).abs() < 1e-12);
        }
        assert!(fine.coarsen(7).is_err());
    }

    #[test]
    fn ou_init_examples() {
        let mut a = NoiseStream::new(3, 0);
        let mut b = NoiseStream::new(3, 0);
        let z: f64 = b.standard_normal();
        assert_eq!(OUState::init(0.5, &mut a).unwrap().value(), z);
        assert!(OUState::<f64>::init(0.0, &mut a).is_err());
        assert!(OUState::<f64>::init(-1.0, &mut a).is_err());

        let xs: Vec<f64> = (0..100_000)
            .map(|r| OUState::init(2.0, &mut NoiseStream::new(17, r)).unwrap().value())
            .collect();
        let (_, v) = moments(&xs);
        assert!((v - 0.25).abs() < 0.05 * 0.25, "variance {v}");
    }

    #[test]
    fn ou_step_examples() {
        let x = OUState::<f64>::with_value(1.0, 0.0).unwrap().step(0.01, 0.0);
        assert_eq!(x.value(), 0.0);
        let x = OUState::<f64>::with_value(1.0, 1.0).unwrap().step(0.01, 0.0);
        assert!((x.value() - 0.99).abs() < 1e-15);
    }
}
