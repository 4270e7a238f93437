//! Simulation of diffusive stochastic Schrödinger equations.
//!
//! The crate integrates quantum trajectories of open systems (Euler with
//! renormalization, Platen's weak second-order scheme), drives them with
//! reproducible Wiener and Ornstein-Uhlenbeck noise, averages them with
//! streaming estimators, and provides deterministic reference solutions
//! (closed forms, Lindblad integration, memory-kernel Bloch equations) to
//! compare against.
//!
//! All numerics are generic over [`Real`]; the aliases below fix `f64`.

pub mod ensemble;
pub mod error;
pub mod hilbert;
pub mod models;
pub mod noise;
pub mod reference;
pub mod scalar;
pub mod sde;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

pub use ensemble::{run_ensemble, simulate_ensemble, simulate_linear_ensemble, EnsembleConfig};
pub use models::LoPhase;
pub use noise::NoiseStream;
pub use sde::{euler_step, linear_euler_step, platen_step, simulate_trajectory, DiffusionModel, Functional, SchemeId};

pub type Complex64 = num_complex::Complex<f64>;
pub type StateVector = hilbert::StateVector<f64>;
pub type LinearOperator = hilbert::LinearOperator<f64>;
pub type DensityMatrix = hilbert::DensityMatrix<f64>;
pub type WienerIncrements = noise::WienerIncrements<f64>;
pub type OUState = noise::OUState<f64>;
pub type TimeGrid = sde::TimeGrid<f64>;
pub type TrajectoryRecord = sde::TrajectoryRecord<f64>;
pub type LinearSse = sde::LinearSse<f64>;
pub type LinearModel = sde::LinearModel<f64>;
pub type HomodyneParams = models::HomodyneParams<f64>;
pub type HomodyneQubit = models::HomodyneQubit<f64>;
pub type OscillatorParams = models::OscillatorParams<f64>;
pub type DampedOscillator = models::DampedOscillator<f64>;
pub type OuQubitParams = models::OuQubitParams<f64>;
pub type OuQubit = models::OuQubit<f64>;
pub type HomodyneSolution = reference::HomodyneSolution<f64>;
pub type BlochOdeState = reference::BlochOdeState<f64>;
pub type BlochPath = reference::BlochPath<f64>;
pub type EnsembleAccumulator = stats::EnsembleAccumulator<f64>;
pub type EnsembleEstimate = stats::EnsembleEstimate<f64>;
pub type EnsembleOutcome = ensemble::EnsembleOutcome<f64>;
