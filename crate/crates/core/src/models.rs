//! The three concrete systems: a resonantly driven two-level atom under
//! homodyne detection, the damped harmonic oscillator, and a dissipative qubit
//! driven by Ornstein-Uhlenbeck coloured noise.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{LinearOperator, StateVector};
use crate::noise::{NoiseStream, OUState};
use crate::scalar::Real;
use crate::sde::{DiffusionModel, LinearSse};

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

fn finite<T: Real>(name: &'static str, x: T) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(name, format!("must be finite, got {x}")))
    }
}

/// Phase of the local oscillator relative to the emitted field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LoPhase {
    /// `θ = π/2`: the detector measures `σ_y`.
    #[default]
    HalfPi,
    /// `θ = 0`: the detector measures `σ_x`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneParams<T> {
    /// Rabi frequency `Ω_R`.
    pub omega_r: T,
    /// Natural linewidth `γ`.
    pub gamma: T,
    pub theta: LoPhase,
}

impl<T: Real> HomodyneParams<T> {
    pub fn validate(&self) -> Result<()> {
        let omega_r = finite("omega_r", self.omega_r)?;
        let gamma = finite("gamma", self.gamma)?;
        if omega_r < T::zero() {
            return Err(invalid("omega_r", format!("must be ≥ 0, got {omega_r}")));
        }
        if gamma <= T::zero() {
            return Err(invalid("gamma", format!("must be > 0, got {gamma}")));
        }
        Ok(())
    }
}

impl Default for HomodyneParams<f64> {
    fn default() -> Self {
        Self {
            omega_r: 1.0,
            gamma: 1.0,
            theta: LoPhase::HalfPi,
        }
    }
}

/// Two-level atom under homodyne detection, in the frame rotating with the laser.
///
/// With `m = ⟨ψ|Mψ⟩` (`M = σ_y` for `θ = π/2`, `σ_x` for `θ = 0`) and `c = i`
/// resp. `1`:
///
/// ```text
/// D₁(ψ) = −iH_Lψ + (γ/2)(m·c·σ₋ − σ₊σ₋ − m²/4)ψ,   H_L = −(Ω_R/2)σ_x
/// D₂(ψ) = √γ (c·σ₋ − m/2)ψ
/// ```
///
/// and the output signal is `√γ·m`.
#[derive(Debug, Clone)]
pub struct HomodyneQubit<T> {
    params: HomodyneParams<T>,
    h_l: LinearOperator<T>,
    measured: LinearOperator<T>,
    lowering: LinearOperator<T>,
    coupling: Complex<T>,
}

impl<T: Real> HomodyneQubit<T> {
    pub fn new(params: HomodyneParams<T>) -> Result<Self> {
        params.validate()?;
        let h_l = LinearOperator::sigma_x().scale_real(-params.omega_r / T::lit(2.0));
        let (measured, coupling) = match params.theta {
            LoPhase::HalfPi => (LinearOperator::sigma_y(), Complex::new(T::zero(), T::one())),
            LoPhase::Zero => (LinearOperator::sigma_x(), Complex::new(T::one(), T::zero())),
        };
        Ok(Self {
            params,
            h_l,
            measured,
            lowering: LinearOperator::sigma_minus(),
            coupling,
        })
    }

    pub fn params(&self) -> &HomodyneParams<T> {
        &self.params
    }

    /// Ground state `|0⟩` (basis index 1).
    pub fn ground_state(&self) -> StateVector<T> {
        StateVector::basis(2, 1).expect("2-dim basis")
    }

    /// `⟨ψ|Mψ⟩` for the measured quadrature.
    pub fn measured_quadrature(&self, psi: &StateVector<T>) -> T {
        self.measured.expectation(psi).expect("qubit state").re
    }

    /// Linear equation whose normalized solution obeys this model.
    pub fn linear_sse(&self) -> LinearSse<T> {
        let r = self.lowering.scale(self.coupling * self.params.gamma.sqrt());
        LinearSse::new(self.h_l.clone(), vec![r]).expect("H_L is Hermitian")
    }

    /// Lindblad data `(H, [L])` of the averaged dynamics.
    pub fn lindblad_operators(&self) -> (LinearOperator<T>, Vec<LinearOperator<T>>) {
        let r = self.lowering.scale(self.coupling * self.params.gamma.sqrt());
        (self.h_l.clone(), vec![r])
    }
}

impl<T: Real> DiffusionModel<T> for HomodyneQubit<T> {
    fn dim(&self) -> usize {
        2
    }

    fn drift(&self, _t: T, psi: &StateVector<T>, _aux: &[T]) -> StateVector<T> {
        let gamma = self.params.gamma;
        let half_gamma = gamma / T::lit(2.0);
        let m = self.measured_quadrature(psi);
        let a = psi.amplitudes();
        let mut out = self.h_l.apply(psi).expect("qubit state").scaled(Complex::new(T::zero(), -T::one()));
        let o = out.amplitudes_mut();
        // σ₋ψ = (0, ψ₀); σ₊σ₋ψ = (ψ₀, 0)
        o[1] += self.coupling * a[0] * (half_gamma * m);
        o[0] -= a[0] * half_gamma;
        let shrink = half_gamma * m * m / T::lit(4.0);
        o[0] -= a[0] * shrink;
        o[1] -= a[1] * shrink;
        out
    }

    fn diffusion(&self, _t: T, psi: &StateVector<T>, _aux: &[T], _channel: usize) -> StateVector<T> {
        let sg = self.params.gamma.sqrt();
        let m = self.measured_quadrature(psi);
        let a = psi.amplitudes();
        let half_m = m / T::lit(2.0);
        StateVector::new(vec![
            -a[0] * (sg * half_m),
            (self.coupling * a[0] - a[1] * half_m) * sg,
        ])
        .expect("2-dim")
    }

    fn output_signal(&self, psi: &StateVector<T>) -> Option<T> {
        Some(self.params.gamma.sqrt() * self.measured_quadrature(psi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub gamma: T,
    /// Fock space truncation level.
    pub n_max: usize,
    /// Initial Fock level.
    pub n0: usize,
}

impl<T: Real> OscillatorParams<T> {
    pub fn validate(&self) -> Result<()> {
        let gamma = finite("gamma", self.gamma)?;
        if gamma <= T::zero() {
            return Err(invalid("gamma", format!("must be > 0, got {gamma}")));
        }
        if self.n_max < 1 {
            return Err(invalid("n_max", "must be ≥ 1".into()));
        }
        if self.n0 > self.n_max {
            return Err(invalid("n0", format!("{} exceeds n_max = {}", self.n0, self.n_max)));
        }
        Ok(())
    }
}

impl Default for OscillatorParams<f64> {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            n_max: 12,
            n0: 9,
        }
    }
}

/// Population of the top Fock level above which a trajectory is flagged.
pub const TRUNCATION_WARNING_LEVEL: f64 = 1e-6;

/// Damped harmonic oscillator with `x = ⟨ψ|(a + a†)ψ⟩`:
///
/// ```text
/// D₁(ψ) = (γ/2)(x·a − a†a − x²/4)ψ
/// D₂(ψ) = √γ (a − x/2)ψ
/// ```
#[derive(Debug, Clone)]
pub struct DampedOscillator<T> {
    params: OscillatorParams<T>,
    annihilation: LinearOperator<T>,
}

impl<T: Real> DampedOscillator<T> {
    pub fn new(params: OscillatorParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            annihilation: LinearOperator::annihilation(params.n_max),
        })
    }

    pub fn params(&self) -> &OscillatorParams<T> {
        &self.params
    }

    /// Fock state `|n0⟩`.
    pub fn initial_state(&self) -> StateVector<T> {
        StateVector::basis(self.params.n_max + 1, self.params.n0).expect("n0 ≤ n_max")
    }

    /// `⟨ψ|(a + a†)ψ⟩ = 2 Re⟨ψ|aψ⟩`.
    pub fn quadrature(&self, psi: &StateVector<T>, a_psi: &StateVector<T>) -> T {
        T::lit(2.0) * psi.inner(a_psi).expect("same dim").re
    }

    pub fn linear_sse(&self) -> LinearSse<T> {
        let r = self.annihilation.scale_real(self.params.gamma.sqrt());
        LinearSse::new(LinearOperator::zeros(self.params.n_max + 1), vec![r]).expect("zero Hamiltonian")
    }

    pub fn lindblad_operators(&self) -> (LinearOperator<T>, Vec<LinearOperator<T>>) {
        let r = self.annihilation.scale_real(self.params.gamma.sqrt());
        (LinearOperator::zeros(self.params.n_max + 1), vec![r])
    }
}

impl<T: Real> DiffusionModel<T> for DampedOscillator<T> {
    fn dim(&self) -> usize {
        self.params.n_max + 1
    }

    fn drift(&self, _t: T, psi: &StateVector<T>, _aux: &[T]) -> StateVector<T> {
        let half_gamma = self.params.gamma / T::lit(2.0);
        let a_psi = self.annihilation.apply(psi).expect("dim checked by stepper");
        let x = self.quadrature(psi, &a_psi);
        let shift = x * x / T::lit(4.0);
        let mut out = a_psi.scaled(Complex::new(half_gamma * x, T::zero()));
        for (n, (o, a)) in out.amplitudes_mut().iter_mut().zip(psi.amplitudes()).enumerate() {
            *o -= a * (half_gamma * (T::of_usize(n) + shift));
        }
        out
    }

    fn diffusion(&self, _t: T, psi: &StateVector<T>, _aux: &[T], _channel: usize) -> StateVector<T> {
        let sg = self.params.gamma.sqrt();
        let mut out = self.annihilation.apply(psi).expect("dim checked by stepper");
        let x = self.quadrature(psi, &out);
        out.axpy_real(-x / T::lit(2.0), psi);
        out.scaled(Complex::new(sg, T::zero()))
    }

    fn truncation_warning(&self, psi: &StateVector<T>) -> bool {
        psi.population(self.params.n_max) > T::lit(TRUNCATION_WARNING_LEVEL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuQubitParams<T> {
    /// Level splitting `ω₀`.
    pub omega0: T,
    pub gamma: T,
    /// Inverse correlation time of the O-U noise.
    pub k: T,
}

impl<T: Real> OuQubitParams<T> {
    pub fn validate(&self) -> Result<()> {
        let omega0 = finite("omega0", self.omega0)?;
        let gamma = finite("gamma", self.gamma)?;
        let k = finite("k", self.k)?;
        if gamma <= T::zero() {
            return Err(invalid("gamma", format!("must be > 0, got {gamma}")));
        }
        if k <= T::zero() {
            return Err(invalid("k", format!("the stochastic simulation needs k > 0, got {k}")));
        }
        if omega0 <= gamma / T::lit(2.0) {
            return Err(invalid(
                "omega0",
                format!("must exceed gamma/2 = {}, got {omega0}", gamma / T::lit(2.0)),
            ));
        }
        Ok(())
    }

    /// `ν = √(ω₀² − γ²/4)`.
    pub fn nu(&self) -> T {
        (self.omega0 * self.omega0 - self.gamma * self.gamma / T::lit(4.0)).sqrt()
    }
}

impl Default for OuQubitParams<f64> {
    fn default() -> Self {
        Self {
            omega0: 37f64.sqrt() / 2.0,
            gamma: 1.0,
            k: 1.0,
        }
    }
}

/// Qubit with `H₀ = (ω₀/2)σ_z` and `L = √(γ/2)σ_y` driven by O-U noise `X`:
///
/// ```text
/// dψ = −i[(H₀ − kX L)dt + L dW]ψ − ½L²ψ dt,   dX = −kX dt + dW
/// ```
///
/// The auxiliary state is `X`; both equations share the same `dW`.
#[derive(Debug, Clone)]
pub struct OuQubit<T> {
    params: OuQubitParams<T>,
    /// `C = −iH₀ − ½L²` (diagonal).
    free: [Complex<T>; 2],
    /// `√(γ/2)`; `D = −iL` maps `(ψ₁, ψ₂) ↦ √(γ/2)(−ψ₂, ψ₁)`.
    coupling: T,
}

impl<T: Real> OuQubit<T> {
    pub fn new(params: OuQubitParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self::from_params_unchecked(params))
    }

    pub(crate) fn from_params_unchecked(params: OuQubitParams<T>) -> Self {
        let half = T::lit(0.5);
        let damp = -half * params.gamma / T::lit(2.0);
        let rot = half * params.omega0;
        Self {
            params,
            free: [Complex::new(damp, -rot), Complex::new(damp, rot)],
            coupling: (params.gamma / T::lit(2.0)).sqrt(),
        }
    }

    pub fn params(&self) -> &OuQubitParams<T> {
        &self.params
    }

    /// Excited state `|1⟩` (basis index 0).
    pub fn initial_state(&self) -> StateVector<T> {
        StateVector::basis(2, 0).expect("2-dim basis")
    }

    fn noise_operator(&self, psi: &StateVector<T>) -> StateVector<T> {
        let a = psi.amplitudes();
        StateVector::new(vec![-a[1] * self.coupling, a[0] * self.coupling]).expect("2-dim")
    }

    /// Mean-field generator `(H₀, [L])`, whose Lindblad form `−i[H₀,ρ] − ½[L,[L,ρ]]` is the `k = 0` limit.
    pub fn lindblad_operators(&self) -> (LinearOperator<T>, Vec<LinearOperator<T>>) {
        let h0 = LinearOperator::sigma_z().scale_real(self.params.omega0 / T::lit(2.0));
        let l = LinearOperator::sigma_y().scale_real(self.coupling);
        (h0, vec![l])
    }
}

impl<T: Real> DiffusionModel<T> for OuQubit<T> {
    fn dim(&self) -> usize {
        2
    }

    fn aux_dim(&self) -> usize {
        1
    }

    fn drift(&self, _t: T, psi: &StateVector<T>, aux: &[T]) -> StateVector<T> {
        let a = psi.amplitudes();
        let mut out = self.noise_operator(psi).scaled(Complex::new(-self.params.k * aux[0], T::zero()));
        let o = out.amplitudes_mut();
        o[0] += self.free[0] * a[0];
        o[1] += self.free[1] * a[1];
        out
    }

    fn diffusion(&self, _t: T, psi: &StateVector<T>, _aux: &[T], _channel: usize) -> StateVector<T> {
        self.noise_operator(psi)
    }

    fn aux_drift(&self, _t: T, aux: &[T]) -> Vec<T> {
        vec![-self.params.k * aux[0]]
    }

    fn aux_diffusion(&self, _t: T, _aux: &[T], _channel: usize) -> Vec<T> {
        vec![T::one()]
    }

    fn init_aux(&self, stream: &mut NoiseStream) -> Result<Vec<T>> {
        Ok(vec![OUState::init(self.params.k, stream)?.value()])
    }
}
