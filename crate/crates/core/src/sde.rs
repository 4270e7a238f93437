//! Diffusive SDE integrators for Hilbert-space states.
//!
//! A model supplies the drift `D₁(t, ψ, aux)` and diffusion `D₂ʲ(t, ψ, aux)`
//! of an Itô equation `dψ = D₁ dt + Σⱼ D₂ʲ dWⱼ`, plus optional real auxiliary
//! states advanced by their own Euler step on the same Wiener increments.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{LinearOperator, StateVector};
use crate::noise::NoiseStream;
use crate::scalar::Real;

/// Coefficients of a diffusive SDE on a finite Hilbert space.
pub trait DiffusionModel<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    /// Number of independent Wiener channels.
    fn n_channels(&self) -> usize {
        1
    }

    /// Number of auxiliary real states carried alongside `ψ`.
    fn aux_dim(&self) -> usize {
        0
    }

    fn drift(&self, t: T, psi: &StateVector<T>, aux: &[T]) -> StateVector<T>;

    fn diffusion(&self, t: T, psi: &StateVector<T>, aux: &[T], channel: usize) -> StateVector<T>;

    /// `dt` coefficient of each auxiliary state.
    fn aux_drift(&self, _t: T, _aux: &[T]) -> Vec<T> {
        Vec::new()
    }

    /// `dWⱼ` coefficient of each auxiliary state.
    fn aux_diffusion(&self, _t: T, _aux: &[T], _channel: usize) -> Vec<T> {
        Vec::new()
    }

    /// Initial auxiliary state; may consume variates from the trajectory's stream.
    fn init_aux(&self, _stream: &mut NoiseStream) -> Result<Vec<T>> {
        Ok(Vec::new())
    }

    /// Measurement signal `m(ψ)` entering the output `dB = dW + m dt`.
    fn output_signal(&self, _psi: &StateVector<T>) -> Option<T> {
        None
    }

    /// True when `ψ` has leaked into a truncation boundary of the model.
    fn truncation_warning(&self, _psi: &StateVector<T>) -> bool {
        false
    }
}

/// Model with state-independent linear coefficients `D₁ = Aψ`, `D₂ʲ = Bⱼψ`.
#[derive(Debug, Clone)]
pub struct LinearModel<T> {
    drift: LinearOperator<T>,
    diffusion: Vec<LinearOperator<T>>,
}

impl<T: Real> LinearModel<T> {
    pub fn new(drift: LinearOperator<T>, diffusion: Vec<LinearOperator<T>>) -> Result<Self> {
        for b in &diffusion {
            if b.dim() != drift.dim() {
                return Err(Error::DimensionMismatch {
                    expected: drift.dim(),
                    found: b.dim(),
                });
            }
        }
        Ok(Self { drift, diffusion })
    }

    /// The model with vanishing coefficients on a `dim`-dimensional space.
    pub fn zero(dim: usize) -> Self {
        Self {
            drift: LinearOperator::zeros(dim),
            diffusion: vec![LinearOperator::zeros(dim)],
        }
    }
}

impl<T: Real> DiffusionModel<T> for LinearModel<T> {
    fn dim(&self) -> usize {
        self.drift.dim()
    }

    fn n_channels(&self) -> usize {
        self.diffusion.len()
    }

    fn drift(&self, _t: T, psi: &StateVector<T>, _aux: &[T]) -> StateVector<T> {
        self.drift.apply(psi).expect("dimension checked by stepper")
    }

    fn diffusion(&self, _t: T, psi: &StateVector<T>, _aux: &[T], channel: usize) -> StateVector<T> {
        self.diffusion[channel].apply(psi).expect("dimension checked by stepper")
    }
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// Euler-Maruyama followed by renormalization.
    EulerRenorm,
    /// Platen's second-order weak scheme followed by renormalization.
    PlatenWeak2,
}

impl SchemeId {
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::EulerRenorm => "euler",
            SchemeId::PlatenWeak2 => "platen",
        }
    }
}

fn check_inputs<T: Real, M: DiffusionModel<T> + ?Sized>(
    m: &M,
    psi: &StateVector<T>,
    aux: &[T],
    dw: &[T],
) -> Result<()> {
    if psi.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: psi.dim(),
        });
    }
    if aux.len() != m.aux_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.aux_dim(),
            found: aux.len(),
        });
    }
    if dw.len() != m.n_channels() {
        return Err(Error::DimensionMismatch {
            expected: m.n_channels(),
            found: dw.len(),
        });
    }
    Ok(())
}

fn aux_euler<T: Real, M: DiffusionModel<T> + ?Sized>(m: &M, t: T, aux: &[T], dt: T, dw: &[T]) -> Vec<T> {
    if aux.is_empty() {
        return Vec::new();
    }
    let mut next = aux.to_vec();
    for (x, d) in next.iter_mut().zip(m.aux_drift(t, aux)) {
        *x += d * dt;
    }
    for (j, &w) in dw.iter().enumerate() {
        for (x, s) in next.iter_mut().zip(m.aux_diffusion(t, aux, j)) {
            *x += s * w;
        }
    }
    next
}

/// Unnormalized Euler update `ψ + D₁Δt + Σⱼ D₂ʲ ΔWⱼ`.
pub fn euler_increment<T: Real, M: DiffusionModel<T> + ?Sized>(
    m: &M,
    t: T,
    psi: &StateVector<T>,
    aux: &[T],
    dt: T,
    dw: &[T],
) -> Result<StateVector<T>> {
    check_inputs(m, psi, aux, dw)?;
    let mut next = psi.clone();
    next.axpy_real(dt, &m.drift(t, psi, aux));
    for (j, &w) in dw.iter().enumerate() {
        next.axpy_real(w, &m.diffusion(t, psi, aux, j));
    }
    Ok(next)
}

/// Euler-Maruyama step with renormalization; returns the next state and auxiliary values.
pub fn euler_step<T: Real, M: DiffusionModel<T> + ?Sized>(
    m: &M,
    t: T,
    psi: &StateVector<T>,
    aux: &[T],
    dt: T,
    dw: &[T],
) -> Result<(StateVector<T>, Vec<T>)> {
    let mut next = euler_increment(m, t, psi, aux, dt, dw)?;
    next.normalize_in_place()?;
    Ok((next, aux_euler(m, t, aux, dt, dw)))
}

/// Platen's weak order-2 step for single-channel models, followed by renormalization.
///
/// Auxiliary states, if any, take an Euler step on the same increment and the
/// drift/diffusion evaluations all use the auxiliary values at the start of the step.
pub fn platen_step<T: Real, M: DiffusionModel<T> + ?Sized>(
    m: &M,
    t: T,
    psi: &StateVector<T>,
    aux: &[T],
    dt: T,
    dw: T,
) -> Result<(StateVector<T>, Vec<T>)> {
    if m.n_channels() != 1 {
        return Err(Error::MultiChannelUnsupported(m.n_channels()));
    }
    check_inputs(m, psi, aux, &[dw])?;
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let sqrt_dt = dt.sqrt();

    let d1 = m.drift(t, psi, aux);
    let d2 = m.diffusion(t, psi, aux, 0);

    let mut base = psi.clone();
    base.axpy_real(dt, &d1);
    let mut support = base.clone();
    support.axpy_real(dw, &d2);
    let mut plus = base.clone();
    plus.axpy_real(sqrt_dt, &d2);
    let mut minus = base;
    minus.axpy_real(-sqrt_dt, &d2);

    let t_next = t + dt;
    let d1_support = m.drift(t_next, &support, aux);
    let d2_plus = m.diffusion(t_next, &plus, aux, 0);
    let d2_minus = m.diffusion(t_next, &minus, aux, 0);

    let mut next = psi.clone();
    next.axpy_real(half * dt, &d1_support);
    next.axpy_real(half * dt, &d1);
    next.axpy_real(quarter * dw, &d2_plus);
    next.axpy_real(quarter * dw, &d2_minus);
    next.axpy_real(half * dw, &d2);
    let corr = quarter * (dw * dw - dt) / sqrt_dt;
    next.axpy_real(corr, &d2_plus);
    next.axpy_real(-corr, &d2_minus);

    next.normalize_in_place()?;
    Ok((next, aux_euler(m, t, aux, dt, &[dw])))
}

/// Uniform time grid `t_n = n·dt`, `n = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    dt: T,
    n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    /// Requires `t_final` to be an integer multiple of `dt` within `1e-9` relative.
    pub fn new(t_final: T, dt: T) -> Result<Self> {
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("time step must be positive and finite, got {dt}"),
            });
        }
        if !(t_final > T::zero() && t_final.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_final",
                reason: format!("final time must be positive and finite, got {t_final}"),
            });
        }
        let ratio = t_final / dt;
        let n = ratio.round();
        if n < T::one() || ((n * dt - t_final) / t_final).abs() > T::lit(1e-9) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("dt = {dt} does not divide t_final = {t_final}"),
            });
        }
        Ok(Self {
            dt,
            n_steps: n.to_usize().expect("step count fits usize"),
        })
    }

    #[inline]
    pub fn dt(&self) -> T {
        self.dt
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, including `t = 0`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn time(&self, n: usize) -> T {
        T::of_usize(n) * self.dt
    }

    pub fn t_final(&self) -> T {
        self.time(self.n_steps)
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.len()).map(|n| self.time(n)).collect()
    }
}

/// Real functional of a trajectory evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// Population of basis state 0 (the excited state of a qubit).
    Eta11,
    /// `Σₙ n|ψₙ|²`, the mean occupation in the Fock basis.
    MeanN,
    /// `|ψ₀|² − |ψ₁|²` of a qubit.
    BlochZ,
    /// Cumulative output `Bₙ`.
    OutputB,
    /// `‖ψ‖²`.
    Norm2,
    /// Auxiliary state component.
    Aux(usize),
}

impl Functional {
    pub fn name(self) -> String {
        match self {
            Functional::Eta11 => "eta11".into(),
            Functional::MeanN => "mean_n".into(),
            Functional::BlochZ => "bloch_z".into(),
            Functional::OutputB => "output_B".into(),
            Functional::Norm2 => "norm2".into(),
            Functional::Aux(i) => format!("aux{i}"),
        }
    }

    /// Checks that the functional is defined for the given model.
    pub fn check<T: Real, M: DiffusionModel<T> + ?Sized>(self, m: &M) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::InvalidParameter {
                name: "functional",
                reason,
            })
        };
        match self {
            Functional::BlochZ if m.dim() != 2 => fail("bloch_z needs a two-level model".into()),
            Functional::Aux(i) if i >= m.aux_dim() => {
                fail(format!("model has {} auxiliary states, asked for {i}", m.aux_dim()))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate<T: Real>(self, psi: &StateVector<T>, aux: &[T], output: T) -> T {
        match self {
            Functional::Eta11 => psi.population(0),
            Functional::MeanN => psi
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(n, a)| T::of_usize(n) * a.norm_sqr())
                .sum(),
            Functional::BlochZ => psi.population(0) - psi.population(1),
            Functional::OutputB => output,
            Functional::Norm2 => psi.norm_sqr(),
            Functional::Aux(i) => aux[i],
        }
    }
}

/// One realization sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub grid: TimeGrid<T>,
    pub functionals: Vec<Functional>,
    /// `samples[f][n]`: functional `f` at grid point `n`.
    pub samples: Vec<Vec<T>>,
    /// Cumulative output `Bₙ`, present when the model defines an output signal.
    pub output_path: Option<Vec<T>>,
    pub final_state: StateVector<T>,
    pub final_aux: Vec<T>,
    pub truncation_warning: bool,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn times(&self) -> Vec<T> {
        self.grid.times()
    }

    pub fn series(&self, f: Functional) -> Option<&[T]> {
        self.functionals
            .iter()
            .position(|&g| g == f)
            .map(|i| self.samples[i].as_slice())
    }
}

fn at_step(trajectory: u64, step: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::Trajectory {
        trajectory,
        step,
        source: Box::new(e),
    }
}

/// Integrates one realization from `psi0` over `grid` using `stream` for all randomness.
///
/// Auxiliary initial values are drawn first, then `n_channels` normals per
/// step. The output `B` is accumulated with the state at the start of each
/// step; functionals are evaluated on the renormalized states.
pub fn simulate_trajectory<T: Real, M: DiffusionModel<T> + ?Sized>(
    m: &M,
    scheme: SchemeId,
    psi0: &StateVector<T>,
    grid: TimeGrid<T>,
    stream: &mut NoiseStream,
    functionals: &[Functional],
) -> Result<TrajectoryRecord<T>> {
    let traj = stream.stream_index();
    for f in functionals {
        f.check(m)?;
    }
    if scheme == SchemeId::PlatenWeak2 && m.n_channels() != 1 {
        return Err(Error::MultiChannelUnsupported(m.n_channels()));
    }
    if psi0.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: psi0.dim(),
        });
    }
    let dt = grid.dt();
    let mut psi = psi0.clone();
    let mut aux = m.init_aux(stream).map_err(at_step(traj, 0))?;
    let has_output = m.output_signal(&psi).is_some();
    let mut b = T::zero();

    let mut samples: Vec<Vec<T>> = functionals.iter().map(|_| Vec::with_capacity(grid.len())).collect();
    let mut output_path = has_output.then(|| {
        let mut v = Vec::with_capacity(grid.len());
        v.push(T::zero());
        v
    });
    let record = |samples: &mut Vec<Vec<T>>, psi: &StateVector<T>, aux: &[T], b: T| {
        for (s, f) in samples.iter_mut().zip(functionals) {
            s.push(f.evaluate(psi, aux, b));
        }
    };
    record(&mut samples, &psi, &aux, b);

    let mut truncation_warning = m.truncation_warning(&psi);
    let mut dw = vec![T::zero(); m.n_channels()];
    for n in 0..grid.n_steps() {
        let t = grid.time(n);
        for w in dw.iter_mut() {
            *w = stream.wiener_increment(dt);
        }
        if has_output {
            let signal = m.output_signal(&psi).unwrap_or_else(T::zero);
            b += dw[0] + signal * dt;
        }
        let (next, next_aux) = match scheme {
            SchemeId::EulerRenorm => euler_step(m, t, &psi, &aux, dt, &dw),
            SchemeId::PlatenWeak2 => platen_step(m, t, &psi, &aux, dt, dw[0]),
        }
        .map_err(at_step(traj, n))?;
        if next_aux.iter().any(|x| !x.is_finite()) {
            return Err(at_step(traj, n)(Error::NonFinite));
        }
        psi = next;
        aux = next_aux;
        truncation_warning |= m.truncation_warning(&psi);
        record(&mut samples, &psi, &aux, b);
        if let Some(path) = output_path.as_mut() {
            path.push(b);
        }
    }
    Ok(TrajectoryRecord {
        grid,
        functionals: functionals.to_vec(),
        samples,
        output_path,
        final_state: psi,
        final_aux: aux,
        truncation_warning,
    })
}

/// Linear stochastic Schrödinger equation `dφ = (−iH − ½ΣR†R)φ dt + ΣRφ dB`.
#[derive(Debug, Clone)]
pub struct LinearSse<T> {
    hamiltonian: LinearOperator<T>,
    channels: Vec<LinearOperator<T>>,
    generator: LinearOperator<T>,
}

impl<T: Real> LinearSse<T> {
    /// `hamiltonian` must carry the Hermitian flag.
    pub fn new(hamiltonian: LinearOperator<T>, channels: Vec<LinearOperator<T>>) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(Error::NotHermitian(hamiltonian.hermitian_deviation().as_f64()));
        }
        let n = hamiltonian.dim();
        let mut generator = hamiltonian.scale(Complex::new(T::zero(), -T::one()));
        for r in &channels {
            if r.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.dim(),
                });
            }
            let rr = r.adjoint().matmul(r)?;
            generator = generator.sub(&rr.scale_real(T::lit(0.5)))?;
        }
        Ok(Self {
            hamiltonian,
            channels,
            generator,
        })
    }

    pub fn hamiltonian(&self) -> &LinearOperator<T> {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[LinearOperator<T>] {
        &self.channels
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `mⱼ = 2 Re⟨ψ|Rⱼψ⟩` for the normalized direction of `phi`.
    pub fn signals(&self, phi: &StateVector<T>) -> Result<Vec<T>> {
        let psi = phi.normalize()?;
        self.channels
            .iter()
            .map(|r| Ok(T::lit(2.0) * r.expectation(&psi)?.re))
            .collect()
    }

    /// Unnormalized Euler update.
    pub fn euler_step(&self, phi: &StateVector<T>, dt: T, db: &[T]) -> Result<StateVector<T>> {
        if db.len() != self.channels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.channels.len(),
                found: db.len(),
            });
        }
        let mut next = phi.clone();
        next.axpy_real(dt, &self.generator.apply(phi)?);
        for (r, &b) in self.channels.iter().zip(db) {
            next.axpy_real(b, &r.apply(phi)?);
        }
        Ok(next)
    }

    /// Integrates one realization under the reference measure, where `B` is a Wiener process.
    ///
    /// Functionals are evaluated on the unnormalized `φ`; `OutputB` records `B` itself.
    pub fn simulate(
        &self,
        phi0: &StateVector<T>,
        grid: TimeGrid<T>,
        stream: &mut NoiseStream,
        functionals: &[Functional],
    ) -> Result<TrajectoryRecord<T>> {
        let traj = stream.stream_index();
        if phi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: phi0.dim(),
            });
        }
        if let Some(f) = functionals.iter().find(|f| matches!(f, Functional::Aux(_))) {
            return Err(Error::InvalidParameter {
                name: "functional",
                reason: format!("{} is not defined for the linear equation", f.name()),
            });
        }
        let dt = grid.dt();
        let mut phi = phi0.clone();
        let mut b = vec![T::zero(); self.channels.len()];
        let b0 = |b: &[T]| b.first().copied().unwrap_or_else(T::zero);
        let mut samples: Vec<Vec<T>> = functionals
            .iter()
            .map(|f| {
                let mut v = Vec::with_capacity(grid.len());
                v.push(f.evaluate(&phi, &[], T::zero()));
                v
            })
            .collect();
        let mut path = Vec::with_capacity(grid.len());
        path.push(T::zero());
        let mut db = vec![T::zero(); self.channels.len()];
        for n in 0..grid.n_steps() {
            for (w, acc) in db.iter_mut().zip(b.iter_mut()) {
                *w = stream.wiener_increment(dt);
                *acc += *w;
            }
            phi = self.euler_step(&phi, dt, &db).map_err(at_step(traj, n))?;
            if !phi.is_finite() {
                return Err(at_step(traj, n)(Error::NonFinite));
            }
            for (s, f) in samples.iter_mut().zip(functionals) {
                s.push(f.evaluate(&phi, &[], b0(&b)));
            }
            path.push(b0(&b));
        }
        Ok(TrajectoryRecord {
            grid,
            functionals: functionals.to_vec(),
            samples,
            output_path: Some(path),
            final_state: phi,
            final_aux: Vec::new(),
            truncation_warning: false,
        })
    }
}

/// Single Euler step of the linear equation with operators passed directly.
pub fn linear_euler_step<T: Real>(
    hamiltonian: &LinearOperator<T>,
    channels: &[LinearOperator<T>],
    phi: &StateVector<T>,
    dt: T,
    db: &[T],
) -> Result<StateVector<T>> {
    LinearSse::new(hamiltonian.clone(), channels.to_vec())?.euler_step(phi, dt, db)
}
