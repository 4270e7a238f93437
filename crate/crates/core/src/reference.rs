//! Deterministic reference solutions: the closed-form homodyne mean state,
//! Lindblad master-equation integration, and the memory-kernel Bloch
//! equations for the coloured-noise qubit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, LinearOperator};
use crate::scalar::Real;
use crate::sde::TimeGrid;

/// Largest internal step used by the reference integrators.
pub const MAX_REFERENCE_STEP: f64 = 1e-3;

/// Largest quadrature step for the mean homodyne output.
pub const MAX_QUADRATURE_STEP: f64 = 1e-4;

/// Solution sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OdePath<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
}

/// Number of equal substeps of size at most `max_step` covering `dt`.
pub fn substeps<T: Real>(dt: T, max_step: T) -> usize {
    let n = (dt / max_step * (T::one() - T::lit(1e-12))).ceil();
    n.to_usize().unwrap_or(1).max(1)
}

fn rk4_advance<T: Real, F>(field: &mut F, t: T, y: &mut [T], h: T, k: &mut [Vec<T>; 4], tmp: &mut [T]) -> Result<()>
where
    F: FnMut(T, &[T], &mut [T]),
{
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    field(t, y, &mut k[0]);
    for i in 0..y.len() {
        tmp[i] = y[i] + half * h * k[0][i];
    }
    field(t + half * h, tmp, &mut k[1]);
    for i in 0..y.len() {
        tmp[i] = y[i] + half * h * k[1][i];
    }
    field(t + half * h, tmp, &mut k[2]);
    for i in 0..y.len() {
        tmp[i] = y[i] + h * k[2][i];
    }
    field(t + h, tmp, &mut k[3]);
    for i in 0..y.len() {
        y[i] += h * sixth * (k[0][i] + T::lit(2.0) * (k[1][i] + k[2][i]) + k[3][i]);
    }
    if k.iter().any(|ki| ki.iter().any(|v| !v.is_finite())) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::IntegrationFailure(format!("non-finite value near t = {t}")));
    }
    Ok(())
}

/// Classical fourth-order Runge-Kutta on the grid `grid`, taking `substeps` equal steps per grid interval.
pub fn rk4_sampled<T: Real, F>(mut field: F, y0: &[T], grid: TimeGrid<T>, substeps: usize) -> Result<OdePath<T>>
where
    F: FnMut(T, &[T], &mut [T]),
{
    let substeps = substeps.max(1);
    let h = grid.dt() / T::of_usize(substeps);
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut k = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
    let mut tmp = vec![T::zero(); n];
    let mut states = Vec::with_capacity(grid.len());
    states.push(y.clone());
    for step in 0..grid.n_steps() {
        let t0 = grid.time(step);
        for s in 0..substeps {
            rk4_advance(&mut field, t0 + T::of_usize(s) * h, &mut y, h, &mut k, &mut tmp)?;
        }
        states.push(y.clone());
    }
    Ok(OdePath {
        times: grid.times(),
        states,
    })
}

/// Classical fourth-order Runge-Kutta with fixed step `dt` over `[0, t_final]`.
pub fn rk4_solve<T: Real, F>(field: F, y0: &[T], t_final: T, dt: T) -> Result<OdePath<T>>
where
    F: FnMut(T, &[T], &mut [T]),
{
    rk4_sampled(field, y0, TimeGrid::new(t_final, dt)?, 1)
}

/// Integrates `ρ̇ = −i[H,ρ] + Σ(LρL† − ½{L†L,ρ})` and samples it on the `dt` grid.
///
/// The internal RK4 step is the largest divisor of `dt` not above
/// [`MAX_REFERENCE_STEP`]. Every sample is checked against the density
/// matrix invariants.
pub fn lindblad_evolve<T: Real>(
    hamiltonian: &LinearOperator<T>,
    jumps: &[LinearOperator<T>],
    rho0: &DensityMatrix<T>,
    t_final: T,
    dt: T,
) -> Result<Vec<DensityMatrix<T>>> {
    if !hamiltonian.is_hermitian() {
        return Err(Error::NotHermitian(hamiltonian.hermitian_deviation().as_f64()));
    }
    let n = hamiltonian.dim();
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.dim(),
        });
    }
    rho0.check_state()?;
    // ρ̇ = Kρ + ρK† + Σ LρL†,  K = −iH − ½ΣL†L
    let mut k_eff = hamiltonian.scale(Complex::new(T::zero(), -T::one()));
    for l in jumps {
        if l.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: l.dim(),
            });
        }
        k_eff = k_eff.sub(&l.adjoint().matmul(l)?.scale_real(T::lit(0.5)))?;
    }
    let jumps_adj: Vec<_> = jumps.iter().map(|l| l.adjoint()).collect();
    let nn = n * n;
    let zero = Complex::new(T::zero(), T::zero());
    let mut rho = vec![zero; nn];
    let mut work = vec![zero; nn];
    let mut out = vec![zero; nn];

    let field = |_t: T, y: &[T], dy: &mut [T]| {
        for i in 0..nn {
            rho[i] = Complex::new(y[2 * i], y[2 * i + 1]);
        }
        out.iter_mut().for_each(|o| *o = zero);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero;
                for m in 0..n {
                    acc += k_eff.get(i, m) * rho[m * n + j] + rho[i * n + m] * k_eff.get(j, m).conj();
                }
                out[i * n + j] = acc;
            }
        }
        for (l, ld) in jumps.iter().zip(&jumps_adj) {
            // work = ρL†, out += L·work
            for i in 0..n {
                for j in 0..n {
                    let mut acc = zero;
                    for m in 0..n {
                        acc += rho[i * n + m] * ld.get(m, j);
                    }
                    work[i * n + j] = acc;
                }
            }
            for i in 0..n {
                for m in 0..n {
                    let a = l.get(i, m);
                    if a == zero {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] += a * work[m * n + j];
                    }
                }
            }
        }
        for i in 0..nn {
            dy[2 * i] = out[i].re;
            dy[2 * i + 1] = out[i].im;
        }
    };

    let y0: Vec<T> = rho0.entries().iter().flat_map(|z| [z.re, z.im]).collect();
    let grid = TimeGrid::new(t_final, dt)?;
    let path = rk4_sampled(field, &y0, grid, substeps(dt, T::lit(MAX_REFERENCE_STEP)))?;
    path.states
        .into_iter()
        .zip(path.times)
        .map(|(y, t)| {
            let entries = y.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
            let rho = DensityMatrix::from_entries_unchecked(n, entries);
            let tr = rho.trace();
            if (tr.re - T::one()).abs() > T::lit(1e-8) || tr.im.abs() > T::lit(1e-8) {
                return Err(Error::IntegrationFailure(format!("trace {tr} at t = {t}")));
            }
            rho.check_state()
                .map_err(|e| Error::IntegrationFailure(format!("at t = {t}: {e}")))?;
            Ok(rho)
        })
        .collect()
}

/// Closed-form mean state of the driven atom under homodyne detection,
/// started in the ground state. Requires `Ω_R² > γ²/16`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneSolution<T> {
    pub omega_r: T,
    pub gamma: T,
    pub u_plus: Complex<T>,
    pub u_minus: Complex<T>,
    pub v_plus: Complex<T>,
    pub v_minus: Complex<T>,
    pub a_plus: Complex<T>,
    pub a_minus: Complex<T>,
    /// Stationary excited population `Ω_R²/(2Ω_R² + γ²)`.
    pub steady: T,
    /// Stationary `Tr{σ_y η}`, `−Ω_Rγ/(Ω_R² + γ²/2)`.
    pub steady_sigma_y: T,
}

impl<T: Real> HomodyneSolution<T> {
    pub fn new(omega_r: T, gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite() && omega_r.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "need finite gamma > 0 and omega_r, got gamma = {gamma}, omega_r = {omega_r}"
            )));
        }
        let o2 = omega_r * omega_r;
        let g2 = gamma * gamma;
        let disc = o2 - g2 / T::lit(16.0);
        if disc.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || omega_r < T::zero() {
            return Err(Error::ParameterDomain(format!(
                "closed form needs omega_r² > gamma²/16, got omega_r = {omega_r}, gamma = {gamma}"
            )));
        }
        let w = disc.sqrt();
        let denom = T::lit(2.0) * o2 + g2;
        let c = |re: T, im: T| Complex::new(re, im);
        let u = |sign: T| c(gamma * w, -sign * (o2 - g2 / T::lit(4.0))) * (omega_r / (w * denom));
        let v = |sign: T| c(-w, -sign * T::lit(0.75) * gamma) * (o2 / (T::lit(2.0) * w * denom));
        let a = |sign: T| c(T::lit(0.75) * gamma, sign * w);
        Ok(Self {
            omega_r,
            gamma,
            u_plus: u(T::one()),
            u_minus: u(-T::one()),
            v_plus: v(T::one()),
            v_minus: v(-T::one()),
            a_plus: a(T::one()),
            a_minus: a(-T::one()),
            steady: o2 / denom,
            steady_sigma_y: -omega_r * gamma / (o2 + g2 / T::lit(2.0)),
        })
    }

    fn transient(&self, c_plus: Complex<T>, c_minus: Complex<T>, t: T) -> Complex<T> {
        c_plus * (-self.a_plus * t).exp() + c_minus * (-self.a_minus * t).exp()
    }

    /// Complex transient `v₊e^{−a₊t} + v₋e^{−a₋t}`; its imaginary part vanishes.
    pub fn eta11_transient(&self, t: T) -> Complex<T> {
        self.transient(self.v_plus, self.v_minus, t)
    }

    /// Excited-state population `η(t)₁₁`.
    pub fn eta11(&self, t: T) -> T {
        self.eta11_transient(t).re + self.steady
    }

    /// `Tr{σ_y η(t)}`.
    pub fn sigma_y(&self, t: T) -> T {
        self.transient(self.u_plus, self.u_minus, t).re + self.steady_sigma_y
    }

    /// `Tr{σ_x η(t)}`, identically zero for this model.
    pub fn sigma_x(&self, _t: T) -> T {
        T::zero()
    }

    /// `E[B(t)] = √γ ∫₀ᵗ Tr{σ_y η(s)} ds` by composite trapezoid.
    pub fn mean_output(&self, t: T) -> T {
        *self.mean_output_curve(&[t]).last().expect("one point")
    }

    /// Cumulative mean output at increasing `times` (`times[0] ≥ 0`).
    pub fn mean_output_curve(&self, times: &[T]) -> Vec<T> {
        let half = T::lit(0.5);
        let h_max = T::lit(MAX_QUADRATURE_STEP);
        let mut acc = T::zero();
        let mut prev = T::zero();
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let span = t - prev;
            if span > T::zero() {
                let m = substeps(span, h_max);
                let h = span / T::of_usize(m);
                let mut s = half * (self.sigma_y(prev) + self.sigma_y(t));
                for j in 1..m {
                    s += self.sigma_y(prev + T::of_usize(j) * h);
                }
                acc += s * h;
                prev = t;
            }
            out.push(self.gamma.sqrt() * acc);
        }
        out
    }
}

/// `η(t)₁₁` for the homodyne model.
pub fn homodyne_eta11<T: Real>(t: T, omega_r: T, gamma: T) -> Result<T> {
    Ok(HomodyneSolution::new(omega_r, gamma)?.eta11(t))
}

/// `Tr{σ_y η(t)}` for the homodyne model.
pub fn homodyne_sigma_y<T: Real>(t: T, omega_r: T, gamma: T) -> Result<T> {
    Ok(HomodyneSolution::new(omega_r, gamma)?.sigma_y(t))
}

/// Mean integrated homodyne current `E[B(t)]`.
pub fn homodyne_mean_output<T: Real>(t: T, omega_r: T, gamma: T) -> Result<T> {
    if t < T::zero() {
        return Err(Error::ParameterDomain(format!("t must be ≥ 0, got {t}")));
    }
    Ok(HomodyneSolution::new(omega_r, gamma)?.mean_output(t))
}

/// State of the memory-kernel Bloch system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochOdeState<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    /// `γ∫e^{−(k+γ)(t−s)} x(s) ds`
    pub zeta: T,
    /// `γ∫e^{−(k+γ/2)(t−s)} cos ν(t−s) z(s) ds`
    pub xi: T,
    /// `−(γ²/2ν)∫e^{−(k+γ/2)(t−s)} sin ν(t−s) z(s) ds`
    pub eps: T,
}

impl<T: Real> BlochOdeState<T> {
    /// Excited-state population `(1 + z)/2`.
    pub fn eta11(&self) -> T {
        T::lit(0.5) * (T::one() + self.z)
    }

    fn to_vec(self) -> [T; 6] {
        [self.x, self.y, self.z, self.zeta, self.xi, self.eps]
    }

    fn from_slice(v: &[T]) -> Self {
        Self {
            x: v[0],
            y: v[1],
            z: v[2],
            zeta: v[3],
            xi: v[4],
            eps: v[5],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochPath<T> {
    pub times: Vec<T>,
    pub states: Vec<BlochOdeState<T>>,
}

impl<T: Real> BlochPath<T> {
    pub fn eta11(&self) -> Vec<T> {
        self.states.iter().map(BlochOdeState::eta11).collect()
    }
}

/// Right-hand side of the two constant-coefficient linear systems obtained
/// from the averaged coloured-noise master equation:
///
/// ```text
/// ẋ = −ω₀y − γx + kζ          ξ̇ = −(k+γ/2)ξ + (2ν²/γ)ε + γz
/// ẏ = ω₀x                     ε̇ = −(k+γ/2)ε − (γ/2)ξ
/// ζ̇ = −(k+γ)ζ + γx           ż = −γz + k(ξ + ε)
/// ```
pub fn nonmarkov_bloch_field<T: Real>(omega0: T, gamma: T, k: T) -> impl Fn(T, &[T], &mut [T]) {
    let nu2 = omega0 * omega0 - gamma * gamma / T::lit(4.0);
    let half_gamma = gamma / T::lit(2.0);
    move |_t, s, d| {
        let [x, y, z, zeta, xi, eps] = [s[0], s[1], s[2], s[3], s[4], s[5]];
        d[0] = -omega0 * y - gamma * x + k * zeta;
        d[1] = omega0 * x;
        d[2] = -gamma * z + k * (xi + eps);
        d[3] = -(k + gamma) * zeta + gamma * x;
        d[4] = -(k + half_gamma) * xi + T::lit(2.0) * nu2 / gamma * eps + gamma * z;
        d[5] = -(k + half_gamma) * eps - half_gamma * xi;
    }
}

/// Approximate mean Bloch trajectory of the coloured-noise qubit, started in the excited state.
///
/// `k = 0` is the memoryless limit. Sampled on the `dt` grid with internal
/// RK4 steps no larger than [`MAX_REFERENCE_STEP`].
pub fn nonmarkov_bloch<T: Real>(t_final: T, dt: T, omega0: T, gamma: T, k: T) -> Result<BlochPath<T>> {
    nonmarkov_bloch_from(
        BlochOdeState {
            z: T::one(),
            ..Default::default()
        },
        t_final,
        dt,
        omega0,
        gamma,
        k,
    )
}

/// As [`nonmarkov_bloch`], from an arbitrary initial Bloch state.
pub fn nonmarkov_bloch_from<T: Real>(
    init: BlochOdeState<T>,
    t_final: T,
    dt: T,
    omega0: T,
    gamma: T,
    k: T,
) -> Result<BlochPath<T>> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::ParameterDomain(format!("gamma must be > 0, got {gamma}")));
    }
    if !(k >= T::zero() && k.is_finite()) {
        return Err(Error::ParameterDomain(format!("k must be ≥ 0, got {k}")));
    }
    if !(omega0 > gamma / T::lit(2.0) && omega0.is_finite()) {
        return Err(Error::ParameterDomain(format!(
            "omega0 must exceed gamma/2 so that nu is real, got omega0 = {omega0}, gamma = {gamma}"
        )));
    }
    let grid = TimeGrid::new(t_final, dt)?;
    let path = rk4_sampled(
        nonmarkov_bloch_field(omega0, gamma, k),
        &init.to_vec(),
        grid,
        substeps(dt, T::lit(MAX_REFERENCE_STEP)),
    )?;
    Ok(BlochPath {
        times: path.times,
        states: path.states.iter().map(|s| BlochOdeState::from_slice(s)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rk4_constant_field() {
        let p = rk4_solve(|_, _, d: &mut [f64]| d[0] = 0.0, &[2.5], 1.0, 0.1).unwrap();
        assert!(p.states.iter().all(|s| s[0] == 2.5));
        assert_eq!(p.times.len(), 11);
    }

    #[test]
    fn rk4_exponential_decay() {
        let p = rk4_solve(|_, y: &[f64], d: &mut [f64]| d[0] = -y[0], &[1.0], 1.0, 1e-3).unwrap();
        assert_abs_diff_eq!(p.states.last().unwrap()[0], (-1f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn rk4_rejects_non_finite_field() {
        let r = rk4_solve(|_, _, d: &mut [f64]| d[0] = f64::NAN, &[1.0], 1.0, 0.1);
        assert!(matches!(r, Err(Error::IntegrationFailure(_))));
    }

    #[test]
    fn substep_selection() {
        assert_eq!(substeps(0.01, 1e-3), 10);
        assert_eq!(substeps(1e-3, 1e-3), 1);
        assert_eq!(substeps(5e-4, 1e-3), 1);
        assert_eq!(substeps(0.2, 1e-3), 200);
    }

    #[test]
    fn homodyne_coefficients_at_unit_parameters() {
        let s = HomodyneSolution::<f64>::new(1.0, 1.0).unwrap();
        let w = 15f64.sqrt() / 4.0;
        assert_abs_diff_eq!(s.a_plus.re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a_plus.im, w, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a_minus.im, -w, epsilon = 1e-15);
        assert_abs_diff_eq!(s.steady, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.steady_sigma_y, -2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eta11(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.sigma_y(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eta11(100.0), 1.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.sigma_y(100.0), -2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn homodyne_domain_is_enforced() {
        assert!(matches!(
            HomodyneSolution::<f64>::new(0.25, 1.0),
            Err(Error::ParameterDomain(_))
        ));
        assert!(HomodyneSolution::<f64>::new(0.26, 1.0).is_ok());
        assert!(homodyne_eta11(1.0, 1.0, 0.0).is_err());
        assert!(homodyne_mean_output(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn transient_is_real_and_cancels_steady_state() {
        for (o, g) in [(1.0, 1.0), (2.0, 1.0), (1.0, 0.5)] {
            let s = HomodyneSolution::<f64>::new(o, g).unwrap();
            assert_abs_diff_eq!((s.v_plus + s.v_minus).re + s.steady, 0.0, epsilon = 1e-15);
            for i in 0..=1000 {
                let t = i as f64 * 0.01;
                assert!(s.eta11_transient(t).im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mean_output_quadrature_matches_exact_integral() {
        // ∫₀ᵗ u e^{−as} ds = u(1 − e^{−at})/a
        let s = HomodyneSolution::<f64>::new(1.0, 1.0).unwrap();
        let exact = |t: f64| {
            let one = Complex::new(1.0, 0.0);
            let f = |u: Complex<f64>, a: Complex<f64>| u * (one - (-a * t).exp()) / a;
            (f(s.u_plus, s.a_plus) + f(s.u_minus, s.a_minus)).re + s.steady_sigma_y * t
        };
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let curve = s.mean_output_curve(&times);
        for (t, b) in times.iter().zip(&curve) {
            assert_abs_diff_eq!(*b, exact(*t), epsilon = 1e-6);
        }
        assert_eq!(s.mean_output(0.0), 0.0);
        assert!(s.mean_output(0.01).abs() < 1e-3);
        let slope = (s.mean_output(60.0) - s.mean_output(50.0)) / 10.0;
        assert_abs_diff_eq!(slope, -2.0 / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn closed_system_lindblad() {
        let w0 = 2.0;
        let h = LinearOperator::<f64>::sigma_z().scale_real(w0 / 2.0);
        let rho0 = DensityMatrix::from_bloch([1.0, 0.0, 0.0]);
        let path = lindblad_evolve(&h, &[], &rho0, 1.0, 0.01).unwrap();
        for (i, rho) in path.iter().enumerate() {
            let t = i as f64 * 0.01;
            let [x, y, z] = rho.bloch_vector().unwrap();
            assert_abs_diff_eq!(z, 0.0, epsilon = 1e-12);
            // coherence ρ₀₁ rotates as e^{−iω₀t}
            assert_abs_diff_eq!(x, (w0 * t).cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(y, (w0 * t).sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn lindblad_rejects_bad_inputs() {
        let rho0 = DensityMatrix::<f64>::maximally_mixed(2);
        assert!(lindblad_evolve(&LinearOperator::sigma_minus(), &[], &rho0, 1.0, 0.1).is_err());
        let bad_trace = DensityMatrix::from_bloch([0.0, 0.0, 0.0]);
        let doubled = DensityMatrix::from_entries(2, bad_trace.entries().iter().map(|z| z * 2.0).collect()).unwrap();
        assert!(lindblad_evolve(&LinearOperator::sigma_z(), &[], &doubled, 1.0, 0.1).is_err());
    }

    #[test]
    fn markovian_limit_of_bloch_system() {
        let path = nonmarkov_bloch(5.0, 0.01, 37f64.sqrt() / 2.0, 1.0, 0.0).unwrap();
        for (t, s) in path.times.iter().zip(&path.states) {
            assert_abs_diff_eq!(s.z, (-t).exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(s.eta11(), 0.5 * (1.0 + (-t).exp()), epsilon = 1e-12);
            assert_eq!(s.x, 0.0);
        }
    }

    #[test]
    fn bloch_domain_is_enforced() {
        assert!(nonmarkov_bloch(1.0, 0.01, 0.5, 1.0, 1.0).is_err());
        assert!(nonmarkov_bloch(1.0, 0.01, 3.0, 1.0, -1.0).is_err());
        assert!(nonmarkov_bloch(1.0, 0.01, 3.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn xy_block_at_k0_is_damped_rotation() {
        // with k = 0, ζ never feeds back: ẍ + γẋ + ω₀²x = 0
        let w0 = 2.0;
        let g = 0.4;
        let init = BlochOdeState {
            x: 1.0,
            ..Default::default()
        };
        let p = nonmarkov_bloch_from(init, 3.0, 0.01, w0, g, 0.0).unwrap();
        let wd = (w0 * w0 - g * g / 4.0f64).sqrt();
        for (t, s) in p.times.iter().zip(&p.states) {
            let x = (-g * t / 2.0).exp() * ((wd * t).cos() - g / (2.0 * wd) * (wd * t).sin());
            assert_abs_diff_eq!(s.x, x, epsilon = 1e-10);
        }
    }
}
