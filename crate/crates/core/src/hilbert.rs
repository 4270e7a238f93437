//! Small dense complex linear algebra on finite Hilbert spaces.
//!
//! Qubit basis convention: index 0 is the excited state `|1⟩` and index 1 is
//! the ground state `|0⟩`, so `σ_z = diag(+1, −1)` and the excited-state
//! population is the `(0, 0)` entry of a density matrix. Oscillator (Fock)
//! basis: index `n` is `|n⟩`, `n = 0..=n_max`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this norm a state is treated as collapsed.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-300;

/// Tolerance used when validating Hermiticity of operators and density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amp: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amp: Vec<Complex<T>>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "state vector dimension must be at least 1".into(),
            });
        }
        Ok(Self { amp })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amp: &[T]) -> Result<Self> {
        Self::new(amp.iter().map(|&a| Complex::new(a, T::zero())).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "state vector dimension must be at least 1");
        Self {
            amp: vec![Complex::new(T::zero(), T::zero()); dim],
        }
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter {
                name: "index",
                reason: format!("basis index {index} out of range for dimension {dim}"),
            });
        }
        let mut v = Self::zeros(dim);
        v.amp[index] = Complex::new(T::one(), T::zero());
        Ok(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amp
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amp
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amp
    }

    /// `⟨self|other⟩`, conjugate-linear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(u, v)| u.conj() * v)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z))
    }

    pub fn norm_sqr(&self) -> T {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.amp.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Unit vector in the direction of `self`.
    pub fn normalize(&self) -> Result<Self> {
        let mut out = self.clone();
        out.normalize_in_place()?;
        Ok(out)
    }

    pub fn normalize_in_place(&mut self) -> Result<()> {
        let n = self.norm();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n <= T::lit(ZERO_NORM_THRESHOLD) {
            return Err(Error::ZeroNorm);
        }
        for a in &mut self.amp {
            *a /= n;
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            amp: self.amp.iter().map(|a| a * c).collect(),
        }
    }

    /// `self += c·x`
    pub fn axpy(&mut self, c: Complex<T>, x: &Self) {
        debug_assert_eq!(self.dim(), x.dim());
        for (a, b) in self.amp.iter_mut().zip(&x.amp) {
            *a += b * c;
        }
    }

    /// `self += c·x` with a real coefficient.
    pub fn axpy_real(&mut self, c: T, x: &Self) {
        debug_assert_eq!(self.dim(), x.dim());
        for (a, b) in self.amp.iter_mut().zip(&x.amp) {
            a.re += b.re * c;
            a.im += b.im * c;
        }
    }

    /// Population `|amp_k|²` of basis state `k`.
    #[inline]
    pub fn population(&self, k: usize) -> T {
        self.amp[k].norm_sqr()
    }
}

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
    hermitian: bool,
}

impl<T: Real> LinearOperator<T> {
    /// Builds an operator from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "operator dimension must be at least 1".into(),
            });
        }
        check_dim(dim * dim, entries.len())?;
        Ok(Self {
            dim,
            entries,
            hermitian: false,
        })
    }

    pub fn from_rows(rows: &[&[Complex<T>]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dim(dim, row.len())?;
            entries.extend_from_slice(row);
        }
        Self::from_entries(dim, entries)
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dim(dim, row.len())?;
            entries.extend(row.iter().map(|&x| Complex::new(T::lit(x), T::zero())));
        }
        Self::from_entries(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            entries: vec![Complex::new(T::zero(), T::zero()); dim * dim],
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for k in 0..dim {
            op.entries[k * dim + k] = Complex::new(T::one(), T::zero());
        }
        op
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut op = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            op.entries[k * diag.len() + k] = Complex::new(d, T::zero());
        }
        op
    }

    /// Marks the operator Hermitian after checking it within [`HERMITIAN_TOL`].
    pub fn into_hermitian(mut self) -> Result<Self> {
        let dev = self.hermitian_deviation();
        if dev > T::lit(HERMITIAN_TOL) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// `max |A − A†|` over all entries.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        check_dim(self.dim, v.dim())?;
        let mut out = StateVector::zeros(self.dim);
        self.apply_into(v.amplitudes(), out.amplitudes_mut());
        Ok(out)
    }

    /// Unchecked product into a preallocated buffer. Panics on length mismatch.
    pub fn apply_into(&self, v: &[Complex<T>], out: &mut [Complex<T>]) {
        let n = self.dim;
        assert_eq!(v.len(), n);
        assert_eq!(out.len(), n);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut acc = Complex::new(T::zero(), T::zero());
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            *o = acc;
        }
    }

    /// `⟨ψ|Aψ⟩`; `ψ` need not be normalized.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<Complex<T>> {
        let a_psi = self.apply(psi)?;
        psi.inner(&a_psi)
    }

    /// `⟨ψ|Aψ⟩` where the operator is known to be Hermitian: the real part only.
    pub fn expectation_re(&self, psi: &StateVector<T>) -> Result<T> {
        self.expectation(psi).map(|z| z.re)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].conj());
            }
        }
        Self {
            dim: n,
            entries,
            hermitian: self.hermitian,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(Self {
            dim: n,
            entries,
            hermitian: false,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
            hermitian: self.hermitian && c.im == T::zero(),
        }
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(Complex::new(c, T::zero()))
    }

    // Pauli and ladder operators in the excited-first qubit basis.

    pub fn sigma_x() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
            .expect("2x2")
            .into_hermitian()
            .expect("σ_x is Hermitian")
    }

    pub fn sigma_y() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        Self::from_rows(&[&[z, -i], &[i, z]])
            .expect("2x2")
            .into_hermitian()
            .expect("σ_y is Hermitian")
    }

    pub fn sigma_z() -> Self {
        Self::diagonal(&[T::one(), -T::one()])
    }

    /// Raising operator `|1⟩⟨0|` (ground → excited).
    pub fn sigma_plus() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2")
    }

    /// Lowering operator `|0⟩⟨1|` (excited → ground).
    pub fn sigma_minus() -> Self {
        Self::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).expect("2x2")
    }

    /// Annihilation operator on the Fock space truncated at `n_max`.
    pub fn annihilation(n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for n in 1..dim {
            entries[(n - 1) * dim + n] = Complex::new(T::of_usize(n).sqrt(), T::zero());
        }
        Self {
            dim,
            entries,
            hermitian: false,
        }
    }

    pub fn creation(n_max: usize) -> Self {
        Self::annihilation(n_max).adjoint()
    }

    /// Number operator `a†a = diag(0, 1, …, n_max)`.
    pub fn number(n_max: usize) -> Self {
        let diag: Vec<T> = (0..=n_max).map(T::of_usize).collect();
        Self::diagonal(&diag)
    }
}

/// Dense density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity and nonnegative diagonal; the trace is not checked here.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity("dimension must be at least 1".into()));
        }
        check_dim(dim * dim, entries.len())?;
        let rho = Self { dim, entries };
        rho.check_structure()?;
        Ok(rho)
    }

    /// Wraps entries without validation; used by integrators between checks.
    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Complex<T>>) -> Self {
        Self { dim, entries }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`. The caller is responsible for normalizing `ψ`.
    pub fn pure(psi: &StateVector<T>) -> Self {
        let n = psi.dim();
        let a = psi.amplitudes();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(a[i] * a[j].conj());
            }
        }
        Self { dim: n, entries }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        let p = T::one() / T::of_usize(dim);
        for k in 0..dim {
            entries[k * dim + k] = Complex::new(p, T::zero());
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim)
            .map(|k| self.entries[k * self.dim + k])
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// `Tr{A ρ}`.
    pub fn expectation(&self, op: &LinearOperator<T>) -> Result<Complex<T>> {
        check_dim(self.dim, op.dim())?;
        let n = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc += op.get(i, k) * self.entries[k * n + i];
            }
        }
        Ok(acc)
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.dim;
        let tol = T::lit(HERMITIAN_TOL);
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                if d > tol {
                    return Err(Error::InvalidDensity(format!(
                        "not Hermitian: |ρ[{i},{j}] − conj ρ[{j},{i}]| = {d:e}"
                    )));
                }
            }
            let p = self.entries[i * n + i].re;
            if p < T::lit(-1e-10) {
                return Err(Error::InvalidDensity(format!(
                    "negative population ρ[{i},{i}] = {p:e}"
                )));
            }
        }
        Ok(())
    }

    /// Checks the full state invariants: Hermitian, nonnegative diagonal, unit trace.
    pub fn check_state(&self) -> Result<()> {
        self.check_structure()?;
        let tr = self.trace();
        if (tr.re - T::one()).abs() > T::lit(1e-10) || tr.im.abs() > T::lit(1e-10) {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        Ok(())
    }

    /// Bloch components `(Tr σ_xρ, Tr σ_yρ, Tr σ_zρ)` of a qubit state.
    pub fn bloch_vector(&self) -> Result<[T; 3]> {
        check_dim(2, self.dim)?;
        let r01 = self.entries[1];
        let two = T::lit(2.0);
        Ok([
            two * r01.re,
            -two * r01.im,
            self.entries[0].re - self.entries[3].re,
        ])
    }

    /// Inverse of [`bloch_vector`](Self::bloch_vector): `½(𝟙 + x·σ)`.
    pub fn from_bloch(v: [T; 3]) -> Self {
        let half = T::lit(0.5);
        let [x, y, z] = v;
        Self {
            dim: 2,
            entries: vec![
                Complex::new(half * (T::one() + z), T::zero()),
                Complex::new(half * x, -half * y),
                Complex::new(half * x, half * y),
                Complex::new(half * (T::one() - z), T::zero()),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn inner_examples() {
        let e0 = StateVector::<f64>::basis(2, 0).unwrap();
        let e1 = StateVector::<f64>::basis(2, 1).unwrap();
        assert_eq!(e0.inner(&e0).unwrap(), c(1.0, 0.0));
        assert_eq!(e0.inner(&e1).unwrap(), c(0.0, 0.0));
        let u = StateVector::new(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(u.inner(&e1).unwrap(), c(0.0, -1.0));
        let e3 = StateVector::<f64>::basis(3, 0).unwrap();
        assert!(matches!(
            e0.inner(&e3),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn apply_ladder_operators() {
        // index 1 is the ground state |0⟩, index 0 the excited state |1⟩
        let ground = StateVector::<f64>::basis(2, 1).unwrap();
        let excited = StateVector::<f64>::basis(2, 0).unwrap();
        let sm = LinearOperator::<f64>::sigma_minus();
        assert_eq!(sm.apply(&ground).unwrap().norm_sqr(), 0.0);
        assert_eq!(sm.apply(&excited).unwrap(), ground);

        let a = LinearOperator::<f64>::annihilation(12);
        for n in 1..=12 {
            let out = a.apply(&StateVector::basis(13, n).unwrap()).unwrap();
            let mut expected = StateVector::zeros(13);
            expected.amplitudes_mut()[n - 1] = c((n as f64).sqrt(), 0.0);
            assert_eq!(out, expected);
        }
        assert!(a.apply(&ground).is_err());
    }

    #[test]
    fn expectation_examples() {
        let ground = StateVector::<f64>::basis(2, 1).unwrap();
        let excited = StateVector::<f64>::basis(2, 0).unwrap();
        assert_eq!(
            LinearOperator::sigma_y().expectation(&ground).unwrap(),
            c(0.0, 0.0)
        );
        let proj = LinearOperator::<f64>::sigma_plus()
            .matmul(&LinearOperator::sigma_minus())
            .unwrap();
        assert_eq!(proj.expectation(&excited).unwrap(), c(1.0, 0.0));
        let n = LinearOperator::<f64>::number(12);
        let nine = StateVector::basis(13, 9).unwrap();
        assert_eq!(n.expectation(&nine).unwrap(), c(9.0, 0.0));
        let ad_a = LinearOperator::<f64>::creation(12)
            .matmul(&LinearOperator::annihilation(12))
            .unwrap();
        assert_abs_diff_eq!(ad_a.expectation(&nine).unwrap().re, 9.0, epsilon = 1e-14);
    }

    #[test]
    fn normalize_examples() {
        let v = StateVector::from_real(&[2.0, 0.0]).unwrap();
        assert_eq!(
            v.normalize().unwrap(),
            StateVector::from_real(&[1.0, 0.0]).unwrap()
        );
        let z = StateVector::<f64>::zeros(2);
        assert_eq!(z.normalize(), Err(Error::ZeroNorm));
        let w = StateVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let wn = w.normalize().unwrap();
        assert_abs_diff_eq!(wn.amplitudes()[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(wn.amplitudes()[1].im, s, epsilon = 1e-15);
        let nan = StateVector::from_real(&[f64::NAN, 1.0]).unwrap();
        assert_eq!(nan.normalize(), Err(Error::NonFinite));
    }

    #[test]
    fn pure_density_examples() {
        let excited = StateVector::<f64>::basis(2, 0).unwrap();
        let ground = StateVector::<f64>::basis(2, 1).unwrap();
        let d0 = DensityMatrix::pure(&excited);
        assert_eq!(d0.entries(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let d1 = DensityMatrix::pure(&ground);
        assert_eq!(d1.entries(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[s, s]).unwrap();
        for e in DensityMatrix::pure(&plus).entries() {
            assert_abs_diff_eq!(e.re, 0.5, epsilon = 1e-15);
            assert_eq!(e.im, 0.0);
        }
        DensityMatrix::pure(&plus).check_state().unwrap();
    }

    #[test]
    fn bloch_examples() {
        let excited = DensityMatrix::<f64>::from_real_diag(&[1.0, 0.0]);
        assert_eq!(excited.bloch_vector().unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(
            DensityMatrix::<f64>::maximally_mixed(2).bloch_vector().unwrap(),
            [0.0, 0.0, 0.0]
        );
        let half_x = DensityMatrix::<f64>::from_bloch([1.0, 0.0, 0.0]);
        assert_eq!(half_x.bloch_vector().unwrap(), [1.0, 0.0, 0.0]);
        let half_y = DensityMatrix::<f64>::from_bloch([0.0, 1.0, 0.0]);
        let y = half_y.expectation(&LinearOperator::sigma_y()).unwrap();
        assert_abs_diff_eq!(y.re, 1.0, epsilon = 1e-15);
        assert!(DensityMatrix::<f64>::maximally_mixed(3).bloch_vector().is_err());
    }

    #[test]
    fn pauli_algebra_is_exact() {
        let sp = LinearOperator::<f64>::sigma_plus();
        let sm = LinearOperator::<f64>::sigma_minus();
        assert_eq!(sp.add(&sm).unwrap().entries(), LinearOperator::<f64>::sigma_x().entries());
        let i = c(0.0, 1.0);
        assert_eq!(
            sm.sub(&sp).unwrap().scale(i).entries(),
            LinearOperator::<f64>::sigma_y().entries()
        );
        assert_eq!(
            sp.matmul(&sm).unwrap().entries(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        assert_eq!(sp, sm.adjoint());
    }

    #[test]
    fn hermitian_flag_is_validated() {
        assert!(LinearOperator::<f64>::sigma_minus().into_hermitian().is_err());
        assert!(LinearOperator::<f64>::sigma_x().is_hermitian());
        let bad = DensityMatrix::from_entries(2, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(bad, Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let v = StateVector::<f32>::from_real(&[3.0, 4.0]).unwrap();
        let n = v.normalize().unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-6);
        let z = LinearOperator::<f32>::sigma_z().expectation_re(&n).unwrap();
        assert!((z - (0.36 - 0.64)).abs() < 1e-6);
    }

    impl DensityMatrix<f64> {
        fn from_real_diag(d: &[f64]) -> Self {
            let n = d.len();
            let mut e = vec![c(0.0, 0.0); n * n];
            for (k, &x) in d.iter().enumerate() {
                e[k * n + k] = c(x, 0.0);
            }
            DensityMatrix::from_entries(n, e).unwrap()
        }
    }
}
