//! Dense complex operators, pure states and density matrices.
//!
//! Composite spaces use the Kronecker convention: in `A ⊗ B` the index of
//! subsystem `A` varies slowest.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Default tolerance for Hermiticity, normalization and positivity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order (no validation).
pub(crate) fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn relative_tolerance(m: &DMatrix<C64>, tol: f64) -> f64 {
    tol * max_abs(m).max(1.0)
}

/// Square complex matrix acting on a finite-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(pub(crate) DMatrix<C64>);

impl Operator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        Ok(Operator(m))
    }

    /// Builds a `dim × dim` operator from entries listed row by row.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(dim, &c)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Operator(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Operator(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Operator(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Operator(DMatrix::from_diagonal(&DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&x| C64::new(x, 0.0)),
        )))
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Self {
        Operator(&a.0 * b.0.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Operator(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        Operator(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Operator(self.0.scale(c))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// Largest entrywise `|A − A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= relative_tolerance(&self.0, tol)
    }

    /// Largest entrywise `|U†U − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        max_abs(&(self.0.adjoint() * &self.0 - DMatrix::<C64>::identity(n, n)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    /// Largest entrywise difference between two operators of equal size.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs(&(&self.0 - &other.0))
    }

    /// Diagonal entries if every off-diagonal entry is exactly zero.
    pub fn diagonal_entries(&self) -> Option<Vec<C64>> {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                if i != j && self.0[(i, j)] != ZERO {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.0[(i, i)]).collect())
    }

    pub fn apply(&self, v: &StateVector) -> Result<DVector<C64>> {
        check_dim(self.dim(), v.dim())?;
        Ok(&self.0 * &v.0)
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian(DEFAULT_TOLERANCE) {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation: self.hermiticity_deviation() })
        }
    }

    pub fn require_unitary(&self) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev <= 1e-8 {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation: dev })
        }
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator(self.0 * rhs.0)
    }
}

impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator(self.0 + rhs.0)
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator(self.0 - rhs.0)
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-self.0)
    }
}

/// Pauli matrices in the basis `{|0⟩, |1⟩}` with `σ_z|0⟩ = |0⟩`.
pub mod pauli {
    use super::{Operator, C64, I, ONE, ZERO};

    pub fn x() -> Operator {
        Operator::from_row_slice(2, &[ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> Operator {
        Operator::from_row_slice(2, &[ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> Operator {
        Operator::from_row_slice(2, &[ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    /// `|0⟩⟨1|`
    pub fn raising() -> Operator {
        Operator::from_row_slice(2, &[ZERO, ONE, ZERO, ZERO]).unwrap()
    }

    /// `|1⟩⟨0|`
    pub fn lowering() -> Operator {
        Operator::from_row_slice(2, &[ZERO, ZERO, ONE, ZERO]).unwrap()
    }

    pub fn hadamard() -> Operator {
        let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        Operator::from_row_slice(2, &[h, h, h, -h]).unwrap()
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.kronecker(&b.0))
}

/// Kronecker product of a list of operators, left to right.
pub fn tensor_all(ops: &[Operator]) -> Operator {
    assert!(!ops.is_empty(), "tensor_all needs at least one factor");
    ops[1..].iter().fold(ops[0].clone(), |acc, op| tensor(&acc, op))
}

/// `op` acting on qubit `site` (0-based, most significant first) of an
/// `n`-qubit register.
pub fn qubit_operator(op: &Operator, site: usize, n: usize) -> Operator {
    assert!(site < n && op.dim() == 2, "site out of range or operator is not 2x2");
    let left = 1usize << site;
    let right = 1usize << (n - site - 1);
    tensor(&tensor(&Operator::identity(left), op), &Operator::identity(right))
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: DMatrix<C64>,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> StateVector {
        StateVector(self.vectors.column(k).into_owned())
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (k, &l) in self.values.iter().enumerate() {
            let fl = f(l);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= fl;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        self.map(|l| C64::new(l, 0.0))
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// operator.
pub fn eigh(op: &Operator) -> Result<Eigh> {
    op.require_hermitian()?;
    Ok(eigh_unchecked(&op.0))
}

pub(crate) fn eigh_unchecked(m: &DMatrix<C64>) -> Eigh {
    let e = hermitian_part(m).symmetric_eigen();
    let n = e.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&k| e.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| e.eigenvectors[(i, order[j])]);
    Eigh { values, vectors }
}

/// `exp(−iHt)` for Hermitian `H`.
pub fn unitary_propagator(h: &Operator, t: f64) -> Result<Operator> {
    let e = eigh(h)?;
    Ok(Operator(e.map(|l| C64::from_polar(1.0, -l * t))))
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(pub(crate) DVector<C64>);

impl StateVector {
    /// Accepts a vector whose Euclidean norm is 1 within the default
    /// tolerance.
    pub fn new(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if v.is_empty() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(v))
    }

    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if v.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(v.unscale(norm)))
    }

    /// Computational basis state `|k⟩`.
    ///
    /// # Panics
    /// If `k >= dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut v = DVector::zeros(dim);
        v[k] = ONE;
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector(self.0.kronecker(&other.0))
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(&self.0 * self.0.adjoint())
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        check_dim(op.dim(), self.dim())?;
        Ok(self.0.dotc(&(&op.0 * &self.0)))
    }

    /// Applies a unitary and renormalizes away rounding.
    pub fn evolve(&self, u: &Operator) -> Result<StateVector> {
        StateVector::normalized(u.apply(self)?)
    }
}

/// Which factor of a bipartite space to keep in a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(pub(crate) DMatrix<C64>);

impl DensityMatrix {
    /// Validates with [`DEFAULT_TOLERANCE`].
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_TOLERANCE)
    }

    /// Validates Hermiticity, trace and positivity. The matrix is
    /// symmetrized; eigenvalues in `[−tol, 0)` are clamped to zero and the
    /// result renormalized.
    pub fn with_tolerance(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let dev = hermiticity_deviation(&m);
        if dev > tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix { reason: "trace differs from one", value: tr.re - 1.0 });
        }
        let h = hermitian_part(&m);
        let e = eigh_unchecked(&h);
        let min = e.values.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidDensityMatrix { reason: "negative eigenvalue", value: min });
        }
        if min < 0.0 {
            let total: f64 = e.values.iter().map(|&l| l.max(0.0)).sum();
            return Ok(DensityMatrix(e.map(|l| C64::new(l.max(0.0) / total, 0.0))));
        }
        Ok(DensityMatrix(h.unscale(tr.re)))
    }

    /// Wraps a matrix the caller guarantees to be a valid state.
    pub fn new_unchecked(m: DMatrix<C64>) -> Self {
        DensityMatrix(m)
    }

    pub fn pure(psi: &StateVector) -> Self {
        psi.projector()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        DensityMatrix(DMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        if p.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidDensityMatrix { reason: "negative probability", value: 0.0 });
        }
        Self::new(Operator::from_real_diagonal(p).0)
    }

    /// Convex combination `λ a + (1 − λ) b`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, lambda: f64) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param("lambda", "must lie in [0, 1]"));
        }
        Ok(DensityMatrix(a.0.scale(lambda) + b.0.scale(1.0 - lambda)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn as_operator(&self) -> Operator {
        Operator(self.0.clone())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.0)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0.kronecker(&other.0))
    }

    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
        partial_trace(self, dims, keep)
    }

    pub fn expectation(&self, obs: &Operator) -> Result<f64> {
        expectation(self, obs)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &Operator) -> Result<DensityMatrix> {
        check_dim(u.dim(), self.dim())?;
        Ok(DensityMatrix(&u.0 * &self.0 * u.0.adjoint()))
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(&self.0 - &other.0))
    }
}

/// Traces out one factor of a bipartite state on `C^dA ⊗ C^dB`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
    Ok(DensityMatrix(partial_trace_matrix(&rho.0, dims, keep)?))
}

pub(crate) fn partial_trace_matrix(
    m: &DMatrix<C64>,
    (da, db): (usize, usize),
    keep: Subsystem,
) -> Result<DMatrix<C64>> {
    check_dim(da * db, m.nrows())?;
    Ok(match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |a, a2| (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()),
        Subsystem::B => DMatrix::from_fn(db, db, |b, b2| (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()),
    })
}

/// `Tr(ρ O)` for a Hermitian observable.
pub fn expectation(rho: &DensityMatrix, obs: &Operator) -> Result<f64> {
    check_dim(obs.dim(), rho.dim())?;
    obs.require_hermitian()?;
    let n = rho.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += rho.0[(i, j)] * obs.0[(j, i)];
        }
    }
    Ok(acc.re)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let t = tensor(&Operator::identity(2), &Operator::identity(2));
        assert_eq!(t, Operator::identity(4));
    }

    #[test]
    fn tensor_of_sigma_z() {
        let t = tensor(&pauli::z(), &pauli::z());
        assert_eq!(t, Operator::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn tensor_mixed_product() {
        let a = tensor(&pauli::x(), &Operator::identity(2));
        let b = tensor(&Operator::identity(2), &pauli::x());
        assert!((&a * &b).max_abs_diff(&tensor(&pauli::x(), &pauli::x())) < 1e-15);
    }

    #[test]
    fn eigh_of_paulis() {
        let e = eigh(&pauli::z()).unwrap();
        assert_eq!(e.values, [-1.0, 1.0]);
        let e = eigh(&pauli::x()).unwrap();
        let minus = e.vector(0);
        let plus = e.vector(1);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(plus.inner(&StateVector::from_amplitudes(&[c(s), c(s)]).unwrap()).norm(), 1.0, 1e-12));
        assert!(close(minus.inner(&StateVector::from_amplitudes(&[c(s), c(-s)]).unwrap()).norm(), 1.0, 1e-12));
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        assert!(matches!(eigh(&pauli::raising()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let rho = bell.projector();
        let red = partial_trace(&rho, (2, 2), Subsystem::A).unwrap();
        assert!(red.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_dims() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            partial_trace(&rho, (2, 3), Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expectation_values() {
        let up = StateVector::basis(2, 0).projector();
        assert_eq!(expectation(&up, &pauli::z()).unwrap(), 1.0);
        assert_eq!(expectation(&DensityMatrix::maximally_mixed(2), &pauli::x()).unwrap(), 0.0);
        assert!(expectation(&up, &pauli::raising()).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = Operator::from_real_diagonal(&[0.7, 0.7]).into_matrix();
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = Operator::from_real_diagonal(&[1.2, -0.2]).into_matrix();
        assert!(DensityMatrix::new(negative).is_err());
        let tiny = Operator::from_real_diagonal(&[1.0 + 5e-10, -5e-10]).into_matrix();
        let rho = DensityMatrix::new(tiny).unwrap();
        assert!(rho.min_eigenvalue() >= 0.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn propagator_is_unitary() {
        let h = pauli::x().scale_real(0.7) + pauli::z().scale_real(0.2);
        let u = unitary_propagator(&h, 1.3).unwrap();
        assert!(u.is_unitary(1e-12));
    }
}
