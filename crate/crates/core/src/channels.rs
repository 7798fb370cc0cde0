//! Kraus channels, linear maps on operators and the environment viewed as
//! an indirect measurement.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    check_dim, eigh_unchecked, eigvalsh, max_abs, partial_trace_matrix, DensityMatrix, Operator, Subsystem, C64, ONE,
    ZERO,
};

/// Completeness tolerance for Kraus and measurement operator sets.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-9;
/// Choi eigenvalues above this threshold certify complete positivity.
pub const CP_THRESHOLD: f64 = -1e-8;

/// Trace-preserving map `ρ ↦ Σ_k W_k ρ W_k†`.
///
/// Completeness is enforced as `Σ W_k† W_k = I`, the condition for trace
/// preservation.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Operator>,
    labels: Option<Vec<(usize, usize)>>,
}

fn completeness_matrix(ops: &[Operator]) -> DMatrix<C64> {
    let n = ops[0].dim();
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for w in ops {
        acc += w.matrix().adjoint() * w.matrix();
    }
    acc - DMatrix::identity(n, n)
}

impl KrausChannel {
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        Self::build(operators, None)
    }

    /// Kraus operators tagged with the environment index pairs `(i_k, j_k)`
    /// they were built from.
    pub fn with_labels(operators: Vec<Operator>, labels: Vec<(usize, usize)>) -> Result<Self> {
        if labels.len() != operators.len() {
            return Err(Error::DimensionMismatch { expected: operators.len(), found: labels.len() });
        }
        Self::build(operators, Some(labels))
    }

    fn build(operators: Vec<Operator>, labels: Option<Vec<(usize, usize)>>) -> Result<Self> {
        let first = operators.first().ok_or(Error::param("operators", "a channel needs at least one Kraus operator"))?;
        let n = first.dim();
        for w in &operators {
            check_dim(n, w.dim())?;
        }
        if operators.len() > n * n {
            return Err(Error::param("operators", "more than dim^2 Kraus operators"));
        }
        let ch = KrausChannel { operators, labels };
        let deficit = ch.completeness_deficit();
        if deficit > COMPLETENESS_TOLERANCE {
            return Err(Error::IncompleteChannel { deficit });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { operators: alloc::vec![Operator::identity(dim)], labels: None }
    }

    /// `ρ ↦ Σ p_k U_k ρ U_k†`, e.g. `{√(1−p) I, √p σ_z}` dephasing. More
    /// than `d²` terms are compressed to a minimal Kraus set.
    pub fn mixed_unitary(weights_and_unitaries: &[(f64, Operator)]) -> Result<Self> {
        let mut ops = Vec::with_capacity(weights_and_unitaries.len());
        for (p, u) in weights_and_unitaries {
            if !(*p >= 0.0) {
                return Err(Error::param("weight", "must be nonnegative"));
            }
            u.require_unitary()?;
            ops.push(u.scale_real(p.sqrt()));
        }
        if ops.len() > ops.first().map_or(0, |u| u.dim() * u.dim()) {
            ops = minimal_kraus(&ops);
        }
        Self::new(ops)
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn labels(&self) -> Option<&[(usize, usize)]> {
        self.labels.as_deref()
    }

    /// `max |Σ W_k† W_k − I|`.
    pub fn completeness_deficit(&self) -> f64 {
        max_abs(&completeness_matrix(&self.operators))
    }

    /// `max |Σ W_k W_k† − I|`, the ordering in which the completeness
    /// relation is sometimes written; it coincides with the trace-preserving
    /// condition for unital channels.
    pub fn outer_completeness_deficit(&self) -> f64 {
        let n = self.dim();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for w in &self.operators {
            acc += w.matrix() * w.matrix().adjoint();
        }
        max_abs(&(acc - DMatrix::identity(n, n)))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim(), rho.dim())?;
        Ok(DensityMatrix(self.apply_matrix(rho.matrix())))
    }

    fn apply_matrix(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::<C64>::zeros(m.nrows(), m.ncols());
        for w in &self.operators {
            out += w.matrix() * m * w.matrix().adjoint();
        }
        out
    }

    pub fn to_map(&self) -> LinearMap {
        LinearMap::from_fn(self.dim(), |x| self.apply_matrix(x))
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// Eigen-decomposition of an environment state into weights and vectors,
/// taking the computational basis directly when the state is diagonal.
fn environment_ensemble(rho_e: &DensityMatrix) -> (Vec<f64>, DMatrix<C64>) {
    let m = rho_e.matrix();
    let n = m.nrows();
    if Operator(m.clone()).diagonal_entries().is_some() {
        ((0..n).map(|i| m[(i, i)].re.max(0.0)).collect(), DMatrix::identity(n, n))
    } else {
        let e = eigh_unchecked(m);
        (e.values.iter().map(|&p| p.max(0.0)).collect(), e.vectors)
    }
}

/// `dS × dS` block `⟨b|U|a⟩` of an operator on `S ⊗ E`, contracted with
/// environment vectors `a`, `b`.
fn environment_block(u: &DMatrix<C64>, ds: usize, de: usize, bra: &[C64], ket: &[C64]) -> DMatrix<C64> {
    DMatrix::from_fn(ds, ds, |s1, s2| {
        let mut acc = ZERO;
        for (e1, b) in bra.iter().enumerate() {
            if *b == ZERO {
                continue;
            }
            for (e2, k) in ket.iter().enumerate() {
                if *k == ZERO {
                    continue;
                }
                acc += b.conj() * u[(s1 * de + e1, s2 * de + e2)] * k;
            }
        }
        acc
    })
}

/// Kraus operators `W_(i,j) = √p_i ⟨E_j|U|E_i⟩` of the reduced dynamics
/// `ρ_S ↦ Tr_E[U (ρ_S ⊗ ρ_E) U†]`, with `ρ_E = Σ p_i |E_i⟩⟨E_i|`.
/// Zero-weight components and vanishing operators are dropped. When more
/// than `dS²` operators remain they are replaced by the minimal set from
/// [`minimal_kraus`] and the labels are dropped.
pub fn kraus_from_unitary(u: &Operator, rho_e: &DensityMatrix, (ds, de): (usize, usize)) -> Result<KrausChannel> {
    check_dim(ds * de, u.dim())?;
    check_dim(de, rho_e.dim())?;
    u.require_unitary()?;
    let (weights, basis) = environment_ensemble(rho_e);
    let cols: Vec<Vec<C64>> = (0..de).map(|k| basis.column(k).iter().copied().collect()).collect();
    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (i, &p) in weights.iter().enumerate() {
        if p <= 1e-15 {
            continue;
        }
        for (j, bra) in cols.iter().enumerate() {
            let w = environment_block(u.matrix(), ds, de, bra, &cols[i]).scale(p.sqrt());
            if max_abs(&w) > 1e-14 {
                ops.push(Operator(w));
                labels.push((i, j));
            }
        }
    }
    if ops.len() > ds * ds {
        return KrausChannel::new(minimal_kraus(&ops));
    }
    KrausChannel::with_labels(ops, labels)
}

/// Minimal Kraus set `K_m = √λ_m unvec(v_m)` from the eigendecomposition of
/// `Σ_k vec(W_k) vec(W_k)†`; at most `d²` operators.
pub fn minimal_kraus(ops: &[Operator]) -> Vec<Operator> {
    let Some(first) = ops.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let mut gram = DMatrix::<C64>::zeros(d * d, d * d);
    for w in ops {
        let v = DMatrix::from_column_slice(d * d, 1, w.matrix().as_slice());
        gram += &v * v.adjoint();
    }
    let e = eigh_unchecked(&gram);
    let top = e.values.iter().fold(0.0f64, |m, &l| m.max(l));
    (0..d * d)
        .rev()
        .filter(|&k| e.values[k] > 1e-14 * top.max(1.0))
        .map(|k| {
            let col = e.vectors.column(k) * C64::new(e.values[k].sqrt(), 0.0);
            Operator(DMatrix::from_column_slice(d, d, col.as_slice()))
        })
        .collect()
}

/// Linear map on `d × d` operators as a `d² × d²` matrix acting on
/// column-stacked operators (`vec(X)_{i + j d} = X_ij`).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl LinearMap {
    pub fn new(dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.nrows() });
        }
        Ok(LinearMap { dim, matrix })
    }

    /// Tabulates `f` on the matrix units `|i⟩⟨j|`.
    pub fn from_fn(dim: usize, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        let mut matrix = DMatrix::<C64>::zeros(dim * dim, dim * dim);
        for j in 0..dim {
            for i in 0..dim {
                let mut e = DMatrix::<C64>::zeros(dim, dim);
                e[(i, j)] = ONE;
                let out = f(&e);
                matrix.column_mut(i + j * dim).copy_from_slice(out.as_slice());
            }
        }
        LinearMap { dim, matrix }
    }

    /// The transposition `X ↦ Xᵀ`: positive but not completely positive.
    pub fn transpose(dim: usize) -> Self {
        Self::from_fn(dim, |x| x.transpose())
    }

    /// `X ↦ U X U†`.
    pub fn unitary(u: &Operator) -> Self {
        let m = u.matrix().clone();
        Self::from_fn(u.dim(), move |x| &m * x * m.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn apply(&self, x: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        check_dim(self.dim, x.nrows())?;
        check_dim(self.dim, x.ncols())?;
        let v = nalgebra::DVector::from_column_slice(x.as_slice());
        let out = &self.matrix * v;
        Ok(DMatrix::from_column_slice(self.dim, self.dim, out.as_slice()))
    }

    /// `C = (1/d) Σ_ij |i⟩⟨j| ⊗ V(|i⟩⟨j|)`.
    pub fn choi(&self) -> DMatrix<C64> {
        let d = self.dim;
        let mut c = DMatrix::<C64>::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let col = self.matrix.column(i + j * d);
                for b in 0..d {
                    for a in 0..d {
                        c[(i * d + a, j * d + b)] = col[a + b * d] / d as f64;
                    }
                }
            }
        }
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpReport {
    pub cp: bool,
    pub min_choi_eigenvalue: f64,
}

/// Certifies complete positivity through the eigenvalues of the normalized
/// Choi matrix.
pub fn check_complete_positivity(map: &LinearMap) -> CpReport {
    let min = eigvalsh(&map.choi())[0];
    CpReport { cp: min >= CP_THRESHOLD, min_choi_eigenvalue: min }
}

/// `max |V(λρ₁ + (1−λ)ρ₂) − λV(ρ₁) − (1−λ)V(ρ₂)|`.
pub fn check_convex_linearity(map: &LinearMap, rho1: &DensityMatrix, rho2: &DensityMatrix, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::param("lambda", "must lie strictly between 0 and 1"));
    }
    let mixed = DensityMatrix::mix(rho1, rho2, lambda)?;
    let lhs = map.apply(mixed.matrix())?;
    let rhs = map.apply(rho1.matrix())?.scale(lambda) + map.apply(rho2.matrix())?.scale(1.0 - lambda);
    Ok(max_abs(&(lhs - rhs)))
}

fn check_projectors(projectors: &[Operator], de: usize) -> Result<()> {
    if projectors.is_empty() {
        return Err(Error::IncompleteProjectors { deficit: 1.0 });
    }
    let mut sum = DMatrix::<C64>::zeros(de, de);
    let mut deficit: f64 = 0.0;
    for (a, p) in projectors.iter().enumerate() {
        check_dim(de, p.dim())?;
        deficit = deficit.max(p.hermiticity_deviation());
        deficit = deficit.max(max_abs(&(p.matrix() * p.matrix() - p.matrix())));
        for q in &projectors[a + 1..] {
            deficit = deficit.max(max_abs(&(p.matrix() * q.matrix())));
        }
        sum += p.matrix();
    }
    deficit = deficit.max(max_abs(&(sum - DMatrix::identity(de, de))));
    if deficit > COMPLETENESS_TOLERANCE {
        return Err(Error::IncompleteProjectors { deficit });
    }
    Ok(())
}

/// Measurement operators `M_(α,i,k) = √p_i ⟨φ_αk|U|E_i⟩` grouped by the
/// outcome `α` of a projective measurement `{P_α = Σ_k |φ_αk⟩⟨φ_αk|}` on
/// the environment.
#[derive(Clone, Debug)]
pub struct MeasurementOperatorSet {
    pub outcomes: Vec<Vec<Operator>>,
}

impl MeasurementOperatorSet {
    pub fn from_unitary(u: &Operator, rho_e: &DensityMatrix, projectors: &[Operator], (ds, de): (usize, usize)) -> Result<Self> {
        check_dim(ds * de, u.dim())?;
        check_dim(de, rho_e.dim())?;
        u.require_unitary()?;
        check_projectors(projectors, de)?;
        let (weights, basis) = environment_ensemble(rho_e);
        let mut outcomes = Vec::with_capacity(projectors.len());
        for p in projectors {
            let e = eigh_unchecked(p.matrix());
            let mut ops = Vec::new();
            for (k, &lam) in e.values.iter().enumerate() {
                if lam < 0.5 {
                    continue;
                }
                let bra: Vec<C64> = e.vectors.column(k).iter().copied().collect();
                for (i, &w) in weights.iter().enumerate() {
                    if w <= 1e-15 {
                        continue;
                    }
                    let ket: Vec<C64> = basis.column(i).iter().copied().collect();
                    ops.push(Operator(environment_block(u.matrix(), ds, de, &bra, &ket).scale(w.sqrt())));
                }
            }
            outcomes.push(ops);
        }
        Ok(MeasurementOperatorSet { outcomes })
    }

    /// `max |Σ M† M − I|`.
    pub fn completeness_deficit(&self) -> f64 {
        let all: Vec<Operator> = self.outcomes.iter().flatten().cloned().collect();
        if all.is_empty() {
            return 1.0;
        }
        max_abs(&completeness_matrix(&all))
    }

    /// Outcome probability and unnormalized post-measurement state.
    fn branch(&self, alpha: usize, rho: &DMatrix<C64>) -> (f64, DMatrix<C64>) {
        let mut out = DMatrix::<C64>::zeros(rho.nrows(), rho.ncols());
        for m in &self.outcomes[alpha] {
            out += m.matrix() * rho * m.matrix().adjoint();
        }
        (out.trace().re, out)
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub probability: f64,
    /// Undefined (`None`) for outcomes of zero probability.
    pub conditional_state: Option<DensityMatrix>,
}

/// Couples `S` to `E` with `U`, measures `E` projectively and returns the
/// outcome statistics with the conditional system states.
pub fn indirect_measurement(
    u: &Operator,
    rho_s: &DensityMatrix,
    rho_e: &DensityMatrix,
    projectors: &[Operator],
) -> Result<Vec<MeasurementOutcome>> {
    let (ds, de) = (rho_s.dim(), rho_e.dim());
    let set = MeasurementOperatorSet::from_unitary(u, rho_e, projectors, (ds, de))?;
    Ok((0..projectors.len())
        .map(|alpha| {
            let (p, m) = set.branch(alpha, rho_s.matrix());
            let conditional_state = (p > 1e-14).then(|| DensityMatrix(m.unscale(p)));
            MeasurementOutcome { probability: p.max(0.0), conditional_state }
        })
        .collect())
}

/// Direct route for `indirect_measurement`: evolve the product state and
/// project the environment.
pub fn indirect_measurement_direct(
    u: &Operator,
    rho_s: &DensityMatrix,
    rho_e: &DensityMatrix,
    projectors: &[Operator],
) -> Result<Vec<MeasurementOutcome>> {
    let (ds, de) = (rho_s.dim(), rho_e.dim());
    check_dim(ds * de, u.dim())?;
    check_projectors(projectors, de)?;
    let full = u.matrix() * rho_s.tensor(rho_e).matrix() * u.matrix().adjoint();
    projectors
        .iter()
        .map(|p| {
            let lifted = Operator::identity(ds).matrix().kronecker(p.matrix());
            let projected = &lifted * &full * &lifted;
            let reduced = partial_trace_matrix(&projected, (ds, de), Subsystem::A)?;
            let prob = reduced.trace().re;
            let conditional_state = (prob > 1e-14).then(|| DensityMatrix(reduced.unscale(prob)));
            Ok(MeasurementOutcome { probability: prob.max(0.0), conditional_state })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, StateVector};

    fn cnot() -> Operator {
        Operator::from_real_rows(4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]).unwrap()
    }

    fn plus() -> DensityMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap().projector()
    }

    #[test]
    fn dephasing_channel_by_hand() {
        let p = 0.25;
        let ch = KrausChannel::mixed_unitary(&[(1.0 - p, Operator::identity(2)), (p, pauli::z())]).unwrap();
        let out = apply_channel(&ch, &plus()).unwrap();
        assert!((out.get(0, 1).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn incomplete_channel_reports_deficit() {
        let r = KrausChannel::new(alloc::vec![pauli::z().scale_real(0.5)]);
        match r {
            Err(Error::IncompleteChannel { deficit }) => assert!((deficit - 0.75).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cnot_gives_full_dephasing() {
        let e0 = StateVector::basis(2, 0).projector();
        let ch = kraus_from_unitary(&cnot(), &e0, (2, 2)).unwrap();
        let ops = ch.operators();
        assert_eq!(ops.len(), 2);
        assert_eq!(ops[0], Operator::from_real_diagonal(&[1.0, 0.0]));
        assert_eq!(ops[1], Operator::from_real_diagonal(&[0.0, 1.0]));
        assert_eq!(ch.labels().unwrap(), &[(0, 0), (0, 1)]);
    }

    #[test]
    fn transposition_is_not_cp() {
        let r = check_complete_positivity(&LinearMap::transpose(2));
        assert!(!r.cp);
        assert!((r.min_choi_eigenvalue + 0.5).abs() < 1e-12);
        let r = check_complete_positivity(&LinearMap::unitary(&pauli::hadamard()));
        assert!(r.cp);
    }

    #[test]
    fn cnot_measurement_outcomes() {
        let e0 = StateVector::basis(2, 0).projector();
        let proj = [Operator::from_real_diagonal(&[1.0, 0.0]), Operator::from_real_diagonal(&[0.0, 1.0])];
        let out = indirect_measurement(&cnot(), &plus(), &e0, &proj).unwrap();
        assert!((out[0].probability - 0.5).abs() < 1e-15);
        assert!((out[1].probability - 0.5).abs() < 1e-15);
        let s0 = out[0].conditional_state.as_ref().unwrap();
        let s1 = out[1].conditional_state.as_ref().unwrap();
        assert!(s0.max_abs_diff(&StateVector::basis(2, 0).projector()) < 1e-15);
        assert!(s1.max_abs_diff(&StateVector::basis(2, 1).projector()) < 1e-15);
    }

    #[test]
    fn incomplete_projectors_rejected() {
        let e0 = StateVector::basis(2, 0).projector();
        let proj = [Operator::from_real_diagonal(&[1.0, 0.0])];
        assert!(matches!(
            indirect_measurement(&cnot(), &plus(), &e0, &proj),
            Err(Error::IncompleteProjectors { .. })
        ));
    }
}
