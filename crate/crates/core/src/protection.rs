//! Decoherence-free subspaces and the three-qubit phase-flip code.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{eigh_unchecked, pauli, tensor, DensityMatrix, Operator, StateVector, C64};
use crate::measures::quantum_mutual_information;
use crate::random::{random_hermitian, random_state, stream_rng};

/// Relative gap below which eigenvalues are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// A subspace on which every coupling operator acts as a scalar.
#[derive(Clone, Debug)]
pub struct CommonEigenspace {
    /// Orthonormal basis, canonicalized (row-reduced, then orthonormalized).
    pub basis: Vec<StateVector>,
    /// The scalar `c_α` by which each operator acts.
    pub eigenvalues: Vec<f64>,
    /// `max_α ‖(S_α − c_α) Q‖` over the basis `Q`.
    pub residual: f64,
}

impl CommonEigenspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// All common eigenspaces of a coupling set, largest first.
#[derive(Clone, Debug)]
pub struct DfsResult {
    pub subspaces: Vec<CommonEigenspace>,
}

impl DfsResult {
    /// The largest common eigenspace, if any.
    pub fn largest(&self) -> Option<&CommonEigenspace> {
        self.subspaces.first()
    }

    pub fn dimension(&self) -> usize {
        self.largest().map_or(0, CommonEigenspace::dimension)
    }

    pub fn basis(&self) -> &[StateVector] {
        self.largest().map_or(&[], |s| s.basis.as_slice())
    }

    /// A DFS protecting at least one qubit needs two or more dimensions.
    pub fn is_nontrivial(&self) -> bool {
        self.dimension() >= 2
    }

    pub fn residual(&self) -> f64 {
        self.largest().map_or(0.0, |s| s.residual)
    }
}

fn cluster(values: &[f64]) -> Vec<(usize, usize)> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > DEGENERACY_TOLERANCE * scale {
            groups.push((start, k));
            start = k;
        }
    }
    groups
}

fn columns_of(m: &DMatrix<C64>, cols: core::ops::Range<usize>) -> DMatrix<C64> {
    m.columns(cols.start, cols.len()).into_owned()
}

/// Largest subspace of `span(q)` on which `s` acts as `lambda`, via the
/// SVD null space of `(S − λ)Q`.
fn restricted_null_space(s: &DMatrix<C64>, q: &DMatrix<C64>, lambda: f64, tol: f64) -> DMatrix<C64> {
    let n = s.nrows();
    let shifted = s - DMatrix::<C64>::identity(n, n) * C64::new(lambda, 0.0);
    let a = shifted * q;
    let k = q.ncols();
    // Pad to at least k rows so the SVD returns a full right basis.
    let a = if a.nrows() < k { a.resize_vertically(k, C64::new(0.0, 0.0)) } else { a };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= tol).collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let v = v_t.row(i).adjoint();
        out.set_column(c, &(q * v));
    }
    out
}

/// Row-reduces `Qᵀ` and orthonormalizes the rows, so equal subspaces give
/// identical bases and coordinate subspaces come out as basis vectors.
fn canonical_basis(q: &DMatrix<C64>) -> Vec<StateVector> {
    let k = q.ncols();
    let n = q.nrows();
    let mut rows = q.transpose();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == k {
            break;
        }
        let (best, mag) = (pivot_row..k).map(|r| (r, rows[(r, col)].norm())).fold((pivot_row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag < 1e-10 {
            continue;
        }
        rows.swap_rows(pivot_row, best);
        let p = rows[(pivot_row, col)];
        for j in 0..n {
            rows[(pivot_row, j)] /= p;
        }
        for r in 0..k {
            if r != pivot_row {
                let f = rows[(r, col)];
                if f.norm() > 0.0 {
                    for j in 0..n {
                        let v = rows[(pivot_row, j)];
                        rows[(r, j)] -= f * v;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    for z in rows.iter_mut() {
        if z.norm() < 1e-12 {
            *z = C64::new(0.0, 0.0);
        }
    }
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(pivot_row);
    for r in 0..pivot_row {
        let mut v: DVector<C64> = rows.row(r).transpose();
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm > 1e-10 {
            basis.push(v.unscale(norm));
        }
    }
    basis.into_iter().map(StateVector).collect()
}

/// Common eigenspaces of the coupling operators `S_α`, found by restricting
/// each operator in turn to the eigenspaces of the previous ones. Falls back
/// to an SVD null space when a restricted eigenspace is not invariant.
pub fn find_dfs(system_ops: &[Operator]) -> Result<DfsResult> {
    let Some(first) = system_ops.first() else {
        return Err(Error::param("system_ops", "at least one coupling operator is required"));
    };
    let n = first.dim();
    for op in system_ops {
        crate::linalg::check_dim(n, op.dim())?;
        op.require_hermitian()?;
    }
    let mut spaces: Vec<(DMatrix<C64>, Vec<f64>)> = vec![(DMatrix::identity(n, n), Vec::new())];
    for op in system_ops {
        let s = op.matrix();
        let scale = crate::linalg::max_abs(s).max(1.0);
        let tol = 1e-7 * scale;
        let mut next = Vec::new();
        for (q, values) in &spaces {
            let restricted = q.adjoint() * s * q;
            let e = eigh_unchecked(&restricted);
            for (lo, hi) in cluster(&e.values) {
                let lambda = e.values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
                let candidate = q * columns_of(&e.vectors, lo..hi);
                let shifted = s * &candidate - &candidate * C64::new(lambda, 0.0);
                let sub = if shifted.norm() <= tol { candidate } else { restricted_null_space(s, q, lambda, tol) };
                if sub.ncols() > 0 {
                    let mut v = values.clone();
                    v.push(lambda);
                    next.push((sub, v));
                }
            }
        }
        spaces = next;
    }
    let mut subspaces: Vec<CommonEigenspace> = spaces
        .into_iter()
        .map(|(q, eigenvalues)| {
            let basis = canonical_basis(&q);
            let qm = DMatrix::from_columns(&basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>());
            let residual = system_ops
                .iter()
                .zip(&eigenvalues)
                .map(|(op, &c)| (op.matrix() * &qm - &qm * C64::new(c, 0.0)).norm())
                .fold(0.0, f64::max);
            CommonEigenspace { basis, eigenvalues, residual }
        })
        .collect();
    subspaces.sort_by(|a, b| b.dimension().cmp(&a.dimension()));
    Ok(DfsResult { subspaces })
}

/// Dimension `C(N, N/2)` of the collective-dephasing DFS on `N` qubits.
pub fn dfs_dimension_collective(n: u32) -> Result<u128> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::param("n", "must be even and at least 2 (the zero-magnetization sector is empty otherwise)"));
    }
    let k = u128::from(n / 2);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c
            .checked_mul(u128::from(n) - i)
            .ok_or_else(|| Error::param("n", "binomial coefficient overflows u128"))?
            / (i + 1);
    }
    Ok(c)
}

/// Stirling estimate `N − ½ log₂(πN/2)` of `log₂ C(N, N/2)`.
pub fn dfs_dimension_log2_estimate(n: u32) -> f64 {
    let n = f64::from(n);
    n - 0.5 * (core::f64::consts::PI * n / 2.0).log2()
}

/// Largest system–environment mutual information (bits) reached by random
/// states of `space` under `H = Σ S_α ⊗ E_α + I ⊗ H_E`, with random
/// Hermitian `E_α`, `H_E` and random initial environment states, sampled at
/// `times`.
pub fn dfs_entanglement_probe(space: &CommonEigenspace, system_ops: &[Operator], env_dim: usize, times: &[f64], trials: usize, seed: u64) -> Result<f64> {
    if space.basis.is_empty() || system_ops.is_empty() {
        return Ok(0.0);
    }
    if env_dim < 2 {
        return Err(Error::param("env_dim", "must be at least 2"));
    }
    let n = space.basis[0].dim();
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial as u64);
        let mut h = tensor(&Operator::identity(n), &random_hermitian(&mut rng, env_dim));
        for s in system_ops {
            h = &h + &tensor(s, &random_hermitian(&mut rng, env_dim));
        }
        let coeffs = random_state(&mut rng, space.basis.len());
        let mut psi = DVector::zeros(n);
        for (b, c) in space.basis.iter().zip(coeffs.0.iter()) {
            psi += &b.0 * *c;
        }
        let system = StateVector(psi);
        let env = random_state(&mut rng, env_dim);
        let joint = system.tensor(&env);
        let e = eigh_unchecked(h.matrix());
        for &t in times {
            let u = Operator(e.map(|l| C64::from_polar(1.0, -l * t)));
            let out = joint.evolve(&u)?;
            let mi = quantum_mutual_information(&DensityMatrix::pure(&out), (n, env_dim))?;
            worst = worst.max(mi);
        }
    }
    Ok(worst)
}

/// Physical qubits in the three-bit code.
pub const CODE_QUBITS: usize = 3;
const CODE_DIM: usize = 1 << CODE_QUBITS;
const ANCILLAS: usize = 2;

fn check_logical(a: C64, b: C64) -> Result<()> {
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > crate::linalg::DEFAULT_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

fn bit(index: usize, site: usize, n: usize) -> usize {
    (index >> (n - 1 - site)) & 1
}

fn cnot(control: usize, target: usize, n: usize) -> Operator {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let j = if bit(i, control, n) == 1 { i ^ (1 << (n - 1 - target)) } else { i };
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    Operator(m)
}

fn hadamard_all(n: usize) -> Operator {
    let h = pauli::hadamard();
    crate::linalg::tensor_all(&vec![h; n])
}

fn phase_flip(qubits: &[usize]) -> Operator {
    Operator::from_fn(CODE_DIM, |i, j| {
        if i != j {
            return C64::new(0.0, 0.0);
        }
        let parity = qubits.iter().map(|&q| bit(i, q, CODE_QUBITS)).sum::<usize>() % 2;
        C64::new(if parity == 1 { -1.0 } else { 1.0 }, 0.0)
    })
}

/// `a|000⟩ + b|111⟩`, prepared from `(a|0⟩ + b|1⟩)|00⟩` by two CNOTs.
pub fn repetition_encode(a: C64, b: C64) -> Result<StateVector> {
    check_logical(a, b)?;
    let mut v = DVector::zeros(CODE_DIM);
    v[0] = a;
    v[4] = b;
    let u = &cnot(0, 2, CODE_QUBITS) * &cnot(0, 1, CODE_QUBITS);
    StateVector(v).evolve(&u)
}

/// Logical qubit held in the three-bit phase code.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeState {
    a: C64,
    b: C64,
    physical: StateVector,
}

impl CodeState {
    pub fn logical(&self) -> (C64, C64) {
        (self.a, self.b)
    }

    /// Physical state `a|+++⟩ + b|−−−⟩` in the computational basis.
    pub fn physical(&self) -> &StateVector {
        &self.physical
    }

    /// The state in the Hadamard-rotated frame, `a|000⟩ + b|111⟩`.
    pub fn rotated_frame(&self) -> StateVector {
        self.physical.evolve(&hadamard_all(CODE_QUBITS)).expect("dimensions match")
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.physical)
    }
}

/// Encodes `a|0⟩ + b|1⟩` as `a|+++⟩ + b|−−−⟩`: the redundant encoding
/// `a|000⟩ + b|111⟩` followed by a Hadamard on every qubit, so that single
/// phase flips become detectable.
pub fn encode_three_bit(a: C64, b: C64) -> Result<CodeState> {
    let rep = repetition_encode(a, b)?;
    let physical = rep.evolve(&hadamard_all(CODE_QUBITS))?;
    Ok(CodeState { a, b, physical })
}

/// `σ_z` on qubit `i` (1-based) of an `n`-qubit register, `i = 1..=n`.
/// Independent dephasing produces at most `n` such single-qubit errors.
pub fn phase_error_operators(n: usize) -> Vec<Operator> {
    (0..n).map(|q| crate::linalg::qubit_operator(&pauli::z(), q, n)).collect()
}

/// Code state after a set of phase flips, with the record of which qubits
/// were hit.
#[derive(Clone, Debug)]
pub struct ErroredState {
    pub state: StateVector,
    pub logical: (C64, C64),
    /// 1-based qubit indices, in application order.
    pub errors: Vec<usize>,
}

impl ErroredState {
    /// Qubits carrying a net flip (pairs on the same qubit cancel).
    pub fn effective_errors(&self) -> Vec<usize> {
        (1..=CODE_QUBITS).filter(|q| self.errors.iter().filter(|&&e| e == *q).count() % 2 == 1).collect()
    }
}

fn check_qubit(q: usize) -> Result<()> {
    if !(1..=CODE_QUBITS).contains(&q) {
        return Err(Error::param("qubit", alloc::format!("index {q} is outside 1..=3")));
    }
    Ok(())
}

/// `σ_z` on qubit `qubit` (1-based), or nothing for `None`.
pub fn apply_phase_error(cs: &CodeState, qubit: Option<usize>) -> Result<ErroredState> {
    apply_phase_errors(cs, qubit.as_slice())
}

/// `σ_z` on each listed qubit (1-based).
pub fn apply_phase_errors(cs: &CodeState, qubits: &[usize]) -> Result<ErroredState> {
    for &q in qubits {
        check_qubit(q)?;
    }
    let sites: Vec<usize> = qubits.iter().map(|q| q - 1).collect();
    let state = cs.physical.evolve(&phase_flip(&sites))?;
    Ok(ErroredState { state, logical: cs.logical(), errors: qubits.to_vec() })
}

/// Code qubits entangled with an environment by a dephasing contact.
#[derive(Clone, Debug)]
pub struct EntangledCodeState {
    /// Joint state, code ⊗ environment.
    pub joint: StateVector,
    pub env_dim: usize,
    pub logical: (C64, C64),
    /// `(|e₀⟩ + |e₁⟩)/2`, attached to the unflipped branch.
    pub e_identity: DVector<C64>,
    /// `(|e₀⟩ − |e₁⟩)/2`, attached to the phase-flipped branch.
    pub e_flip: DVector<C64>,
}

/// Dephasing contact on one qubit: `|0⟩|e⟩ → |0⟩|e₀⟩`, `|1⟩|e⟩ → |1⟩|e₁⟩`.
/// The result equals `|ψ⟩|e_I⟩ + σ_z|ψ⟩|e_z⟩`.
pub fn apply_entangling_phase_error(cs: &CodeState, qubit: usize, e0: &StateVector, e1: &StateVector) -> Result<EntangledCodeState> {
    check_qubit(qubit)?;
    crate::linalg::check_dim(e0.dim(), e1.dim())?;
    let de = e0.dim();
    let site = qubit - 1;
    let mut joint = DVector::zeros(CODE_DIM * de);
    for (k, amp) in cs.physical.0.iter().enumerate() {
        let env = if bit(k, site, CODE_QUBITS) == 0 { &e0.0 } else { &e1.0 };
        for e in 0..de {
            joint[k * de + e] = amp * env[e];
        }
    }
    let half = C64::new(0.5, 0.0);
    Ok(EntangledCodeState {
        joint: StateVector(joint),
        env_dim: de,
        logical: cs.logical(),
        e_identity: (&e0.0 + &e1.0) * half,
        e_flip: (&e0.0 - &e1.0) * half,
    })
}

/// Outcome of the two ancilla parity checks `X₁X₂` and `X₂X₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub parity_12: bool,
    pub parity_23: bool,
}

impl Syndrome {
    pub const ALL: [Syndrome; 4] = [
        Syndrome { parity_12: false, parity_23: false },
        Syndrome { parity_12: true, parity_23: false },
        Syndrome { parity_12: true, parity_23: true },
        Syndrome { parity_12: false, parity_23: true },
    ];

    fn from_ancilla(s: usize) -> Self {
        Syndrome { parity_12: s & 2 != 0, parity_23: s & 1 != 0 }
    }

    fn ancilla_index(self) -> usize {
        (usize::from(self.parity_12) << 1) | usize::from(self.parity_23)
    }

    /// The qubit (1-based) a single flip would have to be on.
    pub fn flagged_qubit(self) -> Option<usize> {
        match (self.parity_12, self.parity_23) {
            (false, false) => None,
            (true, false) => Some(1),
            (true, true) => Some(2),
            (false, true) => Some(3),
        }
    }

    /// Countertransformation `E_k†` for this syndrome.
    pub fn countertransformation(self) -> Operator {
        match self.flagged_qubit() {
            Some(q) => phase_flip(&[q - 1]),
            None => Operator::identity(CODE_DIM),
        }
    }
}

/// Unitary coupling the code qubits to two ancillas in `|00⟩`: rotate to
/// the Hadamard frame, write the parities of qubits (1,2) and (2,3) onto the
/// ancillas with CNOTs, rotate back. Qubits 1–3 are the code, 4–5 the
/// ancillas.
pub fn syndrome_circuit() -> Operator {
    let n = CODE_QUBITS + ANCILLAS;
    let h = tensor(&hadamard_all(CODE_QUBITS), &Operator::identity(1 << ANCILLAS));
    let checks = [(0, 3), (1, 3), (1, 4), (2, 4)].iter().fold(Operator::identity(1 << n), |acc, &(c, t)| &cnot(c, t, n) * &acc);
    &(&h * &checks) * &h
}

/// One ancilla readout: its probability and the unnormalized code ⊗
/// environment state it leaves behind.
#[derive(Clone, Debug)]
pub struct SyndromeBranch {
    pub syndrome: Syndrome,
    pub probability: f64,
    pub state: DVector<C64>,
}

/// Runs the ancilla contact on a code ⊗ environment state and splits it by
/// ancilla readout.
pub fn measure_syndrome(joint: &StateVector, env_dim: usize) -> Result<Vec<SyndromeBranch>> {
    crate::linalg::check_dim(CODE_DIM * env_dim, joint.dim())?;
    let na = 1 << ANCILLAS;
    let mut extended = DVector::zeros(CODE_DIM * na * env_dim);
    for d in 0..CODE_DIM {
        for e in 0..env_dim {
            extended[d * na * env_dim + e] = joint.0[d * env_dim + e];
        }
    }
    let u = tensor(&syndrome_circuit(), &Operator::identity(env_dim));
    let after = u.matrix() * extended;
    Ok((0..na)
        .map(|s| {
            let state = DVector::from_fn(CODE_DIM * env_dim, |k, _| {
                let (d, e) = (k / env_dim, k % env_dim);
                after[(d * na + s) * env_dim + e]
            });
            SyndromeBranch { syndrome: Syndrome::from_ancilla(s), probability: state.norm_squared(), state }
        })
        .collect())
}

/// Result of syndrome measurement and countertransformation.
#[derive(Clone, Debug)]
pub struct Correction {
    pub recovered: CodeState,
    pub syndrome: Syndrome,
    /// Qubit (1-based) receiving `σ_z`, or `None` for the identity.
    pub countertransformation: Option<usize>,
    /// `|⟨ψ_orig|ψ_rec⟩|²`.
    pub fidelity: f64,
    /// Two or more net flips: the correction completes a logical error.
    pub unrecoverable: bool,
}

fn decode(physical: &DVector<C64>) -> (C64, C64) {
    let plus = hadamard_all(CODE_QUBITS);
    let frame = plus.matrix() * physical;
    (frame[0], frame[CODE_DIM - 1])
}

/// Measures the syndrome with the ancillas, applies the matching
/// countertransformation and decodes. Pure phase-flip errors give a
/// definite syndrome; if several readouts are possible the most probable
/// one is taken.
pub fn correct_three_bit(errored: &ErroredState) -> Result<Correction> {
    let branches = measure_syndrome(&errored.state, 1)?;
    let branch = branches.iter().max_by(|x, y| x.probability.total_cmp(&y.probability)).expect("four branches");
    let syndrome = branch.syndrome;
    let corrected = syndrome.countertransformation().matrix() * branch.state.unscale(branch.probability.sqrt());
    let (a, b) = decode(&corrected);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let recovered = encode_three_bit(a, b)?;
    let (a0, b0) = errored.logical;
    let original = encode_three_bit(a0, b0)?;
    let fidelity = original.physical.inner(&recovered.physical).norm_sqr();
    Ok(Correction {
        recovered,
        syndrome,
        countertransformation: syndrome.flagged_qubit(),
        fidelity,
        unrecoverable: errored.effective_errors().len() >= 2,
    })
}

/// Ancilla contact, readout and countertransformation applied to every
/// branch of a code state entangled with its environment. Returns the
/// code's reduced state averaged over readouts.
pub fn correct_entangled(state: &EntangledCodeState) -> Result<DensityMatrix> {
    let de = state.env_dim;
    let mut rho = DMatrix::zeros(CODE_DIM, CODE_DIM);
    for br in measure_syndrome(&state.joint, de)? {
        let fixed = tensor(&br.syndrome.countertransformation(), &Operator::identity(de)).matrix() * &br.state;
        let m = DMatrix::from_fn(CODE_DIM, de, |d, e| fixed[d * de + e]);
        rho += &m * m.adjoint();
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

impl SyndromeBranch {
    pub fn ancilla_index(&self) -> usize {
        self.syndrome.ancilla_index()
    }
}
