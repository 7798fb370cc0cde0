//! Time-independent Markovian generators and their deterministic
//! integration.
//!
//! A [`LindbladGenerator`] evaluates
//! `−i[H, ρ] + Σ κ_μ (L_μ ρ L_μ† − ½{L_μ†L_μ, ρ}) + extra terms`, where the
//! optional extra terms carry Born–Markov contributions that are not of
//! Lindblad form.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    check_dim, eigh_unchecked, hermitian_part, hermiticity_deviation, max_abs, pauli, DensityMatrix, Operator, C64, DEFAULT_TOLERANCE,
    I, ONE, ZERO,
};

/// Rejection threshold for negative eigenvalues of a coefficient matrix.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-8;
/// Trace and positivity drift tolerated in recorded states.
pub const DRIFT_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct LindbladTerm {
    pub rate: f64,
    pub operator: Operator,
}

impl LindbladTerm {
    pub fn new(rate: f64, operator: Operator) -> Self {
        LindbladTerm { rate, operator }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracket {
    Commutator,
    Anticommutator,
}

/// Superoperator contributions outside Lindblad form.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtraTerm {
    /// `c · A ρ B`
    Sandwich { coefficient: C64, left: Operator, right: Operator },
    /// `c · [A, B ρ ± ρ B]`
    Nested { coefficient: C64, outer: Operator, inner: Operator, bracket: Bracket },
}

/// How the dissipator was specified.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorForm {
    Diagonal,
    /// `Σ γ_αβ (F_α ρ F_β† − ½{F_β†F_α, ρ})`, diagonalized at construction.
    FirstStandard { coefficients: DMatrix<C64>, basis: Vec<Operator> },
}

#[derive(Clone, Debug)]
enum Action {
    Identity,
    Diagonal(Vec<C64>),
    Dense(DMatrix<C64>),
}

impl Action {
    fn of(op: &Operator) -> Action {
        match op.diagonal_entries() {
            Some(d) if d.iter().all(|&z| z == ONE) => Action::Identity,
            Some(d) => Action::Diagonal(d),
            None => Action::Dense(op.matrix().clone()),
        }
    }

    fn left(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        match self {
            Action::Identity => m.clone(),
            Action::Diagonal(d) => DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)]),
            Action::Dense(a) => a * m,
        }
    }

    fn right(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        match self {
            Action::Identity => m.clone(),
            Action::Diagonal(d) => DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j]),
            Action::Dense(a) => m * a,
        }
    }

    fn diagonal(&self, n: usize) -> Option<Vec<C64>> {
        match self {
            Action::Identity => Some(vec![ONE; n]),
            Action::Diagonal(d) => Some(d.clone()),
            Action::Dense(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
struct NestedGroup {
    inner: Action,
    inner_hermitian: bool,
    terms: Vec<(C64, Action, Bracket)>,
}

/// Generator rearranged for fast evaluation: elementwise rates from all
/// diagonal pieces, a dense drift `K` acting as `Kρ + ρK†`, dense jumps and
/// grouped nested terms.
#[derive(Clone, Debug)]
struct Compiled {
    dim: usize,
    elementwise: Option<DMatrix<C64>>,
    drift: Option<DMatrix<C64>>,
    jumps: Vec<(f64, DMatrix<C64>)>,
    sandwiches: Vec<(C64, Action, Action)>,
    nested: Vec<NestedGroup>,
    hermiticity_preserving: bool,
}

impl Compiled {
    fn build(h: &Operator, terms: &[LindbladTerm], extra: &[ExtraTerm]) -> Compiled {
        let n = h.dim();
        let mut elementwise = DMatrix::<C64>::zeros(n, n);
        let mut any_elementwise = false;
        let mut drift = DMatrix::<C64>::zeros(n, n);
        let mut any_drift = false;
        let mut jumps = Vec::new();

        match h.diagonal_entries() {
            Some(d) => {
                if d.iter().any(|z| *z != ZERO) {
                    any_elementwise = true;
                    for b in 0..n {
                        for a in 0..n {
                            elementwise[(a, b)] += -I * (d[a] - d[b]);
                        }
                    }
                }
            }
            None => {
                drift -= h.matrix() * I;
                any_drift = true;
            }
        }
        for t in terms {
            if t.rate == 0.0 {
                continue;
            }
            match t.operator.diagonal_entries() {
                Some(l) => {
                    any_elementwise = true;
                    for b in 0..n {
                        for a in 0..n {
                            let v = l[a] * l[b].conj() - 0.5 * l[a].norm_sqr() - 0.5 * l[b].norm_sqr();
                            elementwise[(a, b)] += v * t.rate;
                        }
                    }
                }
                None => {
                    let m = t.operator.matrix();
                    drift -= (m.adjoint() * m).scale(0.5 * t.rate);
                    any_drift = true;
                    jumps.push((t.rate, m.clone()));
                }
            }
        }
        if any_drift {
            if let Some(k) = Operator(drift.clone()).diagonal_entries() {
                any_drift = false;
                any_elementwise = true;
                for b in 0..n {
                    for a in 0..n {
                        elementwise[(a, b)] += k[a] + k[b].conj();
                    }
                }
            }
        }

        let mut sandwiches = Vec::new();
        let mut nested: Vec<NestedGroup> = Vec::new();
        for e in extra {
            match e {
                ExtraTerm::Sandwich { coefficient, left, right } => {
                    let (la, ra) = (Action::of(left), Action::of(right));
                    match (la.diagonal(n), ra.diagonal(n)) {
                        (Some(l), Some(r)) => {
                            any_elementwise = true;
                            for b in 0..n {
                                for a in 0..n {
                                    elementwise[(a, b)] += *coefficient * l[a] * r[b];
                                }
                            }
                        }
                        _ => sandwiches.push((*coefficient, la, ra)),
                    }
                }
                ExtraTerm::Nested { coefficient, outer, inner, bracket } => {
                    let oa = Action::of(outer);
                    let ia = Action::of(inner);
                    if let (Some(o), Some(i)) = (oa.diagonal(n), ia.diagonal(n)) {
                        any_elementwise = true;
                        let sign = if *bracket == Bracket::Commutator { -ONE } else { ONE };
                        for b in 0..n {
                            for a in 0..n {
                                elementwise[(a, b)] += *coefficient * (o[a] - o[b]) * (i[a] + sign * i[b]);
                            }
                        }
                        continue;
                    }
                    match nested.iter_mut().find(|g| same_action(&g.inner, &ia)) {
                        Some(g) => g.terms.push((*coefficient, oa, *bracket)),
                        None => nested.push(NestedGroup {
                            inner_hermitian: inner.hermiticity_deviation() == 0.0,
                            inner: ia,
                            terms: vec![(*coefficient, oa, *bracket)],
                        }),
                    }
                }
            }
        }

        let mut compiled = Compiled {
            dim: n,
            elementwise: any_elementwise.then_some(elementwise),
            drift: any_drift.then_some(drift),
            jumps,
            sandwiches,
            nested,
            hermiticity_preserving: false,
        };
        compiled.hermiticity_preserving = compiled.probe_hermiticity();
        compiled
    }

    fn probe_hermiticity(&self) -> bool {
        let n = self.dim;
        let probe = DMatrix::from_fn(n, n, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let re = ((1.3 * a + 0.7 * b + 0.1).sin() + 0.2) / n as f64;
            let im = if i == j { 0.0 } else { (0.9 * a - 1.1 * b).cos() / n as f64 };
            C64::new(re, if i <= j { im } else { -im })
        });
        let out = self.apply(&probe, false);
        hermiticity_deviation(&out) <= 1e-12 * max_abs(&out).max(1.0)
    }

    fn apply(&self, rho: &DMatrix<C64>, hermitian_input: bool) -> DMatrix<C64> {
        let n = self.dim;
        let mut out = match &self.elementwise {
            Some(g) => g.component_mul(rho),
            None => DMatrix::zeros(n, n),
        };
        if let Some(k) = &self.drift {
            let kr = k * rho;
            if hermitian_input {
                out += &kr + kr.adjoint();
            } else {
                out += kr + rho * k.adjoint();
            }
        }
        for (rate, l) in &self.jumps {
            let lr = l * rho;
            out += (lr * l.adjoint()).scale(*rate);
        }
        for (c, a, b) in &self.sandwiches {
            out += b.right(&a.left(rho)) * *c;
        }
        for g in &self.nested {
            let br = g.inner.left(rho);
            let rb = if hermitian_input && g.inner_hermitian { br.adjoint() } else { g.inner.right(rho) };
            for (c, outer, bracket) in &g.terms {
                let x = match bracket {
                    Bracket::Commutator => &br - &rb,
                    Bracket::Anticommutator => &br + &rb,
                };
                out += (outer.left(&x) - outer.right(&x)) * *c;
            }
        }
        out
    }
}

fn same_action(a: &Action, b: &Action) -> bool {
    match (a, b) {
        (Action::Identity, Action::Identity) => true,
        (Action::Diagonal(x), Action::Diagonal(y)) => x == y,
        (Action::Dense(x), Action::Dense(y)) => x == y,
        _ => false,
    }
}

/// Hamiltonian plus weighted Lindblad operators, optionally with extra
/// non-Lindblad terms.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    hamiltonian: Operator,
    terms: Vec<LindbladTerm>,
    extra: Vec<ExtraTerm>,
    form: GeneratorForm,
    compiled: Compiled,
}

impl LindbladGenerator {
    /// Diagonal form. Rates must be nonnegative and all operators share the
    /// Hamiltonian's dimension.
    pub fn new(hamiltonian: Operator, terms: Vec<LindbladTerm>) -> Result<Self> {
        hamiltonian.require_hermitian()?;
        for (index, t) in terms.iter().enumerate() {
            check_dim(hamiltonian.dim(), t.operator.dim())?;
            if !(t.rate >= 0.0) {
                return Err(Error::NegativeRate { index, rate: t.rate });
            }
        }
        Ok(Self::assemble(hamiltonian, terms, Vec::new(), GeneratorForm::Diagonal))
    }

    /// The zero generator on a `dim`-dimensional space.
    pub fn zero(dim: usize) -> Self {
        Self::assemble(Operator::zeros(dim), Vec::new(), Vec::new(), GeneratorForm::Diagonal)
    }

    /// First standard form with Hermitian coefficient matrix `γ` over the
    /// operator basis `F`. `γ = U diag(κ) U†` yields `L_μ = Σ_α U_αμ F_α`;
    /// eigenvalues below `−1e−8` are rejected and small negative ones
    /// dropped.
    pub fn first_standard(hamiltonian: Operator, coefficients: DMatrix<C64>, basis: Vec<Operator>) -> Result<Self> {
        hamiltonian.require_hermitian()?;
        let m = basis.len();
        if coefficients.nrows() != m || coefficients.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: coefficients.nrows() });
        }
        for f in &basis {
            check_dim(hamiltonian.dim(), f.dim())?;
        }
        let dev = hermiticity_deviation(&coefficients);
        if dev > DEFAULT_TOLERANCE * max_abs(&coefficients).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let e = eigh_unchecked(&coefficients);
        if let Some(&min) = e.values.first() {
            if min < -COEFFICIENT_TOLERANCE {
                return Err(Error::NonPositiveCoefficients { min_eigenvalue: min });
            }
        }
        let n = hamiltonian.dim();
        let mut terms = Vec::new();
        for (mu, &kappa) in e.values.iter().enumerate() {
            if kappa <= 0.0 {
                continue;
            }
            let mut l = DMatrix::<C64>::zeros(n, n);
            for (alpha, f) in basis.iter().enumerate() {
                l += f.matrix() * e.vectors[(alpha, mu)];
            }
            terms.push(LindbladTerm::new(kappa, Operator(l)));
        }
        Ok(Self::assemble(hamiltonian, terms, Vec::new(), GeneratorForm::FirstStandard { coefficients, basis }))
    }

    /// `−i[H, ρ] − Σ c_k [A_k, [A_k, ρ]]` for Hermitian `A_k` and `c_k ≥ 0`,
    /// stored as Lindblad operators `A_k` with rates `κ_k = 2c_k`.
    pub fn double_commutator(hamiltonian: Operator, terms: &[(f64, Operator)]) -> Result<Self> {
        let mut lindblad = Vec::with_capacity(terms.len());
        for (index, (c, a)) in terms.iter().enumerate() {
            if !a.is_hermitian(DEFAULT_TOLERANCE) {
                return Err(Error::NonHermitianLindblad { index });
            }
            lindblad.push(LindbladTerm::new(2.0 * c, a.clone()));
        }
        Self::new(hamiltonian, lindblad)
    }

    /// `dρ/dt = −D[σ_z, [σ_z, ρ]]` on a qubit. Expanding the double
    /// commutator gives `2D(ρ − σ_zρσ_z)`, so coherences decay at `4D`.
    pub fn pure_dephasing_qubit(d: f64) -> Result<Self> {
        Self::double_commutator(Operator::zeros(2), &[(d, pauli::z())])
    }

    /// Appends terms outside Lindblad form.
    pub fn with_extra_terms(self, extra: Vec<ExtraTerm>) -> Result<Self> {
        let n = self.dim();
        for e in &extra {
            match e {
                ExtraTerm::Sandwich { left, right, .. } => {
                    check_dim(n, left.dim())?;
                    check_dim(n, right.dim())?;
                }
                ExtraTerm::Nested { outer, inner, .. } => {
                    check_dim(n, outer.dim())?;
                    check_dim(n, inner.dim())?;
                }
            }
        }
        let mut all = self.extra;
        all.extend(extra);
        Ok(Self::assemble(self.hamiltonian, self.terms, all, self.form))
    }

    fn assemble(hamiltonian: Operator, terms: Vec<LindbladTerm>, extra: Vec<ExtraTerm>, form: GeneratorForm) -> Self {
        let compiled = Compiled::build(&hamiltonian, &terms, &extra);
        LindbladGenerator { hamiltonian, terms, extra, form, compiled }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn lindblad_terms(&self) -> &[LindbladTerm] {
        &self.terms
    }

    pub fn extra_terms(&self) -> &[ExtraTerm] {
        &self.extra
    }

    pub fn form(&self) -> &GeneratorForm {
        &self.form
    }

    /// True when no extra terms are present, so the generator is of
    /// Lindblad form and the dynamics completely positive.
    pub fn is_lindblad_form(&self) -> bool {
        self.extra.is_empty()
    }

    /// Applies the generator to an arbitrary square matrix.
    pub fn apply_matrix(&self, m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        check_dim(self.dim(), m.nrows())?;
        check_dim(self.dim(), m.ncols())?;
        Ok(self.compiled.apply(m, false))
    }

    fn apply_state(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        self.compiled.apply(m, self.compiled.hermiticity_preserving)
    }

    /// Dense `d² × d²` matrix of the generator acting on column-stacked
    /// operators.
    pub fn to_superoperator(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut s = DMatrix::<C64>::zeros(n * n, n * n);
        for j in 0..n {
            for i in 0..n {
                let mut e = DMatrix::<C64>::zeros(n, n);
                e[(i, j)] = ONE;
                let out = self.compiled.apply(&e, false);
                s.column_mut(i + j * n).copy_from_slice(out.as_slice());
            }
        }
        s
    }
}

/// `L[ρ]`: the time derivative of `ρ` under the generator.
pub fn apply_generator(gen: &LindbladGenerator, rho: &DensityMatrix) -> Result<Operator> {
    Ok(Operator(gen.apply_matrix(rho.matrix())?))
}

/// Decay rate of the coherence `ρ_ij`: `−Re L[|i⟩⟨j|]_ij`.
pub fn coherence_decay_rate(gen: &LindbladGenerator, i: usize, j: usize) -> Result<f64> {
    let n = gen.dim();
    if i >= n || j >= n {
        return Err(Error::param("index", "outside the generator's space"));
    }
    let mut e = DMatrix::<C64>::zeros(n, n);
    e[(i, j)] = ONE;
    Ok(-gen.compiled.apply(&e, false)[(i, j)].re)
}

/// Born–Markov generator for a system coupled through Hermitian operators
/// `S_α` to independent harmonic baths,
/// `−i[H, ρ] − Σ_α ∫dτ (ν_α(τ)[S_α, [S_α(−τ), ρ]] − iη_α(τ)[S_α, {S_α(−τ), ρ}])`
/// with `S(−τ) = e^{−iHτ} S e^{iHτ}`. The τ-integrals are evaluated per
/// Bohr frequency of `H`.
pub fn born_markov_generator(
    hamiltonian: &Operator,
    couplings: &[(Operator, &crate::bath::CorrelationKernelSpec)],
) -> Result<LindbladGenerator> {
    hamiltonian.require_hermitian()?;
    let n = hamiltonian.dim();
    let e = eigh_unchecked(hamiltonian.matrix());
    let v = &e.vectors;
    let mut extra = Vec::with_capacity(2 * couplings.len());
    for (index, (s, spec)) in couplings.iter().enumerate() {
        check_dim(n, s.dim())?;
        if !s.is_hermitian(DEFAULT_TOLERANCE) {
            return Err(Error::NonHermitianLindblad { index });
        }
        let s_e = v.adjoint() * s.matrix() * v;
        let mut cache: Vec<(f64, crate::bath::KernelTransforms)> = Vec::new();
        let mut b_nu = DMatrix::<C64>::zeros(n, n);
        let mut b_eta = DMatrix::<C64>::zeros(n, n);
        for m in 0..n {
            for k in 0..n {
                if s_e[(m, k)].norm() < 1e-14 * (1.0 + s.max_abs()) {
                    continue;
                }
                let w = e.values[m] - e.values[k];
                let scale = 1e-12 * (1.0 + w.abs());
                let t = match cache.iter().find(|(f, _)| (f - w.abs()).abs() <= scale) {
                    Some((_, t)) => *t,
                    None => {
                        let t = crate::bath::kernel_transforms(spec, w.abs())?;
                        cache.push((w.abs(), t));
                        t
                    }
                };
                let sgn = w.signum();
                b_nu[(m, k)] = s_e[(m, k)] * C64::new(t.nu_cos, -sgn * t.nu_sin);
                b_eta[(m, k)] = s_e[(m, k)] * C64::new(t.eta_cos, -sgn * t.eta_sin);
            }
        }
        let back = |b: DMatrix<C64>| Operator(hermitian_part(&(v * b * v.adjoint())));
        extra.push(ExtraTerm::Nested {
            coefficient: -ONE,
            outer: s.clone(),
            inner: back(b_nu),
            bracket: Bracket::Commutator,
        });
        extra.push(ExtraTerm::Nested {
            coefficient: I,
            outer: s.clone(),
            inner: back(b_eta),
            bracket: Bracket::Anticommutator,
        });
    }
    LindbladGenerator::new(hamiltonian.clone(), Vec::new())?.with_extra_terms(extra)
}

/// Fixed-step classical Runge–Kutta settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Record every `record_stride`-th step; the initial and final states
    /// are always recorded.
    pub record_stride: usize,
    /// Diagonalize each recorded state and fail on eigenvalues below
    /// `−1e−7`.
    pub check_positivity: bool,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_final: f64) -> Result<Self> {
        let cfg = IntegratorConfig { dt, t_final, record_stride: 1, check_positivity: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_stride(mut self, stride: usize) -> Result<Self> {
        self.record_stride = stride;
        self.validate()?;
        Ok(self)
    }

    pub fn with_positivity_check(mut self, on: bool) -> Self {
        self.check_positivity = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(Error::param("t_final", "must be finite and at least dt"));
        }
        if self.record_stride == 0 {
            return Err(Error::param("record_stride", "must be at least 1"));
        }
        Ok(())
    }

    /// Number of steps; the step is shrunk so that they end exactly at
    /// `t_final`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt - 1e-9).ceil().max(1.0) as usize
    }

    pub fn effective_dt(&self) -> f64 {
        self.t_final / self.n_steps() as f64
    }
}

/// Recorded states of a deterministic evolution.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("time series always holds the initial state")
    }

    /// `ρ_ij(t)` at every recorded time.
    pub fn element(&self, i: usize, j: usize) -> Vec<C64> {
        self.states.iter().map(|s| s.get(i, j)).collect()
    }
}

fn rk4_step(gen: &LindbladGenerator, rho: &DMatrix<C64>, dt: f64) -> DMatrix<C64> {
    let k1 = gen.apply_state(rho);
    let k2 = gen.apply_state(&(rho + &k1 * C64::new(0.5 * dt, 0.0)));
    let k3 = gen.apply_state(&(rho + &k2 * C64::new(0.5 * dt, 0.0)));
    let k4 = gen.apply_state(&(rho + &k3 * C64::new(dt, 0.0)));
    rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0)
}

fn check_state(m: &DMatrix<C64>, time: f64, positivity: bool) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Unstable { time });
    }
    let drift = (m.trace() - ONE).norm();
    if drift > DRIFT_TOLERANCE {
        return Err(Error::TraceDrift { time, drift });
    }
    let dev = hermiticity_deviation(m);
    if dev > 1e-8 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    if positivity {
        let min = crate::linalg::eigvalsh(m)[0];
        if min < -DRIFT_TOLERANCE {
            return Err(Error::PositivityViolated { time, min_eigenvalue: min });
        }
    }
    Ok(())
}

/// Integrates `dρ/dt = L[ρ]` from `t = 0` to `cfg.t_final`.
pub fn evolve(gen: &LindbladGenerator, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    check_dim(gen.dim(), rho0.dim())?;
    let steps = cfg.n_steps();
    let dt = cfg.effective_dt();
    let mut rho = rho0.matrix().clone();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    for k in 1..=steps {
        rho = rk4_step(gen, &rho, dt);
        if k % cfg.record_stride == 0 || k == steps {
            let t = k as f64 * dt;
            check_state(&rho, t, cfg.check_positivity)?;
            times.push(t);
            states.push(DensityMatrix(rho.clone()));
        }
    }
    Ok(TimeSeries { times, states })
}

/// Final state only, stepping with at most `dt`.
pub fn evolve_to(gen: &LindbladGenerator, rho0: &DensityMatrix, t: f64, dt: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let cfg = IntegratorConfig { dt: dt.min(t), t_final: t, record_stride: usize::MAX, check_positivity: true };
    Ok(evolve(gen, rho0, &cfg)?.final_state().clone())
}

/// Largest entrywise change of the final state when `dt` is halved.
pub fn convergence_check(gen: &LindbladGenerator, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<f64> {
    let coarse = evolve_to(gen, rho0, cfg.t_final, cfg.dt)?;
    let fine = evolve_to(gen, rho0, cfg.t_final, 0.5 * cfg.dt)?;
    Ok(coarse.max_abs_diff(&fine))
}
