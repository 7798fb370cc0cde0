//! Seeded random numbers and random quantum objects.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::linalg::{DensityMatrix, Operator, StateVector, C64};

/// ChaCha8 generator on stream `stream` of `seed`, so independent tasks
/// sharing a seed draw from disjoint sequences.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform sample in `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Pair of independent standard normal samples (Marsaglia polar method).
pub fn normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    loop {
        let u = 2.0 * uniform(rng) - 1.0;
        let v = 2.0 * uniform(rng) - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// Standard normal samples, drawn in pairs.
pub fn normals(rng: &mut impl RngCore, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    while out.len() < n {
        let (a, b) = normal_pair(rng);
        out.push(a);
        out.push(b);
    }
    out.truncate(n);
    out
}

fn ginibre(rng: &mut impl RngCore, rows: usize, cols: usize) -> DMatrix<C64> {
    let z = normals(rng, 2 * rows * cols);
    DMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i + j * rows);
        C64::new(z[k], z[k + 1])
    })
}

/// Haar-random unitary (QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal removed).
pub fn haar_unitary(rng: &mut impl RngCore, dim: usize) -> Operator {
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Operator(q)
}

/// Haar-random pure state.
pub fn random_state(rng: &mut impl RngCore, dim: usize) -> StateVector {
    let v: DVector<C64> = ginibre(rng, dim, 1).column(0).into_owned();
    let n = v.norm();
    StateVector(v.unscale(n))
}

/// Hermitian matrix from the Gaussian unitary ensemble, `(G + G†)/2`.
pub fn random_hermitian(rng: &mut impl RngCore, dim: usize) -> Operator {
    let g = ginibre(rng, dim, dim);
    Operator((&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// Hilbert–Schmidt random density matrix `GG†/Tr(GG†)`.
pub fn random_density_matrix(rng: &mut impl RngCore, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, dim);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    DensityMatrix(m.unscale(t))
}
