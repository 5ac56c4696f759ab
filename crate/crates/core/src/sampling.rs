//! Seeded random objects: Gaussian matrices, Haar isometries, random
//! densities. Every caller passes an explicit RNG (or seed), so parallel
//! generation stays deterministic per seed.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::tensor::{DensityMatrix, StateVector, SystemLayout, C64};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal via Box–Muller.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, len: usize) -> DVector<C64> {
    DVector::from_fn(len, |_, _| gaussian_complex(rng))
}

/// Haar-distributed isometry with `cols` orthonormal columns in dimension
/// `rows`, via QR of a complex Gaussian matrix with the R-diagonal phase
/// correction.
pub fn haar_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let g = gaussian_matrix(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state on the layout.
pub fn random_state<R: Rng>(rng: &mut R, layout: &SystemLayout) -> Result<StateVector> {
    let v = gaussian_vector(rng, layout.total_dim());
    StateVector::new(layout.clone(), v)?.normalized()
}

/// Full-rank random density matrix (normalized Wishart).
pub fn random_density<R: Rng>(rng: &mut R, layout: &SystemLayout) -> Result<DensityMatrix> {
    let d = layout.total_dim();
    let g = gaussian_matrix(rng, d, d);
    let mut w = &g * g.adjoint();
    let tr = w.trace().re;
    w /= C64::new(tr, 0.0);
    DensityMatrix::new(layout.clone(), w)
}

/// Random density coefficient matrix of side `dim` (no layout attached);
/// used to mix code basis states.
pub fn random_density_coefficients<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<C64> {
    let g = gaussian_matrix(rng, dim, dim);
    let mut w = &g * g.adjoint();
    let tr = w.trace().re;
    w /= C64::new(tr, 0.0);
    w
}
