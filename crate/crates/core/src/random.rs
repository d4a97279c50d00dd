//! Seeded random vectors, subspaces and unitaries.
//!
//! Every generator is a ChaCha8 stream derived from `(seed, stream)`, so
//! independent tasks (restarts, trials) get reproducible, non-overlapping
//! randomness without sharing state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor::{MultipartiteSpace, Subspace};

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Vector with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| complex_normal(rng))
}

/// Uniformly distributed unit vector in `ℂⁿ`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex64> {
    complex_gaussian(rng, n).normalize()
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-random `m`-dimensional subspace (QR of a Gaussian matrix).
pub fn haar_subspace<R: Rng + ?Sized>(rng: &mut R, space: &MultipartiteSpace, m: usize) -> Result<Subspace> {
    let g = complex_gaussian_matrix(rng, space.total_dim(), m);
    Subspace::from_orthonormal_columns(space.clone(), g.qr().q())
}

/// Haar-random `n × n` unitary: QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let (mut q, r) = complex_gaussian_matrix(rng, n, n).qr().unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    q
}
