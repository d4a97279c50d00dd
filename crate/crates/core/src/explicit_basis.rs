//! Closed-form orthonormal basis of the maximal completely entangled
//! subspace of `ℂⁿ ⊗ ℂⁿ`.
//!
//! The subspace orthogonal to `{u_λ ⊗ u_λ}` for `2n − 1` distinct `λ` splits
//! into the antisymmetric tensors `B0` and, for each antidiagonal
//! `j = x + y` with `2 ≤ j ≤ 2n − 4`, the symmetric tensors `K_j` supported
//! on that antidiagonal whose coefficients sum to zero. Each `K_j` gets an
//! explicit basis built from a discrete Fourier family over the symmetric
//! pairs `{(x, j−x), (j−x, x)}`, plus an anchor vector through the diagonal
//! point `(j/2, j/2)` when `j` is even.
//!
//! Vectors are ordered `B0` lexicographically in `(x, y)`, then blocks by
//! ascending `j`, each block with its anchor first and then by ascending
//! Fourier index `p`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::tensor::{gram_deviation, orthogonal_complement, projector, MultipartiteSpace, Subspace};
use crate::vandermonde::{vandermonde_vector, LambdaSet};

/// Which block a basis vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockLabel {
    /// `B0`, the antisymmetric tensors.
    Antisymmetric,
    /// `K_j`, symmetric tensors on antidiagonal `j`.
    Antidiagonal(usize),
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Antisymmetric => write!(f, "B0"),
            BlockLabel::Antidiagonal(j) => write!(f, "K{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisBlock {
    pub label: BlockLabel,
    /// Vectors in `ℂⁿ ⊗ ℂⁿ`, flat index `x·n + y`.
    pub vectors: Vec<DVector<Complex64>>,
}

/// The four closed-form families, by parity of `j` and whether the
/// antidiagonal is still growing (`j ≤ n − 1`) or shrinking (`j ≥ n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntidiagonalCase {
    /// `2 ≤ j ≤ n − 1`, `j` even.
    EvenLower,
    /// `2 ≤ j ≤ n − 1`, `j` odd.
    OddLower,
    /// `n ≤ j ≤ 2n − 4`, `j` even.
    EvenUpper,
    /// `n ≤ j ≤ 2n − 4`, `j` odd.
    OddUpper,
}

/// `None` for the antidiagonals whose `K_j` vanishes (`j ∈ {0, 1, 2n−3, 2n−2}`).
pub fn antidiagonal_case(n: usize, j: usize) -> Option<AntidiagonalCase> {
    if j < 2 || j + 4 > 2 * n {
        return None;
    }
    Some(match (j <= n - 1, j % 2 == 0) {
        (true, true) => AntidiagonalCase::EvenLower,
        (true, false) => AntidiagonalCase::OddLower,
        (false, true) => AntidiagonalCase::EvenUpper,
        (false, false) => AntidiagonalCase::OddUpper,
    })
}

/// `dim K_j` as read off the four families.
pub fn block_size(n: usize, j: usize) -> usize {
    match antidiagonal_case(n, j) {
        None => 0,
        Some(AntidiagonalCase::EvenLower) => j / 2,
        Some(AntidiagonalCase::OddLower) => (j - 1) / 2,
        Some(AntidiagonalCase::EvenUpper) => (2 * n - 2 - j) / 2,
        Some(AntidiagonalCase::OddUpper) => (2 * n - 3 - j) / 2,
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDims(format!("local dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Accumulates coefficients of `|x y⟩` into a flat vector.
struct Builder {
    n: usize,
    v: DVector<Complex64>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self { n, v: DVector::zeros(n * n) }
    }

    fn ket(&mut self, x: usize, y: usize, c: Complex64) {
        self.v[x * self.n + y] += c;
    }

    /// `c (|x y⟩ + |y x⟩)`
    fn pair(&mut self, x: usize, y: usize, c: Complex64) {
        self.ket(x, y, c);
        self.ket(y, x, c);
    }

    fn scaled(self, s: f64) -> DVector<Complex64> {
        self.v.scale(s)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `e^{4iπ m p / q}`
fn phase(m: usize, p: usize, q: usize) -> Complex64 {
    Complex64::from_polar(1.0, 4.0 * PI * (m * p) as f64 / q as f64)
}

/// `{(|xy⟩ − |yx⟩)/√2 : 0 ≤ x < y ≤ n − 1}`
pub fn antisymmetric_basis(n: usize) -> Result<BasisBlock> {
    check_n(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut vectors = Vec::with_capacity(n * (n - 1) / 2);
    for x in 0..n {
        for y in x + 1..n {
            let mut b = Builder::new(n);
            b.ket(x, y, real(h));
            b.ket(y, x, real(-h));
            vectors.push(b.v);
        }
    }
    Ok(BasisBlock { label: BlockLabel::Antisymmetric, vectors })
}

/// Orthonormal basis of `K_j`. Returns an empty block for the vanishing
/// antidiagonals and rejects `j > 2n − 2`.
pub fn kj_basis(n: usize, j: usize) -> Result<BasisBlock> {
    check_n(n)?;
    if j > 2 * n - 2 {
        return Err(Error::InvalidDims(format!("antidiagonal {j} out of range 0..={}", 2 * n - 2)));
    }
    let label = BlockLabel::Antidiagonal(j);
    let Some(case) = antidiagonal_case(n, j) else {
        return Ok(BasisBlock { label, vectors: Vec::new() });
    };
    let mut vectors = Vec::new();
    match case {
        AntidiagonalCase::EvenLower => {
            let half = j / 2;
            let mut anchor = Builder::new(n);
            for m in 0..half {
                anchor.pair(m, j - m, real(1.0));
            }
            anchor.ket(half, half, real(-(j as f64)));
            vectors.push(anchor.scaled(1.0 / ((j * (j + 1)) as f64).sqrt()));
            for p in 1..half {
                let mut b = Builder::new(n);
                for m in 0..half {
                    b.pair(m, j - m, phase(m, p, j));
                }
                vectors.push(b.scaled(1.0 / (j as f64).sqrt()));
            }
        }
        AntidiagonalCase::OddLower => {
            for p in 1..=(j - 1) / 2 {
                let mut b = Builder::new(n);
                for m in 0..=(j - 1) / 2 {
                    b.pair(m, j - m, phase(m, p, j + 1));
                }
                vectors.push(b.scaled(1.0 / ((j + 1) as f64).sqrt()));
            }
        }
        AntidiagonalCase::EvenUpper => {
            let len = 2 * n - 2 - j;
            let half = len / 2;
            let mut anchor = Builder::new(n);
            for m in 0..half {
                anchor.pair(j + m + 1 - n, n - m - 1, real(1.0));
            }
            anchor.ket(j / 2, j / 2, real(-(len as f64)));
            vectors.push(anchor.scaled(1.0 / ((len * (len + 1)) as f64).sqrt()));
            for p in 1..half {
                let mut b = Builder::new(n);
                for m in 0..half {
                    b.pair(j + m + 1 - n, n - m - 1, phase(m, p, len));
                }
                vectors.push(b.scaled(1.0 / (len as f64).sqrt()));
            }
        }
        AntidiagonalCase::OddUpper => {
            let len = 2 * n - 1 - j;
            for p in 1..len / 2 {
                let mut b = Builder::new(n);
                for m in 0..len / 2 {
                    b.pair(j + m + 1 - n, n - m - 1, phase(m, p, len));
                }
                vectors.push(b.scaled(1.0 / (len as f64).sqrt()));
            }
        }
    }
    Ok(BasisBlock { label, vectors })
}

/// `B0` followed by `K_2, …, K_{2n−4}` (empty blocks omitted).
pub fn full_explicit_basis(n: usize) -> Result<Vec<BasisBlock>> {
    check_n(n)?;
    let mut blocks = vec![antisymmetric_basis(n)?];
    for j in 2..=(2 * n).saturating_sub(4) {
        let block = kj_basis(n, j)?;
        if !block.vectors.is_empty() {
            blocks.push(block);
        }
    }
    Ok(blocks)
}

/// Flattened basis with one label per vector.
pub fn labeled_vectors(blocks: &[BasisBlock]) -> (Vec<DVector<Complex64>>, Vec<BlockLabel>) {
    blocks
        .iter()
        .flat_map(|b| b.vectors.iter().map(move |v| (v.clone(), b.label)))
        .unzip()
}

/// The explicit basis as a [`Subspace`] of `ℂⁿ ⊗ ℂⁿ`.
pub fn explicit_subspace(n: usize) -> Result<Subspace> {
    let (vectors, _) = labeled_vectors(&full_explicit_basis(n)?);
    Subspace::from_orthonormal(MultipartiteSpace::uniform(n, 2)?, &vectors)
}

/// Structural checks on the explicit basis: count, orthonormality,
/// (anti)symmetry, support and the zero antidiagonal sum.
pub fn verify_explicit_basis(n: usize) -> Result<VerificationReport> {
    let blocks = full_explicit_basis(n)?;
    let mut report = VerificationReport::new("explicit-basis");
    report.input("n", n);

    let (vectors, _) = labeled_vectors(&blocks);
    report.count("vector count = (n-1)^2", vectors.len(), (n - 1) * (n - 1));
    let stacked = DMatrix::from_fn(n * n, vectors.len(), |r, c| vectors[c][r]);
    report.below("Gram deviation", gram_deviation(&stacked), 1e-12);

    let mut swap_err: f64 = 0.0;
    let mut support_err: f64 = 0.0;
    let mut sum_err: f64 = 0.0;
    let mut anti_err: f64 = 0.0;
    for block in &blocks {
        match block.label {
            BlockLabel::Antisymmetric => {
                report.count("|B0| = n(n-1)/2", block.vectors.len(), n * (n - 1) / 2);
                for v in &block.vectors {
                    for x in 0..n {
                        for y in 0..n {
                            anti_err = anti_err.max((v[x * n + y] + v[y * n + x]).norm());
                        }
                    }
                }
            }
            BlockLabel::Antidiagonal(j) => {
                report.count(format!("|B{j}|"), block.vectors.len(), block_size(n, j));
                for v in &block.vectors {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for x in 0..n {
                        for y in 0..n {
                            let c = v[x * n + y];
                            swap_err = swap_err.max((c - v[y * n + x]).norm());
                            if x + y == j {
                                sum += c;
                            } else {
                                support_err = support_err.max(c.norm());
                            }
                        }
                    }
                    sum_err = sum_err.max(sum.norm());
                }
            }
        }
    }
    report.below("B0 antisymmetry residual", anti_err, 1e-15);
    report.below("K_j swap-symmetry residual", swap_err, 1e-15);
    report.below("K_j off-antidiagonal mass", support_err, 1e-15);
    report.below("K_j antidiagonal coefficient sum", sum_err, 1e-12);
    Ok(report)
}

/// Compares the projector onto the explicit basis with the projector onto
/// the orthogonal complement of `{u_λ ⊗ u_λ : λ ∈ lambdas}`.
pub fn cross_validate_with_vandermonde(n: usize, lambdas: &LambdaSet) -> Result<VerificationReport> {
    check_n(n)?;
    if lambdas.len() != 2 * n - 1 {
        return Err(Error::DegenerateLambdas(format!(
            "need {} lambdas for n = {n}, got {}",
            2 * n - 1,
            lambdas.len()
        )));
    }
    let space = MultipartiteSpace::uniform(n, 2)?;
    let constraints: Vec<DVector<Complex64>> = lambdas
        .values()
        .iter()
        .map(|&l| {
            let u = vandermonde_vector(l, n);
            u.kronecker(&u).normalize()
        })
        .collect();
    let explicit = explicit_subspace(n)?;
    let complement = orthogonal_complement(&space, &constraints)?
        .ok_or_else(|| Error::Internal("Vandermonde complement is empty".into()))?;

    let mut report = VerificationReport::new("cross-validate");
    report.input("n", n).input("lambdas", lambdas);
    report.count("complement dimension", complement.dim(), (n - 1) * (n - 1));
    let distance = projector(&explicit).frobenius_distance(&projector(&complement));
    report.below("||P_explicit - P_complement||_F", distance, 1e-8);
    let max_overlap = constraints
        .iter()
        .flat_map(|c| (explicit.basis().adjoint() * c).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    report.below("max |<u⊗u|basis>|", max_overlap, 1e-12);
    Ok(report)
}
