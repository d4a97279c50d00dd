//! Dense complex linear algebra over `ℂ^{d₁} ⊗ … ⊗ ℂ^{d_k}`.
//!
//! Vectors and operators are stored as flat `nalgebra` objects together with
//! the [`MultipartiteSpace`] that gives the flat index its tensor structure.
//! Subsystem `0` is the slowest-varying factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Local dimensions `(d₁, …, d_k)` of a multipartite system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultipartiteSpace {
    dims: Vec<usize>,
    total: usize,
}

impl MultipartiteSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem is required".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDims(format!("subsystem {pos} has dimension 0")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDims(format!("total dimension of {dims:?} overflows")))?;
        Ok(Self { dims, total })
    }

    /// `k` copies of `ℂ^d`.
    pub fn uniform(d: usize, k: usize) -> Result<Self> {
        Self::new(vec![d; k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Product of the local dimensions over `subset`.
    pub fn subset_dim(&self, subset: &[usize]) -> usize {
        subset.iter().map(|&i| self.dims[i]).product()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        multi
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| {
                debug_assert!(x < d);
                acc * d + x
            })
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        debug_assert!(flat < self.total);
        let mut out = vec![0; self.dims.len()];
        let mut rest = flat;
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        out
    }

    /// Table of all multi-indices in flat order (`total_dim × k`, row-major).
    pub fn index_table(&self) -> Vec<usize> {
        let k = self.dims.len();
        let mut table = vec![0; self.total * k];
        for flat in 0..self.total {
            table[flat * k..(flat + 1) * k].copy_from_slice(&self.multi_index(flat));
        }
        table
    }

    /// Every nonempty subset `E` with `d(E) ≤ d(E')`, in lexicographic order
    /// of size then members. For five equal factors these are the 15 sets of
    /// size one and two.
    pub fn balanced_subsets(&self) -> Vec<Vec<usize>> {
        let k = self.dims.len();
        let mut out = Vec::new();
        for size in 1..k {
            for mask in 0u64..(1 << k) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let subset: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
                let rest: Vec<usize> = (0..k).filter(|i| mask & (1 << i) == 0).collect();
                if self.subset_dim(&subset) <= self.subset_dim(&rest) {
                    out.push(subset);
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.total {
            return Err(Error::DimensionMismatch(format!(
                "{what} has length {len}, space {:?} has dimension {}",
                self.dims, self.total
            )));
        }
        Ok(())
    }
}

/// A vector in a [`MultipartiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    space: MultipartiteSpace,
    entries: DVector<Complex64>,
}

impl ComplexVector {
    pub fn new(space: MultipartiteSpace, entries: DVector<Complex64>) -> Result<Self> {
        space.check_len(entries.len(), "vector")?;
        Ok(Self { space, entries })
    }

    /// Standard basis vector at a multi-index.
    pub fn basis(space: &MultipartiteSpace, multi: &[usize]) -> Self {
        let mut entries = DVector::zeros(space.total_dim());
        entries[space.flat_index(multi)] = Complex64::new(1.0, 0.0);
        Self { space: space.clone(), entries }
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DVector<Complex64> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn normalized(&self) -> Self {
        Self { space: self.space.clone(), entries: self.entries.normalize() }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        self.entries.dotc(&other.entries)
    }

    fn check_unit(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol::UNIT {
            return Err(Error::InvalidState(format!("expected a unit vector, norm is {n}")));
        }
        Ok(())
    }
}

/// `factor₀ ⊗ factor₁ ⊗ …`, with each factor checked against `space`.
pub fn tensor_product(
    space: &MultipartiteSpace,
    factors: &[DVector<Complex64>],
) -> Result<ComplexVector> {
    if factors.len() != space.num_parties() {
        return Err(Error::DimensionMismatch(format!(
            "{} factors supplied for a {}-party space",
            factors.len(),
            space.num_parties()
        )));
    }
    let bad: Vec<String> = factors
        .iter()
        .zip(space.dims())
        .enumerate()
        .filter(|(_, (f, &d))| f.len() != d)
        .map(|(i, (f, &d))| format!("factor {i}: length {} (expected {d})", f.len()))
        .collect();
    if !bad.is_empty() {
        return Err(Error::DimensionMismatch(bad.join("; ")));
    }
    Ok(ComplexVector { space: space.clone(), entries: kron_vectors(factors) })
}

pub(crate) fn kron_vectors(factors: &[DVector<Complex64>]) -> DVector<Complex64> {
    let mut out = DVector::from_element(1, Complex64::new(1.0, 0.0));
    for f in factors {
        let mut next = DVector::zeros(out.len() * f.len());
        for (i, a) in out.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                next[i * f.len() + j] = a * b;
            }
        }
        out = next;
    }
    out
}

/// Local factors `u₁, …, u_k` standing for the vector `u₁ ⊗ … ⊗ u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector {
    factors: Vec<DVector<Complex64>>,
}

impl ProductVector {
    /// Rejects an empty factor list and zero factors.
    pub fn new(factors: Vec<DVector<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDims("a product vector needs at least one factor".into()));
        }
        if let Some(i) = factors.iter().position(|f| f.is_empty() || f.norm() == 0.0) {
            return Err(Error::InvalidState(format!("factor {i} is the zero vector")));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[DVector<Complex64>] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.len()).collect()
    }

    pub fn space(&self) -> MultipartiteSpace {
        MultipartiteSpace::new(self.dims()).expect("factors are nonempty")
    }

    /// The flat vector `u₁ ⊗ … ⊗ u_k`.
    pub fn embed(&self) -> DVector<Complex64> {
        kron_vectors(&self.factors)
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector { space: self.space(), entries: self.embed() }
    }

    /// Same product vector with every factor scaled to unit norm.
    pub fn normalized(&self) -> Self {
        Self { factors: self.factors.iter().map(|f| f.normalize()).collect() }
    }
}

/// Split of the subsystems into `keep` and its complement, with a lookup
/// table from (kept index, traced index) to the flat index.
#[derive(Debug, Clone)]
pub struct Bipartition {
    keep: Vec<usize>,
    rest: Vec<usize>,
    keep_dim: usize,
    rest_dim: usize,
    table: Vec<usize>,
}

impl Bipartition {
    /// `keep` must be a nonempty proper subset of the subsystems. Kept
    /// subsystems keep their relative order in the reduced space.
    pub fn new(space: &MultipartiteSpace, keep: &[usize]) -> Result<Self> {
        let k = space.num_parties();
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.len() >= k {
            return Err(Error::InvalidSubset(format!(
                "kept set {keep:?} must be a nonempty proper subset of 0..{k}"
            )));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidSubset(format!("subsystem {bad} out of range 0..{k}")));
        }
        let rest: Vec<usize> = (0..k).filter(|i| !keep.contains(i)).collect();
        let keep_dim = space.subset_dim(&keep);
        let rest_dim = space.subset_dim(&rest);
        let dims = space.dims();
        let mut table = vec![0; space.total_dim()];
        for flat in 0..space.total_dim() {
            let multi = space.multi_index(flat);
            let ki = keep.iter().fold(0, |acc, &i| acc * dims[i] + multi[i]);
            let ti = rest.iter().fold(0, |acc, &i| acc * dims[i] + multi[i]);
            table[ki * rest_dim + ti] = flat;
        }
        Ok(Self { keep, rest, keep_dim, rest_dim, table })
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn rest(&self) -> &[usize] {
        &self.rest
    }

    pub fn keep_dim(&self) -> usize {
        self.keep_dim
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_dim
    }

    /// Reshape a flat vector into a `d(E) × d(E')` matrix.
    pub fn matricize(&self, v: &DVector<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.keep_dim, self.rest_dim, |k, t| v[self.table[k * self.rest_dim + t]])
    }

    /// `Tr_{E'} |a⟩⟨b|`.
    pub fn reduce_outer(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> DMatrix<Complex64> {
        self.matricize(a) * self.matricize(b).adjoint()
    }

    /// `Tr_{E'} X` for a full operator `X`.
    pub fn reduce(&self, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let r = self.rest_dim;
        DMatrix::from_fn(self.keep_dim, self.keep_dim, |k1, k2| {
            (0..r).map(|t| op[(self.table[k1 * r + t], self.table[k2 * r + t])]).sum()
        })
    }
}

/// A square operator on a [`MultipartiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    space: MultipartiteSpace,
    matrix: DMatrix<Complex64>,
}

impl ComplexOperator {
    pub fn new(space: MultipartiteSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}×{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        space.check_len(matrix.nrows(), "operator")?;
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &MultipartiteSpace) -> Self {
        let n = space.total_dim();
        Self { space: space.clone(), matrix: DMatrix::identity(n, n) }
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &ComplexVector, b: &ComplexVector) -> Result<Self> {
        if a.space != b.space {
            return Err(Error::DimensionMismatch("outer product of vectors from different spaces".into()));
        }
        Ok(Self { space: a.space.clone(), matrix: &a.entries * b.entries.adjoint() })
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.space != self.space {
            return Err(Error::DimensionMismatch("operator and vector live in different spaces".into()));
        }
        Ok(ComplexVector { space: self.space.clone(), entries: &self.matrix * &v.entries })
    }

    pub fn frobenius_distance(&self, other: &ComplexOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// `‖X − X†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    /// `‖X² − X‖_F`.
    pub fn idempotency_residual(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).norm()
    }

    /// `‖X†X − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        (self.matrix.adjoint() * &self.matrix - DMatrix::identity(n, n)).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() < tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() < tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.idempotency_residual() < tol
    }

    /// Numerical rank from the Hermitian part's eigenvalues when the operator
    /// is Hermitian, singular values otherwise.
    pub fn rank(&self) -> usize {
        if self.is_hermitian(tol::HERM) {
            let eig: Vec<f64> =
                self.matrix.clone().symmetric_eigenvalues().iter().map(|e| e.abs()).collect();
            numerical_rank(&eig)
        } else {
            numerical_rank(self.matrix.singular_values().as_slice())
        }
    }
}

/// Partial trace keeping the subsystems in `keep`.
pub fn partial_trace(op: &ComplexOperator, keep: &[usize]) -> Result<ComplexOperator> {
    let cut = Bipartition::new(&op.space, keep)?;
    let dims: Vec<usize> = cut.keep.iter().map(|&i| op.space.dims[i]).collect();
    let space = MultipartiteSpace::new(dims)?;
    Ok(ComplexOperator { space, matrix: cut.reduce(&op.matrix) })
}

/// Number of singular values above `tol::RANK · σ_max`.
pub fn numerical_rank(singular_values: &[f64]) -> usize {
    let max = singular_values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > tol::RANK * max).count()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// An orthonormal set of vectors spanning a nonzero subspace. Basis vectors
/// are the columns of a `total_dim × dim` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    space: MultipartiteSpace,
    basis: DMatrix<Complex64>,
}

impl Subspace {
    /// Wrap columns that are already orthonormal (within `tol::ORTH`); the
    /// vectors are stored unchanged.
    pub fn from_orthonormal_columns(space: MultipartiteSpace, basis: DMatrix<Complex64>) -> Result<Self> {
        space.check_len(basis.nrows(), "basis vector")?;
        if basis.ncols() == 0 {
            return Err(Error::EmptySubspace("no basis vectors".into()));
        }
        let dev = gram_deviation(&basis);
        if dev > tol::ORTH {
            return Err(Error::NotOrthonormal(format!("Gram matrix deviates from I by {dev:.3e}")));
        }
        Ok(Self { space, basis })
    }

    pub fn from_orthonormal(space: MultipartiteSpace, vectors: &[DVector<Complex64>]) -> Result<Self> {
        let basis = stack_columns(&space, vectors)?;
        Self::from_orthonormal_columns(space, basis)
    }

    /// Orthonormal basis of the span of arbitrary vectors (rank decided by
    /// singular-value thresholding).
    pub fn span_of(space: MultipartiteSpace, vectors: &[DVector<Complex64>]) -> Result<Self> {
        let m = stack_columns(&space, vectors)?;
        if m.ncols() == 0 {
            return Err(Error::EmptySubspace("span of no vectors".into()));
        }
        let svd = m.svd(true, false);
        let u = svd.u.expect("requested U");
        let keep = above_threshold(svd.singular_values.as_slice());
        if keep.is_empty() {
            return Err(Error::EmptySubspace("all vectors are zero".into()));
        }
        let basis = DMatrix::from_fn(space.total_dim(), keep.len(), |r, c| u[(r, keep[c])]);
        Ok(Self { space, basis })
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> ComplexVector {
        ComplexVector { space: self.space.clone(), entries: self.basis.column(i).into_owned() }
    }

    pub fn basis_vectors(&self) -> Vec<DVector<Complex64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal projection of a flat vector onto the subspace.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Maximum deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        gram_deviation(&self.basis)
    }
}

/// Max-entry deviation of `B†B` from the identity.
pub fn gram_deviation(basis: &DMatrix<Complex64>) -> f64 {
    let g = basis.adjoint() * basis;
    let n = g.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[(i, j)] - target).norm());
        }
    }
    dev
}

fn stack_columns(space: &MultipartiteSpace, vectors: &[DVector<Complex64>]) -> Result<DMatrix<Complex64>> {
    for (i, v) in vectors.iter().enumerate() {
        space.check_len(v.len(), &format!("vector {i}"))?;
    }
    Ok(DMatrix::from_fn(space.total_dim(), vectors.len(), |r, c| vectors[c][r]))
}

fn above_threshold(singular_values: &[f64]) -> Vec<usize> {
    let max = singular_values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Vec::new();
    }
    let mut idx: Vec<usize> =
        (0..singular_values.len()).filter(|&i| singular_values[i] > tol::RANK * max).collect();
    idx.sort_by(|&a, &b| singular_values[b].total_cmp(&singular_values[a]));
    idx
}

/// Orthogonal complement of the span of `vectors`, computed from the full
/// SVD of the stacked vectors. Returns `Ok(None)` when the complement is the
/// zero subspace.
pub fn orthogonal_complement(
    space: &MultipartiteSpace,
    vectors: &[DVector<Complex64>],
) -> Result<Option<Subspace>> {
    let n = space.total_dim();
    let stacked = stack_columns(space, vectors)?;
    if vectors.is_empty() {
        return Ok(Some(Subspace { space: space.clone(), basis: DMatrix::identity(n, n) }));
    }
    // Pad to at least n columns so that U comes out n × n.
    let cols = stacked.ncols().max(n);
    let mut padded = DMatrix::zeros(n, cols);
    padded.columns_mut(0, stacked.ncols()).copy_from(&stacked);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let sv = svd.singular_values.as_slice();
    let range = above_threshold(sv);
    let mut null: Vec<usize> = (0..u.ncols()).filter(|i| !range.contains(i)).collect();
    null.sort_unstable();
    if null.is_empty() {
        return Ok(None);
    }
    let basis = DMatrix::from_fn(n, null.len(), |r, c| u[(r, null[c])]);
    Ok(Some(Subspace { space: space.clone(), basis }))
}

/// Orthogonal projector onto `s`.
pub fn projector(s: &Subspace) -> ComplexOperator {
    ComplexOperator { space: s.space.clone(), matrix: &s.basis * s.basis.adjoint() }
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: ComplexOperator,
}

impl DensityOperator {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        let herm = max_abs(&(&op.matrix - op.matrix.adjoint()));
        if herm > tol::HERM {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        check_psd(&spectrum(&op.matrix))?;
        Ok(Self { op })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        psi.check_unit()?;
        Ok(Self { op: ComplexOperator::outer(psi, psi)? })
    }

    pub fn op(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn into_op(self) -> ComplexOperator {
        self.op
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectrum(&self.op.matrix)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    // Symmetrise so that round-off in the anti-Hermitian part cannot leak in.
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().cloned().collect()
}

fn check_psd(eigenvalues: &[f64]) -> Result<()> {
    if let Some(&neg) = eigenvalues.iter().find(|&&e| e < -tol::PSD) {
        return Err(Error::InvalidState(format!("negative eigenvalue {neg:.3e}")));
    }
    Ok(())
}

/// `−Σ λ log₂ λ` over a spectrum, with `0 log 0 = 0`. Rejects eigenvalues
/// below `−tol::PSD`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    check_psd(eigenvalues)?;
    Ok(eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum())
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    spectrum_entropy(&rho.eigenvalues()).expect("validated at construction")
}

/// Schmidt coefficients of a unit vector across `keep | rest`, descending,
/// `min(d(E), d(E'))` of them.
pub fn schmidt_coefficients(psi: &ComplexVector, keep: &[usize]) -> Result<Vec<f64>> {
    psi.check_unit()?;
    let cut = Bipartition::new(&psi.space, keep)?;
    Ok(schmidt_from_matrix(cut.matricize(&psi.entries)))
}

pub(crate) fn schmidt_from_matrix(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{self, seeded_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_vec(v: &[f64]) -> DVector<Complex64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))
    }

    fn bell() -> ComplexVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexVector::new(MultipartiteSpace::new(vec![2, 2]).unwrap(), real_vec(&[s, 0.0, 0.0, s])).unwrap()
    }

    #[test]
    fn index_round_trip() {
        let space = MultipartiteSpace::new(vec![2, 3, 4]).unwrap();
        for flat in 0..space.total_dim() {
            assert_eq!(space.flat_index(&space.multi_index(flat)), flat);
        }
        assert_eq!(space.flat_index(&[1, 0, 0]), 12);
        assert_eq!(space.flat_index(&[0, 0, 3]), 3);
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(MultipartiteSpace::new(vec![2, 0]).is_err());
        assert!(MultipartiteSpace::new(vec![]).is_err());
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let space = MultipartiteSpace::new(vec![2, 2]).unwrap();
        let v = tensor_product(&space, &[real_vec(&[1.0, 0.0]), real_vec(&[0.0, 1.0])]).unwrap();
        assert_eq!(v.entries(), &real_vec(&[0.0, 1.0, 0.0, 0.0]));
        let ones = tensor_product(&space, &[real_vec(&[1.0, 1.0]), real_vec(&[1.0, 1.0])]).unwrap();
        assert_eq!(ones.entries(), &real_vec(&[1.0; 4]));
        let u = real_vec(&[1.0, 2.0]);
        let uu = tensor_product(&space, &[u.clone(), u]).unwrap();
        assert_eq!(uu.entries(), &real_vec(&[1.0, 2.0, 2.0, 4.0]));
    }

    #[test]
    fn tensor_mismatch_names_each_factor() {
        let space = MultipartiteSpace::new(vec![2, 3]).unwrap();
        let err = tensor_product(&space, &[real_vec(&[1.0]), real_vec(&[1.0, 0.0])]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("factor 0") && msg.contains("factor 1"), "{msg}");
    }

    #[test]
    fn partial_trace_of_bell_pair_is_maximally_mixed() {
        let rho = DensityOperator::pure(&bell()).unwrap();
        let red = partial_trace(rho.op(), &[0]).unwrap();
        let expected = DMatrix::<Complex64>::identity(2, 2).scale(0.5);
        assert!((red.matrix() - expected).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = seeded_rng(3, 0);
        let space = MultipartiteSpace::new(vec![2, 3]).unwrap();
        let u = random::complex_gaussian(&mut rng, 2).normalize();
        let v = random::complex_gaussian(&mut rng, 3).normalize();
        let psi = tensor_product(&space, &[u.clone(), v.clone()]).unwrap();
        let rho = ComplexOperator::outer(&psi, &psi).unwrap();
        let red_a = partial_trace(&rho, &[0]).unwrap();
        let red_b = partial_trace(&rho, &[1]).unwrap();
        assert!((red_a.matrix() - &u * u.adjoint()).norm() < 1e-14);
        assert!((red_b.matrix() - &v * v.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_empty_or_full() {
        let rho = DensityOperator::pure(&bell()).unwrap();
        assert!(matches!(partial_trace(rho.op(), &[]), Err(Error::InvalidSubset(_))));
        assert!(matches!(partial_trace(rho.op(), &[0, 1]), Err(Error::InvalidSubset(_))));
        assert!(matches!(partial_trace(rho.op(), &[2]), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn complement_small_cases() {
        let space = MultipartiteSpace::new(vec![2]).unwrap();
        let s = orthogonal_complement(&space, &[real_vec(&[1.0, 0.0])]).unwrap().unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[(1, 0)].norm() - 1.0).abs() < 1e-14);

        let full = orthogonal_complement(&space, &[]).unwrap().unwrap();
        assert_eq!(full.dim(), 2);

        let none = orthogonal_complement(&space, &[real_vec(&[1.0, 0.0]), real_vec(&[1.0, 1.0])]).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn complement_dimension_uses_rank_not_count() {
        let space = MultipartiteSpace::new(vec![2, 2]).unwrap();
        let a = real_vec(&[1.0, 2.0, 0.0, 1.0]);
        let b = a.scale(3.0);
        let s = orthogonal_complement(&space, &[a.clone(), b]).unwrap().unwrap();
        assert_eq!(s.dim(), 3);
        assert!((s.basis().adjoint() * a).norm() < 1e-12);
    }

    #[test]
    fn projector_basics() {
        let space = MultipartiteSpace::new(vec![2]).unwrap();
        let s = Subspace::from_orthonormal(space.clone(), &[real_vec(&[1.0, 0.0])]).unwrap();
        let p = projector(&s);
        assert_eq!(p.matrix(), &DMatrix::from_diagonal(&real_vec(&[1.0, 0.0])));
        let full = orthogonal_complement(&space, &[]).unwrap().unwrap();
        assert_eq!(projector(&full).matrix(), &DMatrix::identity(2, 2));
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn from_orthonormal_rejects_non_orthonormal() {
        let space = MultipartiteSpace::new(vec![2]).unwrap();
        let err = Subspace::from_orthonormal(space, &[real_vec(&[1.0, 1.0])]).unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal(_)));
    }

    #[test]
    fn entropies() {
        let space = MultipartiteSpace::new(vec![2, 2]).unwrap();
        let pure = DensityOperator::pure(&ComplexVector::basis(&space, &[0, 1])).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);

        let mixed = ComplexOperator::new(space.clone(), DMatrix::identity(4, 4).scale(0.25)).unwrap();
        let mixed = DensityOperator::new(mixed).unwrap();
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);

        let rho = DensityOperator::pure(&bell()).unwrap();
        let marginal = DensityOperator::new(partial_trace(rho.op(), &[1]).unwrap()).unwrap();
        assert!((von_neumann_entropy(&marginal) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_operator_rejects_negative_eigenvalue() {
        let space = MultipartiteSpace::new(vec![2]).unwrap();
        let m = DMatrix::from_diagonal(&real_vec(&[1.5, -0.5]));
        let err = DensityOperator::new(ComplexOperator::new(space, m).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
        assert!(spectrum_entropy(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn schmidt_cases() {
        let space = MultipartiteSpace::new(vec![2, 2]).unwrap();
        let prod = schmidt_coefficients(&ComplexVector::basis(&space, &[1, 0]), &[0]).unwrap();
        assert_eq!(prod, vec![1.0, 0.0]);
        let s = schmidt_coefficients(&bell(), &[0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s[0] - h).abs() < 1e-14 && (s[1] - h).abs() < 1e-14);

        let not_unit = ComplexVector::new(space, real_vec(&[1.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(schmidt_coefficients(&not_unit, &[0]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn balanced_subsets_of_five_qubits() {
        let space = MultipartiteSpace::uniform(2, 5).unwrap();
        let subsets = space.balanced_subsets();
        assert_eq!(subsets.len(), 15);
        assert!(subsets.iter().all(|e| e.len() <= 2));
        assert_eq!(subsets[0], vec![0]);
        assert_eq!(subsets[5], vec![0, 1]);
    }

    #[test]
    fn balanced_subsets_unequal_dims() {
        // d(E) ≤ d(E') literally: {1} has dimension 4 > 2, so only {0} qualifies.
        let space = MultipartiteSpace::new(vec![2, 4]).unwrap();
        assert_eq!(space.balanced_subsets(), vec![vec![0]]);
        let equal = MultipartiteSpace::new(vec![3, 3]).unwrap();
        assert_eq!(equal.balanced_subsets(), vec![vec![0], vec![1]]);
    }
}
