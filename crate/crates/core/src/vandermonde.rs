//! Maximal completely entangled subspaces from Vandermonde product vectors.
//!
//! For local dimensions `d₁, …, d_k` pick `N = Σ dᵢ − k + 1` distinct complex
//! numbers `λ₁, …, λ_N` and form the product vectors
//! `u(λᵢ, d₁) ⊗ … ⊗ u(λᵢ, d_k)` with `u(λ, d) = (1, λ, …, λ^{d−1})`. Their
//! orthogonal complement has dimension `∏ dᵢ − Σ dᵢ + k − 1` and contains no
//! nonzero product vector: a product vector orthogonal to all `N` of them
//! would need some factor orthogonal to `d_j` distinct Vandermonde columns.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{complex_normal, seeded_rng};
use crate::report::VerificationReport;
use crate::tensor::{
    hermitian_eigen, numerical_rank, orthogonal_complement, projector, ComplexOperator,
    DensityOperator, MultipartiteSpace, ProductVector, Subspace,
};
use crate::tol;

/// Minimum pairwise distance for two λ values to count as distinct.
pub const MIN_LAMBDA_SEPARATION: f64 = 1e-12;

/// How a [`LambdaSet`] was generated. Recorded next to constructed
/// subspaces so a run can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum LambdaMode {
    /// `e^{2πi m/N}`, `m = 0..N`.
    RootsOfUnity,
    /// Real Chebyshev nodes `cos(π(2m+1)/(2N))`.
    Chebyshev,
    /// Roots of unity with seeded random jitter in angle and modulus.
    Jittered { seed: u64 },
    /// Values supplied by the caller.
    Explicit,
}

/// `N` pairwise distinct complex numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSet {
    pub mode: LambdaMode,
    pub values: Vec<Complex64>,
}

impl LambdaSet {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        Self::with_mode(LambdaMode::Explicit, values)
    }

    fn with_mode(mode: LambdaMode, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateLambdas("empty lambda set".into()));
        }
        for i in 0..values.len() {
            for j in 0..i {
                let gap = (values[i] - values[j]).norm();
                if gap <= MIN_LAMBDA_SEPARATION {
                    return Err(Error::DegenerateLambdas(format!(
                        "λ[{j}] and λ[{i}] are {gap:.3e} apart"
                    )));
                }
            }
        }
        Ok(Self { mode, values })
    }

    pub fn roots_of_unity(n: usize) -> Self {
        let values =
            (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
        Self::with_mode(LambdaMode::RootsOfUnity, values).expect("roots of unity are distinct")
    }

    pub fn chebyshev(n: usize) -> Self {
        let values = (0..n)
            .map(|m| Complex64::new((PI * (2 * m + 1) as f64 / (2 * n) as f64).cos(), 0.0))
            .collect();
        Self::with_mode(LambdaMode::Chebyshev, values).expect("Chebyshev nodes are distinct")
    }

    /// Roots of unity rotated by up to a quarter of their spacing and scaled
    /// into `[0.9, 1.1]`, so the set stays well separated.
    pub fn jittered(n: usize, seed: u64) -> Self {
        let mut rng = seed_rng_for_lambdas(seed);
        let values = (0..n)
            .map(|m| {
                let z = complex_normal(&mut rng);
                let angle = 2.0 * PI * (m as f64 + 0.25 * z.re.tanh()) / n as f64;
                Complex64::from_polar(1.0 + 0.1 * z.im.tanh(), angle)
            })
            .collect();
        Self::with_mode(LambdaMode::Jittered { seed }, values).expect("jittered roots are distinct")
    }

    pub fn from_mode(mode: LambdaMode, n: usize) -> Result<Self> {
        match mode {
            LambdaMode::RootsOfUnity => Ok(Self::roots_of_unity(n)),
            LambdaMode::Chebyshev => Ok(Self::chebyshev(n)),
            LambdaMode::Jittered { seed } => Ok(Self::jittered(n, seed)),
            LambdaMode::Explicit => {
                Err(Error::InvalidConfig("explicit lambda sets need their values".into()))
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn seed_rng_for_lambdas(seed: u64) -> rand_chacha::ChaCha8Rng {
    seeded_rng(seed, 0x4c41_4d42)
}

fn check_multipartite(dims: &[usize]) -> Result<()> {
    if dims.len() < 2 {
        return Err(Error::InvalidDims(format!(
            "need at least two subsystems, got {}",
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidDims("local dimensions must be at least 1".into()));
    }
    Ok(())
}

/// Number of Vandermonde constraints, `N = Σ dᵢ − k + 1`.
pub fn lambda_count(dims: &[usize]) -> Result<usize> {
    check_multipartite(dims)?;
    Ok(dims.iter().sum::<usize>() + 1 - dims.len())
}

/// Largest dimension of a completely entangled subspace:
/// `∏ dᵢ − Σ dᵢ + k − 1`.
pub fn max_ces_dim(dims: &[usize]) -> Result<usize> {
    check_multipartite(dims)?;
    let total: usize = dims.iter().product();
    // ∏ dᵢ ≥ 1 + Σ (dᵢ − 1), so this never underflows.
    Ok(total + dims.len() - 1 - dims.iter().sum::<usize>())
}

/// `(1, λ, λ², …, λ^{d−1})` with `λ⁰ = 1`, including for `λ = 0`.
pub fn vandermonde_vector(lambda: Complex64, d: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(d);
    let mut p = Complex64::new(1.0, 0.0);
    for x in 0..d {
        v[x] = p;
        p *= lambda;
    }
    v
}

/// The `N` product vectors `u(λᵢ, d₁) ⊗ … ⊗ u(λᵢ, d_k)`, checked to be
/// linearly independent.
pub fn constraint_product_vectors(
    space: &MultipartiteSpace,
    lambdas: &LambdaSet,
) -> Result<Vec<ProductVector>> {
    let n = lambda_count(space.dims())?;
    if lambdas.len() != n {
        return Err(Error::DegenerateLambdas(format!(
            "dims {:?} need {n} lambdas, got {}",
            space.dims(),
            lambdas.len()
        )));
    }
    let vectors: Vec<ProductVector> = lambdas
        .values()
        .iter()
        .map(|&l| {
            ProductVector::new(space.dims().iter().map(|&d| vandermonde_vector(l, d)).collect())
        })
        .collect::<Result<_>>()?;
    let embedded = normalized_embeddings(&vectors);
    let stacked = DMatrix::from_fn(space.total_dim(), n, |r, c| embedded[c][r]);
    let rank = numerical_rank(stacked.singular_values().as_slice());
    if rank < n {
        return Err(Error::DegenerateLambdas(format!(
            "constraint vectors have rank {rank}, expected {n}"
        )));
    }
    Ok(vectors)
}

fn normalized_embeddings(vectors: &[ProductVector]) -> Vec<DVector<Complex64>> {
    vectors.iter().map(|p| p.embed().normalize()).collect()
}

/// Orthogonal complement of the Vandermonde constraint vectors. Uses the
/// `N`-th roots of unity when `lambdas` is `None`.
pub fn construct_ces(space: &MultipartiteSpace, lambdas: Option<&LambdaSet>) -> Result<Subspace> {
    let default;
    let lambdas = match lambdas {
        Some(l) => l,
        None => {
            default = LambdaSet::roots_of_unity(lambda_count(space.dims())?);
            &default
        }
    };
    let constraints = constraint_product_vectors(space, lambdas)?;
    let expected = max_ces_dim(space.dims())?;
    let s = orthogonal_complement(space, &normalized_embeddings(&constraints))?.ok_or_else(|| {
        Error::EmptySubspace(format!(
            "dims {:?} admit no completely entangled subspace",
            space.dims()
        ))
    })?;
    if s.dim() + constraints.len() != space.total_dim() || s.dim() != expected {
        return Err(Error::Internal(format!(
            "complement has dimension {} with {} constraints in dimension {} (expected {expected})",
            s.dim(),
            constraints.len(),
            space.total_dim()
        )));
    }
    Ok(s)
}

/// Checks that every basis vector of `s` is orthogonal to every
/// (normalized) constraint vector built from `lambdas`.
pub fn verify_no_product_constraints(s: &Subspace, lambdas: &LambdaSet) -> Result<VerificationReport> {
    let space = s.space();
    let constraints = normalized_embeddings(&constraint_product_vectors(space, lambdas)?);
    let mut report = VerificationReport::new("verify-constraints");
    report.input("dims", space.dims()).input("lambdas", lambdas);

    let basis = s.basis();
    let mut max_inner: f64 = 0.0;
    let mut max_proj: f64 = 0.0;
    for c in &constraints {
        let overlaps = basis.adjoint() * c;
        max_inner = overlaps.iter().map(|z| z.norm()).fold(max_inner, f64::max);
        max_proj = max_proj.max(overlaps.norm());
    }
    report.below("max |<constraint|basis>|", max_inner, tol::ORTH);
    report.below("max ||P_S constraint||", max_proj, tol::ORTH);
    report.count("N + dim S = total dim", constraints.len() + s.dim(), space.total_dim());
    Ok(report)
}

/// Builds `ρ = Σ qᵢ |uᵢ⟩⟨uᵢ|` from unit product vectors and checks that each
/// `uᵢ` lies in the range of `ρ`, the range being taken from the
/// eigenvectors of `ρ` above the rank threshold.
pub fn separable_range_check(terms: &[(f64, ProductVector)]) -> Result<VerificationReport> {
    if terms.is_empty() {
        return Err(Error::InvalidWeights("no terms in the mixture".into()));
    }
    if let Some((i, (w, _))) = terms.iter().enumerate().find(|(_, (w, _))| !(*w > 0.0)) {
        return Err(Error::InvalidWeights(format!("weight {i} is {w}, must be positive")));
    }
    let sum: f64 = terms.iter().map(|(w, _)| w).sum();
    if (sum - 1.0).abs() > tol::TRACE {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}, expected 1")));
    }
    let space = terms[0].1.space();
    if let Some(i) = terms.iter().position(|(_, p)| p.space() != space) {
        return Err(Error::DimensionMismatch(format!("term {i} lives in a different space")));
    }

    let units: Vec<DVector<Complex64>> = terms.iter().map(|(_, p)| p.embed().normalize()).collect();
    let n = space.total_dim();
    let mut rho = DMatrix::<Complex64>::zeros(n, n);
    for ((w, _), u) in terms.iter().zip(&units) {
        rho += (u * u.adjoint()).scale(*w);
    }
    let (values, vectors) = hermitian_eigen(&rho);
    let rank = numerical_rank(&values.iter().map(|v| v.abs()).collect::<Vec<_>>());
    let range = vectors.columns(0, rank);

    let mut report = VerificationReport::new("separable-range");
    report.input("dims", space.dims()).input("terms", terms.len()).input("rank", rank);
    for (i, u) in units.iter().enumerate() {
        let inside = range * (range.adjoint() * u);
        report.below(format!("term {i}: ||(I - P_range) u||"), (u - inside).norm(), tol::ORTH);
    }
    Ok(report)
}

/// Maximally mixed state `P_S / dim S` supported on `s`.
pub fn mixed_state_on(s: &Subspace) -> DensityOperator {
    let p = projector(s);
    let m = p.matrix().unscale(s.dim() as f64);
    let op = ComplexOperator::new(s.space().clone(), m).expect("projector is square");
    DensityOperator::new(op).expect("normalized projector is a state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{seeded_rng, unit_vector};
    use crate::tensor::{schmidt_coefficients, Subspace};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn space(d: &[usize]) -> MultipartiteSpace {
        MultipartiteSpace::new(d.to_vec()).unwrap()
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(max_ces_dim(&[2, 2]).unwrap(), 1);
        assert_eq!(max_ces_dim(&[3, 3]).unwrap(), 4);
        assert_eq!(max_ces_dim(&[2, 2, 2]).unwrap(), 4);
        assert_eq!(max_ces_dim(&[1, 5]).unwrap(), 0);
        assert!(max_ces_dim(&[4]).is_err());
        assert_eq!(lambda_count(&[2, 2]).unwrap(), 3);
        assert_eq!(lambda_count(&[3, 3]).unwrap(), 5);
    }

    #[test]
    fn vandermonde_columns() {
        assert_eq!(vandermonde_vector(c(0.0), 3).as_slice(), &[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(vandermonde_vector(c(1.0), 4).as_slice(), &[c(1.0); 4]);
        assert_eq!(vandermonde_vector(c(2.0), 3).as_slice(), &[c(1.0), c(2.0), c(4.0)]);
    }

    #[test]
    fn constraint_vectors_for_two_qubits() {
        let lambdas = LambdaSet::new(vec![c(0.0), c(1.0), c(-1.0)]).unwrap();
        let vs = constraint_product_vectors(&space(&[2, 2]), &lambdas).unwrap();
        let embedded: Vec<Vec<Complex64>> = vs.iter().map(|p| p.embed().as_slice().to_vec()).collect();
        assert_eq!(embedded[0], vec![c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(embedded[1], vec![c(1.0); 4]);
        assert_eq!(embedded[2], vec![c(1.0), c(-1.0), c(-1.0), c(1.0)]);
    }

    #[test]
    fn constraint_vector_entries_are_powers_of_index_sum() {
        let lambdas = LambdaSet::roots_of_unity(5);
        let sp = space(&[3, 3]);
        let vs = constraint_product_vectors(&sp, &lambdas).unwrap();
        for (p, &l) in vs.iter().zip(lambdas.values()) {
            let e = p.embed();
            for x in 0..3 {
                for y in 0..3 {
                    assert!((e[sp.flat_index(&[x, y])] - l.powu((x + y) as u32)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn wrong_lambda_count_or_duplicates_rejected() {
        let sp = space(&[2, 2]);
        assert!(matches!(
            constraint_product_vectors(&sp, &LambdaSet::roots_of_unity(4)),
            Err(Error::DegenerateLambdas(_))
        ));
        assert!(LambdaSet::new(vec![c(1.0), c(1.0)]).is_err());
    }

    #[test]
    fn two_qubit_ces_is_the_singlet() {
        let s = construct_ces(&space(&[2, 2]), None).unwrap();
        assert_eq!(s.dim(), 1);
        let coeffs = schmidt_coefficients(&s.basis_vector(0), &[0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((coeffs[0] - h).abs() < 1e-12 && (coeffs[1] - h).abs() < 1e-12);
        // Hand solution: the complement of all symmetric vectors is the singlet.
        let singlet = [c(0.0), c(h), c(-h), c(0.0)];
        let overlap = s.basis().column(0).iter().zip(&singlet).map(|(a, b)| a.conj() * b).sum::<Complex64>();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn construction_dimensions() {
        assert_eq!(construct_ces(&space(&[3, 3]), None).unwrap().dim(), 4);
        assert_eq!(construct_ces(&space(&[2, 2, 2]), None).unwrap().dim(), 4);
        assert!(matches!(construct_ces(&space(&[1, 3]), None), Err(Error::EmptySubspace(_))));
    }

    #[test]
    fn lambda_choice_changes_nothing_about_dimension() {
        let sp = space(&[2, 3]);
        let n = lambda_count(sp.dims()).unwrap();
        for l in [LambdaSet::roots_of_unity(n), LambdaSet::chebyshev(n), LambdaSet::jittered(n, 5)] {
            assert_eq!(construct_ces(&sp, Some(&l)).unwrap().dim(), 2);
        }
    }

    #[test]
    fn constraint_verification_and_planted_violation() {
        for dims in [[3, 3].as_slice(), [2, 2, 2].as_slice()] {
            let sp = space(dims);
            let lambdas = LambdaSet::roots_of_unity(lambda_count(dims).unwrap());
            let s = construct_ces(&sp, Some(&lambdas)).unwrap();
            let r = verify_no_product_constraints(&s, &lambdas).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.check("max |<constraint|basis>|").unwrap().value < 1e-10);
        }

        let sp = space(&[3, 3]);
        let lambdas = LambdaSet::roots_of_unity(5);
        let s = construct_ces(&sp, Some(&lambdas)).unwrap();
        let c0 = constraint_product_vectors(&sp, &lambdas).unwrap()[0].embed().normalize();
        let mut vectors = s.basis_vectors();
        vectors[0] += c0.scale(1e-3);
        let perturbed = Subspace::span_of(sp, &vectors).unwrap();
        let r = verify_no_product_constraints(&perturbed, &lambdas).unwrap();
        assert!(!r.passed());
        let proj = r.check("max ||P_S constraint||").unwrap().value;
        assert!((proj - 1e-3).abs() < 1e-5, "{proj}");
        let inner = r.check("max |<constraint|basis>|").unwrap().value;
        assert!(inner > 1e-4 && inner <= proj + 1e-12, "{inner}");
    }

    #[test]
    fn separable_ranges() {
        let e = |i: usize| {
            let mut v = DVector::zeros(2);
            v[i] = c(1.0);
            v
        };
        let single = ProductVector::new(vec![e(0), e(1)]).unwrap();
        assert!(separable_range_check(&[(1.0, single)]).unwrap().passed());

        let a = ProductVector::new(vec![e(0), e(0)]).unwrap();
        let b = ProductVector::new(vec![e(1), e(1)]).unwrap();
        let r = separable_range_check(&[(0.5, a), (0.5, b)]).unwrap();
        assert!(r.passed());

        let mut rng = seeded_rng(11, 0);
        let terms: Vec<(f64, ProductVector)> = [0.2, 0.3, 0.5]
            .iter()
            .map(|&w| (w, ProductVector::new(vec![unit_vector(&mut rng, 2), unit_vector(&mut rng, 2)]).unwrap()))
            .collect();
        assert!(separable_range_check(&terms).unwrap().passed());
    }

    #[test]
    fn separable_range_rejects_bad_weights() {
        let p = ProductVector::new(vec![vandermonde_vector(c(1.0), 2); 2]).unwrap();
        assert!(matches!(separable_range_check(&[(0.5, p.clone())]), Err(Error::InvalidWeights(_))));
        assert!(matches!(
            separable_range_check(&[(1.5, p.clone()), (-0.5, p)]),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn mixed_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DVector::from_vec(vec![c(h), c(0.0), c(0.0), c(h)]);
        let s = Subspace::from_orthonormal(space(&[2, 2]), &[bell.clone()]).unwrap();
        let rho = mixed_state_on(&s);
        assert!((rho.op().matrix() - &bell * bell.adjoint()).norm() < 1e-15);

        let ces = construct_ces(&space(&[3, 3]), None).unwrap();
        let rho = mixed_state_on(&ces);
        assert!((rho.op().trace().re - 1.0).abs() < 1e-12);
        assert_eq!(rho.op().rank(), 4);
    }
}
