//! Numerical search for product vectors inside a subspace.
//!
//! [`seesaw_search`] maximises `F(u₁, …, u_k) = ‖P_S (u₁ ⊗ … ⊗ u_k)‖²` over
//! unit factors. With all factors but `uᵢ` fixed, `F = uᵢ† Mᵢ uᵢ` for a
//! positive semidefinite `dᵢ × dᵢ` matrix `Mᵢ`, so replacing `uᵢ` by the top
//! eigenvector of `Mᵢ` never decreases `F`. `F = 1` exactly when the product
//! vector lies in `S`.
//!
//! A `NoneFound` verdict is heuristic evidence only: the search can miss a
//! product vector. [`exact_oracle_2x2`] decides the question exactly for
//! `ℂ² ⊗ ℂ²`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{haar_subspace, seeded_rng, unit_vector};
use crate::report::VerificationReport;
use crate::tensor::{hermitian_eigen, kron_vectors, MultipartiteSpace, ProductVector, Subspace};
use crate::vandermonde::max_ces_dim;

/// Overlap threshold for claiming a product vector was found.
pub const FOUND_TOL: f64 = 1e-9;
/// Overlap gap required before reporting that none was found.
pub const NONE_FOUND_TOL: f64 = 1e-6;


#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// A restart stops once one sweep improves `F` by less than this.
    pub tol_converge: f64,
    /// Verdict is `ProductFound` iff `best_overlap > 1 − tol_decision`.
    pub tol_decision: f64,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { restarts: 50, max_iters: 5000, tol_converge: 1e-15, tol_decision: NONE_FOUND_TOL, seed: 0 }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.tol_converge > 0.0) || !(self.tol_decision > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ProductFound,
    NoneFound,
}

/// One restart of the alternating maximisation.
#[derive(Debug, Clone)]
pub struct RestartTrace {
    /// Unit factors at the end of the run.
    pub factors: Vec<DVector<Complex64>>,
    /// `F` after initialisation, then after each full sweep.
    pub values: Vec<f64>,
    pub converged: bool,
}

impl RestartTrace {
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("at least the initial value")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best_overlap: f64,
    /// Unit factors of the best product vector seen.
    pub witness: ProductVector,
    pub per_restart_values: Vec<f64>,
    pub unconverged_restarts: Vec<usize>,
    pub verdict: Verdict,
}

/// Precomputed data for evaluating `F` and the contracted matrices `Mᵢ`.
struct Objective<'a> {
    dims: &'a [usize],
    index: Vec<usize>,
    /// Rows are `conj(b)` for each basis vector `b`.
    basis_conj: DMatrix<Complex64>,
}

impl<'a> Objective<'a> {
    fn new(s: &'a Subspace) -> Self {
        Self {
            dims: s.space().dims(),
            index: s.space().index_table(),
            basis_conj: s.basis().adjoint(),
        }
    }

    fn value(&self, factors: &[DVector<Complex64>]) -> f64 {
        (&self.basis_conj * kron_vectors(factors)).norm_squared()
    }

    /// `Mᵢ = Σ_b conj(w_b) w_bᵀ`, where `⟨b|u⟩ = w_bᵀ uᵢ`.
    fn contracted(&self, factors: &[DVector<Complex64>], i: usize) -> DMatrix<Complex64> {
        let k = self.dims.len();
        let total = self.index.len() / k;
        let di = self.dims[i];
        // g[x] = ∏_{j≠i} u_j[x_j]
        let g: Vec<Complex64> = (0..total)
            .map(|x| {
                let multi = &self.index[x * k..(x + 1) * k];
                (0..k).filter(|&j| j != i).map(|j| factors[j][multi[j]]).product()
            })
            .collect();
        let m = self.basis_conj.nrows();
        let mut w = DMatrix::<Complex64>::zeros(m, di);
        for x in 0..total {
            let xi = self.index[x * k + i];
            for b in 0..m {
                w[(b, xi)] += self.basis_conj[(b, x)] * g[x];
            }
        }
        // M = W† W with W rows w_bᵀ gives Σ conj(w_b) w_bᵀ.
        w.adjoint() * w
    }

    fn run(&self, mut factors: Vec<DVector<Complex64>>, max_iters: usize, tol: f64) -> RestartTrace {
        let mut values = vec![self.value(&factors)];
        let mut converged = false;
        for _ in 0..max_iters {
            for i in 0..factors.len() {
                let (_, vecs) = hermitian_eigen(&self.contracted(&factors, i));
                factors[i] = vecs.column(0).into_owned().normalize();
            }
            let prev = *values.last().unwrap();
            let next = self.value(&factors);
            values.push(next);
            if next - prev < tol {
                converged = true;
                break;
            }
        }
        RestartTrace { factors, values, converged }
    }
}

/// Single seesaw run from given initial factors.
pub fn seesaw_restart(
    s: &Subspace,
    initial: Vec<DVector<Complex64>>,
    max_iters: usize,
    tol_converge: f64,
) -> Result<RestartTrace> {
    let dims = s.space().dims();
    if initial.len() != dims.len() || initial.iter().zip(dims).any(|(f, &d)| f.len() != d) {
        return Err(Error::DimensionMismatch("initial factors do not match the space".into()));
    }
    let initial = initial.into_iter().map(|f| f.normalize()).collect();
    Ok(Objective::new(s).run(initial, max_iters, tol_converge))
}

/// Multi-start seesaw. Restart `r` draws its initial factors from the
/// stream `(cfg.seed, r)`; the outcome is independent of thread scheduling.
pub fn seesaw_search(s: &Subspace, cfg: &SeesawConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let dims = s.space().dims();
    if dims.len() < 2 {
        return Err(Error::InvalidDims("product search needs at least two subsystems".into()));
    }
    let objective = Objective::new(s);
    let traces: Vec<RestartTrace> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(cfg.seed, r as u64);
            let init = dims.iter().map(|&d| unit_vector(&mut rng, d)).collect();
            objective.run(init, cfg.max_iters, cfg.tol_converge)
        })
        .collect();

    let per_restart_values: Vec<f64> = traces.iter().map(|t| t.final_value()).collect();
    let best = (0..traces.len())
        .reduce(|a, b| if per_restart_values[b] > per_restart_values[a] { b } else { a })
        .expect("restarts ≥ 1");
    let best_overlap = per_restart_values[best].clamp(0.0, 1.0);
    let verdict =
        if best_overlap > 1.0 - cfg.tol_decision { Verdict::ProductFound } else { Verdict::NoneFound };
    Ok(SearchOutcome {
        best_overlap,
        witness: ProductVector::new(traces[best].factors.clone())?,
        per_restart_values,
        unconverged_restarts: traces.iter().enumerate().filter(|(_, t)| !t.converged).map(|(i, _)| i).collect(),
        verdict,
    })
}

/// Exact answer for a subspace of `ℂ² ⊗ ℂ²`.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdict {
    HasProduct(ProductVector),
    NoProduct,
}

/// Determinant threshold for a single unit vector to count as product.
pub const DET_TOL: f64 = 1e-12;

/// Decides whether a subspace of `ℂ² ⊗ ℂ²` contains a product vector.
///
/// A vector is a product iff its `2 × 2` reshaping has rank one, i.e. zero
/// determinant. For `dim S = 1` this is a single determinant test. For
/// `dim S ≥ 2`, `det(c₁M₁ + c₂M₂)` is a binary quadratic form in `(c₁, c₂)`,
/// which always has a nontrivial root over `ℂ`.
pub fn exact_oracle_2x2(s: &Subspace) -> Result<OracleVerdict> {
    if s.space().dims() != [2, 2] {
        return Err(Error::InvalidDims(format!(
            "exact oracle needs dims [2, 2], got {:?}",
            s.space().dims()
        )));
    }
    let mats: Vec<Matrix2<Complex64>> = (0..s.dim())
        .map(|i| {
            let b = s.basis().column(i);
            Matrix2::new(b[0], b[1], b[2], b[3])
        })
        .collect();
    if mats.len() == 1 {
        return Ok(if mats[0].determinant().norm() < DET_TOL {
            OracleVerdict::HasProduct(factor_rank_one(&mats[0])?)
        } else {
            OracleVerdict::NoProduct
        });
    }
    let (m1, m2) = (mats[0], mats[1]);
    // det(c₁M₁ + c₂M₂) = a c₁² + b c₁c₂ + c c₂²
    let a = m1.determinant();
    let c = m2.determinant();
    let b = (m1 + m2).determinant() - a - c;
    let (c1, c2) = if a.norm() < DET_TOL {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        // Roots of a t² + b t + c (c₂ = 1) via the cancellation-free pair q/a, c/q.
        let disc = (b * b - a * c * 4.0).sqrt();
        let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
        let zero = Complex64::new(0.0, 0.0);
        let r1 = q / a;
        let r2 = if q.norm() > 0.0 { c / q } else { zero };
        let residual = |t: Complex64| (a * t * t + b * t + c).norm();
        let t = if residual(r1) <= residual(r2) { r1 } else { r2 };
        (t, Complex64::new(1.0, 0.0))
    };
    Ok(OracleVerdict::HasProduct(factor_rank_one(&(m1 * c1 + m2 * c2))?))
}

/// `M = u vᵀ` for a (numerically) rank-one `M`, returned as unit factors.
fn factor_rank_one(m: &Matrix2<Complex64>) -> Result<ProductVector> {
    let col = if m.column(0).norm() >= m.column(1).norm() { 0 } else { 1 };
    let row = if m.row(0).norm() >= m.row(1).norm() { 0 } else { 1 };
    let u = DVector::from_iterator(2, m.column(col).iter().cloned());
    let v = DVector::from_iterator(2, m.row(row).iter().cloned());
    ProductVector::new(vec![u.normalize(), v.normalize()])
        .map_err(|_| Error::Internal("rank-one factorisation of a zero matrix".into()))
}

/// `‖P_S(u₁ ⊗ … ⊗ u_k)‖²` for unit factors.
pub fn product_overlap(s: &Subspace, p: &ProductVector) -> f64 {
    let v = p.normalized().embed();
    (s.basis().adjoint() * v).norm_squared()
}

/// Seesaw on `trials` Haar-random subspaces of dimension one above the
/// completely entangled maximum; every trial is expected to contain a
/// product vector. Trial `t` uses seed `cfg.seed + t` for both the subspace
/// and the search.
pub fn max_plus_one_sweep(
    space: &MultipartiteSpace,
    trials: usize,
    cfg: &SeesawConfig,
) -> Result<VerificationReport> {
    if space.total_dim() > 256 {
        return Err(Error::Unsupported(format!(
            "sweep limited to total dimension 256, got {}",
            space.total_dim()
        )));
    }
    let m = max_ces_dim(space.dims())? + 1;
    let mut report = VerificationReport::new("max-plus-one-sweep");
    report
        .input("dims", space.dims())
        .input("subspace_dim", m)
        .input("trials", trials)
        .input("config", cfg);
    let mut found = 0;
    for t in 0..trials {
        let seed = cfg.seed.wrapping_add(t as u64);
        let s = haar_subspace(&mut seeded_rng(seed, u64::MAX), space, m)?;
        let outcome = seesaw_search(&s, &SeesawConfig { seed, ..*cfg })?;
        if report.above(format!("trial {t} (seed {seed}) overlap"), outcome.best_overlap, 1.0 - FOUND_TOL) {
            found += 1;
        }
    }
    report.count("trials with a product vector", found, trials);
    Ok(report)
}
