//! Completely entangled and perfectly entangled subspaces of finite
//! dimensional multipartite Hilbert spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense complex linear algebra on `ℂ^{d₁} ⊗ … ⊗ ℂ^{d_k}`
//!   (tensor products, partial traces, complements, projectors, entropies).
//! - [`vandermonde`]: maximal completely entangled subspaces obtained as the
//!   orthogonal complement of Vandermonde product vectors, plus the
//!   separable-range check.
//! - [`explicit_basis`]: a closed-form orthonormal basis of the maximal
//!   completely entangled subspace of `ℂⁿ ⊗ ℂⁿ`.
//! - [`product_search`]: numerical search for product vectors inside a
//!   subspace (seesaw maximisation and an exact `2 × 2` oracle).
//! - [`stabilizer`]: the five-party Weyl stabilizer code over a finite
//!   abelian group and checks that its range is perfectly entangled.
//!
//! Index convention: subsystem `0` is the most significant factor of a flat
//! index, so `|x₀ x₁ … x_{k-1}⟩` sits at `((x₀·d₁ + x₁)·d₂ + …)`.

pub mod error;
pub mod explicit_basis;
pub mod io;
pub mod product_search;
pub mod random;
pub mod report;
pub mod stabilizer;
pub mod tensor;
pub mod tol;
pub mod vandermonde;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use report::{Check, VerificationReport};
pub use tensor::{
    ComplexOperator, ComplexVector, DensityOperator, MultipartiteSpace, ProductVector, Subspace,
};
