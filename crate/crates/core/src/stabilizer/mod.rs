//! A five-party perfectly entangled subspace built from a stabilizer code.
//!
//! For a finite abelian group `A` of order `d`, the Weyl operators `U_a`,
//! `V_b` act on `(ℂ^A)^{⊗5}`. The operators
//! `W_x = ⟨x, σ²x⟩ U_x V_{τx}` over the code group `C = {Σxᵢ = 0}` form a
//! unitary representation of `C`, and their average `P_C` projects onto a
//! `d`-dimensional subspace whose unit vectors have maximally mixed marginals
//! on every set of at most two parties.

mod code;
mod group;
mod verify;
mod weyl;

pub use code::{StabilizerCode, DENSE_LIMIT};
pub use group::FiniteAbelianGroup;
pub use verify::{
    indecomposability_check, matrix_element_report, representation_report, stabilizer_suite,
    verify_perfect_entanglement, weyl_orthonormality_report, weyl_relations_report, VerificationMode,
    MARGINAL_TOL, MIN_SCHMIDT, PAIR_TOL,
};
pub use weyl::{sigma, sigma_inv, GroupElementTuple, Monomial, WeylSystem, PARTIES};
