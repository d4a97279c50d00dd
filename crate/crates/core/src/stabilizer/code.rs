use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::{complex_gaussian_matrix, seeded_rng};
use crate::tensor::{ComplexOperator, MultipartiteSpace, Subspace};

use super::group::FiniteAbelianGroup;
use super::weyl::{sigma, GroupElementTuple, WeylSystem, PARTIES};

/// Largest `d⁵` for which dense operators are built.
pub const DENSE_LIMIT: usize = 1024;

/// The five-party stabilizer code over `A`, with code group `C = {Σxᵢ = 0}`.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    weyl: WeylSystem,
}

impl StabilizerCode {
    pub fn new(group: FiniteAbelianGroup) -> Result<Self> {
        let total = group.order().checked_pow(PARTIES as u32).unwrap_or(usize::MAX);
        if total > DENSE_LIMIT {
            return Err(Error::Unsupported(format!(
                "{group}: ambient dimension {total} exceeds the dense limit {DENSE_LIMIT}"
            )));
        }
        Ok(Self { weyl: WeylSystem::new(group)? })
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::new(FiniteAbelianGroup::parse(name)?)
    }

    pub fn weyl(&self) -> &WeylSystem {
        &self.weyl
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.weyl.group()
    }

    pub fn space(&self) -> &MultipartiteSpace {
        self.weyl.space()
    }

    /// `#A`, which is also the code dimension.
    pub fn local_dim(&self) -> usize {
        self.group().order()
    }

    /// `P_C = d⁻⁴ Σ_{x∈C} W_x`, summed directly from the Weyl operators.
    pub fn projector_pc(&self) -> ComplexOperator {
        let w = &self.weyl;
        let n = w.total_dim();
        let scale = 1.0 / (self.local_dim().pow(4) as f64);
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for x in w.code_group() {
            let wx = w.w_monomial_unchecked(&x);
            for y in 0..n {
                m[(wx.target(y), y)] += wx.coeff(y) * scale;
            }
        }
        ComplexOperator::new(self.space().clone(), m).expect("dimension matches")
    }

    /// Closed form `⟨a|P_C|b⟩ = d⁻⁴ ⟨a,σ²a⟩ conj⟨b,σ²b⟩` when `Σ(aᵢ − bᵢ) = 0`,
    /// and zero otherwise.
    pub fn pc_matrix_element(&self, a: &GroupElementTuple, b: &GroupElementTuple) -> Complex64 {
        let w = &self.weyl;
        if !w.in_code_group(&w.sub(a, b)) {
            return Complex64::new(0.0, 0.0);
        }
        let scale = 1.0 / (self.local_dim().pow(4) as f64);
        let pa = w.pairing(a, &sigma(&sigma(a)));
        let pb = w.pairing(b, &sigma(&sigma(b)));
        pa * pb.conj() * scale
    }

    pub fn u_sigma(&self) -> ComplexOperator {
        self.weyl.u_sigma()
    }

    /// Orthonormal basis of the range of `p`, assumed a projector of the
    /// given rank, from `p` applied to a Gaussian sketch.
    pub fn range_basis(p: &ComplexOperator, rank: usize, seed: u64) -> Result<Subspace> {
        let n = p.space().total_dim();
        let mut rng = seeded_rng(seed, 0x5157);
        let sketch = p.matrix() * complex_gaussian_matrix(&mut rng, n, rank);
        let s = Subspace::span_of(p.space().clone(), &sketch.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())?;
        if s.dim() != rank {
            return Err(Error::Internal(format!("range sketch has rank {} not {rank}", s.dim())));
        }
        Ok(s)
    }

    /// A random unit vector in the range of `p`.
    pub fn random_range_vector<R: Rng + ?Sized>(p: &ComplexOperator, rng: &mut R) -> nalgebra::DVector<Complex64> {
        let n = p.space().total_dim();
        loop {
            let v = p.matrix() * crate::random::complex_gaussian(rng, n);
            let norm = v.norm();
            if norm > 1e-8 {
                return v.unscale(norm);
            }
        }
    }
}
