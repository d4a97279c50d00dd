use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{ComplexOperator, MultipartiteSpace};

use super::group::FiniteAbelianGroup;

pub const PARTIES: usize = 5;

/// An element of `A⁵`, each slot an encoded element of `A`.
pub type GroupElementTuple = [usize; PARTIES];

/// Cyclic shift `σ(x₀,…,x₄) = (x₄,x₀,x₁,x₂,x₃)`.
pub fn sigma(x: &GroupElementTuple) -> GroupElementTuple {
    [x[4], x[0], x[1], x[2], x[3]]
}

pub fn sigma_inv(x: &GroupElementTuple) -> GroupElementTuple {
    [x[1], x[2], x[3], x[4], x[0]]
}

/// Operator of the form `|x⟩ ↦ c(x) |t(x)⟩` on `ℂ^{A⁵}` with `t` a bijection.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    target: Vec<usize>,
    coeff: Vec<Complex64>,
}

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Self { target: (0..n).collect(), coeff: vec![Complex64::new(1.0, 0.0); n] }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self, x: usize) -> usize {
        self.target[x]
    }

    pub fn coeff(&self, x: usize) -> Complex64 {
        self.coeff[x]
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.coeff.iter_mut().for_each(|v| *v *= c);
        self
    }

    /// `self · other`.
    pub fn compose(&self, other: &Monomial) -> Monomial {
        let (target, coeff) = (0..other.dim())
            .map(|x| {
                let y = other.target[x];
                (self.target[y], other.coeff[x] * self.coeff[y])
            })
            .unzip();
        Monomial { target, coeff }
    }

    pub fn adjoint(&self) -> Monomial {
        let n = self.dim();
        let mut target = vec![0; n];
        let mut coeff = vec![Complex64::new(0.0, 0.0); n];
        for x in 0..n {
            target[self.target[x]] = x;
            coeff[self.target[x]] = self.coeff[x].conj();
        }
        Monomial { target, coeff }
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &Monomial) -> f64 {
        (0..self.dim())
            .map(|x| {
                if self.target[x] == other.target[x] {
                    (self.coeff[x] - other.coeff[x]).norm_sqr()
                } else {
                    self.coeff[x].norm_sqr() + other.coeff[x].norm_sqr()
                }
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `Tr(self† other)`.
    pub fn trace_inner(&self, other: &Monomial) -> Complex64 {
        (0..self.dim())
            .filter(|&x| self.target[x] == other.target[x])
            .map(|x| self.coeff[x].conj() * other.coeff[x])
            .sum()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim());
        for x in 0..self.dim() {
            out[self.target[x]] += self.coeff[x] * v[x];
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for x in 0..n {
            m[(self.target[x], x)] += self.coeff[x];
        }
        m
    }
}

/// Arithmetic on `A⁵` together with the Weyl operators on `(ℂ^A)^{⊗5}`.
#[derive(Debug, Clone)]
pub struct WeylSystem {
    group: FiniteAbelianGroup,
    space: MultipartiteSpace,
}

impl WeylSystem {
    pub fn new(group: FiniteAbelianGroup) -> Result<Self> {
        let space = MultipartiteSpace::uniform(group.order(), PARTIES)?;
        Ok(Self { group, space })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    /// `d⁵`.
    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn flat(&self, x: &GroupElementTuple) -> usize {
        let d = self.group.order();
        x.iter().fold(0, |acc, &xi| acc * d + xi)
    }

    pub fn tuple(&self, flat: usize) -> GroupElementTuple {
        let d = self.group.order();
        let mut x = [0; PARTIES];
        let mut rest = flat;
        for slot in x.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        x
    }

    pub fn add(&self, x: &GroupElementTuple, y: &GroupElementTuple) -> GroupElementTuple {
        std::array::from_fn(|i| self.group.add(x[i], y[i]))
    }

    pub fn neg(&self, x: &GroupElementTuple) -> GroupElementTuple {
        std::array::from_fn(|i| self.group.neg(x[i]))
    }

    pub fn sub(&self, x: &GroupElementTuple, y: &GroupElementTuple) -> GroupElementTuple {
        self.add(x, &self.neg(y))
    }

    /// `x₀ + … + x₄ ∈ A`.
    pub fn component_sum(&self, x: &GroupElementTuple) -> usize {
        x.iter().fold(0, |acc, &xi| self.group.add(acc, xi))
    }

    /// Product bicharacter on `A⁵`.
    pub fn pairing(&self, x: &GroupElementTuple, y: &GroupElementTuple) -> Complex64 {
        x.iter().zip(y).map(|(&a, &b)| self.group.bichar(a, b)).product()
    }

    /// `τ = σ² + σ⁻²`.
    pub fn tau(&self, x: &GroupElementTuple) -> GroupElementTuple {
        self.add(&sigma(&sigma(x)), &sigma_inv(&sigma_inv(x)))
    }

    /// `U_a|x⟩ = |a + x⟩`.
    pub fn u_monomial(&self, a: &GroupElementTuple) -> Monomial {
        let n = self.total_dim();
        let target = (0..n).map(|x| self.flat(&self.add(a, &self.tuple(x)))).collect();
        Monomial { target, coeff: vec![Complex64::new(1.0, 0.0); n] }
    }

    /// `V_b|x⟩ = ⟨b, x⟩|x⟩`.
    pub fn v_monomial(&self, b: &GroupElementTuple) -> Monomial {
        let n = self.total_dim();
        let coeff = (0..n).map(|x| self.pairing(b, &self.tuple(x))).collect();
        Monomial { target: (0..n).collect(), coeff }
    }

    /// `W_x = ⟨x, σ²x⟩ U_x V_{τx}`, defined for all of `A⁵`.
    pub fn w_monomial_unchecked(&self, x: &GroupElementTuple) -> Monomial {
        let phase = self.pairing(x, &sigma(&sigma(x)));
        self.u_monomial(x).compose(&self.v_monomial(&self.tau(x))).scaled(phase)
    }

    pub fn w_monomial(&self, x: &GroupElementTuple) -> Result<Monomial> {
        self.check_in_code_group(x)?;
        Ok(self.w_monomial_unchecked(x))
    }

    /// Permutation `|x⟩ ↦ |σx⟩`.
    pub fn sigma_monomial(&self) -> Monomial {
        let n = self.total_dim();
        let target = (0..n).map(|x| self.flat(&sigma(&self.tuple(x)))).collect();
        Monomial { target, coeff: vec![Complex64::new(1.0, 0.0); n] }
    }

    pub fn weyl_u(&self, a: &GroupElementTuple) -> ComplexOperator {
        self.dense(&self.u_monomial(a))
    }

    pub fn weyl_v(&self, b: &GroupElementTuple) -> ComplexOperator {
        self.dense(&self.v_monomial(b))
    }

    /// `W_x` as a dense operator; fails unless `x` lies in the code group.
    pub fn w_op(&self, x: &GroupElementTuple) -> Result<ComplexOperator> {
        Ok(self.dense(&self.w_monomial(x)?))
    }

    pub fn u_sigma(&self) -> ComplexOperator {
        self.dense(&self.sigma_monomial())
    }

    /// Membership in `C = {x : Σxᵢ = 0}`.
    pub fn in_code_group(&self, x: &GroupElementTuple) -> bool {
        self.component_sum(x) == 0
    }

    fn check_in_code_group(&self, x: &GroupElementTuple) -> Result<()> {
        if x.iter().any(|&xi| xi >= self.group.order()) {
            return Err(Error::InvalidState(format!("{x:?} is not an element of A^5")));
        }
        if !self.in_code_group(x) {
            return Err(Error::NotInStabilizer(format!("{x:?} has nonzero component sum")));
        }
        Ok(())
    }

    /// All `dim(A)⁴` elements of `C`, ordered by their first four slots.
    pub fn code_group(&self) -> Vec<GroupElementTuple> {
        let d = self.group.order();
        (0..d.pow(4))
            .map(|head| {
                let mut x = [0; PARTIES];
                let mut rest = head;
                for slot in x[..4].iter_mut().rev() {
                    *slot = rest % d;
                    rest /= d;
                }
                let partial = x[..4].iter().fold(0, |acc, &v| self.group.add(acc, v));
                x[4] = self.group.neg(partial);
                x
            })
            .collect()
    }

    fn dense(&self, m: &Monomial) -> ComplexOperator {
        ComplexOperator::new(self.space.clone(), m.to_dense()).expect("monomial matches its space")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(name: &str) -> WeylSystem {
        WeylSystem::new(FiniteAbelianGroup::parse(name).unwrap()).unwrap()
    }

    #[test]
    fn shift_and_inverse() {
        let x = [0, 1, 2, 3, 4];
        assert_eq!(sigma(&x), [4, 0, 1, 2, 3]);
        assert_eq!(sigma_inv(&sigma(&x)), x);
        let mut y = x;
        for _ in 0..5 {
            y = sigma(&y);
        }
        assert_eq!(y, x);
    }

    #[test]
    fn tau_by_hand() {
        let w = system("Z3");
        // σ²x = (x3,x4,x0,x1,x2), σ⁻²x = (x2,x3,x4,x0,x1)
        let x = [1, 0, 0, 0, 0];
        assert_eq!(w.tau(&x), [0, 0, 1, 1, 0]);
    }

    #[test]
    fn bit_flip_and_phase_flip() {
        let w = system("Z2");
        let e = [0, 0, 0, 0, 1];
        let basis = |x: &GroupElementTuple| w.flat(x);
        let u = w.weyl_u(&e);
        // |00000⟩ ↦ |00001⟩
        assert!((u.matrix()[(basis(&e), 0)] - 1.0).norm() < 1e-15);
        let v = w.weyl_v(&e);
        assert!((v.matrix()[(basis(&e), basis(&e))] + 1.0).norm() < 1e-15);
        assert!((v.matrix()[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn commutation_relation() {
        let w = system("Z3");
        let a = [1, 2, 0, 1, 0];
        let b = [2, 2, 1, 0, 1];
        let vu = w.v_monomial(&b).compose(&w.u_monomial(&a));
        let uv = w.u_monomial(&a).compose(&w.v_monomial(&b)).scaled(w.pairing(&a, &b));
        assert!(vu.distance(&uv) < 1e-12);
    }

    #[test]
    fn w_rejects_outside_code_group() {
        let w = system("Z2");
        assert!(matches!(w.w_op(&[1, 0, 0, 0, 0]), Err(Error::NotInStabilizer(_))));
        assert!(w.w_op(&[1, 1, 0, 0, 0]).is_ok());
    }

    #[test]
    fn code_group_is_complete() {
        for name in ["Z2", "Z3", "Z2xZ2"] {
            let w = system(name);
            let c = w.code_group();
            let d = w.group().order();
            assert_eq!(c.len(), d.pow(4));
            assert!(c.iter().all(|x| w.in_code_group(x)));
            let brute = (0..w.total_dim()).filter(|&f| w.in_code_group(&w.tuple(f))).count();
            assert_eq!(brute, c.len());
        }
    }

    #[test]
    fn monomial_adjoint_and_dense_agree() {
        let w = system("Z2");
        let m = w.w_monomial(&[1, 1, 1, 1, 0]).unwrap();
        let dense = m.to_dense();
        assert!((m.adjoint().to_dense() - dense.adjoint()).norm() < 1e-14);
        assert!(m.compose(&m.adjoint()).distance(&Monomial::identity(32)) < 1e-12);
        assert!((m.trace_inner(&m).re - 32.0).abs() < 1e-12);
    }
}
