use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product_search::{seesaw_search, SeesawConfig};
use crate::random::seeded_rng;
use crate::report::VerificationReport;
use crate::tensor::{hermitian_eigen, schmidt_from_matrix, spectrum_entropy, Bipartition, ComplexOperator};
use crate::tol;

use super::code::StabilizerCode;
use super::weyl::{sigma, GroupElementTuple, Monomial, WeylSystem};

/// Tolerance for `(P|a⟩⟨b|P)(E) = ⟨b|P|a⟩/d(E) · I`.
pub const PAIR_TOL: f64 = 1e-10;
/// Tolerance for marginals and entropies of range vectors.
pub const MARGINAL_TOL: f64 = 1e-9;
/// Lower bound on the smallest Schmidt coefficient of an indecomposable vector.
pub const MIN_SCHMIDT: f64 = 0.1;

const WEYL_TOL: f64 = 1e-12;
const REPRESENTATION_TOL: f64 = 1e-10;
const ENTRY_TOL: f64 = 1e-12;
const COMPLETE_ENTANGLEMENT_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum VerificationMode {
    /// Every pair `(a, b)` of basis states, plus `vectors` random range vectors.
    Exhaustive { vectors: usize },
    Sampled { pairs: usize, vectors: usize },
}

impl VerificationMode {
    pub fn exhaustive() -> Self {
        Self::Exhaustive { vectors: 100 }
    }

    pub fn sampled() -> Self {
        Self::Sampled { pairs: 1000, vectors: 100 }
    }

    fn vectors(&self) -> usize {
        match *self {
            Self::Exhaustive { vectors } | Self::Sampled { vectors, .. } => vectors,
        }
    }
}

fn subset_label(e: &[usize]) -> String {
    let parts: Vec<String> = e.iter().map(|i| i.to_string()).collect();
    format!("E={{{}}}", parts.join(","))
}

fn require_projector(p: &ComplexOperator) -> Result<()> {
    let herm = p.hermiticity_residual();
    let idem = p.idempotency_residual();
    if herm > tol::PROJ || idem > tol::PROJ {
        return Err(Error::NotProjector(format!("hermiticity residual {herm:.3e}, idempotency residual {idem:.3e}")));
    }
    Ok(())
}

/// Checks that the range of `p` is perfectly entangled: every unit vector
/// has marginal `I/d(E)` on each balanced subset `E`.
///
/// Pairs `(a, b)` are checked through `(P|a⟩⟨b|P)(E) = M_a M_b†`, `M_a` the
/// matricization of column `a` of `P`. Range vectors are `P g / ‖P g‖` for
/// complex Gaussian `g`.
pub fn verify_perfect_entanglement(p: &ComplexOperator, mode: VerificationMode, seed: u64) -> Result<VerificationReport> {
    require_projector(p)?;
    let space = p.space();
    let n = space.total_dim();
    let subsets = space.balanced_subsets();
    let mut report = VerificationReport::new("verify_perfect_entanglement");
    report.input("dims", space.dims()).input("mode", mode).input("seed", seed);
    report.count("balanced subsets", subsets.len(), subsets.len());

    let pairs: Vec<(usize, usize)> = match mode {
        VerificationMode::Exhaustive { .. } => (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect(),
        VerificationMode::Sampled { pairs, .. } => {
            let mut rng = seeded_rng(seed, 1);
            (0..pairs).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
        }
    };
    report.input("pairs", pairs.len());

    let pm = p.matrix();
    for e in &subsets {
        let cut = Bipartition::new(space, e)?;
        let de = cut.keep_dim();
        let cols: Vec<DMatrix<Complex64>> = (0..n).map(|a| cut.matricize(&pm.column(a).into_owned())).collect();
        let worst = pairs
            .par_iter()
            .map(|&(a, b)| {
                let reduced = &cols[a] * cols[b].adjoint();
                let expected = DMatrix::<Complex64>::identity(de, de) * (pm[(b, a)] / de as f64);
                (reduced - expected).norm()
            })
            .reduce(|| 0.0, f64::max);
        report.below(format!("{} pair residual", subset_label(e)), worst, PAIR_TOL);
    }

    let vectors = mode.vectors();
    report.input("range_vectors", vectors);
    if vectors > 0 {
        let mut rng = seeded_rng(seed, 2);
        let psis: Vec<DVector<Complex64>> =
            (0..vectors).map(|_| StabilizerCode::random_range_vector(p, &mut rng)).collect();
        for e in &subsets {
            let cut = Bipartition::new(space, e)?;
            let de = cut.keep_dim();
            let target = (de as f64).log2();
            let mut marginal = 0.0f64;
            let mut entropy = 0.0f64;
            for psi in &psis {
                let m = cut.matricize(psi);
                let rho = &m * m.adjoint();
                let ident = DMatrix::<Complex64>::identity(de, de).unscale(de as f64);
                marginal = marginal.max((&rho - ident).norm());
                let (eigs, _) = hermitian_eigen(&rho);
                entropy = entropy.max((spectrum_entropy(&eigs)? - target).abs());
            }
            report.below(format!("{} marginal residual", subset_label(e)), marginal, MARGINAL_TOL);
            report.below(format!("{} |S - log2 d(E)|", subset_label(e)), entropy, MARGINAL_TOL);
        }
    }
    Ok(report)
}

/// Checks on random unit vectors of the range of `p` that no bipartition
/// factors them: the smallest Schmidt coefficient must exceed [`MIN_SCHMIDT`].
pub fn indecomposability_check(p: &ComplexOperator, samples: usize, seed: u64) -> Result<VerificationReport> {
    require_projector(p)?;
    let space = p.space();
    let mut report = VerificationReport::new("indecomposability_check");
    report.input("dims", space.dims()).input("samples", samples).input("seed", seed);
    let mut rng = seeded_rng(seed, 3);
    let psis: Vec<DVector<Complex64>> = (0..samples).map(|_| StabilizerCode::random_range_vector(p, &mut rng)).collect();
    for e in space.balanced_subsets() {
        let cut = Bipartition::new(space, &e)?;
        let smallest = psis
            .iter()
            .map(|psi| *schmidt_from_matrix(cut.matricize(psi)).last().expect("nonempty"))
            .fold(f64::INFINITY, f64::min);
        report.above(format!("{} min Schmidt coefficient", subset_label(&e)), smallest, MIN_SCHMIDT);
        let flat = (cut.keep_dim() as f64).powf(-0.5);
        report.note(format!("{}: smallest {smallest:.12}, flat spectrum value {flat:.12}", subset_label(&e)));
    }
    Ok(report)
}

fn sampled_tuples<R: Rng + ?Sized>(w: &WeylSystem, rng: &mut R, count: usize) -> Vec<(GroupElementTuple, GroupElementTuple)> {
    let n = w.total_dim();
    (0..count).map(|_| (w.tuple(rng.random_range(0..n)), w.tuple(rng.random_range(0..n)))).collect()
}

/// `U_aU_b = U_{a+b}`, `V_aV_b = V_{a+b}` and `V_bU_a = ⟨a,b⟩U_aV_b`, over all
/// pairs when `d ≤ exhaustive_up_to`, otherwise over `samples` random pairs.
pub fn weyl_relations_report(w: &WeylSystem, exhaustive_up_to: usize, samples: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("weyl_relations");
    let n = w.total_dim();
    let d = w.group().order();
    let pairs: Vec<(GroupElementTuple, GroupElementTuple)> = if d <= exhaustive_up_to {
        (0..n).flat_map(|a| (0..n).map(move |b| (w.tuple(a), w.tuple(b)))).collect()
    } else {
        sampled_tuples(w, &mut seeded_rng(seed, 4), samples)
    };
    report.input("group", w.group().to_string()).input("pairs", pairs.len());
    let us: Vec<Monomial> = (0..n).map(|a| w.u_monomial(&w.tuple(a))).collect();
    let vs: Vec<Monomial> = (0..n).map(|b| w.v_monomial(&w.tuple(b))).collect();
    let (uu, vv, vu) = pairs
        .par_iter()
        .map(|(a, b)| {
            let (ua, ub) = (&us[w.flat(a)], &us[w.flat(b)]);
            let (va, vb) = (&vs[w.flat(a)], &vs[w.flat(b)]);
            let sum = w.flat(&w.add(a, b));
            let uu = ua.compose(ub).distance(&us[sum]);
            let vv = va.compose(vb).distance(&vs[sum]);
            let vu = vb.compose(ua).distance(&ua.compose(vb).scaled(w.pairing(a, b)));
            (uu, vv, vu)
        })
        .reduce(|| (0.0, 0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1), x.2.max(y.2)));
    report.below("max ||U_a U_b - U_(a+b)||", uu, WEYL_TOL);
    report.below("max ||V_a V_b - V_(a+b)||", vv, WEYL_TOL);
    report.below("max ||V_b U_a - <a,b> U_a V_b||", vu, WEYL_TOL);
    report
}

/// Trace inner products of `d^{-5/2} U_a V_b` on random pairs of labels.
pub fn weyl_orthonormality_report(w: &WeylSystem, samples: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("weyl_orthonormality");
    let n = w.total_dim();
    let scale = 1.0 / n as f64;
    let mut rng = seeded_rng(seed, 5);
    let op = |a: &GroupElementTuple, b: &GroupElementTuple| w.u_monomial(a).compose(&w.v_monomial(b));
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    for _ in 0..samples {
        let (a, b) = sampled_tuples(w, &mut rng, 1)[0];
        let (mut a2, mut b2) = sampled_tuples(w, &mut rng, 1)[0];
        if (a2, b2) == (a, b) {
            a2 = w.add(&a2, &w.tuple(1));
            b2 = w.add(&b2, &w.tuple(1));
        }
        let x = op(&a, &b);
        diag = diag.max((x.trace_inner(&x) * scale - 1.0).norm());
        off = off.max((x.trace_inner(&op(&a2, &b2)) * scale).norm());
    }
    report.input("samples", samples);
    report.below("max |<X|X> - 1|", diag, WEYL_TOL);
    report.below("max |<X|Y>| for distinct labels", off, WEYL_TOL);
    report
}

/// `W_x W_y = W_{x+y}` on all pairs of `C`, and unitarity of each `W_x`.
pub fn representation_report(w: &WeylSystem) -> VerificationReport {
    let mut report = VerificationReport::new("w_representation");
    let c = w.code_group();
    let n = w.total_dim();
    let ws: Vec<Monomial> = c.iter().map(|x| w.w_monomial_unchecked(x)).collect();
    let index = |x: &GroupElementTuple| {
        let flat = w.flat(x);
        c.binary_search_by_key(&flat, |y| w.flat(y)).expect("C is closed under addition")
    };
    let worst = (0..c.len())
        .into_par_iter()
        .map(|i| {
            (0..c.len())
                .map(|j| ws[i].compose(&ws[j]).distance(&ws[index(&w.add(&c[i], &c[j]))]))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let ident = Monomial::identity(n);
    let unitary = ws.iter().map(|m| m.adjoint().compose(m).distance(&ident)).fold(0.0, f64::max);
    report.input("pairs", c.len() * c.len());
    report.below("max ||W_x W_y - W_(x+y)||", worst, REPRESENTATION_TOL);
    report.below("max ||W_x^† W_x - I||", unitary, REPRESENTATION_TOL);
    report.below("||W_0 - I||", ws[0].distance(&ident), REPRESENTATION_TOL);
    report
}

/// Closed-form matrix entries against the summed projector.
pub fn matrix_element_report(code: &StabilizerCode, p: &ComplexOperator, exhaustive: bool, samples: usize, seed: u64) -> VerificationReport {
    let w = code.weyl();
    let n = w.total_dim();
    let mut report = VerificationReport::new("pc_matrix_elements");
    let entries: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        // Half uniform, half with Σ(aᵢ − bᵢ) = 0 so the nonzero entries are hit.
        let mut rng = seeded_rng(seed, 6);
        let c = w.code_group();
        (0..samples)
            .map(|i| {
                let a = rng.random_range(0..n);
                let b = if i % 2 == 0 {
                    rng.random_range(0..n)
                } else {
                    w.flat(&w.sub(&w.tuple(a), &c[rng.random_range(0..c.len())]))
                };
                (a, b)
            })
            .collect()
    };
    let worst = entries
        .iter()
        .map(|&(a, b)| (code.pc_matrix_element(&w.tuple(a), &w.tuple(b)) - p.matrix()[(a, b)]).norm())
        .fold(0.0, f64::max);
    let diag = (0..n)
        .map(|a| (p.matrix()[(a, a)].re - 1.0 / (code.local_dim().pow(4) as f64)).abs())
        .fold(0.0, f64::max);
    report.input("entries", entries.len());
    report.below("max |closed form - summed entry|", worst, ENTRY_TOL);
    report.below("max |<a|P_C|a> - d^-4|", diag, ENTRY_TOL);
    report
}

/// The full battery for one group: projector properties, matrix elements,
/// Weyl algebra, covariance, range characterization, perfect entanglement,
/// indecomposability and complete entanglement of the range.
pub fn stabilizer_suite(code: &StabilizerCode, mode: VerificationMode, seed: u64) -> Result<VerificationReport> {
    let w = code.weyl();
    let d = code.local_dim();
    let mut report = VerificationReport::new("stabilizer");
    report.input("group", code.group().to_string()).input("d", d).input("mode", mode).input("seed", seed);

    let p = code.projector_pc();
    report.below("||P_C^2 - P_C||", p.idempotency_residual(), PAIR_TOL);
    report.below("||P_C - P_C^†||", p.hermiticity_residual(), PAIR_TOL);
    report.within("Tr P_C", p.trace().re, d as f64, tol::TRACE);
    report.below("|Im Tr P_C|", p.trace().im.abs(), tol::TRACE);
    report.count("rank P_C", p.rank(), d);

    let exhaustive = matches!(mode, VerificationMode::Exhaustive { .. });
    report.absorb("matrix elements", matrix_element_report(code, &p, exhaustive, 2000, seed));
    report.absorb("weyl", weyl_relations_report(w, 3, 500, seed));
    report.absorb("weyl basis", weyl_orthonormality_report(w, 200, seed));
    report.absorb("representation", representation_report(w));

    // ‖U_σ P − P U_σ‖ = ‖U_σ P U_σ† − P‖, and (U_σ P U_σ†)[σx, σy] = P[x, y].
    let shift = w.sigma_monomial();
    let n = w.total_dim();
    let covariance = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| (p.matrix()[(shift.target(x), shift.target(y))] - p.matrix()[(x, y)]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    report.below("||U_sigma P_C - P_C U_sigma||", covariance, WEYL_TOL);
    let fixed = w.code_group().iter().all(|x| w.in_code_group(&sigma(x)));
    report.count("sigma maps C to C", fixed as usize, 1);

    let range = StabilizerCode::range_basis(&p, d, seed)?;
    let worst = w
        .code_group()
        .par_iter()
        .map(|x| {
            let wx = w.w_monomial_unchecked(x);
            range.basis_vectors().iter().map(|v| (wx.apply(v) - v).norm()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    report.below("max ||W_x psi - psi|| on range basis", worst, REPRESENTATION_TOL);

    report.absorb("perfect", verify_perfect_entanglement(&p, mode, seed)?);
    report.absorb("indecomposable", indecomposability_check(&p, 20, seed)?);

    let cfg = SeesawConfig { restarts: 20, seed, ..SeesawConfig::default() };
    let outcome = seesaw_search(&range, &cfg)?;
    report.below("max product overlap on range", outcome.best_overlap, 1.0 - COMPLETE_ENTANGLEMENT_GAP);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{projector, MultipartiteSpace, Subspace};

    #[test]
    fn z2_exhaustive_passes() {
        let code = StabilizerCode::parse("Z2").unwrap();
        let p = code.projector_pc();
        let r = verify_perfect_entanglement(&p, VerificationMode::exhaustive(), 0).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.inputs["pairs"], 1024);
    }

    #[test]
    fn product_state_fails() {
        let space = MultipartiteSpace::uniform(2, 5).unwrap();
        let mut e0 = DVector::zeros(32);
        e0[0] = Complex64::new(1.0, 0.0);
        let p = projector(&Subspace::from_orthonormal(space, &[e0]).unwrap());
        let r = verify_perfect_entanglement(&p, VerificationMode::exhaustive(), 0).unwrap();
        assert!(!r.passed());
        assert!(!r.check("E={0} pair residual").unwrap().pass);
        assert!(!r.check("E={0} marginal residual").unwrap().pass);
        let ind = indecomposability_check(&p, 3, 0).unwrap();
        assert!(!ind.passed());
    }

    #[test]
    fn non_projector_rejected() {
        let space = MultipartiteSpace::uniform(2, 5).unwrap();
        let half = ComplexOperator::identity(&space);
        let half = ComplexOperator::new(space, half.matrix().scale(0.5)).unwrap();
        assert!(matches!(verify_perfect_entanglement(&half, VerificationMode::exhaustive(), 0), Err(Error::NotProjector(_))));
    }

    #[test]
    fn z2_schmidt_spectra_are_flat() {
        let code = StabilizerCode::parse("Z2").unwrap();
        let p = code.projector_pc();
        let mut rng = seeded_rng(9, 0);
        for _ in 0..5 {
            let psi = StabilizerCode::random_range_vector(&p, &mut rng);
            for (keep, value) in [(vec![0], 0.5f64.sqrt()), (vec![0, 1], 0.5)] {
                let cut = Bipartition::new(p.space(), &keep).unwrap();
                let s = schmidt_from_matrix(cut.matricize(&psi));
                assert_eq!(s.len(), cut.keep_dim());
                assert!(s.iter().all(|x| (x - value).abs() < 1e-10), "{s:?}");
            }
        }
    }

    #[test]
    fn z3_sampled_entropies() {
        let code = StabilizerCode::parse("Z3").unwrap();
        let p = code.projector_pc();
        let r = verify_perfect_entanglement(&p, VerificationMode::Sampled { pairs: 200, vectors: 10 }, 7).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn weyl_and_representation_z2() {
        let w = WeylSystem::new(crate::stabilizer::FiniteAbelianGroup::cyclic(2).unwrap()).unwrap();
        assert!(weyl_relations_report(&w, 3, 0, 0).passed());
        assert!(weyl_orthonormality_report(&w, 50, 0).passed());
        assert!(representation_report(&w).passed());
    }

    #[test]
    fn full_suite_z2() {
        let code = StabilizerCode::parse("Z2").unwrap();
        let r = stabilizer_suite(&code, VerificationMode::exhaustive(), 0).unwrap();
        assert!(r.passed(), "{r}");
    }
}
