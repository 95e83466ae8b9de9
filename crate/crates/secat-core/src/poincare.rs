//! Poincaré duality detection and the chain-level duality morphisms.
//!
//! For an algebra whose cohomology `H` is a Poincaré duality algebra of
//! formal dimension `n` we pick a cocycle `ω` representing the fundamental
//! class, a complement `S` with `Aⁿ = ℚ·ω ⊕ S` and `d(A^{n−1}) ⊆ S` (and
//! `Kⁿ ⊆ S` for a supplied kernel ideal), and build
//!
//! * the functional `ω♯: A → ℚ` with `ω♯(ω) = 1`, `ω♯(S) = 0`;
//! * the degree −n map `φ: A → Hom(A, ℚ)`, `φ(a)(b) = ω♯(a·b)`;
//! * its degree-0 suspension `φ̂: A → s^{−n}Hom(A, ℚ)`, verified to be a
//!   chain map, a module morphism and a quasi-isomorphism on the window;
//! * when `K = ker q` is supplied, the factorization `l` with `l ∘ q = φ̂`.

use crate::cohomology::{cohomology, induced_map, CohomologyData, ComplexRef};
use crate::dga::DgAlgebra;
use crate::error::Error;
use crate::graded::GradedMatrixFamily;
use crate::linalg::{
    extend_to_complement, in_span, rank, rank_kernel_image, solve_linear, span_basis, Matrix,
};
use crate::module::{check_chain_map, check_module_map, DgModule, DualModule, SuspendedModule};
use crate::quotient::DegreewiseIdeal;
use crate::rational::{dot, zeros, Scalar};
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Why an algebra fails Poincaré duality, with a witness.
#[derive(Debug)]
pub enum PdFailure {
    /// `H⁰` is not one-dimensional.
    NotConnected { dim: usize },
    /// A nonzero class pairs to zero against everything (this covers both a
    /// top degree of dimension > 1 and a singular pairing matrix).
    Degenerate {
        degree: i64,
        /// Cohomology coordinates of the degenerate class.
        class: Vec<Scalar>,
        label: String,
    },
    /// Pairing blocks `H^p × H^{n−p}` have mismatched dimensions.
    AsymmetricBetti { degree: i64, dim: usize, dual_dim: usize },
}

impl PdFailure {
    pub fn describe(&self) -> String {
        match self {
            PdFailure::NotConnected { dim } => {
                format!("H⁰ has dimension {dim}, expected 1")
            }
            PdFailure::Degenerate { degree, label, .. } => {
                format!("degenerate class {label} in degree {degree} pairs to zero with everything")
            }
            PdFailure::AsymmetricBetti { degree, dim, dual_dim } => {
                format!("dim H^{degree} = {dim} but the complementary degree has dimension {dual_dim}")
            }
        }
    }
}

/// A verified Poincaré duality structure on the cohomology of an algebra,
/// valid within the inspected window.
#[derive(Debug)]
pub struct PdCertificate {
    pub formal_dim: i64,
    /// Pairing matrices `H^p × H^{n−p} → ℚ` indexed by `p`; entry `(j, i)` is
    /// `Ω♯(aᵢ · bⱼ)`.
    pub pairings: BTreeMap<i64, Matrix>,
    pub verified_to: i64,
}

/// Decide Poincaré duality of `H(alg)` on the window `0..=cap`. The top
/// nonzero degree within the window is the candidate formal dimension;
/// vanishing beyond the cap cannot be excluded and is reported through
/// `verified_to`.
pub fn detect_pd(alg: &dyn DgAlgebra, h: &CohomologyData) -> Result<PdCertificate, PdFailure> {
    if h.dim(0) != 1 {
        return Err(PdFailure::NotConnected { dim: h.dim(0) });
    }
    let n = h.top_nonzero().unwrap_or(0);

    // Ω♯ is the functional dual to the first basis class of H^n. When
    // dim H^n > 1 the remaining top classes already pair to zero against
    // everything, which yields the degeneracy witness.
    if h.dim(n) != 1 {
        let mut class = zeros(h.dim(n));
        class[1] = Scalar::from_integer(1.into());
        return Err(PdFailure::Degenerate {
            degree: n,
            label: format!("second basis class of H^{n}"),
            class,
        });
    }

    let mut pairings = BTreeMap::new();
    for p in 0..=n {
        let q = n - p;
        let dim_p = h.dim(p);
        let dim_q = h.dim(q);
        if dim_p == 0 && dim_q == 0 {
            continue;
        }
        if dim_p != dim_q {
            return Err(PdFailure::AsymmetricBetti {
                degree: p,
                dim: dim_p,
                dual_dim: dim_q,
            });
        }
        // Pairing matrix via representatives: class of rep_i · rep_j in H^n.
        let mut m = Matrix::zero(dim_q, dim_p);
        for i in 0..dim_p {
            let rep_i = h.representatives(p).expect("reps").column(i);
            for j in 0..dim_q {
                let rep_j = h.representatives(q).expect("reps").column(j);
                let prod = crate::dga::mul_elements(alg, (p, &rep_i), (q, &rep_j));
                let class = h
                    .chain_to_class(n, &prod)
                    .expect("product of cocycles is a cocycle");
                if !class[0].is_zero() {
                    m.set(j, i, class[0].clone());
                }
            }
        }
        if rank(&m) < dim_p {
            let kernel = rank_kernel_image(&m).kernel;
            let class = kernel.into_iter().next().expect("rank-deficient block");
            return Err(PdFailure::Degenerate {
                degree: p,
                label: format!("kernel class of the H^{p} × H^{q} pairing"),
                class,
            });
        }
        pairings.insert(p, m);
    }

    Ok(PdCertificate {
        formal_dim: n,
        pairings,
        verified_to: h.hi,
    })
}

/// The chain-level choice `(ω, S)`: a cocycle representative of the
/// fundamental class avoiding `d(A^{n−1}) + Kⁿ`, and a complement `S`
/// containing that subspace.
pub struct OmegaComplement {
    pub omega: Vec<Scalar>,
    /// Columns: basis of S ⊂ Aⁿ.
    pub s_basis: Matrix,
}

pub fn choose_omega_complement(
    alg: &dyn DgAlgebra,
    h: &CohomologyData,
    cert: &PdCertificate,
    kernel: Option<&DegreewiseIdeal>,
) -> Result<OmegaComplement, Error> {
    let n = cert.formal_dim;
    let dim_n = alg.space().dim(n);
    let omega = h
        .representatives(n)
        .expect("one-dimensional top cohomology")
        .column(0);

    // W = d(A^{n−1}) + Kⁿ.
    let mut w_cols: Vec<Vec<Scalar>> = Vec::new();
    if let Some(d) = alg.diff().block(n - 1) {
        w_cols.extend(rank_kernel_image(d).image);
    }
    if let Some(k) = kernel.and_then(|k| k.basis(n)) {
        w_cols.extend(k.columns());
    }
    let w = span_basis(dim_n, &w_cols);

    if w.ncols() > 0 && in_span(&w, &omega) {
        return Err(Error::Hypothesis(
            "the fundamental class is forced into d(A^{n−1}) + Kⁿ; \
             injectivity of H(q) in the top degree fails"
                .into(),
        ));
    }

    // Extend {ω} ∪ W to a basis of Aⁿ by canonical vectors; S = W + extension.
    let omega_col = Matrix::from_columns(dim_n, std::slice::from_ref(&omega));
    let extension = extend_to_complement(&omega_col.augment(&w))?;
    let mut s_cols = w.columns();
    for idx in extension {
        let mut v = zeros(dim_n);
        v[idx] = Scalar::from_integer(1.into());
        s_cols.push(v);
    }
    Ok(OmegaComplement {
        omega,
        s_basis: Matrix::from_columns(dim_n, &s_cols),
    })
}

/// The duality morphisms and their verification results.
pub struct DualityMorphisms {
    /// Row functional on `Aⁿ` with `ω♯(ω) = 1`, `ω♯(S) = 0`.
    pub omega_sharp: Vec<Scalar>,
    /// Degree −n family: `φ_p: A^p → Hom^{p−n}`, entries `ω♯(aᵢ·bⱼ)`.
    pub phi: GradedMatrixFamily,
    /// Degree-0 family into the suspension; same blocks as `φ`.
    pub phi_hat: GradedMatrixFamily,
    pub dual: Arc<DualModule>,
    pub suspended: Arc<SuspendedModule>,
    /// Factorization through the quotient when a kernel was supplied.
    pub ell: Option<GradedMatrixFamily>,
}

/// Build `ω♯`, `φ`, `φ̂` (and `l` when `q` is supplied) and verify: `φ̂` is a
/// chain map and a module morphism over the given algebra elements, `φ(K)=0`,
/// `H(φ̂)` is an isomorphism on the window, and `l∘q = φ̂`.
#[allow(clippy::too_many_arguments)]
pub fn build_duality_morphisms(
    alg: &Arc<dyn DgAlgebra>,
    h: &CohomologyData,
    cert: &PdCertificate,
    oc: &OmegaComplement,
    action_generators: &[(i64, Vec<Scalar>)],
    kernel: Option<&DegreewiseIdeal>,
    q: Option<&GradedMatrixFamily>,
    q_target_section: Option<&dyn Fn(i64) -> Matrix>,
) -> Result<DualityMorphisms, Error> {
    let n = cert.formal_dim;
    let cap = alg.cap();
    let dim_n = alg.space().dim(n);

    // ω♯: solve [ω | S]ᵀ λ = e₁.
    let omega_col = Matrix::from_columns(dim_n, std::slice::from_ref(&oc.omega));
    let combined = omega_col.augment(&oc.s_basis);
    let mut e1 = zeros(combined.ncols());
    e1[0] = Scalar::from_integer(1.into());
    let lambda = solve_linear(&combined.transpose(), &e1)?
        .ok_or_else(|| Error::Hypothesis("ω and S do not span Aⁿ".into()))?;

    // ω♯ kills d(A^{n−1}) because d(A^{n−1}) ⊆ S.
    if let Some(d) = alg.diff().block(n - 1) {
        for col in d.columns() {
            if !dot(&lambda, &col).is_zero() {
                return Err(Error::Hypothesis(
                    "ω♯ does not vanish on d(A^{n−1})".into(),
                ));
            }
        }
    }

    // φ blocks: entry (j, i) of the block at p is ω♯(e_i · b_j).
    let mut phi = GradedMatrixFamily::new(-n);
    for p in alg.space().support().collect::<Vec<_>>() {
        let qdeg = n - p;
        let dim_p = alg.space().dim(p);
        let dim_q = alg.space().dim(qdeg);
        if dim_p == 0 || dim_q == 0 {
            continue;
        }
        let mut block = Matrix::zero(dim_q, dim_p);
        for i in 0..dim_p {
            for j in 0..dim_q {
                let prod = alg.mul_basis(p, i, qdeg, j);
                let v = dot(&lambda, &prod);
                if !v.is_zero() {
                    block.set(j, i, v);
                }
            }
        }
        phi.set_block(p, block);
    }

    // φ(K) = 0 degreewise.
    if let Some(k) = kernel {
        for deg in k.degrees().collect::<Vec<_>>() {
            let basis = k.basis(deg).expect("listed degree");
            if let Some(block) = phi.block(deg) {
                let image = block.matmul(basis);
                if !image.is_zero() {
                    return Err(Error::Hypothesis(format!(
                        "φ(K) ≠ 0 in degree {deg}"
                    )));
                }
            }
        }
    }

    let dual = DualModule::new(Arc::clone(alg));
    let suspended = SuspendedModule::new(
        Arc::clone(&dual) as Arc<dyn DgModule>,
        n,
    );

    // φ̂ has the same blocks, now read as a degree-0 family into s^{−n}Hom.
    let mut phi_hat = GradedMatrixFamily::new(0);
    for deg in phi.degrees().collect::<Vec<_>>() {
        phi_hat.set_block(deg, phi.block(deg).expect("listed").clone());
    }

    let free = crate::module::FreeSelfModule::new(Arc::clone(alg));
    check_chain_map(free.as_ref(), suspended.as_ref(), &phi_hat, 0, cap)
        .map_err(|e| Error::NotChainMap {
            degree: e.degree,
            witness: format!("φ̂: {}", e.detail),
        })?;
    check_module_map(
        free.as_ref(),
        suspended.as_ref(),
        &phi_hat,
        action_generators,
        0,
        cap,
    )
    .map_err(|e| Error::Hypothesis(format!("φ̂ is not a module morphism: {}", e.detail)))?;

    // Quasi-isomorphism on the window: H(φ̂) must be square and nonsingular
    // in every degree 0..=cap (the suspended dual vanishes above n, so this
    // also rechecks that H(A) is concentrated in 0..=n).
    let susp_lo = suspended.space().min_degree().unwrap_or(0);
    let susp_h = cohomology(
        ComplexRef {
            space: suspended.space(),
            diff: suspended.diff(),
        },
        susp_lo.max(0),
        cap.min(n),
    )?;
    let alg_complex = ComplexRef::of_algebra(alg.as_ref());
    let ind = induced_map(
        &phi_hat,
        alg_complex,
        h,
        ComplexRef {
            space: suspended.space(),
            diff: suspended.diff(),
        },
        &susp_h,
    )?;
    for deg in 0..=cap {
        let src_dim = h.dim(deg);
        let tgt_dim = if deg <= cap.min(n) { susp_h.dim(deg) } else { 0 };
        if src_dim != tgt_dim {
            return Err(Error::Hypothesis(format!(
                "H(φ̂) cannot be an isomorphism in degree {deg}: {src_dim} vs {tgt_dim}"
            )));
        }
        if src_dim == 0 {
            continue;
        }
        let block = ind.block(deg).expect("nonzero source");
        if rank(block) < src_dim {
            return Err(Error::Hypothesis(format!(
                "H(φ̂) is singular in degree {deg}"
            )));
        }
    }

    // l: B → s^{−n}Hom with l∘q = φ̂, defined on the section and correct
    // because φ̂ kills K = ker q.
    let ell = match (q, q_target_section) {
        (Some(q_fam), Some(section)) => {
            let mut ell = GradedMatrixFamily::new(0);
            for deg in q_fam.degrees().collect::<Vec<_>>() {
                let s = section(deg);
                if s.ncols() == 0 {
                    continue;
                }
                if let Some(phi_block) = phi_hat.block(deg) {
                    ell.set_block(deg, phi_block.matmul(&s));
                }
            }
            // l ∘ q = φ̂ exactly.
            let lq = ell.compose(q_fam);
            if !lq.same_as(&phi_hat) {
                return Err(Error::Hypothesis(
                    "factorization failed: l∘q ≠ φ̂".into(),
                ));
            }
            Some(ell)
        }
        _ => None,
    };

    Ok(DualityMorphisms {
        omega_sharp: lambda,
        phi,
        phi_hat,
        dual,
        suspended,
        ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::algebra_cohomology;
    use crate::dga::{ExplicitAlgebra, SullivanSlice};
    use crate::graded::GradedVectorSpace;
    use crate::model::SullivanModel;
    use crate::poly::{Generator, Monomial, PolyElement};
    use crate::rational::rat;
    use std::collections::HashMap;

    fn s2_slice(cap: i64) -> Arc<SullivanSlice> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
        let model = SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap();
        SullivanSlice::new(model, cap)
    }

    fn cp2_slice(cap: i64) -> Arc<SullivanSlice> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 5)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![3, 0]), rat(1));
        let model = SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap();
        SullivanSlice::new(model, cap)
    }

    #[test]
    fn s2_is_pd_of_dimension_2() {
        let slice = s2_slice(6);
        let h = algebra_cohomology(slice.as_ref()).unwrap();
        let cert = detect_pd(slice.as_ref(), &h).unwrap();
        assert_eq!(cert.formal_dim, 2);
        let p0 = cert.pairings.get(&0).unwrap();
        assert_eq!(p0.get(0, 0), rat(1));
    }

    #[test]
    fn cp2_is_pd_of_dimension_4() {
        let slice = cp2_slice(8);
        let h = algebra_cohomology(slice.as_ref()).unwrap();
        let cert = detect_pd(slice.as_ref(), &h).unwrap();
        assert_eq!(cert.formal_dim, 4);
        // Middle pairing H² × H² is ω♯(x·x) = 1 on the class basis.
        let mid = cert.pairings.get(&2).unwrap();
        assert_eq!(mid.nrows(), 1);
        assert!(!mid.get(0, 0).is_zero());
    }

    /// The algebra ℚ ⊕ ℚa₂ ⊕ ℚb₂ with a² = ab = b² = 0.
    fn nonpd_algebra() -> Arc<ExplicitAlgebra> {
        let mut space = GradedVectorSpace::new();
        space.insert(0, vec!["1".into()]);
        space.insert(2, vec!["a".into(), "b".into()]);
        let mut products = HashMap::new();
        products.insert((0, 0, 0, 0), vec![rat(1)]);
        products.insert((0, 0, 2, 0), vec![rat(1), rat(0)]);
        products.insert((0, 0, 2, 1), vec![rat(0), rat(1)]);
        products.insert((2, 0, 0, 0), vec![rat(1), rat(0)]);
        products.insert((2, 1, 0, 0), vec![rat(0), rat(1)]);
        ExplicitAlgebra::new(4, space, GradedMatrixFamily::new(1), products)
    }

    #[test]
    fn degenerate_algebra_is_refused_with_witness() {
        let alg = nonpd_algebra();
        let h = algebra_cohomology(alg.as_ref()).unwrap();
        match detect_pd(alg.as_ref(), &h) {
            Err(PdFailure::Degenerate { degree, class, .. }) => {
                assert_eq!(degree, 2);
                // The witness is a genuine degenerate class: multiply its
                // representative with every basis element and land at zero.
                assert!(class.iter().any(|c| !c.is_zero()));
            }
            other => panic!("expected degenerate refusal, got {other:?}"),
        }
    }

    #[test]
    fn omega_complement_for_s2() {
        let slice = s2_slice(6);
        let h = algebra_cohomology(slice.as_ref()).unwrap();
        let cert = detect_pd(slice.as_ref(), &h).unwrap();
        let oc = choose_omega_complement(slice.as_ref(), &h, &cert, None).unwrap();
        // A² = span{x}: ω = x, S = 0.
        assert_eq!(oc.omega, vec![rat(1)]);
        assert_eq!(oc.s_basis.ncols(), 0);
    }

    #[test]
    fn duality_morphisms_for_s2_verify() {
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let h = algebra_cohomology(alg.as_ref()).unwrap();
        let cert = detect_pd(alg.as_ref(), &h).unwrap();
        let oc = choose_omega_complement(alg.as_ref(), &h, &cert, None).unwrap();
        let gens = slice.generator_elements();
        let dm = build_duality_morphisms(&alg, &h, &cert, &oc, &gens, None, None, None).unwrap();
        // ω♯(ω) = 1.
        assert_eq!(dot(&dm.omega_sharp, &oc.omega), rat(1));
        // φ(1)(ω) = ω♯(ω) = 1: block at degree 0 pairs with degree 2.
        let block0 = dm.phi.block(0).unwrap();
        assert_eq!(block0.get(0, 0), rat(1));
    }

    #[test]
    fn duality_morphisms_for_ground_field() {
        // R = ℚ in degree 0: φ(1) is the identity functional, n = 0.
        let model = SullivanModel::ground_field();
        let slice = SullivanSlice::new(model, 4);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let h = algebra_cohomology(alg.as_ref()).unwrap();
        let cert = detect_pd(alg.as_ref(), &h).unwrap();
        assert_eq!(cert.formal_dim, 0);
        let oc = choose_omega_complement(alg.as_ref(), &h, &cert, None).unwrap();
        let dm = build_duality_morphisms(&alg, &h, &cert, &oc, &[], None, None, None).unwrap();
        assert_eq!(dm.phi.block(0).unwrap().get(0, 0), rat(1));
    }

    #[test]
    fn chain_level_pairing_agrees_with_certificate() {
        // ω♯(rep_i · rep_j) equals the certificate pairing entry exactly:
        // the product is c·ω + db with c the class coefficient, and ω♯
        // kills both S and the coboundary part.
        for (slice, cap) in [(s2_slice(8), 8i64), (cp2_slice(12), 12)] {
            let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
            let h = algebra_cohomology(alg.as_ref()).unwrap();
            let cert = detect_pd(alg.as_ref(), &h).unwrap();
            let oc = choose_omega_complement(alg.as_ref(), &h, &cert, None).unwrap();
            let gens = slice.generator_elements();
            let dm = build_duality_morphisms(&alg, &h, &cert, &oc, &gens, None, None, None).unwrap();
            let n = cert.formal_dim;
            for (p, pairing) in &cert.pairings {
                let q = n - p;
                let reps_p = h.representatives(*p).unwrap();
                let reps_q = h.representatives(q).unwrap();
                for i in 0..reps_p.ncols() {
                    for j in 0..reps_q.ncols() {
                        let prod = crate::dga::mul_elements(
                            alg.as_ref(),
                            (*p, &reps_p.column(i)),
                            (q, &reps_q.column(j)),
                        );
                        let chain_level = dot(&dm.omega_sharp, &prod);
                        assert_eq!(chain_level, pairing.get(j, i), "cap {cap}, degree {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_forcing_omega_is_a_hypothesis_error() {
        // K = all of A² forces ω into Kⁿ.
        let slice = s2_slice(6);
        let h = algebra_cohomology(slice.as_ref()).unwrap();
        let cert = detect_pd(slice.as_ref(), &h).unwrap();
        let mut bases = BTreeMap::new();
        bases.insert(2, Matrix::identity(1));
        let k = DegreewiseIdeal::from_bases(bases);
        assert!(matches!(
            choose_omega_complement(slice.as_ref(), &h, &cert, Some(&k)),
            Err(Error::Hypothesis(_))
        ));
    }
}
