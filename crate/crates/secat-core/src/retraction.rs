//! Explicit module homotopy retractions.
//!
//! Given a chain algebra map `f: A → B` with `H(A)` a Poincaré duality
//! algebra and `H(f)` injective, a homotopy retraction of `f` in the category
//! of `(A,d)`-modules is constructed in four moves:
//!
//! 1. the surjective trick factors `f` through a quasi-isomorphic extension
//!    `R = A ⊗ Λ(U ⊕ dU)` with `q: R ↠ B` surjective and `r∘i = id`;
//! 2. the Poincaré duality pipeline provides the quasi-isomorphism
//!    `φ̂: R → s^{−n}Hom(R,ℚ)` killing `K = ker q`, which factors through `q`;
//! 3. `q` is factored as a semifree extension `j: R ↣ P` followed by a
//!    quasi-isomorphism `ψ: P → B`;
//! 4. a retraction `ρ: P → R` with `ρ∘j = id` is found by one global exact
//!    linear solve over the semifree generators.
//!
//! The witness `(P, g = j∘i, ψ, ret = r∘ρ)` then satisfies `ψ∘g = f` and
//! `ret∘g = id` exactly, and every identity is rechecked by
//! [`verify_retraction`]. Failures are classified: a cohomological
//! injectivity failure rules a retraction out (with a witness class), while
//! an unsolvable lift within the cap is only ever reported as undetermined.

use crate::cohomology::{algebra_cohomology, cohomology, induced_map, is_injective_on_h, ComplexRef};
use crate::dga::{mul_elements, DgAlgebra, SullivanSlice};
use crate::error::Error;
use crate::graded::GradedMatrixFamily;
use crate::linalg::{
    extend_to_complement, rank, rank_kernel_image, solve_linear, solve_multi, Matrix,
};
use crate::model::SullivanModel;
use crate::module::{
    check_chain_map, check_module_map, DgModule, FreeSelfModule, MappedModule, RestrictedModule,
    Sector, SemifreeModule, SfGenerator,
};
use crate::poincare::{build_duality_morphisms, choose_omega_complement, detect_pd};
use crate::poly::{Generator, Monomial, PolyElement};
use crate::quotient::DegreewiseIdeal;
use crate::rational::{zeros, Scalar};
use num::Zero;
use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

/// A chain algebra map into a materialized algebra, with enough structure to
/// run the pipeline: the source must be a Sullivan slice and the generator
/// images must be known so that the surjective trick can extend `f`
/// multiplicatively.
pub struct PipelineInput {
    pub source: Arc<SullivanSlice>,
    pub target: Arc<dyn DgAlgebra>,
    pub family: GradedMatrixFamily,
    /// Images of the source generators in target coordinates.
    pub gen_images: Vec<(i64, Vec<Scalar>)>,
}

impl PipelineInput {
    /// Assemble the input from generator images, materializing the family.
    pub fn from_gen_images(
        source: Arc<SullivanSlice>,
        target: Arc<dyn DgAlgebra>,
        gen_images: Vec<(i64, Vec<Scalar>)>,
    ) -> Self {
        let family = family_from_gen_images(source.as_ref(), target.as_ref(), &gen_images);
        PipelineInput {
            source,
            target,
            family,
            gen_images,
        }
    }
}

/// Evaluate a monomial under generator images, multiplying in the target.
fn eval_monomial(
    target: &dyn DgAlgebra,
    images: &[(i64, Vec<Scalar>)],
    mono: &Monomial,
) -> (i64, Vec<Scalar>) {
    let mut deg = 0i64;
    let mut vec = zeros(target.space().dim(0));
    if !vec.is_empty() {
        vec[0] = Scalar::from_integer(1.into());
    }
    for (i, &e) in mono.exps().iter().enumerate() {
        for _ in 0..e {
            let (gdeg, gvec) = &images[i];
            vec = mul_elements(target, (deg, &vec), (*gdeg, gvec));
            deg += gdeg;
            if vec.iter().all(|c| c.is_zero()) {
                return (mono_degree_hint(images, mono), zeros(target.space().dim(mono_degree_hint(images, mono))));
            }
        }
    }
    (deg, vec)
}

fn mono_degree_hint(images: &[(i64, Vec<Scalar>)], mono: &Monomial) -> i64 {
    mono.exps()
        .iter()
        .enumerate()
        .map(|(i, &e)| e as i64 * images[i].0)
        .sum()
}

/// Materialize the multiplicative extension of generator images degreewise.
fn family_from_gen_images(
    source: &SullivanSlice,
    target: &dyn DgAlgebra,
    images: &[(i64, Vec<Scalar>)],
) -> GradedMatrixFamily {
    let mut fam = GradedMatrixFamily::new(0);
    for deg in source.space().support().collect::<Vec<_>>() {
        let tgt_dim = target.space().dim(deg);
        let cols: Vec<Vec<Scalar>> = source
            .monomials(deg)
            .iter()
            .map(|m| {
                let (d, v) = eval_monomial(target, images, m);
                debug_assert_eq!(d, deg);
                debug_assert_eq!(v.len(), tgt_dim);
                v
            })
            .collect();
        fam.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
    }
    fam
}

/// The surjective trick: `f = q ∘ i` with `q` surjective degreewise,
/// `i: A → R` a quasi-isomorphism split by `r`, and `K = ker q`.
///
/// `R = A ⊗ Λ(U ⊕ dU)`, where `U` acquires one generator for each target
/// basis element not already in the image of `f` in its degree; `q` sends
/// that generator to its basis element and its differential to the
/// element's differential, which makes `q` surjective by construction while
/// keeping the adjoined factor contractible.
pub struct SurjectiveTrick {
    pub r_slice: Arc<SullivanSlice>,
    pub include: GradedMatrixFamily,
    pub retract_r: GradedMatrixFamily,
    pub q: GradedMatrixFamily,
    pub kernel: DegreewiseIdeal,
}

pub fn surjective_trick(input: &PipelineInput) -> Result<SurjectiveTrick, Error> {
    let source = &input.source;
    let target = &input.target;
    let cap = source.cap();
    let top = cap + 1;

    // Per degree, target basis elements missed by the image of f.
    let mut missed: Vec<(i64, usize)> = Vec::new();
    for deg in 1..=top {
        let tgt_dim = target.space().dim(deg);
        if tgt_dim == 0 {
            continue;
        }
        let image_cols: Vec<Vec<Scalar>> = match input.family.block(deg) {
            Some(b) => rank_kernel_image(b).image,
            None => Vec::new(),
        };
        let image = Matrix::from_columns(tgt_dim, &image_cols);
        for idx in extend_to_complement(&image)? {
            missed.push((deg, idx));
        }
    }

    // Build R: source generators, then u/v pairs per missed element.
    let mut taken: HashSet<String> = source
        .model()
        .generators()
        .iter()
        .map(|g| g.name.clone())
        .collect();
    let mut unique = |base: String| -> String {
        let mut name = base;
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        name
    };

    let n_src = source.model().num_generators();
    let mut gens: Vec<Generator> = source.model().generators().to_vec();
    let mut diffs: Vec<PolyElement> = Vec::new();
    let total = n_src + 2 * missed.len();
    for i in 0..n_src {
        diffs.push(widen_poly(source.model().differential_of(i), total));
    }
    // Record (u index, v index, target degree, target basis index).
    let mut adjoined: Vec<(usize, usize, i64, usize)> = Vec::new();
    let mut per_degree_counter: BTreeMap<i64, usize> = BTreeMap::new();
    for &(deg, idx) in &missed {
        let k = per_degree_counter.entry(deg).or_insert(0);
        let u_name = unique(format!("u{deg}_{k}"));
        let v_name = unique(format!("v{}_{k}", deg + 1));
        *k += 1;
        let u_index = gens.len();
        gens.push(Generator::new(u_name, deg));
        let v_index = gens.len();
        gens.push(Generator::new(v_name, deg + 1));
        adjoined.push((u_index, v_index, deg, idx));
    }
    for &(u_index, v_index, _, _) in &adjoined {
        debug_assert_eq!(diffs.len(), u_index);
        diffs.push(PolyElement::generator(total, v_index));
        debug_assert_eq!(diffs.len(), v_index);
        diffs.push(PolyElement::zero());
    }

    let r_model = SullivanModel::new(gens, diffs)?;
    let r_slice = SullivanSlice::new(Arc::clone(&r_model), cap);

    // i: A → R on monomials (exponent vectors extend by zeros).
    let mut include = GradedMatrixFamily::new(0);
    let mut retract_r = GradedMatrixFamily::new(0);
    for deg in source.space().support().collect::<Vec<_>>() {
        let src_dim = source.space().dim(deg);
        let r_dim = r_slice.space().dim(deg);
        let mut inc = Matrix::zero(r_dim, src_dim);
        for (j, m) in source.monomials(deg).iter().enumerate() {
            let wide = widen_mono(m, total);
            let (d, i) = r_slice.monomial_index(&wide).expect("widened monomial in slice");
            debug_assert_eq!(d, deg);
            inc.set(i, j, Scalar::from_integer(1.into()));
        }
        include.set_block(deg, inc);
    }
    for deg in r_slice.space().support().collect::<Vec<_>>() {
        let r_dim = r_slice.space().dim(deg);
        let src_dim = source.space().dim(deg);
        let mut ret = Matrix::zero(src_dim, r_dim);
        for (j, m) in r_slice.monomials(deg).iter().enumerate() {
            if m.exps()[n_src..].iter().all(|&e| e == 0) {
                let narrow = Monomial::from_exps(m.exps()[..n_src].to_vec());
                if let Some((d, i)) = source.monomial_index(&narrow) {
                    debug_assert_eq!(d, deg);
                    ret.set(i, j, Scalar::from_integer(1.into()));
                }
            }
        }
        retract_r.set_block(deg, ret);
    }

    // q: R → B by multiplicative extension.
    let mut q_images: Vec<(i64, Vec<Scalar>)> = Vec::with_capacity(r_model.num_generators());
    q_images.extend(input.gen_images.iter().cloned());
    let mut adjoined_images: BTreeMap<usize, (i64, Vec<Scalar>)> = BTreeMap::new();
    for &(u_index, v_index, deg, idx) in &adjoined {
        let mut uv = zeros(target.space().dim(deg));
        uv[idx] = Scalar::from_integer(1.into());
        let dv = match target.diff().block(deg) {
            Some(d) => d.apply(&uv),
            None => zeros(target.space().dim(deg + 1)),
        };
        adjoined_images.insert(u_index, (deg, uv));
        adjoined_images.insert(v_index, (deg + 1, dv));
    }
    for gi in n_src..r_model.num_generators() {
        q_images.push(adjoined_images.remove(&gi).expect("adjoined image"));
    }
    let q = family_from_gen_images(r_slice.as_ref(), target.as_ref(), &q_images);

    // Structural checks: r∘i = id, q∘i = f, q surjective, chain maps.
    let ri = retract_r.compose(&include);
    let id_a = GradedMatrixFamily::identity(input.source.space());
    if !ri.same_as(&id_a) {
        return Err(Error::Hypothesis("surjective trick: r∘i ≠ id".into()));
    }
    let qi = q.compose(&include);
    if !qi.same_as(&input.family) {
        return Err(Error::Hypothesis("surjective trick: q∘i ≠ f".into()));
    }
    let q_map = crate::dga::AlgebraMap {
        source: Arc::clone(&r_slice) as Arc<dyn DgAlgebra>,
        target: Arc::clone(target),
        family: q.clone(),
    };
    q_map.check_chain_map(cap)?;
    if let Some(deg) = q_map.surjective_up_to(top) {
        return Err(Error::NotSurjective(deg));
    }
    let kernel = crate::quotient::kernel_ideal(&q_map, top);

    Ok(SurjectiveTrick {
        r_slice,
        include,
        retract_r,
        q,
        kernel,
    })
}

fn widen_mono(m: &Monomial, total: usize) -> Monomial {
    let mut exps = m.exps().to_vec();
    exps.resize(total, 0);
    Monomial::from_exps(exps)
}

fn widen_poly(p: &PolyElement, total: usize) -> PolyElement {
    let mut out = PolyElement::zero();
    for (m, c) in p.terms() {
        out.add_term(widen_mono(m, total), c.clone());
    }
    out
}

/// Semifree factorization of a surjective chain map `q: R → B` of
/// `R`-modules: a split inclusion `j: R ↣ P` onto the base sector and a
/// quasi-isomorphism `ψ: P → B` with `ψ∘j = q`.
pub struct SemifreeFactorization {
    pub algebra: Arc<dyn DgAlgebra>,
    pub target: Arc<dyn DgAlgebra>,
    pub q: GradedMatrixFamily,
    pub module: Arc<SemifreeModule>,
    pub psi: GradedMatrixFamily,
    pub stages: usize,
}

/// Images under ψ of the adjoined generators, kept alongside `gens`.
struct PsiImages {
    images: Vec<(i64, Vec<Scalar>)>,
}

fn build_psi(
    module: &SemifreeModule,
    target: &dyn DgAlgebra,
    q: &GradedMatrixFamily,
    psi_images: &PsiImages,
) -> GradedMatrixFamily {
    let mut fam = GradedMatrixFamily::new(0);
    for deg in module.space().support().collect::<Vec<_>>() {
        let tgt_dim = target.space().dim(deg);
        let layout = module.layout_at(deg);
        let mut cols = Vec::with_capacity(layout.len());
        for &(sector, rdeg, ri) in layout {
            let col = match sector {
                Sector::Base => match q.block(rdeg) {
                    Some(b) => b.column(ri),
                    None => zeros(tgt_dim),
                },
                Sector::Gen(g) => {
                    // ψ(r·y) = q(r)·ψ(y)
                    let qr = match q.block(rdeg) {
                        Some(b) => b.column(ri),
                        None => zeros(target.space().dim(rdeg)),
                    };
                    let (ydeg, yimg) = &psi_images.images[g];
                    mul_elements(target, (rdeg, &qr), (*ydeg, yimg))
                }
            };
            cols.push(col);
        }
        fam.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
    }
    fam
}

pub fn semifree_factorization(
    algebra: Arc<dyn DgAlgebra>,
    target: Arc<dyn DgAlgebra>,
    q: &GradedMatrixFamily,
    stage_budget: usize,
) -> Result<SemifreeFactorization, Error> {
    let cap = algebra.cap();
    let mut gens: Vec<SfGenerator> = Vec::new();
    let mut psi_images = PsiImages { images: Vec::new() };

    for stage in 0..stage_budget {
        let module = SemifreeModule::new(Arc::clone(&algebra), gens.clone());
        let psi = build_psi(module.as_ref(), target.as_ref(), q, &psi_images);

        let lo = module.space().min_degree().unwrap_or(0).min(0);
        let h_p = cohomology(
            ComplexRef {
                space: module.space(),
                diff: module.diff(),
            },
            lo,
            cap,
        )?;
        let h_b = cohomology(ComplexRef::of_algebra(target.as_ref()), lo, cap)?;
        let ind = induced_map(
            &psi,
            ComplexRef {
                space: module.space(),
                diff: module.diff(),
            },
            &h_p,
            ComplexRef::of_algebra(target.as_ref()),
            &h_b,
        )?;

        let mut new_gens: Vec<SfGenerator> = Vec::new();
        let mut counter: BTreeMap<i64, usize> = BTreeMap::new();
        // Surjectivity: adjoin a cocycle generator per missed class of H(B).
        for deg in lo..=cap {
            let hb_dim = h_b.dim(deg);
            if hb_dim == 0 {
                continue;
            }
            let image_cols: Vec<Vec<Scalar>> = match ind.block(deg) {
                Some(b) => rank_kernel_image(b).image,
                None => Vec::new(),
            };
            let image = Matrix::from_columns(hb_dim, &image_cols);
            for idx in extend_to_complement(&image)? {
                let k = counter.entry(deg).or_insert(0);
                let name = format!("y{stage}_{deg}_{k}");
                *k += 1;
                new_gens.push(SfGenerator {
                    name,
                    degree: deg,
                    dy: Vec::new(),
                });
                let rep = h_b.representatives(deg).expect("nonzero H(B)").column(idx);
                psi_images.images.push((deg, rep));
            }
        }
        // Injectivity: kill each kernel class of H(ψ) with a generator one
        // degree below, mapping to a primitive of its image.
        for deg in lo..=cap {
            if h_p.dim(deg) == 0 {
                continue;
            }
            let block = ind.block(deg).expect("nonzero source cohomology");
            for class in rank_kernel_image(block).kernel {
                let z = h_p.class_to_chain(deg, &class);
                let psi_z = psi.apply(deg, &z, target.space().dim(deg));
                let w = if psi_z.iter().all(|c| c.is_zero()) {
                    zeros(target.space().dim(deg - 1))
                } else {
                    let d_b = target
                        .diff()
                        .block(deg - 1)
                        .ok_or_else(|| Error::Hypothesis(
                            "kernel class maps to a non-bounding cocycle".into(),
                        ))?;
                    solve_linear(d_b, &psi_z)?.ok_or_else(|| {
                        Error::Hypothesis("kernel class image is not a coboundary".into())
                    })?
                };
                let k = counter.entry(deg - 1).or_insert(0);
                let name = format!("y{stage}_{}_{k}", deg - 1);
                *k += 1;
                new_gens.push(SfGenerator {
                    name,
                    degree: deg - 1,
                    dy: module.flat_to_structured(deg, &z),
                });
                psi_images.images.push((deg - 1, w));
            }
        }

        if new_gens.is_empty() {
            return Ok(SemifreeFactorization {
                algebra,
                target,
                q: q.clone(),
                module,
                psi,
                stages: stage,
            });
        }
        gens.extend(new_gens);
    }
    Err(Error::StageBudgetExhausted(stage_budget))
}

/// Lift a retraction `ρ: P → R` with `ρ∘j = id` through one global exact
/// linear solve: the unknowns are the values `ρ(y) ∈ R^{|y|}` and the
/// constraints say `ρ` commutes with the differentials on every generator.
/// `None` means the system is inconsistent at this cap.
pub fn lift_retraction(sf: &SemifreeFactorization) -> Result<Option<GradedMatrixFamily>, Error> {
    let algebra = &sf.algebra;
    let module = &sf.module;
    let top = algebra.top();
    let gens = module.generators();

    // Variable layout.
    let mut offsets = Vec::with_capacity(gens.len());
    let mut nvars = 0usize;
    for g in gens {
        offsets.push(nvars);
        nvars += algebra.space().dim(g.degree);
    }
    // Equation layout.
    let mut eq_offsets = Vec::with_capacity(gens.len());
    let mut neqs = 0usize;
    for g in gens {
        eq_offsets.push(neqs);
        if g.degree + 1 <= top {
            neqs += algebra.space().dim(g.degree + 1);
        }
    }

    let mut system = Matrix::zero(neqs, nvars);
    let mut rhs = zeros(neqs);
    for (gi, g) in gens.iter().enumerate() {
        if g.degree + 1 > top {
            continue;
        }
        let row0 = eq_offsets[gi];
        // d_R · x_g
        if let Some(d) = algebra.diff().block(g.degree) {
            for (r, c, v) in d.entries() {
                system.set(row0 + r, offsets[gi] + c, v.clone());
            }
        }
        // minus ρ of the dy components.
        for (sector, ddeg, di, coeff) in &g.dy {
            match sector {
                Sector::Base => {
                    // contributes to the right-hand side
                    debug_assert_eq!(*ddeg, g.degree + 1);
                    rhs[row0 + di] += coeff;
                }
                Sector::Gen(g2) => {
                    // −coeff · (multiplication by e_{ddeg,di}) · x_{g2}
                    let tgt_dim = algebra.space().dim(g.degree + 1);
                    let src_dim = algebra.space().dim(gens[*g2].degree);
                    if tgt_dim == 0 || src_dim == 0 {
                        continue;
                    }
                    for c in 0..src_dim {
                        let prod = algebra.mul_basis(*ddeg, *di, gens[*g2].degree, c);
                        for (r, v) in prod.iter().enumerate() {
                            if !v.is_zero() {
                                let cur = system.get(row0 + r, offsets[*g2] + c);
                                system.set(row0 + r, offsets[*g2] + c, cur - coeff * v);
                            }
                        }
                    }
                }
            }
        }
    }

    let solution = match solve_linear(&system, &rhs)? {
        Some(x) => x,
        None => return Ok(None),
    };

    // Assemble ρ.
    let gen_values: Vec<(i64, Vec<Scalar>)> = gens
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            let dim = algebra.space().dim(g.degree);
            (g.degree, solution[offsets[gi]..offsets[gi] + dim].to_vec())
        })
        .collect();

    let mut rho = GradedMatrixFamily::new(0);
    for deg in module.space().support().collect::<Vec<_>>() {
        let r_dim = algebra.space().dim(deg);
        let layout = module.layout_at(deg);
        let mut cols = Vec::with_capacity(layout.len());
        for &(sector, rdeg, ri) in layout {
            let col = match sector {
                Sector::Base => {
                    let mut v = zeros(r_dim);
                    v[ri] = Scalar::from_integer(1.into());
                    v
                }
                Sector::Gen(g) => {
                    let mut e = zeros(algebra.space().dim(rdeg));
                    e[ri] = Scalar::from_integer(1.into());
                    let (ydeg, yval) = &gen_values[g];
                    mul_elements(algebra.as_ref(), (rdeg, &e), (*ydeg, yval))
                }
            };
            cols.push(col);
        }
        rho.set_block(deg, Matrix::from_columns(r_dim, &cols));
    }
    Ok(Some(rho))
}

/// Outcome of the retraction pipeline.
pub enum RetractionOutcome {
    Built(Box<RetractionWitness>),
    /// `H(f)` has a kernel class: no retraction can exist at any cap.
    NotInjective {
        degree: i64,
        class: Vec<Scalar>,
    },
    /// `H(A)` failed Poincaré duality within the window.
    NotPd { reason: String },
    /// The lifting system is inconsistent at this cap; existence is
    /// undecided (a larger cap may still succeed).
    Undetermined { detail: String },
}

/// The full quadruple realizing the homotopy retraction, with everything
/// needed to re-verify it.
pub struct RetractionWitness {
    pub source: Arc<SullivanSlice>,
    pub target: Arc<dyn DgAlgebra>,
    pub f: GradedMatrixFamily,
    pub r_slice: Arc<SullivanSlice>,
    pub include: GradedMatrixFamily,
    pub retract_r: GradedMatrixFamily,
    pub q: GradedMatrixFamily,
    pub module: Arc<SemifreeModule>,
    pub g: GradedMatrixFamily,
    pub psi: GradedMatrixFamily,
    pub rho: GradedMatrixFamily,
    pub ret: GradedMatrixFamily,
    pub formal_dim: i64,
    /// Ranks per degree of the bottom-triangle discrepancy `φ̂∘ρ − l∘ψ` on
    /// cohomology representatives. Diagnostic only; the retraction identities
    /// do not depend on it.
    pub triangle_defect: Vec<(i64, usize)>,
    pub semifree_stages: usize,
}

/// Default stage budget for the semifree factorization.
fn default_stage_budget(cap: i64) -> usize {
    (cap as usize) + 4
}

pub fn build_homotopy_retraction(input: &PipelineInput) -> Result<RetractionOutcome, Error> {
    let cap = input.source.cap();

    // Hypothesis check: H(f) injective (reported, not assumed).
    let h_a = algebra_cohomology(input.source.as_ref())?;
    let h_b = algebra_cohomology(input.target.as_ref())?;
    let src_complex = ComplexRef::of_algebra(input.source.as_ref());
    let tgt_complex = ComplexRef::of_algebra(input.target.as_ref());
    let ind_f = induced_map(&input.family, src_complex, &h_a, tgt_complex, &h_b)?;
    let inj = is_injective_on_h(&ind_f, &h_a);
    if let Some((degree, class)) = inj.failure {
        return Ok(RetractionOutcome::NotInjective { degree, class });
    }

    // Hypothesis check: H(A) is a Poincaré duality algebra.
    if let Err(fail) = detect_pd(input.source.as_ref(), &h_a) {
        return Ok(RetractionOutcome::NotPd {
            reason: fail.describe(),
        });
    }

    // Surjective trick and duality data on R.
    let st = surjective_trick(input)?;
    let r_alg = Arc::clone(&st.r_slice) as Arc<dyn DgAlgebra>;
    let h_r = algebra_cohomology(r_alg.as_ref())?;

    // H(i) is an isomorphism up to the cap.
    let r_complex = ComplexRef::of_algebra(r_alg.as_ref());
    let ind_i = induced_map(&st.include, src_complex, &h_a, r_complex, &h_r)?;
    for deg in 0..=cap {
        if h_a.dim(deg) != h_r.dim(deg) {
            return Err(Error::Hypothesis(format!(
                "H(i) dimension mismatch in degree {deg}"
            )));
        }
        if h_a.dim(deg) > 0 {
            let block = ind_i.block(deg).expect("nonzero source");
            if rank(block) < h_a.dim(deg) {
                return Err(Error::Hypothesis(format!(
                    "H(i) singular in degree {deg}"
                )));
            }
        }
    }

    let cert_r = match detect_pd(r_alg.as_ref(), &h_r) {
        Ok(c) => c,
        Err(fail) => {
            return Ok(RetractionOutcome::NotPd {
                reason: format!("H(R): {}", fail.describe()),
            })
        }
    };
    let oc = choose_omega_complement(r_alg.as_ref(), &h_r, &cert_r, Some(&st.kernel))?;

    // Deterministic section of q for the factorization l.
    let q_for_section = st.q.clone();
    let target_for_section = Arc::clone(&input.target);
    let section = move |deg: i64| -> Matrix {
        let tgt_dim = target_for_section.space().dim(deg);
        match q_for_section.block(deg) {
            Some(b) if tgt_dim > 0 => solve_multi(b, &Matrix::identity(tgt_dim))
                .expect("dimensions agree")
                .expect("q is surjective"),
            _ => Matrix::zero(0, tgt_dim),
        }
    };
    let dm = build_duality_morphisms(
        &r_alg,
        &h_r,
        &cert_r,
        &oc,
        &st.r_slice.generator_elements(),
        Some(&st.kernel),
        Some(&st.q),
        Some(&section),
    )?;

    // Semifree factorization of q and the lifted retraction.
    let sf = semifree_factorization(
        Arc::clone(&r_alg),
        Arc::clone(&input.target),
        &st.q,
        default_stage_budget(cap),
    )?;
    let rho = match lift_retraction(&sf)? {
        Some(rho) => rho,
        None => {
            return Ok(RetractionOutcome::Undetermined {
                detail: format!(
                    "the lifting system for ρ is inconsistent at cap {cap}; \
                     a retraction may still exist at a larger cap"
                ),
            })
        }
    };

    // Assemble the witness maps.
    let j = sf.module.base_inclusion();
    let g = j.compose(&st.include);
    let ret = st.retract_r.compose(&rho);

    // Bottom-triangle diagnostic: rank of H(φ̂∘ρ − l∘ψ) per degree.
    let mut triangle_defect = Vec::new();
    if let Some(ell) = &dm.ell {
        let lhs = dm.phi_hat.compose(&rho);
        let rhs = ell.compose(&sf.psi);
        let diff_fam = lhs.sub(&rhs);
        let lo = sf.module.space().min_degree().unwrap_or(0).min(0);
        let h_p = cohomology(
            ComplexRef {
                space: sf.module.space(),
                diff: sf.module.diff(),
            },
            lo,
            cap,
        )?;
        for deg in 0..=cap {
            if h_p.dim(deg) == 0 {
                continue;
            }
            let reps = h_p.representatives(deg).expect("reps");
            if let Some(block) = diff_fam.block(deg) {
                let restricted = block.matmul(reps);
                let r = rank(&restricted);
                if r > 0 {
                    triangle_defect.push((deg, r));
                }
            }
        }
    }

    let witness = RetractionWitness {
        source: Arc::clone(&input.source),
        target: Arc::clone(&input.target),
        f: input.family.clone(),
        r_slice: st.r_slice,
        include: st.include,
        retract_r: st.retract_r,
        q: st.q,
        module: Arc::clone(&sf.module),
        g,
        psi: sf.psi.clone(),
        rho,
        ret,
        formal_dim: cert_r.formal_dim,
        triangle_defect,
        semifree_stages: sf.stages,
    };
    Ok(RetractionOutcome::Built(Box::new(witness)))
}

/// One named identity check of a witness.
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Re-verify a witness from scratch: `ψ∘g = f`, `ret∘g = id`, all three maps
/// are chain maps, `g`/`ret`/`ψ` are module morphisms over the source
/// algebra generators, and `H(ψ)` is an isomorphism up to the cap. All
/// checks are exact.
pub fn verify_retraction(w: &RetractionWitness) -> VerificationReport {
    let cap = w.source.cap();
    let mut checks = Vec::new();

    let psi_g = w.psi.compose(&w.g);
    checks.push(CheckResult {
        name: "psi_after_g_equals_f",
        passed: psi_g.same_as(&w.f),
        detail: "ψ∘g = f".into(),
    });

    let ret_g = w.ret.compose(&w.g);
    let id_a = GradedMatrixFamily::identity(w.source.space());
    checks.push(CheckResult {
        name: "ret_after_g_is_identity",
        passed: ret_g.same_as(&id_a),
        detail: "ret∘g = id".into(),
    });

    // Module structures over A.
    let a_alg = Arc::clone(&w.source) as Arc<dyn DgAlgebra>;
    let a_module = FreeSelfModule::new(Arc::clone(&a_alg));
    let p_over_r = Arc::clone(&w.module) as Arc<dyn DgModule>;
    let p_over_a = RestrictedModule::new(Arc::clone(&a_alg), p_over_r, w.include.clone());
    let b_over_a = MappedModule::new(Arc::clone(&a_alg), Arc::clone(&w.target), w.f.clone());

    let chain_ok = |name: &'static str, res: Result<(), crate::module::MapCheckFailure>| match res {
        Ok(()) => CheckResult {
            name,
            passed: true,
            detail: "chain map".into(),
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.detail,
        },
    };
    checks.push(chain_ok(
        "g_chain_map",
        check_chain_map(a_module.as_ref(), p_over_a.as_ref(), &w.g, 0, cap),
    ));
    checks.push(chain_ok(
        "psi_chain_map",
        check_chain_map(p_over_a.as_ref(), b_over_a.as_ref(), &w.psi, 0, cap),
    ));
    checks.push(chain_ok(
        "ret_chain_map",
        check_chain_map(p_over_a.as_ref(), a_module.as_ref(), &w.ret, 0, cap),
    ));

    let gens = w.source.generator_elements();
    let module_ok = |name: &'static str, res: Result<(), crate::module::MapCheckFailure>| match res {
        Ok(()) => CheckResult {
            name,
            passed: true,
            detail: "module morphism over generators".into(),
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.detail,
        },
    };
    checks.push(module_ok(
        "g_module_morphism",
        check_module_map(a_module.as_ref(), p_over_a.as_ref(), &w.g, &gens, 0, cap),
    ));
    checks.push(module_ok(
        "ret_module_morphism",
        check_module_map(p_over_a.as_ref(), a_module.as_ref(), &w.ret, &gens, 0, cap),
    ));
    checks.push(module_ok(
        "psi_module_morphism",
        check_module_map(p_over_a.as_ref(), b_over_a.as_ref(), &w.psi, &gens, 0, cap),
    ));

    // H(ψ) isomorphism on the window.
    let quasi = (|| -> Result<bool, Error> {
        let lo = w.module.space().min_degree().unwrap_or(0).min(0);
        let h_p = cohomology(
            ComplexRef {
                space: w.module.space(),
                diff: w.module.diff(),
            },
            lo,
            cap,
        )?;
        let h_b = cohomology(ComplexRef::of_algebra(w.target.as_ref()), lo, cap)?;
        let ind = induced_map(
            &w.psi,
            ComplexRef {
                space: w.module.space(),
                diff: w.module.diff(),
            },
            &h_p,
            ComplexRef::of_algebra(w.target.as_ref()),
            &h_b,
        )?;
        for deg in lo..=cap {
            if h_p.dim(deg) != h_b.dim(deg) {
                return Ok(false);
            }
            if h_p.dim(deg) > 0 {
                let block = ind.block(deg).expect("nonzero source");
                if rank(block) < h_p.dim(deg) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })();
    checks.push(CheckResult {
        name: "psi_quasi_iso",
        passed: matches!(quasi, Ok(true)),
        detail: "H(ψ) isomorphism up to cap".into(),
    });

    VerificationReport { checks }
}

/// Convenience: the identity pipeline input `id: A → A`.
pub fn identity_input(slice: &Arc<SullivanSlice>) -> PipelineInput {
    let gen_images = slice.generator_elements();
    PipelineInput::from_gen_images(
        Arc::clone(slice),
        Arc::clone(slice) as Arc<dyn DgAlgebra>,
        gen_images,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SullivanModel;
    use crate::poly::Generator;

    fn s3_slice(cap: i64) -> Arc<SullivanSlice> {
        let model =
            SullivanModel::new(vec![Generator::new("x", 3)], vec![PolyElement::zero()]).unwrap();
        SullivanSlice::new(model, cap)
    }

    fn ground_to_s3(cap: i64) -> PipelineInput {
        let source = SullivanSlice::new(SullivanModel::ground_field(), cap);
        let target = s3_slice(cap);
        PipelineInput::from_gen_images(source, target as Arc<dyn DgAlgebra>, Vec::new())
    }

    #[test]
    fn surjective_trick_on_identity_adds_nothing() {
        let slice = s3_slice(8);
        let input = identity_input(&slice);
        let st = surjective_trick(&input).unwrap();
        assert_eq!(st.r_slice.model().num_generators(), 1);
        assert!(st.kernel.is_zero());
    }

    #[test]
    fn surjective_trick_ground_to_s3_adjoins_u3() {
        let input = ground_to_s3(6);
        let st = surjective_trick(&input).unwrap();
        // One missed basis element (x in degree 3): generators u3_0, v4_0.
        let names: Vec<&str> = st
            .r_slice
            .model()
            .generators()
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        assert_eq!(names, vec!["u3_0", "v4_0"]);
        // q(u) = x forces q(v) = dx = 0, and v generates the kernel in
        // degree 4.
        assert_eq!(st.kernel.dim(4), 1);
    }

    #[test]
    fn semifree_factorization_of_identity_is_trivial() {
        let slice = s3_slice(8);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let id = GradedMatrixFamily::identity(slice.space());
        let sf = semifree_factorization(Arc::clone(&alg), alg, &id, 10).unwrap();
        assert!(sf.module.generators().is_empty());
        assert_eq!(sf.stages, 0);
    }

    #[test]
    fn lift_on_trivial_extension_is_identity() {
        let slice = s3_slice(8);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let id = GradedMatrixFamily::identity(slice.space());
        let sf = semifree_factorization(Arc::clone(&alg), alg, &id, 10).unwrap();
        let rho = lift_retraction(&sf).unwrap().unwrap();
        assert!(rho.same_as(&GradedMatrixFamily::identity(slice.space())));
    }

    #[test]
    fn retraction_for_identity_map() {
        let slice = s3_slice(8);
        let input = identity_input(&slice);
        match build_homotopy_retraction(&input).unwrap() {
            RetractionOutcome::Built(w) => {
                let report = verify_retraction(&w);
                assert!(report.passed(), "failed: {:?}", report.first_failure().map(|c| c.name));
            }
            _ => panic!("identity should admit a retraction"),
        }
    }

    #[test]
    fn retraction_for_ground_field_into_s3() {
        // H(f): ℚ → H(S³) is injective and H(ℚ) is PD with n = 0.
        let input = ground_to_s3(8);
        match build_homotopy_retraction(&input).unwrap() {
            RetractionOutcome::Built(w) => {
                let report = verify_retraction(&w);
                assert!(report.passed(), "failed: {:?}", report.first_failure().map(|c| c.name));
                assert_eq!(w.formal_dim, 0);
            }
            RetractionOutcome::NotInjective { .. } => panic!("H(f) is injective"),
            RetractionOutcome::NotPd { reason } => panic!("unexpected: {reason}"),
            RetractionOutcome::Undetermined { detail } => panic!("unexpected: {detail}"),
        }
    }

    #[test]
    fn corrupted_witness_fails_named_checks() {
        let slice = s3_slice(8);
        let input = identity_input(&slice);
        let RetractionOutcome::Built(mut w) = build_homotopy_retraction(&input).unwrap() else {
            panic!("identity should admit a retraction");
        };
        // Zero out ret: the composite identity must fail.
        w.ret = GradedMatrixFamily::new(0);
        let report = verify_retraction(&w);
        assert!(!report.passed());
        assert_eq!(report.first_failure().unwrap().name, "ret_after_g_is_identity");
        // Zero out ψ instead: the quasi-isomorphism check must fail.
        let RetractionOutcome::Built(mut w2) = build_homotopy_retraction(&input).unwrap() else {
            unreachable!()
        };
        w2.psi = GradedMatrixFamily::new(0);
        let report2 = verify_retraction(&w2);
        assert!(report2
            .checks
            .iter()
            .any(|c| c.name == "psi_quasi_iso" && !c.passed));
    }

    #[test]
    fn eval_monomial_multiplies_images() {
        let slice = s3_slice(8);
        let input = identity_input(&slice);
        // x ↦ x: the family should be the identity.
        let id = GradedMatrixFamily::identity(slice.space());
        assert!(input.family.same_as(&id));
    }
}
