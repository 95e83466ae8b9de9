//! Degreewise ideals, ideal powers and quotient cochain algebras.
//!
//! Ideals are stored as per-degree column bases inside a materialized
//! algebra. Powers of the kernel ideal of `μ` are computed by iterated
//! degreewise spans of pairwise products, re-eliminated per degree; the
//! quotients `(ΛV ⊗ ΛV)/(ker μ)^{n+1}` and the word-length quotients
//! `ΛV/Λ^{>n}V` are built the same way, with the quotient basis chosen by
//! greedy complement extension so all bases are reproducible.

use crate::dga::{mul_elements, AlgebraMap, DgAlgebra, SullivanSlice};
use crate::error::Error;
use crate::graded::{GradedMatrixFamily, GradedVectorSpace};
use crate::linalg::{extend_to_complement, in_span, solve_multi, span_basis, Matrix};
use crate::rational::{zeros, Scalar};
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Per-degree bases (columns) of a graded subspace of an algebra, closed
/// under multiplication by the ambient algebra on the materialized range.
#[derive(Clone, Default)]
pub struct DegreewiseIdeal {
    bases: BTreeMap<i64, Matrix>,
}

impl DegreewiseIdeal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_bases(bases: BTreeMap<i64, Matrix>) -> Self {
        let bases = bases.into_iter().filter(|(_, m)| m.ncols() > 0).collect();
        DegreewiseIdeal { bases }
    }

    pub fn basis(&self, degree: i64) -> Option<&Matrix> {
        self.bases.get(&degree)
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.bases.get(&degree).map_or(0, Matrix::ncols)
    }

    pub fn is_zero(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    /// Degreewise containment of `self` in `other` (as subspaces).
    pub fn contained_in(&self, other: &DegreewiseIdeal) -> bool {
        self.bases.iter().all(|(deg, basis)| {
            let target = match other.basis(*deg) {
                Some(t) => t,
                None => return basis.ncols() == 0,
            };
            basis.columns().iter().all(|col| in_span(target, col))
        })
    }
}

/// Kernel ideal of an algebra map, degreewise up to `hi`.
pub fn kernel_ideal(map: &AlgebraMap, hi: i64) -> DegreewiseIdeal {
    DegreewiseIdeal::from_bases(map.kernel_bases(hi))
}

/// Degreewise span of products of elements of `a` and `b`, up to `hi`.
pub fn ideal_product(
    alg: &dyn DgAlgebra,
    a: &DegreewiseIdeal,
    b: &DegreewiseIdeal,
    hi: i64,
) -> DegreewiseIdeal {
    let mut bases = BTreeMap::new();
    for t in 0..=hi {
        let dim_t = alg.space().dim(t);
        if dim_t == 0 {
            continue;
        }
        let mut products: Vec<Vec<Scalar>> = Vec::new();
        for p in a.degrees() {
            let q = t - p;
            let (Some(ba), Some(bb)) = (a.basis(p), b.basis(q)) else {
                continue;
            };
            for u in ba.columns() {
                for w in bb.columns() {
                    let prod = mul_elements(alg, (p, &u), (q, &w));
                    if prod.iter().any(|c| !c.is_zero()) {
                        products.push(prod);
                    }
                }
            }
        }
        if !products.is_empty() {
            let basis = span_basis(dim_t, &products);
            if basis.ncols() > 0 {
                bases.insert(t, basis);
            }
        }
    }
    DegreewiseIdeal::from_bases(bases)
}

/// `base^m` as a degreewise ideal, `m ≥ 1`.
pub fn ideal_power(alg: &dyn DgAlgebra, base: &DegreewiseIdeal, m: u32, hi: i64) -> DegreewiseIdeal {
    assert!(m >= 1);
    let mut acc = base.clone();
    for _ in 1..m {
        acc = ideal_product(alg, &acc, base, hi);
    }
    acc
}

/// Verify that `d` maps each ideal basis element into the ideal, on every
/// degree where the check stays inside the materialized range.
pub fn check_d_stable(alg: &dyn DgAlgebra, ideal: &DegreewiseIdeal) -> Result<(), Error> {
    let top = alg.top();
    for deg in ideal.degrees().collect::<Vec<_>>() {
        if deg + 1 > top {
            continue;
        }
        let basis = ideal.basis(deg).expect("listed degree");
        let d = match alg.diff().block(deg) {
            Some(d) => d,
            None => continue,
        };
        let target = ideal.basis(deg + 1);
        for (k, col) in basis.columns().iter().enumerate() {
            let dv = d.apply(col);
            if dv.iter().all(|c| c.is_zero()) {
                continue;
            }
            let ok = match target {
                Some(t) => in_span(t, &dv),
                None => false,
            };
            if !ok {
                return Err(Error::IdealNotDStable {
                    degree: deg,
                    witness: format!("ideal basis vector {k} in degree {deg}"),
                });
            }
        }
    }
    Ok(())
}

/// Quotient of a materialized algebra by a d-stable degreewise ideal.
///
/// The quotient basis in each degree is the greedy canonical complement of
/// the ideal, so quotient basis vectors are images of ambient basis elements
/// (the stored representatives give a degreewise section of the projection).
pub struct QuotientSlice {
    ambient: Arc<dyn DgAlgebra>,
    cap: i64,
    space: GradedVectorSpace,
    /// Ambient basis indices representing the quotient basis, per degree.
    reps: BTreeMap<i64, Vec<usize>>,
    projection: GradedMatrixFamily,
    diff: GradedMatrixFamily,
}

impl QuotientSlice {
    pub fn representative_indices(&self, degree: i64) -> &[usize] {
        self.reps.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn projection(&self) -> &GradedMatrixFamily {
        &self.projection
    }

    pub fn ambient(&self) -> &Arc<dyn DgAlgebra> {
        &self.ambient
    }

    /// Section matrix of the projection in one degree: quotient basis →
    /// ambient representatives.
    pub fn section(&self, degree: i64) -> Matrix {
        let amb_dim = self.ambient.space().dim(degree);
        let reps = self.representative_indices(degree);
        let cols: Vec<Vec<Scalar>> = reps
            .iter()
            .map(|&i| {
                let mut v = zeros(amb_dim);
                v[i] = Scalar::from_integer(1.into());
                v
            })
            .collect();
        Matrix::from_columns(amb_dim, &cols)
    }
}

impl DgAlgebra for QuotientSlice {
    fn cap(&self) -> i64 {
        self.cap
    }

    fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    fn diff(&self) -> &GradedMatrixFamily {
        &self.diff
    }

    fn mul_basis(&self, p: i64, i: usize, q: i64, j: usize) -> Vec<Scalar> {
        let ri = self.representative_indices(p)[i];
        let rj = self.representative_indices(q)[j];
        let prod = self.ambient.mul_basis(p, ri, q, rj);
        match self.projection.block(p + q) {
            Some(pi) => pi.apply(&prod),
            None => zeros(self.space.dim(p + q)),
        }
    }
}

/// Build the quotient algebra and the projection chain map. The ideal is
/// checked to be d-stable first; a failure carries a witness.
pub fn quotient_by_ideal(
    ambient: Arc<dyn DgAlgebra>,
    ideal: &DegreewiseIdeal,
) -> Result<(Arc<QuotientSlice>, AlgebraMap), Error> {
    check_d_stable(ambient.as_ref(), ideal)?;
    let cap = ambient.cap();
    let top = ambient.top();

    let mut space = GradedVectorSpace::new();
    let mut reps = BTreeMap::new();
    let mut projection = GradedMatrixFamily::new(0);

    for deg in 0..=top {
        let amb_dim = ambient.space().dim(deg);
        if amb_dim == 0 {
            continue;
        }
        let ideal_basis = ideal
            .basis(deg)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(amb_dim, 0));
        let complement = extend_to_complement(&ideal_basis)?;
        let labels: Vec<String> = complement
            .iter()
            .map(|&i| ambient.label(deg, i))
            .collect();
        // Projection coordinates: solve [ideal | section]·X = I and keep the
        // section rows.
        let section_cols: Vec<Vec<Scalar>> = complement
            .iter()
            .map(|&i| {
                let mut v = zeros(amb_dim);
                v[i] = Scalar::from_integer(1.into());
                v
            })
            .collect();
        let combined = ideal_basis.augment(&Matrix::from_columns(amb_dim, &section_cols));
        let coords = solve_multi(&combined, &Matrix::identity(amb_dim))?
            .expect("ideal basis and complement span the ambient degree");
        let k = ideal_basis.ncols();
        let mut proj = Matrix::zero(complement.len(), amb_dim);
        for row in 0..complement.len() {
            for col in 0..amb_dim {
                let v = coords.get(k + row, col);
                if !v.is_zero() {
                    proj.set(row, col, v);
                }
            }
        }
        projection.set_block(deg, proj);
        space.insert(deg, labels);
        reps.insert(deg, complement);
    }

    // Induced differential: d̄ = π ∘ d ∘ section.
    let mut diff = GradedMatrixFamily::new(1);
    for deg in 0..=cap {
        let reps_here = match reps.get(&deg) {
            Some(r) if !r.is_empty() => r.clone(),
            _ => continue,
        };
        let (Some(d), Some(pi)) = (ambient.diff().block(deg), projection.block(deg + 1)) else {
            continue;
        };
        let tgt_dim = pi.nrows();
        let cols: Vec<Vec<Scalar>> = reps_here
            .iter()
            .map(|&i| {
                let mut v = zeros(ambient.space().dim(deg));
                v[i] = Scalar::from_integer(1.into());
                pi.apply(&d.apply(&v))
            })
            .collect();
        diff.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
    }

    let quotient = Arc::new(QuotientSlice {
        ambient: Arc::clone(&ambient),
        cap,
        space,
        reps,
        projection: projection.clone(),
        diff,
    });

    // The projection is a chain map and d̄² = 0 on the certified range;
    // both follow from d-stability, but are cheap to confirm.
    let proj_map = AlgebraMap {
        source: ambient,
        target: Arc::clone(&quotient) as Arc<dyn DgAlgebra>,
        family: projection,
    };
    proj_map.check_chain_map(cap)?;
    let dd = quotient.diff.compose(&quotient.diff);
    for deg in 0..cap {
        if let Some(b) = dd.block(deg) {
            assert!(b.is_zero(), "induced differential fails d̄²=0 in degree {deg}");
        }
    }

    Ok((quotient, proj_map))
}

/// Span of the monomials of word length `> n`, degreewise.
pub fn word_length_ideal(slice: &SullivanSlice, n: u32) -> DegreewiseIdeal {
    let mut bases = BTreeMap::new();
    for deg in slice.space().support().collect::<Vec<_>>() {
        let monos = slice.monomials(deg);
        let dim = monos.len();
        let cols: Vec<Vec<Scalar>> = monos
            .iter()
            .enumerate()
            .filter(|(_, m)| m.word_length() > n)
            .map(|(i, _)| {
                let mut v = zeros(dim);
                v[i] = Scalar::from_integer(1.into());
                v
            })
            .collect();
        if !cols.is_empty() {
            bases.insert(deg, Matrix::from_columns(dim, &cols));
        }
    }
    DegreewiseIdeal::from_bases(bases)
}

/// Quotient by word length: `(ΛV/Λ^{>n}V, d̄)` with its projection.
pub fn word_length_quotient(
    slice: &Arc<SullivanSlice>,
    n: u32,
) -> Result<(Arc<QuotientSlice>, AlgebraMap), Error> {
    let ideal = word_length_ideal(slice, n);
    quotient_by_ideal(Arc::clone(slice) as Arc<dyn DgAlgebra>, &ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::morphism_family;
    use crate::model::{tensor_square, SullivanModel};
    use crate::poly::{Generator, Monomial, PolyElement};
    use crate::rational::rat;

    fn s2() -> Arc<SullivanModel> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
        SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap()
    }

    fn s3() -> Arc<SullivanModel> {
        SullivanModel::new(vec![Generator::new("x", 3)], vec![PolyElement::zero()]).unwrap()
    }

    fn mu_map(base: &Arc<SullivanModel>, cap: i64) -> (Arc<SullivanSlice>, AlgebraMap) {
        let ts = tensor_square(base);
        let ts_slice = SullivanSlice::new(Arc::clone(&ts.model), cap);
        let base_slice = SullivanSlice::new(Arc::clone(&ts.base), cap);
        let fam = morphism_family(&ts.mu, &ts_slice, &base_slice);
        (
            Arc::clone(&ts_slice),
            AlgebraMap {
                source: ts_slice,
                target: base_slice,
                family: fam,
            },
        )
    }

    #[test]
    fn kernel_of_mu_for_s3_in_low_degrees() {
        let (_ts_slice, map) = mu_map(&s3(), 9);
        let ker = kernel_ideal(&map, 10);
        // degree 0: μ is an isomorphism, kernel 0.
        assert_eq!(ker.dim(0), 0);
        // degree 3: spanned by x − x′.
        assert_eq!(ker.dim(3), 1);
        // degree 6: spanned by x x′ (μ(x x′) = x² = 0).
        assert_eq!(ker.dim(6), 1);
    }

    #[test]
    fn kernel_square_of_s3_vanishes() {
        // (x − x′)² = 0 and (x − x′)·x x′ = 0 in Λ(x₃, x₃′): the square of
        // the kernel ideal is zero through degree 9.
        let (ts_slice, map) = mu_map(&s3(), 9);
        let ker = kernel_ideal(&map, 10);
        let sq = ideal_power(ts_slice.as_ref(), &ker, 2, 10);
        assert!(sq.is_zero());
    }

    #[test]
    fn ideal_powers_are_nested() {
        let (ts_slice, map) = mu_map(&s2(), 8);
        let ker = kernel_ideal(&map, 9);
        let p2 = ideal_power(ts_slice.as_ref(), &ker, 2, 9);
        let p3 = ideal_power(ts_slice.as_ref(), &ker, 3, 9);
        assert!(p2.contained_in(&ker));
        assert!(p3.contained_in(&p2));
    }

    #[test]
    fn quotient_by_zero_ideal_is_identity() {
        let slice = SullivanSlice::new(s2(), 6);
        let (q, proj) = quotient_by_ideal(
            Arc::clone(&slice) as Arc<dyn DgAlgebra>,
            &DegreewiseIdeal::zero(),
        )
        .unwrap();
        for deg in 0..=6 {
            assert_eq!(q.space().dim(deg), slice.space().dim(deg));
        }
        let id = GradedMatrixFamily::identity(slice.space());
        assert!(proj.family.same_as(&id));
    }

    #[test]
    fn s3_quotient_by_kernel_square_is_identity_projection() {
        let (ts_slice, map) = mu_map(&s3(), 9);
        let ker = kernel_ideal(&map, 10);
        let sq = ideal_power(ts_slice.as_ref(), &ker, 2, 10);
        let (q, proj) = quotient_by_ideal(Arc::clone(&ts_slice) as Arc<dyn DgAlgebra>, &sq).unwrap();
        for deg in 0..=9 {
            assert_eq!(q.space().dim(deg), ts_slice.space().dim(deg));
        }
        let id = GradedMatrixFamily::identity(ts_slice.space());
        assert!(proj.family.same_as(&id));
    }

    #[test]
    fn word_length_quotient_of_s2_kills_x_squared() {
        let slice = SullivanSlice::new(s2(), 6);
        let (q, proj) = word_length_quotient(&slice, 1).unwrap();
        // Word length ≤ 1 monomials: 1, x, y. d̄y = 0 since x² has length 2.
        assert_eq!(q.space().dim(0), 1);
        assert_eq!(q.space().dim(2), 1);
        assert_eq!(q.space().dim(3), 1);
        assert_eq!(q.space().dim(4), 0);
        assert!(q.diff().block(3).is_none());
        proj.check_chain_map(6).unwrap();
    }

    #[test]
    fn word_length_zero_quotient_is_ground_field() {
        let slice = SullivanSlice::new(s2(), 6);
        let (q, _) = word_length_quotient(&slice, 0).unwrap();
        assert_eq!(q.space().dim(0), 1);
        for deg in 1..=6 {
            assert_eq!(q.space().dim(deg), 0);
        }
    }

    #[test]
    fn word_length_quotient_with_large_n_is_identity() {
        let slice = SullivanSlice::new(s2(), 6);
        // No monomial below degree 7 has word length > 4.
        let (q, proj) = word_length_quotient(&slice, 4).unwrap();
        for deg in 0..=7 {
            assert_eq!(q.space().dim(deg), slice.space().dim(deg));
        }
        let id = GradedMatrixFamily::identity(slice.space());
        assert!(proj.family.same_as(&id));
    }

    #[test]
    fn quotient_multiplication_projects_products() {
        // In ΛV/Λ^{>1}V for the S² model, [x]·[x] = 0.
        let slice = SullivanSlice::new(s2(), 6);
        let (q, _) = word_length_quotient(&slice, 1).unwrap();
        let prod = q.mul_basis(2, 0, 2, 0);
        assert!(prod.iter().all(|c| c.is_zero()));
    }
}
