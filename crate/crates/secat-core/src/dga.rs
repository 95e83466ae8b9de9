//! Materialized cochain algebras: degreewise bases, differential blocks and
//! basis products, valid up to a degree cap.
//!
//! Every consumer of an algebra (cohomology, duality, modules) works through
//! the [`DgAlgebra`] trait. A slice built with cap `C` materializes bases for
//! degrees `0..=C+1` and differential blocks for `0..=C`, so cohomology and
//! every chain-level identity can be verified exactly on `0..=C`.

use crate::error::Error;
use crate::graded::{GradedMatrixFamily, GradedVectorSpace};
use crate::linalg::{rank_kernel_image, Matrix};
use crate::model::{CdgaMorphism, SullivanModel};
use crate::poly::{Monomial, PolyElement};
use crate::rational::{zeros, Scalar};
use num::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub trait DgAlgebra: Send + Sync {
    /// Degree up to which all data is certified.
    fn cap(&self) -> i64;

    /// Bases for degrees `0..=cap+1` (or the full finite support).
    fn space(&self) -> &GradedVectorSpace;

    /// Differential blocks of degree +1.
    fn diff(&self) -> &GradedMatrixFamily;

    /// Product of basis elements: the vector of `e_i · e_j` in degree `p+q`.
    /// Only meaningful when `p + q` is within the materialized range.
    fn mul_basis(&self, p: i64, i: usize, q: i64, j: usize) -> Vec<Scalar>;

    fn label(&self, degree: i64, idx: usize) -> String {
        self.space().label(degree, idx)
    }

    /// Highest materialized degree.
    fn top(&self) -> i64 {
        self.space().max_degree().unwrap_or(0)
    }
}

/// Bilinear extension of basis products.
pub fn mul_elements(
    alg: &dyn DgAlgebra,
    a: (i64, &[Scalar]),
    b: (i64, &[Scalar]),
) -> Vec<Scalar> {
    let (p, av) = a;
    let (q, bv) = b;
    let out_dim = alg.space().dim(p + q);
    let mut out = zeros(out_dim);
    for (i, ca) in av.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in bv.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let prod = alg.mul_basis(p, i, q, j);
            let c = ca * cb;
            crate::rational::axpy(&mut out, &c, &prod);
        }
    }
    out
}

/// Matrix of left multiplication by a homogeneous element, from degree
/// `src_deg` to `src_deg + |a|`.
pub fn mult_matrix(alg: &dyn DgAlgebra, a: (i64, &[Scalar]), src_deg: i64) -> Matrix {
    let (p, av) = a;
    let src_dim = alg.space().dim(src_deg);
    let tgt_dim = alg.space().dim(src_deg + p);
    let mut cols = Vec::with_capacity(src_dim);
    for j in 0..src_dim {
        let mut col = zeros(tgt_dim);
        for (i, ca) in av.iter().enumerate() {
            if !ca.is_zero() {
                let prod = alg.mul_basis(p, i, src_deg, j);
                crate::rational::axpy(&mut col, ca, &prod);
            }
        }
        cols.push(col);
    }
    Matrix::from_columns(tgt_dim, &cols)
}

/// A Sullivan model materialized up to a cap: monomial bases per degree and
/// the induced differential blocks.
pub struct SullivanSlice {
    model: Arc<SullivanModel>,
    cap: i64,
    space: GradedVectorSpace,
    basis: BTreeMap<i64, Vec<Monomial>>,
    index: HashMap<Monomial, (i64, usize)>,
    diff: GradedMatrixFamily,
}

impl SullivanSlice {
    pub fn new(model: Arc<SullivanModel>, cap: i64) -> Arc<Self> {
        assert!(cap >= 0);
        let top = cap + 1;
        let mut space = GradedVectorSpace::new();
        let mut basis = BTreeMap::new();
        let mut index = HashMap::new();
        for deg in 0..=top {
            let monos = model.basis_in_degree(deg);
            if monos.is_empty() {
                continue;
            }
            for (i, m) in monos.iter().enumerate() {
                index.insert(m.clone(), (deg, i));
            }
            space.insert(deg, monos.iter().map(|m| m.label(model.generators())).collect());
            basis.insert(deg, monos);
        }
        let mut slice = SullivanSlice {
            model,
            cap,
            space,
            basis,
            index,
            diff: GradedMatrixFamily::new(1),
        };
        let mut diff = GradedMatrixFamily::new(1);
        for deg in 0..=cap {
            let monos = match slice.basis.get(&deg) {
                Some(m) => m.clone(),
                None => continue,
            };
            let tgt_dim = slice.space.dim(deg + 1);
            let cols: Vec<Vec<Scalar>> = monos
                .iter()
                .map(|m| {
                    let dm = slice
                        .model
                        .d(&PolyElement::from_term(m.clone(), Scalar::from_integer(1.into())));
                    slice.poly_to_vec(deg + 1, &dm)
                })
                .collect();
            diff.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
        }
        slice.diff = diff;
        Arc::new(slice)
    }

    pub fn model(&self) -> &Arc<SullivanModel> {
        &self.model
    }

    pub fn monomials(&self, degree: i64) -> &[Monomial] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<(i64, usize)> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial in the degree-`deg` basis.
    /// Panics if a term falls outside the materialized range or degree.
    pub fn poly_to_vec(&self, deg: i64, p: &PolyElement) -> Vec<Scalar> {
        let mut v = zeros(self.space.dim(deg));
        for (m, c) in p.terms() {
            let (d, i) = *self
                .index
                .get(m)
                .unwrap_or_else(|| panic!("monomial of degree outside slice: {:?}", m));
            assert_eq!(d, deg, "inhomogeneous vectorization");
            v[i] = c.clone();
        }
        v
    }

    pub fn vec_to_poly(&self, deg: i64, v: &[Scalar]) -> PolyElement {
        let mut p = PolyElement::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.monomials(deg)[i].clone(), c.clone());
            }
        }
        p
    }

    /// Basis vector of a generator as a graded element.
    pub fn generator_element(&self, gen_index: usize) -> (i64, Vec<Scalar>) {
        let deg = self.model.generators()[gen_index].degree;
        let mono = Monomial::generator(self.model.num_generators(), gen_index);
        let (d, i) = self.index[&mono];
        debug_assert_eq!(d, deg);
        let mut v = zeros(self.space.dim(deg));
        v[i] = Scalar::from_integer(1.into());
        (deg, v)
    }

    /// All generator elements, for module-morphism checks.
    pub fn generator_elements(&self) -> Vec<(i64, Vec<Scalar>)> {
        (0..self.model.num_generators())
            .map(|i| self.generator_element(i))
            .collect()
    }
}

impl DgAlgebra for SullivanSlice {
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
        let a = &self.monomials(p)[i];
        let b = &self.monomials(q)[j];
        let mut v = zeros(self.space.dim(p + q));
        if let Some((negative, m)) = a.mul(b, self.model.generators()) {
            if let Some(&(d, k)) = self.index.get(&m) {
                debug_assert_eq!(d, p + q);
                v[k] = if negative {
                    -Scalar::from_integer(1.into())
                } else {
                    Scalar::from_integer(1.into())
                };
            }
        }
        v
    }
}

/// A finite cochain algebra given by explicit tables; used for cohomology
/// algebras and hand-built examples.
pub struct ExplicitAlgebra {
    cap: i64,
    space: GradedVectorSpace,
    diff: GradedMatrixFamily,
    products: HashMap<(i64, usize, i64, usize), Vec<Scalar>>,
}

impl ExplicitAlgebra {
    pub fn new(
        cap: i64,
        space: GradedVectorSpace,
        diff: GradedMatrixFamily,
        products: HashMap<(i64, usize, i64, usize), Vec<Scalar>>,
    ) -> Arc<Self> {
        Arc::new(ExplicitAlgebra {
            cap,
            space,
            diff,
            products,
        })
    }
}

impl DgAlgebra for ExplicitAlgebra {
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
        self.products
            .get(&(p, i, q, j))
            .cloned()
            .unwrap_or_else(|| zeros(self.space.dim(p + q)))
    }
}

/// Degreewise matrix realization of a morphism between materialized models.
pub fn morphism_family(
    m: &CdgaMorphism,
    src: &SullivanSlice,
    tgt: &SullivanSlice,
) -> GradedMatrixFamily {
    let mut fam = GradedMatrixFamily::new(0);
    for deg in src.space().support() {
        let tgt_dim = tgt.space().dim(deg);
        let cols: Vec<Vec<Scalar>> = src
            .monomials(deg)
            .iter()
            .map(|mono| {
                let img = m.apply(&PolyElement::from_term(
                    mono.clone(),
                    Scalar::from_integer(1.into()),
                ));
                tgt.poly_to_vec(deg, &img)
            })
            .collect();
        fam.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
    }
    fam
}

/// A degreewise chain map between materialized algebras.
pub struct AlgebraMap {
    pub source: Arc<dyn DgAlgebra>,
    pub target: Arc<dyn DgAlgebra>,
    pub family: GradedMatrixFamily,
}

impl AlgebraMap {
    /// Verify `f ∘ d = d ∘ f` on source degrees `0..=hi`.
    pub fn check_chain_map(&self, hi: i64) -> Result<(), Error> {
        for deg in 0..=hi {
            let lhs = match (self.family.block(deg + 1), self.source.diff().block(deg)) {
                (Some(f), Some(d)) => Some(f.matmul(d)),
                _ => None,
            };
            let rhs = match (self.target.diff().block(deg), self.family.block(deg)) {
                (Some(d), Some(f)) => Some(d.matmul(f)),
                _ => None,
            };
            let equal = match (&lhs, &rhs) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) => a.is_zero(),
                (None, Some(b)) => b.is_zero(),
                (None, None) => true,
            };
            if !equal {
                return Err(Error::NotChainMap {
                    degree: deg,
                    witness: format!("degree {deg} block"),
                });
            }
        }
        Ok(())
    }

    /// First degree ≤ `hi` where the map fails to be surjective.
    pub fn surjective_up_to(&self, hi: i64) -> Option<i64> {
        for deg in 0..=hi {
            let tgt_dim = self.target.space().dim(deg);
            if tgt_dim == 0 {
                continue;
            }
            let rank = match self.family.block(deg) {
                Some(b) => crate::linalg::rank(b),
                None => 0,
            };
            if rank < tgt_dim {
                return Some(deg);
            }
        }
        None
    }

    /// Kernel bases per degree for `0..=hi`.
    pub fn kernel_bases(&self, hi: i64) -> BTreeMap<i64, Matrix> {
        let mut out = BTreeMap::new();
        for deg in 0..=hi {
            let src_dim = self.source.space().dim(deg);
            if src_dim == 0 {
                continue;
            }
            let basis = match self.family.block(deg) {
                Some(b) => {
                    let data = rank_kernel_image(b);
                    Matrix::from_columns(src_dim, &data.kernel)
                }
                None => Matrix::identity(src_dim),
            };
            if basis.ncols() > 0 {
                out.insert(deg, basis);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{tensor_square, SullivanModel};
    use crate::poly::Generator;
    use crate::rational::rat;

    fn s2() -> Arc<SullivanModel> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
        SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap()
    }

    #[test]
    fn slice_dimensions_for_s2() {
        let slice = SullivanSlice::new(s2(), 6);
        // degrees 0..7: 1, 0, x, y, x², xy, x³, x²y
        let dims: Vec<usize> = (0..=7).map(|d| slice.space().dim(d)).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn differential_squares_to_zero_blockwise() {
        let slice = SullivanSlice::new(s2(), 8);
        let dd = slice.diff().compose(slice.diff());
        for deg in 0..=7 {
            if let Some(b) = dd.block(deg) {
                assert!(b.is_zero(), "d² ≠ 0 in degree {deg}");
            }
        }
    }

    #[test]
    fn graded_commutativity_on_slice() {
        let ts = tensor_square(&s2());
        let slice = SullivanSlice::new(Arc::clone(&ts.model), 8);
        for p in 0..=4i64 {
            for q in 0..=(4 - p) {
                for i in 0..slice.space().dim(p) {
                    for j in 0..slice.space().dim(q) {
                        let ab = slice.mul_basis(p, i, q, j);
                        let mut ba = slice.mul_basis(q, j, p, i);
                        if (p * q) % 2 == 1 {
                            for v in &mut ba {
                                *v = -v.clone();
                            }
                        }
                        assert_eq!(ab, ba, "graded commutativity fails at ({p},{i})·({q},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn mu_family_is_chain_map_and_surjective() {
        let ts = tensor_square(&s2());
        let ts_slice = SullivanSlice::new(Arc::clone(&ts.model), 8);
        let base_slice = SullivanSlice::new(Arc::clone(&ts.base), 8);
        let fam = morphism_family(&ts.mu, &ts_slice, &base_slice);
        let map = AlgebraMap {
            source: ts_slice,
            target: base_slice,
            family: fam,
        };
        map.check_chain_map(8).unwrap();
        assert_eq!(map.surjective_up_to(8), None);
    }
}
