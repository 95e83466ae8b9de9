//! Differential graded modules over a materialized algebra.
//!
//! The module layer carries the sign conventions of the duality pipeline:
//!
//! * on the dual `Hom(A, ℚ)`: `δf = −(−1)^{|f|} f∘d` and
//!   `(a·f)(x) = (−1)^{|a||f|} f(a·x)`;
//! * on the suspension `s^{−n}M`: `(s^{−n}M)^i = M^{i−n}`,
//!   `d(s^{−n}x) = (−1)^n s^{−n}(dx)` and
//!   `a·s^{−n}x = (−1)^{n|a|} s^{−n}(a·x)`.
//!
//! Morphisms of modules are plain matrix families; chain-map and
//! module-morphism identities are checked mechanically on basis elements.

use crate::dga::{mul_elements, DgAlgebra};
use crate::graded::{GradedMatrixFamily, GradedVectorSpace};
use crate::linalg::Matrix;
use crate::rational::{axpy, zeros, Scalar};
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

pub trait DgModule: Send + Sync {
    fn algebra(&self) -> &Arc<dyn DgAlgebra>;
    fn space(&self) -> &GradedVectorSpace;
    fn diff(&self) -> &GradedMatrixFamily;

    /// Action of the algebra basis element `(adeg, ai)` on the module basis
    /// element `(mdeg, mi)`, as a vector in module degree `adeg + mdeg`.
    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar>;
}

/// Bilinear extension of the module action.
pub fn act_element(
    m: &dyn DgModule,
    a: (i64, &[Scalar]),
    x: (i64, &[Scalar]),
) -> Vec<Scalar> {
    let (adeg, av) = a;
    let (mdeg, mv) = x;
    let mut out = zeros(m.space().dim(adeg + mdeg));
    for (i, ca) in av.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cm) in mv.iter().enumerate() {
            if cm.is_zero() {
                continue;
            }
            let v = m.act_basis(adeg, i, mdeg, j);
            let c = ca * cm;
            axpy(&mut out, &c, &v);
        }
    }
    out
}

/// Matrix of the action of a fixed algebra element on one module degree.
pub fn action_matrix(m: &dyn DgModule, a: (i64, &[Scalar]), mdeg: i64) -> Matrix {
    let (adeg, av) = a;
    let src_dim = m.space().dim(mdeg);
    let tgt_dim = m.space().dim(mdeg + adeg);
    let mut cols = Vec::with_capacity(src_dim);
    for j in 0..src_dim {
        let mut col = zeros(tgt_dim);
        for (i, ca) in av.iter().enumerate() {
            if !ca.is_zero() {
                let v = m.act_basis(adeg, i, mdeg, j);
                axpy(&mut col, ca, &v);
            }
        }
        cols.push(col);
    }
    Matrix::from_columns(tgt_dim, &cols)
}

/// The algebra as a module over itself.
pub struct FreeSelfModule {
    algebra: Arc<dyn DgAlgebra>,
}

impl FreeSelfModule {
    pub fn new(algebra: Arc<dyn DgAlgebra>) -> Arc<Self> {
        Arc::new(FreeSelfModule { algebra })
    }
}

impl DgModule for FreeSelfModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        &self.algebra
    }

    fn space(&self) -> &GradedVectorSpace {
        self.algebra.space()
    }

    fn diff(&self) -> &GradedMatrixFamily {
        self.algebra.diff()
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        self.algebra.mul_basis(adeg, ai, mdeg, mi)
    }
}

/// A target algebra `B` viewed as a module over `R` through a chain algebra
/// map `q: R → B` (the action is `r·b = q(r)·b`).
pub struct MappedModule {
    algebra: Arc<dyn DgAlgebra>,
    target: Arc<dyn DgAlgebra>,
    map: GradedMatrixFamily,
}

impl MappedModule {
    pub fn new(
        algebra: Arc<dyn DgAlgebra>,
        target: Arc<dyn DgAlgebra>,
        map: GradedMatrixFamily,
    ) -> Arc<Self> {
        Arc::new(MappedModule {
            algebra,
            target,
            map,
        })
    }
}

impl DgModule for MappedModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        &self.algebra
    }

    fn space(&self) -> &GradedVectorSpace {
        self.target.space()
    }

    fn diff(&self) -> &GradedMatrixFamily {
        self.target.diff()
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        let tgt_dim_a = self.target.space().dim(adeg);
        let qa = match self.map.block(adeg) {
            Some(b) => b.column(ai),
            None => zeros(tgt_dim_a),
        };
        let mut basis_vec = zeros(self.target.space().dim(mdeg));
        basis_vec[mi] = Scalar::from_integer(1.into());
        mul_elements(self.target.as_ref(), (adeg, &qa), (mdeg, &basis_vec))
    }
}

/// A module over one algebra restricted along a chain algebra map
/// `i: A → R`: the action is `a·m = i(a)·m`.
pub struct RestrictedModule {
    outer: Arc<dyn DgAlgebra>,
    inner: Arc<dyn DgModule>,
    along: GradedMatrixFamily,
}

impl RestrictedModule {
    pub fn new(
        outer: Arc<dyn DgAlgebra>,
        inner: Arc<dyn DgModule>,
        along: GradedMatrixFamily,
    ) -> Arc<Self> {
        Arc::new(RestrictedModule {
            outer,
            inner,
            along,
        })
    }
}

impl DgModule for RestrictedModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        &self.outer
    }

    fn space(&self) -> &GradedVectorSpace {
        self.inner.space()
    }

    fn diff(&self) -> &GradedMatrixFamily {
        self.inner.diff()
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        let inner_alg_dim = self.inner.algebra().space().dim(adeg);
        let ia = match self.along.block(adeg) {
            Some(b) => b.column(ai),
            None => zeros(inner_alg_dim),
        };
        let mut basis_vec = zeros(self.inner.space().dim(mdeg));
        basis_vec[mi] = Scalar::from_integer(1.into());
        act_element(self.inner.as_ref(), (adeg, &ia), (mdeg, &basis_vec))
    }
}

/// The linear dual `Hom(A, ℚ)` with the differential and action above. If the
/// algebra is materialized on `0..=top`, the dual lives on `−top..=0` with
/// the dual bases degreewise.
pub struct DualModule {
    algebra: Arc<dyn DgAlgebra>,
    space: GradedVectorSpace,
    diff: GradedMatrixFamily,
}

impl DualModule {
    pub fn new(algebra: Arc<dyn DgAlgebra>) -> Arc<Self> {
        let mut space = GradedVectorSpace::new();
        for deg in algebra.space().support().collect::<Vec<_>>() {
            let labels = (0..algebra.space().dim(deg))
                .map(|i| format!("{}^*", algebra.label(deg, i)))
                .collect();
            space.insert(-deg, labels);
        }
        // δ on Hom^i is −(−1)^i · (d_{−i−1})ᵀ.
        let mut diff = GradedMatrixFamily::new(1);
        for deg in algebra.diff().degrees().collect::<Vec<_>>() {
            let i = -(deg + 1);
            let d = algebra.diff().block(deg).expect("listed block");
            let sign = if i.rem_euclid(2) == 0 { -1 } else { 1 };
            let block = d.transpose().scale(&Scalar::from_integer(sign.into()));
            diff.set_block(i, block);
        }
        Arc::new(DualModule {
            algebra,
            space,
            diff,
        })
    }
}

impl DgModule for DualModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        &self.algebra
    }

    fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    fn diff(&self) -> &GradedMatrixFamily {
        &self.diff
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        // (a·f)(x) = (−1)^{|a||f|} f(a·x) for f in Hom^mdeg dual to the basis
        // of A^{−mdeg}; the result pairs against A^{−mdeg−adeg}.
        let src_deg = -(mdeg + adeg);
        let out_dim = self.space.dim(mdeg + adeg);
        let mut out = zeros(out_dim);
        if out_dim == 0 {
            return out;
        }
        let sign_negative = (adeg * mdeg).rem_euclid(2) == 1;
        for (k, slot) in out.iter_mut().enumerate() {
            let prod = self.algebra.mul_basis(adeg, ai, src_deg, k);
            let c = prod[mi].clone();
            if !c.is_zero() {
                *slot = if sign_negative { -c } else { c };
            }
        }
        out
    }
}

/// The suspension `s^{−n}M`, living in degrees `i = (degree of M) + n`.
pub struct SuspendedModule {
    inner: Arc<dyn DgModule>,
    n: i64,
    space: GradedVectorSpace,
    diff: GradedMatrixFamily,
}

impl SuspendedModule {
    pub fn new(inner: Arc<dyn DgModule>, n: i64) -> Arc<Self> {
        let mut space = GradedVectorSpace::new();
        for deg in inner.space().support().collect::<Vec<_>>() {
            space.insert(deg + n, inner.space().labels(deg).to_vec());
        }
        let mut diff = GradedMatrixFamily::new(1);
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        for deg in inner.diff().degrees().collect::<Vec<_>>() {
            let block = inner
                .diff()
                .block(deg)
                .expect("listed block")
                .scale(&Scalar::from_integer(sign.into()));
            diff.set_block(deg + n, block);
        }
        Arc::new(SuspendedModule {
            inner,
            n,
            space,
            diff,
        })
    }

    pub fn shift(&self) -> i64 {
        self.n
    }
}

impl DgModule for SuspendedModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        self.inner.algebra()
    }

    fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    fn diff(&self) -> &GradedMatrixFamily {
        &self.diff
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        let mut v = self.inner.act_basis(adeg, ai, mdeg - self.n, mi);
        if (self.n * adeg).rem_euclid(2) == 1 {
            for c in &mut v {
                *c = -c.clone();
            }
        }
        v
    }
}

/// One adjoined generator of a semifree module.
///
/// `dy` is stored structurally as `(sector, algebra degree, algebra index,
/// coefficient)` components so it stays valid when further generators are
/// appended later (sector and algebra indices never move).
#[derive(Clone)]
pub struct SfGenerator {
    pub name: String,
    pub degree: i64,
    /// Components of `d(y)` in the module built from earlier generators.
    pub dy: Vec<(Sector, i64, usize, Scalar)>,
}

/// Sector of a semifree basis element: the free `R`-summand or one `R·y`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sector {
    Base,
    Gen(usize),
}

/// A semifree extension `P = R ⊕ ⊕_y R·y` with an exhaustive filtration by
/// generator adjunction order: `d(y)` lands in `R` plus earlier sectors.
pub struct SemifreeModule {
    algebra: Arc<dyn DgAlgebra>,
    gens: Vec<SfGenerator>,
    space: GradedVectorSpace,
    diff: GradedMatrixFamily,
    /// Per degree: (sector, algebra degree, algebra index) per basis element.
    layout: BTreeMap<i64, Vec<(Sector, i64, usize)>>,
}

impl SemifreeModule {
    /// Build the module. Generator `k`'s `dy` components may only reference
    /// the base sector and generators `0..k`, at degree `gens[k].degree + 1`.
    pub fn new(algebra: Arc<dyn DgAlgebra>, gens: Vec<SfGenerator>) -> Arc<Self> {
        let top = algebra.top();
        let lo = gens.iter().map(|g| g.degree).min().unwrap_or(0).min(0);

        let mut layout: BTreeMap<i64, Vec<(Sector, i64, usize)>> = BTreeMap::new();
        let mut space = GradedVectorSpace::new();
        for deg in lo..=top {
            let mut elems = Vec::new();
            let mut labels = Vec::new();
            for i in 0..algebra.space().dim(deg) {
                elems.push((Sector::Base, deg, i));
                labels.push(algebra.label(deg, i));
            }
            for (g, gen) in gens.iter().enumerate() {
                let rdeg = deg - gen.degree;
                for i in 0..algebra.space().dim(rdeg) {
                    elems.push((Sector::Gen(g), rdeg, i));
                    labels.push(format!("{}·{}", algebra.label(rdeg, i), gen.name));
                }
            }
            if !elems.is_empty() {
                layout.insert(deg, elems);
                space.insert(deg, labels);
            }
        }

        let mut module = SemifreeModule {
            algebra,
            gens,
            space,
            diff: GradedMatrixFamily::new(1),
            layout,
        };

        let mut diff = GradedMatrixFamily::new(1);
        let degrees: Vec<i64> = module.layout.keys().copied().collect();
        for &deg in &degrees {
            if deg + 1 > top {
                continue;
            }
            let src = module.layout[&deg].clone();
            let tgt_dim = module.dim(deg + 1);
            if tgt_dim == 0 {
                continue;
            }
            let mut cols = Vec::with_capacity(src.len());
            for &(sector, rdeg, ri) in &src {
                let mut col = zeros(tgt_dim);
                match sector {
                    Sector::Base => {
                        if let Some(d) = module.algebra.diff().block(rdeg) {
                            let dv = d.column(ri);
                            module.scatter(deg + 1, Sector::Base, rdeg + 1, &dv, &Scalar::from_integer(1.into()), &mut col);
                        }
                    }
                    Sector::Gen(g) => {
                        // d(r·y) = dr·y + (−1)^{|r|} r·dy
                        if let Some(d) = module.algebra.diff().block(rdeg) {
                            let dv = d.column(ri);
                            module.scatter(deg + 1, Sector::Gen(g), rdeg + 1, &dv, &Scalar::from_integer(1.into()), &mut col);
                        }
                        let gen = &module.gens[g];
                        let sign = if rdeg.rem_euclid(2) == 0 {
                            Scalar::from_integer(1.into())
                        } else {
                            Scalar::from_integer((-1).into())
                        };
                        for (dsector, ddeg, di, coeff) in &gen.dy {
                            if coeff.is_zero() {
                                continue;
                            }
                            let prod = module.algebra.mul_basis(rdeg, ri, *ddeg, *di);
                            let c = &sign * coeff;
                            module.scatter(deg + 1, *dsector, rdeg + ddeg, &prod, &c, &mut col);
                        }
                    }
                }
                cols.push(col);
            }
            diff.set_block(deg, Matrix::from_columns(tgt_dim, &cols));
        }
        module.diff = diff;
        Arc::new(module)
    }

    pub fn generators(&self) -> &[SfGenerator] {
        &self.gens
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.layout.get(&degree).map_or(0, Vec::len)
    }

    pub fn layout_at(&self, degree: i64) -> &[(Sector, i64, usize)] {
        self.layout.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// Flat index of `(sector, rdeg, ri)` within degree `deg`.
    pub fn flat_index(&self, deg: i64, sector: Sector, rdeg: i64, ri: usize) -> usize {
        let mut idx = 0;
        match sector {
            Sector::Base => {
                debug_assert_eq!(rdeg, deg);
                idx += ri;
            }
            Sector::Gen(g) => {
                idx += self.algebra.space().dim(deg);
                for k in 0..g {
                    idx += self.algebra.space().dim(deg - self.gens[k].degree);
                }
                idx += ri;
            }
        }
        idx
    }

    /// Accumulate `c·vec` (an algebra-degree vector in one sector) into a
    /// flat module vector at `deg`.
    fn scatter(
        &self,
        deg: i64,
        sector: Sector,
        rdeg: i64,
        vec: &[Scalar],
        c: &Scalar,
        out: &mut [Scalar],
    ) {
        if c.is_zero() {
            return;
        }
        for (ri, v) in vec.iter().enumerate() {
            if !v.is_zero() {
                let pos = self.flat_index(deg, sector, rdeg, ri);
                out[pos] += c * v;
            }
        }
    }

    /// Structured components of a flat vector at `deg` in the current layout.
    pub fn flat_to_structured(&self, deg: i64, v: &[Scalar]) -> Vec<(Sector, i64, usize, Scalar)> {
        let layout = self.layout_at(deg);
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(pos, c)| {
                let (sector, rdeg, ri) = layout[pos];
                (sector, rdeg, ri, c.clone())
            })
            .collect()
    }

    /// The inclusion of the base sector, `j: R → P`.
    pub fn base_inclusion(&self) -> GradedMatrixFamily {
        let mut fam = GradedMatrixFamily::new(0);
        for deg in self.algebra.space().support().collect::<Vec<_>>() {
            let rdim = self.algebra.space().dim(deg);
            let pdim = self.dim(deg);
            let mut m = Matrix::zero(pdim, rdim);
            for i in 0..rdim {
                m.set(i, i, Scalar::from_integer(1.into()));
            }
            fam.set_block(deg, m);
        }
        fam
    }
}

impl DgModule for SemifreeModule {
    fn algebra(&self) -> &Arc<dyn DgAlgebra> {
        &self.algebra
    }

    fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    fn diff(&self) -> &GradedMatrixFamily {
        &self.diff
    }

    fn act_basis(&self, adeg: i64, ai: usize, mdeg: i64, mi: usize) -> Vec<Scalar> {
        let (sector, rdeg, ri) = self.layout[&mdeg][mi];
        let mut out = zeros(self.dim(mdeg + adeg));
        let prod = self.algebra.mul_basis(adeg, ai, rdeg, ri);
        self.scatter(
            mdeg + adeg,
            sector,
            adeg + rdeg,
            &prod,
            &Scalar::from_integer(1.into()),
            &mut out,
        );
        out
    }
}

/// Failure detail of a module-map check.
#[derive(Debug)]
pub struct MapCheckFailure {
    pub degree: i64,
    pub detail: String,
}

/// Verify `f ∘ d = d ∘ f` on source degrees `lo..=hi` (degree-0 map).
pub fn check_chain_map(
    src: &dyn DgModule,
    tgt: &dyn DgModule,
    f: &GradedMatrixFamily,
    lo: i64,
    hi: i64,
) -> Result<(), MapCheckFailure> {
    for deg in lo..=hi {
        let lhs = match (f.block(deg + 1), src.diff().block(deg)) {
            (Some(fb), Some(db)) => Some(fb.matmul(db)),
            _ => None,
        };
        let rhs = match (tgt.diff().block(deg), f.block(deg)) {
            (Some(db), Some(fb)) => Some(db.matmul(fb)),
            _ => None,
        };
        let ok = match (&lhs, &rhs) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => a.is_zero(),
            (None, Some(b)) => b.is_zero(),
            (None, None) => true,
        };
        if !ok {
            return Err(MapCheckFailure {
                degree: deg,
                detail: format!("f∘d ≠ d∘f at source degree {deg}"),
            });
        }
    }
    Ok(())
}

/// Verify `f(a·m) = a·f(m)` for each given algebra element `a` and every
/// module basis element in degrees `lo..=hi` (both sides must stay within
/// the materialized window to be compared).
pub fn check_module_map(
    src: &dyn DgModule,
    tgt: &dyn DgModule,
    f: &GradedMatrixFamily,
    algebra_elements: &[(i64, Vec<Scalar>)],
    lo: i64,
    hi: i64,
) -> Result<(), MapCheckFailure> {
    for (adeg, avec) in algebra_elements {
        for mdeg in lo..=hi {
            if src.space().dim(mdeg) == 0 || mdeg + adeg > hi {
                continue;
            }
            let act_src = action_matrix(src, (*adeg, avec), mdeg);
            let act_tgt = action_matrix(tgt, (*adeg, avec), mdeg);
            let f_here = f.block(mdeg);
            let f_shifted = f.block(mdeg + adeg);
            let lhs = match f_shifted {
                Some(fb) => fb.matmul(&act_src),
                None => Matrix::zero(tgt.space().dim(mdeg + adeg), src.space().dim(mdeg)),
            };
            let rhs = match f_here {
                Some(fb) => act_tgt.matmul(fb),
                None => Matrix::zero(tgt.space().dim(mdeg + adeg), src.space().dim(mdeg)),
            };
            if lhs != rhs {
                return Err(MapCheckFailure {
                    degree: mdeg,
                    detail: format!(
                        "f(a·m) ≠ a·f(m) for |a| = {adeg} at module degree {mdeg}"
                    ),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::SullivanSlice;
    use crate::model::SullivanModel;
    use crate::poly::{Generator, Monomial, PolyElement};
    use crate::rational::rat;

    fn s2_slice(cap: i64) -> Arc<SullivanSlice> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
        let model = SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap();
        SullivanSlice::new(model, cap)
    }

    #[test]
    fn dual_differential_squares_to_zero() {
        let slice = s2_slice(8);
        let dual = DualModule::new(slice as Arc<dyn DgAlgebra>);
        let dd = dual.diff().compose(dual.diff());
        for deg in -9..=0 {
            if let Some(b) = dd.block(deg) {
                assert!(b.is_zero(), "δ² ≠ 0 in dual degree {deg}");
            }
        }
    }

    #[test]
    fn dual_action_satisfies_leibniz() {
        // δ(a·f) = da·f + (−1)^{|a|} a·δf, checked on generators of the S²
        // slice against all dual basis elements.
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let dual = DualModule::new(Arc::clone(&alg));
        let gens = slice.generator_elements();
        for (adeg, avec) in &gens {
            for mdeg in -7..=0i64 {
                let dim = dual.space().dim(mdeg);
                if dim == 0 || dual.space().dim(mdeg + adeg) == 0 && dual.space().dim(mdeg + adeg + 1) == 0 {
                    continue;
                }
                for mi in 0..dim {
                    let mut f = zeros(dim);
                    f[mi] = rat(1);
                    // lhs: δ(a·f)
                    let af = act_element(dual.as_ref(), (*adeg, avec), (mdeg, &f));
                    let lhs = dual
                        .diff()
                        .apply(mdeg + adeg, &af, dual.space().dim(mdeg + adeg + 1));
                    // rhs: da·f + (−1)^{|a|} a·δf
                    let da = slice.diff().apply(*adeg, avec, slice.space().dim(adeg + 1));
                    let mut rhs = act_element(dual.as_ref(), (adeg + 1, &da), (mdeg, &f));
                    let df = dual.diff().apply(mdeg, &f, dual.space().dim(mdeg + 1));
                    let adf = act_element(dual.as_ref(), (*adeg, avec), (mdeg + 1, &df));
                    let sign = if adeg.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                    axpy(&mut rhs, &sign, &adf);
                    assert_eq!(lhs, rhs, "Leibniz fails for |a|={adeg} at dual degree {mdeg}");
                }
            }
        }
    }

    #[test]
    fn suspension_by_zero_is_identity() {
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let free = FreeSelfModule::new(Arc::clone(&alg));
        let susp = SuspendedModule::new(Arc::clone(&free) as Arc<dyn DgModule>, 0);
        for deg in 0..=7 {
            assert_eq!(susp.space().dim(deg), free.space().dim(deg));
        }
        assert!(susp.diff().same_as(free.diff()));
    }

    #[test]
    fn double_suspension_round_trips() {
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let free = FreeSelfModule::new(Arc::clone(&alg)) as Arc<dyn DgModule>;
        let up = SuspendedModule::new(Arc::clone(&free), 3) as Arc<dyn DgModule>;
        let back = SuspendedModule::new(up, -3);
        assert!(back.diff().same_as(free.diff()));
        for deg in 0..=7 {
            assert_eq!(back.space().dim(deg), free.space().dim(deg));
        }
        // Action signs also cancel.
        for deg in 0..=4i64 {
            for mdeg in 0..=3i64 {
                for ai in 0..slice.space().dim(deg) {
                    for mi in 0..slice.space().dim(mdeg) {
                        assert_eq!(
                            back.act_basis(deg, ai, mdeg, mi),
                            free.act_basis(deg, ai, mdeg, mi)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn suspended_dual_differential_squares_to_zero() {
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let dual = DualModule::new(alg) as Arc<dyn DgModule>;
        let susp = SuspendedModule::new(dual, 2);
        let dd = susp.diff().compose(susp.diff());
        for deg in -8..=3 {
            if let Some(b) = dd.block(deg) {
                assert!(b.is_zero());
            }
        }
    }

    #[test]
    fn semifree_with_no_generators_is_the_algebra() {
        let slice = s2_slice(6);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let p = SemifreeModule::new(Arc::clone(&alg), Vec::new());
        for deg in 0..=7 {
            assert_eq!(p.dim(deg), slice.space().dim(deg));
        }
        assert!(p.diff().same_as(slice.diff()));
    }

    #[test]
    fn semifree_differential_squares_to_zero() {
        // Adjoin w with dw = x² (a cocycle) to the S² slice.
        let slice = s2_slice(8);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let x2 = slice.monomial_index(&Monomial::from_exps(vec![2, 0])).unwrap();
        let gens = vec![SfGenerator {
            name: "w".into(),
            degree: 3,
            dy: vec![(Sector::Base, 4, x2.1, rat(1))],
        }];
        let p = SemifreeModule::new(alg, gens);
        let dd = p.diff().compose(p.diff());
        for deg in 0..=7 {
            if let Some(b) = dd.block(deg) {
                assert!(b.is_zero(), "d² ≠ 0 on semifree module in degree {deg}");
            }
        }
        // P in degree 3: y (from R) and 1·w.
        assert_eq!(p.dim(3), 2);
    }

    #[test]
    fn base_inclusion_is_a_chain_map() {
        let slice = s2_slice(8);
        let alg = Arc::clone(&slice) as Arc<dyn DgAlgebra>;
        let x2 = slice.monomial_index(&Monomial::from_exps(vec![2, 0])).unwrap();
        let p = SemifreeModule::new(
            Arc::clone(&alg),
            vec![SfGenerator {
                name: "w".into(),
                degree: 3,
                dy: vec![(Sector::Base, 4, x2.1, rat(1))],
            }],
        );
        let free = FreeSelfModule::new(alg);
        let j = p.base_inclusion();
        check_chain_map(free.as_ref(), p.as_ref(), &j, 0, 8).unwrap();
    }
}
