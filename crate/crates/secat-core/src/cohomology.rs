//! Degreewise cohomology of cochain complexes and induced maps.
//!
//! Representative cocycles are chosen deterministically: the kernel basis of
//! the elimination, filtered so the classes are independent modulo the
//! coboundaries (first-pivot preference). Induced maps are computed on those
//! bases and injectivity is decided degree by degree with explicit witnesses.

use crate::dga::{DgAlgebra, ExplicitAlgebra};
use crate::error::Error;
use crate::graded::{GradedMatrixFamily, GradedVectorSpace};
use crate::linalg::{rank_kernel_image, solve_linear, Matrix};
use crate::rational::{zeros, Scalar};
use num::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// A complex to take cohomology of: a graded space with a degree +1 family.
#[derive(Clone, Copy)]
pub struct ComplexRef<'a> {
    pub space: &'a GradedVectorSpace,
    pub diff: &'a GradedMatrixFamily,
}

impl<'a> ComplexRef<'a> {
    pub fn of_algebra(alg: &'a dyn DgAlgebra) -> Self {
        ComplexRef {
            space: alg.space(),
            diff: alg.diff(),
        }
    }
}

/// Cohomology bases on a degree window, with chain-level representatives.
pub struct CohomologyData {
    pub lo: i64,
    pub hi: i64,
    /// Columns: representative cocycles, in chain coordinates.
    reps: BTreeMap<i64, Matrix>,
    /// Columns: basis of the coboundary space `im d_{deg−1}`.
    coboundaries: BTreeMap<i64, Matrix>,
    dims: BTreeMap<i64, usize>,
}

impl CohomologyData {
    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    /// Betti numbers on `lo..=hi`.
    pub fn betti(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi).map(|d| (d, self.dim(d))).collect()
    }

    /// Representative cocycles (columns, chain coordinates).
    pub fn representatives(&self, degree: i64) -> Option<&Matrix> {
        self.reps.get(&degree)
    }

    pub fn coboundaries(&self, degree: i64) -> Option<&Matrix> {
        self.coboundaries.get(&degree)
    }

    /// Chain representative of a class given in cohomology coordinates.
    pub fn class_to_chain(&self, degree: i64, class: &[Scalar]) -> Vec<Scalar> {
        match self.reps.get(&degree) {
            Some(r) => r.apply(class),
            None => Vec::new(),
        }
    }

    /// Cohomology coordinates of a cocycle; `None` when the vector is not a
    /// cocycle representable in this window.
    pub fn chain_to_class(&self, degree: i64, chain: &[Scalar]) -> Option<Vec<Scalar>> {
        let h_dim = self.dim(degree);
        if chain.iter().all(|c| c.is_zero()) {
            return Some(zeros(h_dim));
        }
        let cob = self.coboundaries.get(&degree);
        let reps = self.reps.get(&degree);
        let chain_dim = chain.len();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let n_cob = cob.map_or(0, Matrix::ncols);
        if let Some(c) = cob {
            cols.extend(c.columns());
        }
        if let Some(r) = reps {
            cols.extend(r.columns());
        }
        if cols.is_empty() {
            return None;
        }
        let m = Matrix::from_columns(chain_dim, &cols);
        let sol = solve_linear(&m, chain).ok()??;
        Some(sol[n_cob..].to_vec())
    }

    /// Top degree with nonzero cohomology in the window.
    pub fn top_nonzero(&self) -> Option<i64> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&deg, _)| deg)
            .next_back()
    }

    /// True when the cohomology vanishes on `(from, hi]`.
    pub fn vanishes_above(&self, from: i64) -> bool {
        self.dims.iter().all(|(&deg, &d)| deg <= from || d == 0)
    }
}

/// Cohomology of a complex on `lo..=hi`. Requires differential blocks for
/// source degrees `lo..=hi` (blocks below `lo` are treated as zero, which is
/// correct when the complex vanishes below `lo`). Fails if `d² ≠ 0` on the
/// window.
pub fn cohomology(c: ComplexRef<'_>, lo: i64, hi: i64) -> Result<CohomologyData, Error> {
    for deg in lo..hi {
        if let (Some(d1), Some(d0)) = (c.diff.block(deg + 1), c.diff.block(deg)) {
            let dd = d1.matmul(d0);
            if !dd.is_zero() {
                return Err(Error::NotChainMap {
                    degree: deg,
                    witness: format!("d² ≠ 0 from degree {deg}"),
                });
            }
        }
    }

    let mut reps = BTreeMap::new();
    let mut coboundaries = BTreeMap::new();
    let mut dims = BTreeMap::new();

    for deg in lo..=hi {
        let dim = c.space.dim(deg);
        if dim == 0 {
            continue;
        }
        // Cocycles: kernel of d at this degree (absent block = zero map).
        let cocycles: Vec<Vec<Scalar>> = match c.diff.block(deg) {
            Some(d) => rank_kernel_image(d).kernel,
            None => Matrix::identity(dim).columns(),
        };
        // Coboundaries: image basis of the incoming differential.
        let cob_cols: Vec<Vec<Scalar>> = match c.diff.block(deg - 1) {
            Some(d) => rank_kernel_image(d).image,
            None => Vec::new(),
        };
        let cob = Matrix::from_columns(dim, &cob_cols);

        // Preferred representatives: cocycle basis vectors at pivot columns
        // of [coboundaries | cocycles].
        let combined_cols: Vec<Vec<Scalar>> = cob_cols
            .iter()
            .cloned()
            .chain(cocycles.iter().cloned())
            .collect();
        let chosen: Vec<Vec<Scalar>> = if combined_cols.is_empty() {
            Vec::new()
        } else {
            let combined = Matrix::from_columns(dim, &combined_cols);
            let data = rank_kernel_image(&combined);
            data.pivot_cols
                .iter()
                .filter(|&&p| p >= cob_cols.len())
                .map(|&p| cocycles[p - cob_cols.len()].clone())
                .collect()
        };
        dims.insert(deg, chosen.len());
        if !chosen.is_empty() {
            reps.insert(deg, Matrix::from_columns(dim, &chosen));
        }
        if cob.ncols() > 0 {
            coboundaries.insert(deg, cob);
        }
    }

    Ok(CohomologyData {
        lo,
        hi,
        reps,
        coboundaries,
        dims,
    })
}

/// Cohomology of a materialized algebra on its certified window `0..=cap`.
pub fn algebra_cohomology(alg: &dyn DgAlgebra) -> Result<CohomologyData, Error> {
    cohomology(ComplexRef::of_algebra(alg), 0, alg.cap())
}

/// Matrices of `H(f)` on the chosen cohomology bases.
pub struct InducedMap {
    pub lo: i64,
    pub hi: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl InducedMap {
    pub fn block(&self, degree: i64) -> Option<&Matrix> {
        self.blocks.get(&degree)
    }
}

/// Induced map on cohomology. Verifies that `f` is a chain map on the window
/// first; the result is then independent of the representative choice.
pub fn induced_map(
    f: &GradedMatrixFamily,
    src: ComplexRef<'_>,
    src_h: &CohomologyData,
    tgt: ComplexRef<'_>,
    tgt_h: &CohomologyData,
) -> Result<InducedMap, Error> {
    let lo = src_h.lo.max(tgt_h.lo);
    let hi = src_h.hi.min(tgt_h.hi);
    for deg in lo..=hi {
        let lhs = match (f.block(deg + 1), src.diff.block(deg)) {
            (Some(fb), Some(db)) => Some(fb.matmul(db)),
            _ => None,
        };
        let rhs = match (tgt.diff.block(deg + f.shift), f.block(deg)) {
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
            return Err(Error::NotChainMap {
                degree: deg,
                witness: format!("induced_map precheck at degree {deg}"),
            });
        }
    }

    let mut blocks = BTreeMap::new();
    for deg in lo..=hi {
        let src_dim = src_h.dim(deg);
        if src_dim == 0 {
            continue;
        }
        let tgt_deg = deg + f.shift;
        let tgt_dim = tgt_h.dim(tgt_deg);
        let reps = src_h.representatives(deg).expect("nonzero cohomology has reps");
        let mut cols = Vec::with_capacity(src_dim);
        for rep in reps.columns() {
            let image = f.apply(deg, &rep, tgt.space.dim(tgt_deg));
            let class = tgt_h
                .chain_to_class(tgt_deg, &image)
                .unwrap_or_else(|| zeros(tgt_dim));
            cols.push(class);
        }
        blocks.insert(deg, Matrix::from_columns(tgt_dim, &cols));
    }
    Ok(InducedMap { lo, hi, blocks })
}

/// Outcome of a degreewise injectivity test.
pub struct InjectivityReport {
    pub injective: bool,
    /// First failing degree with a nonzero kernel class (cohomology coords).
    pub failure: Option<(i64, Vec<Scalar>)>,
}

/// Decide injectivity of an induced map on `lo..=hi`, with a witness class
/// for the first failure.
pub fn is_injective_on_h(map: &InducedMap, src_h: &CohomologyData) -> InjectivityReport {
    for deg in map.lo..=map.hi {
        if src_h.dim(deg) == 0 {
            continue;
        }
        let block = map.block(deg).expect("block for nonzero source");
        let kernel = rank_kernel_image(block).kernel;
        if let Some(k) = kernel.into_iter().next() {
            return InjectivityReport {
                injective: false,
                failure: Some((deg, k)),
            };
        }
    }
    InjectivityReport {
        injective: true,
        failure: None,
    }
}

/// The cohomology of an algebra as an explicit finite algebra: basis per
/// degree are the chosen classes, zero differential, products computed by
/// multiplying representatives and projecting back to classes. Products are
/// stored for every pair of supported degrees with `p + q ≤ cap`.
pub fn cohomology_algebra(alg: &dyn DgAlgebra, h: &CohomologyData) -> Arc<ExplicitAlgebra> {
    let cap = alg.cap();
    let mut space = GradedVectorSpace::new();
    for deg in h.lo..=h.hi {
        let d = h.dim(deg);
        if d > 0 {
            let labels = (0..d)
                .map(|i| {
                    let chain = h.representatives(deg).expect("reps").column(i);
                    let parts: Vec<String> = chain
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .take(3)
                        .map(|(k, c)| format!("{}·{}", c, alg.label(deg, k)))
                        .collect();
                    format!("[{}]", parts.join(" + "))
                })
                .collect();
            space.insert(deg, labels);
        }
    }

    let mut products = HashMap::new();
    let supported: Vec<i64> = space.support().collect();
    for &p in &supported {
        for &q in &supported {
            if p + q > cap {
                continue;
            }
            let hp = h.dim(p);
            let hq = h.dim(q);
            let hpq = h.dim(p + q);
            for i in 0..hp {
                let rep_i = h.representatives(p).expect("reps").column(i);
                for j in 0..hq {
                    let rep_j = h.representatives(q).expect("reps").column(j);
                    let prod = crate::dga::mul_elements(alg, (p, &rep_i), (q, &rep_j));
                    let class = if hpq == 0 {
                        zeros(0)
                    } else {
                        h.chain_to_class(p + q, &prod)
                            .expect("product of cocycles is a cocycle")
                    };
                    if class.iter().any(|c| !c.is_zero()) {
                        products.insert((p, i, q, j), class);
                    }
                }
            }
        }
    }

    ExplicitAlgebra::new(cap, space, GradedMatrixFamily::new(1), products)
}
