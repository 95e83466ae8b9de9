//! Graded vector spaces and degreewise families of linear maps.
//!
//! Degrees are integers: cochain algebras live in non-negative degrees, but
//! duals and suspensions of modules need the full range.

use crate::linalg::Matrix;
use crate::rational::Scalar;
use num::One;
use std::collections::BTreeMap;

/// Ordered basis labels per degree. Absent degrees have dimension zero.
#[derive(Clone, Debug, Default)]
pub struct GradedVectorSpace {
    degrees: BTreeMap<i64, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i64, labels: Vec<String>) {
        if !labels.is_empty() {
            self.degrees.insert(degree, labels);
        }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.degrees.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, degree: i64, idx: usize) -> String {
        self.labels(degree)
            .get(idx)
            .cloned()
            .unwrap_or_else(|| format!("e_{degree}_{idx}"))
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }
}

/// A degreewise family of matrices of a fixed map degree (`shift`): the block
/// at `i` maps degree `i` to degree `i + shift`. Absent blocks are zero.
#[derive(Clone, Debug)]
pub struct GradedMatrixFamily {
    pub shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMatrixFamily {
    pub fn new(shift: i64) -> Self {
        GradedMatrixFamily {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn set_block(&mut self, degree: i64, m: Matrix) {
        if m.is_zero() {
            self.blocks.remove(&degree);
        } else {
            self.blocks.insert(degree, m);
        }
    }

    pub fn block(&self, degree: i64) -> Option<&Matrix> {
        self.blocks.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    /// Identity family on a space.
    pub fn identity(space: &GradedVectorSpace) -> Self {
        let mut fam = GradedMatrixFamily::new(0);
        for deg in space.support() {
            fam.set_block(deg, Matrix::identity(space.dim(deg)));
        }
        fam
    }

    /// Apply the block at `degree` to a vector; `tgt_dim` is the dimension of
    /// degree `degree + shift` in the target, needed when the block is absent.
    pub fn apply(&self, degree: i64, v: &[Scalar], tgt_dim: usize) -> Vec<Scalar> {
        match self.block(degree) {
            Some(m) => m.apply(v),
            None => crate::rational::zeros(tgt_dim),
        }
    }

    /// `self ∘ other` (apply `other` first). Shifts add.
    pub fn compose(&self, other: &GradedMatrixFamily) -> GradedMatrixFamily {
        let mut fam = GradedMatrixFamily::new(self.shift + other.shift);
        for (deg, b) in &other.blocks {
            if let Some(a) = self.block(deg + other.shift) {
                fam.set_block(*deg, a.matmul(b));
            }
        }
        fam
    }

    pub fn add(&self, other: &GradedMatrixFamily) -> GradedMatrixFamily {
        assert_eq!(self.shift, other.shift, "family shift mismatch");
        let mut fam = self.clone();
        for (deg, b) in &other.blocks {
            let next = match fam.block(*deg) {
                Some(a) => a.add(b),
                None => b.clone(),
            };
            fam.set_block(*deg, next);
        }
        fam
    }

    pub fn sub(&self, other: &GradedMatrixFamily) -> GradedMatrixFamily {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrixFamily {
        let mut fam = GradedMatrixFamily::new(self.shift);
        for (deg, b) in &self.blocks {
            fam.set_block(*deg, b.scale(c));
        }
        fam
    }

    /// Blockwise equality, treating absent blocks as zero.
    pub fn same_as(&self, other: &GradedMatrixFamily) -> bool {
        if self.shift != other.shift {
            return false;
        }
        let keys: std::collections::BTreeSet<i64> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .copied()
            .collect();
        keys.into_iter().all(|deg| match (self.block(deg), other.block(deg)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => a.is_zero(),
            (None, Some(b)) => b.is_zero(),
            (None, None) => true,
        })
    }

    /// Restrict to blocks with source degree in `[lo, hi]`.
    pub fn restricted(&self, lo: i64, hi: i64) -> GradedMatrixFamily {
        let mut fam = GradedMatrixFamily::new(self.shift);
        for (deg, b) in &self.blocks {
            if *deg >= lo && *deg <= hi {
                fam.set_block(*deg, b.clone());
            }
        }
        fam
    }

    /// Check block shapes against the given source and target spaces.
    pub fn validate(&self, src: &GradedVectorSpace, tgt: &GradedVectorSpace) -> bool {
        self.blocks.iter().all(|(deg, m)| {
            m.ncols() == src.dim(*deg) && m.nrows() == tgt.dim(deg + self.shift)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn compose_shifts_add() {
        let mut space = GradedVectorSpace::new();
        space.insert(0, vec!["a".into()]);
        space.insert(1, vec!["b".into()]);
        space.insert(2, vec!["c".into()]);
        let mut d = GradedMatrixFamily::new(1);
        d.set_block(0, Matrix::from_rows(1, vec![vec![rat(2)]]));
        d.set_block(1, Matrix::from_rows(1, vec![vec![rat(3)]]));
        let dd = d.compose(&d);
        assert_eq!(dd.shift, 2);
        assert_eq!(dd.block(0).unwrap().get(0, 0), rat(6));
    }

    #[test]
    fn same_as_ignores_explicit_zero_blocks() {
        let mut a = GradedMatrixFamily::new(0);
        let b = GradedMatrixFamily::new(0);
        a.set_block(3, Matrix::zero(2, 2));
        assert!(a.same_as(&b));
    }
}
