//! Sparse exact-rational matrices and fraction-free elimination.
//!
//! Matrices are stored as sorted sparse rows. Rank, kernel, image and linear
//! solves all go through one forward elimination: rows are scaled to integer
//! vectors and reduced Bareiss-style (integer cross-multiplication followed by
//! division by the row content), so no intermediate result ever leaves ℤ.
//! Pivots are chosen deterministically — columns in increasing index order,
//! first remaining row with a nonzero entry — which makes every derived basis
//! reproducible across runs.

use crate::error::Error;
use crate::rational::{zeros, Scalar};
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::fmt;

/// Sparse row: (column, value) pairs sorted by column, values nonzero.
type Row = Vec<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Row>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.rows[i].push((i, Scalar::one()));
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length mismatch");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Matrix { nrows, ncols, rows }
    }

    /// Matrix whose columns are the given dense vectors of length `nrows`.
    pub fn from_columns(nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zero(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[i].push((j, v.clone()));
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.nrows && j < self.ncols);
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => {
                if v.is_zero() {
                    row.remove(pos);
                } else {
                    row[pos].1 = v;
                }
            }
            Err(pos) => {
                if !v.is_zero() {
                    row.insert(pos, (j, v));
                }
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        let mut col = zeros(self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            if let Ok(pos) = row.binary_search_by_key(&j, |(c, _)| *c) {
                col[i] = row[pos].1.clone();
            }
        }
        col
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        let mut cols = vec![zeros(self.nrows); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                cols[*j][i] = v.clone();
            }
        }
        cols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Iterate over nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    /// `self * v` for a dense vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols, "matrix-vector dimension mismatch");
        let mut out = zeros(self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (j, a) in row {
                if !v[*j].is_zero() {
                    acc += a * &v[*j];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "matrix product dimension mismatch");
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut acc: Row = Vec::new();
            for (k, a) in row {
                acc = add_scaled_row(&acc, a, &other.rows[*k]);
            }
            rows.push(acc);
        }
        Matrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m.rows[*j].push((i, v.clone()));
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn augment(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows, other.nrows, "augment row mismatch");
        let mut rows = self.rows.clone();
        for (i, row) in other.rows.iter().enumerate() {
            for (j, v) in row {
                rows[i].push((j + self.ncols, v.clone()));
            }
        }
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols + other.ncols,
            rows,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zero(self.nrows, self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect())
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| add_scaled_row(a, &Scalar::one(), b))
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let minus_one = -Scalar::one();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| add_scaled_row(a, &minus_one, b))
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let entries: Vec<String> = (0..self.ncols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", entries.join(", "))?;
        }
        write!(f, "]")
    }
}

fn add_scaled_row(a: &Row, c: &Scalar, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va + c * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = c * vb;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = c * vb;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Integer sparse row used inside the elimination.
type IntRow = Vec<(usize, BigInt)>;

/// Clear denominators and divide by the content, preserving signs.
fn to_primitive_int_row(row: &Row) -> IntRow {
    if row.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: IntRow = row
        .iter()
        .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
        .collect();
    let mut content = BigInt::zero();
    for (_, v) in &ints {
        content = content.gcd(v);
    }
    if !content.is_one() {
        for (_, v) in &mut ints {
            *v = &*v / &content;
        }
    }
    ints
}

fn int_row_normalize(row: &mut IntRow) {
    let mut content = BigInt::zero();
    for (_, v) in row.iter() {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &content;
        }
    }
}

/// `pv·a − av·b` on integer rows (sparse merge).
fn int_row_combine(pv: &BigInt, a: &IntRow, av: &BigInt, b: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = pv * va - av * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, pv * va));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                out.push((*cb, -(av * vb)));
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, pv * va));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -(av * vb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Row echelon data from the fraction-free forward pass.
///
/// `echelon[r]` leads at `pivot_cols[r]`; entries are integers. Pivoting only
/// considers the first `pivot_limit` columns; trailing columns (used to carry
/// right-hand sides) are reduced but never chosen as pivots.
pub struct Echelon {
    pivot_limit: usize,
    total_cols: usize,
    pub pivot_cols: Vec<usize>,
    echelon: Vec<IntRow>,
    /// Rows left over after the forward pass; nonzero entries can only sit in
    /// columns ≥ `pivot_limit`. Nonempty leftovers witness inconsistency of
    /// the corresponding right-hand side columns.
    leftovers: Vec<IntRow>,
}

fn forward_eliminate(m: &Matrix, pivot_limit: usize) -> Echelon {
    let mut active: Vec<IntRow> = m
        .rows
        .iter()
        .map(to_primitive_int_row)
        .filter(|r| !r.is_empty())
        .collect();
    let mut echelon: Vec<IntRow> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();

    for col in 0..pivot_limit {
        // All active rows lead at column ≥ col.
        let pos = active.iter().position(|r| r[0].0 == col);
        let Some(pos) = pos else { continue };
        let pivot_row = active.remove(pos);
        let pv = pivot_row[0].1.clone();
        for row in active.iter_mut() {
            if row[0].0 == col {
                let av = row[0].1.clone();
                *row = int_row_combine(&pv, row, &av, &pivot_row);
                int_row_normalize(row);
            }
        }
        active.retain(|r| !r.is_empty());
        pivot_cols.push(col);
        echelon.push(pivot_row);
        if active.is_empty() {
            break;
        }
    }

    Echelon {
        pivot_limit,
        total_cols: m.ncols,
        pivot_cols,
        echelon,
        leftovers: active,
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    fn entry(&self, r: usize, col: usize) -> Option<&BigInt> {
        self.echelon[r]
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|pos| &self.echelon[r][pos].1)
    }

    /// Back-substitute for the vector with value 1 at `free_col`, 0 at all
    /// other non-pivot columns.
    fn kernel_vector(&self, free_col: usize) -> Vec<Scalar> {
        let mut x = zeros(self.pivot_limit);
        x[free_col] = Scalar::one();
        for r in (0..self.rank()).rev() {
            let p = self.pivot_cols[r];
            let mut acc = Scalar::zero();
            for (c, v) in &self.echelon[r] {
                if *c > p && *c < self.pivot_limit && !x[*c].is_zero() {
                    acc += Scalar::from_integer(v.clone()) * &x[*c];
                }
            }
            let pv = self.entry(r, p).expect("pivot entry");
            x[p] = -acc / Scalar::from_integer(pv.clone());
        }
        x
    }

    /// Particular solution for the carried right-hand side column
    /// `pivot_limit + k`, with free variables set to zero. `None` when the
    /// column is inconsistent.
    fn solve_column(&self, k: usize) -> Option<Vec<Scalar>> {
        let rhs_col = self.pivot_limit + k;
        assert!(rhs_col < self.total_cols);
        for row in &self.leftovers {
            if row.binary_search_by_key(&rhs_col, |(c, _)| *c).is_ok() {
                return None;
            }
        }
        let mut x = zeros(self.pivot_limit);
        for r in (0..self.rank()).rev() {
            let p = self.pivot_cols[r];
            let mut acc = self
                .entry(r, rhs_col)
                .map(|v| Scalar::from_integer(v.clone()))
                .unwrap_or_else(Scalar::zero);
            for (c, v) in &self.echelon[r] {
                if *c > p && *c < self.pivot_limit && !x[*c].is_zero() {
                    acc -= Scalar::from_integer(v.clone()) * &x[*c];
                }
            }
            let pv = self.entry(r, p).expect("pivot entry");
            x[p] = acc / Scalar::from_integer(pv.clone());
        }
        Some(x)
    }
}

/// Result of [`rank_kernel_image`].
pub struct RankData {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Kernel basis vectors (one per free column, ascending column order).
    pub kernel: Vec<Vec<Scalar>>,
    /// Image basis: the original matrix columns at the pivot indices.
    pub image: Vec<Vec<Scalar>>,
}

/// Exact rank, kernel basis, image basis and pivot columns of `m`.
pub fn rank_kernel_image(m: &Matrix) -> RankData {
    let ech = forward_eliminate(m, m.ncols);
    let mut is_pivot = vec![false; m.ncols];
    for &p in &ech.pivot_cols {
        is_pivot[p] = true;
    }
    let kernel = (0..m.ncols)
        .filter(|j| !is_pivot[*j])
        .map(|j| ech.kernel_vector(j))
        .collect();
    let image = ech.pivot_cols.iter().map(|&j| m.column(j)).collect();
    RankData {
        rank: ech.rank(),
        pivot_cols: ech.pivot_cols,
        kernel,
        image,
    }
}

pub fn rank(m: &Matrix) -> usize {
    forward_eliminate(m, m.ncols).rank()
}

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    rank_kernel_image(m).kernel
}

/// Particular solution of `m·x = b`, or `None` when inconsistent.
pub fn solve_linear(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, Error> {
    if b.len() != m.nrows {
        return Err(Error::DimensionMismatch {
            context: "solve_linear",
            expected: m.nrows,
            got: b.len(),
        });
    }
    let aug = m.augment(&Matrix::from_columns(m.nrows, &[b.to_vec()]));
    let ech = forward_eliminate(&aug, m.ncols);
    Ok(ech.solve_column(0))
}

/// Simultaneous solves `m·X = rhs` (column by column); `None` when any column
/// is inconsistent.
pub fn solve_multi(m: &Matrix, rhs: &Matrix) -> Result<Option<Matrix>, Error> {
    if rhs.nrows() != m.nrows {
        return Err(Error::DimensionMismatch {
            context: "solve_multi",
            expected: m.nrows,
            got: rhs.nrows(),
        });
    }
    let aug = m.augment(rhs);
    let ech = forward_eliminate(&aug, m.ncols);
    let mut cols = Vec::with_capacity(rhs.ncols());
    for k in 0..rhs.ncols() {
        match ech.solve_column(k) {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_columns(m.ncols, &cols)))
}

/// Is `v` in the column space of `basis`?
pub fn in_span(basis: &Matrix, v: &[Scalar]) -> bool {
    solve_linear(basis, v)
        .expect("dimension checked by caller")
        .is_some()
}

/// Greedy complement extension: indices of canonical basis vectors that,
/// together with the columns of `u`, form a basis of ℚ^dim where
/// `dim = u.nrows()`. Canonical vectors are tried in index order, so the
/// choice is deterministic. Errors when the columns of `u` are dependent.
pub fn extend_to_complement(u: &Matrix) -> Result<Vec<usize>, Error> {
    let dim = u.nrows();
    let aug = u.augment(&Matrix::identity(dim));
    let ech = forward_eliminate(&aug, aug.ncols());
    let u_pivots = ech.pivot_cols.iter().filter(|&&p| p < u.ncols()).count();
    if u_pivots != u.ncols() {
        return Err(Error::DependentInput);
    }
    Ok(ech
        .pivot_cols
        .iter()
        .filter(|&&p| p >= u.ncols())
        .map(|&p| p - u.ncols())
        .collect())
}

/// Deterministic basis of the span of the given columns: the subset of input
/// columns sitting at pivot positions.
pub fn span_basis(dim: usize, cols: &[Vec<Scalar>]) -> Matrix {
    if cols.is_empty() {
        return Matrix::zero(dim, 0);
    }
    let m = Matrix::from_columns(dim, cols);
    let data = rank_kernel_image(&m);
    Matrix::from_columns(dim, &data.image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn dense(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.first().map_or(0, |r| r.len()),
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(),
        )
    }

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        let m = Matrix::identity(2);
        let data = rank_kernel_image(&m);
        assert_eq!(data.rank, 2);
        assert!(data.kernel.is_empty());
        assert_eq!(data.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn zero_matrix_rank_and_kernel() {
        let m = Matrix::zero(3, 2);
        let data = rank_kernel_image(&m);
        assert_eq!(data.rank, 0);
        assert_eq!(data.kernel.len(), 2);
    }

    #[test]
    fn rank_one_kernel_spans_expected_line() {
        // [[1,2],[2,4]] has rank 1; kernel is the line through (2,−1).
        let m = dense(&[&[1, 2], &[2, 4]]);
        let data = rank_kernel_image(&m);
        assert_eq!(data.rank, 1);
        assert_eq!(data.kernel.len(), 1);
        let k = &data.kernel[0];
        assert!(m.apply(k).iter().all(|v| v.is_zero()));
        // Proportional to (2, −1).
        assert_eq!(&k[0] * rat(-1), &k[1] * rat(2));
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = Matrix::identity(3);
        let b = vec![rat(4), frac(1, 3), rat(-2)];
        let x = solve_linear(&m, &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_underdetermined_verifies() {
        let m = dense(&[&[1, 1]]);
        let b = vec![rat(2)];
        let x = solve_linear(&m, &b).unwrap().unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn solve_inconsistent_zero_map() {
        let m = Matrix::zero(2, 3);
        let b = vec![rat(1), rat(0)];
        assert!(solve_linear(&m, &b).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let m = Matrix::identity(2);
        assert!(solve_linear(&m, &[rat(1)]).is_err());
    }

    #[test]
    fn complement_of_full_space_is_empty() {
        let u = Matrix::identity(2);
        assert_eq!(extend_to_complement(&u).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn complement_of_zero_is_canonical_basis() {
        let u = Matrix::zero(2, 0);
        assert_eq!(extend_to_complement(&u).unwrap(), vec![0, 1]);
    }

    #[test]
    fn complement_of_diagonal_line_takes_first_canonical_vector() {
        let u = Matrix::from_columns(2, &[vec![rat(1), rat(1)]]);
        assert_eq!(extend_to_complement(&u).unwrap(), vec![0]);
    }

    #[test]
    fn complement_rejects_dependent_input() {
        let u = Matrix::from_columns(2, &[vec![rat(1), rat(1)], vec![rat(2), rat(2)]]);
        assert!(extend_to_complement(&u).is_err());
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = dense(&[&[1, 2], &[3, 4]]);
        let b = dense(&[&[0, 1], &[1, 1]]);
        let c = a.matmul(&b);
        assert_eq!(c, dense(&[&[2, 3], &[4, 7]]));
    }

    #[test]
    fn fractional_entries_eliminate_exactly() {
        let m = Matrix::from_rows(
            2,
            vec![vec![frac(1, 2), frac(1, 3)], vec![frac(3, 2), rat(1)]],
        );
        // Second row is 3× the first: rank 1.
        assert_eq!(rank(&m), 1);
    }
}
