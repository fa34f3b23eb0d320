//! Exact integer linear algebra.
//!
//! [`snf`] diagonalizes a dense [`IntMatrix`] by unimodular row and column
//! operations, [`cokernel_group`] reads off `Z^rows / colspan(M)`, and
//! [`homology`] computes `ker d_out / im d_in` for one degree of a chain
//! complex. Boundary matrices of the bar complex are wide and very sparse, so
//! homology also accepts column-sparse input ([`SparseColumns`]) and reduces
//! the image lattice incrementally instead of materializing it densely.
//!
//! All arithmetic is on [`BigInt`]; nothing here overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major small integers.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Builds a matrix from a slice of equally long rows. An empty slice gives
    /// a 0x0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = d.clone();
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Matrix product, or `None` when the inner dimensions disagree.
    pub fn checked_mul(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Some(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot stack {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::InvalidArgument(format!(
                "cannot stack {} columns over {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination. `None` unless square.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Some(BigInt::zero());
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        Some(sign * &a[n * n - 1])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        snf_diagonal(self).iter().filter(|d| !d.is_zero()).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        debug_assert_ne!(dst, src);
        let n = self.cols;
        let (lo, hi) = self.entries.split_at_mut(dst.max(src) * n);
        let (dst_row, src_row) = if dst < src {
            (&mut lo[dst * n..dst * n + n], &hi[..n])
        } else {
            (&mut hi[..n], &lo[src * n..src * n + n])
        };
        for (d, s) in dst_row.iter_mut().zip(src_row) {
            if !s.is_zero() {
                *d += factor * s;
            }
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        debug_assert_ne!(dst, src);
        let n = self.cols;
        for r in 0..self.rows {
            let s = &self.entries[r * n + src];
            if !s.is_zero() {
                let v = factor * s;
                self.entries[r * n + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.entries[r * self.cols..(r + 1) * self.cols] {
            *x = -std::mem::take(x);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.cols {
                write!(f, " {}", self.get(r, c))?;
            }
        }
        write!(f, " ]")
    }
}

/// Column-sparse integer matrix. Each column is a list of `(row, value)`
/// pairs with strictly increasing rows and nonzero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseColumns {
    rows: usize,
    columns: Vec<SparseVec>,
}

type SparseVec = Vec<(usize, BigInt)>;

impl SparseColumns {
    pub fn new(rows: usize) -> Self {
        SparseColumns {
            rows,
            columns: Vec::new(),
        }
    }

    /// Appends a column given as unordered `(row, value)` pairs; repeated rows
    /// are summed and zeros dropped.
    pub fn push_column<I>(&mut self, entries: I) -> Result<()>
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut col: SparseVec = entries.into_iter().collect();
        if let Some(&(r, _)) = col.iter().find(|(r, _)| *r >= self.rows) {
            return Err(Error::InvalidArgument(format!(
                "row index {r} out of range for {} rows",
                self.rows
            )));
        }
        col.sort_by_key(|(r, _)| *r);
        let mut merged: SparseVec = Vec::with_capacity(col.len());
        for (r, v) in col {
            match merged.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.columns.push(merged);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }
}

impl From<&IntMatrix> for SparseColumns {
    fn from(m: &IntMatrix) -> Self {
        SparseColumns {
            rows: m.rows,
            columns: (0..m.cols)
                .map(|c| {
                    (0..m.rows)
                        .filter(|&r| !m.get(r, c).is_zero())
                        .map(|r| (r, m.get(r, c).clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Smith normal form `U·M·V = D` of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal of `D`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Which transforms a reduction should accumulate.
#[derive(Clone, Copy, Default)]
struct Track {
    u: bool,
    v: bool,
    v_inv: bool,
}

struct Reduction {
    d: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reduction {
    fn start(m: &IntMatrix, track: Track) -> Self {
        Reduction {
            d: m.clone(),
            u: track.u.then(|| IntMatrix::identity(m.rows)),
            v: track.v.then(|| IntMatrix::identity(m.cols)),
            v_inv: track.v_inv.then(|| IntMatrix::identity(m.cols)),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(w) = &mut self.v_inv {
            w.swap_rows(a, b);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.d.add_row_multiple(dst, src, factor);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, factor);
        }
    }

    // D <- D·E with E = I + factor·e_src·e_dstᵀ, so V^{-1} <- E^{-1}·V^{-1}.
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.d.add_col_multiple(dst, src, factor);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, factor);
        }
        if let Some(w) = &mut self.v_inv {
            w.add_row_multiple(src, dst, &-factor);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        if let Some(u) = &mut self.u {
            u.negate_row(r);
        }
    }

    /// Position of the nonzero entry of least absolute value in the trailing
    /// submatrix starting at `(t, t)`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for r in t..self.d.rows {
            for c in t..self.d.cols {
                let x = self.d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| x.magnitude() < b.magnitude()) {
                    best = Some((r, c, x));
                    if x.magnitude().is_one() {
                        return Some((r, c));
                    }
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    fn run(mut self) -> Self {
        let (m, n) = (self.d.rows, self.d.cols);
        for t in 0..m.min(n) {
            let Some((pr, pc)) = self.min_pivot(t) else {
                break;
            };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);
            loop {
                // Clear column t below the pivot.
                for i in t + 1..m {
                    if !self.d.get(i, t).is_zero() {
                        let q = self.d.get(i, t).div_floor(self.d.get(t, t));
                        self.add_row_multiple(i, t, &-q);
                    }
                }
                if let Some(i) = self.smallest_in_column(t) {
                    self.swap_rows(t, i);
                    continue;
                }
                // Clear row t right of the pivot.
                for j in t + 1..n {
                    if !self.d.get(t, j).is_zero() {
                        let q = self.d.get(t, j).div_floor(self.d.get(t, t));
                        self.add_col_multiple(j, t, &-q);
                    }
                }
                if let Some(j) = self.smallest_in_row(t) {
                    self.swap_cols(t, j);
                    continue;
                }
                // Enforce divisibility of the remaining block by the pivot.
                match self.first_non_multiple(t) {
                    Some(i) => {
                        self.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if self.d.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
        self
    }

    fn smallest_in_column(&self, t: usize) -> Option<usize> {
        (t + 1..self.d.rows)
            .filter(|&i| !self.d.get(i, t).is_zero())
            .min_by(|&a, &b| {
                self.d
                    .get(a, t)
                    .magnitude()
                    .cmp(self.d.get(b, t).magnitude())
            })
    }

    fn smallest_in_row(&self, t: usize) -> Option<usize> {
        (t + 1..self.d.cols)
            .filter(|&j| !self.d.get(t, j).is_zero())
            .min_by(|&a, &b| {
                self.d
                    .get(t, a)
                    .magnitude()
                    .cmp(self.d.get(t, b).magnitude())
            })
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = self.d.get(t, t);
        if p.magnitude().is_one() {
            return None;
        }
        (t + 1..self.d.rows)
            .find(|&i| (t + 1..self.d.cols).any(|j| !self.d.get(i, j).is_multiple_of(p)))
    }
}

/// Smith normal form with both unimodular transforms.
///
/// Pivots are chosen by least absolute value; the result is deterministic for
/// a given input. Diagonal entries are non-negative and form a divisibility
/// chain, zeros last.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let red = Reduction::start(
        m,
        Track {
            u: true,
            v: true,
            v_inv: false,
        },
    )
    .run();
    SnfResult {
        u: red.u.expect("tracked"),
        d: red.d,
        v: red.v.expect("tracked"),
    }
}

/// Diagonal of the Smith normal form, without accumulating transforms.
pub fn snf_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let red = Reduction::start(m, Track::default()).run();
    (0..m.rows.min(m.cols))
        .map(|i| red.d.get(i, i).clone())
        .collect()
}

/// Smith form of a diagonal matrix: replaces each pair `(a, b)` by
/// `(gcd, lcm)` until the entries form a divisibility chain. Zeros sort last.
pub fn diagonal_smith(entries: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = entries.iter().map(|x| x.abs()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[j].is_zero() || (!d[i].is_zero() && d[j].is_multiple_of(&d[i])) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = if d[i].is_zero() {
                BigInt::zero()
            } else {
                d[i].lcm(&d[j])
            };
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// `Z^rows / colspan(M)` in canonical form.
pub fn cokernel_group(m: &IntMatrix) -> FgAbelianGroup {
    let diag = snf_diagonal(m);
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    FgAbelianGroup::from_canonical_parts(
        m.rows - rank,
        diag.into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect(),
    )
}

/// `ker(d_out) / im(d_in)` for dense boundary matrices.
///
/// Fails with [`Error::InvalidArgument`] if `d_out.ncols() != d_in.nrows()`
/// and with [`Error::InvalidComplex`] if `d_out·d_in ≠ 0`.
pub fn homology(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<FgAbelianGroup> {
    homology_sparse(d_out, &SparseColumns::from(d_in))
}

/// [`homology`] with a column-sparse incoming boundary.
///
/// Uses a kernel basis of `d_out` taken from the trailing columns of `V` in
/// its Smith form; each column of `d_in` is rewritten in that basis through
/// `V^{-1}` and the resulting lattice is reduced one column at a time.
pub fn homology_sparse(d_out: &IntMatrix, d_in: &SparseColumns) -> Result<FgAbelianGroup> {
    if d_out.ncols() != d_in.nrows() {
        return Err(Error::InvalidArgument(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.ncols(),
            d_in.nrows()
        )));
    }
    let n = d_out.ncols();
    let red = Reduction::start(
        d_out,
        Track {
            u: false,
            v: false,
            v_inv: true,
        },
    )
    .run();
    let rank = (0..d_out.nrows().min(n))
        .filter(|&i| !red.d.get(i, i).is_zero())
        .count();
    let v_inv = red.v_inv.expect("tracked");
    let v_inv_cols = SparseColumns::from(&v_inv);

    let kernel_dim = n - rank;
    let mut lattice = LatticeBasis::new(kernel_dim);
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut touched: Vec<usize> = Vec::new();
    for c in 0..d_in.ncols() {
        for (k, y) in d_in.column(c) {
            for (r, w) in v_inv_cols.column(*k) {
                if acc[*r].is_zero() {
                    touched.push(*r);
                }
                acc[*r] += y * w;
            }
        }
        touched.sort_unstable();
        let mut coords: SparseVec = Vec::with_capacity(touched.len());
        for &r in &touched {
            let x = std::mem::take(&mut acc[r]);
            if x.is_zero() {
                continue;
            }
            if r < rank {
                return Err(Error::InvalidComplex(format!(
                    "column {c} of d_in is not a cycle of d_out"
                )));
            }
            coords.push((r - rank, x));
        }
        touched.clear();
        lattice.insert(coords);
    }
    let (image_rank, factors) = lattice.invariant_factors();
    Ok(FgAbelianGroup::from_canonical_parts(
        kernel_dim - image_rank,
        factors,
    ))
}

/// Lattice in `Z^dim` held as a fully reduced echelon basis (row Hermite form)
/// with sparse rows. Rows are indexed by their pivot column; pivots are
/// positive and every entry sitting above a pivot is reduced modulo it.
struct LatticeBasis {
    dim: usize,
    by_pivot: Vec<Option<SparseVec>>,
}

impl LatticeBasis {
    fn new(dim: usize) -> Self {
        LatticeBasis {
            dim,
            by_pivot: vec![None; dim],
        }
    }

    fn rank(&self) -> usize {
        self.by_pivot.iter().filter(|r| r.is_some()).count()
    }

    fn insert(&mut self, mut v: SparseVec) {
        loop {
            let Some((c, a)) = v.first().cloned() else {
                return;
            };
            let Some(p) = self.by_pivot[c].as_ref() else {
                if a.is_negative() {
                    negate(&mut v);
                }
                self.reduce_tail(&mut v);
                self.set_pivot_row(c, v);
                return;
            };
            let b = &p[0].1;
            if a.is_multiple_of(b) {
                let q = &a / b;
                v = axpy(&v, &-q, p);
                continue;
            }
            // gcd step: {v, p} -> {s·v + t·p, (b/g)·v - (a/g)·p}
            let ext = a.extended_gcd(b);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            let pivot_row = lincomb(&s, &v, &t, p);
            let rest = lincomb(&(b / &g), &v, &(-(&a / &g)), p);
            let mut pivot_row = pivot_row;
            if pivot_row[0].1.is_negative() {
                negate(&mut pivot_row);
            }
            self.reduce_tail(&mut pivot_row);
            self.set_pivot_row(c, pivot_row);
            v = rest;
        }
    }

    /// Reduces the entries of `row` after its leading one against existing
    /// pivots.
    fn reduce_tail(&self, row: &mut SparseVec) {
        let mut i = 1;
        while i < row.len() {
            let c = row[i].0;
            if let Some(p) = self.by_pivot[c].as_ref() {
                let q = row[i].1.div_floor(&p[0].1);
                if !q.is_zero() {
                    *row = axpy(row, &-q, p);
                }
            }
            // entries left of column c are untouched by the update
            i = row.partition_point(|(k, _)| *k <= c);
        }
    }

    /// Installs a row at pivot `c` and re-reduces earlier rows at column `c`.
    fn set_pivot_row(&mut self, c: usize, row: SparseVec) {
        debug_assert_eq!(row[0].0, c);
        let pivot = row[0].1.clone();
        for k in 0..c {
            let Some(other) = self.by_pivot[k].as_mut() else {
                continue;
            };
            let Ok(pos) = other.binary_search_by_key(&c, |(i, _)| *i) else {
                continue;
            };
            let q = other[pos].1.div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let mut updated = axpy(other, &-q, &row);
            // Columns right of c may now need reduction against later pivots.
            let mut i = updated.partition_point(|(k, _)| *k <= c);
            while i < updated.len() {
                let col = updated[i].0;
                if let Some(p) = self.by_pivot.get(col).and_then(|r| r.as_ref()) {
                    if col != c {
                        let q = updated[i].1.div_floor(&p[0].1);
                        if !q.is_zero() {
                            updated = axpy(&updated, &-q, p);
                        }
                    }
                }
                i = updated.partition_point(|(k, _)| *k <= col);
            }
            self.by_pivot[k] = Some(updated);
        }
        self.by_pivot[c] = Some(row);
    }

    /// Rank of the lattice and the nontrivial invariant factors of
    /// `Z^dim / lattice` restricted to its torsion part.
    fn invariant_factors(&self) -> (usize, Vec<BigInt>) {
        let rank = self.rank();
        // A unit pivot's column is zero in every other row, so the row splits
        // off as an invariant factor 1.
        let heavy: Vec<&SparseVec> = self
            .by_pivot
            .iter()
            .flatten()
            .filter(|r| !r[0].1.is_one())
            .collect();
        if heavy.is_empty() {
            return (rank, Vec::new());
        }
        let unit_cols: Vec<bool> = {
            let mut u = vec![false; self.dim];
            for (c, r) in self.by_pivot.iter().enumerate() {
                if let Some(r) = r {
                    if r[0].1.is_one() {
                        u[c] = true;
                    }
                }
            }
            u
        };
        let mut col_index = vec![usize::MAX; self.dim];
        let mut ncols = 0;
        for row in &heavy {
            for (c, _) in row.iter() {
                if !unit_cols[*c] && col_index[*c] == usize::MAX {
                    col_index[*c] = ncols;
                    ncols += 1;
                }
            }
        }
        let mut block = IntMatrix::zeros(heavy.len(), ncols);
        for (r, row) in heavy.iter().enumerate() {
            for (c, x) in row.iter() {
                if !unit_cols[*c] {
                    block.set(r, col_index[*c], x.clone());
                }
            }
        }
        let factors = snf_diagonal(&block)
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect();
        (rank, factors)
    }
}

fn negate(v: &mut SparseVec) {
    for (_, x) in v.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// `x + factor·y` on sparse vectors.
fn axpy(x: &[(usize, BigInt)], factor: &BigInt, y: &[(usize, BigInt)]) -> SparseVec {
    lincomb(&BigInt::one(), x, factor, y)
}

/// `a·x + b·y` on sparse vectors, dropping zeros.
fn lincomb(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (idx, val) = match (x.get(i), y.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                i += 1;
                j += 1;
                (*ci, a * vi + b * vj)
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                i += 1;
                (*ci, a * vi)
            }
            (Some((ci, vi)), None) => {
                i += 1;
                (*ci, a * vi)
            }
            (_, Some((cj, vj))) => {
                j += 1;
                (*cj, b * vj)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_of_identity_and_zero() {
        let id = IntMatrix::identity(2);
        assert_eq!(snf(&id).d, id);
        let z = IntMatrix::zeros(3, 2);
        assert_eq!(snf(&z).d, z);
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap();
        let res = snf(&m);
        assert_eq!(res.diagonal(), big(&[1, 6]));
        let check = res.u.checked_mul(&m).unwrap().checked_mul(&res.v).unwrap();
        assert_eq!(check, res.d);
    }

    #[test]
    fn snf_of_empty_matrices() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let res = snf(&IntMatrix::zeros(r, c));
            assert_eq!(res.u, IntMatrix::identity(r));
            assert_eq!(res.v, IntMatrix::identity(c));
            assert!(res.diagonal().is_empty());
        }
    }

    #[test]
    fn snf_negative_pivot_is_normalized() {
        let m = IntMatrix::from_rows(&[[-4]]).unwrap();
        assert_eq!(snf(&m).diagonal(), big(&[4]));
    }

    #[test]
    fn diagonal_smith_chains() {
        assert_eq!(diagonal_smith(&big(&[2, 3])), big(&[1, 6]));
        assert_eq!(diagonal_smith(&big(&[4, 6, 0])), big(&[2, 12, 0]));
        assert_eq!(diagonal_smith(&big(&[0, 5])), big(&[5, 0]));
        assert_eq!(diagonal_smith(&big(&[12, 2, 4])), big(&[2, 4, 12]));
    }

    #[test]
    fn cokernel_examples() {
        let five = IntMatrix::from_rows(&[[5]]).unwrap();
        assert_eq!(cokernel_group(&five).to_string(), "Z/5");
        assert_eq!(cokernel_group(&IntMatrix::zeros(2, 0)).to_string(), "Z^2");
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap();
        assert_eq!(cokernel_group(&m).to_string(), "Z/6");
    }

    #[test]
    fn homology_examples() {
        let z11 = IntMatrix::zeros(1, 1);
        assert_eq!(homology(&z11, &z11).unwrap().to_string(), "Z");
        let two = IntMatrix::from_rows(&[[2]]).unwrap();
        assert_eq!(homology(&z11, &two).unwrap().to_string(), "Z/2");
        let d_out = IntMatrix::from_rows(&[[0, 0]]).unwrap();
        let d_in = IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap();
        assert_eq!(homology(&d_out, &d_in).unwrap().to_string(), "Z/6");
    }

    #[test]
    fn homology_rejects_bad_input() {
        let d_out = IntMatrix::from_rows(&[[1, 0]]).unwrap();
        let d_in = IntMatrix::from_rows(&[[1], [0]]).unwrap();
        assert!(matches!(
            homology(&d_out, &d_in),
            Err(Error::InvalidComplex(_))
        ));
        let d_in = IntMatrix::zeros(3, 1);
        assert!(matches!(
            homology(&d_out, &d_in),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn homology_of_zero_maps_is_free() {
        for n in 0..5 {
            let h = homology(&IntMatrix::zeros(0, n), &IntMatrix::zeros(n, 0)).unwrap();
            assert_eq!(h, FgAbelianGroup::free(n));
        }
    }

    #[test]
    fn lattice_gcd_steps() {
        // Columns 4 and 6 in Z^1 generate 2Z.
        let mut l = LatticeBasis::new(1);
        l.insert(vec![(0, BigInt::from(4))]);
        l.insert(vec![(0, BigInt::from(-6))]);
        assert_eq!(l.invariant_factors(), (1, big(&[2])));
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = IntMatrix::from_rows(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]]).unwrap();
        assert_eq!(m.determinant(), Some(BigInt::from(18)));
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(m.determinant(), Some(BigInt::from(-1)));
        assert_eq!(IntMatrix::zeros(2, 3).determinant(), None);
    }
}
