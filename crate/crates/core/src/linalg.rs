// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense matrices over truncated rings.
//!
//! A [`Mat`] is stored as one rational matrix per power of the formal
//! parameter, so products are truncated convolutions of rational matrix
//! products. Rows and columns are frequently multi-indices over tensor
//! factors; [`Mat::apply_local`] and [`Mat::permute_row_factors`] act on
//! such factorizations without forming Kronecker products.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{qi, RingMode, ScalarSeries, Q};

/// A `rows x cols` matrix over a truncated ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    mode: RingMode,
    rows: usize,
    cols: usize,
    coef: Vec<Vec<Q>>,
}

impl Mat {
    /// The zero matrix.
    pub fn zeros(mode: RingMode, rows: usize, cols: usize) -> Self {
        Mat { mode, rows, cols, coef: vec![vec![Q::zero(); rows * cols]; mode.order()] }
    }

    /// The identity matrix.
    pub fn identity(mode: RingMode, n: usize) -> Self {
        let mut m = Self::zeros(mode, n, n);
        for i in 0..n {
            m.coef[0][i * n + i] = Q::one();
        }
        m
    }

    /// A constant matrix from row-major rationals.
    pub fn constant(mode: RingMode, rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "constant matrix data length");
        let mut m = Self::zeros(mode, rows, cols);
        m.coef[0] = data;
        m
    }

    /// A constant matrix from row-major integers.
    pub fn from_ints(mode: RingMode, rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::constant(mode, rows, cols, data.iter().map(|&x| qi(x)).collect())
    }

    /// A diagonal matrix of series.
    pub fn diagonal(mode: RingMode, diag: &[ScalarSeries]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(mode, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// A `1 x 1` matrix.
    pub fn scalar(s: &ScalarSeries) -> Self {
        Self::diagonal(s.mode(), std::slice::from_ref(s))
    }

    /// Ring mode.
    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rational coefficient matrix of `param^k`, row-major.
    pub fn coeff_matrix(&self, k: usize) -> &[Q] {
        &self.coef[k]
    }

    /// Entry as a series.
    pub fn get(&self, i: usize, j: usize) -> ScalarSeries {
        let idx = i * self.cols + j;
        ScalarSeries::new(self.mode, self.coef.iter().map(|c| c[idx].clone()).collect())
    }

    /// Overwrite an entry.
    pub fn set(&mut self, i: usize, j: usize, s: &ScalarSeries) {
        assert_eq!(s.mode(), self.mode, "entry mode");
        let idx = i * self.cols + j;
        for (k, c) in s.coeffs().iter().enumerate() {
            self.coef[k][idx] = c.clone();
        }
    }

    /// Add `c * param^k` to an entry.
    pub fn add_coeff(&mut self, k: usize, i: usize, j: usize, c: &Q) {
        let idx = i * self.cols + j;
        self.coef[k][idx] += c;
    }

    /// Whether every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(|c| c.iter().all(Zero::is_zero))
    }

    fn check_shape(&self, other: &Mat) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, other.mode)));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coef.iter_mut().zip(&other.coef) {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= y;
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Mat) {
        for (a, b) in self.coef.iter_mut().zip(&other.coef) {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        }
    }

    /// Negation.
    pub fn neg(&self) -> Mat {
        self.scale_q(&-Q::one())
    }

    /// Product with a rational.
    pub fn scale_q(&self, c: &Q) -> Mat {
        let mut out = self.clone();
        for a in &mut out.coef {
            for x in a.iter_mut() {
                if !x.is_zero() {
                    *x *= c;
                }
            }
        }
        out
    }

    /// Product with a series.
    pub fn scale(&self, s: &ScalarSeries) -> Result<Mat> {
        if s.mode() != self.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, s.mode())));
        }
        let n = self.mode.order();
        let mut out = Mat::zeros(self.mode, self.rows, self.cols);
        for (a, sa) in s.coeffs().iter().enumerate() {
            if sa.is_zero() {
                continue;
            }
            for b in 0..n - a {
                for (x, y) in out.coef[a + b].iter_mut().zip(&self.coef[b]) {
                    if !y.is_zero() {
                        *x += sa * y;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.mode != other.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, other.mode)));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.mode.order();
        let (r, m, c) = (self.rows, self.cols, other.cols);
        let mut out = Mat::zeros(self.mode, r, c);
        for a in 0..n {
            let am = &self.coef[a];
            if am.iter().all(Zero::is_zero) {
                continue;
            }
            for b in 0..n - a {
                let bm = &other.coef[b];
                let om = &mut out.coef[a + b];
                for i in 0..r {
                    for k in 0..m {
                        let x = &am[i * m + k];
                        if x.is_zero() {
                            continue;
                        }
                        let brow = &bm[k * c..(k + 1) * c];
                        let orow = &mut om[i * c..(i + 1) * c];
                        for (o, y) in orow.iter_mut().zip(brow) {
                            if !y.is_zero() {
                                *o += x * y;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Mat) -> Result<Mat> {
        if self.mode != other.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, other.mode)));
        }
        let n = self.mode.order();
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Mat::zeros(self.mode, r1 * r2, c1 * c2);
        let oc = c1 * c2;
        for a in 0..n {
            for b in 0..n - a {
                let (am, bm) = (&self.coef[a], &other.coef[b]);
                let om = &mut out.coef[a + b];
                for i1 in 0..r1 {
                    for j1 in 0..c1 {
                        let x = &am[i1 * c1 + j1];
                        if x.is_zero() {
                            continue;
                        }
                        for i2 in 0..r2 {
                            for j2 in 0..c2 {
                                let y = &bm[i2 * c2 + j2];
                                if !y.is_zero() {
                                    om[(i1 * r2 + i2) * oc + j1 * c2 + j2] += x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.mode, self.cols, self.rows);
        for (o, a) in out.coef.iter_mut().zip(&self.coef) {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    o[j * self.rows + i] = a[i * self.cols + j].clone();
                }
            }
        }
        out
    }

    /// Constant coefficients as a classical matrix.
    pub fn part0(&self) -> Mat {
        Mat { mode: RingMode::Classical, rows: self.rows, cols: self.cols, coef: vec![self.coef[0].clone()] }
    }

    /// First-order coefficients; errors unless the constant part vanishes.
    pub fn part1(&self) -> Result<Mat> {
        if !self.coef[0].iter().all(Zero::is_zero) {
            return Err(Error::Part1Domain);
        }
        let c1 = self.coef.get(1).cloned().unwrap_or_else(|| vec![Q::zero(); self.rows * self.cols]);
        Ok(Mat { mode: RingMode::Classical, rows: self.rows, cols: self.cols, coef: vec![c1] })
    }

    /// Apply the mode homomorphism entrywise.
    pub fn convert(&self, target: RingMode) -> Result<Mat> {
        if !self.mode.converts_to(target) {
            return Err(Error::Mode(format!("no homomorphism {} -> {}", self.mode, target)));
        }
        let mut out = Mat::zeros(target, self.rows, self.cols);
        let keep = if self.mode == RingMode::Classical { 1 } else { target.order().min(self.mode.order()) };
        for k in 0..keep {
            out.coef[k] = self.coef[k].clone();
        }
        Ok(out)
    }

    /// Rows selected by index.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.mode, idx.len(), self.cols);
        for (o, a) in out.coef.iter_mut().zip(&self.coef) {
            for (ni, &i) in idx.iter().enumerate() {
                o[ni * self.cols..(ni + 1) * self.cols].clone_from_slice(&a[i * self.cols..(i + 1) * self.cols]);
            }
        }
        out
    }

    /// Columns selected by index.
    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        self.transpose().select_rows(idx).transpose()
    }

    /// Horizontal concatenation.
    pub fn hcat(blocks: &[Mat]) -> Result<Mat> {
        let t: Vec<Mat> = blocks.iter().map(Mat::transpose).collect();
        Ok(Mat::vcat(&t)?.transpose())
    }

    /// Vertical concatenation.
    pub fn vcat(blocks: &[Mat]) -> Result<Mat> {
        let first = blocks.first().ok_or_else(|| Error::Shape("empty concatenation".into()))?;
        let (mode, cols) = (first.mode, first.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(mode, rows, cols);
        let mut r0 = 0;
        for b in blocks {
            if b.mode != mode || b.cols != cols {
                return Err(Error::Shape("vcat blocks disagree".into()));
            }
            for k in 0..mode.order() {
                out.coef[k][r0 * cols..(r0 + b.rows) * cols].clone_from_slice(&b.coef[k]);
            }
            r0 += b.rows;
        }
        Ok(out)
    }

    /// Apply `op` to the row factors `pos..pos+k` of a row multi-index.
    ///
    /// The rows of `self` index a tensor product with factor dimensions
    /// `dims` (first factor most significant). `op` maps the product of
    /// `dims[pos..pos+k]` to a space of dimension `op.rows()`. The result
    /// has the same columns and the middle factors replaced.
    pub fn apply_local(&self, dims: &[usize], pos: usize, k: usize, op: &Mat) -> Result<Mat> {
        if op.mode != self.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, op.mode)));
        }
        let total: usize = dims.iter().product();
        if total != self.rows {
            return Err(Error::Shape(format!("row factors {dims:?} vs {} rows", self.rows)));
        }
        if pos + k > dims.len() {
            return Err(Error::Shape("local factor range out of bounds".into()));
        }
        let left: usize = dims[..pos].iter().product();
        let mid: usize = dims[pos..pos + k].iter().product();
        let right: usize = dims[pos + k..].iter().product();
        if op.cols != mid {
            return Err(Error::Shape(format!("local operator has {} cols, factors give {mid}", op.cols)));
        }
        let mout = op.rows;
        let c = self.cols;
        let n = self.mode.order();
        let mut out = Mat::zeros(self.mode, left * mout * right, c);
        let rc = right * c;
        for a in 0..n {
            let om_a = &op.coef[a];
            for b in 0..n - a {
                let src = &self.coef[b];
                let dst = &mut out.coef[a + b];
                for mo in 0..mout {
                    for mi in 0..mid {
                        let x = &om_a[mo * mid + mi];
                        if x.is_zero() {
                            continue;
                        }
                        for l in 0..left {
                            let s0 = (l * mid + mi) * rc;
                            let d0 = (l * mout + mo) * rc;
                            for t in 0..rc {
                                let y = &src[s0 + t];
                                if !y.is_zero() {
                                    dst[d0 + t] += x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Permute row factors: output factor `i` is input factor `perm[i]`.
    pub fn permute_row_factors(&self, dims: &[usize], perm: &[usize]) -> Result<Mat> {
        let total: usize = dims.iter().product();
        if total != self.rows || perm.len() != dims.len() {
            return Err(Error::Shape("row factor permutation does not fit".into()));
        }
        let map = factor_permutation_map(dims, perm);
        let mut out = Mat::zeros(self.mode, self.rows, self.cols);
        let c = self.cols;
        for (o, a) in out.coef.iter_mut().zip(&self.coef) {
            for (new_r, &old_r) in map.iter().enumerate() {
                o[new_r * c..(new_r + 1) * c].clone_from_slice(&a[old_r * c..(old_r + 1) * c]);
            }
        }
        Ok(out)
    }

    /// Permute column factors: output factor `i` is input factor `perm[i]`.
    pub fn permute_col_factors(&self, dims: &[usize], perm: &[usize]) -> Result<Mat> {
        Ok(self.transpose().permute_row_factors(dims, perm)?.transpose())
    }

    /// Inverse over the local ring; every pivot must be a unit.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Mat::identity(self.mode, n).to_rows();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or_else(|| Error::Shape("matrix is not invertible over the local ring".into()))?;
            a.swap(col, p);
            inv.swap(col, p);
            let pinv = a[col][col].inv()?;
            scale_row(&mut a[col], &pinv);
            scale_row(&mut inv[col], &pinv);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let (pa, pi) = (a[col].clone(), inv[col].clone());
                    axpy_row(&mut a[r], &f, &pa);
                    axpy_row(&mut inv[r], &f, &pi);
                }
            }
        }
        Ok(Mat::from_rows(self.mode, n, &inv))
    }

    /// A basis of the kernel `{x : self * x = 0}` as the columns of a matrix.
    ///
    /// Elimination uses unit pivots only. If a non-unit residue survives, the
    /// kernel is not a free direct summand of the expected rank and
    /// [`Error::Torsion`] is returned.
    pub fn kernel(&self) -> Result<Mat> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.to_rows();
        let mut pivots: Vec<usize> = Vec::new();
        let mut cur = 0;
        for col in 0..n {
            if cur == m {
                break;
            }
            let Some(p) = (cur..m).find(|&r| a[r][col].is_unit()) else { continue };
            a.swap(cur, p);
            let pinv = a[cur][col].inv()?;
            scale_row(&mut a[cur], &pinv);
            let prow = a[cur].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != cur && !row[col].is_zero() {
                    let f = row[col].clone();
                    axpy_row(row, &f, &prow);
                }
            }
            pivots.push(col);
            cur += 1;
        }
        if a[cur..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
            return Err(Error::Torsion("kernel is not free of the classical rank".into()));
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.mode, n, free.len());
        for (bj, &f) in free.iter().enumerate() {
            basis.set(f, bj, &ScalarSeries::one(self.mode));
            for (row, &pc) in pivots.iter().enumerate() {
                let v = a[row][f].neg();
                if !v.is_zero() {
                    basis.set(pc, bj, &v);
                }
            }
        }
        Ok(basis)
    }

    /// `exp(A)` for a matrix with vanishing constant part (nilpotent mod the order).
    pub fn exp_nilpotent(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::Shape("exp of a non-square matrix".into()));
        }
        if !self.coef[0].iter().all(Zero::is_zero) {
            return Err(Error::Mode("exp requires a vanishing constant part".into()));
        }
        let mut out = Mat::identity(self.mode, self.rows);
        let mut term = out.clone();
        for k in 1..self.mode.order() {
            term = term.mul(self)?.scale_q(&qi(k as i64).recip());
            out.add_assign_unchecked(&term);
        }
        Ok(out)
    }

    /// Rows as series vectors.
    pub fn to_rows(&self) -> Vec<Vec<ScalarSeries>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Build from series rows.
    pub fn from_rows(mode: RingMode, cols: usize, rows: &[Vec<ScalarSeries>]) -> Mat {
        let mut m = Mat::zeros(mode, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        m
    }

    /// Nonzero entries `(i, j)` of any coefficient.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let idx = i * self.cols + j;
                if self.coef.iter().any(|c| !c[idx].is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Trace.
    pub fn trace(&self) -> ScalarSeries {
        let mut coeffs = vec![Q::zero(); self.mode.order()];
        for (k, c) in self.coef.iter().enumerate() {
            for i in 0..self.rows.min(self.cols) {
                coeffs[k] += &c[i * self.cols + i];
            }
        }
        ScalarSeries::new(self.mode, coeffs)
    }
}

fn scale_row(row: &mut [ScalarSeries], s: &ScalarSeries) {
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = x.mul(s).expect("same mode");
        }
    }
}

fn axpy_row(row: &mut [ScalarSeries], f: &ScalarSeries, pivot: &[ScalarSeries]) {
    for (x, p) in row.iter_mut().zip(pivot) {
        if !p.is_zero() {
            *x = x.sub(&f.mul(p).expect("same mode")).expect("same mode");
        }
    }
}

/// For a factor permutation, the old flat index of every new flat index.
pub fn factor_permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut old_strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        old_strides[i] = old_strides[i + 1] * dims[i + 1];
    }
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for _ in 0..total {
        let old: usize = digits.iter().enumerate().map(|(i, &d)| d * old_strides[perm[i]]).sum();
        map.push(old);
        for i in (0..new_dims.len()).rev() {
            digits[i] += 1;
            if digits[i] < new_dims[i] {
                break;
            }
            digits[i] = 0;
        }
    }
    map
}

/// Split a flat index into digits over `dims`.
pub fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}

/// Combine digits over `dims` into a flat index.
pub fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}
