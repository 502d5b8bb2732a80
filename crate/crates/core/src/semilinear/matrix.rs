use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use super::int_matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::witt::{WittElem, WittRing};

/// Dense row-major matrix over `W_n(k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct WMatrix {
    ring: Arc<WittRing>,
    rows: usize,
    cols: usize,
    data: Vec<WittElem>,
}

impl fmt::Debug for WMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for WMatrix {
    type Output = WittElem;
    fn index(&self, (i, j): (usize, usize)) -> &WittElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for WMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut WittElem {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`WMatrix::local_smith`]: `u · A · v` is diagonal with entries
/// `p^{e_i}` (or zero where `valuations[i]` is `None`).
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub u: WMatrix,
    pub v: WMatrix,
    pub valuations: Vec<Option<u32>>,
}

impl WMatrix {
    pub fn from_fn(
        ring: &Arc<WittRing>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> WittElem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        WMatrix {
            ring: Arc::clone(ring),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(ring: &Arc<WittRing>, rows: usize, cols: usize) -> Self {
        let z = ring.zero();
        Self::from_fn(ring, rows, cols, |_, _| z.clone())
    }

    pub fn identity(ring: &Arc<WittRing>, n: usize) -> Self {
        Self::scalar(ring, n, &ring.one())
    }

    pub fn scalar(ring: &Arc<WittRing>, n: usize, c: &WittElem) -> Self {
        let z = ring.zero();
        Self::from_fn(ring, n, n, |i, j| if i == j { c.clone() } else { z.clone() })
    }

    /// `p^k · Id`.
    pub fn p_power_identity(ring: &Arc<WittRing>, n: usize, k: u32) -> Self {
        Self::scalar(ring, n, &ring.from_int(p_pow(ring, k)))
    }

    pub fn from_ints(ring: &Arc<WittRing>, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged integer matrix".into()));
        }
        Ok(Self::from_fn(ring, r, c, |i, j| ring.from_int(rows[i][j])))
    }

    pub fn from_int_matrix(ring: &Arc<WittRing>, m: &IntMatrix) -> Self {
        Self::from_fn(ring, m.rows(), m.cols(), |i, j| ring.from_int(m[(i, j)]))
    }

    pub fn from_rows(ring: &Arc<WittRing>, rows: Vec<Vec<WittElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|e| e.ring() != ring) {
            return Err(Error::IncompatibleRings);
        }
        Ok(WMatrix {
            ring: Arc::clone(ring),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ring(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_vecs(&self) -> Vec<Vec<WittElem>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &WittElem)> {
        let cols = self.cols;
        self.data.iter().enumerate().map(move |(k, e)| ((k / cols, k % cols), e))
    }

    pub fn map(&self, f: impl Fn(&WittElem) -> WittElem) -> Self {
        WMatrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise Frobenius.
    pub fn sigma(&self) -> Self {
        self.map(WittElem::frobenius)
    }

    pub fn sigma_inv(&self) -> Self {
        self.map(WittElem::frobenius_inv)
    }

    pub fn sigma_pow(&self, k: i64) -> Self {
        self.map(|e| e.frobenius_pow(k))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|e| e.scale(k))
    }

    pub fn scale(&self, c: &WittElem) -> Self {
        self.map(|e| e * c)
    }

    pub fn neg(&self) -> Self {
        self.map(WittElem::neg)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(WittElem::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::IncompatibleRings);
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&WittElem, &WittElem) -> WittElem) -> Result<Self> {
        self.check_same(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(WMatrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Kronecker product; basis `e_i ⊗ f_j` sits at index `i * other.rows + j`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_fn(
            &self.ring,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                &self[(i / other.rows, j / other.cols)] * &other[(i % other.rows, j % other.cols)]
            },
        ))
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        Ok(out)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(&self.ring, rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn to_ring(&self, target: &Arc<WittRing>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|e| e.to_ring(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(WMatrix {
            ring: Arc::clone(target),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// First position where `self` and `other` differ, row-major.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    /// Characteristic polynomial `det(x·Id - A)`, highest degree first,
    /// by Berkowitz's division-free algorithm.
    pub fn charpoly(&self) -> Result<Vec<WittElem>> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let ring = &self.ring;
        let mut poly = vec![ring.one()];
        for r in 0..n {
            // Leading r×r block M, row R = A[r][..r], column C = A[..r][r].
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(ring.one());
            toeplitz.push(-&self[(r, r)]);
            let mut mc: Vec<WittElem> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(ring.zero(), |acc, j| &acc + &(&self[(r, j)] * &mc[j]));
                toeplitz.push(-rc);
                mc = (0..r)
                    .map(|i| (0..r).fold(ring.zero(), |acc, j| &acc + &(&self[(i, j)] * &mc[j])))
                    .collect();
            }
            let mut next = vec![ring.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, c) in poly.iter().enumerate() {
                    if j <= i && i - j < toeplitz.len() {
                        *slot = &*slot + &(&toeplitz[i - j] * c);
                    }
                }
            }
            poly = next;
        }
        Ok(poly)
    }

    pub fn det(&self) -> Result<WittElem> {
        let cp = self.charpoly()?;
        let c0 = cp.last().expect("charpoly is never empty").clone();
        Ok(if self.rows % 2 == 1 { -c0 } else { c0 })
    }

    /// Inverse of a matrix with unit determinant, by Gauss-Jordan with unit
    /// pivots.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.ring, n);
        for k in 0..n {
            let pivot = (k..n).find(|&i| a[(i, k)].is_unit()).ok_or(Error::NotUnit)?;
            a.swap_rows(k, pivot);
            inv.swap_rows(k, pivot);
            let s = a[(k, k)].inverse()?;
            a.scale_row(k, &s);
            inv.scale_row(k, &s);
            for i in 0..n {
                if i != k && !a[(i, k)].is_zero() {
                    let factor = a[(i, k)].clone();
                    a.add_row_multiple(i, k, &-&factor);
                    inv.add_row_multiple(i, k, &-&factor);
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, s: &WittElem) {
        for c in 0..self.cols {
            self[(i, c)] = &self[(i, c)] * s;
        }
    }

    /// `row_target += factor · row_source`.
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &WittElem) {
        for c in 0..self.cols {
            let t = &self[(source, c)] * factor;
            self[(target, c)] = &self[(target, c)] + &t;
        }
    }

    /// `col_target += factor · col_source`.
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &WittElem) {
        for r in 0..self.rows {
            let t = &self[(r, source)] * factor;
            self[(r, target)] = &self[(r, target)] + &t;
        }
    }

    /// Smith form over the local ring `W_n(k)`: pivots of minimal valuation,
    /// ties broken row-major.
    pub fn local_smith(&self) -> LocalSmith {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(&self.ring, r);
        let mut v = Self::identity(&self.ring, c);
        let mut valuations = Vec::with_capacity(r.min(c));
        for k in 0..r.min(c) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    if let Some(val) = a[(i, j)].valuation() {
                        if best.is_none_or(|(b, _, _)| val < b) {
                            best = Some((val, i, j));
                        }
                    }
                }
            }
            let Some((e, pi, pj)) = best else {
                valuations.extend(std::iter::repeat_n(None, r.min(c) - k));
                break;
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let unit = a[(k, k)].div_p_pow(e).expect("pivot is divisible by p^e");
            let s = unit.inverse().expect("pivot unit part is a unit");
            a.scale_row(k, &s);
            u.scale_row(k, &s);
            for i in k + 1..r {
                if !a[(i, k)].is_zero() {
                    let factor = -&a[(i, k)].div_p_pow(e).expect("minimal valuation pivot");
                    a.add_row_multiple(i, k, &factor);
                    u.add_row_multiple(i, k, &factor);
                }
            }
            for j in k + 1..c {
                if !a[(k, j)].is_zero() {
                    let factor = -&a[(k, j)].div_p_pow(e).expect("minimal valuation pivot");
                    a.add_col_multiple(j, k, &factor);
                    v.add_col_multiple(j, k, &factor);
                }
            }
            valuations.push(Some(e));
        }
        LocalSmith { u, v, valuations }
    }

    /// Some solution of `self · y = b`, if one exists.
    pub fn solve(&self, b: &[WittElem]) -> Option<Vec<WittElem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let s = self.local_smith();
        let ub: Vec<WittElem> = (0..self.rows)
            .map(|i| (0..self.rows).fold(self.ring.zero(), |acc, k| &acc + &(&s.u[(i, k)] * &b[k])))
            .collect();
        let mut z = vec![self.ring.zero(); self.cols];
        for (i, c) in ub.iter().enumerate() {
            match s.valuations.get(i).copied().flatten() {
                Some(e) => z[i] = c.div_p_pow(e).ok()?,
                None if c.is_zero() => {}
                None => return None,
            }
        }
        Some(
            (0..self.cols)
                .map(|i| (0..self.cols).fold(self.ring.zero(), |acc, k| &acc + &(&s.v[(i, k)] * &z[k])))
                .collect(),
        )
    }
}

pub(crate) fn p_pow(ring: &WittRing, k: u32) -> i64 {
    if k >= ring.n() {
        0
    } else {
        ring.p().pow(k) as i64
    }
}

macro_rules! forward_matop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&WMatrix> for &WMatrix {
            type Output = WMatrix;
            fn $method(self, rhs: &WMatrix) -> WMatrix {
                self.$checked(rhs).expect("matrix operands are compatible")
            }
        }
    };
}

forward_matop!(Add, add, checked_add);
forward_matop!(Sub, sub, checked_sub);
forward_matop!(Mul, mul, checked_mul);
