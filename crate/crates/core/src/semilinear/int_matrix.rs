use std::fmt;

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

fn overflow() -> Error {
    Error::Domain("integer overflow in matrix arithmetic".into())
}

/// `u · m · v = d` with `d` diagonal, entries positive and each dividing the
/// next; `u_inv`, `v_inv` are the inverses of `u`, `v`.
#[derive(Clone, Debug)]
pub struct IntSmith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries of `d`.
    pub invariants: Vec<i64>,
}

impl IntSmith {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Shape("ragged integer matrix".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols: c,
            data: rows.concat(),
        })
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<i64>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape("ragged integer matrix".into()));
        }
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn neg(&self) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.checked_neg().ok_or_else(overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self[(i, k)] as i128 * other[(k, j)] as i128;
                }
                out[(i, j)] = i64::try_from(acc).map_err(|_| overflow())?;
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("integer matrix shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(*b).ok_or_else(overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &Self) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::Shape("cannot stack matrices of different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(IntMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rows `from..` of the matrix.
    pub fn rows_from(&self, from: usize) -> Self {
        IntMatrix {
            rows: self.rows - from,
            cols: self.cols,
            data: self.data[from * self.cols..].to_vec(),
        }
    }

    /// Columns `from..` of the matrix.
    pub fn cols_from(&self, from: usize) -> Self {
        let mut out = Self::zeros(self.rows, self.cols - from);
        for i in 0..self.rows {
            for j in from..self.cols {
                out[(i, j - from)] = self[(i, j)];
            }
        }
        out
    }

    /// Rank over Q by fraction-free (Bareiss) elimination.
    pub fn rank_q(&self) -> usize {
        let mut a: Vec<Vec<i128>> = self
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut rank = 0;
        let mut prev: i128 = 1;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, pivot);
            for i in rank + 1..self.rows {
                for j in col + 1..self.cols {
                    a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
                }
                a[i][col] = 0;
            }
            prev = a[rank][col];
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = self
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1;
        let mut prev: i128 = 1;
        for k in 0..n {
            let Some(pivot) = (k..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            if pivot != k {
                a.swap(k, pivot);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        let d = if n == 0 { 1 } else { prev * sign };
        i64::try_from(d).map_err(|_| overflow())
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(1) | Ok(-1))
    }

    pub fn inverse_unimodular(&self) -> Result<Self> {
        if !self.is_unimodular() {
            return Err(Error::InvalidAction("matrix is not invertible over Z".into()));
        }
        let s = self.smith()?;
        s.v.checked_mul(&s.u)
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Multiplicative order, if finite and at most `limit`.
    pub fn order(&self, limit: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.checked_mul(self).ok()?;
        }
        None
    }

    /// Saturated Z-basis of the right kernel, as columns.
    pub fn kernel(&self) -> Result<Self> {
        let s = self.smith()?;
        Ok(s.v.cols_from(s.rank()))
    }

    fn row_axpy(&mut self, target: usize, source: usize, q: i64) -> Result<()> {
        for c in 0..self.cols {
            let t = self[(source, c)].checked_mul(q).ok_or_else(overflow)?;
            self[(target, c)] = self[(target, c)].checked_add(t).ok_or_else(overflow)?;
        }
        Ok(())
    }

    fn col_axpy(&mut self, target: usize, source: usize, q: i64) -> Result<()> {
        for r in 0..self.rows {
            let t = self[(r, source)].checked_mul(q).ok_or_else(overflow)?;
            self[(r, target)] = self[(r, target)].checked_add(t).ok_or_else(overflow)?;
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// Smith normal form with transforms.
    pub fn smith(&self) -> Result<IntSmith> {
        let mut w = SmithWork {
            a: self.clone(),
            u: Self::identity(self.rows),
            u_inv: Self::identity(self.rows),
            v: Self::identity(self.cols),
            v_inv: Self::identity(self.cols),
        };
        let mut invariants = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    let x = w.a[(i, j)].unsigned_abs() as i64;
                    if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            loop {
                w.clear_cross(t)?;
                let pivot = w.a[(t, t)];
                let bad = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| w.a[(i, j)] % pivot != 0);
                match bad {
                    Some((i, _)) => w.add_row(t, i, 1)?,
                    None => break,
                }
            }
            if w.a[(t, t)] < 0 {
                w.add_row(t, t, -2)?;
            }
            invariants.push(w.a[(t, t)]);
        }
        Ok(IntSmith {
            u: w.u,
            u_inv: w.u_inv,
            v: w.v,
            v_inv: w.v_inv,
            invariants,
        })
    }
}

struct SmithWork {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row_target += q · row_source`; `target == source` scales by `1 + q`,
    /// used only with `q = -2`.
    fn add_row(&mut self, target: usize, source: usize, q: i64) -> Result<()> {
        if target == source {
            for m in [&mut self.a, &mut self.u] {
                for c in 0..m.cols {
                    m[(target, c)] = -m[(target, c)];
                }
            }
            for r in 0..self.u_inv.rows {
                self.u_inv[(r, target)] = -self.u_inv[(r, target)];
            }
            return Ok(());
        }
        self.a.row_axpy(target, source, q)?;
        self.u.row_axpy(target, source, q)?;
        self.u_inv.col_axpy(source, target, -q)
    }

    /// `col_target += q · col_source`.
    fn add_col(&mut self, target: usize, source: usize, q: i64) -> Result<()> {
        self.a.col_axpy(target, source, q)?;
        self.v.col_axpy(target, source, q)?;
        self.v_inv.row_axpy(source, target, -q)
    }

    /// Clears row and column `t` outside the pivot by repeated Euclidean
    /// steps.
    fn clear_cross(&mut self, t: usize) -> Result<()> {
        let (rows, cols) = (self.a.rows, self.a.cols);
        loop {
            let pivot = self.a[(t, t)];
            for i in t + 1..rows {
                let q = self.a[(i, t)] / pivot;
                if q != 0 {
                    self.add_row(i, t, -q)?;
                }
            }
            for j in t + 1..cols {
                let q = self.a[(t, j)] / pivot;
                if q != 0 {
                    self.add_col(j, t, -q)?;
                }
            }
            let row_rest = (t + 1..rows).map(|i| (self.a[(i, t)].unsigned_abs(), i, t));
            let col_rest = (t + 1..cols).map(|j| (self.a[(t, j)].unsigned_abs(), t, j));
            let Some((_, i, j)) = row_rest.chain(col_rest).filter(|e| e.0 != 0).min() else {
                return Ok(());
            };
            if i != t {
                self.swap_rows(t, i);
            } else {
                self.swap_cols(t, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_smith(a: &IntMatrix) {
        let s = a.smith().unwrap();
        let d = s.u.checked_mul(a).unwrap().checked_mul(&s.v).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j && i < s.rank() {
                    s.invariants[i]
                } else {
                    0
                };
                assert_eq!(d[(i, j)], expected, "{a:?}");
            }
        }
        for w in s.invariants.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        assert!(s.invariants.iter().all(|&x| x > 0));
        assert!(s.u.checked_mul(&s.u_inv).unwrap().is_identity());
        assert!(s.v.checked_mul(&s.v_inv).unwrap().is_identity());
        assert_eq!(s.rank(), a.rank_q());
    }

    #[test]
    fn smith_examples() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(a.smith().unwrap().invariants, vec![2, 6, 12]);
        check_smith(&a);
        let b = m(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(b.smith().unwrap().invariants, vec![1, 6]);
        check_smith(&m(&[vec![0, 0], vec![0, 0]]));
        check_smith(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn smith_random() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..6);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            check_smith(&m(&rows));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.det().unwrap(), 1);
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.checked_mul(&inv).unwrap().is_identity());
        assert_eq!(m(&[vec![1, 2], vec![3, 4]]).det().unwrap(), -2);
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_err());
    }

    #[test]
    fn kernel_is_saturated() {
        let a = m(&[vec![2, 4, 6]]);
        let k = a.kernel().unwrap();
        assert_eq!(k.cols(), 2);
        assert!(a.checked_mul(&k).unwrap().is_zero());
        // saturated: the kernel basis extends to a basis of Z^3
        assert_eq!(k.smith().unwrap().invariants, vec![1, 1]);
    }

    #[test]
    fn finite_order() {
        let rot = m(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(rot.order(100), Some(4));
        assert_eq!(m(&[vec![1, 1], vec![0, 1]]).order(100), None);
    }
}
