//! Small dense matrices over a [`Scalar`], plus integer lattice helpers.
//!
//! Everything here is sized for d ≤ 4 (and quotient graphs with a handful
//! of vertices), so plain Gaussian elimination is all we need.

use std::fmt;

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone()))
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * S::from_int(v[k]))
            })
            .collect()
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, x| if x.abs() > m { x.abs() } else { m })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols && self.transpose().mul(self).approx_eq(&Self::identity(self.rows))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Row echelon form with pivot columns; pivots chosen by largest magnitude.
    fn echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].approx_zero())
                .max_by(|&a, &b| m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap());
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let pv = m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() / pv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = m[(r, j)].clone() * f.clone();
                        m[(i, j)] = m[(i, j)].clone() - v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (m, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !m[(i, c)].is_zero())
                .max_by(|&a, &b| m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap());
            let Some(p) = best else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pv = m[(c, c)].clone();
            det = det * pv.clone();
            for i in c + 1..n {
                let f = m[(i, c)].clone() / pv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(c, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !aug[(i, c)].is_zero())
                .max_by(|&a, &b| aug[(a, c)].abs().partial_cmp(&aug[(b, c)].abs()).unwrap())?;
            if aug[(best, c)].approx_zero() && !S::EXACT {
                return None;
            }
            aug.swap_rows(c, best);
            let pv = aug[(c, c)].clone();
            for j in 0..2 * n {
                aug[(c, j)] = aug[(c, j)].clone() / pv.clone();
            }
            for i in 0..n {
                if i != c && !aug[(i, c)].is_zero() {
                    let f = aug[(i, c)].clone();
                    for j in 0..2 * n {
                        let v = aug[(c, j)].clone() * f.clone();
                        aug[(i, j)] = aug[(i, j)].clone() - v;
                    }
                }
            }
        }
        Some(Self::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn vec_approx_eq<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(Scalar::approx_zero)
}

pub fn to_f64_vec<S: Scalar>(a: &[S]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

/// Lexicographic comparison; float entries within tolerance compare equal.
pub fn cmp_vec<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if !x.approx_eq(y) {
            return x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal);
        }
    }
    a.len().cmp(&b.len())
}

/// Multiset equality of two vector lists.
pub fn same_vector_set<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && vec_approx_eq(x, &b[j])) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Rank of the integer row span and the index of that span inside its
/// saturation-free ambient `ℤ^d` when the rank is full.
///
/// Returns `(rank, index)` where `index` is `|det|` of the Hermite basis,
/// meaningful only when `rank == d`.
pub fn integer_span(rows: &[Vec<i64>], d: usize) -> (usize, u128) {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut index: u128 = 1;
    for c in 0..d {
        // Euclid on column c among rows rank.., leaving one nonzero entry.
        loop {
            let nz: Vec<usize> = (rank..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    m.swap(rank, p);
                    index = index.saturating_mul(m[rank][c].unsigned_abs());
                    rank += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            let pivot_row = m[p].clone();
            for &i in &nz {
                if i != p {
                    let q = m[i][c] / pivot_row[c];
                    for j in 0..d {
                        m[i][j] -= q * pivot_row[j];
                    }
                }
            }
        }
    }
    (rank, index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn exact_inverse_and_det() {
        let m = q(&[&[-1, 1, -1], &[1, 1, -1], &[1, -1, -1]]);
        assert_eq!(m.det(), ratio(4, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn rank_and_nullspace() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(is_zero_vec(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn integer_span_index() {
        assert_eq!(integer_span(&[vec![1, 0], vec![0, 1]], 2), (2, 1));
        assert_eq!(integer_span(&[vec![2, 0], vec![0, 1], vec![0, 3]], 2), (2, 2));
        assert_eq!(integer_span(&[vec![2, 0], vec![3, 0]], 2).0, 1);
        assert_eq!(integer_span(&[vec![2, 1], vec![1, 2]], 2), (2, 3));
    }
}
