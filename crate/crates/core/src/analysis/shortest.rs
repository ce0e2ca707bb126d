use crate::lattice::Lattice;
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

/// `α(L)²` and the complete set `K(L)` of minimal vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVectorSet<S> {
    pub alpha_sq: S,
    /// Sorted lexicographically.
    pub vectors: Vec<Vec<S>>,
    /// Coefficients of each vector in the lattice basis, when known.
    pub coefficients: Vec<Vec<i64>>,
}

impl<S: Scalar> ShortestVectorSet<S> {
    /// Wraps an arbitrary vector set (no coefficients); `α²` is taken from the
    /// first vector.
    pub fn from_vectors(vectors: Vec<Vec<S>>) -> Self {
        let alpha_sq = vectors.first().map(|v| linalg::norm_sq(v)).unwrap_or_else(S::zero);
        ShortestVectorSet { alpha_sq, vectors, coefficients: Vec::new() }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_sq.to_f64().sqrt()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

/// Upper-triangular Cholesky factor data of a float Gram matrix:
/// `q[i]` = squared diagonal, `mu[i][j]` (j > i) = off-diagonal ratios.
struct Cholesky {
    q: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

fn cholesky(gram: &Mat<f64>) -> Cholesky {
    let d = gram.rows();
    let mut r = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let s: f64 = gram[(i, j)] - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            if i == j {
                r[i][i] = s.max(0.0).sqrt();
            } else {
                r[i][j] = s / r[i][i];
            }
        }
    }
    let q = (0..d).map(|i| r[i][i] * r[i][i]).collect();
    let mu = (0..d).map(|i| (0..d).map(|j| if j > i { r[i][j] / r[i][i] } else { 0.0 }).collect()).collect();
    Cholesky { q, mu }
}

/// All nonzero coefficient vectors `x` with `xᵀ G x ≤ bound`, with their
/// exact quadratic form values.
///
/// Integer ranges come from a float Cholesky factorization with a small
/// safety margin; membership is then decided on the exact Gram matrix.
pub fn enumerate_within<S: Scalar>(lattice: &Lattice<S>, bound: &S) -> Vec<(Vec<i64>, S)> {
    let gram = lattice.gram();
    let chol = cholesky(&gram.to_f64());
    let d = lattice.dim();
    let fbound = bound.to_f64() * (1.0 + 1e-7) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; d];
    descend(&chol, &gram, bound, fbound, d, 0.0, &mut x, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn descend<S: Scalar>(
    chol: &Cholesky,
    gram: &Mat<S>,
    bound: &S,
    fbound: f64,
    level: usize,
    used: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, S)>,
) {
    if level == 0 {
        if x.iter().all(|&c| c == 0) {
            return;
        }
        let value = quad_form(gram, x);
        if value.approx_le(bound) {
            out.push((x.clone(), value));
        }
        return;
    }
    let i = level - 1;
    let d = x.len();
    let center: f64 = -(i + 1..d).map(|j| chol.mu[i][j] * x[j] as f64).sum::<f64>();
    let slack = (fbound - used).max(0.0);
    let radius = (slack / chol.q[i]).sqrt();
    let lo = (center - radius).floor() as i64;
    let hi = (center + radius).ceil() as i64;
    for xi in lo..=hi {
        let t = xi as f64 - center;
        let next = used + chol.q[i] * t * t;
        if next > fbound {
            continue;
        }
        x[i] = xi;
        descend(chol, gram, bound, fbound, i, next, x, out);
    }
    x[i] = 0;
}

pub(crate) fn quad_form<S: Scalar>(gram: &Mat<S>, x: &[i64]) -> S {
    let d = x.len();
    let mut acc = S::zero();
    for i in 0..d {
        if x[i] == 0 {
            continue;
        }
        for j in 0..d {
            if x[j] != 0 {
                acc = acc + gram[(i, j)].clone() * S::from_int(x[i] * x[j]);
            }
        }
    }
    acc
}

/// Computes `α(L)` and `K(L)`.
///
/// The search radius is the shortest basis vector, so the minimum is always
/// inside the enumerated ellipsoid and the returned set is complete.
pub fn shortest_vectors<S: Scalar>(lattice: &Lattice<S>) -> ShortestVectorSet<S> {
    let gram = lattice.gram();
    let bound = (0..lattice.dim())
        .map(|i| gram[(i, i)].clone())
        .fold(None, |m: Option<S>, v| match m {
            Some(m) if m <= v => Some(m),
            _ => Some(v),
        })
        .expect("nonempty basis");
    let found = enumerate_within(lattice, &bound);
    let min = found
        .iter()
        .map(|(_, v)| v.clone())
        .fold(bound, |m, v| if v < m { v } else { m });
    let mut hits: Vec<(Vec<S>, Vec<i64>)> = found
        .into_iter()
        .filter(|(_, v)| v.approx_eq(&min))
        .map(|(x, _)| (lattice.point(&x), x))
        .collect();
    hits.sort_by(|a, b| linalg::cmp_vec(&a.0, &b.0));
    let (vectors, coefficients) = hits.into_iter().unzip();
    ShortestVectorSet { alpha_sq: min, vectors, coefficients }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn integer_lattice() {
        let k = shortest_vectors(&Lattice::cubic(3));
        assert_eq!(k.alpha_sq, ratio(1, 1));
        assert_eq!(k.len(), 6);
    }

    #[test]
    fn bcc_and_fcc() {
        let k = shortest_vectors(&Lattice::bcc());
        assert_eq!((k.alpha_sq.clone(), k.len()), (ratio(3, 1), 8));
        let k = shortest_vectors(&Lattice::fcc());
        assert_eq!((k.alpha_sq.clone(), k.len()), (ratio(2, 1), 12));
    }

    #[test]
    fn skewed_basis_still_complete() {
        // Same lattice as Z^2 with a badly skewed basis.
        let l = Lattice::from_vectors(&[
            vec![ratio(1, 1), ratio(0, 1)],
            vec![ratio(17, 1), ratio(1, 1)],
        ])
        .unwrap();
        let k = shortest_vectors(&l);
        assert_eq!(k.alpha_sq, ratio(1, 1));
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn closed_under_negation() {
        let l = Lattice::<Rational>::from_int_rows(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 2]]);
        let k = shortest_vectors(&l);
        for v in &k.vectors {
            assert!(k.vectors.contains(&linalg::neg(v)));
        }
        assert_eq!(k.len() % 2, 0);
    }

    #[test]
    fn float_lattice_distinguishes_close_norms() {
        let l = Lattice::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.01]]).unwrap();
        assert_eq!(shortest_vectors(&l).len(), 4);
    }
}
