use std::cmp::Ordering;

use super::shortest::enumerate_within;
use crate::lattice::Lattice;
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

/// Finite group of orthogonal maps, stored as Cartesian matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGroup<S> {
    elements: Vec<Mat<S>>,
}

impl<S: Scalar> PointGroup<S> {
    pub fn from_elements(elements: Vec<Mat<S>>) -> Self {
        PointGroup { elements }
    }

    pub fn elements(&self) -> &[Mat<S>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements.first().map_or(0, Mat::rows)
    }

    pub fn contains(&self, g: &Mat<S>) -> bool {
        self.elements.iter().any(|h| h.approx_eq(g))
    }

    /// Same elements, regardless of order.
    pub fn same_elements(&self, other: &Self) -> bool {
        self.order() == other.order() && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn contains_central_inversion(&self) -> bool {
        let d = self.dim();
        self.contains(&Mat::identity(d).scale(&-S::one()))
    }

    /// Closed under products and inverses (transposes), contains the identity.
    pub fn is_group(&self) -> bool {
        let d = self.dim();
        self.contains(&Mat::identity(d))
            && self.elements.iter().all(|g| self.contains(&g.transpose()))
            && self.elements.iter().all(|g| self.elements.iter().all(|h| self.contains(&g.mul(h))))
    }

    /// `(proper, improper)` element counts.
    pub fn determinant_census(&self) -> (usize, usize) {
        let proper = self.elements.iter().filter(|g| g.det().approx_eq(&S::one())).count();
        (proper, self.order() - proper)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

/// Pairwise size reduction: repeatedly subtract integer multiples of one
/// basis vector from another while that strictly shortens it.
///
/// Returns the reduced lattice (same point set, shorter basis).
pub fn reduce_basis<S: Scalar>(lattice: &Lattice<S>) -> Lattice<S> {
    let mut b = lattice.basis_vectors();
    let d = b.len();
    loop {
        let mut changed = false;
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let nj = linalg::norm_sq(&b[j]);
                let mu = (linalg::dot(&b[i], &b[j]) / nj).round_i64();
                if mu == 0 {
                    continue;
                }
                let cand = linalg::sub(&b[i], &linalg::scale(&b[j], &S::from_int(mu)));
                let (old, new) = (linalg::norm_sq(&b[i]), linalg::norm_sq(&cand));
                if new < old && !new.approx_eq(&old) {
                    b[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    b.sort_by(|x, y| linalg::norm_sq(x).partial_cmp(&linalg::norm_sq(y)).unwrap_or(Ordering::Equal));
    Lattice::from_vectors(&b).expect("reduction preserves rank")
}

/// All ordered tuples of lattice vectors `(y_1, …, y_d)` in `lattice` whose
/// Gram matrix equals `target`. Returned as Cartesian column matrices.
pub(crate) fn gram_matching_tuples<S: Scalar>(lattice: &Lattice<S>, target: &Mat<S>) -> Vec<Mat<S>> {
    let d = target.rows();
    let max_norm = (0..d)
        .map(|i| target[(i, i)].clone())
        .fold(S::zero(), |m, v| if v > m { v } else { m });
    let pool: Vec<(Vec<S>, S)> = enumerate_within(lattice, &max_norm)
        .into_iter()
        .map(|(x, n)| (lattice.point(&x), n))
        .collect();
    let shells: Vec<Vec<&Vec<S>>> = (0..d)
        .map(|i| pool.iter().filter(|(_, n)| n.approx_eq(&target[(i, i)])).map(|(v, _)| v).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<&Vec<S>> = Vec::with_capacity(d);
    extend_tuple(&shells, target, &mut chosen, &mut out);
    out
}

fn extend_tuple<'a, S: Scalar>(
    shells: &[Vec<&'a Vec<S>>],
    target: &Mat<S>,
    chosen: &mut Vec<&'a Vec<S>>,
    out: &mut Vec<Mat<S>>,
) {
    let i = chosen.len();
    if i == shells.len() {
        let cols: Vec<Vec<S>> = chosen.iter().map(|v| (*v).clone()).collect();
        out.push(Mat::from_columns(&cols));
        return;
    }
    for &y in &shells[i] {
        if chosen.iter().enumerate().all(|(j, c)| linalg::dot(y, c).approx_eq(&target[(i, j)])) {
            chosen.push(y);
            extend_tuple(shells, target, chosen, out);
            chosen.pop();
        }
    }
}

/// `G(L)`: every orthogonal map sending `L` onto itself.
///
/// Images of a reduced basis must be lattice vectors with the same Gram
/// matrix; each such tuple defines a candidate map that is kept when
/// orthogonal. Elements are sorted by their integer matrix in the input basis.
pub fn point_group<S: Scalar>(lattice: &Lattice<S>) -> PointGroup<S> {
    let reduced = reduce_basis(lattice);
    let br = reduced.basis().clone();
    let br_inv = br.inverse().expect("nonsingular");
    let b = lattice.basis();
    let b_inv = b.inverse().expect("nonsingular");
    let mut found: Vec<(Vec<i64>, Mat<S>)> = gram_matching_tuples(&reduced, &reduced.gram())
        .into_iter()
        .map(|images| images.mul(&br_inv))
        .filter(Mat::is_orthogonal)
        .map(|g| {
            let integral = b_inv.mul(&g).mul(b);
            let key = (0..integral.rows())
                .flat_map(|i| (0..integral.cols()).map(move |j| (i, j)))
                .map(|(i, j)| integral[(i, j)].round_i64())
                .collect();
            (key, g)
        })
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    PointGroup { elements: found.into_iter().map(|(_, g)| g).collect() }
}

/// An orthogonal map carrying lattice `a` onto lattice `b`, if one exists.
pub fn lattice_isometry(a: &Lattice<f64>, b: &Lattice<f64>) -> Option<Mat<f64>> {
    if a.dim() != b.dim() || !a.determinant().abs().approx_eq(&b.determinant().abs()) {
        return None;
    }
    let ar = reduce_basis(a);
    let ar_inv = ar.basis().inverse()?;
    gram_matching_tuples(&reduce_basis(b), &ar.gram())
        .into_iter()
        .map(|images| images.mul(&ar_inv))
        .find(Mat::is_orthogonal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn cubic_family_orders() {
        assert_eq!(point_group(&Lattice::cubic(3)).order(), 48);
        assert_eq!(point_group(&Lattice::bcc()).order(), 48);
        assert_eq!(point_group(&Lattice::fcc()).order(), 48);
    }

    #[test]
    fn hexagonal_and_orthorhombic() {
        let hex = Lattice::planar(std::f64::consts::FRAC_PI_3, 1.0);
        assert_eq!(point_group(&hex).order(), 12);
        let ortho = Lattice::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.3, 0.0], vec![0.0, 0.0, 1.7]]).unwrap();
        let g = point_group(&ortho);
        assert_eq!(g.order(), 8);
        assert!(g.elements().iter().all(|m| (0..3).all(|i| (0..3).all(|j| i == j || m[(i, j)] == 0.0))));
    }

    #[test]
    fn group_axioms() {
        let g = point_group(&Lattice::<Rational>::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]));
        assert!(g.is_group());
        assert!(g.contains_central_inversion());
        assert_eq!(g.order(), 16);
    }

    #[test]
    fn reduction_keeps_lattice() {
        let l = Lattice::<Rational>::from_int_rows(&[&[1, 0, 0], &[7, 1, 0], &[3, -5, 1]]);
        let r = reduce_basis(&l);
        assert!(r.same_lattice(&l));
        assert!(r.basis_vectors().iter().all(|v| linalg::norm_sq(v) == Rational::from_integer(1.into())));
    }
}
