//! Orthogonally symmetric lattices: the three-condition test, the 2D/3D
//! classifiers, tight frames and the angle bound on minimal vectors.

use serde::Serialize;

use super::point_group::{point_group, PointGroup};
use super::shortest::{shortest_vectors, ShortestVectorSet};
use crate::error::{Error, Result};
use crate::lattice::{AnyLattice, Lattice};
use crate::linalg::{self, Mat};
use crate::scalar::{ratio, Rational, Scalar};

/// `L* = {x | ⟨x, y⟩ ∈ ℤ for all y ∈ L}`, with basis `B⁻ᵀ`.
pub fn dual_lattice<S: Scalar>(lattice: &Lattice<S>) -> Lattice<S> {
    let inv_t = lattice.basis().inverse().expect("nonsingular").transpose();
    Lattice::new(inv_t).expect("inverse of a nonsingular basis")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCondition {
    /// `K(L)` does not generate `L`.
    Generates,
    /// `G(L)` is not transitive on `K(L)`.
    Transitive,
    /// `G(L)` leaves a proper subspace invariant.
    Irreducible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness<S> {
    /// Rank and index of the sublattice spanned by `K(L)`.
    Span { rank: usize, index: u128 },
    /// A minimal vector outside the orbit of the first one.
    Unreached(Vec<S>),
    /// A non-scalar symmetric matrix commuting with every element of `G(L)`.
    InvariantForm(Mat<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OsVerdict<S> {
    pub is_os: bool,
    pub failed_condition: Option<FailedCondition>,
    pub witness: Option<Witness<S>>,
}

impl<S> OsVerdict<S> {
    fn pass() -> Self {
        OsVerdict { is_os: true, failed_condition: None, witness: None }
    }

    fn fail(condition: FailedCondition, witness: Witness<S>) -> Self {
        OsVerdict { is_os: false, failed_condition: Some(condition), witness: Some(witness) }
    }
}

/// Decides orthogonal symmetry from precomputed `K(L)` and `G(L)`.
pub fn orthogonal_symmetry<S: Scalar>(
    lattice: &Lattice<S>,
    k: &ShortestVectorSet<S>,
    group: &PointGroup<S>,
) -> OsVerdict<S> {
    let d = lattice.dim();
    let (rank, index) = linalg::integer_span(&k.coefficients, d);
    if rank != d || index != 1 {
        return OsVerdict::fail(FailedCondition::Generates, Witness::Span { rank, index });
    }
    let a = &k.vectors[0];
    let orbit: Vec<Vec<S>> = group.elements().iter().map(|g| g.mul_vec(a)).collect();
    if let Some(miss) = k.vectors.iter().find(|v| !orbit.iter().any(|o| linalg::vec_approx_eq(o, v))) {
        return OsVerdict::fail(FailedCondition::Transitive, Witness::Unreached(miss.clone()));
    }
    if let Some(form) = invariant_form(group, d) {
        return OsVerdict::fail(FailedCondition::Irreducible, Witness::InvariantForm(form));
    }
    OsVerdict::pass()
}

/// Checks conditions (generation, transitivity, irreducibility) in order.
pub fn is_orthogonally_symmetric<S: Scalar>(lattice: &Lattice<S>) -> OsVerdict<S> {
    orthogonal_symmetry(lattice, &shortest_vectors(lattice), &point_group(lattice))
}

/// Symmetric matrices `M` with `Mg = gM` for all `g` form the commutant; the
/// action is irreducible iff it is one-dimensional (scalars only). Returns a
/// non-scalar member when one exists.
pub fn invariant_form<S: Scalar>(group: &PointGroup<S>, d: usize) -> Option<Mat<S>> {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let slot = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for g in group.elements() {
        for a in 0..d {
            for b in 0..d {
                // (Mg)_{ab} − (gM)_{ab} = Σ_k M_{ak} g_{kb} − g_{ak} M_{kb}
                let mut row = vec![S::zero(); pairs.len()];
                for k in 0..d {
                    let s1 = slot(a, k);
                    row[s1] = row[s1].clone() + g[(k, b)].clone();
                    let s2 = slot(k, b);
                    row[s2] = row[s2].clone() - g[(a, k)].clone();
                }
                if row.iter().any(|x| !x.approx_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() { Mat::zeros(1, pairs.len()) } else { Mat::from_rows(&rows) };
    let to_matrix = |v: &[S]| {
        let mut m: Mat<S> = Mat::zeros(d, d);
        for (s, &(i, j)) in pairs.iter().enumerate() {
            m[(i, j)] = v[s].clone();
            m[(j, i)] = v[s].clone();
        }
        m
    };
    system
        .nullspace()
        .iter()
        .map(|v| to_matrix(v))
        .find(|m| !is_scalar_matrix(m))
}

fn is_scalar_matrix<S: Scalar>(m: &Mat<S>) -> bool {
    let c = m[(0, 0)].clone();
    m.approx_eq(&Mat::identity(m.rows()).scale(&c))
}

/// Tight-frame constant `c = α²|K|/d` and `max |Σ a aᵀ − cI|`.
pub fn tight_frame_check<S: Scalar>(k: &ShortestVectorSet<S>, d: usize) -> (S, S) {
    let c = k.alpha_sq.clone() * S::from_int(k.len() as i64) / S::from_int(d as i64);
    let residual = frame_operator(&k.vectors, d).sub(&Mat::identity(d).scale(&c)).max_abs();
    (c, residual)
}

/// `Σ a aᵀ` over a vector list.
pub fn frame_operator<S: Scalar>(vectors: &[Vec<S>], d: usize) -> Mat<S> {
    let mut s: Mat<S> = Mat::zeros(d, d);
    for a in vectors {
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] = s[(i, j)].clone() + a[i].clone() * a[j].clone();
            }
        }
    }
    s
}

/// Every pair `a ≠ ±b` of minimal vectors makes an angle in `[π/3, 2π/3]`,
/// i.e. `|⟨a, b⟩| ≤ α²/2`.
pub fn angle_bound_check<S: Scalar>(k: &ShortestVectorSet<S>) -> bool {
    let half = k.alpha_sq.clone() / S::from_int(2);
    let n = k.vectors.len();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let (a, b) = (&k.vectors[i], &k.vectors[j]);
            if linalg::vec_approx_eq(a, &linalg::neg(b)) {
                return true;
            }
            linalg::dot(a, b).abs().approx_le(&half)
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class3d {
    Cubic,
    Bcc,
    Fcc,
    NotOs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class2d {
    Square,
    Triangular,
    NotOs,
}

/// Orthogonal map carrying `a` onto `b` (as sets) after scaling both to unit
/// length. Vectors in each set must share a common norm.
///
/// Sorted pairwise inner products are compared first; a match is then
/// confirmed by anchoring a frame of `d` independent vectors of `a` on every
/// Gram-compatible tuple of `b`.
pub fn match_vector_sets(a: &[Vec<f64>], b: &[Vec<f64>]) -> Option<Mat<f64>> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let d = a[0].len();
    let unit = |s: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let n = linalg::norm_sq(&s[0]).sqrt();
        s.iter().map(|v| linalg::scale(v, &(1.0 / n))).collect()
    };
    let (a, b) = (unit(a), unit(b));
    let sorted_products = |s: &[Vec<f64>]| {
        let mut p: Vec<f64> =
            (0..s.len()).flat_map(|i| (i + 1..s.len()).map(move |j| (i, j))).map(|(i, j)| linalg::dot(&s[i], &s[j])).collect();
        p.sort_by(|x, y| x.partial_cmp(y).unwrap());
        p
    };
    let (pa, pb) = (sorted_products(&a), sorted_products(&b));
    if !pa.iter().zip(&pb).all(|(x, y)| x.approx_eq(y)) {
        return None;
    }
    let mut frame: Vec<usize> = Vec::new();
    for i in 0..a.len() {
        let mut cols: Vec<Vec<f64>> = frame.iter().map(|&j| a[j].clone()).collect();
        cols.push(a[i].clone());
        if Mat::from_rows(&cols).rank() == cols.len() {
            frame.push(i);
            if frame.len() == d {
                break;
            }
        }
    }
    if frame.len() < d {
        return None;
    }
    let fa = Mat::from_columns(&frame.iter().map(|&i| a[i].clone()).collect::<Vec<_>>());
    let fa_inv = fa.inverse()?;
    let target = fa.transpose().mul(&fa);
    let mut pick: Vec<usize> = Vec::new();
    search_frame(&a, &b, &target, &fa_inv, &mut pick)
}

fn search_frame(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    target: &Mat<f64>,
    fa_inv: &Mat<f64>,
    pick: &mut Vec<usize>,
) -> Option<Mat<f64>> {
    let i = pick.len();
    if i == target.rows() {
        let fb = Mat::from_columns(&pick.iter().map(|&j| b[j].clone()).collect::<Vec<_>>());
        let q = fb.mul(fa_inv);
        let mapped: Vec<Vec<f64>> = a.iter().map(|v| q.mul_vec(v)).collect();
        return (q.is_orthogonal() && linalg::same_vector_set(&mapped, b)).then_some(q);
    }
    for j in 0..b.len() {
        if pick.contains(&j) || !linalg::dot(&b[j], &b[j]).approx_eq(&target[(i, i)]) {
            continue;
        }
        if pick.iter().enumerate().all(|(k, &p)| linalg::dot(&b[j], &b[p]).approx_eq(&target[(i, k)])) {
            pick.push(j);
            if let Some(q) = search_frame(a, b, target, fa_inv, pick) {
                return Some(q);
            }
            pick.pop();
        }
    }
    None
}

/// Classification of a 3D lattice up to similarity, with the verdict it rests on.
pub fn classify_3d<S: Scalar>(lattice: &Lattice<S>) -> Result<(Class3d, OsVerdict<S>)> {
    if lattice.dim() != 3 {
        return Err(Error::Dimension { expected: 3, got: lattice.dim() });
    }
    let k = shortest_vectors(lattice);
    let verdict = orthogonal_symmetry(lattice, &k, &point_group(lattice));
    if !verdict.is_os {
        return Ok((Class3d::NotOs, verdict));
    }
    let (class, reference) = match k.len() {
        6 => (Class3d::Cubic, Lattice::<Rational>::cubic(3)),
        8 => (Class3d::Bcc, Lattice::bcc()),
        12 => (Class3d::Fcc, Lattice::fcc()),
        n => return Err(Error::InvalidArgument(format!("orthogonally symmetric lattice with |K| = {n}"))),
    };
    let reference_k: Vec<Vec<f64>> = shortest_vectors(&reference).vectors.iter().map(|v| linalg::to_f64_vec(v)).collect();
    let ours: Vec<Vec<f64>> = k.vectors.iter().map(|v| linalg::to_f64_vec(v)).collect();
    match match_vector_sets(&ours, &reference_k) {
        Some(_) => Ok((class, verdict)),
        None => Err(Error::InvalidArgument(format!(
            "orthogonally symmetric lattice with |K| = {} is not similar to the {:?} reference",
            k.len(),
            class
        ))),
    }
}

pub fn classify_2d<S: Scalar>(lattice: &Lattice<S>) -> Result<(Class2d, OsVerdict<S>)> {
    if lattice.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: lattice.dim() });
    }
    let k = shortest_vectors(lattice);
    let verdict = orthogonal_symmetry(lattice, &k, &point_group(lattice));
    if !verdict.is_os {
        return Ok((Class2d::NotOs, verdict));
    }
    match k.len() {
        4 => Ok((Class2d::Square, verdict)),
        6 => Ok((Class2d::Triangular, verdict)),
        n => Err(Error::InvalidArgument(format!("orthogonally symmetric planar lattice with |K| = {n}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    A,
    D,
}

/// Root lattices `A_d` (d ≥ 1) and `D_d` (d ≥ 3).
///
/// `D_d` is exact with basis `e_i − e_{i+1}` (i < d) and `e_{d−1} + e_d`.
/// `A_d` lives in the hyperplane `Σ x_i = 0` of ℝ^{d+1}; it is returned in d
/// orthonormal coordinates of that hyperplane (Cholesky factor of the
/// Cartan Gram matrix), hence as a float lattice.
pub fn root_lattice(kind: RootKind, d: usize) -> Result<AnyLattice> {
    match kind {
        RootKind::A => {
            if d < 1 {
                return Err(Error::InvalidArgument("A_d needs d >= 1".into()));
            }
            let gram = Mat::from_fn(d, d, |i, j| match i.abs_diff(j) {
                0 => 2.0,
                1 => -1.0,
                _ => 0.0,
            });
            let mut r = Mat::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    let s: f64 = gram[(i, j)] - (0..i).map(|k| r[(k, i)] * r[(k, j)]).sum::<f64>();
                    r[(i, j)] = if i == j { s.sqrt() } else { s / r[(i, i)] };
                }
            }
            Ok(AnyLattice::Float(Lattice::new(r)?))
        }
        RootKind::D => {
            if d < 3 {
                return Err(Error::InvalidArgument("D_d needs d >= 3".into()));
            }
            let unit = |i: usize| -> Vec<Rational> { (0..d).map(|j| ratio((i == j) as i64, 1)).collect() };
            let mut vecs: Vec<Vec<Rational>> = (0..d - 1).map(|i| linalg::sub(&unit(i), &unit(i + 1))).collect();
            vecs.push(linalg::add(&unit(d - 2), &unit(d - 1)));
            Ok(AnyLattice::Exact(Lattice::from_vectors(&vecs)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::point_group::lattice_isometry;

    #[test]
    fn duals() {
        let half = ratio(1, 2);
        assert!(dual_lattice(&Lattice::bcc()).same_lattice(&Lattice::fcc().scaled(&half)));
        assert!(dual_lattice(&Lattice::fcc()).same_lattice(&Lattice::bcc().scaled(&half)));
        assert!(dual_lattice(&Lattice::cubic(3)).same_lattice(&Lattice::cubic(3)));
    }

    #[test]
    fn bcc_dual_basis_matches_listed_vectors() {
        let want = Lattice::from_vectors(&[
            vec![ratio(-1, 2), ratio(1, 2), ratio(0, 1)],
            vec![ratio(0, 1), ratio(1, 2), ratio(-1, 2)],
            vec![ratio(-1, 2), ratio(0, 1), ratio(-1, 2)],
        ])
        .unwrap();
        assert!(dual_lattice(&Lattice::bcc()).same_lattice(&want));
    }

    #[test]
    fn os_examples() {
        for l in [Lattice::cubic(3), Lattice::bcc(), Lattice::fcc()] {
            assert!(is_orthogonally_symmetric(&l).is_os);
        }
        let squashed = Lattice::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.01]]).unwrap();
        let v = is_orthogonally_symmetric(&squashed);
        assert_eq!(v.failed_condition, Some(FailedCondition::Generates));
        assert!(matches!(v.witness, Some(Witness::Span { rank: 2, .. })));
        let rect = Lattice::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.3]]).unwrap();
        assert!(!is_orthogonally_symmetric(&rect).is_os);
    }

    #[test]
    fn rhombic_lattice_fails_irreducibility() {
        let rhombic = Lattice::planar(70f64.to_radians(), 1.0);
        let v = is_orthogonally_symmetric(&rhombic);
        assert_eq!(v.failed_condition, Some(FailedCondition::Irreducible));
    }

    #[test]
    fn tetragonal_fails_transitivity_or_generation() {
        // K = {±e1, ±e2, ±e3'} only when all three axes are equal; stretch one.
        let tet = Lattice::<Rational>::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert!(!is_orthogonally_symmetric(&tet).is_os);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_3d(&Lattice::fcc().scaled(&ratio(5, 1))).unwrap().0, Class3d::Fcc);
        assert_eq!(classify_3d(&Lattice::bcc()).unwrap().0, Class3d::Bcc);
        assert_eq!(classify_3d(&Lattice::cubic(3)).unwrap().0, Class3d::Cubic);
        let squashed = Lattice::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.01]]).unwrap();
        assert_eq!(classify_3d(&squashed).unwrap().0, Class3d::NotOs);
        assert!(classify_3d(&Lattice::cubic(2)).is_err());

        assert_eq!(classify_2d(&Lattice::cubic(2)).unwrap().0, Class2d::Square);
        assert_eq!(classify_2d(&Lattice::planar(std::f64::consts::FRAC_PI_3, 1.0)).unwrap().0, Class2d::Triangular);
        let rect = Lattice::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.3]]).unwrap();
        assert_eq!(classify_2d(&rect).unwrap().0, Class2d::NotOs);
    }

    #[test]
    fn tight_frames() {
        for (l, c) in [(Lattice::cubic(3), 2), (Lattice::fcc(), 8), (Lattice::bcc(), 8)] {
            let (got, residual) = tight_frame_check(&shortest_vectors(&l), 3);
            assert_eq!(got, ratio(c, 1));
            assert_eq!(residual, ratio(0, 1));
        }
    }

    #[test]
    fn angle_bounds() {
        assert!(angle_bound_check(&shortest_vectors(&Lattice::fcc())));
        assert!(angle_bound_check(&shortest_vectors(&Lattice::cubic(3))));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bad = ShortestVectorSet::from_vectors(vec![vec![1.0, 0.0], vec![h, h], vec![-1.0, 0.0], vec![-h, -h]]);
        assert!(!angle_bound_check(&bad));
    }

    #[test]
    fn root_lattices() {
        let a3 = match root_lattice(RootKind::A, 3).unwrap() {
            AnyLattice::Float(l) => l,
            _ => panic!("A_d is float"),
        };
        assert!(lattice_isometry(&a3, &Lattice::fcc().to_f64()).is_some());
        let d3 = match root_lattice(RootKind::D, 3).unwrap() {
            AnyLattice::Exact(l) => l,
            _ => panic!("D_d is exact"),
        };
        assert!(d3.same_lattice(&Lattice::fcc()));
        let d4 = match root_lattice(RootKind::D, 4).unwrap() {
            AnyLattice::Exact(l) => l,
            _ => panic!(),
        };
        let k = shortest_vectors(&d4);
        assert_eq!((k.alpha_sq.clone(), k.len()), (ratio(2, 1), 24));
        assert!(root_lattice(RootKind::D, 2).is_err());
        assert!(root_lattice(RootKind::A, 0).is_err());
    }

    #[test]
    fn fcc_and_bcc_sets_not_similar() {
        let f: Vec<Vec<f64>> = shortest_vectors(&Lattice::fcc()).vectors.iter().map(|v| linalg::to_f64_vec(v)).collect();
        let b: Vec<Vec<f64>> = shortest_vectors(&Lattice::bcc()).vectors.iter().map(|v| linalg::to_f64_vec(v)).collect();
        assert!(match_vector_sets(&f, &f).is_some());
        assert!(match_vector_sets(&f, &b).is_none());
    }
}
