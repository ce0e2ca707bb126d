//! Full-rank lattices given by a ℤ-basis (stored as matrix columns).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{parse_number, ratio, Number, Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct Lattice<S> {
    basis: Mat<S>,
}

impl<S: Scalar> fmt::Debug for Lattice<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("basis_vectors", &self.basis.columns()).finish()
    }
}

impl<S: Scalar> Lattice<S> {
    /// Lattice whose ℤ-basis is the columns of `basis`.
    pub fn new(basis: Mat<S>) -> Result<Self> {
        if basis.rows() != basis.cols() || basis.rows() == 0 {
            return Err(Error::Dimension { expected: basis.rows(), got: basis.cols() });
        }
        if basis.det().approx_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(Lattice { basis })
    }

    pub fn from_vectors(vectors: &[Vec<S>]) -> Result<Self> {
        Self::new(Mat::from_columns(vectors))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &Mat<S> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        self.basis.columns()
    }

    pub fn gram(&self) -> Mat<S> {
        self.basis.transpose().mul(&self.basis)
    }

    /// Signed volume of the fundamental parallelotope.
    pub fn determinant(&self) -> S {
        self.basis.det()
    }

    /// Lattice point `Σ k_i a_i`.
    pub fn point(&self, coeffs: &[i64]) -> Vec<S> {
        self.basis.mul_int_vec(coeffs)
    }

    /// Coefficients of `v` with respect to the basis.
    pub fn coordinates(&self, v: &[S]) -> Vec<S> {
        self.basis.inverse().expect("nonsingular basis").mul_vec(v)
    }

    /// Integer coordinates of `v`, or `None` when `v` is not a lattice vector.
    pub fn integer_coordinates(&self, v: &[S]) -> Option<Vec<i64>> {
        self.coordinates(v).iter().map(Scalar::as_integer).collect()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.integer_coordinates(v).is_some()
    }

    /// Equality as subgroups of ℝ^d: each basis lies in the other lattice.
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.basis_vectors().iter().all(|v| other.contains(v))
            && other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn scaled(&self, s: &S) -> Self {
        Lattice::new(self.basis.scale(s)).expect("nonzero scale keeps the basis nonsingular")
    }

    /// Applies a linear map to every lattice vector.
    pub fn transformed(&self, m: &Mat<S>) -> Result<Self> {
        Lattice::new(m.mul(&self.basis))
    }

    /// Replaces the basis by an equivalent one (columns `basis · u`).
    pub fn with_basis_change(&self, u: &Mat<S>) -> Result<Self> {
        let lat = Lattice::new(self.basis.mul(u))?;
        match u.det().as_integer() {
            Some(1) | Some(-1) => Ok(lat),
            _ => Err(Error::InvalidArgument("basis change is not unimodular".into())),
        }
    }

    pub fn to_f64(&self) -> Lattice<f64> {
        Lattice { basis: self.basis.to_f64() }
    }

    /// `d` lines, one basis vector per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.basis_vectors() {
            let cells: Vec<String> =
                v.iter().map(|x| x.to_text()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Lattice<Rational> {
    /// Integer lattice from row vectors.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let vecs: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect();
        Lattice::from_vectors(&vecs).expect("nonsingular integer basis")
    }

    /// ℤ^d.
    pub fn cubic(d: usize) -> Self {
        Lattice { basis: Mat::identity(d) }
    }

    /// Body-centered cubic lattice `L_DT` with basis (−1,1,1), (1,1,−1), (−1,−1,−1).
    pub fn bcc() -> Self {
        Self::from_int_rows(&[&[-1, 1, 1], &[1, 1, -1], &[-1, -1, -1]])
    }

    /// Face-centered cubic lattice `L_D` with basis (−1,1,0), (1,0,1), (−1,−1,0).
    pub fn fcc() -> Self {
        Self::from_int_rows(&[&[-1, 1, 0], &[1, 0, 1], &[-1, -1, 0]])
    }
}

impl Lattice<f64> {
    /// Planar lattice with basis (1,0), (cos θ, sin θ)·`ratio`.
    pub fn planar(angle: f64, ratio: f64) -> Self {
        Lattice::from_vectors(&[vec![1.0, 0.0], vec![ratio * angle.cos(), ratio * angle.sin()]])
            .expect("non-degenerate planar basis")
    }
}

/// A lattice parsed from text: exact when every entry is rational.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLattice {
    Exact(Lattice<Rational>),
    Float(Lattice<f64>),
}

/// Parses `d` lines of `d` numbers (one basis vector per line, `#` comments).
pub fn parse_lattice(text: &str) -> Result<AnyLattice> {
    let mut rows: Vec<(usize, Vec<Number>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let nums = content
            .split_whitespace()
            .map(|t| parse_number(t).map_err(|message| Error::Parse { line: i + 1, message }))
            .collect::<Result<Vec<_>>>()?;
        rows.push((i + 1, nums));
    }
    let d = rows.len();
    if d == 0 {
        return Err(Error::Parse { line: 1, message: "empty lattice file".into() });
    }
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != d) {
        return Err(Error::Parse { line: *line, message: format!("expected {d} entries, found {}", r.len()) });
    }
    let exact = rows.iter().all(|(_, r)| r.iter().all(|x| matches!(x, Number::Exact(_))));
    if exact {
        let vecs: Vec<Vec<Rational>> = rows
            .iter()
            .map(|(_, r)| {
                r.iter()
                    .map(|x| match x {
                        Number::Exact(q) => q.clone(),
                        Number::Float(_) => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        Ok(AnyLattice::Exact(Lattice::from_vectors(&vecs)?))
    } else {
        let vecs: Vec<Vec<f64>> = rows.iter().map(|(_, r)| r.iter().map(Number::to_f64).collect()).collect();
        Ok(AnyLattice::Float(Lattice::from_vectors(&vecs)?))
    }
}

/// Membership of an integer vector in `L_DT` by the parity rule:
/// `x1+x2`, `x2+x3`, `x3+x1` all even.
pub fn bcc_parity(x: &[i64; 3]) -> bool {
    (x[0] + x[1]) % 2 == 0 && (x[1] + x[2]) % 2 == 0 && (x[2] + x[0]) % 2 == 0
}

/// Membership of an integer vector in `L_D` by the parity rule: `x1+x2+x3` even.
pub fn fcc_parity(x: &[i64; 3]) -> bool {
    (x[0] + x[1] + x[2]) % 2 == 0
}

/// Which named lattice a membership identity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedLattice {
    /// Body-centered cubic `L_DT`.
    Bcc,
    /// Face-centered cubic `L_D`.
    Fcc,
}

/// True iff, for every sample, basis-solve membership agrees with the parity rule.
pub fn membership_identity_check(name: NamedLattice, samples: &[[i64; 3]]) -> bool {
    let (lattice, parity): (Lattice<Rational>, fn(&[i64; 3]) -> bool) = match name {
        NamedLattice::Bcc => (Lattice::bcc(), bcc_parity),
        NamedLattice::Fcc => (Lattice::fcc(), fcc_parity),
    };
    samples.iter().all(|x| {
        let v: Vec<Rational> = x.iter().map(|&c| ratio(c, 1)).collect();
        lattice.contains(&v) == parity(x)
    })
}

/// Coordinates of a vector in the `L_DT` basis, in closed form:
/// `k1 = (x2−x1)/2`, `k2 = (x2−x3)/2`, `k3 = −(x1+x3)/2`.
pub fn bcc_coefficients(x: &[i64; 3]) -> [Rational; 3] {
    [ratio(x[1] - x[0], 2), ratio(x[1] - x[2], 2), ratio(-(x[0] + x[2]), 2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&c| ratio(c, 1)).collect()
    }

    #[test]
    fn membership_examples() {
        assert!(membership_identity_check(NamedLattice::Bcc, &[[1, 1, 2]]));
        assert!(!Lattice::bcc().contains(&iv(&[1, 1, 2])));
        assert!(membership_identity_check(NamedLattice::Fcc, &[[1, 1, 0]]));
        assert!(Lattice::fcc().contains(&iv(&[1, 1, 0])));
        assert!(membership_identity_check(NamedLattice::Bcc, &[[0, 0, 0]]));
    }

    #[test]
    fn parity_rules_match_basis_solve_on_a_box() {
        let mut samples = Vec::new();
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -4..=4 {
                    samples.push([a, b, c]);
                }
            }
        }
        assert!(membership_identity_check(NamedLattice::Bcc, &samples));
        assert!(membership_identity_check(NamedLattice::Fcc, &samples));
    }

    #[test]
    fn closed_form_coefficients_reconstruct() {
        let l = Lattice::bcc();
        for x in [[2, 0, 0], [1, 1, 1], [-3, 1, -1], [0, 4, 2]] {
            let k = bcc_coefficients(&x);
            assert_eq!(l.coordinates(&iv(&x)), k.to_vec());
        }
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            Lattice::from_vectors(&[iv(&[1, 0]), iv(&[2, 0])]),
            Err(Error::SingularBasis)
        ));
    }

    #[test]
    fn parse_exact_and_float() {
        match parse_lattice("-1 1 0\n1 0 1\n-1 -1 0\n").unwrap() {
            AnyLattice::Exact(l) => assert!(l.same_lattice(&Lattice::fcc())),
            _ => panic!("expected exact"),
        }
        assert!(matches!(parse_lattice("1 0\n0.5 0.8\n").unwrap(), AnyLattice::Float(_)));
        assert!(matches!(parse_lattice("1 0\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn text_roundtrip() {
        let l = Lattice::bcc().scaled(&ratio(1, 2));
        match parse_lattice(&l.to_text()).unwrap() {
            AnyLattice::Exact(m) => assert_eq!(m, l),
            _ => panic!(),
        }
    }
}
