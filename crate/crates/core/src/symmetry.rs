//! Isometries of a periodic net, strong isotropy and chirality.
//!
//! A congruence `x ↦ gx + t` preserves the net iff it permutes the vertex
//! classes modulo the period lattice and carries every star `E_x` onto the
//! star of the image class; both conditions only involve quotient data.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{point_group, PointGroup};
use crate::linalg::{self, Mat};
use crate::net::CrystalNet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct NetIsometry<S> {
    pub linear: Mat<S>,
    pub translation: Vec<S>,
    /// Image class of each quotient vertex.
    pub class_permutation: Vec<usize>,
}

fn sorted_vectors<S: Scalar>(mut vs: Vec<Vec<S>>) -> Vec<Vec<S>> {
    vs.sort_by(|a, b| linalg::cmp_vec(a, b));
    vs
}

fn same_multiset<S: Scalar>(a: Vec<Vec<S>>, b: Vec<Vec<S>>) -> bool {
    a.len() == b.len() && sorted_vectors(a).iter().zip(&sorted_vectors(b)).all(|(x, y)| linalg::vec_approx_eq(x, y))
}

/// `(g, t)` as a net isometry, if it is one.
pub fn as_net_isometry<S: Scalar>(net: &CrystalNet<S>, g: &Mat<S>, t: &[S]) -> Option<NetIsometry<S>> {
    let base = &net.unfolding.base;
    let n = base.len();
    let mut sigma = Vec::with_capacity(n);
    for p in base {
        let image = linalg::add(&g.mul_vec(p), t);
        let y = (0..n).find(|&y| net.lattice.contains(&linalg::sub(&image, &base[y])))?;
        sigma.push(y);
    }
    let distinct: BTreeSet<usize> = sigma.iter().copied().collect();
    if distinct.len() != n {
        return None;
    }
    let stars_match = (0..n).all(|x| {
        let mapped = net.block.star_vectors(x).iter().map(|v| g.mul_vec(v)).collect();
        same_multiset(mapped, net.block.star_vectors(sigma[x]))
    });
    stars_match.then(|| NetIsometry { linear: g.clone(), translation: t.to_vec(), class_permutation: sigma })
}

/// All net isometries modulo lattice translations, one per
/// (point-group element, image of the first class).
pub fn net_isometries<S: Scalar>(net: &CrystalNet<S>) -> Vec<NetIsometry<S>> {
    let group = point_group(&net.lattice);
    let base = &net.unfolding.base;
    let candidates: Vec<(&Mat<S>, usize)> =
        group.elements().iter().flat_map(|g| (0..base.len()).map(move |y| (g, y))).collect();
    candidates
        .par_iter()
        .filter_map(|&(g, y)| {
            let t = linalg::sub(&base[y], &g.mul_vec(&base[0]));
            as_net_isometry(net, g, &t)
        })
        .collect()
}

/// Linear parts of all net isometries.
pub fn net_point_group<S: Scalar>(net: &CrystalNet<S>) -> PointGroup<S> {
    let mut elements: Vec<Mat<S>> = Vec::new();
    for iso in net_isometries(net) {
        if !elements.iter().any(|g| g.approx_eq(&iso.linear)) {
            elements.push(iso.linear);
        }
    }
    PointGroup::from_elements(elements)
}

/// Every flag (class, ordering of its star) is the image of the flag at
/// the first class in star order.
pub fn is_strongly_isotropic<S: Scalar>(net: &CrystalNet<S>) -> bool {
    let g = net.graph();
    let star0 = net.block.star_vectors(0);
    let mut flags: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for iso in net_isometries(net) {
        let y = iso.class_permutation[0];
        let target = net.block.star_vectors(y);
        let order: Option<Vec<usize>> = star0
            .iter()
            .map(|v| {
                let w = iso.linear.mul_vec(v);
                target.iter().position(|u| linalg::vec_approx_eq(u, &w))
            })
            .collect();
        if let Some(order) = order {
            flags.insert((y, order));
        }
    }
    let total: usize = (0..g.vertex_count()).map(|y| (1..=g.degree(y)).product::<usize>()).sum();
    flags.len() == total
}

/// No orientation-reversing isometry preserves the net.
pub fn is_chiral<S: Scalar>(net: &CrystalNet<S>) -> bool {
    !net_isometries(net).iter().any(|iso| iso.linear.det().partial_cmp(&S::zero()) == Some(Ordering::Less))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub point_group_order: usize,
    pub proper: usize,
    pub improper: usize,
    pub strongly_isotropic: bool,
    pub chiral: bool,
}

pub fn symmetry_report<S: Scalar>(net: &CrystalNet<S>) -> SymmetryReport {
    let group = net_point_group(net);
    let (proper, improper) = group.determinant_census();
    SymmetryReport {
        point_group_order: group.order(),
        proper,
        improper,
        strongly_isotropic: is_strongly_isotropic(net),
        chiral: improper == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{cubic_block, diamond_block, laves_block, BuildingBlock};
    use crate::lattice::Lattice;
    use crate::net::{build_net, Window};
    use crate::scalar::{ratio, Rational};

    fn net(b: &BuildingBlock<Rational>) -> CrystalNet<Rational> {
        build_net(b, &b.graph().homology_basis(), &Window::cube(3, 0)).unwrap()
    }

    fn mirror() -> Mat<Rational> {
        Mat::from_fn(3, 3, |i, j| if i != j { ratio(0, 1) } else if i == 0 { ratio(-1, 1) } else { ratio(1, 1) })
    }

    #[test]
    fn point_group_orders() {
        let laves = net_point_group(&net(&laves_block()));
        assert_eq!(laves.order(), 24);
        assert_eq!(laves.determinant_census(), (24, 0));
        assert!(laves.is_subgroup_of(&point_group(&Lattice::bcc().scaled(&ratio(2, 1)))));
        assert!(laves.is_group());
        assert_eq!(net_point_group(&net(&diamond_block())).order(), 48);
        assert_eq!(net_point_group(&net(&cubic_block())).order(), 48);
    }

    #[test]
    fn isotropy() {
        assert!(is_strongly_isotropic(&net(&laves_block())));
        assert!(is_strongly_isotropic(&net(&diamond_block())));
        assert!(!is_strongly_isotropic(&net(&cubic_block())));
    }

    #[test]
    fn chirality() {
        assert!(is_chiral(&net(&laves_block())));
        assert!(!is_chiral(&net(&diamond_block())));
        assert!(!is_chiral(&net(&cubic_block())));
        assert!(is_chiral(&net(&laves_block().transformed(&mirror()))));
        assert!(!is_chiral(&net(&diamond_block().transformed(&mirror()))));
    }

    #[test]
    fn isometries_compose() {
        let n = net(&laves_block());
        let isos = net_isometries(&n);
        for a in isos.iter().take(6) {
            for b in isos.iter().take(6) {
                let g = a.linear.mul(&b.linear);
                let t = linalg::add(&a.linear.mul_vec(&b.translation), &a.translation);
                assert!(as_net_isometry(&n, &g, &t).is_some());
            }
        }
    }

    #[test]
    fn report() {
        let r = symmetry_report(&net(&diamond_block()));
        assert_eq!((r.point_group_order, r.proper, r.improper, r.strongly_isotropic, r.chiral), (48, 24, 24, true, false));
    }
}
