//! The reproduction checklist behind `topocryst verify-paper`.
//!
//! Each check recomputes a reference number or property from scratch and
//! compares it with the expected value; two brute-force oracles (coefficient
//! box enumeration, window cycle search) back the faster algorithms.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    angle_bound_check, classify_2d, classify_3d, dual_lattice, is_orthogonally_symmetric, point_group,
    shortest_vectors, tight_frame_check, Class2d, Class3d,
};
use crate::block::{
    cubic_block, diamond_block, diamond_edge_union, dipole_graph, honeycomb_block, k4_graph, laves_block,
    laves_edge_union, laves_plane_normals, BuildingBlock,
};
use crate::error::Result;
use crate::graph::DedgeId;
use crate::lattice::Lattice;
use crate::linalg::{self, Mat};
use crate::net::{build_net, check_incidence_rules, decompose_vertices, CrystalNet, Window};
use crate::realization::{similar_blocks, standard_realization, Objective, DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL};
use crate::rings::{canonical_key, verify_listed_rings, RingKey, RingSearch, Step};
use crate::scalar::{ratio, Rational};
use crate::symmetry::{is_chiral, is_strongly_isotropic, net_point_group};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(id: u32, title: &'static str, results: Vec<(String, bool)>) -> Check {
    let pass = results.iter().all(|(_, ok)| *ok);
    let failed: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect();
    let detail = if pass { format!("{} checks", results.len()) } else { format!("failed: {}", failed.join("; ")) };
    Check { id, title, pass, detail }
}

fn ok<T>(r: Result<T>, f: impl FnOnce(T) -> bool) -> bool {
    r.map(f).unwrap_or(false)
}

fn default_net(b: &BuildingBlock<Rational>, n: i64) -> Result<CrystalNet<Rational>> {
    build_net(b, &b.graph().homology_basis(), &Window::cube(b.dim(), n))
}

pub fn period_lattices() -> Check {
    let laves = Lattice::from_int_rows(&[&[-2, 2, 2], &[2, 2, -2], &[-2, -2, -2]]);
    let diamond = Lattice::from_int_rows(&[&[-2, 2, 0], &[2, 0, 2], &[-2, -2, 0]]);
    check(
        1,
        "period lattices of the laves and diamond blocks",
        vec![
            ("laves = 2L_DT".into(), ok(laves_block().default_period_lattice(), |l| l.same_lattice(&laves))),
            ("diamond = 2L_D".into(), ok(diamond_block().default_period_lattice(), |l| l.same_lattice(&diamond))),
        ],
    )
}

fn same_set(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let a: BTreeSet<Vec<Rational>> = a.iter().cloned().collect();
    let b: BTreeSet<Vec<Rational>> = b.iter().cloned().collect();
    a == b
}

pub fn lattice_table() -> Check {
    let z = shortest_vectors(&Lattice::cubic(3));
    let bcc = shortest_vectors(&Lattice::bcc());
    let fcc = shortest_vectors(&Lattice::fcc());
    check(
        2,
        "alpha and |K| for Z^3, L_DT, L_D",
        vec![
            ("Z^3: alpha^2 = 1, |K| = 6".into(), z.alpha_sq == ratio(1, 1) && z.len() == 6),
            ("L_DT: alpha^2 = 3, |K| = 8".into(), bcc.alpha_sq == ratio(3, 1) && bcc.len() == 8),
            ("L_D: alpha^2 = 2, |K| = 12".into(), fcc.alpha_sq == ratio(2, 1) && fcc.len() == 12),
            ("K(L_DT) = E_D".into(), same_set(&bcc.vectors, &diamond_edge_union())),
            ("K(L_D) = E_DT".into(), same_set(&fcc.vectors, &laves_edge_union())),
        ],
    )
}

pub fn point_groups() -> Check {
    let gz = point_group(&Lattice::cubic(3));
    let gb = point_group(&Lattice::bcc());
    let gf = point_group(&Lattice::fcc());
    check(
        3,
        "lattice and net point groups",
        vec![
            ("|G(Z^3)| = 48".into(), gz.order() == 48),
            ("G(Z^3) = G(L_DT)".into(), gz.same_elements(&gb)),
            ("G(Z^3) = G(L_D)".into(), gz.same_elements(&gf)),
            ("laves net: 24".into(), ok(default_net(&laves_block(), 0), |n| net_point_group(&n).order() == 24)),
            ("diamond net: 48".into(), ok(default_net(&diamond_block(), 0), |n| net_point_group(&n).order() == 48)),
        ],
    )
}

pub fn duality() -> Check {
    let half = ratio(1, 2);
    check(
        4,
        "dual lattices",
        vec![
            ("L_DT* = L_D/2".into(), dual_lattice(&Lattice::bcc()).same_lattice(&Lattice::fcc().scaled(&half))),
            ("L_D* = L_DT/2".into(), dual_lattice(&Lattice::fcc()).same_lattice(&Lattice::bcc().scaled(&half))),
        ],
    )
}

fn ring_counts(block: &BuildingBlock<Rational>, girth: usize, count: usize) -> bool {
    let Ok(search) = RingSearch::new(block) else { return false };
    search.girth(crate::rings::DEFAULT_GIRTH_CAP).ok() == Some(girth)
        && (0..block.graph().vertex_count()).all(|x| search.rings_through(x, girth).len() == count)
}

pub fn rings() -> Check {
    let congruent = RingSearch::new(&laves_block())
        .map(|s| {
            let rings = s.rings_through(0, 10);
            let first = s.geometry(&rings[0]);
            rings.len() == 15 && rings.iter().all(|r| s.geometry(r).congruent_to(&first, 1e-12))
        })
        .unwrap_or(false);
    check(
        5,
        "girth and rings through every vertex",
        vec![
            ("laves: girth 10, 15 rings per class".into(), ring_counts(&laves_block(), 10, 15)),
            ("diamond: girth 6, 12 rings per class".into(), ring_counts(&diamond_block(), 6, 12)),
            ("cubic: girth 4, 12 rings".into(), ring_counts(&cubic_block(), 4, 12)),
            ("listed decagon words".into(), ok(verify_listed_rings(&laves_block()), |r| r.pass)),
            ("decagons congruent".into(), congruent),
        ],
    )
}

/// Random orthogonal matrix from Gram–Schmidt on a random square matrix.
pub fn random_orthogonal(rng: &mut impl Rng, d: usize) -> Mat<f64> {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for _ in 0..d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for c in &cols {
                let p = linalg::dot(&v, c);
                v = linalg::sub(&v, &linalg::scale(c, &p));
            }
            let n = linalg::norm_sq(&v).sqrt();
            if n < 1e-3 {
                break;
            }
            cols.push(linalg::scale(&v, &(1.0 / n)));
        }
        if cols.len() == d {
            return Mat::from_columns(&cols);
        }
    }
}

pub fn orthogonal_symmetry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let refs: [(Lattice<Rational>, Class3d); 3] =
        [(Lattice::cubic(3), Class3d::Cubic), (Lattice::bcc(), Class3d::Bcc), (Lattice::fcc(), Class3d::Fcc)];
    let mut results: Vec<(String, bool)> = Vec::new();
    for (l, class) in &refs {
        results.push((format!("{class:?} is OS"), is_orthogonally_symmetric(l).is_os));
        results.push((format!("{class:?} classified"), classify_3d(l).map(|c| c.0 == *class).unwrap_or(false)));
    }
    let mut invariant = true;
    for trial in 0..20 {
        let (l, class) = &refs[trial % 3];
        let q = random_orthogonal(&mut rng, 3).scale(&rng.gen_range(0.2..5.0));
        let moved = l.to_f64().transformed(&q).expect("orthogonal map");
        invariant &= classify_3d(&moved).map(|c| c.0 == *class).unwrap_or(false);
    }
    results.push(("classification invariant under 20 similarities".into(), invariant));
    let squashed = Lattice::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.01]]).expect("basis");
    results.push(("diag(1,1,1.01) not OS".into(), classify_3d(&squashed).map(|c| c.0 == Class3d::NotOs).unwrap_or(false)));
    let mut perturbed_ok = true;
    for trial in 0..50 {
        let base = refs[trial % 3].0.basis().to_f64();
        let noise = Mat::from_fn(3, 3, |_, _| {
            let m: f64 = rng.gen_range(0.02..0.2);
            if rng.gen_bool(0.5) { m } else { -m }
        });
        let Ok(l) = Lattice::new(base.sub(&noise)) else { continue };
        perturbed_ok &= classify_3d(&l).map(|c| c.0 == Class3d::NotOs).unwrap_or(false);
    }
    results.push(("50 perturbed bases not OS".into(), perturbed_ok));
    results.push(("square".into(), classify_2d(&Lattice::cubic(2)).map(|c| c.0 == Class2d::Square).unwrap_or(false)));
    let hex = Lattice::planar(std::f64::consts::FRAC_PI_3, 1.0);
    results.push(("triangular".into(), classify_2d(&hex).map(|c| c.0 == Class2d::Triangular).unwrap_or(false)));
    let rect = Lattice::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.3]]).expect("basis");
    results.push(("diag(1,1.3) not OS".into(), !is_orthogonally_symmetric(&rect).is_os));
    check(6, "orthogonally symmetric lattices", results)
}

pub fn tight_frames() -> Check {
    let results = [(Lattice::cubic(3), 2), (Lattice::bcc(), 8), (Lattice::fcc(), 8)]
        .into_iter()
        .map(|(l, c)| {
            let k = shortest_vectors(&l);
            let (got, residual) = tight_frame_check(&k, 3);
            let formula = k.alpha_sq.clone() * ratio(k.len() as i64, 3);
            (format!("c = {c}"), got == ratio(c, 1) && got == formula && residual == ratio(0, 1))
        })
        .collect();
    check(7, "K(L) is a tight frame", results)
}

pub fn angle_bounds() -> Check {
    let results = [("Z^3", Lattice::cubic(3)), ("L_DT", Lattice::bcc()), ("L_D", Lattice::fcc())]
        .into_iter()
        .map(|(name, l)| (name.to_string(), angle_bound_check(&shortest_vectors(&l))))
        .collect();
    check(8, "angles between minimal vectors in [60, 120] degrees", results)
}

pub fn symmetry_predicates() -> Check {
    let laves = default_net(&laves_block(), 0);
    let diamond = default_net(&diamond_block(), 0);
    let cubic = default_net(&cubic_block(), 0);
    check(
        9,
        "strong isotropy and chirality",
        vec![
            ("laves strongly isotropic".into(), laves.as_ref().map(is_strongly_isotropic).unwrap_or(false)),
            ("diamond strongly isotropic".into(), diamond.as_ref().map(is_strongly_isotropic).unwrap_or(false)),
            ("cubic not strongly isotropic".into(), cubic.as_ref().map(|n| !is_strongly_isotropic(n)).unwrap_or(false)),
            ("laves chiral".into(), laves.as_ref().map(is_chiral).unwrap_or(false)),
            ("diamond achiral".into(), diamond.as_ref().map(|n| !is_chiral(n)).unwrap_or(false)),
            ("cubic achiral".into(), cubic.as_ref().map(|n| !is_chiral(n)).unwrap_or(false)),
        ],
    )
}

pub fn dihedral_angles() -> Check {
    let b = laves_block();
    let normals = laves_plane_normals();
    let mut results = Vec::new();
    for (x, n) in normals.iter().enumerate() {
        let in_plane = b.star_vectors(x).iter().all(|v| linalg::dot(v, n) == ratio(0, 1));
        results.push((format!("E_{} in its plane", b.graph().vertex_id(x)), in_plane));
    }
    let target = (1.0f64 / 3.0).acos();
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, c) = (linalg::to_f64_vec(&normals[i]), linalg::to_f64_vec(&normals[j]));
            let cos = linalg::dot(&a, &c).abs() / (linalg::norm_sq(&a) * linalg::norm_sq(&c)).sqrt();
            results.push((format!("planes {i},{j}"), (cos.acos() - target).abs() <= 1e-12));
        }
    }
    check(10, "dihedral angle arccos(1/3) between the four planes", results)
}

pub fn vertex_decomposition() -> Check {
    let net = default_net(&laves_block(), 2);
    check(
        11,
        "vertex classes and incidence rules on [-2,2]^3",
        vec![
            ("decomposition".into(), net.as_ref().ok().and_then(|n| decompose_vertices(n).ok()).is_some_and(|d| d.pass)),
            ("incidence rules".into(), net.as_ref().map(check_incidence_rules).unwrap_or(false)),
        ],
    )
}

/// Relative gap between the analytic gradient and central differences at a
/// random point.
pub fn gradient_check(obj: &Objective, rng: &mut impl Rng) -> f64 {
    let d = obj.dim();
    let n = obj.graph().vertex_count();
    let positions: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let basis = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let (dp, db) = obj.gradient(&positions, &basis);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut record = |fd: f64, an: f64| worst = worst.max((fd - an).abs() / fd.abs().max(1.0));
    for i in 0..d {
        for j in 0..d {
            let (mut p, mut m) = (basis.clone(), basis.clone());
            p[(i, j)] += h;
            m[(i, j)] -= h;
            record((obj.energy(&positions, &p) - obj.energy(&positions, &m)) / (2.0 * h), db[(i, j)]);
        }
    }
    for x in 0..n {
        for c in 0..d {
            let (mut p, mut m) = (positions.clone(), positions.clone());
            p[x][c] += h;
            m[x][c] -= h;
            record((obj.energy(&p, &basis) - obj.energy(&m, &basis)) / (2.0 * h), dp[x][c]);
        }
    }
    worst
}

pub fn optimizer() -> Check {
    let cases = [
        ("K4 ~ laves", k4_graph(), laves_block().to_f64()),
        ("dipole-4 ~ diamond", dipole_graph(4), diamond_block().to_f64()),
        ("theta ~ honeycomb", dipole_graph(3), honeycomb_block()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut results = Vec::new();
    for (name, graph, reference) in cases {
        let Ok(state) = standard_realization(&graph, DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_SEED) else {
            results.push((format!("{name}: converged"), false));
            continue;
        };
        results.push((format!("{name}: residuals"), state.harmonic_residual <= 1e-9 && state.frame_residual <= 1e-9));
        results.push((format!("{name}: similar"), similar_blocks(&state.block, &reference, 1e-6)));
        let obj = Objective::new(&graph).expect("periodic graph");
        results.push((format!("{name}: gradient"), gradient_check(&obj, &mut rng) <= 1e-6));
        let best = state.block.default_period_lattice().expect("periodic").basis().clone();
        let d = best.rows();
        let beaten = (0..100).any(|_| {
            let noise = Mat::from_fn(d, d, |_, _| rng.gen_range(-0.05..0.05));
            obj.harmonic_energy(&best.sub(&noise)) < state.objective - 1e-9
        });
        results.push((format!("{name}: local minimum"), !beaten));
    }
    check(12, "standard realization", results)
}

/// `K(L)` by scanning all coefficient vectors in `[−r, r]^d`.
pub fn brute_force_shortest(lattice: &Lattice<Rational>, r: i64) -> (Rational, BTreeSet<Vec<Rational>>) {
    let d = lattice.dim();
    let mut best: Option<Rational> = None;
    let mut set = BTreeSet::new();
    let mut x = vec![-r; d];
    loop {
        if x.iter().any(|&c| c != 0) {
            let v = lattice.point(&x);
            let n = linalg::norm_sq(&v);
            match &best {
                Some(b) if n > *b => {}
                Some(b) if n == *b => {
                    set.insert(v);
                }
                _ => {
                    best = Some(n);
                    set = BTreeSet::from([v]);
                }
            }
        }
        let mut i = 0;
        while i < d && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == d {
            break;
        }
        x[i] += 1;
    }
    (best.expect("nonempty box"), set)
}

/// Random integer basis whose minimal vectors provably have coefficients
/// within `[−r, r]`: `|x_i| ≤ ‖row_i(B⁻¹)‖ · min_j ‖b_j‖`.
pub fn random_box_safe_basis(rng: &mut impl Rng, d: usize, r: i64) -> Lattice<Rational> {
    loop {
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<_>>());
        if m.det().abs() < 0.5 {
            continue;
        }
        let inv = m.transpose().inverse().expect("nonsingular");
        let shortest = rows.iter().map(|r| r.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()).fold(f64::MAX, f64::min);
        let bound = (0..d).map(|i| linalg::norm_sq(&inv.row(i)).sqrt()).fold(0.0, f64::max) * shortest;
        if bound <= r as f64 {
            return Lattice::from_int_rows(&refs);
        }
    }
}

/// Keys of the simple cycles of `length` through `(x, 0)` in a built net.
/// `None` if a cycle could leave the window (search not conclusive).
///
/// Walks are pruned once `|p − p_start|` exceeds the remaining steps times
/// the longest edge, so only boundary vertices that could still close a
/// cycle make the search inconclusive.
pub fn window_ring_keys(net: &CrystalNet<Rational>, x: usize, length: usize) -> Option<BTreeSet<RingKey>> {
    let start = net.vertex_index(x, &vec![0; net.dim()])?;
    let mut adj: Vec<Vec<(usize, DedgeId)>> = vec![Vec::new(); net.vertices.len()];
    for b in &net.bonds {
        adj[b.i].push((b.j, b.dedge));
        adj[b.j].push((b.i, b.dedge.inverse()));
    }
    let longest = net.block.forward_vectors().iter().map(|v| linalg::norm_sq(v)).max().unwrap_or_else(|| ratio(0, 1));
    let mut walk = CycleWalk {
        net,
        adj,
        origin: net.vertices[start].position.clone(),
        longest,
        length,
        path: vec![start],
        steps: Vec::new(),
        keys: BTreeSet::new(),
        inconclusive: false,
    };
    walk.extend();
    (!walk.inconclusive).then_some(walk.keys)
}

struct CycleWalk<'a> {
    net: &'a CrystalNet<Rational>,
    adj: Vec<Vec<(usize, DedgeId)>>,
    origin: Vec<Rational>,
    longest: Rational,
    length: usize,
    path: Vec<usize>,
    steps: Vec<Step>,
    keys: BTreeSet<RingKey>,
    inconclusive: bool,
}

impl CycleWalk<'_> {
    fn reachable(&self, position: &[Rational], remaining: usize) -> bool {
        let r = ratio(remaining as i64, 1);
        linalg::norm_sq(&linalg::sub(position, &self.origin)) <= r.clone() * r * self.longest.clone()
    }

    fn extend(&mut self) {
        let here = *self.path.last().expect("nonempty path");
        let v = &self.net.vertices[here];
        let remaining = self.length - self.steps.len();
        if !self.reachable(&v.position, remaining) {
            return;
        }
        if remaining > 1 {
            let g = self.net.graph();
            let vectors = self.net.block.star_vectors(v.class);
            for (&e, vec) in g.star(v.class).iter().zip(&vectors) {
                let cell: Vec<i64> = v.cell.iter().zip(self.net.unfolding.offset(e)).map(|(a, b)| a + b).collect();
                if !self.net.window.contains(&cell) && self.reachable(&linalg::add(&v.position, vec), remaining - 1) {
                    self.inconclusive = true;
                }
            }
        }
        for (next, e) in self.adj[here].clone() {
            let step = (e, self.net.vertices[here].cell.clone());
            if remaining == 1 {
                if next == self.path[0] && self.length >= 3 {
                    self.steps.push(step);
                    self.keys.insert(canonical_key(&self.net.unfolding, &self.steps));
                    self.steps.pop();
                }
            } else if !self.path.contains(&next) {
                self.steps.push(step);
                self.path.push(next);
                self.extend();
                self.path.pop();
                self.steps.pop();
            }
        }
    }
}

pub fn oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut sv_ok = true;
    for trial in 0..200 {
        let d = 2 + trial % 2;
        let l = random_box_safe_basis(&mut rng, d, 6);
        let k = shortest_vectors(&l);
        let (alpha_sq, set) = brute_force_shortest(&l, 6);
        let ours: BTreeSet<Vec<Rational>> = k.vectors.into_iter().collect();
        sv_ok &= k.alpha_sq == alpha_sq && ours == set;
    }
    let mut results = vec![("shortest vectors vs [-6,6]^d scan on 200 bases".to_string(), sv_ok)];
    for (name, block, length) in [("laves", laves_block(), 10), ("diamond", diamond_block(), 6), ("cubic", cubic_block(), 4)] {
        let agree = default_net(&block, 3)
            .ok()
            .zip(RingSearch::new(&block).ok())
            .map(|(net, search)| {
                (0..block.graph().vertex_count()).all(|x| {
                    let ours: BTreeSet<RingKey> = search.rings_through(x, length).into_iter().map(|r| r.key).collect();
                    window_ring_keys(&net, x, length) == Some(ours)
                })
            })
            .unwrap_or(false);
        results.push((format!("{name} rings vs window cycle search"), agree));
    }
    check(13, "oracle equivalence", results)
}

pub fn run_all() -> Vec<Check> {
    vec![
        period_lattices(),
        lattice_table(),
        point_groups(),
        duality(),
        rings(),
        orthogonal_symmetry(),
        tight_frames(),
        angle_bounds(),
        symmetry_predicates(),
        dihedral_angles(),
        vertex_decomposition(),
        optimizer(),
        oracles(),
    ]
}

pub fn format_table(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!("[{}] {:>2}. {} ({})\n", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.detail));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_matches_small_cases() {
        let (a, k) = brute_force_shortest(&Lattice::fcc(), 2);
        assert_eq!(a, ratio(2, 1));
        assert_eq!(k.len(), 12);
    }

    #[test]
    fn window_search_on_cubic() {
        let b = cubic_block();
        let net = default_net(&b, 2).unwrap();
        assert_eq!(window_ring_keys(&net, 0, 4).unwrap().len(), 12);
        assert_eq!(window_ring_keys(&net, 0, 3).unwrap().len(), 0);
        let small = default_net(&b, 1).unwrap();
        assert!(window_ring_keys(&small, 0, 4).is_none());
    }

    #[test]
    fn table_lines() {
        let c = Check { id: 3, title: "x", pass: false, detail: "failed: y".into() };
        assert_eq!(format_table(&[c]), "[FAIL]  3. x (failed: y)\n");
    }
}
