//! Numerical standard realization of a quotient graph.
//!
//! Unknowns are the vertex positions `P` (first vertex pinned at the origin)
//! and a lattice basis `B`. Tree edges carry `p_t − p_o`; the co-tree edge
//! of the i-th fundamental cycle carries `p_t − p_o + B e_i`, so `B` is the
//! period lattice in the fundamental-cycle basis. The energy `Σ ‖v(e)‖²`
//! is minimized at unit covolume.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::block::BuildingBlock;
use crate::error::{Error, Result};
use crate::graph::{DedgeId, QuotientGraph};
use crate::linalg::{self, Mat};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0;

/// The quadratic energy of a graph as a function of `(P, B)`.
#[derive(Clone, Debug)]
pub struct Objective {
    graph: QuotientGraph,
    dim: usize,
    /// Co-tree index of each declared edge, if any.
    cycle_of: Vec<Option<usize>>,
    /// Inverse of the Laplacian with the first vertex grounded.
    grounded_inverse: Mat<f64>,
}

impl Objective {
    pub fn new(graph: &QuotientGraph) -> Result<Self> {
        let dim = graph.betti_number();
        if dim == 0 {
            return Err(Error::NonPeriodic("graph is a tree".into()));
        }
        let h = graph.homology_basis();
        let mut cycle_of = vec![None; graph.edge_count()];
        for (i, &k) in h.cotree_edges().iter().enumerate() {
            cycle_of[k] = Some(i);
        }
        let n = graph.vertex_count();
        let mut lap = Mat::zeros(n - 1, n - 1);
        for e in graph.forward_dedges() {
            let (o, t) = (graph.origin(e), graph.terminus(e));
            if o == t {
                continue;
            }
            for (a, b) in [(o, t), (t, o)] {
                if a > 0 {
                    lap[(a - 1, a - 1)] += 1.0;
                    if b > 0 {
                        lap[(a - 1, b - 1)] -= 1.0;
                    }
                }
            }
        }
        let grounded_inverse = if n > 1 { lap.inverse().expect("connected graph") } else { Mat::zeros(0, 0) };
        Ok(Objective { graph: graph.clone(), dim, cycle_of, grounded_inverse })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn graph(&self) -> &QuotientGraph {
        &self.graph
    }

    /// `v(e)` for every declared edge; `positions` has one row per vertex.
    pub fn edge_vectors(&self, positions: &[Vec<f64>], basis: &Mat<f64>) -> Vec<Vec<f64>> {
        let g = &self.graph;
        g.forward_dedges()
            .map(|e| {
                let v = linalg::sub(&positions[g.terminus(e)], &positions[g.origin(e)]);
                match self.cycle_of[e.edge()] {
                    Some(i) => linalg::add(&v, &basis.col(i)),
                    None => v,
                }
            })
            .collect()
    }

    pub fn energy(&self, positions: &[Vec<f64>], basis: &Mat<f64>) -> f64 {
        self.edge_vectors(positions, basis).iter().map(|v| linalg::norm_sq(v)).sum()
    }

    /// Partial derivatives with respect to every position and basis entry.
    pub fn gradient(&self, positions: &[Vec<f64>], basis: &Mat<f64>) -> (Vec<Vec<f64>>, Mat<f64>) {
        let g = &self.graph;
        let mut dp = vec![vec![0.0; self.dim]; g.vertex_count()];
        let mut db = Mat::zeros(self.dim, self.dim);
        for (v, e) in self.edge_vectors(positions, basis).iter().zip(g.forward_dedges()) {
            let (o, t) = (g.origin(e), g.terminus(e));
            for c in 0..self.dim {
                dp[t][c] += 2.0 * v[c];
                dp[o][c] -= 2.0 * v[c];
                if let Some(i) = self.cycle_of[e.edge()] {
                    db[(c, i)] += 2.0 * v[c];
                }
            }
        }
        (dp, db)
    }

    /// Energy-minimizing positions for a fixed basis (all stars balanced).
    pub fn harmonic_positions(&self, basis: &Mat<f64>) -> Vec<Vec<f64>> {
        let g = &self.graph;
        let n = g.vertex_count();
        let mut rhs = vec![vec![0.0; self.dim]; n];
        for e in g.forward_dedges() {
            if let Some(i) = self.cycle_of[e.edge()] {
                let a = basis.col(i);
                rhs[g.origin(e)] = linalg::add(&rhs[g.origin(e)], &a);
                rhs[g.terminus(e)] = linalg::sub(&rhs[g.terminus(e)], &a);
            }
        }
        let mut positions = vec![vec![0.0; self.dim]; n];
        for x in 1..n {
            for y in 1..n {
                let w = self.grounded_inverse[(x - 1, y - 1)];
                positions[x] = linalg::add(&positions[x], &linalg::scale(&rhs[y], &w));
            }
        }
        positions
    }

    /// Energy at harmonic positions after rescaling `basis` to unit covolume.
    pub fn harmonic_energy(&self, basis: &Mat<f64>) -> f64 {
        let b = unit_covolume(basis);
        self.energy(&self.harmonic_positions(&b), &b)
    }

    pub fn block(&self, positions: &[Vec<f64>], basis: &Mat<f64>) -> BuildingBlock<f64> {
        BuildingBlock::new(self.graph.clone(), self.edge_vectors(positions, basis)).expect("consistent sizes")
    }
}

fn unit_covolume(basis: &Mat<f64>) -> Mat<f64> {
    let det = basis.det().abs();
    basis.scale(&det.powf(-1.0 / basis.rows() as f64))
}

/// Largest star-sum norm.
pub fn harmonic_residual(block: &BuildingBlock<f64>) -> f64 {
    (0..block.graph().vertex_count()).map(|x| linalg::norm_sq(&block.star_sum(x)).sqrt()).fold(0.0, f64::max)
}

/// `max |Σ v vᵀ − cI|` with `c` the mean eigenvalue.
pub fn frame_residual(block: &BuildingBlock<f64>) -> f64 {
    let s = block.frame_operator();
    let d = block.dim();
    let c = s.trace() / d as f64;
    s.sub(&Mat::identity(d).scale(&c)).max_abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationState {
    #[serde(skip)]
    pub block: BuildingBlock<f64>,
    pub objective: f64,
    pub harmonic_residual: f64,
    pub frame_residual: f64,
    pub iterations: usize,
    /// Covolume of the period lattice (normalization).
    pub covolume: f64,
}

/// Projected-gradient search for the standard realization.
///
/// Each iteration steps `B` against the energy gradient restricted to the
/// unit-covolume surface, rescales to unit covolume and re-solves for
/// harmonic positions. The step halves whenever the energy goes up by more
/// than rounding.
pub fn standard_realization(graph: &QuotientGraph, tol: f64, max_iter: usize, seed: u64) -> Result<RealizationState> {
    let obj = Objective::new(graph)?;
    let d = obj.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = loop {
        let b = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
        if b.det().abs() > 1e-3 {
            break unit_covolume(&b);
        }
    };
    let mut positions = obj.harmonic_positions(&basis);
    let mut energy = obj.energy(&positions, &basis);
    let mut step = 0.5 / obj.graph().edge_count() as f64;
    let finish = |positions: &[Vec<f64>], basis: &Mat<f64>, iterations: usize| {
        let block = obj.block(positions, basis);
        RealizationState {
            objective: block.energy(),
            harmonic_residual: harmonic_residual(&block),
            frame_residual: frame_residual(&block),
            covolume: basis.det().abs(),
            iterations,
            block,
        }
    };
    for iter in 0..max_iter {
        let state = finish(&positions, &basis, iter);
        if state.harmonic_residual <= tol && state.frame_residual <= tol {
            return Ok(state);
        }
        let (_, grad) = obj.gradient(&positions, &basis);
        let normal = basis.inverse().expect("unit covolume").transpose();
        let along = frobenius(&grad, &normal) / frobenius(&normal, &normal);
        let tangent = grad.sub(&normal.scale(&along));
        loop {
            let trial = unit_covolume(&basis.sub(&tangent.scale(&step)));
            let trial_positions = obj.harmonic_positions(&trial);
            let trial_energy = obj.energy(&trial_positions, &trial);
            // Increases within rounding of the energy do not count.
            if trial_energy <= energy * (1.0 + 8.0 * f64::EPSILON) || step < 1e-300 {
                basis = trial;
                positions = trial_positions;
                energy = trial_energy;
                break;
            }
            step *= 0.5;
        }
    }
    let state = finish(&positions, &basis, max_iter);
    if state.harmonic_residual <= tol && state.frame_residual <= tol {
        return Ok(state);
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        harmonic_residual: state.harmonic_residual,
        frame_residual: state.frame_residual,
    })
}

fn frobenius(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).map(|(i, j)| a[(i, j)] * b[(i, j)]).sum()
}

/// Whether two blocks agree up to scale, an orthogonal map and a
/// relabelling of the quotient graph.
///
/// Both blocks are scaled to unit energy. Graph isomorphisms are searched
/// edge by edge, pruned by the inner products of the vectors assigned so
/// far; a surviving assignment is confirmed by an explicit orthogonal map.
pub fn similar_blocks(b1: &BuildingBlock<f64>, b2: &BuildingBlock<f64>, tol: f64) -> bool {
    let (g1, g2) = (b1.graph(), b2.graph());
    if b1.dim() != b2.dim() || g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let normalize = |b: &BuildingBlock<f64>| {
        let e = b.energy();
        if e > 0.0 { b.scaled(&(1.0 / e.sqrt())) } else { b.clone() }
    };
    let (b1, b2) = (normalize(b1), normalize(b2));
    let mut search = IsoSearch {
        b1: &b1,
        b2: &b2,
        tol,
        vmap: vec![None; g1.vertex_count()],
        vinv: vec![None; g2.vertex_count()],
        used: vec![false; g2.edge_count()],
        images: Vec::new(),
    };
    search.run()
}

struct IsoSearch<'a> {
    b1: &'a BuildingBlock<f64>,
    b2: &'a BuildingBlock<f64>,
    tol: f64,
    vmap: Vec<Option<usize>>,
    vinv: Vec<Option<usize>>,
    used: Vec<bool>,
    /// Image directed edge of each declared edge of the first graph so far.
    images: Vec<DedgeId>,
}

impl IsoSearch<'_> {
    fn bind(&mut self, x: usize, y: usize, bound: &mut Vec<usize>) -> bool {
        match (self.vmap[x], self.vinv[y]) {
            (Some(a), _) => a == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.vmap[x] = Some(y);
                self.vinv[y] = Some(x);
                bound.push(x);
                true
            }
        }
    }

    fn run(&mut self) -> bool {
        let (g1, g2) = (self.b1.graph(), self.b2.graph());
        let k = self.images.len();
        if k == g1.edge_count() {
            return self.confirm();
        }
        let e = DedgeId(2 * k);
        let v = self.b1.vector(e).to_vec();
        for f in g2.dedges() {
            if self.used[f.edge()] {
                continue;
            }
            let w = self.b2.vector(f);
            let consistent = (0..k).all(|j| {
                let a = linalg::dot(&v, self.b1.vector(DedgeId(2 * j)));
                let b = linalg::dot(w, self.b2.vector(self.images[j]));
                (a - b).abs() <= self.tol
            }) && (linalg::norm_sq(&v) - linalg::norm_sq(w)).abs() <= self.tol;
            if !consistent {
                continue;
            }
            let mut bound = Vec::new();
            if self.bind(g1.origin(e), g2.origin(f), &mut bound) && self.bind(g1.terminus(e), g2.terminus(f), &mut bound) {
                self.used[f.edge()] = true;
                self.images.push(f);
                if self.run() {
                    return true;
                }
                self.images.pop();
                self.used[f.edge()] = false;
            }
            for x in bound {
                let y = self.vmap[x].take().expect("bound vertex");
                self.vinv[y] = None;
            }
        }
        false
    }

    fn confirm(&self) -> bool {
        let d = self.b1.dim();
        let src: Vec<Vec<f64>> = self.b1.forward_vectors();
        let dst: Vec<Vec<f64>> = self.images.iter().map(|&f| self.b2.vector(f).to_vec()).collect();
        let mut frame = Vec::new();
        for i in 0..src.len() {
            let mut cols: Vec<Vec<f64>> = frame.iter().map(|&j: &usize| src[j].clone()).collect();
            cols.push(src[i].clone());
            if Mat::from_rows(&cols).rank() == cols.len() {
                frame.push(i);
            }
            if frame.len() == d {
                break;
            }
        }
        if frame.len() < d {
            return false;
        }
        let fs = Mat::from_columns(&frame.iter().map(|&i| src[i].clone()).collect::<Vec<_>>());
        let fd = Mat::from_columns(&frame.iter().map(|&i| dst[i].clone()).collect::<Vec<_>>());
        let Some(inv) = fs.inverse() else { return false };
        let q = fd.mul(&inv);
        let qtq = q.transpose().mul(&q).sub(&Mat::identity(d)).max_abs();
        qtq <= self.tol.max(1e-9) && src.iter().zip(&dst).all(|(s, t)| {
            linalg::sub(&q.mul_vec(s), t).iter().all(|c| c.abs() <= self.tol)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{diamond_block, dipole_graph, honeycomb_block, k4_graph, laves_block};

    #[test]
    fn builtin_energies() {
        assert_eq!(laves_block().to_f64().energy(), 12.0);
        assert_eq!(diamond_block().to_f64().energy(), 12.0);
        let scaled = laves_block().to_f64().scaled(&3.0);
        assert!((scaled.energy() - 108.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let obj = Objective::new(&k4_graph()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let positions: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let basis = Mat::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let (dp, db) = obj.gradient(&positions, &basis);
        let h = 1e-6;
        for i in 0..3 {
            for j in 0..3 {
                let (mut plus, mut minus) = (basis.clone(), basis.clone());
                plus[(i, j)] += h;
                minus[(i, j)] -= h;
                let fd = (obj.energy(&positions, &plus) - obj.energy(&positions, &minus)) / (2.0 * h);
                assert!((fd - db[(i, j)]).abs() <= 1e-6 * fd.abs().max(1.0));
            }
        }
        for x in 0..4 {
            for c in 0..3 {
                let (mut plus, mut minus) = (positions.clone(), positions.clone());
                plus[x][c] += h;
                minus[x][c] -= h;
                let fd = (obj.energy(&plus, &basis) - obj.energy(&minus, &basis)) / (2.0 * h);
                assert!((fd - dp[x][c]).abs() <= 1e-6 * fd.abs().max(1.0));
            }
        }
    }

    #[test]
    fn k4_gives_laves() {
        let s = standard_realization(&k4_graph(), DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_SEED).unwrap();
        assert!(s.harmonic_residual <= 1e-9 && s.frame_residual <= 1e-9);
        assert!((s.covolume - 1.0).abs() < 1e-9);
        assert!(similar_blocks(&s.block, &laves_block().to_f64(), 1e-6));
        assert!(!similar_blocks(&s.block, &diamond_block().to_f64(), 1e-6));
    }

    #[test]
    fn dipole_and_theta() {
        let s = standard_realization(&dipole_graph(4), DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_SEED).unwrap();
        assert!(similar_blocks(&s.block, &diamond_block().to_f64(), 1e-6));
        let s = standard_realization(&dipole_graph(3), DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_SEED).unwrap();
        assert!(similar_blocks(&s.block, &honeycomb_block(), 1e-6));
        let v = s.block.forward_vectors();
        for i in 0..3 {
            for j in i + 1..3 {
                let cos = linalg::dot(&v[i], &v[j]) / (linalg::norm_sq(&v[i]) * linalg::norm_sq(&v[j])).sqrt();
                assert!((cos + 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = standard_realization(&k4_graph(), DEFAULT_TOL, DEFAULT_MAX_ITER, 3).unwrap();
        let b = standard_realization(&k4_graph(), DEFAULT_TOL, DEFAULT_MAX_ITER, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_convergence_reports_residuals() {
        let err = standard_realization(&k4_graph(), 1e-10, 1, 0).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 1, .. }));
    }

    #[test]
    fn similarity_cases() {
        let laves = laves_block().to_f64();
        let c = (0.3f64).cos();
        let s = (0.3f64).sin();
        let rot = Mat::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!(similar_blocks(&laves, &laves.transformed(&rot).scaled(&2.5), 1e-9));
        let mirror = Mat::from_rows(&[vec![-1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!(similar_blocks(&laves, &laves.transformed(&mirror), 1e-9));
        assert!(!similar_blocks(&laves, &diamond_block().to_f64(), 1e-9));
        let bent = laves.with_edge_vector(DedgeId(0), vec![-1.0, -1.0, 0.2]).unwrap();
        assert!(!similar_blocks(&laves, &bent, 1e-6));
    }
}
