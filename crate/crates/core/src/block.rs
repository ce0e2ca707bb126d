//! Building blocks: ℝ^d-valued 1-cochains on a quotient graph, the
//! homology map `v̂`, and the period lattice they generate.

use crate::error::{Error, Result};
use crate::graph::{write_qg, CyclePath, DedgeId, GraphFile, HomologyBasis, QuotientGraph};
use crate::lattice::Lattice;
use crate::linalg::{self, Mat};
use crate::scalar::{ratio, Number, Rational, Scalar};

/// Assignment of a vector `v(e)` to every directed edge with `v(ē) = −v(e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildingBlock<S> {
    graph: QuotientGraph,
    dim: usize,
    /// Indexed by directed edge.
    vectors: Vec<Vec<S>>,
}

impl<S: Scalar> BuildingBlock<S> {
    /// Builds a block from one vector per declared edge (graph edge order).
    pub fn new(graph: QuotientGraph, forward: Vec<Vec<S>>) -> Result<Self> {
        if forward.len() != graph.edge_count() {
            return Err(Error::Dimension { expected: graph.edge_count(), got: forward.len() });
        }
        let dim = forward.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidArgument("building block needs at least one edge vector".into()));
        }
        if let Some(v) = forward.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension { expected: dim, got: v.len() });
        }
        let mut vectors = Vec::with_capacity(2 * forward.len());
        for v in forward {
            let inv = linalg::neg(&v);
            vectors.push(v);
            vectors.push(inv);
        }
        Ok(BuildingBlock { graph, dim, vectors })
    }

    pub fn graph(&self) -> &QuotientGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    pub fn vector(&self, e: DedgeId) -> &[S] {
        &self.vectors[e.0]
    }

    /// `E_x = v(E_x)` for vertex `x`, in star order.
    pub fn star_vectors(&self, x: usize) -> Vec<Vec<S>> {
        self.graph.star(x).iter().map(|&e| self.vectors[e.0].clone()).collect()
    }

    /// Vectors of declared edges, one per undirected edge.
    pub fn forward_vectors(&self) -> Vec<Vec<S>> {
        self.graph.forward_dedges().map(|e| self.vectors[e.0].clone()).collect()
    }

    /// `v̂` of a closed path: the sum of its edge vectors.
    pub fn hat_v(&self, path: &CyclePath) -> Result<Vec<S>> {
        if !path.is_closed(&self.graph) {
            return Err(Error::NonClosedPath);
        }
        Ok(self.path_sum(path.edges()))
    }

    /// Sum of edge vectors along any sequence of directed edges.
    pub fn path_sum(&self, edges: &[DedgeId]) -> Vec<S> {
        edges.iter().fold(vec![S::zero(); self.dim], |acc, e| linalg::add(&acc, &self.vectors[e.0]))
    }

    /// Lattice spanned by `v̂([c_1]), …, v̂([c_d])`.
    pub fn period_lattice(&self, h: &HomologyBasis) -> Result<Lattice<S>> {
        if h.rank() != self.dim {
            return Err(Error::NonPeriodic(format!(
                "first Betti number {} differs from dimension {}",
                h.rank(),
                self.dim
            )));
        }
        let images = h.cycles().iter().map(|c| self.hat_v(c)).collect::<Result<Vec<_>>>()?;
        Lattice::from_vectors(&images)
            .map_err(|_| Error::NonPeriodic("images of the homology basis are linearly dependent".into()))
    }

    /// Period lattice from the default fundamental-cycle basis.
    pub fn default_period_lattice(&self) -> Result<Lattice<S>> {
        self.period_lattice(&self.graph.homology_basis())
    }

    /// Every star sums to zero.
    pub fn is_harmonic(&self) -> bool {
        (0..self.graph.vertex_count()).all(|x| linalg::is_zero_vec(&self.star_sum(x)))
    }

    pub fn star_sum(&self, x: usize) -> Vec<S> {
        self.path_sum(self.graph.star(x))
    }

    /// `Σ ‖v(e)‖²` over undirected edges.
    pub fn energy(&self) -> S {
        self.forward_vectors().iter().fold(S::zero(), |acc, v| acc + linalg::norm_sq(v))
    }

    /// Frame operator `Σ v(e) v(e)ᵀ` over undirected edges.
    pub fn frame_operator(&self) -> Mat<S> {
        let d = self.dim;
        let mut s: Mat<S> = Mat::zeros(d, d);
        for v in self.forward_vectors() {
            for i in 0..d {
                for j in 0..d {
                    s[(i, j)] = s[(i, j)].clone() + v[i].clone() * v[j].clone();
                }
            }
        }
        s
    }

    /// Applies a linear map to every edge vector.
    pub fn transformed(&self, m: &Mat<S>) -> Self {
        BuildingBlock {
            graph: self.graph.clone(),
            dim: m.rows(),
            vectors: self.vectors.iter().map(|v| m.mul_vec(v)).collect(),
        }
    }

    pub fn scaled(&self, s: &S) -> Self {
        BuildingBlock {
            graph: self.graph.clone(),
            dim: self.dim,
            vectors: self.vectors.iter().map(|v| linalg::scale(v, s)).collect(),
        }
    }

    /// Replaces one declared edge's vector (its inverse follows).
    pub fn with_edge_vector(&self, e: DedgeId, v: Vec<S>) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: v.len() });
        }
        let mut out = self.clone();
        out.vectors[e.inverse().0] = linalg::neg(&v);
        out.vectors[e.0] = v;
        Ok(out)
    }

    pub fn to_f64(&self) -> BuildingBlock<f64> {
        BuildingBlock {
            graph: self.graph.clone(),
            dim: self.dim,
            vectors: self.vectors.iter().map(|v| linalg::to_f64_vec(v)).collect(),
        }
    }

    /// QG text with `v=` annotations; floats use 12 significant digits.
    pub fn to_qg(&self) -> String {
        let fwd = self.forward_vectors();
        let text = |k: usize| {
            fwd[k]
                .iter()
                .map(|x| x.to_text())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write_qg(&self.graph, Some(self.dim), Some(&text))
    }
}

/// A block read from text, exact when every component is rational syntax.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyBlock {
    Exact(BuildingBlock<Rational>),
    Float(BuildingBlock<f64>),
}

impl AnyBlock {
    pub fn graph(&self) -> &QuotientGraph {
        match self {
            AnyBlock::Exact(b) => b.graph(),
            AnyBlock::Float(b) => b.graph(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyBlock::Exact(b) => b.dim(),
            AnyBlock::Float(b) => b.dim(),
        }
    }

    pub fn to_f64(&self) -> BuildingBlock<f64> {
        match self {
            AnyBlock::Exact(b) => b.to_f64(),
            AnyBlock::Float(b) => b.clone(),
        }
    }

    pub fn to_qg(&self) -> String {
        match self {
            AnyBlock::Exact(b) => b.to_qg(),
            AnyBlock::Float(b) => b.to_qg(),
        }
    }
}

impl GraphFile {
    /// The building block described by the `v=` annotations.
    pub fn block(&self) -> Result<AnyBlock> {
        let vectors = self
            .vectors
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("graph has no 'v=' annotations".into()))?;
        let exact = vectors.iter().flatten().all(|x| matches!(x, Number::Exact(_)));
        if exact {
            let fwd = vectors
                .iter()
                .map(|v| v.iter().map(|x| if let Number::Exact(q) = x { q.clone() } else { unreachable!() }).collect())
                .collect();
            Ok(AnyBlock::Exact(BuildingBlock::new(self.graph.clone(), fwd)?))
        } else {
            let fwd = vectors.iter().map(|v| v.iter().map(Number::to_f64).collect()).collect();
            Ok(AnyBlock::Float(BuildingBlock::new(self.graph.clone(), fwd)?))
        }
    }
}

/// Names accepted by [`builtin_block`].
pub const BUILTIN_NAMES: [&str; 4] = ["laves", "diamond", "honeycomb", "cubic"];

fn qvecs(rows: &[[i64; 3]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect()
}

fn edges(list: &[(&str, &str, &str)]) -> Vec<(String, String, String)> {
    list.iter().map(|(e, a, b)| (e.to_string(), a.to_string(), b.to_string())).collect()
}

/// `K_4` with the labelling used by the diamond-twin block: `e1, e2, e3`
/// leave `A` for `D, B, C`; `f1: B→C`, `f2: C→D`, `f3: D→B`.
pub fn k4_graph() -> QuotientGraph {
    QuotientGraph::new(
        ["A", "B", "C", "D"],
        edges(&[
            ("e1", "A", "D"),
            ("e2", "A", "B"),
            ("e3", "A", "C"),
            ("f1", "B", "C"),
            ("f2", "C", "D"),
            ("f3", "D", "B"),
        ]),
    )
    .expect("static graph")
}

/// Two vertices joined by `n` parallel edges `e1..en` from `A` to `B`.
pub fn dipole_graph(n: usize) -> QuotientGraph {
    let list: Vec<(String, String, String)> =
        (1..=n).map(|i| (format!("e{i}"), "A".to_string(), "B".to_string())).collect();
    QuotientGraph::new(["A", "B"], list).expect("static graph")
}

/// One vertex with `n` loops `e1..en`.
pub fn bouquet_graph(n: usize) -> QuotientGraph {
    let list: Vec<(String, String, String)> =
        (1..=n).map(|i| (format!("e{i}"), "O".to_string(), "O".to_string())).collect();
    QuotientGraph::new(["O"], list).expect("static graph")
}

/// Diamond-twin (Laves graph) block on `K_4`.
pub fn laves_block() -> BuildingBlock<Rational> {
    BuildingBlock::new(
        k4_graph(),
        qvecs(&[[-1, -1, 0], [0, 1, 1], [1, 0, -1], [-1, 1, 0], [0, 1, -1], [-1, 0, -1]]),
    )
    .expect("static block")
}

/// Diamond block on the dipole graph with four edges.
pub fn diamond_block() -> BuildingBlock<Rational> {
    BuildingBlock::new(dipole_graph(4), qvecs(&[[-1, 1, 1], [1, -1, 1], [-1, -1, -1], [1, 1, -1]]))
        .expect("static block")
}

/// Primitive cubic net: three loops carrying the standard basis.
pub fn cubic_block() -> BuildingBlock<Rational> {
    BuildingBlock::new(bouquet_graph(3), qvecs(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).expect("static block")
}

/// Honeycomb on the theta graph: (1,0), (−1/2, √3/2), (−1/2, −√3/2).
pub fn honeycomb_block() -> BuildingBlock<f64> {
    let h = 3f64.sqrt() / 2.0;
    BuildingBlock::new(dipole_graph(3), vec![vec![1.0, 0.0], vec![-0.5, h], vec![-0.5, -h]]).expect("static block")
}

pub fn builtin_block(name: &str) -> Result<AnyBlock> {
    match name {
        "laves" => Ok(AnyBlock::Exact(laves_block())),
        "diamond" => Ok(AnyBlock::Exact(diamond_block())),
        "cubic" => Ok(AnyBlock::Exact(cubic_block())),
        "honeycomb" => Ok(AnyBlock::Float(honeycomb_block())),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// `E_DT`: the union of the laves stars (12 vectors).
pub fn laves_edge_union() -> Vec<Vec<Rational>> {
    let b = laves_block();
    (0..4).flat_map(|x| b.star_vectors(x)).collect()
}

/// `E_D`: the union of the diamond stars (8 vectors).
pub fn diamond_edge_union() -> Vec<Vec<Rational>> {
    let b = diamond_block();
    (0..2).flat_map(|x| b.star_vectors(x)).collect()
}

/// Normals `a, b, c, d` of the planes carrying `E_A … E_D` of the laves block.
pub fn laves_plane_normals() -> Vec<Vec<Rational>> {
    qvecs(&[[1, -1, 1], [1, 1, -1], [-1, -1, -1], [-1, 1, 1]])
}

/// Cosine of the angle between two vectors, as `⟨a,b⟩² / (‖a‖²‖b‖²)` with sign.
pub fn signed_cos_sq<S: Scalar>(a: &[S], b: &[S]) -> S {
    let ab = linalg::dot(a, b);
    let sign = if ab < S::zero() { -S::one() } else { S::one() };
    sign * ab.clone() * ab / (linalg::norm_sq(a) * linalg::norm_sq(b))
}
