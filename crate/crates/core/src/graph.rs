//! Finite quotient multigraphs in the half-edge model.
//!
//! Every declared (undirected) edge `e` yields two directed edges: `e`
//! itself (from → to) and its inverse `~e`. Loops therefore contribute two
//! distinct directed edges to the star of their vertex.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{parse_number, Number, Rational};

/// Index of a directed edge: `2k` is declared edge `k`, `2k + 1` its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DedgeId(pub usize);

impl DedgeId {
    pub fn inverse(self) -> DedgeId {
        DedgeId(self.0 ^ 1)
    }

    pub fn is_forward(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Index of the underlying undirected edge.
    pub fn edge(self) -> usize {
        self.0 / 2
    }

    /// +1 for the declared direction, -1 for the inverse.
    pub fn sign(self) -> i64 {
        if self.is_forward() {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeDecl {
    id: String,
    from: usize,
    to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    vertices: Vec<String>,
    edges: Vec<EdgeDecl>,
    stars: Vec<Vec<DedgeId>>,
}

impl QuotientGraph {
    /// Builds a graph from vertex ids and `(edge id, from, to)` triples.
    ///
    /// Vertices and edges are stored in lexicographic id order.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<(usize, String)> = vertices.into_iter().map(|v| (0, v.into())).collect();
        let edges: Vec<(usize, String, String, String)> =
            edges.into_iter().map(|(id, a, b)| (0, id, a, b)).collect();
        Self::assemble(vertices, edges)
    }

    fn assemble(
        mut vertices: Vec<(usize, String)>,
        mut edges: Vec<(usize, String, String, String)>,
    ) -> Result<Self> {
        let err = |line: usize, message: String| {
            if line == 0 {
                Error::InvalidArgument(message)
            } else {
                Error::Parse { line, message }
            }
        };
        if vertices.is_empty() {
            return Err(err(0, "graph has no vertices".into()));
        }
        vertices.sort_by(|a, b| a.1.cmp(&b.1));
        for w in vertices.windows(2) {
            if w[0].1 == w[1].1 {
                let line = w[0].0.max(w[1].0);
                return Err(err(line, format!("duplicate vertex id '{}'", w[1].1)));
            }
        }
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, (_, v))| (v.as_str(), i)).collect();
        edges.sort_by(|a, b| a.1.cmp(&b.1));
        for w in edges.windows(2) {
            if w[0].1 == w[1].1 {
                let line = w[0].0.max(w[1].0);
                return Err(err(line, format!("duplicate edge id '{}'", w[1].1)));
            }
        }
        let mut decls = Vec::with_capacity(edges.len());
        for (line, id, a, b) in &edges {
            if id.starts_with('~') {
                return Err(err(*line, format!("edge id '{id}' may not start with '~'")));
            }
            let from = *index.get(a.as_str()).ok_or_else(|| err(*line, format!("dangling endpoint '{a}'")))?;
            let to = *index.get(b.as_str()).ok_or_else(|| err(*line, format!("dangling endpoint '{b}'")))?;
            decls.push(EdgeDecl { id: id.clone(), from, to });
        }
        let mut stars = vec![Vec::new(); vertices.len()];
        for (k, e) in decls.iter().enumerate() {
            stars[e.from].push(DedgeId(2 * k));
            stars[e.to].push(DedgeId(2 * k + 1));
        }
        for s in &mut stars {
            s.sort();
        }
        let graph = QuotientGraph {
            vertices: vertices.iter().map(|(_, v)| v.clone()).collect(),
            edges: decls,
            stars,
        };
        let reached = graph.reachable_from(0);
        if let Some(x) = (0..graph.vertex_count()).find(|&x| !reached[x]) {
            return Err(err(vertices[x].0, format!("graph is disconnected: vertex '{}' unreachable", vertices[x].1)));
        }
        Ok(graph)
    }

    fn reachable_from(&self, root: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            for &e in &self.stars[x] {
                let y = self.terminus(e);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dedge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, x: usize) -> &str {
        &self.vertices[x]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_id(&self, k: usize) -> &str {
        &self.edges[k].id
    }

    pub fn dedges(&self) -> impl Iterator<Item = DedgeId> {
        (0..self.dedge_count()).map(DedgeId)
    }

    /// Declared-direction edges, one per undirected edge.
    pub fn forward_dedges(&self) -> impl Iterator<Item = DedgeId> {
        (0..self.edge_count()).map(|k| DedgeId(2 * k))
    }

    pub fn origin(&self, e: DedgeId) -> usize {
        let d = &self.edges[e.edge()];
        if e.is_forward() {
            d.from
        } else {
            d.to
        }
    }

    pub fn terminus(&self, e: DedgeId) -> usize {
        self.origin(e.inverse())
    }

    /// `E_x`: directed edges with origin `x`, in id order.
    pub fn star(&self, x: usize) -> &[DedgeId] {
        &self.stars[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.stars[x].len()
    }

    /// `e1` for a declared edge, `~e1` for its inverse.
    pub fn dedge_name(&self, e: DedgeId) -> String {
        let id = &self.edges[e.edge()].id;
        if e.is_forward() {
            id.clone()
        } else {
            format!("~{id}")
        }
    }

    pub fn dedge_by_name(&self, name: &str) -> Option<DedgeId> {
        let (inverse, id) = match name.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, name),
        };
        let k = self.edges.iter().position(|e| e.id == id)?;
        Some(if inverse { DedgeId(2 * k + 1) } else { DedgeId(2 * k) })
    }

    /// First Betti number `|E|/2 − |V| + 1`.
    pub fn betti_number(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// BFS spanning tree rooted at the lexicographically smallest vertex,
    /// scanning each star in directed-edge order.
    pub fn spanning_tree(&self) -> SpanningTree {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![0];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &e in &self.stars[x] {
                let y = self.terminus(e);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(e);
                    order.push(y);
                }
            }
        }
        let mut in_tree = vec![false; self.edge_count()];
        for e in parent.iter().flatten() {
            in_tree[e.edge()] = true;
        }
        SpanningTree { root: 0, parent, order, in_tree }
    }

    /// Fundamental cycles of [`spanning_tree`](Self::spanning_tree), one per
    /// co-tree edge in id order.
    pub fn homology_basis(&self) -> HomologyBasis {
        let tree = self.spanning_tree();
        let mut cycles = Vec::new();
        let mut cotree = Vec::new();
        for e in self.forward_dedges() {
            if tree.in_tree[e.edge()] {
                continue;
            }
            let to_origin = tree.path_from_root(self, self.origin(e));
            let to_terminus = tree.path_from_root(self, self.terminus(e));
            // Drop the shared prefix so the cycle has no spur.
            let common = to_origin.iter().zip(&to_terminus).take_while(|(a, b)| a == b).count();
            let mut edges: Vec<DedgeId> = to_origin[common..].to_vec();
            edges.push(e);
            edges.extend(to_terminus[common..].iter().rev().map(|d| d.inverse()));
            cycles.push(CyclePath { edges });
            cotree.push(e.edge());
        }
        HomologyBasis { cycles, cotree, tree }
    }

    /// Net traversal count of each undirected edge along `path`.
    pub fn edge_vector(&self, path: &CyclePath) -> Vec<i64> {
        let mut v = vec![0; self.edge_count()];
        for &e in &path.edges {
            v[e.edge()] += e.sign();
        }
        v
    }

    pub fn parse(text: &str) -> Result<GraphFile> {
        parse_qg(text)
    }

    /// Serializes to the QG text format without vector annotations.
    pub fn to_qg(&self) -> String {
        write_qg(self, None, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// Tree edge leading into each vertex (from its parent); `None` at the root.
    pub parent: Vec<Option<DedgeId>>,
    /// BFS visiting order.
    pub order: Vec<usize>,
    in_tree: Vec<bool>,
}

impl SpanningTree {
    pub fn contains_edge(&self, k: usize) -> bool {
        self.in_tree[k]
    }

    /// Tree path from the root to `x`.
    pub fn path_from_root(&self, g: &QuotientGraph, mut x: usize) -> Vec<DedgeId> {
        let mut path = Vec::new();
        while let Some(e) = self.parent[x] {
            path.push(e);
            x = g.origin(e);
        }
        path.reverse();
        path
    }
}

/// A path `(e_1, …, e_n)` with `t(e_i) = o(e_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclePath {
    edges: Vec<DedgeId>,
}

impl CyclePath {
    pub fn new(g: &QuotientGraph, edges: Vec<DedgeId>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.0 >= g.dedge_count()) {
            return Err(Error::InvalidPath(format!("unknown directed edge {}", e.0)));
        }
        for w in edges.windows(2) {
            if g.terminus(w[0]) != g.origin(w[1]) {
                return Err(Error::InvalidPath(format!(
                    "{} does not continue {}",
                    g.dedge_name(w[1]),
                    g.dedge_name(w[0])
                )));
            }
        }
        Ok(CyclePath { edges })
    }

    /// Parses whitespace- or comma-separated edge names (`e1 ~f2 …`).
    pub fn from_names(g: &QuotientGraph, names: &str) -> Result<Self> {
        let edges = names
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|n| g.dedge_by_name(n).ok_or_else(|| Error::InvalidPath(format!("unknown edge '{n}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, edges)
    }

    pub fn edges(&self) -> &[DedgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self, g: &QuotientGraph) -> bool {
        g.terminus(*self.edges.last().unwrap()) == g.origin(self.edges[0])
    }

    pub fn reversed(&self) -> CyclePath {
        CyclePath { edges: self.edges.iter().rev().map(|e| e.inverse()).collect() }
    }

    pub fn concat(&self, g: &QuotientGraph, other: &CyclePath) -> Result<CyclePath> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        CyclePath::new(g, edges)
    }

    pub fn names(&self, g: &QuotientGraph) -> Vec<String> {
        self.edges.iter().map(|&e| g.dedge_name(e)).collect()
    }
}

/// A ℤ-basis of `H_1` given by closed paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    cycles: Vec<CyclePath>,
    /// Co-tree edge used by each fundamental cycle (empty for custom bases).
    cotree: Vec<usize>,
    tree: SpanningTree,
}

impl HomologyBasis {
    /// Accepts user cycles after checking they are closed and form a ℤ-basis
    /// (their co-tree coordinates make a unimodular matrix).
    pub fn from_cycles(g: &QuotientGraph, cycles: Vec<CyclePath>) -> Result<Self> {
        let d = g.betti_number();
        if cycles.len() != d {
            return Err(Error::Dimension { expected: d, got: cycles.len() });
        }
        if cycles.iter().any(|c| !c.is_closed(g)) {
            return Err(Error::NonClosedPath);
        }
        let fundamental = g.homology_basis();
        let coords: Vec<Vec<Rational>> = cycles
            .iter()
            .map(|c| {
                let v = g.edge_vector(c);
                fundamental.cotree.iter().map(|&k| Rational::from_integer(v[k].into())).collect()
            })
            .collect();
        if d > 0 {
            let det = Mat::from_rows(&coords).det();
            if num_traits::Signed::abs(&det) != num_traits::One::one() {
                return Err(Error::InvalidPath(format!(
                    "cycles do not form a Z-basis of H1 (index {det})"
                )));
            }
        }
        Ok(HomologyBasis { cycles, cotree: Vec::new(), tree: fundamental.tree })
    }

    pub fn cycles(&self) -> &[CyclePath] {
        &self.cycles
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn cotree_edges(&self) -> &[usize] {
        &self.cotree
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// `rank × |E|/2` cycle/edge incidence matrix.
    pub fn incidence(&self, g: &QuotientGraph) -> Vec<Vec<i64>> {
        self.cycles.iter().map(|c| g.edge_vector(c)).collect()
    }
}

/// Result of parsing a QG file: the graph plus optional edge vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub graph: QuotientGraph,
    pub dim: Option<usize>,
    /// Vector of each declared edge (in the graph's edge order), if annotated.
    pub vectors: Option<Vec<Vec<Number>>>,
}

fn parse_qg(text: &str) -> Result<GraphFile> {
    let mut dim: Option<usize> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut raw_vectors: Vec<(usize, String, Option<Vec<Number>>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let bad = |message: String| Error::Parse { line, message };
        match tokens[0] {
            "dim" => {
                if tokens.len() != 2 || dim.is_some() {
                    return Err(bad("expected a single 'dim <d>' header".into()));
                }
                let d: usize = tokens[1].parse().map_err(|_| bad(format!("bad dimension '{}'", tokens[1])))?;
                if d == 0 {
                    return Err(bad("dimension must be positive".into()));
                }
                dim = Some(d);
            }
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(bad("expected 'vertex <id>'".into()));
                }
                vertices.push((line, tokens[1].to_string()));
            }
            "edge" => {
                if tokens.len() < 4 {
                    return Err(bad("expected 'edge <id> <from> <to> [v= ...]'".into()));
                }
                let vector = match tokens.get(4) {
                    None => None,
                    Some(&"v=") => {
                        let comps = tokens[5..].iter().map(|t| parse_number(t).map_err(&bad)).collect::<Result<Vec<_>>>()?;
                        if comps.is_empty() {
                            return Err(bad("empty vector after 'v='".into()));
                        }
                        Some(comps)
                    }
                    Some(other) => return Err(bad(format!("unexpected token '{other}'"))),
                };
                edges.push((line, tokens[1].to_string(), tokens[2].to_string(), tokens[3].to_string()));
                raw_vectors.push((line, tokens[1].to_string(), vector));
            }
            other => return Err(bad(format!("unknown directive '{other}'"))),
        }
    }
    let graph = QuotientGraph::assemble(vertices, edges)?;

    let annotated = raw_vectors.iter().filter(|r| r.2.is_some()).count();
    let vectors = if annotated == 0 {
        None
    } else {
        if let Some(r) = raw_vectors.iter().find(|r| r.2.is_none()) {
            return Err(Error::Parse { line: r.0, message: "edge lacks 'v=' while others have it".into() });
        }
        let d = dim.unwrap_or_else(|| raw_vectors[0].2.as_ref().unwrap().len());
        if let Some(r) = raw_vectors.iter().find(|r| r.2.as_ref().unwrap().len() != d) {
            return Err(Error::Parse {
                line: r.0,
                message: format!("vector has {} components, expected {d}", r.2.as_ref().unwrap().len()),
            });
        }
        let mut by_id: HashMap<String, Vec<Number>> =
            raw_vectors.into_iter().map(|(_, id, v)| (id, v.unwrap())).collect();
        Some((0..graph.edge_count()).map(|k| by_id.remove(graph.edge_id(k)).unwrap()).collect())
    };
    let dim = dim.or_else(|| vectors.as_ref().map(|v: &Vec<Vec<Number>>| v[0].len()));
    Ok(GraphFile { graph, dim, vectors })
}

/// Writes a graph in QG format; `vector_text(k)` supplies the `v=` payload
/// for declared edge `k` when present.
pub(crate) fn write_qg(
    g: &QuotientGraph,
    dim: Option<usize>,
    vector_text: Option<&dyn Fn(usize) -> String>,
) -> String {
    let mut out = String::new();
    if let Some(d) = dim {
        out.push_str(&format!("dim {d}\n"));
    }
    for v in &g.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for (k, e) in g.edges.iter().enumerate() {
        out.push_str(&format!("edge {} {} {}", e.id, g.vertices[e.from], g.vertices[e.to]));
        if let Some(f) = vector_text {
            out.push_str(" v= ");
            out.push_str(&f(k));
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for QuotientGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_qg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const K4: &str = "\
# complete graph on four vertices
vertex A
vertex B
vertex C
vertex D
edge e1 A D
edge e2 A B
edge e3 A C
edge f1 B C
edge f2 C D
edge f3 D B
";

    const DIPOLE: &str = "vertex A\nvertex B\nedge e1 A B\nedge e2 A B\nedge e3 A B\nedge e4 A B\n";

    #[test]
    fn parses_k4_and_dipole() {
        let k4 = QuotientGraph::parse(K4).unwrap().graph;
        assert_eq!(k4.vertex_count(), 4);
        assert_eq!(k4.dedge_count(), 12);
        assert_eq!(k4.betti_number(), 3);
        let dip = QuotientGraph::parse(DIPOLE).unwrap().graph;
        assert_eq!((dip.vertex_count(), dip.dedge_count(), dip.betti_number()), (2, 8, 3));
    }

    #[test]
    fn single_loop() {
        let g = QuotientGraph::parse("vertex O\nedge a O O\n").unwrap().graph;
        assert_eq!(g.dedge_count(), 2);
        assert_eq!(g.star(0).len(), 2);
        let h = g.homology_basis();
        assert_eq!(h.rank(), 1);
        assert_eq!(h.cycles()[0].edges(), &[DedgeId(0)]);
    }

    #[test]
    fn tree_has_betti_zero() {
        let text = "vertex a\nvertex b\nvertex c\nvertex d\nvertex e\nedge 1 a b\nedge 2 b c\nedge 3 b d\nedge 4 d e\n";
        let g = QuotientGraph::parse(text).unwrap().graph;
        assert_eq!(g.betti_number(), 0);
        assert!(g.homology_basis().cycles().is_empty());
    }

    #[test]
    fn errors_name_the_line() {
        let dup = "vertex A\nvertex A\n";
        assert!(matches!(QuotientGraph::parse(dup), Err(Error::Parse { line: 2, .. })));
        let dangling = "vertex A\nedge e A Z\n";
        assert!(matches!(QuotientGraph::parse(dangling), Err(Error::Parse { line: 2, .. })));
        let disconnected = "vertex A\nvertex B\nvertex C\nedge e A B\n";
        assert!(matches!(QuotientGraph::parse(disconnected), Err(Error::Parse { line: 3, .. })));
        let dup_edge = "vertex A\nedge e A A\nedge e A A\n";
        assert!(matches!(QuotientGraph::parse(dup_edge), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn involution_invariants() {
        let g = QuotientGraph::parse(K4).unwrap().graph;
        for e in g.dedges() {
            assert_eq!(e.inverse().inverse(), e);
            assert_ne!(e.inverse(), e);
            assert_eq!(g.origin(e.inverse()), g.terminus(e));
        }
    }

    #[test]
    fn k4_fundamental_cycles_are_triangles_through_a() {
        let g = QuotientGraph::parse(K4).unwrap().graph;
        let h = g.homology_basis();
        let names: Vec<Vec<String>> = h.cycles().iter().map(|c| c.names(&g)).collect();
        assert_eq!(names, vec![vec!["e2", "f1", "~e3"], vec!["e3", "f2", "~e1"], vec!["e1", "f3", "~e2"]]);
        // Each cycle uses exactly one co-tree edge.
        for (c, &k) in h.cycles().iter().zip(h.cotree_edges()) {
            let used: Vec<usize> = c.edges().iter().map(|e| e.edge()).filter(|&j| !h.tree().contains_edge(j)).collect();
            assert_eq!(used, vec![k]);
        }
    }

    #[test]
    fn custom_basis_must_be_unimodular() {
        let g = QuotientGraph::parse(DIPOLE).unwrap().graph;
        let listed: Vec<CyclePath> = ["e1 ~e2", "e2 ~e3", "e3 ~e4"]
            .iter()
            .map(|w| CyclePath::from_names(&g, w).unwrap())
            .collect();
        assert!(HomologyBasis::from_cycles(&g, listed).is_ok());
        let doubled: Vec<CyclePath> = ["e1 ~e2 e1 ~e2", "e2 ~e3", "e3 ~e4"]
            .iter()
            .map(|w| CyclePath::from_names(&g, w).unwrap())
            .collect();
        assert!(HomologyBasis::from_cycles(&g, doubled).is_err());
        let open = vec![CyclePath::from_names(&g, "e1").unwrap(); 3];
        assert!(matches!(HomologyBasis::from_cycles(&g, open), Err(Error::NonClosedPath)));
    }

    #[test]
    fn broken_path_rejected() {
        let g = QuotientGraph::parse(K4).unwrap().graph;
        assert!(CyclePath::from_names(&g, "e1 e2").is_err());
        assert!(CyclePath::from_names(&g, "e1 nope").is_err());
    }

    #[test]
    fn serialize_roundtrip() {
        let g = QuotientGraph::parse(K4).unwrap().graph;
        let again = QuotientGraph::parse(&g.to_qg()).unwrap().graph;
        assert_eq!(g, again);
    }
}
