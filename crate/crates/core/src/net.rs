//! Unfolding a building block into a finite window of the periodic net.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::block::{laves_block, BuildingBlock};
use crate::error::{Error, Result};
use crate::graph::{DedgeId, HomologyBasis, QuotientGraph};
use crate::lattice::{bcc_parity, Lattice};
use crate::linalg;
use crate::scalar::{parse_number, Rational, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

/// Base positions of the quotient vertices and the cell offset carried by
/// every directed edge.
///
/// Vertex `x` in cell `c` sits at `base[x] + B·c`; the directed edge `e`
/// joins `(o(e), c)` to `(t(e), c + offset(e))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unfolding<S> {
    pub base: Vec<Vec<S>>,
    pub offsets: Vec<Vec<i64>>,
}

impl<S: Scalar> Unfolding<S> {
    pub fn new(block: &BuildingBlock<S>, lattice: &Lattice<S>) -> Result<Self> {
        let g = block.graph();
        let tree = g.spanning_tree();
        let mut base = vec![vec![S::zero(); block.dim()]; g.vertex_count()];
        for &x in &tree.order {
            if let Some(e) = tree.parent[x] {
                base[x] = linalg::add(&base[g.origin(e)], block.vector(e));
            }
        }
        let offsets = g
            .dedges()
            .map(|e| {
                let gap = linalg::sub(&linalg::add(&base[g.origin(e)], block.vector(e)), &base[g.terminus(e)]);
                lattice.integer_coordinates(&gap).ok_or_else(|| {
                    Error::NonPeriodic(format!("edge {} does not close up modulo the lattice", g.dedge_name(e)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Unfolding { base, offsets })
    }

    pub fn offset(&self, e: DedgeId) -> &[i64] {
        &self.offsets[e.0]
    }
}

/// Integer cell bounds `lo[i] ≤ c_i ≤ hi[i]`; empty when any `lo > hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    /// `[−n, n]^d`.
    pub fn cube(d: usize, n: i64) -> Self {
        Window { lo: vec![-n; d], hi: vec![n; d] }
    }

    pub fn empty(d: usize) -> Self {
        Window { lo: vec![0; d], hi: vec![-1; d] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, cell: &[i64]) -> bool {
        cell.iter().zip(self.lo.iter().zip(&self.hi)).all(|(c, (l, h))| l <= c && c <= h)
    }

    /// Cells in lexicographic order.
    pub fn cells(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out.into_iter().flat_map(|p| (*l..=*h).map(move |c| [p.clone(), vec![c]].concat())).collect();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetVertex<S> {
    /// Quotient vertex index.
    pub class: usize,
    pub cell: Vec<i64>,
    pub position: Vec<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    /// Declared (forward) edge carrying vertex `i` to vertex `j`.
    pub dedge: DedgeId,
}

/// The part of a periodic net whose cells lie in a window.
#[derive(Clone, Debug, PartialEq)]
pub struct CrystalNet<S: Scalar> {
    pub block: BuildingBlock<S>,
    pub lattice: Lattice<S>,
    pub unfolding: Unfolding<S>,
    /// Sorted by `(class, cell)`.
    pub vertices: Vec<NetVertex<S>>,
    /// Sorted.
    pub bonds: Vec<Bond>,
    pub window: Window,
    /// Rigid translation applied to every position.
    pub origin_shift: Vec<S>,
}

/// Unfolds `block` over the cells of `window`.
///
/// Breadth-first from the first quotient vertex in cell 0 at the origin:
/// each traversed edge adds its vector and advances the cell by its offset.
/// The walk never leaves the window; classes unreachable inside it are
/// seeded from their base position.
pub fn build_net<S: Scalar>(block: &BuildingBlock<S>, h: &HomologyBasis, window: &Window) -> Result<CrystalNet<S>> {
    let lattice = block.period_lattice(h)?;
    let unfolding = Unfolding::new(block, &lattice)?;
    let d = block.dim();
    if window.dim() != d {
        return Err(Error::Dimension { expected: d, got: window.dim() });
    }
    if !window.is_empty() && !window.contains(&vec![0; d]) {
        return Err(Error::InvalidArgument("window must contain cell 0".into()));
    }
    let g = block.graph();
    let mut found: HashMap<(usize, Vec<i64>), Vec<S>> = HashMap::new();
    let mut seeds: Vec<(usize, Vec<i64>)> = Vec::new();
    for cell in window.cells() {
        for x in 0..g.vertex_count() {
            seeds.push((x, cell.clone()));
        }
    }
    let mut queue = VecDeque::new();
    let origin = (0usize, vec![0i64; d]);
    for seed in std::iter::once(origin).filter(|_| !window.is_empty()).chain(seeds) {
        if found.contains_key(&seed) {
            continue;
        }
        let pos = linalg::add(&unfolding.base[seed.0], &lattice.point(&seed.1));
        found.insert(seed.clone(), pos);
        queue.push_back(seed);
        while let Some((x, cell)) = queue.pop_front() {
            let here = found[&(x, cell.clone())].clone();
            for &e in g.star(x) {
                let next_cell: Vec<i64> = cell.iter().zip(unfolding.offset(e)).map(|(a, b)| a + b).collect();
                let key = (g.terminus(e), next_cell);
                if !window.contains(&key.1) || found.contains_key(&key) {
                    continue;
                }
                found.insert(key.clone(), linalg::add(&here, block.vector(e)));
                queue.push_back(key);
            }
        }
    }
    let mut vertices: Vec<NetVertex<S>> =
        found.into_iter().map(|((class, cell), position)| NetVertex { class, cell, position }).collect();
    vertices.sort_by(|a, b| (a.class, &a.cell).cmp(&(b.class, &b.cell)));
    let bonds = collect_bonds(g, &unfolding, &vertices);
    Ok(CrystalNet { block: block.clone(), lattice, unfolding, vertices, bonds, window: window.clone(), origin_shift: vec![S::zero(); d] })
}

fn collect_bonds<S: Scalar>(g: &QuotientGraph, unfolding: &Unfolding<S>, vertices: &[NetVertex<S>]) -> Vec<Bond> {
    let index: HashMap<(usize, &[i64]), usize> =
        vertices.iter().enumerate().map(|(i, v)| ((v.class, v.cell.as_slice()), i)).collect();
    let mut bonds = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        for e in g.forward_dedges().filter(|&e| g.origin(e) == v.class) {
            let cell: Vec<i64> = v.cell.iter().zip(unfolding.offset(e)).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(&(g.terminus(e), cell.as_slice())) {
                bonds.push(Bond { i, j, dedge: e });
            }
        }
    }
    bonds.sort();
    bonds
}

impl<S: Scalar> CrystalNet<S> {
    pub fn dim(&self) -> usize {
        self.block.dim()
    }

    pub fn graph(&self) -> &QuotientGraph {
        self.block.graph()
    }

    /// Index of vertex `(class, cell)` if it lies in the window.
    pub fn vertex_index(&self, class: usize, cell: &[i64]) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| (v.class, v.cell.as_slice()).cmp(&(class, cell)))
            .ok()
    }

    /// Number of bonds at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for b in &self.bonds {
            deg[b.i] += 1;
            deg[b.j] += 1;
        }
        deg
    }

    /// Whether every net neighbour of vertex `i` lies in the window.
    pub fn is_interior(&self, i: usize) -> bool {
        let v = &self.vertices[i];
        self.graph().star(v.class).iter().all(|&e| {
            let cell: Vec<i64> = v.cell.iter().zip(self.unfolding.offset(e)).map(|(a, b)| a + b).collect();
            self.window.contains(&cell)
        })
    }

    /// Geometric vector of a bond.
    pub fn bond_vector(&self, b: &Bond) -> Vec<S> {
        linalg::sub(&self.vertices[b.j].position, &self.vertices[b.i].position)
    }

    /// Copy with every position moved by `shift`.
    pub fn translated(&self, shift: &[S]) -> Self {
        let mut net = self.clone();
        for v in &mut net.vertices {
            v.position = linalg::add(&v.position, shift);
        }
        net.origin_shift = linalg::add(&net.origin_shift, shift);
        net
    }

    pub fn to_xyz(&self) -> String {
        let mut out = format!("# vertices {} bonds {} dim {}\n", self.vertices.len(), self.bonds.len(), self.dim());
        for v in &self.vertices {
            let cell: Vec<String> = v.cell.iter().map(i64::to_string).collect();
            let pos: Vec<String> = v.position.iter().map(Scalar::to_text).collect();
            writeln!(out, "{} {} {}", self.graph().vertex_id(v.class), cell.join(" "), pos.join(" ")).unwrap();
        }
        for b in &self.bonds {
            writeln!(out, "bond {} {}", b.i, b.j).unwrap();
        }
        out
    }

    /// Wavefront OBJ with line elements; planar nets get `z = 0`.
    pub fn to_obj(&self) -> String {
        let mut out = format!("# vertices {} bonds {}\n", self.vertices.len(), self.bonds.len());
        for v in &self.vertices {
            let mut pos: Vec<String> = v.position.iter().map(|x| x.to_f64()).map(|x| crate::scalar::fmt_sig(x, 12)).collect();
            pos.resize(pos.len().max(3), "0".to_string());
            writeln!(out, "v {}", pos.join(" ")).unwrap();
        }
        for b in &self.bonds {
            writeln!(out, "l {} {}", b.i + 1, b.j + 1).unwrap();
        }
        out
    }

    pub fn to_record(&self) -> NetRecord {
        let g = self.graph();
        NetRecord {
            schema_version: SCHEMA_VERSION,
            dim: self.dim(),
            exact: S::EXACT,
            block: self.block.to_qg(),
            lattice: self.lattice.basis_vectors().iter().map(|v| text_vec(v)).collect(),
            window: self.window.clone(),
            origin_shift: text_vec(&self.origin_shift),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexRecord { class: g.vertex_id(v.class).to_string(), cell: v.cell.clone(), position: text_vec(&v.position) })
                .collect(),
            bonds: self.bonds.iter().map(|b| BondRecord { i: b.i, j: b.j, edge: g.dedge_name(b.dedge) }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("plain data serializes")
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Xyz => self.to_xyz(),
            ExportFormat::Obj => self.to_obj(),
            ExportFormat::Json => self.to_json() + "\n",
        }
    }

    /// Rebuilds a net from its JSON dump.
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: NetRecord = serde_json::from_str(text)?;
        let block = match crate::graph::QuotientGraph::parse(&rec.block)?.block()? {
            crate::block::AnyBlock::Exact(b) if S::EXACT => convert_block::<Rational, S>(&b)?,
            crate::block::AnyBlock::Float(b) if !S::EXACT => convert_block::<f64, S>(&b)?,
            _ => return Err(Error::InvalidArgument("number mode of the dump does not match".into())),
        };
        let lattice = Lattice::from_vectors(&rec.lattice.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>()?)?;
        let unfolding = Unfolding::new(&block, &lattice)?;
        let g = block.graph();
        let vertices = rec
            .vertices
            .iter()
            .map(|v| {
                let class = g
                    .vertex_index(&v.class)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex class '{}'", v.class)))?;
                Ok(NetVertex { class, cell: v.cell.clone(), position: parse_vec(&v.position)? })
            })
            .collect::<Result<Vec<_>>>()?;
        let bonds = rec
            .bonds
            .iter()
            .map(|b| {
                let dedge = g
                    .dedge_by_name(&b.edge)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown edge '{}'", b.edge)))?;
                Ok(Bond { i: b.i, j: b.j, dedge })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CrystalNet { block, lattice, unfolding, vertices, bonds, window: rec.window, origin_shift: parse_vec(&rec.origin_shift)? })
    }
}

fn convert_block<T: Scalar, S: Scalar>(b: &BuildingBlock<T>) -> Result<BuildingBlock<S>> {
    let fwd = b
        .forward_vectors()
        .iter()
        .map(|v| v.iter().map(|x| parse_scalar::<S>(&x.to_text())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    BuildingBlock::new(b.graph().clone(), fwd)
}

fn text_vec<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::to_text).collect()
}

fn parse_scalar<S: Scalar>(t: &str) -> Result<S> {
    let n = parse_number(t).map_err(|message| Error::Parse { line: 0, message })?;
    S::from_number(&n).ok_or_else(|| Error::Parse { line: 0, message: format!("'{t}' is not exact") })
}

fn parse_vec<S: Scalar>(v: &[String]) -> Result<Vec<S>> {
    v.iter().map(|t| parse_scalar(t)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Xyz,
    Obj,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyz" => Ok(ExportFormat::Xyz),
            "obj" => Ok(ExportFormat::Obj),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetRecord {
    pub schema_version: u32,
    pub dim: usize,
    pub exact: bool,
    /// Building block in QG text form.
    pub block: String,
    pub lattice: Vec<Vec<String>>,
    pub window: Window,
    pub origin_shift: Vec<String>,
    pub vertices: Vec<VertexRecord>,
    pub bonds: Vec<BondRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub class: String,
    pub cell: Vec<i64>,
    pub position: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondRecord {
    pub i: usize,
    pub j: usize,
    pub edge: String,
}

/// Representatives `p_0 = 0, p_1, p_2, p_3` of the four vertex classes of
/// the laves net modulo `2L_DT`.
pub fn laves_class_offsets() -> [[i64; 3]; 4] {
    [[0, 0, 0], [0, 1, 1], [1, 0, -1], [-1, -1, 0]]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Vertex count per class `V_0 … V_3`.
    pub counts: Vec<usize>,
    /// Classes whose positions all lie in `p_i + 2L_DT`.
    pub class_ok: Vec<bool>,
    pub pass: bool,
}

fn require_laves(net: &CrystalNet<Rational>) -> Result<()> {
    let reference = laves_block();
    if net.block.graph() != reference.graph() || net.block.forward_vectors() != reference.forward_vectors() {
        return Err(Error::WrongBlock("expected the laves building block".into()));
    }
    Ok(())
}

/// `(pos − p)/2` as an integer vector lying in `L_DT`.
fn in_shifted_2ldt(pos: &[Rational], p: &[i64; 3]) -> Option<[i64; 3]> {
    let mut a = [0i64; 3];
    for k in 0..3 {
        a[k] = ((pos[k].clone() - Rational::from_integer(p[k].into())) / Rational::from_integer(2.into())).as_integer()?;
    }
    bcc_parity(&a).then_some(a)
}

/// Checks `V = V_0 ∪ V_1 ∪ V_2 ∪ V_3` with `V_0 = 2L_DT` and `V_i = p_i + 2L_DT`,
/// the classes being the vertices `A, B, C, D` of `K_4`.
pub fn decompose_vertices(net: &CrystalNet<Rational>) -> Result<Decomposition> {
    require_laves(net)?;
    let p = laves_class_offsets();
    let mut counts = vec![0; 4];
    let mut class_ok = vec![true; 4];
    for v in &net.vertices {
        counts[v.class] += 1;
        if in_shifted_2ldt(&v.position, &p[v.class]).is_none() {
            class_ok[v.class] = false;
        }
    }
    let cells = net.window.cells().len();
    let pass = class_ok.iter().all(|&ok| ok) && counts.iter().all(|&c| c == cells);
    Ok(Decomposition { counts, class_ok, pass })
}

/// Offset `r` with `β = α + r` in the incidence rule joining
/// `p_i + α ∈ V_i` to `p_j + β ∈ V_j`; `None` for pairs never joined.
fn incidence_offset(i: usize, j: usize) -> Option<[i64; 3]> {
    let neg = |r: [i64; 3]| [-r[0], -r[1], -r[2]];
    match (i, j) {
        (0, 1..=3) | (1..=3, 0) => Some([0, 0, 0]),
        (1, 2) => Some([-2, 2, 2]),
        (2, 3) => Some([2, 2, -2]),
        (3, 1) => Some([-2, -2, -2]),
        (2, 1) => Some(neg([-2, 2, 2])),
        (3, 2) => Some(neg([2, 2, -2])),
        (1, 3) => Some(neg([-2, -2, -2])),
        _ => None,
    }
}

/// Verifies both directions of the four incidence rules on the window:
/// every pair predicted by a rule is bonded and every bond is predicted.
pub fn check_incidence_rules(net: &CrystalNet<Rational>) -> bool {
    if require_laves(net).is_err() {
        return false;
    }
    let p = laves_class_offsets();
    let mut by_position: HashMap<Vec<Rational>, usize> = HashMap::new();
    for (k, v) in net.vertices.iter().enumerate() {
        by_position.insert(v.position.clone(), k);
    }
    let mut predicted: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (k, v) in net.vertices.iter().enumerate() {
        let Some(alpha) = in_shifted_2ldt(&v.position, &p[v.class]).map(|a| a.map(|x| 2 * x)) else {
            return false;
        };
        for j in 0..4 {
            let Some(r) = incidence_offset(v.class, j) else { continue };
            let target: Vec<Rational> =
                (0..3).map(|c| Rational::from_integer((p[j][c] + alpha[c] + r[c]).into())).collect();
            if let Some(&w) = by_position.get(&target) {
                predicted.insert((k.min(w), k.max(w)));
            }
        }
    }
    let actual: BTreeSet<(usize, usize)> = net.bonds.iter().map(|b| (b.i.min(b.j), b.i.max(b.j))).collect();
    actual.len() == net.bonds.len() && actual == predicted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{cubic_block, diamond_block, honeycomb_block};
    use crate::scalar::ratio;

    fn laves(n: i64) -> CrystalNet<Rational> {
        let b = laves_block();
        build_net(&b, &b.graph().homology_basis(), &Window::cube(3, n)).unwrap()
    }

    #[test]
    fn degrees_in_window() {
        let net = laves(1);
        let deg = net.degrees();
        assert!(deg.iter().all(|&d| d <= 3));
        assert!((0..net.vertices.len()).filter(|&i| net.is_interior(i)).all(|i| deg[i] == 3));
        assert!((0..net.vertices.len()).any(|i| net.is_interior(i)));

        let b = diamond_block();
        let net = build_net(&b, &b.graph().homology_basis(), &Window::cube(3, 1)).unwrap();
        let deg = net.degrees();
        assert!((0..net.vertices.len()).filter(|&i| net.is_interior(i)).all(|i| deg[i] == 4));
    }

    #[test]
    fn vertex_count_matches_direct_product() {
        let net = laves(1);
        let mut oracle = Vec::new();
        for x in 0..4 {
            for a in -1..=1 {
                for b in -1..=1 {
                    for c in -1..=1 {
                        oracle.push((x, vec![a, b, c]));
                    }
                }
            }
        }
        let got: Vec<(usize, Vec<i64>)> = net.vertices.iter().map(|v| (v.class, v.cell.clone())).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn positions_and_bonds_consistent() {
        let net = laves(1);
        for v in &net.vertices {
            let want = linalg::add(&net.unfolding.base[v.class], &net.lattice.point(&v.cell));
            assert_eq!(v.position, want);
        }
        for b in &net.bonds {
            assert_eq!(net.bond_vector(b), net.block.vector(b.dedge).to_vec());
        }
    }

    #[test]
    fn loops_unfold() {
        let b = cubic_block();
        let net = build_net(&b, &b.graph().homology_basis(), &Window::cube(3, 1)).unwrap();
        assert_eq!(net.vertices.len(), 27);
        assert_eq!(net.bonds.len(), 3 * 2 * 9);
    }

    #[test]
    fn planar_float_net() {
        let b = honeycomb_block();
        let net = build_net(&b, &b.graph().homology_basis(), &Window::cube(2, 2)).unwrap();
        assert_eq!(net.vertices.len(), 50);
        assert!(net.to_obj().lines().filter(|l| l.starts_with("v ")).all(|l| l.split(' ').count() == 4));
    }

    #[test]
    fn window_must_hold_origin() {
        let b = laves_block();
        let w = Window { lo: vec![1, 1, 1], hi: vec![2, 2, 2] };
        assert!(build_net(&b, &b.graph().homology_basis(), &w).is_err());
    }

    #[test]
    fn decomposition() {
        let net = laves(2);
        let d = decompose_vertices(&net).unwrap();
        assert!(d.pass);
        assert_eq!(d.counts, vec![125; 4]);
        let shifted = net.translated(&[ratio(1, 1), ratio(0, 1), ratio(0, 1)]);
        assert!(!decompose_vertices(&shifted).unwrap().pass);
        let b = diamond_block();
        let dn = build_net(&b, &b.graph().homology_basis(), &Window::cube(3, 0)).unwrap();
        assert!(matches!(decompose_vertices(&dn), Err(Error::WrongBlock(_))));
    }

    #[test]
    fn incidence_rules() {
        let net = laves(2);
        assert!(check_incidence_rules(&net));
        let mut missing = net.clone();
        missing.bonds.remove(7);
        assert!(!check_incidence_rules(&missing));
        let mut spurious = net.clone();
        let b1 = spurious.vertex_index(1, &[0, 0, 0]).unwrap();
        let b3 = spurious.vertex_index(3, &[0, 0, 0]).unwrap();
        spurious.bonds.push(Bond { i: b1, j: b3, dedge: DedgeId(10) });
        assert!(!check_incidence_rules(&spurious));
    }

    #[test]
    fn exports() {
        let net = laves(1);
        let xyz = net.to_xyz();
        assert_eq!(xyz.lines().count(), 1 + net.vertices.len() + net.bonds.len());
        let b = laves_block();
        let empty = build_net(&b, &b.graph().homology_basis(), &Window::empty(3)).unwrap();
        assert_eq!(empty.to_xyz().lines().count(), 1);
        assert_eq!(empty.to_obj().lines().count(), 1);
        let back = CrystalNet::<Rational>::from_json(&net.to_json()).unwrap();
        assert_eq!(back, net);
        assert_eq!(laves(1).to_json(), net.to_json());
    }
}
