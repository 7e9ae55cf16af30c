use std::collections::VecDeque;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::EncodingError;
use crate::pauli::{OperatorSum, PauliString, PauliTerm, MAX_WIDTH};

/// Oriented edge `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GseEdge {
    pub tail: usize,
    pub head: usize,
}

impl GseEdge {
    fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

/// Walk on the multigraph: a start vertex and the sequence of traversed edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Walk {
    pub fn empty(start: usize) -> Self {
        Self { start, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Visited vertices, `len() + 1` entries.
    pub fn vertices(&self, g: &GseGraph) -> Result<Vec<usize>, EncodingError> {
        let mut v = vec![self.start];
        let mut cur = self.start;
        for &e in &self.edges {
            let edge = g.edges.get(e).ok_or(EncodingError::MissingEdge(e))?;
            if edge.tail != cur && edge.head != cur {
                return Err(EncodingError::BrokenWalk(format!("edge {e} does not touch vertex {cur}")));
            }
            cur = edge.other(cur);
            v.push(cur);
        }
        Ok(v)
    }

    pub fn is_closed(&self, g: &GseGraph) -> Result<bool, EncodingError> {
        Ok(*self.vertices(g)?.last().unwrap() == self.start)
    }

    pub fn reversed(&self, g: &GseGraph) -> Result<Walk, EncodingError> {
        let v = self.vertices(g)?;
        Ok(Walk { start: *v.last().unwrap(), edges: self.edges.iter().rev().copied().collect() })
    }

    pub fn concat(&self, other: &Walk) -> Walk {
        let mut edges = self.edges.clone();
        edges.extend(&other.edges);
        Walk { start: self.start, edges }
    }

    pub fn uses(&self, edge: usize) -> usize {
        self.edges.iter().filter(|&&e| e == edge).count()
    }
}

/// On-disk form of a [`GseGraph`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GseGraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub slots: Option<Vec<Vec<usize>>>,
    /// `[edge id, S]`.
    #[serde(default)]
    pub root: Option<[usize; 2]>,
}

/// Even-degree connected multigraph carrying one fermion mode per vertex and `d(I)/2` qubits
/// per vertex. Qubits are allocated vertex by vertex in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct GseGraph {
    vertices: usize,
    edges: Vec<GseEdge>,
    slots: Vec<Vec<usize>>,
    slot_of: Vec<[usize; 2]>,
    offsets: Vec<usize>,
    width: usize,
    root: usize,
    root_from: usize,
    paths: Vec<Walk>,
}

impl GseGraph {
    /// Slots follow edge-id order at each vertex; the root is the lexicographically smallest edge.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, EncodingError> {
        let mut slots = vec![Vec::new(); vertices];
        for (id, &(t, h)) in edges.iter().enumerate() {
            if t >= vertices || h >= vertices {
                return Err(EncodingError::Graph(format!("edge {id} has an endpoint out of range")));
            }
            slots[t].push(id);
            slots[h].push(id);
        }
        let root = (0..edges.len())
            .min_by_key(|&e| {
                let (t, h) = edges[e];
                (t.min(h), t.max(h), e)
            })
            .ok_or_else(|| EncodingError::Graph("no edges".into()))?;
        let from = edges[root].0.min(edges[root].1);
        Self::build(vertices, edges.into_iter().map(|(tail, head)| GseEdge { tail, head }).collect(), slots, root, from)
    }

    pub fn with_slots(&self, slots: Vec<Vec<usize>>) -> Result<Self, EncodingError> {
        Self::build(self.vertices, self.edges.clone(), slots, self.root, self.root_from)
    }

    pub fn with_root(&self, edge: usize, from: usize) -> Result<Self, EncodingError> {
        Self::build(self.vertices, self.edges.clone(), self.slots.clone(), edge, from)
    }

    /// Same graph with the root edge reversed, which negates `Ã_ST`.
    pub fn flipped_root(&self) -> Self {
        let mut g = self.clone();
        let e = &mut g.edges[self.root];
        std::mem::swap(&mut e.tail, &mut e.head);
        g
    }

    pub fn from_file(f: &GseGraphFile) -> Result<Self, EncodingError> {
        let mut g = Self::new(f.vertices, f.edges.iter().map(|e| (e[0], e[1])).collect())?;
        if let Some(s) = &f.slots {
            g = g.with_slots(s.clone())?;
        }
        if let Some([e, s]) = f.root {
            g = g.with_root(e, s)?;
        }
        Ok(g)
    }

    pub fn to_file(&self) -> GseGraphFile {
        GseGraphFile {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| [e.tail, e.head]).collect(),
            slots: Some(self.slots.clone()),
            root: Some([self.root, self.root_from]),
        }
    }

    fn build(vertices: usize, edges: Vec<GseEdge>, slots: Vec<Vec<usize>>, root: usize, root_from: usize) -> Result<Self, EncodingError> {
        if slots.len() != vertices {
            return Err(EncodingError::Graph("slot table size differs from vertex count".into()));
        }
        let mut slot_of = vec![[usize::MAX; 2]; edges.len()];
        for (v, list) in slots.iter().enumerate() {
            if list.is_empty() || list.len() % 2 != 0 {
                return Err(EncodingError::Graph(format!("vertex {v} has odd or zero degree {}", list.len())));
            }
            for (i, &e) in list.iter().enumerate() {
                let edge = edges.get(e).ok_or(EncodingError::MissingEdge(e))?;
                if edge.tail == edge.head {
                    return Err(EncodingError::Graph(format!("edge {e} is a self-loop")));
                }
                let end = if edge.tail == v {
                    0
                } else if edge.head == v {
                    1
                } else {
                    return Err(EncodingError::Graph(format!("slot list of vertex {v} names edge {e} not incident to it")));
                };
                if slot_of[e][end] != usize::MAX {
                    return Err(EncodingError::Graph(format!("edge {e} listed twice at vertex {v}")));
                }
                slot_of[e][end] = i;
            }
        }
        if slot_of.iter().any(|s| s[0] == usize::MAX || s[1] == usize::MAX) {
            return Err(EncodingError::Graph("slot table misses an edge end".into()));
        }
        let mut offsets = Vec::with_capacity(vertices);
        let mut width = 0;
        for list in &slots {
            offsets.push(width);
            width += list.len() / 2;
        }
        if width > MAX_WIDTH {
            return Err(EncodingError::Graph(format!("{width} qubits exceed {MAX_WIDTH}")));
        }
        let r = edges.get(root).ok_or(EncodingError::MissingEdge(root))?;
        if r.tail != root_from && r.head != root_from {
            return Err(EncodingError::Graph("root vertex is not an end of the root edge".into()));
        }
        let mut g = Self { vertices, edges, slots, slot_of, offsets, width, root, root_from, paths: Vec::new() };
        if g.bfs(0, None).iter().any(|p| p.is_none()) {
            return Err(EncodingError::Graph("graph is not connected".into()));
        }
        g.paths = g
            .bfs(root_from, Some(root))
            .into_iter()
            .map(|p| p.ok_or_else(|| EncodingError::Graph("root edge is a bridge".into())))
            .collect::<Result<_, _>>()?;
        Ok(g)
    }

    /// Adjacency of `v` as `(neighbour, edge)` in ascending order.
    fn adjacency(&self, v: usize, skip: Option<usize>) -> Vec<(usize, usize)> {
        let mut a: Vec<(usize, usize)> =
            self.slots[v].iter().filter(|&&e| Some(e) != skip).map(|&e| (self.edges[e].other(v), e)).collect();
        a.sort_unstable();
        a
    }

    /// Shortest walks from `s` to every vertex, ties broken by ascending (neighbour, edge).
    fn bfs(&self, s: usize, skip: Option<usize>) -> Vec<Option<Walk>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (w, e) in self.adjacency(v, skip) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        (0..self.vertices)
            .map(|t| {
                if !seen[t] {
                    return None;
                }
                let mut edges = Vec::new();
                let mut cur = t;
                while let Some((p, e)) = parent[cur] {
                    edges.push(e);
                    cur = p;
                }
                edges.reverse();
                Some(Walk { start: s, edges })
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[GseEdge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.slots[v].len()
    }

    pub fn slots(&self, v: usize) -> &[usize] {
        &self.slots[v]
    }

    /// Total qubit count, equal to the number of edges.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn qubits_of(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v] + self.slots[v].len() / 2
    }

    /// `(edge id, S)`.
    pub fn root(&self) -> (usize, usize) {
        (self.root, self.root_from)
    }

    /// `ζ_SI`.
    pub fn path(&self, v: usize) -> &Walk {
        &self.paths[v]
    }

    /// Ids of the edges joining `i` and `j`, ascending.
    pub fn edges_between(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let x = self.edges[e];
                (x.tail == i && x.head == j) || (x.tail == j && x.head == i)
            })
            .collect()
    }

    fn slot_at(&self, e: usize, v: usize) -> usize {
        if self.edges[e].tail == v {
            self.slot_of[e][0]
        } else {
            self.slot_of[e][1]
        }
    }

    /// `γ_{v,slot}` (0-based slot): `Z...Z X` for even slots and `Z...Z Y` for odd ones,
    /// on the vertex's own qubits.
    pub fn local_majorana(&self, v: usize, slot: usize) -> Result<PauliTerm<f64>, EncodingError> {
        if v >= self.vertices || slot >= self.degree(v) {
            return Err(EncodingError::OutOfRange { site: v, color: slot });
        }
        let o = self.offsets[v];
        let k = slot / 2;
        let z = ((1u64 << k) - 1) << o;
        let x = 1u64 << (o + k);
        let s = if slot.is_multiple_of(2) { PauliString::from_masks(self.width, x, z)? } else { PauliString::from_masks(self.width, x, z | x)? };
        Ok(PauliTerm::new(Complex::new(1.0, 0.0), s))
    }

    /// `Ã_IJ` for edge `e` traversed starting at `from`.
    pub fn edge_op(&self, e: usize, from: usize) -> Result<PauliTerm<f64>, EncodingError> {
        let edge = *self.edges.get(e).ok_or(EncodingError::MissingEdge(e))?;
        if edge.tail != from && edge.head != from {
            return Err(EncodingError::BrokenWalk(format!("edge {e} does not touch vertex {from}")));
        }
        let to = edge.other(from);
        let eps = if from == edge.tail { 1.0 } else { -1.0 };
        let a = self.local_majorana(from, self.slot_at(e, from))?;
        let b = self.local_majorana(to, self.slot_at(e, to))?;
        Ok(a.multiply(&b)?.scale(Complex::new(eps, 0.0)))
    }

    /// `B̃_I = (-i)^{d/2} γ_{I1}...γ_{Id}`.
    pub fn vertex_op(&self, v: usize) -> Result<PauliTerm<f64>, EncodingError> {
        let d = self.degree(v);
        let mut t = PauliTerm::identity(self.width)?;
        for s in 0..d {
            t = t.multiply(&self.local_majorana(v, s)?)?;
        }
        Ok(t.multiply(&PauliTerm::new(crate::scalar::i_pow::<f64>((3 * (d / 2) % 4) as u8), PauliString::identity(self.width)?))?)
    }

    /// `i^s Ã_{ζ1ζ2}...Ã_{ζsζs+1}` along any walk with `s` edges; for a closed walk this is `Ã(ζ)`
    /// and for an open one it is the path operator entering `γ̂`.
    pub fn walk_op(&self, w: &Walk) -> Result<PauliTerm<f64>, EncodingError> {
        let vs = w.vertices(self)?;
        let mut t = PauliTerm::identity(self.width)?;
        for (i, &e) in w.edges.iter().enumerate() {
            t = t.multiply(&self.edge_op(e, vs[i])?)?;
        }
        let ph = PauliTerm::new(crate::scalar::i_pow::<f64>((w.len() % 4) as u8), PauliString::identity(self.width)?);
        Ok(t.multiply(&ph)?)
    }

    /// `Ã(ζ)` for a closed walk.
    pub fn loop_op(&self, w: &Walk) -> Result<PauliTerm<f64>, EncodingError> {
        if !w.is_closed(self)? {
            return Err(EncodingError::BrokenWalk("walk does not return to its start".into()));
        }
        self.walk_op(w)
    }

    /// `γ̂_I^+` (`plus`) or `γ̂_I^-`.
    pub fn odd_majorana(&self, v: usize, plus: bool) -> Result<PauliTerm<f64>, EncodingError> {
        if v >= self.vertices {
            return Err(EncodingError::OutOfRange { site: v, color: 0 });
        }
        let g = self.local_majorana(self.root_from, self.slot_at(self.root, self.root_from))?;
        let t = g.multiply(&self.walk_op(&self.paths[v])?)?;
        if plus {
            Ok(t)
        } else {
            Ok(t.multiply(&self.vertex_op(v)?)?.scale(Complex::new(0.0, 1.0)))
        }
    }

    /// `a_I = (γ̂^+ + i γ̂^-)/2`.
    pub fn lower(&self, v: usize) -> Result<OperatorSum<f64>, EncodingError> {
        let p = self.odd_majorana(v, true)?.scale(Complex::new(0.5, 0.0));
        let m = self.odd_majorana(v, false)?.scale(Complex::new(0.0, 0.5));
        Ok(OperatorSum::from_terms(self.width, vec![p, m])?)
    }

    pub fn raise(&self, v: usize) -> Result<OperatorSum<f64>, EncodingError> {
        Ok(self.lower(v)?.adjoint())
    }

    /// Eulerian cycle from vertex 0 (Hierholzer).
    pub fn eulerian_cycle(&self) -> Walk {
        let mut used = vec![false; self.edges.len()];
        let mut next = vec![0usize; self.vertices];
        let adj: Vec<Vec<(usize, usize)>> = (0..self.vertices).map(|v| self.adjacency(v, None)).collect();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
        let mut circuit: Vec<Option<usize>> = Vec::new();
        while let Some(&(v, _)) = stack.last() {
            let mut advanced = false;
            while next[v] < adj[v].len() {
                let (w, e) = adj[v][next[v]];
                next[v] += 1;
                if !used[e] {
                    used[e] = true;
                    stack.push((w, Some(e)));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                let (_, e) = stack.pop().unwrap();
                circuit.push(e);
            }
        }
        Walk { start: 0, edges: circuit.into_iter().rev().flatten().collect() }
    }

    /// Sign `s` with `Π_I B̃_I = s Ã(η)`; `+1` means the stabilized space is the even sector.
    pub fn parity_sign(&self) -> Result<i8, EncodingError> {
        let mut prod = PauliTerm::identity(self.width)?;
        for v in 0..self.vertices {
            prod = prod.multiply(&self.vertex_op(v)?)?;
        }
        let eta = self.loop_op(&self.eulerian_cycle())?;
        if prod.string() != eta.string() {
            return Err(EncodingError::Graph("vertex product and Eulerian loop differ as strings".into()));
        }
        let r = prod.coefficient() / eta.coefficient();
        Ok(if r.re > 0.0 { 1 } else { -1 })
    }

    /// `Π_g (1 + Ã(g))/2` over the fundamental-cycle generators.
    pub fn stabilizer_projector(&self) -> Result<OperatorSum<f64>, EncodingError> {
        let id = OperatorSum::identity(self.width)?;
        let mut p = id.clone();
        for c in fundamental_cycles(self) {
            let a = OperatorSum::from_term(self.loop_op(&c)?);
            p = p.mul(&id.add(&a)?.scale_real(0.5))?;
        }
        Ok(p)
    }
}

/// Independent loops `E - N + 1` from a breadth-first spanning tree rooted at vertex 0.
pub fn fundamental_cycles(g: &GseGraph) -> Vec<Walk> {
    let tree = g.bfs(0, None);
    let mut in_tree = vec![false; g.edges.len()];
    for w in tree.iter().flatten() {
        if let Some(&e) = w.edges.last() {
            in_tree[e] = true;
        }
    }
    let mut out = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let pu = tree[edge.tail].as_ref().unwrap();
        let pv = tree[edge.head].as_ref().unwrap();
        // common prefix of both root paths is the walk to the lowest common ancestor
        let k = pu.edges.iter().zip(&pv.edges).take_while(|(a, b)| a == b).count();
        let lca = pu.vertices(g).unwrap()[k];
        let up = Walk { start: lca, edges: pu.edges[k..].to_vec() };
        let down = Walk { start: lca, edges: pv.edges[k..].to_vec() };
        let mut cycle = up.concat(&Walk { start: edge.tail, edges: vec![e] });
        cycle = cycle.concat(&down.reversed(g).unwrap());
        out.push(cycle);
    }
    out
}

/// Encoding graph for `n_colors` modes per site on a lattice of shape `dims`: a cycle through all
/// modes in site-major, colour-minor order plus, for every direction after the first, periodic
/// cycles through colour 0 of each line. Colour 0 then carries `d` qubits and the others one.
pub fn hypercubic_preset(n_colors: usize, dims: &[usize]) -> Result<GseGraph, EncodingError> {
    if n_colors == 0 || dims.is_empty() || dims.contains(&0) {
        return Err(EncodingError::Graph("empty lattice".into()));
    }
    if dims[1..].iter().any(|&l| l < 2) {
        return Err(EncodingError::Graph("directions beyond the first need length at least 2".into()));
    }
    let sites: usize = dims.iter().product();
    let modes = sites * n_colors;
    if modes < 2 {
        return Err(EncodingError::Graph("need at least two modes".into()));
    }
    let mode = |s: usize, c: usize| s * n_colors + c;
    let mut edges: Vec<(usize, usize)> = (0..modes).map(|m| (m, (m + 1) % modes)).collect();
    // slot order: snake-next, snake-prev, then +mu, -mu for each extra direction
    let mut slots: Vec<Vec<usize>> = (0..modes).map(|m| vec![m, (m + modes - 1) % modes]).collect();
    let mut stride = 1;
    let strides: Vec<usize> = dims
        .iter()
        .map(|&l| {
            let s = stride;
            stride *= l;
            s
        })
        .collect();
    for mu in 1..dims.len() {
        let mut plus = vec![usize::MAX; sites];
        let mut minus = vec![usize::MAX; sites];
        for s in 0..sites {
            let coord = (s / strides[mu]) % dims[mu];
            let t = if coord + 1 == dims[mu] { s - coord * strides[mu] } else { s + strides[mu] };
            plus[s] = edges.len();
            minus[t] = edges.len();
            edges.push((mode(s, 0), mode(t, 0)));
        }
        for s in 0..sites {
            slots[mode(s, 0)].push(plus[s]);
            slots[mode(s, 0)].push(minus[s]);
        }
    }
    GseGraph::new(modes, edges)?.with_slots(slots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_vertex_op_is_z() {
        let g = GseGraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let b = g.vertex_op(0).unwrap();
        assert_eq!(b.string().to_string(), "ZI");
        assert_eq!(b.coefficient(), Complex::new(1.0, 0.0));
    }

    #[test]
    fn reversal_negates_edge_op() {
        let g = GseGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let a = g.edge_op(0, 0).unwrap();
        let b = g.edge_op(0, 1).unwrap();
        assert_eq!(a.string(), b.string());
        assert_eq!(a.coefficient(), -b.coefficient());
    }

    #[test]
    fn doubled_edge_loop_is_identity_on_stabilized_space() {
        let g = GseGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let l = OperatorSum::from_term(g.loop_op(&Walk { start: 0, edges: vec![0, 1] }).unwrap());
        let p = g.stabilizer_projector().unwrap();
        assert!(l.mul(&p).unwrap().sub(&p).unwrap().prune(1e-15).is_empty());
    }

    #[test]
    fn preset_qubit_counts() {
        let g = hypercubic_preset(3, &[2, 2]).unwrap();
        for s in 0..4 {
            let q: usize = (0..3).map(|c| g.qubits_of(s * 3 + c).len()).sum();
            assert_eq!(q, 3 + 2 - 1);
        }
        let g1 = hypercubic_preset(3, &[4]).unwrap();
        assert!((0..12).all(|v| g1.qubits_of(v).len() == 1));
    }

    #[test]
    fn json_round_trip() {
        let g = hypercubic_preset(2, &[2, 3]).unwrap();
        let s = serde_json::to_string(&g.to_file()).unwrap();
        let back = GseGraph::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(g, back);
    }
}
