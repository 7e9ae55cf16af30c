//! Operator-identity checks of the superfast encoding on a single graph.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use super::{fundamental_cycles, EncodingError, GseGraph};
use crate::pauli::{OperatorSum, PauliTerm};

#[derive(Clone, Debug, Serialize)]
pub struct GseCheck {
    pub vertices: usize,
    pub edges: usize,
    pub qubits: usize,
    /// Relations tested among vertex, edge and loop operators.
    pub even_relations: usize,
    pub even_failures: usize,
    /// `max ‖(Ã(ζ) - 1) P‖_1` over the fundamental loops.
    pub loop_defect: f64,
    pub projector_defect: f64,
    pub stabilized_dimension: f64,
    pub expected_dimension: f64,
    /// `max ‖{γ̂_a, γ̂_b} - 2δ_ab‖_1`.
    pub car_defect: f64,
    /// `max ‖(Â_IJ - Ã_IJ) P‖_1`.
    pub edge_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn defect(a: &OperatorSum<f64>, b: &OperatorSum<f64>) -> Result<f64, EncodingError> {
    Ok(a.sub(b)?.one_norm())
}

fn one(t: PauliTerm<f64>) -> OperatorSum<f64> {
    OperatorSum::from_term(t)
}

fn squares_to_one(t: &PauliTerm<f64>) -> Result<bool, EncodingError> {
    let sq = t.multiply(t)?;
    Ok(sq.string().is_identity() && (sq.coefficient() - Complex::new(1.0, 0.0)).norm() == 0.0)
}

fn hermitian(t: &PauliTerm<f64>) -> bool {
    t.adjoint().coefficient() == t.coefficient()
}

pub fn check_gse(g: &GseGraph, tolerance: f64) -> Result<GseCheck, EncodingError> {
    let n = g.vertex_count();
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.tail, e.head)).collect();
    let mut tested = 0;
    let mut failed = 0;
    let mut record = |ok: bool| {
        tested += 1;
        failed += usize::from(!ok);
    };
    let b: Vec<PauliTerm<f64>> = (0..n).map(|v| g.vertex_op(v)).collect::<Result<_, _>>()?;
    let a: Vec<PauliTerm<f64>> = ends.iter().enumerate().map(|(e, &(i, _))| g.edge_op(e, i)).collect::<Result<_, _>>()?;
    for (v, bv) in b.iter().enumerate() {
        record(squares_to_one(bv)?);
        record(hermitian(bv));
        for bw in &b[v + 1..] {
            record(bv.commutes_with(bw));
        }
    }
    for (e, &(i, j)) in ends.iter().enumerate() {
        record(squares_to_one(&a[e])?);
        record(hermitian(&a[e]));
        record(g.edge_op(e, j)?.coefficient() == -a[e].coefficient());
        for (k, bk) in b.iter().enumerate() {
            let flips = usize::from(i == k) + usize::from(j == k);
            record(a[e].commutes_with(bk) == (flips % 2 == 0));
        }
        for (f, &(k, l)) in ends.iter().enumerate().skip(e + 1) {
            let shared = [(i, k), (i, l), (j, k), (j, l)].iter().filter(|(p, q)| p == q).count();
            record(a[e].commutes_with(&a[f]) == (shared % 2 == 0));
        }
    }
    let cycles = fundamental_cycles(g);
    let mut loops = Vec::with_capacity(cycles.len());
    for c in &cycles {
        let l = g.loop_op(c)?;
        record(squares_to_one(&l)?);
        for t in b.iter().chain(&a) {
            record(l.commutes_with(t));
        }
        loops.push(l);
    }

    let p = g.stabilizer_projector()?;
    let projector_defect = defect(&p.mul(&p)?, &p)?;
    let mut loop_defect: f64 = 0.0;
    for l in &loops {
        loop_defect = loop_defect.max(defect(&one(*l).mul(&p)?, &p)?);
    }
    let trace = p.terms().iter().find(|t| t.string().is_identity()).map_or(0.0, |t| t.coefficient().re) * (1u64 << p.width()) as f64;

    let id = OperatorSum::identity(g.width())?;
    let odd: Vec<PauliTerm<f64>> = (0..n).flat_map(|v| [true, false].map(|s| g.odd_majorana(v, s))).collect::<Result<_, _>>()?;
    let mut car_defect: f64 = 0.0;
    for (x, ox) in odd.iter().enumerate() {
        for (y, oy) in odd.iter().enumerate().skip(x) {
            let want = if x == y { id.scale_real(2.0) } else { OperatorSum::zero(g.width()) };
            car_defect = car_defect.max(defect(&one(*ox).anticommutator(&one(*oy))?, &want)?);
        }
    }
    let mut edge_defect: f64 = 0.0;
    for (e, &(i, j)) in ends.iter().enumerate() {
        let hat = g.odd_majorana(i, true)?.multiply(&g.odd_majorana(j, true)?)?.scale(Complex::new(0.0, -1.0));
        edge_defect = edge_defect.max(defect(&one(hat).mul(&p)?, &one(a[e]).mul(&p)?)?);
    }

    let expected_dimension = (1u64 << (n - 1)) as f64;
    let passed = failed == 0
        && [loop_defect, projector_defect, car_defect, edge_defect].iter().all(|d| *d <= tolerance)
        && (trace - expected_dimension).abs() <= tolerance;
    Ok(GseCheck {
        vertices: n,
        edges: ends.len(),
        qubits: g.width(),
        even_relations: tested,
        even_failures: failed,
        loop_defect,
        projector_defect,
        stabilized_dimension: trace,
        expected_dimension,
        car_defect,
        edge_defect,
        tolerance,
        passed,
    })
}

/// Connected even-degree multigraph with at least two vertices: a cycle through all vertices plus
/// extra doubled edges and triangles, each edge oriented at random.
pub fn random_even_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Result<GseGraph, EncodingError> {
    if max_vertices < 2 || max_edges < 2 {
        return Err(EncodingError::Graph(format!("no even graph with at most {max_vertices} vertices and {max_edges} edges")));
    }
    let top = max_vertices.min(max_edges);
    loop {
        let n = rng.gen_range(2..=top);
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        while edges.len() + 2 <= max_edges && rng.gen_bool(0.6) {
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            if x == y {
                continue;
            }
            if n < 3 || rng.gen_bool(0.5) {
                edges.extend([(x, y), (y, x)]);
            } else {
                if edges.len() + 3 > max_edges {
                    break;
                }
                let z = (0..n).find(|&z| z != x && z != y).expect("three vertices");
                edges.extend([(x, y), (y, z), (z, x)]);
            }
        }
        let edges = edges.into_iter().map(|(x, y)| if rng.gen_bool(0.5) { (x, y) } else { (y, x) }).collect();
        if let Ok(g) = GseGraph::new(n, edges) {
            return Ok(g);
        }
    }
}
