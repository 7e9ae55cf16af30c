//! Prepare-select-unprepare on a joint ancilla and system register, exact amplitudes.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;
use serde::Serialize;

use super::{norm, CreationPlan, DenseEvolution, HaagRuelleError, Propagator};
use crate::pauli::LcuDecomposition;
use crate::Complex64;

/// Everything an LCU run of a plan needs: register operators per site, the register evolution
/// and the initial state.
#[derive(Clone, Copy)]
pub struct LcuSetup<'a> {
    pub plan: &'a CreationPlan,
    pub ops: &'a BTreeMap<usize, LcuDecomposition<f64>>,
    pub evolution: &'a DenseEvolution,
    pub initial: &'a [Complex64],
}

/// Weighted branch states `V_j|ψ>` of the select step, `c_j = |c_j| e^{iφ_j}`, `V_j = e^{iφ_j} U_j`.
#[derive(Clone, Debug)]
pub struct Branches {
    pub weights: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub width: usize,
}

#[derive(Clone, Debug)]
pub struct Postselection {
    /// System block of the ancilla outcome `|0>`.
    pub block: Vec<Complex64>,
    pub probability: f64,
    pub alpha: f64,
    pub ancilla_qubits: usize,
    /// `|Σ_j ‖A_j‖^2 - ‖ψ‖^2|` for the joint state after select.
    pub unitarity_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LcuSimulation {
    #[serde(skip)]
    pub state: Vec<Complex64>,
    pub probability: f64,
    /// `Σ_j |c_j|` of the expanded LCU.
    pub alpha: f64,
    pub branches: usize,
    pub ancilla_qubits: usize,
    pub system_qubits: usize,
    pub unitarity_defect: f64,
}

fn ancilla_qubits(m: usize) -> usize {
    m.next_power_of_two().trailing_zeros() as usize
}

/// Post-selected block of `P^† · SELECT · (P ⊗ 1)`, where `P|0> = Σ_j √(w_j/α)|j>` is a Householder
/// reflection and `branch(j)` returns `V_j|ψ>`. Branches are streamed, so memory stays at the
/// system dimension.
pub fn ancilla_postselect<F>(weights: &[f64], dim: usize, mut branch: F) -> Result<Postselection, HaagRuelleError>
where
    F: FnMut(usize) -> Vec<Complex64>,
{
    if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(HaagRuelleError::InvalidInput("LCU weights must be finite and non-negative".into()));
    }
    let alpha: f64 = weights.iter().sum();
    if !(alpha > 0.0) {
        return Err(HaagRuelleError::InvalidInput("all LCU weights vanish".into()));
    }
    let s: Vec<f64> = weights.iter().map(|w| (w / alpha).sqrt()).collect();
    // u = e_0 - s; the reflection is the identity when s = e_0
    let u0 = 1.0 - s[0];
    let uu = 2.0 * u0;
    let zero = Complex::new(0.0, 0.0);
    let mut a0 = vec![zero; dim];
    let mut proj = vec![zero; dim];
    let mut total = 0.0;
    let mut input = 0.0;
    for (j, &sj) in s.iter().enumerate() {
        let v = branch(j);
        if v.len() != dim {
            return Err(HaagRuelleError::InvalidInput(format!("branch state of length {}, expected {dim}", v.len())));
        }
        let nv = norm(&v);
        if j == 0 {
            input = nv * nv;
        }
        total += sj * sj * nv * nv;
        let uj = if j == 0 { u0 } else { -sj };
        for i in 0..dim {
            let a = v[i] * sj;
            if j == 0 {
                a0[i] = a;
            }
            proj[i] += a * uj;
        }
    }
    let block: Vec<Complex64> = if uu.abs() < 1e-300 { a0 } else { a0.iter().zip(&proj).map(|(a, p)| a - p * (2.0 * u0 / uu)).collect() };
    let probability = block.iter().map(|z| z.norm_sqr()).sum();
    Ok(Postselection { block, probability, alpha, ancilla_qubits: ancilla_qubits(weights.len()), unitarity_defect: (total - input).abs() })
}

/// All select branches of a plan: one per (plan term, LCU term), unitary `e^{iHt} U_q e^{-iHt}`.
pub fn lcu_branches(setup: &LcuSetup) -> Result<Branches, HaagRuelleError> {
    let dim = setup.evolution.dim();
    if setup.initial.len() != dim || !dim.is_power_of_two() {
        return Err(HaagRuelleError::InvalidInput(format!("initial state of length {} on {dim} register states", setup.initial.len())));
    }
    let width = dim.trailing_zeros() as usize;
    let mut weights = Vec::new();
    let mut states = Vec::new();
    let mut back: HashMap<u64, Vec<Complex64>> = HashMap::new();
    for term in &setup.plan.terms {
        let lcu = setup.ops.get(&term.site).ok_or_else(|| HaagRuelleError::InvalidInput(format!("no LCU at site {}", term.site)))?;
        if lcu.width() != width {
            return Err(HaagRuelleError::InvalidInput(format!("LCU width {} on a {width}-qubit register", lcu.width())));
        }
        let psi = back.entry(term.time.to_bits()).or_insert_with(|| setup.evolution.evolve(setup.initial, term.time));
        for q in lcu.terms() {
            let c = term.coefficient * q.coefficient;
            if c.norm() == 0.0 {
                continue;
            }
            let phase = c / c.norm();
            let mut v = vec![Complex::new(0.0, 0.0); dim];
            for (b, &amp) in psi.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let (r, ph) = q.unitary.act(b as u64);
                v[r as usize] += amp * ph * phase;
            }
            weights.push(c.norm());
            states.push(setup.evolution.evolve(&v, -term.time));
        }
    }
    Ok(Branches { weights, states, width })
}

/// Ancilla simulation of one plan; `width_cap` bounds ancilla plus system qubits.
pub fn lcu_simulate(setup: &LcuSetup, width_cap: usize) -> Result<LcuSimulation, HaagRuelleError> {
    let br = lcu_branches(setup)?;
    let total = ancilla_qubits(br.weights.len()) + br.width;
    if total > width_cap {
        return Err(HaagRuelleError::WidthOverflow { width: total, cap: width_cap });
    }
    let dim = 1usize << br.width;
    let post = ancilla_postselect(&br.weights, dim, |j| br.states[j].clone())?;
    Ok(finish(post, br.weights.len(), br.width))
}

fn finish(post: Postselection, branches: usize, system_qubits: usize) -> LcuSimulation {
    LcuSimulation {
        state: post.block,
        probability: post.probability,
        alpha: post.alpha,
        branches,
        ancilla_qubits: post.ancilla_qubits,
        system_qubits,
        unitarity_defect: post.unitarity_defect,
    }
}

/// Two plans on decoupled registers `A ⊗ B` (`H = H_A ⊗ 1 + 1 ⊗ H_B`), run as one LCU over the
/// joint index `(j, l)`. System index is `i_A + dim_A i_B`.
pub fn lcu_simulate_product(a: &LcuSetup, b: &LcuSetup, width_cap: usize) -> Result<LcuSimulation, HaagRuelleError> {
    let ba = lcu_branches(a)?;
    let bb = lcu_branches(b)?;
    let m = ba.weights.len() * bb.weights.len();
    let width = ba.width + bb.width;
    let total = ancilla_qubits(m) + width;
    if total > width_cap {
        return Err(HaagRuelleError::WidthOverflow { width: total, cap: width_cap });
    }
    let na = ba.weights.len();
    let weights: Vec<f64> = bb.weights.iter().flat_map(|wb| ba.weights.iter().map(move |wa| wa * wb)).collect();
    let post = ancilla_postselect(&weights, 1usize << width, |j| {
        let (va, vb) = (&ba.states[j % na], &bb.states[j / na]);
        vb.iter().flat_map(|y| va.iter().map(move |x| x * y)).collect()
    })?;
    Ok(finish(post, m, width))
}
