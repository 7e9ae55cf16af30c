//! The discretized creation operator `a†_ψ = Σ_{x,i} 2a δ_t ψ(t_i,x) e^{iHt_i} O(x) e^{-iHt_i}`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use serde::Serialize;

use super::{norm, HaagRuelleError, Propagator, WavePacketProfile};
use crate::lattice::SpectrumTable;
use crate::pauli::SparseMatrix;
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanTerm {
    pub time: f64,
    pub site: usize,
    pub coefficient: Complex64,
}

#[derive(Clone, Debug)]
pub struct CreationPlan {
    pub label: String,
    /// `C` of the interpolator, the same at every site.
    pub c: f64,
    pub terms: Vec<PlanTerm>,
    /// `C Σ |coefficient|`.
    pub alpha: f64,
}

impl CreationPlan {
    pub fn new(label: impl Into<String>, c: f64, terms: Vec<PlanTerm>) -> Self {
        let alpha = c * terms.iter().map(|t| t.coefficient.norm()).sum::<f64>();
        Self { label: label.into(), c, terms, alpha }
    }

    /// Coefficients `2a δ_t ψ(t_i, x)`; exactly vanishing samples are dropped.
    pub fn from_profile(profile: &WavePacketProfile, label: impl Into<String>, c: f64) -> Self {
        let w = 2.0 * profile.spacing * profile.sampling.dt;
        let mut terms = Vec::new();
        for (t, row) in profile.times.iter().zip(&profile.samples) {
            for (&site, &psi) in profile.sites.iter().zip(row) {
                if psi.norm() > 0.0 {
                    terms.push(PlanTerm { time: *t, site, coefficient: psi * w });
                }
            }
        }
        Self::new(label, c, terms)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm()).sum()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::new(self.label.clone(), self.c, self.terms.iter().map(|t| PlanTerm { coefficient: t.coefficient * s, ..*t }).collect())
    }

    pub fn sites(&self) -> BTreeSet<usize> {
        self.terms.iter().map(|t| t.site).collect()
    }

    /// Terms grouped by sample time, in order of first appearance.
    pub(crate) fn by_time(&self) -> Vec<(f64, Vec<&PlanTerm>)> {
        let mut groups: Vec<(f64, Vec<&PlanTerm>)> = Vec::new();
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        for t in &self.terms {
            let i = *index.entry(t.time.to_bits()).or_insert_with(|| {
                groups.push((t.time, Vec::new()));
                groups.len() - 1
            });
            groups[i].1.push(t);
        }
        groups
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Assembly {
    #[serde(skip)]
    pub state: Vec<Complex64>,
    /// `‖a†_ψ|Ω>‖`.
    pub norm: f64,
    pub alpha: f64,
    /// `(norm/α)^2`.
    pub rho: f64,
}

/// Direct evaluation of `a†_ψ|Ω>` with exact evolution; `ops[x]` is `O(x)` on the basis of `prop`.
pub fn assemble<P: Propagator>(plan: &CreationPlan, ops: &BTreeMap<usize, SparseMatrix<f64>>, prop: &P, vacuum: &[Complex64]) -> Result<Assembly, HaagRuelleError> {
    let dim = prop.dim();
    if vacuum.len() != dim {
        return Err(HaagRuelleError::InvalidInput(format!("vacuum of length {} on a {dim}-dimensional space", vacuum.len())));
    }
    if plan.terms.is_empty() || !(plan.alpha > 0.0) {
        return Err(HaagRuelleError::InvalidInput("empty plan".into()));
    }
    let mut out = vec![Complex::new(0.0, 0.0); dim];
    for (t, terms) in plan.by_time() {
        let back = prop.evolve(vacuum, t);
        let mut v = vec![Complex::new(0.0, 0.0); dim];
        for term in terms {
            let op = ops.get(&term.site).ok_or_else(|| HaagRuelleError::InvalidInput(format!("no operator at site {}", term.site)))?;
            if op.dim() != dim {
                return Err(HaagRuelleError::InvalidInput(format!("operator at site {} has dimension {}", term.site, op.dim())));
            }
            for (o, x) in v.iter_mut().zip(op.mul_vec(&back)) {
                *o += x * term.coefficient;
            }
        }
        for (o, x) in out.iter_mut().zip(prop.evolve(&v, -t)) {
            *o += x;
        }
    }
    let n = norm(&out);
    Ok(Assembly { state: out, norm: n, alpha: plan.alpha, rho: (n / plan.alpha).powi(2) })
}

/// Same result as [`assemble`] when `vacuum` is an eigenvector of `H`: each `O(x)|Ω>` is expanded
/// once in the eigenbasis and the sample times enter only through `e^{i(E_n - E_0)t}`.
pub fn assemble_spectral(plan: &CreationPlan, ops: &BTreeMap<usize, SparseMatrix<f64>>, table: &SpectrumTable, vacuum: &[Complex64]) -> Result<Assembly, HaagRuelleError> {
    if vacuum.len() != table.dim {
        return Err(HaagRuelleError::InvalidInput(format!("vacuum of length {} on a {}-dimensional space", vacuum.len(), table.dim)));
    }
    if plan.terms.is_empty() || !(plan.alpha > 0.0) {
        return Err(HaagRuelleError::InvalidInput("empty plan".into()));
    }
    let coeffs = table.decompose(vacuum);
    let n2: f64 = coeffs.iter().flatten().map(|z| z.norm_sqr()).sum();
    let (vs, vl) = table.vacuum;
    let e0 = table.sectors[vs].energies[vl];
    let spread: f64 = table.sectors.iter().zip(&coeffs).map(|(s, c)| s.energies.iter().zip(c).map(|(e, z)| (e - e0).abs() * z.norm_sqr()).sum::<f64>()).sum();
    if spread > 1e-10 * n2.max(1e-300) {
        return Err(HaagRuelleError::InvalidInput("initial state is not the vacuum eigenvector".into()));
    }
    let mut images: BTreeMap<usize, Vec<Vec<Complex64>>> = BTreeMap::new();
    for site in plan.sites() {
        let op = ops.get(&site).ok_or_else(|| HaagRuelleError::InvalidInput(format!("no operator at site {site}")))?;
        images.insert(site, table.decompose(&op.mul_vec(vacuum)));
    }
    let mut acc: Vec<Vec<Complex64>> = table.sectors.iter().map(|s| vec![Complex::new(0.0, 0.0); s.energies.len()]).collect();
    for (t, terms) in plan.by_time() {
        let terms: Vec<(Complex64, &Vec<Vec<Complex64>>)> = terms.iter().map(|term| (term.coefficient, &images[&term.site])).collect();
        for (si, s) in table.sectors.iter().enumerate() {
            for (n, &e) in s.energies.iter().enumerate() {
                let v: Complex64 = terms.iter().map(|(c, img)| c * img[si][n]).sum();
                acc[si][n] += v * Complex::from_polar(1.0, (e - e0) * t);
            }
        }
    }
    let state = table.recompose(&acc);
    let n = norm(&state);
    Ok(Assembly { state, norm: n, alpha: plan.alpha, rho: (n / plan.alpha).powi(2) })
}
