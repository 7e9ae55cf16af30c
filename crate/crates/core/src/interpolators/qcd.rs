//! Symbolic QCD pion and nucleon interpolators with gauge dressing and C accounting.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use super::chain::permutations3;
use super::dirac::{beta, charge_conjugation, gamma5, Spinor4};
use super::{Body, Interpolator, InterpolatorError};
use crate::lattice::{stagger_phase, StaggeredIdentification};
use crate::Complex64;

pub type Site = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavour {
    U,
    D,
}

/// One fermion factor: `ξ^†` (creation) or `ξ` at a lattice site. In the Wilson mode the site
/// carries both spinors and all components, recorded in `flavour` and `component`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quark {
    pub site: Site,
    pub creation: bool,
    pub flavour: Flavour,
    pub component: usize,
}

/// Link `U(site, ±axis)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkStep {
    pub site: Site,
    pub axis: usize,
    pub forward: bool,
}

/// Fermion monomial with the link paths that transport every factor to a common anchor.
#[derive(Clone, Debug)]
pub struct DressedMonomial {
    pub coefficient: Complex64,
    pub quarks: Vec<Quark>,
    pub anchor: Site,
    /// Per quark, the links from the anchor towards it (`U(s_0, n_0) U(s_1, n_1) ... ξ(quark)`).
    pub paths: Vec<Vec<LinkStep>>,
    /// Number of terms of the colour contraction (3 for `δ_ab`, 6 for `ε_abc`).
    pub colour_terms: usize,
}

/// How link insertions enter `C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum PathCost {
    /// A path counts as one SU(3) transporter whatever its length.
    SingleTransporter,
    /// Every link of the path multiplies in its own expansion.
    PerLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Counting {
    /// `C` of one transporter component `W_{ab}` (three terms of the SU(3) decomposition).
    pub component_cost: f64,
    pub path: PathCost,
}

impl Default for Counting {
    fn default() -> Self {
        Self { component_cost: 3.0, path: PathCost::SingleTransporter }
    }
}

impl Counting {
    pub fn describe(&self) -> String {
        let p = match self.path {
            PathCost::SingleTransporter => "each transported colour index costs 3 components x the transporter cost, independent of path length",
            PathCost::PerLink => "each link of a path costs 3 components x the link cost",
        };
        format!("monomial |c| x colour-contraction terms x per-quark transport, component cost {}; {p}", self.component_cost)
    }

    /// Factor for one transported colour index along a path of `len` links.
    fn transport(&self, len: usize) -> f64 {
        if len == 0 {
            return 1.0;
        }
        let per = 3.0 * self.component_cost;
        match self.path {
            PathCost::SingleTransporter => per,
            PathCost::PerLink => per.powi(len as i32),
        }
    }
}

impl DressedMonomial {
    pub fn cost(&self, counting: &Counting) -> f64 {
        self.coefficient.norm() * self.colour_terms as f64 * self.paths.iter().map(|p| counting.transport(p.len())).product::<f64>()
    }

    /// Quarks not sitting on the anchor.
    pub fn transported(&self) -> usize {
        self.paths.iter().filter(|p| !p.is_empty()).count()
    }
}

fn distance(a: Site, b: Site) -> i64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).sum()
}

/// Path from `anchor` to `target`: walk from the target back to the anchor along x, then y,
/// then z, and read the links from the anchor side.
pub fn dressing_path(anchor: Site, target: Site) -> Vec<LinkStep> {
    let mut steps = Vec::new();
    let mut cur = target;
    for axis in 0..3 {
        while cur[axis] != anchor[axis] {
            let dir = (anchor[axis] - cur[axis]).signum();
            let mut next = cur;
            next[axis] += dir;
            // link from `next` towards `cur`
            steps.push(LinkStep { site: next, axis, forward: dir < 0 });
            cur = next;
        }
    }
    steps.reverse();
    steps
}

/// Insert link paths so that all factors meet at one anchor. The anchor is the site with the
/// smallest total path length; ties prefer a creation operator, then more factors, then the
/// lexicographically smallest site.
pub fn gauge_dress(coefficient: Complex64, quarks: Vec<Quark>, colour_terms: usize, max_path: usize) -> Result<DressedMonomial, InterpolatorError> {
    if quarks.is_empty() {
        return Err(InterpolatorError::InvalidInput("empty monomial".into()));
    }
    let mut candidates: Vec<Site> = quarks.iter().map(|q| q.site).collect();
    candidates.sort();
    candidates.dedup();
    let key = |s: &Site| {
        let total: i64 = quarks.iter().map(|q| distance(*s, q.site)).sum();
        let creation = quarks.iter().any(|q| q.creation && q.site == *s);
        let count = quarks.iter().filter(|q| q.site == *s).count();
        (total, !creation, usize::MAX - count, *s)
    };
    let anchor = *candidates.iter().min_by_key(|s| key(s)).expect("non-empty");
    let paths: Vec<Vec<LinkStep>> = quarks.iter().map(|q| dressing_path(anchor, q.site)).collect();
    if let Some(p) = paths.iter().find(|p| p.len() > max_path) {
        return Err(InterpolatorError::Disconnected { length: p.len(), max: max_path });
    }
    Ok(DressedMonomial { coefficient, quarks, anchor, paths, colour_terms })
}

/// Fermion formulation used for the QCD interpolators.
#[derive(Clone, Copy, Debug)]
pub enum Formulation<'a> {
    Staggered(&'a StaggeredIdentification),
    /// Both spinors on every site: counting only.
    Wilson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PionCharge {
    Plus,
    Minus,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Nucleon {
    Proton,
    Neutron,
}

/// `Σ_i w_i ξ(site_i)` for one spinor component of a flavour.
type Expansion = Vec<(Site, Complex64)>;

/// Staggered expansion of `u_α(r)` and `d_α(r)`: `[flavour][component]`.
fn staggered_fields(r: Site, id: &StaggeredIdentification) -> [[Expansion; 4]; 2] {
    let rot = id.rotation();
    let offsets: Vec<[usize; 3]> = id.f_sites.iter().chain(&id.g_sites).copied().collect();
    let mut out: [[Expansion; 4]; 2] = Default::default();
    for (fl, rows) in out.iter_mut().enumerate() {
        for (comp, e) in rows.iter_mut().enumerate() {
            for (col, o) in offsets.iter().enumerate() {
                let w = rot[(4 * fl + comp, col)];
                if w.norm() < 1e-14 {
                    continue;
                }
                let site = [2 * r[0] + o[0] as i64, 2 * r[1] + o[1] as i64, 2 * r[2] + o[2] as i64];
                // the phase has period 4 along every axis
                let wrapped = site.map(|c| c.rem_euclid(4) as usize);
                e.push((site, w * stagger_phase(wrapped)));
            }
        }
    }
    out
}

fn wilson_fields(r: Site) -> [[Expansion; 4]; 2] {
    let one = Complex::new(1.0, 0.0);
    std::array::from_fn(|_| std::array::from_fn(|_| vec![(r, one)]))
}

fn flavour_index(f: Flavour) -> usize {
    match f {
        Flavour::U => 0,
        Flavour::D => 1,
    }
}

struct Fields {
    exp: [[Expansion; 4]; 2],
    wilson: bool,
}

impl Fields {
    fn new(r: Site, formulation: Formulation) -> Result<Self, InterpolatorError> {
        match formulation {
            Formulation::Staggered(id) => {
                if id.variant != 1 {
                    return Err(InterpolatorError::Unsupported(format!("identification variant {} for gauge dressing", id.variant)));
                }
                Ok(Self { exp: staggered_fields(r, id), wilson: false })
            }
            Formulation::Wilson => Ok(Self { exp: wilson_fields(r), wilson: true }),
        }
    }

    fn get(&self, f: Flavour, comp: usize) -> &Expansion {
        &self.exp[flavour_index(f)][comp]
    }
}

const MAX_PATH: usize = 6;

/// `ψ̄_1^† G ψ_2` bilinear `Σ_{αβ} ψ_{1α}^† G_{αβ} ψ_{2β}` expanded into dressed monomials.
fn bilinear(fields: &Fields, g: &Spinor4, create: Flavour, annihilate: Flavour, scale: f64, out: &mut Vec<DressedMonomial>) -> Result<(), InterpolatorError> {
    for a in 0..4 {
        for b in 0..4 {
            let gab = g[(a, b)];
            if gab.norm() < 1e-14 {
                continue;
            }
            for &(si, wi) in fields.get(create, a) {
                for &(sj, wj) in fields.get(annihilate, b) {
                    let quarks = vec![
                        Quark { site: si, creation: true, flavour: create, component: if fields.wilson { a } else { 0 } },
                        Quark { site: sj, creation: false, flavour: annihilate, component: if fields.wilson { b } else { 0 } },
                    ];
                    out.push(gauge_dress(wi.conj() * gab * wj * scale, quarks, 3, MAX_PATH)?);
                }
            }
        }
    }
    Ok(())
}

fn symbolic(label: String, monomials: Vec<DressedMonomial>, counting: &Counting, spacing: f64, mass_dimension: f64, r: Site, tags: BTreeMap<String, String>) -> Interpolator {
    let c_reduced: f64 = monomials.iter().map(|m| m.cost(counting)).sum();
    Interpolator {
        label,
        c: c_reduced / spacing.powf(mass_dimension),
        c_reduced,
        spacing,
        mass_dimension,
        anchor: r.to_vec(),
        terms: monomials.len(),
        tags,
        convention: counting.describe(),
        body: Body::Symbolic(monomials),
    }
}

fn mode_label(f: &Formulation) -> &'static str {
    match f {
        Formulation::Staggered(_) => "staggered",
        Formulation::Wilson => "wilson",
    }
}

/// `π^+ = d^† γ_0 γ_5 u`, `π^- = u^† γ_0 γ_5 d`, `π^0 = (u^† γ_0γ_5 u - d^† γ_0γ_5 d)/√2`.
pub fn qcd_pion(charge: PionCharge, r: Site, formulation: Formulation, counting: &Counting, spacing: f64) -> Result<Interpolator, InterpolatorError> {
    let fields = Fields::new(r, formulation)?;
    let g = beta() * gamma5();
    let mut mono = Vec::new();
    let (label, iso) = match charge {
        PionCharge::Plus => {
            bilinear(&fields, &g, Flavour::D, Flavour::U, 1.0, &mut mono)?;
            ("pi+", "+1")
        }
        PionCharge::Minus => {
            bilinear(&fields, &g, Flavour::U, Flavour::D, 1.0, &mut mono)?;
            ("pi-", "-1")
        }
        PionCharge::Zero => {
            let s = 0.5f64.sqrt();
            bilinear(&fields, &g, Flavour::U, Flavour::U, s, &mut mono)?;
            bilinear(&fields, &g, Flavour::D, Flavour::D, -s, &mut mono)?;
            ("pi0", "0")
        }
    };
    let nominal = if fields.wilson { "exact" } else { "nominal" };
    let tags = BTreeMap::from([
        ("spin".to_string(), "0".to_string()),
        ("isospin_z".into(), iso.into()),
        ("baryon_number".into(), "0".into()),
        ("tags".into(), nominal.into()),
        ("formulation".into(), mode_label(&formulation).into()),
    ]);
    Ok(symbolic(format!("QCD.{label}"), mono, counting, spacing, 3.0, r, tags))
}

/// `ε_abc [q1_a^T 𝒞γ_5 q2_b] q1_c` with spinor component `component` of the last factor:
/// proton `(q1, q2) = (u, d)`, neutron `(d, u)`.
pub fn qcd_nucleon(kind: Nucleon, component: usize, r: Site, formulation: Formulation, counting: &Counting, spacing: f64) -> Result<Interpolator, InterpolatorError> {
    if component >= 4 {
        return Err(InterpolatorError::InvalidInput(format!("spinor component {component}")));
    }
    let fields = Fields::new(r, formulation)?;
    let (q1, q2, label) = match kind {
        Nucleon::Proton => (Flavour::U, Flavour::D, "p"),
        Nucleon::Neutron => (Flavour::D, Flavour::U, "n"),
    };
    let g = charge_conjugation() * gamma5();
    let mut mono = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            let gab = g[(a, b)];
            if gab.norm() < 1e-14 {
                continue;
            }
            for &(si, wi) in fields.get(q1, a) {
                for &(sj, wj) in fields.get(q2, b) {
                    for &(sk, wk) in fields.get(q1, component) {
                        let comp = |c: usize| if fields.wilson { c } else { 0 };
                        let quarks = vec![
                            Quark { site: si, creation: false, flavour: q1, component: comp(a) },
                            Quark { site: sj, creation: false, flavour: q2, component: comp(b) },
                            Quark { site: sk, creation: false, flavour: q1, component: comp(component) },
                        ];
                        mono.push(gauge_dress(wi * gab * wj * wk, quarks, permutations3().len(), MAX_PATH)?);
                    }
                }
            }
        }
    }
    let nominal = if fields.wilson { "exact" } else { "nominal" };
    let iso = if kind == Nucleon::Proton { "+1/2" } else { "-1/2" };
    let tags = BTreeMap::from([
        ("spin".to_string(), "1/2".to_string()),
        ("isospin_z".into(), iso.into()),
        ("baryon_number".into(), "1".into()),
        ("statistics".into(), "fermionic".into()),
        ("tags".into(), nominal.into()),
        ("formulation".into(), mode_label(&formulation).into()),
    ]);
    Ok(symbolic(format!("QCD.{label}"), mono, counting, spacing, 4.5, r, tags))
}
