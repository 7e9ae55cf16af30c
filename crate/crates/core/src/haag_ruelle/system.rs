//! A periodic 1D gauge theory prepared for wave-packet work.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use super::{
    assemble, assemble_spectral, design_profile, lcu_simulate, one_particle_fidelity, Assembly, CreationPlan, DenseEvolution, FidelityBreakdown, HaagRuelleError, LcuSetup, LcuSimulation, PacketParams,
    WavePacketProfile, DEFAULT_KAPPA,
};
use crate::interpolators::{interpolators_1d, Layout1D};
use crate::lattice::{build_hamiltonian_1d, momentum_sectors, Boundary, Hamiltonian1D, LatticeSpec1D, Sector, SpectrumTable};
use crate::pauli::{LcuDecomposition, OperatorSum, SparseMatrix};
use crate::Complex64;

pub const SUCCESS_REPORT_SCHEMA: &str = "hrwave/success-report/1";

/// Pauli 1-norm of `[H,[H,O]]`, an upper bound on its operator norm that only sees the terms of
/// `H` near the support of `O`.
pub fn commutator_norm(h: &OperatorSum<f64>, o: &OperatorSum<f64>) -> Result<f64, HaagRuelleError> {
    let inner = h.commutator(o)?;
    Ok(h.commutator(&inner)?.prune(1e-14).one_norm())
}

#[derive(Clone, Debug)]
pub struct PacketSystem {
    pub hamiltonian: Hamiltonian1D,
    /// Momentum sectors with the one-particle branch identified.
    pub table: SpectrumTable,
    pub label: String,
    pub c: f64,
    /// `O(x)` on the full register, even `x`.
    pub lcus: BTreeMap<usize, LcuDecomposition<f64>>,
    /// `O(x)` on the zero-charge basis.
    pub ops: BTreeMap<usize, SparseMatrix<f64>>,
    pub vacuum: Vec<Complex64>,
    pub vacuum_energy: f64,
    /// [`commutator_norm`] of `H` and `O(0)`.
    pub comm_norm: f64,
}

/// Exact evolution on the whole register, for ancilla runs.
#[derive(Clone, Debug)]
pub struct RegisterSystem {
    pub evolution: DenseEvolution,
    pub vacuum: Vec<Complex64>,
    pub width: usize,
}

impl PacketSystem {
    /// `label` names the meson interpolator (`O1`, `O2`, `O3`, with or without the theory prefix).
    /// The branch is the lowest level per momentum carrying at least `threshold` of `O(0)|Ω>`.
    pub fn new(spec: LatticeSpec1D, label: &str, threshold: f64) -> Result<Self, HaagRuelleError> {
        if spec.boundary != Boundary::Periodic {
            return Err(HaagRuelleError::InvalidInput("wave packets need a periodic lattice".into()));
        }
        let hamiltonian = build_hamiltonian_1d(spec, Sector::ZeroCharge)?;
        let mut table = momentum_sectors(&hamiltonian)?;
        let layout = Layout1D::from_model(&hamiltonian.model)?;
        let suffix = label.rsplit('.').next().unwrap_or(label);
        let mut lcus = BTreeMap::new();
        let mut ops = BTreeMap::new();
        let mut c = 0.0;
        let mut full_label = String::new();
        for x in (0..spec.sites).step_by(2) {
            let op = interpolators_1d(&layout, x, spec.spacing)?
                .into_iter()
                .find(|o| o.label.rsplit('.').next() == Some(suffix))
                .ok_or_else(|| HaagRuelleError::InvalidInput(format!("no interpolator {label}")))?;
            if op.tags.get("particle").map(String::as_str) != Some("meson") {
                return Err(HaagRuelleError::InvalidInput(format!("{} changes the fermion number", op.label)));
            }
            let lcu = op.lcu().expect("1D interpolators are LCUs").clone();
            ops.insert(x, hamiltonian.restrict(|b| lcu.column(b).collect())?);
            lcus.insert(x, lcu);
            c = op.c;
            full_label = op.label;
        }
        let (vacuum_energy, vacuum) = table.ground_state();
        let probe = ops[&0].mul_vec(&vacuum);
        table.identify_branch(&probe, threshold);
        let comm_norm = commutator_norm(&hamiltonian.model.operator_sum()?, &lcus[&0].to_operator_sum()?)?;
        Ok(Self { hamiltonian, table, label: full_label, c, lcus, ops, vacuum, vacuum_energy, comm_norm })
    }

    pub fn spec(&self) -> &LatticeSpec1D {
        self.hamiltonian.model.spec()
    }

    pub fn params(&self, k_center: f64, delta_p: f64, duration: f64, epsilon: f64) -> PacketParams {
        PacketParams { kappa: DEFAULT_KAPPA, ..PacketParams::new(k_center, delta_p, duration, epsilon, self.comm_norm) }
    }

    pub fn profile(&self, params: &PacketParams) -> Result<WavePacketProfile, HaagRuelleError> {
        design_profile(&self.table, params)
    }

    pub fn plan(&self, profile: &WavePacketProfile) -> CreationPlan {
        CreationPlan::from_profile(profile, self.label.clone(), self.c)
    }

    pub fn assemble(&self, plan: &CreationPlan) -> Result<Assembly, HaagRuelleError> {
        assemble_spectral(plan, &self.ops, &self.table, &self.vacuum)
    }

    /// [`assemble`] with explicit evolution of every sample, the slow reference path.
    pub fn assemble_direct(&self, plan: &CreationPlan) -> Result<Assembly, HaagRuelleError> {
        assemble(plan, &self.ops, &self.table, &self.vacuum)
    }

    /// Breakdown of the normalized `a†_ψ|Ω>`.
    pub fn fidelity(&self, assembly: &Assembly) -> Result<FidelityBreakdown, HaagRuelleError> {
        if !(assembly.norm > 0.0) {
            return Err(HaagRuelleError::NotNormalized(0.0));
        }
        let s: Vec<Complex64> = assembly.state.iter().map(|z| z / assembly.norm).collect();
        one_particle_fidelity(&s, &self.table)
    }

    pub fn register(&self) -> Result<RegisterSystem, HaagRuelleError> {
        let full = build_hamiltonian_1d(*self.spec(), Sector::Full)?;
        let width = full.width();
        if full.dim() != 1usize << width {
            return Err(HaagRuelleError::InvalidInput(format!("{} physical states on a {width}-qubit register", full.dim())));
        }
        let evolution = DenseEvolution::from_sparse(&full.matrix)?;
        let vacuum = self.hamiltonian.embed(&self.vacuum)?.into_amplitudes();
        Ok(RegisterSystem { evolution, vacuum, width })
    }

    pub fn setup<'a>(&'a self, register: &'a RegisterSystem, plan: &'a CreationPlan) -> LcuSetup<'a> {
        LcuSetup { plan, ops: &self.lcus, evolution: &register.evolution, initial: &register.vacuum }
    }

    /// Assembly, fidelity and (with a register) the ancilla run of one packet.
    pub fn report(&self, profile: &WavePacketProfile, register: Option<&RegisterSystem>, width_cap: usize) -> Result<(SuccessReport, Assembly), HaagRuelleError> {
        let plan = self.plan(profile);
        let asm = self.assemble(&plan)?;
        let fid = self.fidelity(&asm)?;
        let sim = match register {
            Some(r) => Some(lcu_simulate(&self.setup(r, &plan), width_cap)?),
            None => None,
        };
        Ok((SuccessReport::new(&plan, Some(profile), &asm, fid, sim.as_ref()), asm))
    }
}

/// Success probability of one packet, computed up to three ways.
#[derive(Clone, Debug, Serialize)]
pub struct SuccessReport {
    pub schema: String,
    pub label: String,
    pub k_center: Option<f64>,
    pub delta_p: Option<f64>,
    pub duration: Option<f64>,
    pub epsilon: Option<f64>,
    pub time_samples: Option<usize>,
    pub dt: Option<f64>,
    pub mean_energy: Option<f64>,
    pub c: f64,
    pub norm: f64,
    /// `C Σ|coefficients|` of the plan.
    pub alpha: f64,
    /// `(norm / alpha)^2`.
    pub rho: f64,
    /// `(norm / α_LCU)^2` with `α_LCU` the 1-norm of the expanded ancilla LCU.
    pub rho_formula: Option<f64>,
    /// Post-selection probability of the ancilla run.
    pub rho_simulated: Option<f64>,
    /// Largest pairwise difference of the available `ρ` values.
    pub rho_spread: f64,
    /// `max |amplitude|` of post-selected block minus `a†_ψ|Ω> / α`, both on the register.
    pub state_defect: Option<f64>,
    pub fidelity: FidelityBreakdown,
    pub repetitions: f64,
    pub amplified_repetitions: f64,
    pub tolerance: f64,
}

impl SuccessReport {
    pub fn new(plan: &CreationPlan, profile: Option<&WavePacketProfile>, asm: &Assembly, fidelity: FidelityBreakdown, sim: Option<&LcuSimulation>) -> Self {
        let rho = asm.rho;
        let rho_formula = sim.map(|s| (asm.norm / s.alpha).powi(2));
        let rho_simulated = sim.map(|s| s.probability);
        let all: Vec<f64> = [Some(rho), rho_formula, rho_simulated].into_iter().flatten().collect();
        let spread = all.iter().flat_map(|a| all.iter().map(move |b| (a - b).abs())).fold(0.0, f64::max);
        let p = profile.map(|p| p.params);
        Self {
            schema: SUCCESS_REPORT_SCHEMA.into(),
            label: plan.label.clone(),
            k_center: p.map(|p| p.k_center),
            delta_p: p.map(|p| p.delta_p),
            duration: p.map(|p| p.duration),
            epsilon: p.map(|p| p.epsilon),
            time_samples: profile.map(|p| p.sampling.n),
            dt: profile.map(|p| p.sampling.dt),
            mean_energy: profile.map(|p| p.mean_energy),
            c: plan.c,
            norm: asm.norm,
            alpha: plan.alpha,
            rho,
            rho_formula,
            rho_simulated,
            rho_spread: spread,
            state_defect: None,
            fidelity,
            repetitions: 1.0 / rho,
            amplified_repetitions: 1.0 / rho.sqrt(),
            tolerance: 1e-10,
        }
    }

    /// Compares the post-selected block with `a†_ψ|Ω>/α` embedded by `embed`.
    pub fn with_state_check(mut self, sim: &LcuSimulation, target: &[Complex64]) -> Self {
        let d = sim.state.iter().zip(target).map(|(a, b)| (a - b / Complex::new(self.alpha, 0.0)).norm()).fold(0.0, f64::max);
        self.state_defect = Some(d);
        self
    }
}
