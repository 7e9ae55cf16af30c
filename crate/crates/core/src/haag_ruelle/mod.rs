//! Haag-Ruelle wave packets: smearing design, time sampling, assembly of the discretized creation
//! operator, its simulation with an ancilla register, and the one-particle analysis.

mod ancilla;
mod assemble;
mod fidelity;
mod profile;
mod study;
mod system;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use ancilla::{ancilla_postselect, lcu_branches, lcu_simulate, lcu_simulate_product, Branches, LcuSetup, LcuSimulation, Postselection};
pub use assemble::{assemble, assemble_spectral, Assembly, CreationPlan, PlanTerm};
pub use fidelity::{one_particle_fidelity, FidelityBreakdown};
pub use profile::{choose_time_samples, design_profile, MomentumWeight, PacketParams, TimeSampling, WavePacketProfile, DEFAULT_KAPPA};
pub use study::{fit_loglog, leakage_sweep, pair_repetitions, scaling_study, Fit, ScalingRow, ScalingTable, SweepPoint, Validity};
pub use system::{commutator_norm, PacketSystem, RegisterSystem, SuccessReport, SUCCESS_REPORT_SCHEMA};

use crate::interpolators::InterpolatorError;
use crate::lattice::{eigh, Eigh, LatticeError, SpectrumTable};
use crate::pauli::{PauliError, SparseMatrix};
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HaagRuelleError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no one-particle branch point at k = {k}")]
    MissingBranch { k: f64 },
    #[error("packet support reaches k = {k} where the branch gap is {gap}")]
    SupportSpill { k: f64, gap: f64 },
    #[error("{width} qubits exceed the cap of {cap}")]
    WidthOverflow { width: usize, cap: usize },
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("outside the validity window: {0}")]
    OutsideValidity(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Interpolator(#[from] InterpolatorError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// `e^{-iHt}` on a fixed basis.
pub trait Propagator {
    fn dim(&self) -> usize;
    fn evolve(&self, v: &[Complex64], t: f64) -> Vec<Complex64>;
}

impl Propagator for SpectrumTable {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evolve(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        SpectrumTable::evolve(self, v, t)
    }
}

/// Exact evolution through a dense eigendecomposition.
#[derive(Clone, Debug)]
pub struct DenseEvolution {
    pub eigen: Eigh,
}

impl DenseEvolution {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self, HaagRuelleError> {
        Ok(Self { eigen: eigh(h)? })
    }

    pub fn from_sparse(h: &SparseMatrix<f64>) -> Result<Self, HaagRuelleError> {
        Self::new(&h.to_dense())
    }
}

impl Propagator for DenseEvolution {
    fn dim(&self) -> usize {
        self.eigen.values.len()
    }

    fn evolve(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        let vecs = &self.eigen.vectors;
        let c = vecs.adjoint() * nalgebra::DVector::from_column_slice(v);
        let phased = nalgebra::DVector::from_iterator(c.len(), c.iter().zip(&self.eigen.values).map(|(z, &e)| z * Complex::from_polar(1.0, -e * t)));
        (vecs * phased).iter().copied().collect()
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
