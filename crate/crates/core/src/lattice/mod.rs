//! One-dimensional Kogut-Susskind Hamiltonians, their spectra, and the free three-dimensional
//! staggered fermion with its two-flavour Dirac identifications.

mod hamiltonian;
mod spectrum;
mod staggered3d;

pub use hamiltonian::{build_hamiltonian_1d, Hamiltonian1D, Model1D};
pub use spectrum::{eigh, ground_state, momentum_sectors, BranchPoint, Eigh, MomentumSector, SpectrumTable, Translation2};
pub use staggered3d::{
    build_free_staggered_3d, discrete_derivative, eta, identify_ud, mixing_matrix, stagger_phase, transform, ud_target, DerivativeKind, IdentificationReport,
    OneBody3D, StaggeredIdentification, UdBlocks,
};

use serde::{Deserialize, Serialize};

use crate::encodings::{EncodingError, Theory};
use crate::links::LinkError;
use crate::pauli::PauliError;

/// Largest register handled by the 1D builders.
pub const MAX_WIDTH_1D: usize = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidSpec(String),
    #[error("register of {width} qubits exceeds the cap of {cap}")]
    WidthOverflow { width: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sector basis is not closed under the Hamiltonian (leak {0})")]
    Leak(f64),
    #[error("translation by two does not commute with H (residual {0})")]
    Translation(f64),
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("extents must be even, got {0:?}")]
    OddExtent([usize; 3]),
    #[error("identification transform is not unitary (deviation {0})")]
    NonUnitary(f64),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Subspace the Hamiltonian is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    /// Every fermion configuration times every physical link label.
    Full,
    /// Half filling; for U(1) additionally Gauss's law modulo the register size.
    ZeroCharge,
}

/// How the U(1) link is cut off at `|E| = Λ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// `U` is the cyclic shift on the register; Gauss's law holds modulo `2Λ`.
    #[default]
    Cyclic,
    /// The wrap-around element of `U` is dropped; Gauss's law is exact and the spaces nest in `Λ`.
    Hard,
}

/// `cutoff` is `Λ` for U(1) (a power of two, `E ∈ {-Λ, ..., Λ-1}`) and `2 j_max` for SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec1D {
    pub theory: Theory,
    pub sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub coupling: f64,
    pub cutoff: usize,
    pub boundary: Boundary,
    #[serde(default)]
    pub truncation: Truncation,
}

impl LatticeSpec1D {
    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.sites < 2 || !self.sites.is_multiple_of(2) {
            return Err(LatticeError::InvalidSpec(format!("N = {} must be even and at least 2", self.sites)));
        }
        if self.cutoff < 1 {
            return Err(LatticeError::InvalidSpec("cutoff must be at least 1".into()));
        }
        if self.theory == Theory::U1 && !self.cutoff.is_power_of_two() {
            return Err(LatticeError::InvalidSpec(format!("U(1) cutoff {} must be a power of two", self.cutoff)));
        }
        if !(self.spacing > 0.0) || !self.mass.is_finite() || !self.coupling.is_finite() {
            return Err(LatticeError::InvalidSpec("spacing must be positive, mass and coupling finite".into()));
        }
        Ok(())
    }

    pub fn links(&self) -> usize {
        match self.boundary {
            Boundary::Open => self.sites - 1,
            Boundary::Periodic => self.sites,
        }
    }
}
