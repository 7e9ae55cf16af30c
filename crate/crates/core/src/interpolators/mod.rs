//! Interpolating operators with explicit C accounting: the 1D gauge theories as LCUs, QCD pions
//! and nucleons symbolically, and the spinor boost machinery.

mod boost;
mod chain;
pub mod dirac;
mod qcd;

use std::collections::BTreeMap;

use serde::Serialize;

pub use boost::{dirac_boost, wavepacket_norm_refined, wavepacket_norm_spinor, z_replacement, BoostData, MomentumGrid, ZTable};
pub use chain::{interpolators_1d, Layout1D};
pub use qcd::{dressing_path, gauge_dress, qcd_nucleon, qcd_pion, Counting, DressedMonomial, Flavour, Formulation, LinkStep, Nucleon, PathCost, PionCharge, Quark, Site};

use crate::encodings::EncodingError;
use crate::links::LinkError;
use crate::pauli::{LcuDecomposition, PauliError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpolatorError {
    #[error("anchor site {0} is odd")]
    OddAnchor(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dressing path of length {length} exceeds {max}")]
    Disconnected { length: usize, max: usize },
    #[error("grid refinement changed the result by {change:e} (tolerance {tolerance:e})")]
    Coarse { change: f64, tolerance: f64 },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

#[derive(Clone, Debug)]
pub enum Body {
    Lcu(LcuDecomposition<f64>),
    /// Counting-only expansion into gauge-dressed fermion monomials.
    Symbolic(Vec<DressedMonomial>),
}

#[derive(Clone, Debug)]
pub struct Interpolator {
    pub label: String,
    /// `C` at the given spacing.
    pub c: f64,
    /// `C a^{mass_dimension}`.
    pub c_reduced: f64,
    pub spacing: f64,
    pub mass_dimension: f64,
    pub anchor: Vec<i64>,
    pub terms: usize,
    pub tags: BTreeMap<String, String>,
    pub convention: String,
    pub body: Body,
}

/// Row of the interpolator table.
#[derive(Clone, Debug, Serialize)]
pub struct InterpolatorSummary {
    pub label: String,
    pub c_reduced: f64,
    pub mass_dimension: f64,
    pub terms: usize,
    pub tags: BTreeMap<String, String>,
    pub convention: String,
}

impl Interpolator {
    pub fn lcu(&self) -> Option<&LcuDecomposition<f64>> {
        match &self.body {
            Body::Lcu(l) => Some(l),
            Body::Symbolic(_) => None,
        }
    }

    pub fn summary(&self) -> InterpolatorSummary {
        InterpolatorSummary {
            label: self.label.clone(),
            c_reduced: self.c_reduced,
            mass_dimension: self.mass_dimension,
            terms: self.terms,
            tags: self.tags.clone(),
            convention: self.convention.clone(),
        }
    }
}
