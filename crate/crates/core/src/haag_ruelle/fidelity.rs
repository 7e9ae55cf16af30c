use serde::Serialize;

use super::{norm, HaagRuelleError};
use crate::lattice::SpectrumTable;
use crate::Complex64;

/// Weights of a normalized state on the vacuum, on the one-particle branch and elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityBreakdown {
    pub vacuum: f64,
    pub one_particle: f64,
    /// Everything else, multiparticle states included.
    pub leakage: f64,
}

const DEGENERATE: f64 = 1e-9;

fn group_weight(energies: &[f64], coeffs: &[Complex64], level: usize) -> f64 {
    let e = energies[level];
    energies.iter().zip(coeffs).filter(|(&x, _)| (x - e).abs() < DEGENERATE).map(|(_, c)| c.norm_sqr()).sum()
}

pub fn one_particle_fidelity(state: &[Complex64], table: &SpectrumTable) -> Result<FidelityBreakdown, HaagRuelleError> {
    let n = norm(state);
    if (n - 1.0).abs() > 1e-10 {
        return Err(HaagRuelleError::NotNormalized(n));
    }
    if table.branch.is_empty() {
        return Err(HaagRuelleError::MissingBranch { k: f64::NAN });
    }
    let coeffs = table.decompose(state);
    let (vs, vl) = table.vacuum;
    let vacuum = group_weight(&table.sectors[vs].energies, &coeffs[vs], vl);
    let mut one_particle = 0.0;
    for b in &table.branch {
        let si = table.sectors.iter().position(|s| s.m == b.m).ok_or(HaagRuelleError::MissingBranch { k: b.k })?;
        one_particle += group_weight(&table.sectors[si].energies, &coeffs[si], b.level);
    }
    Ok(FidelityBreakdown { vacuum, one_particle, leakage: 1.0 - vacuum - one_particle })
}
