//! Spinor boosts, the Z replacement for spinorial interpolators and the spinor packet norm.

use num_complex::Complex;

use super::dirac::{alpha, Spinor4};
use super::InterpolatorError;
use crate::Complex64;

/// `√Z_β^j = <0, j| O_β(0) |Ω>`: rows `j = -J..=J`, columns `β = 1..4`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZTable {
    pub rows: Vec<[Complex64; 4]>,
}

impl ZTable {
    pub fn new(rows: Vec<[Complex64; 4]>) -> Self {
        Self { rows }
    }

    /// `2J + 1` rows with the same real entries.
    pub fn uniform(spin_states: usize, z: [f64; 4]) -> Self {
        Self { rows: vec![z.map(|v| Complex::new(v, 0.0)); spin_states] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostData {
    pub momentum: [f64; 3],
    pub mass: f64,
    pub energy: f64,
    pub gamma: f64,
    /// Block matrix `[[√((γ+1)/2) 1, √((γ-1)/2) σ·k̂], [√((γ-1)/2) σ·k̂, √((γ+1)/2) 1]]`.
    pub s: Spinor4,
}

pub fn dirac_boost(momentum: [f64; 3], mass: f64) -> Result<BoostData, InterpolatorError> {
    if !(mass > 0.0) {
        return Err(InterpolatorError::InvalidInput(format!("mass {mass} must be positive")));
    }
    let k2: f64 = momentum.iter().map(|k| k * k).sum();
    let energy = (k2 + mass * mass).sqrt();
    let gamma = energy / mass;
    let cp = ((gamma + 1.0) / 2.0).sqrt();
    let cm = ((gamma - 1.0) / 2.0).max(0.0).sqrt();
    let knorm = k2.sqrt();
    // α·k̂ carries σ·k̂ in its off-diagonal blocks
    let mut ak = Spinor4::zeros();
    if knorm > 0.0 {
        for (n, &k) in momentum.iter().enumerate() {
            ak += alpha(n) * Complex::new(k / knorm, 0.0);
        }
    }
    let s = Spinor4::identity() * Complex::new(cp, 0.0) + ak * Complex::new(cm, 0.0);
    Ok(BoostData { momentum, mass, energy, gamma, s })
}

impl BoostData {
    /// `(α·k + m β) w` minus `E w` for the boosted rest spinor `w = S e_1`, maximum modulus.
    pub fn eigen_residual(&self) -> f64 {
        let mut h = super::dirac::beta() * Complex::new(self.mass, 0.0);
        for (n, &k) in self.momentum.iter().enumerate() {
            h += alpha(n) * Complex::new(k, 0.0);
        }
        let w = self.s.column(0).into_owned();
        (h * w - w * Complex::new(self.energy, 0.0)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `S^{-1}`, the boost taking momentum `k̄` back to rest.
    pub fn to_rest(&self) -> Spinor4 {
        let cp = ((self.gamma + 1.0) / 2.0).sqrt();
        // flipping the sign of the off-diagonal blocks
        Spinor4::identity() * Complex::new(2.0 * cp, 0.0) - self.s
    }
}

/// Effective `Z = Σ_j |Σ_β S(Λ_k̄)_{αβ} √Z_β^j|^2` with `Λ_k̄` the boost sending `k̄` to rest.
pub fn z_replacement(bd: &BoostData, z: &ZTable, alpha_index: usize) -> Result<f64, InterpolatorError> {
    if alpha_index >= 4 {
        return Err(InterpolatorError::InvalidInput(format!("spinor index {alpha_index}")));
    }
    let s = bd.to_rest();
    Ok(z.rows.iter().map(|row| (0..4).map(|b| s[(alpha_index, b)] * row[b]).sum::<Complex64>().norm_sqr()).sum())
}

/// Uniform momentum grid: `points` with a common cell volume.
#[derive(Clone, Debug)]
pub struct MomentumGrid {
    pub points: Vec<[f64; 3]>,
    pub cell_volume: f64,
}

impl MomentumGrid {
    /// `n^3` cell centres of the cube `center ± half_width`.
    pub fn cube(center: [f64; 3], half_width: f64, n: usize) -> Self {
        let h = 2.0 * half_width / n as f64;
        let coord = |i: usize, c: f64| c - half_width + (i as f64 + 0.5) * h;
        let mut points = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    points.push([coord(i, center[0]), coord(j, center[1]), coord(k, center[2])]);
                }
            }
        }
        Self { points, cell_volume: h * h * h }
    }
}

/// Quadrature of `∫ d^3k |ψ̃(k)|^2 (m/E) Σ_j |Σ_β S(Λ_k)_{αβ} √Z_β^j|^2`.
pub fn wavepacket_norm_spinor(psi: &[Complex64], grid: &MomentumGrid, mass: f64, z: &ZTable, alpha_index: usize) -> Result<f64, InterpolatorError> {
    if psi.len() != grid.points.len() {
        return Err(InterpolatorError::InvalidInput(format!("{} amplitudes for {} grid points", psi.len(), grid.points.len())));
    }
    let mut total = 0.0;
    for (p, k) in psi.iter().zip(&grid.points) {
        let bd = dirac_boost(*k, mass)?;
        total += p.norm_sqr() * mass / bd.energy * z_replacement(&bd, z, alpha_index)?;
    }
    Ok(total * grid.cell_volume)
}

/// [`wavepacket_norm_spinor`] of a smooth `ψ̃` on `n^3` and `(2n)^3` grids; errors when the two
/// differ by more than `tolerance` (relative).
pub fn wavepacket_norm_refined<F>(psi: F, center: [f64; 3], half_width: f64, n: usize, mass: f64, z: &ZTable, alpha_index: usize, tolerance: f64) -> Result<f64, InterpolatorError>
where
    F: Fn([f64; 3]) -> Complex64,
{
    let eval = |n: usize| {
        let g = MomentumGrid::cube(center, half_width, n);
        let amps: Vec<Complex64> = g.points.iter().map(|&k| psi(k)).collect();
        wavepacket_norm_spinor(&amps, &g, mass, z, alpha_index)
    };
    let coarse = eval(n)?;
    let fine = eval(2 * n)?;
    let change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if change > tolerance {
        return Err(InterpolatorError::Coarse { change, tolerance });
    }
    Ok(fine)
}
