//! Smearing functions and the number of time samples.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::Serialize;

use super::HaagRuelleError;
use crate::lattice::SpectrumTable;
use crate::Complex64;

pub const DEFAULT_KAPPA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeSampling {
    pub n: usize,
    pub dt: f64,
    pub kappa: f64,
}

/// `N = ceil(κ (T/√ε) √comm_norm)` (at least 1) and `δ_t = T/N`.
///
/// The ceiling ignores a relative excess of 1e-9 so that exact multiples survive rounding.
pub fn choose_time_samples(duration: f64, epsilon: f64, comm_norm: f64, kappa: f64) -> Result<TimeSampling, HaagRuelleError> {
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !ok(duration) || !ok(epsilon) || !ok(kappa) || !(comm_norm.is_finite() && comm_norm >= 0.0) {
        return Err(HaagRuelleError::InvalidInput(format!("T = {duration}, ε = {epsilon}, ‖[H,[H,O]]‖ = {comm_norm}, κ = {kappa}")));
    }
    let x = kappa * duration / epsilon.sqrt() * comm_norm.sqrt();
    let n = ((x * (1.0 - 1e-9)).ceil() as usize).max(1);
    Ok(TimeSampling { n, dt: duration / n as f64, kappa })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PacketParams {
    pub k_center: f64,
    pub delta_p: f64,
    /// `T`.
    pub duration: f64,
    pub epsilon: f64,
    pub comm_norm: f64,
    pub kappa: f64,
    /// Even site the packet is centred on.
    pub x_center: usize,
    /// Smallest accepted distance from a branch level to the next level of its sector.
    pub min_gap: f64,
}

impl PacketParams {
    pub fn new(k_center: f64, delta_p: f64, duration: f64, epsilon: f64, comm_norm: f64) -> Self {
        Self { k_center, delta_p, duration, epsilon, comm_norm, kappa: DEFAULT_KAPPA, x_center: 0, min_gap: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentumWeight {
    pub m: i64,
    pub k: f64,
    /// `ψ̃(k)`.
    pub weight: f64,
    /// Branch energy above the vacuum.
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct WavePacketProfile {
    pub params: PacketParams,
    pub spacing: f64,
    pub momenta: Vec<MomentumWeight>,
    /// `E(k̄)` at the grid momentum nearest `k̄`.
    pub energy_center: f64,
    /// Width `4/T` of the energy window produced by the temporal envelope.
    pub energy_width: f64,
    /// `Σ ψ̃² E / Σ ψ̃²`.
    pub mean_energy: f64,
    pub sampling: TimeSampling,
    pub times: Vec<f64>,
    pub sites: Vec<usize>,
    /// `ψ(t_i, x_j)`, indexed `[i][j]`.
    pub samples: Vec<Vec<Complex64>>,
}

impl WavePacketProfile {
    /// `Σ_x Σ_i 2a δ_t |ψ(t_i, x)|`.
    pub fn weight_sum(&self) -> f64 {
        let w = 2.0 * self.spacing * self.sampling.dt;
        self.samples.iter().flatten().map(|z| w * z.norm()).sum()
    }
}

/// `g_T(t)`: Gaussian of width `T/4`, zero for `|t| > T/2`.
pub(crate) fn envelope(t: f64, duration: f64) -> f64 {
    if t.abs() > duration / 2.0 {
        return 0.0;
    }
    let s = duration / 4.0;
    (-t * t / (2.0 * s * s)).exp()
}

/// Distance to `k̄` on the zone of even translations, period `π/a`.
fn wrapped(dk: f64, spacing: f64) -> f64 {
    let p = PI / spacing;
    let mut d = dk.rem_euclid(p);
    if d > p / 2.0 {
        d -= p;
    }
    d
}

/// `ψ(t,x) = g_T(t) Σ_k ψ̃(k) e^{i(k(x - x_c) - E(k)t)}` sampled at `t_i = -T/2 + (i + 1/2) δ_t` on
/// the even sites, with `ψ̃` a Gaussian of width `δ_p` around `k̄` cut at `4 δ_p`. Needs the
/// one-particle branch of `table`.
pub fn design_profile(table: &SpectrumTable, params: &PacketParams) -> Result<WavePacketProfile, HaagRuelleError> {
    let p = params;
    if !(p.delta_p > 0.0) || !p.k_center.is_finite() {
        return Err(HaagRuelleError::InvalidInput(format!("k̄ = {}, δ_p = {}", p.k_center, p.delta_p)));
    }
    if !p.x_center.is_multiple_of(2) || p.x_center >= table.sites {
        return Err(HaagRuelleError::InvalidInput(format!("packet centre {} must be an even site", p.x_center)));
    }
    let sampling = choose_time_samples(p.duration, p.epsilon, p.comm_norm, p.kappa)?;
    let a = table.spacing;
    let e0 = table.ground_state().0;
    let mut momenta = Vec::new();
    let mut nearest = (f64::INFINITY, f64::NAN);
    for s in &table.sectors {
        let dk = wrapped(s.k - p.k_center, a);
        if dk.abs() > 4.0 * p.delta_p {
            continue;
        }
        let bp = table.branch.iter().find(|b| b.m == s.m).ok_or(HaagRuelleError::MissingBranch { k: s.k })?;
        let next = s.energies.iter().copied().find(|&e| e > bp.energy + 1e-9).unwrap_or(f64::INFINITY);
        if next - bp.energy <= p.min_gap {
            return Err(HaagRuelleError::SupportSpill { k: s.k, gap: next - bp.energy });
        }
        let energy = bp.energy - e0;
        if dk.abs() < nearest.0 {
            nearest = (dk.abs(), energy);
        }
        momenta.push(MomentumWeight { m: s.m, k: s.k, weight: (-dk * dk / (2.0 * p.delta_p * p.delta_p)).exp(), energy });
    }
    if momenta.is_empty() {
        return Err(HaagRuelleError::InvalidInput(format!("no grid momentum within 4δ_p of k̄ = {}", p.k_center)));
    }
    let w2: f64 = momenta.iter().map(|m| m.weight * m.weight).sum();
    let mean_energy = momenta.iter().map(|m| m.weight * m.weight * m.energy).sum::<f64>() / w2;
    let times: Vec<f64> = (0..sampling.n).map(|i| -p.duration / 2.0 + (i as f64 + 0.5) * sampling.dt).collect();
    let sites: Vec<usize> = (0..table.sites).step_by(2).collect();
    let samples = times
        .iter()
        .map(|&t| {
            let g = envelope(t, p.duration);
            sites
                .iter()
                .map(|&x| {
                    let dx = (x as f64 - p.x_center as f64) * a;
                    momenta.iter().map(|m| Complex::from_polar(g * m.weight, m.k * dx - m.energy * t)).sum()
                })
                .collect()
        })
        .collect();
    Ok(WavePacketProfile { params: *p, spacing: a, momenta, energy_center: nearest.1, energy_width: 4.0 / p.duration, mean_energy, sampling, times, sites, samples })
}
