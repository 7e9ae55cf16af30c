//! Sweeps over packet parameters.

use std::f64::consts::PI;

use serde::Serialize;

use super::{FidelityBreakdown, HaagRuelleError, PacketParams, PacketSystem};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepPoint {
    pub delta_p: f64,
    pub duration: f64,
    pub time_samples: usize,
    pub rho: f64,
    pub fidelity: FidelityBreakdown,
}

/// Packets at `(δ_p, T)` for each entry of `configs`, other parameters from `base`.
pub fn leakage_sweep(system: &PacketSystem, base: &PacketParams, configs: &[(f64, f64)]) -> Result<Vec<SweepPoint>, HaagRuelleError> {
    configs
        .iter()
        .map(|&(delta_p, duration)| {
            let p = PacketParams { delta_p, duration, ..*base };
            let prof = system.profile(&p)?;
            let asm = system.assemble(&system.plan(&prof))?;
            Ok(SweepPoint { delta_p, duration, time_samples: prof.sampling.n, rho: asm.rho, fidelity: system.fidelity(&asm)? })
        })
        .collect()
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; undefined for two points.
    pub stderr: Option<f64>,
    /// `slope ± 2 stderr`.
    pub interval: Option<(f64, f64)>,
    pub prediction: f64,
    pub points: usize,
}

pub fn fit_loglog(xs: &[f64], ys: &[f64], prediction: f64) -> Result<Fit, HaagRuelleError> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(HaagRuelleError::InvalidInput("log-log fit needs at least two positive points".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(HaagRuelleError::InvalidInput("log-log fit needs distinct abscissae".into()));
    }
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let intercept = my - slope * mx;
    let stderr = (lx.len() > 2).then(|| {
        let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    });
    Ok(Fit { slope, intercept, stderr, interval: stderr.map(|s| (slope - 2.0 * s, slope + 2.0 * s)), prediction, points: lx.len() })
}

/// Where `δ_p` is resolved by the momentum grid and the packet fits on the lattice.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Validity {
    pub grid_spacing: f64,
    pub min_delta_p: f64,
    pub max_delta_p: f64,
}

impl Validity {
    /// `δ_p ≥ 2Δk`, spatial width `2/δ_p` at most a quarter of the ring, and `δ_p` below the half zone.
    pub fn of(system: &PacketSystem) -> Self {
        let s = system.spec();
        let cells = (s.sites / 2) as f64;
        let dk = PI / (cells * s.spacing);
        let ring = s.sites as f64 * s.spacing;
        Self { grid_spacing: dk, min_delta_p: (2.0 * dk).max(8.0 / ring), max_delta_p: PI / (2.0 * s.spacing) }
    }

    pub fn contains(&self, delta_p: f64) -> bool {
        delta_p >= self.min_delta_p * (1.0 - 1e-12) && delta_p <= self.max_delta_p * (1.0 + 1e-12)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingRow {
    pub delta_p: f64,
    pub k_center: f64,
    pub mean_energy: f64,
    pub rho: f64,
    pub one_particle: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// `ρ` against `δ_p` at the first `k̄`, against `d = 1`; `None` when the sweep cannot be fitted.
    pub delta_fit: Option<Fit>,
    /// `ρ` against `Ē` at the first `δ_p`, against `-1`.
    pub energy_fit: Option<Fit>,
    pub validity: Validity,
}

/// `ρ` on the grid `deltas × k_centers`; every `δ_p` must lie in the [`Validity`] window.
pub fn scaling_study(system: &PacketSystem, base: &PacketParams, deltas: &[f64], k_centers: &[f64]) -> Result<ScalingTable, HaagRuelleError> {
    let validity = Validity::of(system);
    if let Some(d) = deltas.iter().find(|d| !validity.contains(**d)) {
        return Err(HaagRuelleError::OutsideValidity(format!("δ_p = {d} outside [{}, {}]", validity.min_delta_p, validity.max_delta_p)));
    }
    if deltas.is_empty() || k_centers.is_empty() {
        return Err(HaagRuelleError::InvalidInput("empty sweep".into()));
    }
    let mut rows = Vec::new();
    for &k_center in k_centers {
        for &delta_p in deltas {
            let p = PacketParams { k_center, delta_p, ..*base };
            let prof = system.profile(&p)?;
            let asm = system.assemble(&system.plan(&prof))?;
            rows.push(ScalingRow { delta_p, k_center, mean_energy: prof.mean_energy, rho: asm.rho, one_particle: system.fidelity(&asm)?.one_particle });
        }
    }
    let nd = deltas.len();
    let delta_fit = fit_loglog(deltas, &rows[..nd].iter().map(|r| r.rho).collect::<Vec<_>>(), 1.0).ok();
    let first: Vec<&ScalingRow> = rows.iter().step_by(nd).collect();
    let energy_fit = fit_loglog(&first.iter().map(|r| r.mean_energy).collect::<Vec<_>>(), &first.iter().map(|r| r.rho).collect::<Vec<_>>(), -1.0).ok();
    Ok(ScalingTable { rows, delta_fit, energy_fit, validity })
}

/// Repetitions for two independent packets: plain and with amplitude amplification.
pub fn pair_repetitions(rho1: f64, rho2: f64) -> (f64, f64) {
    let r = rho1 * rho2;
    (1.0 / r, 1.0 / r.sqrt())
}
