//! Experiment configuration: one TOML file with flat sections, every key optional.

use std::path::{Path, PathBuf};

use hrwave::encodings::Theory;
use hrwave::lattice::{Boundary, Truncation};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub lattice: LatticeSection,
    pub packet: PacketSection,
    pub encoding: EncodingSection,
    pub paths: PathsSection,
    pub study: StudySection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub seed: u64,
    /// Relative to the output root.
    pub output: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { seed: 7, output: PathBuf::from("runs") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeSection {
    pub theory: Theory,
    pub sites: Vec<usize>,
    pub spacing: f64,
    pub mass: f64,
    pub coupling: f64,
    pub cutoffs: Vec<usize>,
    pub boundary: Boundary,
    pub truncation: Truncation,
}

impl Default for LatticeSection {
    fn default() -> Self {
        Self { theory: Theory::U1, sites: vec![4], spacing: 1.0, mass: 1.0, coupling: 1.0, cutoffs: vec![1], boundary: Boundary::Periodic, truncation: Truncation::Cyclic }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PacketSection {
    pub interpolator: String,
    /// Minimum weight of `O(0)|Ω>` on a level for it to count as the one-particle branch.
    pub threshold: f64,
    pub k_center: f64,
    pub delta_p: f64,
    pub duration: f64,
    pub epsilon: f64,
    pub x_center: usize,
    /// Largest system register, in qubits, simulated with ancillas.
    pub register_cap: usize,
}

impl Default for PacketSection {
    fn default() -> Self {
        Self { interpolator: "O1".into(), threshold: 0.5, k_center: 0.0, delta_p: 1.0, duration: 2.0, epsilon: 0.1, x_center: 0, register_cap: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoder {
    Jw,
    Gse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EncodingSection {
    pub encoder: Encoder,
    /// Random graphs checked when no graph file is given.
    pub graphs: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for EncodingSection {
    fn default() -> Self {
        Self { encoder: Encoder::Gse, graphs: 20, max_vertices: 6, max_edges: 10 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathsSection {
    /// JSON table of SU(3) diagonal matrix elements.
    pub su3_table: Option<PathBuf>,
    /// JSON graph for `encode-check`.
    pub graph: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudySection {
    /// Empty: five log-spaced values across the validity window.
    pub deltas: Vec<f64>,
    pub k_centers: Vec<f64>,
    /// `(δ_p, T)` pairs for leakage sweeps and `lcu-verify`.
    pub sweep: Vec<[f64; 2]>,
}

impl Default for StudySection {
    fn default() -> Self {
        Self { deltas: Vec::new(), k_centers: vec![0.0], sweep: vec![[2.0, 1.0], [1.0, 2.0], [0.5, 3.0]] }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses `path`, resolving relative paths in `[paths]` against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.paths.su3_table, &mut cfg.paths.graph].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical serialization, hex.
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let l = &self.lattice;
        let positive = |name: &str, v: f64| if v.is_finite() && v > 0.0 { Ok(()) } else { Err(bad(format!("{name} must be positive, got {v}"))) };
        positive("lattice.spacing", l.spacing)?;
        if !l.mass.is_finite() {
            return Err(bad("lattice.mass must be finite"));
        }
        positive("lattice.coupling", l.coupling)?;
        if l.sites.is_empty() || l.sites.iter().any(|&n| n < 2 || n % 2 != 0) {
            return Err(bad(format!("lattice.sites must be even and at least 2: {:?}", l.sites)));
        }
        if l.cutoffs.is_empty() || l.cutoffs.contains(&0) {
            return Err(bad(format!("lattice.cutoffs must be positive: {:?}", l.cutoffs)));
        }
        let p = &self.packet;
        positive("packet.delta_p", p.delta_p)?;
        positive("packet.duration", p.duration)?;
        positive("packet.epsilon", p.epsilon)?;
        if !(p.threshold > 0.0 && p.threshold <= 1.0) {
            return Err(bad(format!("packet.threshold must lie in (0, 1], got {}", p.threshold)));
        }
        if !p.k_center.is_finite() {
            return Err(bad("packet.k_center must be finite"));
        }
        if !p.x_center.is_multiple_of(2) {
            return Err(bad(format!("packet.x_center must be even, got {}", p.x_center)));
        }
        let e = &self.encoding;
        if e.max_vertices < 2 || e.max_edges < 2 {
            return Err(bad("encoding.max_vertices and encoding.max_edges must be at least 2"));
        }
        let s = &self.study;
        for d in &s.deltas {
            positive("study.deltas", *d)?;
        }
        if s.k_centers.iter().any(|k| !k.is_finite()) {
            return Err(bad("study.k_centers must be finite"));
        }
        for [d, t] in &s.sweep {
            positive("study.sweep δ_p", *d)?;
            positive("study.sweep T", *t)?;
        }
        Ok(())
    }

    fn check_files(&self) -> Result<(), CliError> {
        for p in [&self.paths.su3_table, &self.paths.graph].into_iter().flatten() {
            if !p.is_file() {
                return Err(bad(format!("referenced file {} does not exist", p.display())));
            }
        }
        Ok(())
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
