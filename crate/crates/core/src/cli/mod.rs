pub mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use hrwave::encodings::EncodingError;
use hrwave::haag_ruelle::HaagRuelleError;
use hrwave::interpolators::InterpolatorError;
use hrwave::lattice::LatticeError;
use hrwave::links::LinkError;
use hrwave::pauli::PauliError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::InvalidSpec(_) | LatticeError::WidthOverflow { .. } | LatticeError::Unsupported(_) | LatticeError::OddExtent(_) => CliError::Config(e.to_string()),
            LatticeError::Io(m) => CliError::Io(m),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<HaagRuelleError> for CliError {
    fn from(e: HaagRuelleError) -> Self {
        match e {
            HaagRuelleError::Lattice(l) => l.into(),
            HaagRuelleError::Interpolator(i) => i.into(),
            HaagRuelleError::Pauli(_) | HaagRuelleError::NotNormalized(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<InterpolatorError> for CliError {
    fn from(e: InterpolatorError) -> Self {
        match e {
            InterpolatorError::Coarse { .. } | InterpolatorError::Pauli(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<EncodingError> for CliError {
    fn from(e: EncodingError) -> Self {
        match e {
            EncodingError::Graph(_) | EncodingError::OutOfRange { .. } => CliError::Config(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<PauliError> for CliError {
    fn from(e: PauliError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<LinkError> for CliError {
    fn from(e: LinkError) -> Self {
        CliError::Config(e.to_string())
    }
}

pub enum Artifact {
    Json(Value),
    Bytes(Vec<u8>),
}

/// Results of a subcommand held in memory until the run directory exists.
#[derive(Default)]
pub struct Outcome {
    pub artifacts: Vec<(String, Artifact)>,
    pub violations: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) {
        self.artifacts.push((name.into(), Artifact::Json(serde_json::to_value(value).expect("result serializes"))));
    }

    pub fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).expect("flat rows serialize");
        }
        self.raw(name, w.into_inner().expect("in-memory writer"));
    }

    pub fn raw(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push((name.into(), Artifact::Bytes(bytes)));
    }

    pub fn check(&mut self, ok: bool, msg: String) {
        if !ok {
            self.violations.push(msg);
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.into(), value);
    }
}
