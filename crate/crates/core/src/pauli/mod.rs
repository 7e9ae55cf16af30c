//! Complex-weighted Pauli strings and operators built from them.

mod lcu;
mod norm;
mod sparse;
mod state;
mod string;
mod sum;
mod term;
mod text;

pub use lcu::{restrict_columns, Factor, LcuDecomposition, LcuTerm, MonomialOp, Unitary};
pub use norm::{nested_commutator_norm, spectral_norm, NormOptions};
pub use sparse::SparseMatrix;
pub use state::StateVector;
pub use string::{Letter, PauliString, MAX_WIDTH};
pub use sum::{MaterializeCaps, OperatorSum};
pub use term::PauliTerm;
pub use text::{parse_operator_sum, write_operator_sum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PauliError {
    #[error("width {width} exceeds cap {cap}")]
    WidthTooLarge { width: usize, cap: usize },
    #[error("qubit or basis index out of range for width {width}")]
    QubitOutOfRange { width: usize },
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("matrix dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("power iteration did not converge after {iterations} iterations")]
    Convergence { iterations: usize },
}
