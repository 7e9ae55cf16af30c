//! Fermion-to-qubit encodings: Jordan-Wigner chains and the generalized superfast encoding.

mod check;
mod gse;
mod jw;

pub use check::{check_gse, random_even_graph, GseCheck};
pub use gse::{fundamental_cycles, hypercubic_preset, GseEdge, GseGraph, GseGraphFile, Walk};
pub use jw::{jw_lower, jw_raise, JwLayout, Theory};

use crate::pauli::PauliError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodingError {
    #[error("site {site} or colour {color} out of range")]
    OutOfRange { site: usize, color: usize },
    #[error("graph: {0}")]
    Graph(String),
    #[error("no edge {0}")]
    MissingEdge(usize),
    #[error("walk is not connected or not closed: {0}")]
    BrokenWalk(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}
