//! Haag-Ruelle wave-packet construction toolkit for small lattice gauge theories.

pub mod encodings;
pub mod haag_ruelle;
pub mod interpolators;
pub mod lattice;
pub mod links;
pub mod pauli;
pub mod scalar;

pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type PauliTerm64 = pauli::PauliTerm<f64>;
pub type PauliTerm32 = pauli::PauliTerm<f32>;
pub type OperatorSum64 = pauli::OperatorSum<f64>;
pub type OperatorSum32 = pauli::OperatorSum<f32>;
pub type StateVector64 = pauli::StateVector<f64>;
pub type StateVector32 = pauli::StateVector<f32>;
pub type LcuDecomposition64 = pauli::LcuDecomposition<f64>;
pub type SparseMatrix64 = pauli::SparseMatrix<f64>;
