//! Truncated gauge-link Hilbert spaces and link operators.
//!
//! A link register is a product of label sub-registers. Each label takes `size` values stored in
//! `ceil(log2 size)` qubits; padding values never mix with valid ones.

mod sin;
mod su2;
mod su3;
mod u1;

use std::sync::Arc;

use num_complex::Complex;

use crate::pauli::{LcuDecomposition, MonomialOp, PauliError, SparseMatrix, Unitary};

pub use sin::{sin_block_encode, SinBlockReport};
pub use su2::{su2_c_pm, su2_cg, su2_electric, su2_interior, su2_label, su2_link_component, su2_space, Su2Label};
pub use su3::{su3_label, su3_link_component, su3_space, DiagonalTable, Su3Label, SU3_NAMES};
pub use u1::{u1_electric, u1_link_u, u1_space};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinkError {
    #[error("invalid labels: {0}")]
    InvalidLabel(String),
    #[error("diagonal entry {0} outside [-1, 1]")]
    OutOfRange(f64),
    #[error("diagonal table misses {0}")]
    MissingEntry(String),
    #[error("table: {0}")]
    Table(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// One label sub-register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelRegister {
    pub name: &'static str,
    pub size: usize,
    pub qubits: usize,
    pub offset: usize,
}

/// Product of label registers with a predicate selecting the physical states.
#[derive(Clone)]
pub struct LinkSpace {
    registers: Vec<LabelRegister>,
    width: usize,
    physical: Vec<u64>,
}

impl std::fmt::Debug for LinkSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinkSpace").field("registers", &self.registers).field("physical", &self.physical.len()).finish()
    }
}

impl LinkSpace {
    /// `sizes` are `(name, number of values)`; `is_physical` receives the label values.
    pub fn new(sizes: &[(&'static str, usize)], is_physical: impl Fn(&[usize]) -> bool) -> Self {
        let mut registers = Vec::new();
        let mut offset = 0;
        for &(name, size) in sizes {
            let qubits = size.next_power_of_two().trailing_zeros() as usize;
            registers.push(LabelRegister { name, size, qubits, offset });
            offset += qubits;
        }
        let mut s = Self { registers, width: offset, physical: Vec::new() };
        let mut physical = Vec::new();
        for idx in 0..1u64 << s.width {
            if let Some(v) = s.decode(idx) {
                if is_physical(&v) {
                    physical.push(idx);
                }
            }
        }
        s.physical = physical;
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn registers(&self) -> &[LabelRegister] {
        &self.registers
    }

    /// Physical basis states, ascending register index.
    pub fn physical(&self) -> &[u64] {
        &self.physical
    }

    /// Label values, or `None` for a padding state.
    pub fn decode(&self, idx: u64) -> Option<Vec<usize>> {
        self.registers
            .iter()
            .map(|r| {
                let v = ((idx >> r.offset) & ((1u64 << r.qubits) - 1)) as usize;
                (v < r.size).then_some(v)
            })
            .collect()
    }

    pub fn encode(&self, values: &[usize]) -> u64 {
        self.registers.iter().zip(values).fold(0u64, |acc, (r, &v)| acc | ((v as u64) << r.offset))
    }

    /// Wrap-around shift `v -> v + s (mod size)` of one register; padding values are fixed.
    pub fn shift_op(&self, register: usize, s: i64) -> MonomialOp<f64> {
        let r = &self.registers[register];
        let dim = 1usize << r.qubits;
        let target = (0..dim)
            .map(|v| if v < r.size { (v as i64 + s).rem_euclid(r.size as i64) as u32 } else { v as u32 })
            .collect();
        MonomialOp::permutation(r.qubits, target).expect("register width")
    }

    /// Shifted index and whether the shift wrapped around.
    fn shift_index(&self, idx: u64, register: usize, s: i64) -> (u64, bool) {
        let r = &self.registers[register];
        let mask = ((1u64 << r.qubits) - 1) << r.offset;
        let v = ((idx & mask) >> r.offset) as usize;
        if v >= r.size {
            return (idx, false);
        }
        let raw = v as i64 + s;
        let t = raw.rem_euclid(r.size as i64) as u64;
        ((idx & !mask) | (t << r.offset), raw != t as i64)
    }
}

/// Factor of a link-operator term, applied right to left.
#[derive(Clone)]
pub enum LinkFactor {
    Shift { register: usize, by: i64 },
    /// Diagonal entries indexed by the full link register; padding entries are ignored.
    Diagonal { name: String, values: Arc<Vec<f64>> },
}

/// Product of factors collapsed to `shift sequence * diag(d)` with `d` evaluated on the input state.
#[derive(Clone)]
pub struct LinkTerm {
    pub label: String,
    pub factors: Vec<LinkFactor>,
    pub shifts: Vec<(usize, i64)>,
    pub diagonal: Arc<Vec<f64>>,
}

/// Decomposition of one link-operator component into permutations times bounded diagonals.
#[derive(Clone)]
pub struct LinkOpDecomposition {
    space: Arc<LinkSpace>,
    coefficient: f64,
    terms: Vec<LinkTerm>,
    truncating: bool,
}

impl LinkOpDecomposition {
    /// Terms vanish on inputs whose shifts wrap around or end outside the physical states.
    pub fn new(space: Arc<LinkSpace>, coefficient: f64) -> Self {
        Self { space, coefficient, terms: Vec::new(), truncating: true }
    }

    /// Terms keep the wrap-around matrix elements (the truncated U(1) link).
    pub fn wrapping(space: Arc<LinkSpace>, coefficient: f64) -> Self {
        Self { space, coefficient, terms: Vec::new(), truncating: false }
    }

    pub fn space(&self) -> &Arc<LinkSpace> {
        &self.space
    }

    pub fn terms(&self) -> &[LinkTerm] {
        &self.terms
    }

    /// Append the product `factors[0] * factors[1] * ...`.
    pub fn push(&mut self, label: impl Into<String>, factors: Vec<LinkFactor>) -> Result<(), LinkError> {
        let dim = 1usize << self.space.width;
        let mut diag = vec![0.0; dim];
        for (idx, d) in diag.iter_mut().enumerate() {
            let mut cur = idx as u64;
            let mut acc = 1.0;
            let mut valid = self.space.decode(cur).is_some();
            for f in factors.iter().rev() {
                match f {
                    LinkFactor::Shift { register, by } => {
                        let (next, wrapped) = self.space.shift_index(cur, *register, *by);
                        valid &= !(self.truncating && wrapped);
                        cur = next;
                    }
                    LinkFactor::Diagonal { values, .. } => acc *= values[cur as usize],
                }
            }
            if self.truncating && self.space.physical.binary_search(&cur).is_err() {
                valid = false;
            }
            *d = if valid { acc } else { 0.0 };
        }
        if let Some(&bad) = diag.iter().find(|v| v.abs() > 1.0 + 1e-12) {
            return Err(LinkError::OutOfRange(bad));
        }
        let shifts = factors
            .iter()
            .rev()
            .filter_map(|f| match f {
                LinkFactor::Shift { register, by } => Some((*register, *by)),
                LinkFactor::Diagonal { .. } => None,
            })
            .collect();
        self.terms.push(LinkTerm { label: label.into(), factors, shifts, diagonal: Arc::new(diag) });
        Ok(())
    }

    /// Compositional 1-norm: each term is a permutation times one diagonal bounded by 1, and the
    /// diagonal costs 1 through the sin construction.
    pub fn one_norm(&self) -> f64 {
        self.coefficient.abs() * self.terms.len() as f64
    }

    /// Matrix column, unmerged.
    pub fn column(&self, idx: u64) -> Vec<(u64, f64)> {
        self.terms
            .iter()
            .map(|t| {
                let v = t.diagonal[idx as usize] * self.coefficient;
                let mut cur = idx;
                for &(r, s) in &t.shifts {
                    cur = self.space.shift_index(cur, r, s).0;
                }
                (cur, v)
            })
            .collect()
    }

    /// Matrix on the full link register.
    pub fn matrix(&self) -> SparseMatrix<f64> {
        let dim = 1usize << self.space.width;
        let trip = (0..dim as u64)
            .flat_map(|c| self.column(c).into_iter().map(move |(r, v)| (r as usize, c as usize, Complex::new(v, 0.0))))
            .collect();
        SparseMatrix::from_triplets(dim, trip)
    }

    /// Matrix restricted to the physical states (in [`LinkSpace::physical`] order).
    pub fn physical_matrix(&self) -> SparseMatrix<f64> {
        let idx: Vec<usize> = self.space.physical.iter().map(|&b| b as usize).collect();
        self.matrix().restrict(&idx)
    }

    /// LCU on a register of `width` qubits with the link occupying `positions`: every term
    /// becomes `shifts * e^{+i f}` and `shifts * e^{-i f}` with coefficients `±1/(2i)`, `f = arcsin d`.
    pub fn to_lcu(&self, width: usize, positions: &[usize]) -> Result<LcuDecomposition<f64>, LinkError> {
        let mut out = LcuDecomposition::empty(width);
        let shift_unitaries: Vec<Vec<Unitary<f64>>> = self
            .terms
            .iter()
            .map(|t| {
                t.shifts
                    .iter()
                    .map(|&(r, s)| {
                        let reg = &self.space.registers[r];
                        let qs = positions[reg.offset..reg.offset + reg.qubits].to_vec();
                        Unitary::local(width, qs, Arc::new(self.space.shift_op(r, s)))
                    })
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, PauliError>>()?;
        for (t, shifts) in self.terms.iter().zip(shift_unitaries) {
            if self.space.physical.iter().all(|&b| t.diagonal[b as usize] == 1.0) {
                // a pure permutation needs no sin construction
                let mut u = Unitary::identity(width);
                for s in &shifts {
                    u = s.compose(&u)?;
                }
                out.push(Complex::new(self.coefficient, 0.0), u)?;
                continue;
            }
            for sign in [1.0, -1.0] {
                let angles: Vec<f64> = t.diagonal.iter().map(|d| sign * d.clamp(-1.0, 1.0).asin()).collect();
                let phase = Unitary::local(width, positions.to_vec(), Arc::new(MonomialOp::diagonal_phase(self.space.width, &angles)?))?;
                // shifts were recorded in application order; the product applies the last factor first
                let mut u = phase;
                for s in &shifts {
                    u = s.compose(&u)?;
                }
                out.push(Complex::new(0.0, -sign * 0.5 * self.coefficient), u)?;
            }
        }
        Ok(out)
    }

    pub fn adjoint_matrix(&self) -> SparseMatrix<f64> {
        self.matrix().adjoint()
    }
}
