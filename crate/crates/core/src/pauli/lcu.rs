use std::sync::Arc;

use num_complex::Complex;

use super::{OperatorSum, PauliError, PauliString, SparseMatrix, StateVector};
use crate::scalar::Real;

/// Generalized permutation on a small local register: `U|b> = phase[b] |target[b]>`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOp<T: Real> {
    width: usize,
    target: Vec<u32>,
    phase: Vec<Complex<T>>,
}

impl<T: Real> MonomialOp<T> {
    pub fn new(width: usize, target: Vec<u32>, phase: Vec<Complex<T>>) -> Result<Self, PauliError> {
        let dim = 1usize << width;
        if target.len() != dim || phase.len() != dim {
            return Err(PauliError::WidthMismatch { left: dim, right: target.len() });
        }
        Ok(Self { width, target, phase })
    }

    pub fn permutation(width: usize, target: Vec<u32>) -> Result<Self, PauliError> {
        let one = Complex::new(T::one(), T::zero());
        let dim = target.len();
        Self::new(width, target, vec![one; dim])
    }

    pub fn diagonal_phase(width: usize, angles: &[T]) -> Result<Self, PauliError> {
        let target = (0..angles.len() as u32).collect();
        Self::new(width, target, angles.iter().map(|&a| Complex::new(a.cos(), a.sin())).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn act(&self, b: usize) -> (usize, Complex<T>) {
        (self.target[b] as usize, self.phase[b])
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &MonomialOp<T>) -> Result<MonomialOp<T>, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        let (target, phase) = (0..other.target.len())
            .map(|b| {
                let (m, p) = other.act(b);
                let (r, q) = self.act(m);
                (r as u32, p * q)
            })
            .unzip();
        MonomialOp::new(self.width, target, phase)
    }

    /// Inverse map with conjugated phases; meaningful only for bijective targets.
    pub fn adjoint(&self) -> MonomialOp<T> {
        let mut target = vec![0u32; self.target.len()];
        let mut phase = vec![Complex::new(T::zero(), T::zero()); self.phase.len()];
        for (b, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            target[t as usize] = b as u32;
            phase[t as usize] = p.conj();
        }
        MonomialOp { width: self.width, target, phase }
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &t in &self.target {
            let t = t as usize;
            if t >= seen.len() || seen[t] {
                return false;
            }
            seen[t] = true;
        }
        self.phase.iter().all(|p| (p.norm() - T::one()).abs() <= tol)
    }
}

/// One factor of a product unitary.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor<T: Real> {
    Pauli(PauliString),
    /// Monomial acting on the listed register qubits (local bit `q` is `qubits[q]`).
    Local { qubits: Vec<usize>, op: Arc<MonomialOp<T>> },
}

/// Product of factors `f[0] f[1] ... f[n-1]` acting on a register of `width` qubits.
/// Every factor is a generalized permutation, so the product maps basis states to basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real> {
    width: usize,
    factors: Vec<Factor<T>>,
}

impl<T: Real> Unitary<T> {
    pub fn identity(width: usize) -> Self {
        Self { width, factors: Vec::new() }
    }

    pub fn pauli(s: PauliString) -> Self {
        Self { width: s.width(), factors: vec![Factor::Pauli(s)] }
    }

    pub fn local(width: usize, qubits: Vec<usize>, op: Arc<MonomialOp<T>>) -> Result<Self, PauliError> {
        if qubits.len() != op.width() || qubits.iter().any(|&q| q >= width) {
            return Err(PauliError::QubitOutOfRange { width });
        }
        Ok(Self { width, factors: vec![Factor::Local { qubits, op }] })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    /// `self * other`.
    pub fn compose(&self, other: &Unitary<T>) -> Result<Unitary<T>, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Unitary { width: self.width, factors })
    }

    pub fn adjoint(&self) -> Unitary<T> {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| match f {
                Factor::Pauli(s) => Factor::Pauli(*s),
                Factor::Local { qubits, op } => Factor::Local { qubits: qubits.clone(), op: Arc::new(op.adjoint()) },
            })
            .collect();
        Unitary { width: self.width, factors }
    }

    /// Pauli expansion of the product; local factors are expanded on their own qubits.
    pub fn to_operator_sum(&self) -> Result<OperatorSum<T>, PauliError> {
        let mut out = OperatorSum::identity(self.width)?;
        for f in &self.factors {
            let op = match f {
                Factor::Pauli(s) => OperatorSum::from_term(super::PauliTerm::new(Complex::new(T::one(), T::zero()), *s)),
                Factor::Local { qubits, op } => {
                    let dim = 1usize << op.width();
                    let mut m = nalgebra::DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
                    for b in 0..dim {
                        let (t, p) = op.act(b);
                        m[(t, b)] = p;
                    }
                    OperatorSum::from_dense(&m)?.embed(self.width, qubits)?
                }
            };
            out = out.mul(&op)?;
        }
        Ok(out)
    }

    pub fn act(&self, basis: u64) -> (u64, Complex<T>) {
        let mut b = basis;
        let mut ph = Complex::new(T::one(), T::zero());
        for f in self.factors.iter().rev() {
            match f {
                Factor::Pauli(s) => {
                    let (r, k) = s.act(b);
                    b = r;
                    ph = crate::scalar::rotate_i(ph, k);
                }
                Factor::Local { qubits, op } => {
                    let mut local = 0usize;
                    for (q, &p) in qubits.iter().enumerate() {
                        local |= (((b >> p) & 1) as usize) << q;
                    }
                    let (t, p) = op.act(local);
                    for (q, &pos) in qubits.iter().enumerate() {
                        b = (b & !(1u64 << pos)) | ((((t >> q) & 1) as u64) << pos);
                    }
                    ph = ph * p;
                }
            }
        }
        (b, ph)
    }
}

/// A single weighted unitary in an LCU expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct LcuTerm<T: Real> {
    pub coefficient: Complex<T>,
    pub unitary: Unitary<T>,
}

/// Linear combination of unitaries `sum_j c_j U_j` with 1-norm `C = sum_j |c_j|`.
///
/// Terms are kept exactly as constructed (no merging), so `C` reflects the expansion and
/// not the minimal norm of the represented operator.
#[derive(Clone, Debug, PartialEq)]
pub struct LcuDecomposition<T: Real> {
    width: usize,
    terms: Vec<LcuTerm<T>>,
}

impl<T: Real> LcuDecomposition<T> {
    pub fn empty(width: usize) -> Self {
        Self { width, terms: Vec::new() }
    }

    pub fn single(coefficient: Complex<T>, unitary: Unitary<T>) -> Self {
        Self { width: unitary.width(), terms: vec![LcuTerm { coefficient, unitary }] }
    }

    /// Each Pauli term becomes one unitary.
    pub fn from_operator_sum(op: &OperatorSum<T>) -> Self {
        let terms = op
            .terms()
            .iter()
            .map(|t| LcuTerm { coefficient: t.coefficient(), unitary: Unitary::pauli(*t.string()) })
            .collect();
        Self { width: op.width(), terms }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[LcuTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coefficient: Complex<T>, unitary: Unitary<T>) -> Result<(), PauliError> {
        if unitary.width() != self.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: unitary.width() });
        }
        self.terms.push(LcuTerm { coefficient, unitary });
        Ok(())
    }

    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|t| t.coefficient.norm()).sum()
    }

    pub fn concat(&self, other: &Self) -> Result<Self, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { width: self.width, terms })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            width: self.width,
            terms: self.terms.iter().map(|t| LcuTerm { coefficient: t.coefficient * s, unitary: t.unitary.clone() }).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            width: self.width,
            terms: self.terms.iter().map(|t| LcuTerm { coefficient: t.coefficient.conj(), unitary: t.unitary.adjoint() }).collect(),
        }
    }

    /// Expansion of the product `self * other`; coefficients multiply and `C` is multiplicative.
    pub fn product(&self, other: &Self) -> Result<Self, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(LcuTerm { coefficient: a.coefficient * b.coefficient, unitary: a.unitary.compose(&b.unitary)? });
            }
        }
        Ok(Self { width: self.width, terms })
    }

    /// Column `basis` of the represented operator, unmerged.
    pub fn column(&self, basis: u64) -> impl Iterator<Item = (u64, Complex<T>)> + '_ {
        self.terms.iter().map(move |t| {
            let (r, p) = t.unitary.act(basis);
            (r, t.coefficient * p)
        })
    }

    pub fn apply(&self, s: &StateVector<T>) -> Result<StateVector<T>, PauliError> {
        if s.width() != self.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: s.width() });
        }
        let mut out = StateVector::zero(self.width);
        let amps = s.amplitudes();
        let o = out.amplitudes_mut();
        for t in &self.terms {
            for (b, a) in amps.iter().enumerate() {
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let (r, p) = t.unitary.act(b as u64);
                o[r as usize] = o[r as usize] + t.coefficient * p * a;
            }
        }
        Ok(out)
    }

    pub fn to_sparse(&self, cap: usize) -> Result<SparseMatrix<T>, PauliError> {
        if self.width > cap {
            return Err(PauliError::WidthTooLarge { width: self.width, cap });
        }
        let dim = 1usize << self.width;
        let mut trip = Vec::new();
        for c in 0..dim as u64 {
            for (r, v) in self.column(c) {
                trip.push((r as usize, c as usize, v));
            }
        }
        Ok(SparseMatrix::from_triplets(dim, trip))
    }

    /// Restriction of the represented operator to a basis subset; entries leaving the
    /// subset are reported through the returned leakage weight (sum of moduli).
    pub fn restrict(&self, basis: &[u64]) -> (SparseMatrix<T>, T) {
        restrict_columns(basis, |b| self.column(b).collect())
    }

    /// The represented operator as a merged Pauli sum.
    pub fn to_operator_sum(&self) -> Result<OperatorSum<T>, PauliError> {
        let mut out = OperatorSum::zero(self.width);
        for t in &self.terms {
            out = out.add(&t.unitary.to_operator_sum()?.scale(t.coefficient))?;
        }
        Ok(out)
    }

    /// Check that every term is unitary by materialization on the full register.
    pub fn check_unitary(&self, cap: usize, tol: T) -> Result<bool, PauliError> {
        if self.width > cap {
            return Err(PauliError::WidthTooLarge { width: self.width, cap });
        }
        let dim = 1usize << self.width;
        for t in &self.terms {
            let mut seen = vec![false; dim];
            for b in 0..dim as u64 {
                let (r, p) = t.unitary.act(b);
                if seen[r as usize] || (p.norm() - T::one()).abs() > tol {
                    return Ok(false);
                }
                seen[r as usize] = true;
            }
        }
        Ok(true)
    }
}

/// Build the restriction of a column-defined operator onto `basis` (sorted or not).
pub fn restrict_columns<T: Real, F>(basis: &[u64], column: F) -> (SparseMatrix<T>, T)
where
    F: Fn(u64) -> Vec<(u64, Complex<T>)>,
{
    let pos: std::collections::HashMap<u64, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut trip = Vec::new();
    let mut leak_acc: Vec<(u64, Complex<T>)> = Vec::new();
    for (j, &b) in basis.iter().enumerate() {
        for (r, v) in column(b) {
            match pos.get(&r) {
                Some(&i) => trip.push((i, j, v)),
                None => leak_acc.push((r, v)),
            }
        }
    }
    // leakage: merge outside-subset contributions per (row) before taking moduli
    leak_acc.sort_by_key(|&(r, _)| r);
    let mut leak = T::zero();
    let mut i = 0;
    while i < leak_acc.len() {
        let r = leak_acc[i].0;
        let mut s = Complex::new(T::zero(), T::zero());
        while i < leak_acc.len() && leak_acc[i].0 == r {
            s = s + leak_acc[i].1;
            i += 1;
        }
        leak = leak + s.norm();
    }
    (SparseMatrix::from_triplets(basis.len(), trip), leak)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_norm_of_two_paulis() {
        let op = OperatorSum::from_terms(
            2,
            vec![
                super::super::PauliTerm::parse(Complex::new(0.5, 0.0), "XZ").unwrap(),
                super::super::PauliTerm::parse(Complex::new(0.0, -0.5), "YY").unwrap(),
            ],
        )
        .unwrap();
        let d = LcuDecomposition::from_operator_sum(&op);
        assert!((d.one_norm() - 1.0f64).abs() < 1e-15);
        assert_eq!(LcuDecomposition::<f64>::empty(3).one_norm(), 0.0);
    }

    #[test]
    fn local_factor_relabels_bits() {
        // cyclic decrement on 2 qubits placed at register qubits (2, 0)
        let op = Arc::new(MonomialOp::<f64>::permutation(2, vec![3, 0, 1, 2]).unwrap());
        let u = Unitary::local(3, vec![2, 0], op).unwrap();
        // register basis b=0b001: qubit0=1 -> local bit1 = 1, qubit2=0 -> local bit0 = 0: local=2 -> 1
        let (r, _) = u.act(0b001);
        assert_eq!(r, 0b100);
    }
}
