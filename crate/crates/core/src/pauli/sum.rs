use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex;

use super::{Letter, PauliError, PauliString, PauliTerm, SparseMatrix, StateVector};
use crate::scalar::Real;

/// Register-width caps for materialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaterializeCaps {
    pub dense: usize,
    pub sparse: usize,
}

impl Default for MaterializeCaps {
    fn default() -> Self {
        Self { dense: 16, sparse: 24 }
    }
}

/// Number of terms per block in [`OperatorSum::apply_parallel`]. Fixed so that the
/// reduction tree does not depend on the thread count.
const APPLY_BLOCK: usize = 32;

/// Canonical sum of Pauli terms on a fixed-width register.
///
/// Terms are merged by string, exact zeros removed and the remainder sorted
/// lexicographically by letters; the exact phase of each term is folded into its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSum<T: Real> {
    width: usize,
    terms: Vec<PauliTerm<T>>,
}

impl<T: Real> OperatorSum<T> {
    pub fn zero(width: usize) -> Self {
        Self { width, terms: Vec::new() }
    }

    pub fn identity(width: usize) -> Result<Self, PauliError> {
        Self::from_terms(width, vec![PauliTerm::identity(width)?])
    }

    pub fn from_term(term: PauliTerm<T>) -> Self {
        let width = term.width();
        Self::canonical_from(width, vec![term])
    }

    pub fn from_terms(width: usize, terms: Vec<PauliTerm<T>>) -> Result<Self, PauliError> {
        if let Some(t) = terms.iter().find(|t| t.width() != width) {
            return Err(PauliError::WidthMismatch { left: width, right: t.width() });
        }
        Ok(Self::canonical_from(width, terms))
    }

    /// Single letter on one qubit.
    pub fn letter(width: usize, qubit: usize, letter: Letter) -> Result<Self, PauliError> {
        Ok(Self::from_term(PauliTerm::single(width, qubit, letter)?))
    }

    /// `σ^+ = (X + iY)/2 = |0><1|`.
    pub fn sigma_plus(width: usize, qubit: usize) -> Result<Self, PauliError> {
        Self::ladder(width, qubit, T::one())
    }

    /// `σ^- = (X - iY)/2 = |1><0|`.
    pub fn sigma_minus(width: usize, qubit: usize) -> Result<Self, PauliError> {
        Self::ladder(width, qubit, -T::one())
    }

    fn ladder(width: usize, qubit: usize, sign: T) -> Result<Self, PauliError> {
        let half = T::lit(0.5);
        Self::from_terms(
            width,
            vec![
                PauliTerm::new(Complex::new(half, T::zero()), PauliString::single(width, qubit, Letter::X)?),
                PauliTerm::new(Complex::new(T::zero(), sign * half), PauliString::single(width, qubit, Letter::Y)?),
            ],
        )
    }

    fn canonical_from(width: usize, terms: Vec<PauliTerm<T>>) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let mut index: HashMap<PauliString, usize> = HashMap::with_capacity(terms.len());
        let mut acc: Vec<(PauliString, Complex<T>)> = Vec::with_capacity(terms.len());
        for t in terms {
            match index.get(t.string()) {
                Some(&i) => acc[i].1 = acc[i].1 + t.coefficient(),
                None => {
                    index.insert(*t.string(), acc.len());
                    acc.push((*t.string(), t.coefficient()));
                }
            }
        }
        let mut terms: Vec<PauliTerm<T>> =
            acc.into_iter().filter(|(_, c)| *c != zero).map(|(s, c)| PauliTerm::new(c, s)).collect();
        terms.sort_by(|a, b| a.string().cmp(b.string()));
        Self { width, terms }
    }

    pub fn canonical(&self) -> Self {
        Self::canonical_from(self.width, self.terms.clone())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_width(&self, other: &Self) -> Result<(), PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_width(other)?;
        Ok(Self::canonical_from(self.width, self.terms.iter().chain(&other.terms).copied().collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PauliError> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::canonical_from(self.width, self.terms.iter().map(|t| t.scale(s)).collect())
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_width(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.multiply(b)?);
            }
        }
        Ok(Self::canonical_from(self.width, out))
    }

    /// Product of a list of operators, left to right.
    pub fn product(width: usize, factors: &[&Self]) -> Result<Self, PauliError> {
        let mut acc = Self::identity(width)?;
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> Self {
        Self::canonical_from(self.width, self.terms.iter().map(|t| t.adjoint()).collect())
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, PauliError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, PauliError> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// Drop terms whose coefficient modulus is at most `tol`.
    pub fn prune(&self, tol: T) -> Self {
        Self { width: self.width, terms: self.terms.iter().filter(|t| t.coefficient().norm() > tol).copied().collect() }
    }

    /// Largest coefficient modulus; zero for the empty sum.
    pub fn max_coefficient(&self) -> T {
        self.terms.iter().map(|t| t.coefficient().norm()).fold(T::zero(), |m, v| m.max(v))
    }

    /// Pauli-basis 1-norm of the canonical sum.
    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|t| t.coefficient().norm()).fold(T::zero(), |a, v| a + v)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.sub(&self.adjoint()).map(|d| d.max_coefficient() <= tol).unwrap_or(false)
    }

    /// Place qubit `q` of this operator at `positions[q]` of a `width`-qubit register.
    pub fn embed(&self, width: usize, positions: &[usize]) -> Result<Self, PauliError> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(PauliTerm::new(t.coefficient(), t.string().embed(width, positions)?)))
            .collect::<Result<Vec<_>, PauliError>>()?;
        Self::from_terms(width, terms)
    }

    /// Pauli decomposition of a `2^k x 2^k` matrix, `c_P = tr(P M) / 2^k`.
    pub fn from_dense(m: &DMatrix<Complex<T>>) -> Result<Self, PauliError> {
        let dim = m.nrows();
        if dim != m.ncols() || !dim.is_power_of_two() {
            return Err(PauliError::NotPowerOfTwo { dim });
        }
        let width = dim.trailing_zeros() as usize;
        let norm = T::lit(dim as f64);
        let mut terms = Vec::new();
        for x in 0..dim as u64 {
            for z in 0..dim as u64 {
                let s = PauliString::from_masks(width, x, z)?;
                let mut tr = Complex::new(T::zero(), T::zero());
                for c in 0..dim as u64 {
                    let (r, k) = s.act(c);
                    // P|c> = ph |r>, so <c|P|r> = conj(ph)
                    let ph = crate::scalar::i_pow::<T>(k).conj();
                    tr = tr + ph * m[(r as usize, c as usize)];
                }
                if tr.norm() > T::zero() {
                    terms.push(PauliTerm::new(tr / norm, s));
                }
            }
        }
        Self::from_terms(width, terms)
    }

    /// Action on one basis column as a list of `(row, value)` pairs, unmerged.
    pub fn column(&self, basis: u64) -> impl Iterator<Item = (u64, Complex<T>)> + '_ {
        self.terms.iter().map(move |t| t.act(basis))
    }

    pub fn apply(&self, s: &StateVector<T>) -> Result<StateVector<T>, PauliError> {
        if s.width() != self.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: s.width() });
        }
        let mut out = StateVector::zero(self.width);
        accumulate(&self.terms, s.amplitudes(), out.amplitudes_mut());
        Ok(out)
    }

    /// Term-parallel application with a fixed block partition and pairwise tree
    /// reduction, bit-identical for every `threads >= 1`.
    pub fn apply_parallel(&self, s: &StateVector<T>, threads: usize) -> Result<StateVector<T>, PauliError> {
        if s.width() != self.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: s.width() });
        }
        let blocks: Vec<&[PauliTerm<T>]> = self.terms.chunks(APPLY_BLOCK).collect();
        if blocks.is_empty() {
            return Ok(StateVector::zero(self.width));
        }
        let threads = threads.max(1);
        let mut partial: Vec<Option<Vec<Complex<T>>>> = (0..blocks.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let chunk = blocks.len().div_ceil(threads);
            let handles: Vec<_> = partial
                .chunks_mut(chunk)
                .zip(blocks.chunks(chunk))
                .map(|(slots, bl)| {
                    let amps = s.amplitudes();
                    scope.spawn(move || {
                        for (slot, b) in slots.iter_mut().zip(bl) {
                            let mut acc = vec![Complex::new(T::zero(), T::zero()); amps.len()];
                            accumulate(b, amps, &mut acc);
                            *slot = Some(acc);
                        }
                    })
                })
                .collect();
            for h in handles {
                h.join().expect("apply worker panicked");
            }
        });
        let mut level: Vec<Vec<Complex<T>>> = partial.into_iter().map(|p| p.expect("block computed")).collect();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            let mut it = level.into_iter();
            while let Some(mut a) = it.next() {
                if let Some(b) = it.next() {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x = *x + y;
                    }
                }
                next.push(a);
            }
            level = next;
        }
        StateVector::from_amplitudes(self.width, level.pop().expect("non-empty"))
    }

    pub fn to_sparse(&self, caps: MaterializeCaps) -> Result<SparseMatrix<T>, PauliError> {
        if self.width > caps.sparse {
            return Err(PauliError::WidthTooLarge { width: self.width, cap: caps.sparse });
        }
        let dim = 1usize << self.width;
        let mut trip = Vec::with_capacity(dim * self.terms.len().min(64));
        for c in 0..dim as u64 {
            for (r, v) in self.column(c) {
                trip.push((r as usize, c as usize, v));
            }
        }
        Ok(SparseMatrix::from_triplets(dim, trip))
    }

    pub fn to_dense(&self, caps: MaterializeCaps) -> Result<DMatrix<Complex<T>>, PauliError> {
        if self.width > caps.dense {
            return Err(PauliError::WidthTooLarge { width: self.width, cap: caps.dense });
        }
        let dim = 1usize << self.width;
        let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
        for c in 0..dim as u64 {
            for (r, v) in self.column(c) {
                let e = &mut m[(r as usize, c as usize)];
                *e = *e + v;
            }
        }
        Ok(m)
    }
}

fn accumulate<T: Real>(terms: &[PauliTerm<T>], input: &[Complex<T>], out: &mut [Complex<T>]) {
    for t in terms {
        for (b, a) in input.iter().enumerate() {
            if a.re == T::zero() && a.im == T::zero() {
                continue;
            }
            let (r, v) = t.act(b as u64);
            out[r as usize] = out[r as usize] + v * a;
        }
    }
}
