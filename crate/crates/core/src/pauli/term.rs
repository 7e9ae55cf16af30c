use std::fmt;

use num_complex::Complex;

use super::{Letter, PauliError, PauliString};
use crate::scalar::{rotate_i, Real};

/// Complex-weighted Pauli string.
///
/// The group phase `i^phase` produced by multiplication is tracked exactly and kept apart from
/// the floating-point weight until the term is folded into an [`super::OperatorSum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm<T: Real> {
    weight: Complex<T>,
    phase: u8,
    string: PauliString,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(coefficient: Complex<T>, string: PauliString) -> Self {
        Self { weight: coefficient, phase: 0, string }
    }

    pub fn identity(width: usize) -> Result<Self, PauliError> {
        Ok(Self::new(Complex::new(T::one(), T::zero()), PauliString::identity(width)?))
    }

    pub fn single(width: usize, qubit: usize, letter: Letter) -> Result<Self, PauliError> {
        Ok(Self::new(Complex::new(T::one(), T::zero()), PauliString::single(width, qubit, letter)?))
    }

    pub fn parse(coefficient: Complex<T>, letters: &str) -> Result<Self, PauliError> {
        Ok(Self::new(coefficient, letters.parse()?))
    }

    /// Full coefficient `weight * i^phase`.
    pub fn coefficient(&self) -> Complex<T> {
        rotate_i(self.weight, self.phase)
    }

    /// Exact phase exponent accumulated through multiplication.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    /// Floating-point weight before the exact phase is applied.
    pub fn weight(&self) -> Complex<T> {
        self.weight
    }

    pub fn string(&self) -> &PauliString {
        &self.string
    }

    pub fn width(&self) -> usize {
        self.string.width()
    }

    pub fn multiply(&self, other: &PauliTerm<T>) -> Result<PauliTerm<T>, PauliError> {
        let (k, string) = self.string.mul(&other.string)?;
        Ok(PauliTerm {
            weight: self.weight * other.weight,
            phase: (self.phase + other.phase + k) % 4,
            string,
        })
    }

    pub fn scale(&self, s: Complex<T>) -> PauliTerm<T> {
        PauliTerm { weight: self.weight * s, ..*self }
    }

    pub fn adjoint(&self) -> PauliTerm<T> {
        PauliTerm { weight: self.weight.conj(), phase: (4 - self.phase) % 4, string: self.string }
    }

    pub fn commutes_with(&self, other: &PauliTerm<T>) -> bool {
        self.string.commutes_with(&other.string)
    }

    /// `P|b> = c |b'>`.
    pub fn act(&self, basis: u64) -> (u64, Complex<T>) {
        let (target, k) = self.string.act(basis);
        (target, rotate_i(self.weight, (self.phase + k) % 4))
    }
}

impl<T: Real> fmt::Display for PauliTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient();
        write!(f, "({}{:+}i) {}", c.re, c.im, self.string)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(s: &str) -> PauliTerm<f64> {
        PauliTerm::parse(Complex::new(1.0, 0.0), s).unwrap()
    }

    #[test]
    fn x_times_y_is_i_z() {
        let r = one("X").multiply(&one("Y")).unwrap();
        assert_eq!(r.coefficient(), Complex::new(0.0, 1.0));
        assert_eq!(r.string().to_string(), "Z");
        assert_eq!(r.phase_exponent(), 1);
    }

    #[test]
    fn identity_is_neutral() {
        let c = Complex::new(0.25, -2.0);
        let t = PauliTerm::parse(c, "YZX").unwrap();
        let r = one("III").multiply(&t).unwrap();
        assert_eq!(r.coefficient(), c);
        assert_eq!(r.string(), t.string());
    }

    #[test]
    fn square_is_coefficient_squared_identity() {
        let c = Complex::new(0.5, 1.5);
        let t = PauliTerm::parse(c, "XYZY").unwrap();
        let r = t.multiply(&t).unwrap();
        assert!(r.string().is_identity());
        assert_eq!(r.coefficient(), c * c);
    }
}
