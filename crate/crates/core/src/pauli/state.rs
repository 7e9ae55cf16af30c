use num_complex::Complex;
use rand::Rng;

use super::PauliError;
use crate::scalar::Real;

/// Dense statevector over `2^width` computational-basis amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    width: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zero(width: usize) -> Self {
        Self { width, amps: vec![Complex::new(T::zero(), T::zero()); 1usize << width] }
    }

    pub fn basis(width: usize, index: usize) -> Result<Self, PauliError> {
        let mut s = Self::zero(width);
        if index >= s.amps.len() {
            return Err(PauliError::QubitOutOfRange { width });
        }
        s.amps[index] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn from_amplitudes(width: usize, amps: Vec<Complex<T>>) -> Result<Self, PauliError> {
        if amps.len() != 1usize << width {
            return Err(PauliError::WidthMismatch { left: width, right: amps.len() });
        }
        Ok(Self { width, amps })
    }

    /// Normalized state with i.i.d. Gaussian-ish components (uniform box, then normalized).
    pub fn random<R: Rng>(width: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << width)
            .map(|_| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
            .collect();
        let mut s = Self { width, amps };
        s.normalize();
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > T::zero() {
            for a in &mut self.amps {
                *a = *a / n;
            }
        }
    }

    pub fn inner(&self, other: &StateVector<T>) -> Result<Complex<T>, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width, right: other.width });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).fold(Complex::new(T::zero(), T::zero()), |s, v| s + v))
    }

    pub fn max_abs_diff(&self, other: &StateVector<T>) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), |m, v| m.max(v))
    }
}
