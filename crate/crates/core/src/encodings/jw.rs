use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::EncodingError;
use crate::pauli::{OperatorSum, PauliString, PauliTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    U1,
    SU2,
    SU3,
}

impl Theory {
    pub fn colors(self) -> usize {
        match self {
            Theory::U1 => 1,
            Theory::SU2 => 2,
            Theory::SU3 => 3,
        }
    }
}

/// Site-major, colour-minor Jordan-Wigner ordering of fermion modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JwLayout {
    pub theory: Theory,
    pub sites: usize,
}

impl JwLayout {
    pub fn new(theory: Theory, sites: usize) -> Self {
        Self { theory, sites }
    }

    pub fn colors(&self) -> usize {
        self.theory.colors()
    }

    pub fn modes(&self) -> usize {
        self.colors() * self.sites
    }

    /// Qubit of colour `color` (0-based) at site `x`.
    pub fn mode_index(&self, x: usize, color: usize) -> Result<usize, EncodingError> {
        if x >= self.sites || color >= self.colors() {
            return Err(EncodingError::OutOfRange { site: x, color });
        }
        Ok(x * self.colors() + color)
    }
}

/// `ξ_α(x)` as `Z...Z σ^+` on a register of `width >= layout.modes()` qubits.
pub fn jw_lower(layout: &JwLayout, x: usize, color: usize, width: usize) -> Result<OperatorSum<f64>, EncodingError> {
    let q = layout.mode_index(x, color)?;
    let zmask = (1u64 << q) - 1;
    let xbit = 1u64 << q;
    // σ^+ = (X + iY)/2; the (x=1, z=1) letter is Y
    let half = Complex::new(0.5, 0.0);
    let terms = vec![
        PauliTerm::new(half, PauliString::from_masks(width, xbit, zmask)?),
        PauliTerm::new(Complex::new(0.0, 0.5), PauliString::from_masks(width, xbit, zmask | xbit)?),
    ];
    Ok(OperatorSum::from_terms(width, terms)?)
}

pub fn jw_raise(layout: &JwLayout, x: usize, color: usize, width: usize) -> Result<OperatorSum<f64>, EncodingError> {
    Ok(jw_lower(layout, x, color, width)?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Letter, MaterializeCaps};

    #[test]
    fn u1_images() {
        let l = JwLayout::new(Theory::U1, 3);
        let x0 = jw_lower(&l, 0, 0, 3).unwrap();
        assert_eq!(x0, OperatorSum::sigma_plus(3, 0).unwrap());
        let x2 = jw_lower(&l, 2, 0, 3).unwrap();
        let z = |q| OperatorSum::letter(3, q, Letter::Z).unwrap();
        let expect = z(0).mul(&z(1)).unwrap().mul(&OperatorSum::sigma_plus(3, 2).unwrap()).unwrap();
        assert_eq!(x2, expect);
    }

    #[test]
    fn su3_car_on_two_sites() {
        let l = JwLayout::new(Theory::SU3, 2);
        let w = l.modes();
        let caps = MaterializeCaps::default();
        let ops: Vec<_> = (0..2).flat_map(|x| (0..3).map(move |c| (x, c))).map(|(x, c)| jw_lower(&l, x, c, w).unwrap()).collect();
        for (a, oa) in ops.iter().enumerate() {
            for (b, ob) in ops.iter().enumerate() {
                let m = oa.anticommutator(&ob.adjoint()).unwrap().to_dense(caps).unwrap();
                let e = if a == b { 1.0 } else { 0.0 };
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let want = if i == j { e } else { 0.0 };
                        assert!((m[(i, j)] - Complex::new(want, 0.0)).norm() < 1e-14);
                    }
                }
                assert!(oa.anticommutator(ob).unwrap().prune(1e-15).is_empty());
            }
        }
    }
}
