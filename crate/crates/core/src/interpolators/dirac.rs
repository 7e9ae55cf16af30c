//! Dirac matrices in the Dirac representation.

use nalgebra::Matrix4;
use num_complex::Complex;

use crate::Complex64;

pub type Spinor4 = Matrix4<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

fn pauli(n: usize) -> [[Complex64; 2]; 2] {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match n {
        0 => [[z, o], [o, z]],
        1 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        _ => [[o, z], [z, -o]],
    }
}

/// `[[a, b], [c, d]]` from 2x2 blocks.
fn blocks(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2], cc: [[Complex64; 2]; 2], d: [[Complex64; 2]; 2]) -> Spinor4 {
    Matrix4::from_fn(|i, j| {
        let blk = match (i / 2, j / 2) {
            (0, 0) => a,
            (0, 1) => b,
            (1, 0) => cc,
            _ => d,
        };
        blk[i % 2][j % 2]
    })
}

const Z2: [[Complex64; 2]; 2] = [[Complex { re: 0.0, im: 0.0 }; 2]; 2];
const I2: [[Complex64; 2]; 2] = [[Complex { re: 1.0, im: 0.0 }, Complex { re: 0.0, im: 0.0 }], [Complex { re: 0.0, im: 0.0 }, Complex { re: 1.0, im: 0.0 }]];

fn neg(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    m.map(|r| r.map(|x| -x))
}

pub fn beta() -> Spinor4 {
    blocks(I2, Z2, Z2, neg(I2))
}

/// `α_n` for `n = 0, 1, 2` (x, y, z).
pub fn alpha(n: usize) -> Spinor4 {
    let s = pauli(n);
    blocks(Z2, s, s, Z2)
}

pub fn gamma5() -> Spinor4 {
    blocks(Z2, I2, I2, Z2)
}

/// `γ^0 = β`, `γ^n = β α_n` for `mu = 1, 2, 3`.
pub fn gamma(mu: usize) -> Spinor4 {
    if mu == 0 {
        beta()
    } else {
        beta() * alpha(mu - 1)
    }
}

/// Charge conjugation `𝒞 = -i α_y`.
pub fn charge_conjugation() -> Spinor4 {
    alpha(1) * c(0.0, -1.0)
}

pub fn identity() -> Spinor4 {
    Matrix4::identity()
}
