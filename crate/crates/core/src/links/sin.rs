use num_complex::Complex;

use super::LinkError;

/// Outcome of the simulated `(U_f^+ - U_f^-)/2i` construction.
#[derive(Clone, Debug)]
pub struct SinBlockReport {
    /// System amplitudes after post-selecting the selector on `|0>` and projecting the phase
    /// register on `|F>`.
    pub output: Vec<Complex<f64>>,
    /// Norm of the post-selected part left orthogonal to `|F>` (zero when `|F>` is restored).
    pub ancilla_leak: f64,
    /// Ancilla count `η`.
    pub eta: usize,
}

/// Simulates the diagonal `D` through a selector qubit, an `η`-qubit phase register in
/// `|F> = N^{-1/2} Σ e^{-2πin/N}|n>` and the phase kickback of register shifts.
///
/// `U_f^±` shifts the register by `s = round(±f N / 2π)`, which multiplies `|F>` by `e^{2πis/N}`,
/// and applies the residual `e^{i(±f - 2πs/N)}` on the system, so the total phase is exactly `±f`.
pub fn sin_block_encode(d: &[f64], eta: usize, input: &[Complex<f64>]) -> Result<SinBlockReport, LinkError> {
    if let Some(&bad) = d.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(LinkError::OutOfRange(bad));
    }
    if input.len() != d.len() {
        return Err(LinkError::InvalidLabel(format!("{} amplitudes for {} diagonal entries", input.len(), d.len())));
    }
    let m = d.len();
    let n = 1usize << eta;
    let tau = std::f64::consts::TAU;
    let f_state: Vec<Complex<f64>> = (0..n).map(|k| Complex::from_polar(1.0 / (n as f64).sqrt(), -tau * k as f64 / n as f64)).collect();
    let zero = Complex::new(0.0, 0.0);
    // joint amplitudes [selector][x][k]
    let mut state = vec![vec![vec![zero; n]; m]; 2];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..m {
        for k in 0..n {
            let a = input[x] * f_state[k];
            state[0][x][k] = a * h;
            state[1][x][k] = a * h;
        }
    }
    // selector 0 applies -i U_f^+, selector 1 applies +i U_f^-
    for (sel, sign, pre) in [(0usize, 1.0, Complex::new(0.0, -1.0)), (1, -1.0, Complex::new(0.0, 1.0))] {
        for x in 0..m {
            let f = sign * d[x].asin();
            let s = (f * n as f64 / tau).round() as i64;
            let residual = Complex::from_polar(1.0, f - tau * s as f64 / n as f64);
            let old = state[sel][x].clone();
            for (k, a) in old.into_iter().enumerate() {
                let t = (k as i64 + s).rem_euclid(n as i64) as usize;
                state[sel][x][t] = a * residual * pre;
            }
        }
    }
    let mut output = vec![zero; m];
    let mut leak = 0.0;
    for x in 0..m {
        let post: Vec<Complex<f64>> = (0..n).map(|k| (state[0][x][k] + state[1][x][k]) * h).collect();
        let overlap: Complex<f64> = post.iter().zip(&f_state).map(|(a, f)| f.conj() * a).sum();
        output[x] = overlap;
        leak += post.iter().zip(&f_state).map(|(a, f)| (a - overlap * f).norm_sqr()).sum::<f64>();
    }
    Ok(SinBlockReport { output, ancilla_leak: leak.sqrt(), eta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_zero_diagonals() {
        let psi = vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let one = sin_block_encode(&[1.0, 1.0], 3, &psi).unwrap();
        for (a, b) in one.output.iter().zip(&psi) {
            assert!((a - b).norm() < 1e-14);
        }
        let zero = sin_block_encode(&[0.0, 0.0], 3, &psi).unwrap();
        assert!(zero.output.iter().all(|a| a.norm() < 1e-15));
    }
}
