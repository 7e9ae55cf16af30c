use num_complex::Complex;

use super::{MaterializeCaps, OperatorSum, PauliError, StateVector};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    /// Widths up to this value are handled by dense SVD.
    pub dense_cap: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { dense_cap: 10, max_iterations: 2000, tolerance: 1e-12, seed: 7 }
    }
}

/// Spectral norm of an operator sum.
pub fn spectral_norm<T: Real>(op: &OperatorSum<T>, opts: NormOptions) -> Result<T, PauliError> {
    if op.is_empty() {
        return Ok(T::zero());
    }
    if op.width() <= opts.dense_cap {
        let m = op.to_dense(MaterializeCaps { dense: opts.dense_cap, sparse: opts.dense_cap })?;
        let m64 = m.map(|c| Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)));
        let sv = m64.singular_values();
        return Ok(T::lit(sv.iter().fold(0.0f64, |a, &b| a.max(b))));
    }
    power_iteration(op, opts)
}

fn power_iteration<T: Real>(op: &OperatorSum<T>, opts: NormOptions) -> Result<T, PauliError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let adj = op.adjoint();
    let mut v: StateVector<T> = StateVector::random(op.width(), &mut rng);
    let mut last = T::zero();
    let tol = T::lit(opts.tolerance);
    for _ in 0..opts.max_iterations {
        let w = adj.apply(&op.apply(&v)?)?;
        let lambda = w.norm();
        if lambda == T::zero() {
            return Ok(T::zero());
        }
        let amps = w.into_amplitudes().into_iter().map(|a| a / lambda).collect();
        v = StateVector::from_amplitudes(op.width(), amps)?;
        if (lambda - last).abs() <= tol * lambda {
            return Ok(lambda.sqrt());
        }
        last = lambda;
    }
    Err(PauliError::Convergence { iterations: opts.max_iterations })
}

/// `‖[h,[h,o]]‖`.
pub fn nested_commutator_norm<T: Real>(h_local: &OperatorSum<T>, o: &OperatorSum<T>, opts: NormOptions) -> Result<T, PauliError> {
    let inner = h_local.commutator(o)?;
    let outer = h_local.commutator(&inner)?;
    spectral_norm(&outer.prune(T::zero()), opts)
}
