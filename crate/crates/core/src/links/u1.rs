use std::sync::Arc;

use super::{LinkFactor, LinkOpDecomposition, LinkSpace};

/// `k`-qubit electric register: value `n` encodes `E = n - Λ`, `Λ = 2^{k-1}`.
pub fn u1_space(k: usize) -> Arc<LinkSpace> {
    assert!(k >= 1, "a U(1) link needs at least one qubit");
    Arc::new(LinkSpace::new(&[("n", 1usize << k)], |_| true))
}

/// Truncated `U`: `|E> -> |E-1>` with `|-Λ> -> |Λ-1>`.
pub fn u1_link_u(space: &Arc<LinkSpace>) -> LinkOpDecomposition {
    let mut d = LinkOpDecomposition::wrapping(space.clone(), 1.0);
    let ones = Arc::new(vec![1.0; 1usize << space.width()]);
    d.push("U", vec![LinkFactor::Shift { register: 0, by: -1 }, LinkFactor::Diagonal { name: "1".into(), values: ones }])
        .expect("unit diagonal");
    d
}

/// Eigenvalues of `E` per register index.
pub fn u1_electric(space: &LinkSpace) -> Vec<f64> {
    let lambda = (space.registers()[0].size / 2) as f64;
    (0..space.registers()[0].size).map(|n| n as f64 - lambda).collect()
}
