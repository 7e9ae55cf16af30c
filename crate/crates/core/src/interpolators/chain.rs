//! Meson and baryon interpolators of the 1D theories as explicit LCUs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;

use super::{Body, Interpolator, InterpolatorError};
use crate::encodings::{jw_lower, jw_raise, JwLayout, Theory};
use crate::lattice::{Boundary, Model1D, Truncation};
use crate::links::{su2_link_component, su2_space, su3_link_component, su3_space, u1_space, DiagonalTable, LinkFactor, LinkOpDecomposition, LinkSpace};
use crate::pauli::{LcuDecomposition, OperatorSum};
use crate::Complex64;

/// Register layout shared with [`Model1D`]: fermion modes first, then one register per link.
#[derive(Clone)]
pub struct Layout1D {
    pub theory: Theory,
    pub sites: usize,
    pub links: usize,
    pub link_space: Arc<LinkSpace>,
    /// `U_{αβ}` decompositions, 0-based colour indices.
    pub link_ops: Vec<Vec<LinkOpDecomposition>>,
}

impl Layout1D {
    /// `cutoff` is `Λ` for U(1), `2 j_max` for SU(2) and `p + q` for SU(3). SU(3) needs a table.
    pub fn new(theory: Theory, sites: usize, cutoff: usize, boundary: Boundary, truncation: Truncation, table: Option<&DiagonalTable>) -> Result<Self, InterpolatorError> {
        if sites < 2 {
            return Err(InterpolatorError::InvalidInput(format!("{sites} sites")));
        }
        let links = match boundary {
            Boundary::Open => sites - 1,
            Boundary::Periodic => sites,
        };
        let (link_space, link_ops) = match theory {
            Theory::U1 => {
                if !cutoff.is_power_of_two() {
                    return Err(InterpolatorError::InvalidInput(format!("U(1) cutoff {cutoff}")));
                }
                let space = u1_space((2 * cutoff).trailing_zeros() as usize);
                let mut d = match truncation {
                    Truncation::Cyclic => LinkOpDecomposition::wrapping(space.clone(), 1.0),
                    Truncation::Hard => LinkOpDecomposition::new(space.clone(), 1.0),
                };
                let ones = Arc::new(vec![1.0; 1usize << space.width()]);
                d.push("U", vec![LinkFactor::Shift { register: 0, by: -1 }, LinkFactor::Diagonal { name: "1".into(), values: ones }])?;
                (space, vec![vec![d]])
            }
            Theory::SU2 => {
                let space = su2_space(cutoff);
                let ops = (1..=2).map(|a| (1..=2).map(|b| su2_link_component(a, b, &space)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
                (space, ops)
            }
            Theory::SU3 => {
                let table = table.ok_or_else(|| InterpolatorError::InvalidInput("SU(3) links need a diagonal table".into()))?;
                let space = su3_space(cutoff);
                let ops = (1..=3).map(|a| (1..=3).map(|b| su3_link_component(a, b, &space, table)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
                (space, ops)
            }
        };
        Ok(Self { theory, sites, links, link_space, link_ops })
    }

    /// Layout matching a Hamiltonian model.
    pub fn from_model(model: &Model1D) -> Result<Self, InterpolatorError> {
        let s = model.spec();
        Self::new(s.theory, s.sites, s.cutoff, s.boundary, s.truncation, None)
    }

    pub fn jw(&self) -> JwLayout {
        JwLayout::new(self.theory, self.sites)
    }

    pub fn colors(&self) -> usize {
        self.theory.colors()
    }

    pub fn modes(&self) -> usize {
        self.jw().modes()
    }

    pub fn width(&self) -> usize {
        self.modes() + self.links * self.link_space.width()
    }

    pub fn link_qubits(&self, link: usize) -> Vec<usize> {
        let off = self.modes() + link * self.link_space.width();
        (off..off + self.link_space.width()).collect()
    }

    fn raise(&self, x: usize, c: usize) -> Result<OperatorSum<f64>, InterpolatorError> {
        Ok(jw_raise(&self.jw(), x, c, self.width())?)
    }

    fn lower(&self, x: usize, c: usize) -> Result<OperatorSum<f64>, InterpolatorError> {
        Ok(jw_lower(&self.jw(), x, c, self.width())?)
    }

    /// `U_{αβ}(link)` as an LCU on the full register.
    pub fn link_lcu(&self, link: usize, alpha: usize, beta: usize) -> Result<LcuDecomposition<f64>, InterpolatorError> {
        Ok(self.link_ops[alpha][beta].to_lcu(self.width(), &self.link_qubits(link))?)
    }

    /// `K = Σ_{αβ} ξ_α^†(x+1) U_{αβ}(x) ξ_β(x)` and its adjoint, both unmerged.
    pub fn hopping_lcu(&self, x: usize) -> Result<(LcuDecomposition<f64>, LcuDecomposition<f64>), InterpolatorError> {
        let w = self.width();
        let y = (x + 1) % self.sites;
        let mut k = LcuDecomposition::empty(w);
        for a in 0..self.colors() {
            for b in 0..self.colors() {
                let fermions = LcuDecomposition::from_operator_sum(&self.raise(y, a)?.mul(&self.lower(x, b)?)?);
                k = k.concat(&fermions.product(&self.link_lcu(x, a, b)?)?)?;
            }
        }
        let kd = k.adjoint();
        Ok((k, kd))
    }
}

fn number_lcu(layout: &Layout1D, x: usize, c: usize) -> Result<LcuDecomposition<f64>, InterpolatorError> {
    Ok(LcuDecomposition::from_operator_sum(&layout.raise(x, c)?.mul(&layout.lower(x, c)?)?))
}

fn tags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn lcu_interpolator(label: String, lcu: LcuDecomposition<f64>, spacing: f64, mass_dimension: f64, x: usize, tags: BTreeMap<String, String>) -> Interpolator {
    let c = lcu.one_norm();
    Interpolator {
        label,
        c,
        c_reduced: c * spacing.powf(mass_dimension),
        spacing,
        mass_dimension,
        anchor: vec![x as i64],
        terms: lcu.len(),
        tags,
        convention: "unmerged Pauli expansion of each fermion monomial (1-norm 1) times link LCU terms (sin construction, 1 per diagonal)".into(),
        body: Body::Lcu(lcu),
    }
}

fn prefix(theory: Theory) -> &'static str {
    match theory {
        Theory::U1 => "U1",
        Theory::SU2 => "SU2",
        Theory::SU3 => "SU3",
    }
}

/// All interpolators of the theory anchored at the even site `x`: `O1`, `O2`, `O3` and, for
/// SU(2)/SU(3), the baryon `O4`.
pub fn interpolators_1d(layout: &Layout1D, x: usize, spacing: f64) -> Result<Vec<Interpolator>, InterpolatorError> {
    if !x.is_multiple_of(2) {
        return Err(InterpolatorError::OddAnchor(x));
    }
    if x + 1 >= layout.sites || x + 1 > layout.links {
        return Err(InterpolatorError::InvalidInput(format!("site {} outside the chain", x + 1)));
    }
    let w = layout.width();
    let inv_a = Complex::new(1.0 / spacing, 0.0);
    let p = prefix(layout.theory);
    let mut out = Vec::new();

    let mut o1 = LcuDecomposition::empty(w);
    for c in 0..layout.colors() {
        o1 = o1.concat(&number_lcu(layout, x, c)?)?;
        o1 = o1.concat(&number_lcu(layout, x + 1, c)?.scale(Complex::new(-1.0, 0.0)))?;
    }
    let meson = [("particle", "meson"), ("baryon_number", "0")];
    out.push(lcu_interpolator(format!("{p}.O1"), o1.scale(inv_a), spacing, 1.0, x, tags(&[meson[0], meson[1], ("hermiticity", "hermitian")])));

    let (k, kd) = layout.hopping_lcu(x)?;
    let o2 = kd.concat(&k)?;
    out.push(lcu_interpolator(format!("{p}.O2"), o2.scale(inv_a), spacing, 1.0, x, tags(&[meson[0], meson[1], ("hermiticity", "hermitian")])));
    let o3 = kd.concat(&k.scale(Complex::new(-1.0, 0.0)))?;
    out.push(lcu_interpolator(format!("{p}.O3"), o3.scale(inv_a), spacing, 1.0, x, tags(&[meson[0], meson[1], ("hermiticity", "anti-hermitian")])));

    match layout.theory {
        Theory::U1 => {}
        Theory::SU2 => {
            let mut o4 = LcuDecomposition::empty(w);
            for (a, b, s) in [(0, 1, 1.0), (1, 0, -1.0)] {
                let m = layout.raise(x, a)?.mul(&layout.raise(x, b)?)?;
                o4 = o4.concat(&LcuDecomposition::from_operator_sum(&m).scale(Complex::new(s, 0.0)))?;
            }
            out.push(lcu_interpolator(format!("{p}.O4"), o4.scale(inv_a), spacing, 1.0, x, tags(&[("particle", "baryon"), ("baryon_number", "1"), ("hermiticity", "none")])));
        }
        Theory::SU3 => {
            let mut o4 = LcuDecomposition::empty(w);
            for (perm, s) in permutations3() {
                let m = OperatorSum::product(w, &[&layout.raise(x, perm[0])?, &layout.raise(x, perm[1])?, &layout.raise(x, perm[2])?])?;
                o4 = o4.concat(&LcuDecomposition::from_operator_sum(&m).scale(Complex::new(s, 0.0)))?;
            }
            let scale: Complex64 = Complex::new(spacing.powf(-1.5), 0.0);
            out.push(lcu_interpolator(
                format!("{p}.O4"),
                o4.scale(scale),
                spacing,
                1.5,
                x,
                tags(&[("particle", "baryon"), ("baryon_number", "1"), ("statistics", "fermionic"), ("hermiticity", "none")]),
            ));
        }
    }
    Ok(out)
}

/// Permutations of `(0, 1, 2)` with their signs.
pub(crate) fn permutations3() -> [([usize; 3], f64); 6] {
    [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([2, 1, 0], -1.0), ([1, 0, 2], -1.0)]
}
