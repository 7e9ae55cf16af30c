use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;

use super::{Boundary, LatticeError, LatticeSpec1D, Sector, Truncation, MAX_WIDTH_1D};
use crate::encodings::{jw_lower, jw_raise, JwLayout, Theory};
use crate::links::{su2_electric, su2_link_component, su2_space, u1_electric, u1_link_u, u1_space, LinkSpace};
use crate::pauli::{restrict_columns, OperatorSum, SparseMatrix, StateVector};
use crate::Complex64;

type Column = Vec<(u64, Complex64)>;

/// Register layout and local operator tables of a 1D lattice.
///
/// Qubits `0..M` hold the fermion modes in site-major, colour-minor order (an occupied mode is
/// a set bit), followed by one link register per link.
#[derive(Clone, Debug)]
pub struct Model1D {
    spec: LatticeSpec1D,
    layout: JwLayout,
    link_space: Arc<LinkSpace>,
    /// `[α][β][value]` column of `U_{αβ}` and of `U_{αβ}^†`.
    u_cols: Vec<Vec<Vec<Column>>>,
    u_adj_cols: Vec<Vec<Vec<Column>>>,
    /// Link matrices on the full link register, for the operator-sum path.
    u_mats: Vec<Vec<SparseMatrix<f64>>>,
    e2: Vec<f64>,
    electric: Vec<f64>,
}

fn columns(m: &SparseMatrix<f64>) -> Vec<Column> {
    let mut out = vec![Vec::new(); m.dim()];
    for (r, c, v) in m.triplets() {
        out[c].push((r as u64, v));
    }
    out
}

impl Model1D {
    pub fn new(spec: LatticeSpec1D) -> Result<Self, LatticeError> {
        spec.validate()?;
        let layout = JwLayout::new(spec.theory, spec.sites);
        let (link_space, u_mats, e2, electric) = match spec.theory {
            Theory::U1 => {
                let k = (2 * spec.cutoff).trailing_zeros() as usize;
                let space = u1_space(k);
                let e = u1_electric(&space);
                let e2 = e.iter().map(|x| x * x).collect();
                let mut u = u1_link_u(&space).matrix();
                if spec.truncation == Truncation::Hard {
                    let top = u.dim() - 1;
                    u = SparseMatrix::from_triplets(u.dim(), u.triplets().filter(|&(r, c, _)| !(r == top && c == 0)).collect());
                }
                (space, vec![vec![u]], e2, e)
            }
            Theory::SU2 => {
                let space = su2_space(spec.cutoff);
                let mut mats = Vec::new();
                for a in 1..=2 {
                    mats.push((1..=2).map(|b| su2_link_component(a, b, &space).map(|d| d.matrix())).collect::<Result<Vec<_>, _>>()?);
                }
                let [e2, el, _] = su2_electric(&space);
                (space, mats, e2, el)
            }
            Theory::SU3 => return Err(LatticeError::Unsupported("SU(3) Hamiltonian dynamics (only the link and interpolator algebra is provided)".into())),
        };
        let u_cols = u_mats.iter().map(|row| row.iter().map(columns).collect()).collect();
        let u_adj_cols = u_mats.iter().map(|row| row.iter().map(|m| columns(&m.adjoint())).collect()).collect();
        let width = layout.modes() + spec.links() * link_space.width();
        if width > MAX_WIDTH_1D {
            return Err(LatticeError::WidthOverflow { width, cap: MAX_WIDTH_1D });
        }
        Ok(Self { spec, layout, link_space, u_cols, u_adj_cols, u_mats, e2, electric })
    }

    pub fn spec(&self) -> &LatticeSpec1D {
        &self.spec
    }

    pub fn layout(&self) -> &JwLayout {
        &self.layout
    }

    pub fn link_space(&self) -> &Arc<LinkSpace> {
        &self.link_space
    }

    pub fn colors(&self) -> usize {
        self.layout.colors()
    }

    pub fn modes(&self) -> usize {
        self.layout.modes()
    }

    pub fn link_width(&self) -> usize {
        self.link_space.width()
    }

    pub fn width(&self) -> usize {
        self.modes() + self.spec.links() * self.link_width()
    }

    pub fn mode(&self, x: usize, color: usize) -> usize {
        x * self.colors() + color
    }

    pub fn link_offset(&self, link: usize) -> usize {
        self.modes() + link * self.link_width()
    }

    pub fn link_value(&self, b: u64, link: usize) -> usize {
        ((b >> self.link_offset(link)) & ((1u64 << self.link_width()) - 1)) as usize
    }

    fn with_link(&self, b: u64, link: usize, v: u64) -> u64 {
        let off = self.link_offset(link);
        let mask = ((1u64 << self.link_width()) - 1) << off;
        (b & !mask) | (v << off)
    }

    pub fn occupation(&self, b: u64, x: usize, color: usize) -> bool {
        b >> self.mode(x, color) & 1 == 1
    }

    pub fn fermion_number(&self, b: u64) -> usize {
        (b & ((1u64 << self.modes()) - 1)).count_ones() as usize
    }

    /// `E` (U(1)) or `E_L^3` (SU(2)) eigenvalue of a link register value.
    pub fn electric_value(&self, v: usize) -> f64 {
        self.electric[v]
    }

    /// Electric energy density `E^2` of a link register value.
    pub fn electric_squared(&self, v: usize) -> f64 {
        self.e2[v]
    }

    /// `ξ_a^† ξ_b` on a basis state: target state and sign, or `None`.
    pub fn hop(&self, b: u64, to: usize, from: usize) -> Option<(u64, f64)> {
        if b >> from & 1 == 0 {
            return None;
        }
        let mid = b & !(1u64 << from);
        if to != from && mid >> to & 1 == 1 {
            return None;
        }
        let (lo, hi) = (to.min(from), to.max(from));
        let between = if hi > lo + 1 { (mid >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1) } else { 0 };
        let sign = if between.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Some((mid | (1u64 << to), sign))
    }

    fn right(&self, x: usize) -> usize {
        (x + 1) % self.spec.sites
    }

    /// Column of `K_x = Σ_{αβ} ξ_α^†(x+1) U_{αβ}(x) ξ_β(x)` (`adjoint` gives `K_x^†`).
    fn hopping_column(&self, b: u64, x: usize, adjoint: bool, out: &mut Column, scale: Complex64) {
        let v = self.link_value(b, x);
        let nc = self.colors();
        for alpha in 0..nc {
            for beta in 0..nc {
                let (to, from, cols) = if adjoint {
                    (self.mode(x, beta), self.mode(self.right(x), alpha), &self.u_adj_cols[alpha][beta])
                } else {
                    (self.mode(self.right(x), alpha), self.mode(x, beta), &self.u_cols[alpha][beta])
                };
                let Some((bf, sign)) = self.hop(b, to, from) else { continue };
                for &(vr, amp) in &cols[v] {
                    out.push((self.with_link(bf, x, vr), scale * amp * sign));
                }
            }
        }
    }

    pub fn diagonal(&self, b: u64) -> f64 {
        let s = &self.spec;
        let mut d = 0.0;
        for x in 0..s.sites {
            let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
            for c in 0..self.colors() {
                if self.occupation(b, x, c) {
                    d += sign * s.mass;
                }
            }
        }
        let ge = 0.5 * s.spacing * s.coupling * s.coupling;
        for l in 0..s.links() {
            d += ge * self.e2[self.link_value(b, l)];
        }
        d
    }

    /// Column of `H` on a basis state, unmerged.
    pub fn column(&self, b: u64) -> Column {
        let mut out = vec![(b, Complex::new(self.diagonal(b), 0.0))];
        let t = Complex::new(0.0, 0.5 / self.spec.spacing);
        for x in 0..self.spec.links() {
            self.hopping_column(b, x, false, &mut out, t);
            self.hopping_column(b, x, true, &mut out, -t);
        }
        out
    }

    /// Every fermion configuration times the physical link labels.
    pub fn full_basis(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0..1u64 << self.modes()).collect();
        for l in 0..self.spec.links() {
            let off = self.link_offset(l);
            out = out.iter().flat_map(|&b| self.link_space.physical().iter().map(move |&v| b | (v << off))).collect();
        }
        out.sort_unstable();
        out
    }

    fn half_filled(&self) -> Vec<u64> {
        let half = self.modes() / 2;
        (0..1u64 << self.modes()).filter(|b| b.count_ones() as usize == half).collect()
    }

    /// Staggered charge `Σ_c n_c(x) - N_c [x odd]` at site `x`.
    pub fn site_charge(&self, b: u64, x: usize) -> i64 {
        let n = (0..self.colors()).filter(|&c| self.occupation(b, x, c)).count() as i64;
        n - if x % 2 == 1 { self.colors() as i64 } else { 0 }
    }

    /// U(1) Gauss law `E(x) - E(x-1) = q(x)` (modulo `2Λ` for the cyclic truncation), with `E(-1) = 0` on open chains.
    pub fn satisfies_gauss(&self, b: u64) -> bool {
        if self.spec.theory != Theory::U1 {
            return true;
        }
        let size = match self.spec.truncation {
            Truncation::Cyclic => 2 * self.spec.cutoff as i64,
            Truncation::Hard => i64::MAX,
        };
        let lambda = self.spec.cutoff as i64;
        let n = self.spec.sites;
        let e = |l: usize| self.link_value(b, l) as i64 - lambda;
        (0..n).all(|x| {
            let left = match (x, self.spec.boundary) {
                (0, Boundary::Open) => 0,
                (0, Boundary::Periodic) => e(n - 1),
                _ => e(x - 1),
            };
            let here = if x == n - 1 && self.spec.boundary == Boundary::Open { 0 } else { e(x) };
            (here - left - self.site_charge(b, x)).rem_euclid(size) == 0
        })
    }

    pub fn zero_charge_basis(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for f in self.half_filled() {
            match self.spec.theory {
                Theory::U1 => {
                    let size = 2 * self.spec.cutoff as i64;
                    let lambda = self.spec.cutoff as i64;
                    let starts: Vec<i64> = match self.spec.boundary {
                        Boundary::Open => vec![0],
                        Boundary::Periodic => (-lambda..lambda).collect(),
                    };
                    for e0 in starts {
                        let mut b = f;
                        let mut e = e0;
                        let mut in_range = true;
                        for x in 0..self.spec.links() {
                            e += self.site_charge(f, x);
                            in_range &= (-lambda..lambda).contains(&e);
                            let v = (e + lambda).rem_euclid(size) as u64;
                            b = self.with_link(b, x, v);
                        }
                        if (in_range || self.spec.truncation == Truncation::Cyclic) && self.satisfies_gauss(b) {
                            out.push(b);
                        }
                    }
                }
                _ => {
                    let mut states = vec![f];
                    for l in 0..self.spec.links() {
                        states = states.iter().flat_map(|&b| self.link_space.physical().iter().map(move |&v| (b, v))).map(|(b, v)| self.with_link(b, l, v)).collect();
                    }
                    out.extend(states);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn basis(&self, sector: Sector) -> Vec<u64> {
        match sector {
            Sector::Full => self.full_basis(),
            Sector::ZeroCharge => self.zero_charge_basis(),
        }
    }

    /// Register-wide `U_{αβ}(link)`.
    fn link_operator(&self, link: usize, alpha: usize, beta: usize) -> Result<OperatorSum<f64>, LatticeError> {
        let local = OperatorSum::from_dense(&self.u_mats[alpha][beta].to_dense())?;
        let off = self.link_offset(link);
        let positions: Vec<usize> = (off..off + self.link_width()).collect();
        Ok(local.embed(self.width(), &positions)?)
    }

    /// The Hamiltonian as a Pauli sum, from the Jordan-Wigner images and the link matrices.
    pub fn operator_sum(&self) -> Result<OperatorSum<f64>, LatticeError> {
        let w = self.width();
        let s = &self.spec;
        let nc = self.colors();
        let mut h = OperatorSum::zero(w);
        let t = Complex::new(0.0, 0.5 / s.spacing);
        for x in 0..s.links() {
            let mut k = OperatorSum::zero(w);
            for a in 0..nc {
                for be in 0..nc {
                    let u = self.link_operator(x, a, be)?;
                    let term = OperatorSum::product(w, &[&jw_raise(&self.layout, self.right(x), a, w)?, &u, &jw_lower(&self.layout, x, be, w)?])?;
                    k = k.add(&term)?;
                }
            }
            h = h.add(&k.sub(&k.adjoint())?.scale(t))?;
        }
        for x in 0..s.sites {
            let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
            for c in 0..nc {
                let n = jw_raise(&self.layout, x, c, w)?.mul(&jw_lower(&self.layout, x, c, w)?)?;
                h = h.add(&n.scale_real(sign * s.mass))?;
            }
        }
        let dim = 1usize << self.link_width();
        let e2 = DMatrix::from_fn(dim, dim, |i, j| Complex::new(if i == j { self.e2[i] } else { 0.0 }, 0.0));
        let e2 = OperatorSum::from_dense(&e2)?;
        for l in 0..s.links() {
            let off = self.link_offset(l);
            let positions: Vec<usize> = (off..off + self.link_width()).collect();
            h = h.add(&e2.embed(w, &positions)?.scale_real(0.5 * s.spacing * s.coupling * s.coupling))?;
        }
        Ok(h.prune(1e-15))
    }
}

/// Hamiltonian restricted to a sector basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian1D {
    pub model: Model1D,
    pub sector: Sector,
    /// Register indices of the basis, ascending.
    pub basis: Vec<u64>,
    pub matrix: SparseMatrix<f64>,
    position: HashMap<u64, usize>,
}

pub fn build_hamiltonian_1d(spec: LatticeSpec1D, sector: Sector) -> Result<Hamiltonian1D, LatticeError> {
    let model = Model1D::new(spec)?;
    let basis = model.basis(sector);
    let (matrix, leak) = restrict_columns(&basis, |b| model.column(b));
    if leak > 1e-12 {
        return Err(LatticeError::Leak(leak));
    }
    let position = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    Ok(Hamiltonian1D { model, sector, basis, matrix, position })
}

impl Hamiltonian1D {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.model.width()
    }

    pub fn position(&self, b: u64) -> Option<usize> {
        self.position.get(&b).copied()
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        self.matrix.to_dense()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.max_abs_diff(&self.matrix.adjoint())
    }

    /// Matrix of a column-defined operator in this basis; errors if it leaves the sector.
    pub fn restrict<F>(&self, column: F) -> Result<SparseMatrix<f64>, LatticeError>
    where
        F: Fn(u64) -> Vec<(u64, Complex64)>,
    {
        let (m, leak) = restrict_columns(&self.basis, column);
        if leak > 1e-12 {
            return Err(LatticeError::Leak(leak));
        }
        Ok(m)
    }

    /// Sector-basis vector as a state on the full register.
    pub fn embed(&self, v: &[Complex64]) -> Result<StateVector<f64>, LatticeError> {
        let mut s = StateVector::zero(self.width());
        for (&b, &a) in self.basis.iter().zip(v) {
            s.amplitudes_mut()[b as usize] = a;
        }
        Ok(s)
    }

    /// Register-state amplitudes projected onto this basis.
    pub fn project(&self, s: &StateVector<f64>) -> Vec<Complex64> {
        self.basis.iter().map(|&b| s.amplitudes()[b as usize]).collect()
    }

    /// Fermion number, Gauss-law flag and mean electric field of a sector-basis vector.
    pub fn quantum_numbers(&self, v: &[Complex64]) -> BTreeMap<String, f64> {
        let mut q = BTreeMap::new();
        let mut n = 0.0;
        let mut gauss = 0.0;
        let mut stagger = 0.0;
        for (&b, a) in self.basis.iter().zip(v) {
            let p = a.norm_sqr();
            n += p * self.model.fermion_number(b) as f64;
            if self.model.satisfies_gauss(b) {
                gauss += p;
            }
            let odd: usize = (0..self.model.spec.sites).filter(|x| x % 2 == 1).map(|x| (0..self.model.colors()).filter(|&c| self.model.occupation(b, x, c)).count()).sum();
            stagger += p * odd as f64;
        }
        q.insert("fermion_number".into(), n);
        q.insert("gauss_weight".into(), gauss);
        q.insert("odd_site_occupation".into(), stagger);
        q
    }
}
