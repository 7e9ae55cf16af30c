use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use super::{Boundary, Hamiltonian1D, LatticeError};
use crate::pauli::SparseMatrix;
use crate::Complex64;

/// Eigenpairs of a Hermitian matrix, ascending; column `j` of `vectors` belongs to `values[j]`.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

/// Dense Hermitian eigensolver. Each eigenvector is rotated so that its largest component is
/// real and positive.
pub fn eigh(m: &DMatrix<Complex64>) -> Result<Eigh, LatticeError> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigh { values: Vec::new(), vectors: DMatrix::zeros(0, 0) });
    }
    let sym = (m + m.adjoint()) * Complex::new(0.5, 0.0);
    let e = nalgebra::SymmetricEigen::try_new(sym, 1e-15, 0).ok_or_else(|| LatticeError::Eigen(format!("no convergence on a {n}x{n} matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        let col = e.eigenvectors.column(i);
        let big = col.iter().copied().fold(Complex::new(0.0, 0.0), |acc: Complex64, z| if z.norm() > acc.norm() + 1e-12 { z } else { acc });
        let ph = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex::new(1.0, 0.0) };
        for r in 0..n {
            vectors[(r, j)] = col[r] * ph;
        }
    }
    Ok(Eigh { values, vectors })
}

/// Lowest eigenpair of a Hermitian matrix, residual checked to 1e-10.
pub fn ground_state(h: &SparseMatrix<f64>) -> Result<(f64, Vec<Complex64>), LatticeError> {
    let e = eigh(&h.to_dense())?;
    let v: Vec<Complex64> = e.vectors.column(0).iter().copied().collect();
    let e0 = e.values[0];
    let hv = h.mul_vec(&v);
    let res = hv.iter().zip(&v).map(|(a, b)| (a - b * e0).norm_sqr()).sum::<f64>().sqrt();
    if res > 1e-10 {
        return Err(LatticeError::Eigen(format!("ground-state residual {res:e}")));
    }
    Ok((e0, v))
}

/// Translation by two sites on a periodic sector basis.
#[derive(Clone, Debug)]
pub struct Translation2 {
    /// `T|b_i> = sign_i |b_{target_i}>`.
    pub target: Vec<usize>,
    pub sign: Vec<f64>,
}

impl Translation2 {
    pub fn new(h: &Hamiltonian1D) -> Result<Self, LatticeError> {
        let m = &h.model;
        let spec = m.spec();
        if spec.boundary != Boundary::Periodic {
            return Err(LatticeError::InvalidSpec("translations need a periodic lattice".into()));
        }
        let modes = m.modes();
        let shift = 2 * m.colors();
        let mut target = Vec::with_capacity(h.dim());
        let mut sign = Vec::with_capacity(h.dim());
        for &b in &h.basis {
            let images: Vec<usize> = (0..modes).filter(|&q| b >> q & 1 == 1).map(|q| (q + shift) % modes).collect();
            let inversions: usize = (0..images.len()).map(|i| images[i + 1..].iter().filter(|&&y| y < images[i]).count()).sum();
            let mut t = images.iter().fold(0u64, |acc, &q| acc | (1u64 << q));
            for l in 0..spec.links() {
                let v = m.link_value(b, l) as u64;
                t |= v << m.link_offset((l + 2) % spec.sites);
            }
            let i = h.position(t).ok_or(LatticeError::Leak(1.0))?;
            target.push(i);
            sign.push(if inversions.is_multiple_of(2) { 1.0 } else { -1.0 });
        }
        Ok(Self { target, sign })
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex::new(0.0, 0.0); v.len()];
        for (i, &a) in v.iter().enumerate() {
            out[self.target[i]] += a * self.sign[i];
        }
        out
    }

    pub fn matrix(&self) -> SparseMatrix<f64> {
        let trip = (0..self.target.len()).map(|i| (self.target[i], i, Complex::new(self.sign[i], 0.0))).collect();
        SparseMatrix::from_triplets(self.target.len(), trip)
    }

    /// `max |(HT - TH)_{ij}|`.
    pub fn commutator_defect(&self, h: &SparseMatrix<f64>) -> f64 {
        let t = self.matrix();
        h.matmul(&t).max_abs_diff(&t.matmul(h))
    }

    /// Orbits as `(members with signs of T^n r, σ)` where `T^ℓ r = σ r`.
    pub fn orbits(&self) -> Vec<(Vec<(usize, f64)>, f64)> {
        let mut seen = vec![false; self.target.len()];
        let mut out = Vec::new();
        for r in 0..self.target.len() {
            if seen[r] {
                continue;
            }
            let mut members = vec![(r, 1.0)];
            seen[r] = true;
            let (mut cur, mut s) = (r, 1.0);
            loop {
                s *= self.sign[cur];
                cur = self.target[cur];
                if cur == r {
                    break;
                }
                seen[cur] = true;
                members.push((cur, s));
            }
            out.push((members, s));
        }
        out
    }
}

/// One momentum block: `T_2 ψ = e^{-2ika} ψ` with `k = π m / (L a)`, `L = N/2`.
#[derive(Clone, Debug)]
pub struct MomentumSector {
    pub m: i64,
    pub k: f64,
    pub energies: Vec<f64>,
    /// Eigenvalue of the translation by two sites on this sector.
    pub t2_eigenvalue: Complex64,
    /// Eigenvectors in the momentum basis of this sector (columns).
    pub vectors: DMatrix<Complex64>,
    /// Momentum basis vectors as sparse sector-basis vectors.
    pub basis: Vec<Vec<(usize, Complex64)>>,
}

impl MomentumSector {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Sector-basis coordinates of momentum-basis coefficients.
    pub fn lift(&self, c: &[Complex64], dim: usize) -> Vec<Complex64> {
        let mut out = vec![Complex::new(0.0, 0.0); dim];
        for (col, &a) in self.basis.iter().zip(c) {
            for &(i, v) in col {
                out[i] += v * a;
            }
        }
        out
    }

    /// Momentum-basis coefficients `V^† ψ`.
    pub fn reduce(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.basis.iter().map(|col| col.iter().map(|&(i, v)| v.conj() * psi[i]).sum()).collect()
    }

    pub fn eigenvector(&self, level: usize, dim: usize) -> Vec<Complex64> {
        let c: Vec<Complex64> = self.vectors.column(level).iter().copied().collect();
        self.lift(&c, dim)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchPoint {
    pub m: i64,
    pub k: f64,
    pub level: usize,
    pub energy: f64,
    /// `|<E|P_k probe>|^2` summed over the degenerate group, divided by `|P_k probe|^2` without
    /// its vacuum part.
    pub overlap: f64,
}

#[derive(Clone, Debug)]
pub struct SpectrumTable {
    pub sites: usize,
    pub spacing: f64,
    pub dim: usize,
    pub sectors: Vec<MomentumSector>,
    /// `(sector index, level)` of the global ground state.
    pub vacuum: (usize, usize),
    pub branch: Vec<BranchPoint>,
}

/// Symmetric momentum labels `m` for `L` cells.
fn momentum_labels(cells: usize) -> Vec<i64> {
    let l = cells as i64;
    (-(l - 1) / 2..=l / 2).collect()
}

/// Block-diagonalize a periodic Hamiltonian by translation by two sites.
pub fn momentum_sectors(h: &Hamiltonian1D) -> Result<SpectrumTable, LatticeError> {
    let spec = *h.model.spec();
    let t = Translation2::new(h)?;
    let defect = t.commutator_defect(&h.matrix);
    if defect > 1e-12 {
        return Err(LatticeError::Translation(defect));
    }
    let cells = spec.sites / 2;
    let orbits = t.orbits();
    let dim = h.dim();
    let mut sectors = Vec::new();
    for m in momentum_labels(cells) {
        let k = PI * m as f64 / (cells as f64 * spec.spacing);
        let lambda = Complex::from_polar(1.0, -2.0 * k * spec.spacing);
        let mut basis = Vec::new();
        for (members, sigma) in &orbits {
            let l = members.len();
            if (lambda.powi(l as i32) - sigma).norm() > 1e-9 {
                continue;
            }
            let norm = 1.0 / (l as f64).sqrt();
            basis.push(members.iter().enumerate().map(|(n, &(i, s))| (i, lambda.powi(-(n as i32)) * s * norm)).collect::<Vec<_>>());
        }
        let nb = basis.len();
        let mut hm = DMatrix::zeros(nb, nb);
        for (j, col) in basis.iter().enumerate() {
            let mut v = vec![Complex::new(0.0, 0.0); dim];
            for &(i, a) in col {
                v[i] = a;
            }
            let hv = h.matrix.mul_vec(&v);
            for (i, row) in basis.iter().enumerate() {
                hm[(i, j)] = row.iter().map(|&(r, a)| a.conj() * hv[r]).sum();
            }
        }
        let e = eigh(&hm)?;
        sectors.push(MomentumSector { m, k, energies: e.values, t2_eigenvalue: lambda, vectors: e.vectors, basis });
    }
    let total: usize = sectors.iter().map(|s| s.dim()).sum();
    if total != dim {
        return Err(LatticeError::Eigen(format!("momentum sectors cover {total} of {dim} states")));
    }
    let vac = sectors
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.energies.is_empty())
        .map(|(i, s)| (i, s.energies[0]))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(sectors[a.0].m.abs().cmp(&sectors[b.0].m.abs())))
        .map(|(i, _)| i)
        .ok_or_else(|| LatticeError::Eigen("empty spectrum".into()))?;
    // Momenta are measured relative to the vacuum, whose raw T2 eigenvalue carries a
    // fermion-ordering sign at some fillings.
    let l = cells as i64;
    let hi = l / 2;
    let m_vac = sectors[vac].m;
    for s in &mut sectors {
        let mut m = (s.m - m_vac).rem_euclid(l);
        if m > hi {
            m -= l;
        }
        s.m = m;
        s.k = PI * m as f64 / (cells as f64 * spec.spacing);
    }
    sectors.sort_by_key(|s| s.m);
    let vacuum = (sectors.iter().position(|s| s.m == 0).expect("vacuum sector"), 0);
    Ok(SpectrumTable { sites: spec.sites, spacing: spec.spacing, dim, sectors, vacuum, branch: Vec::new() })
}

impl SpectrumTable {
    pub fn sector(&self, m: i64) -> Option<&MomentumSector> {
        self.sectors.iter().find(|s| s.m == m)
    }

    pub fn ground_state(&self) -> (f64, Vec<Complex64>) {
        let s = &self.sectors[self.vacuum.0];
        (s.energies[0], s.eigenvector(0, self.dim))
    }

    /// Eigen-coefficients `<E_{m,j}|ψ>` per sector.
    pub fn decompose(&self, psi: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.sectors
            .iter()
            .map(|s| {
                let c = s.reduce(psi);
                let cv = nalgebra::DVector::from_vec(c);
                (s.vectors.adjoint() * cv).iter().copied().collect()
            })
            .collect()
    }

    pub fn recompose(&self, coeffs: &[Vec<Complex64>]) -> Vec<Complex64> {
        let mut out = vec![Complex::new(0.0, 0.0); self.dim];
        for (s, c) in self.sectors.iter().zip(coeffs) {
            let cv = &s.vectors * nalgebra::DVector::from_column_slice(c);
            for (o, v) in out.iter_mut().zip(s.lift(cv.as_slice(), self.dim)) {
                *o += v;
            }
        }
        out
    }

    /// `e^{-iHt} ψ`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let mut c = self.decompose(psi);
        for (s, cs) in self.sectors.iter().zip(c.iter_mut()) {
            for (x, &e) in cs.iter_mut().zip(&s.energies) {
                *x *= Complex::from_polar(1.0, -e * t);
            }
        }
        self.recompose(&c)
    }

    /// Largest `|<v_i|v_j> - δ_ij|` over all sectors.
    pub fn orthonormality_defect(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| {
                let g = s.vectors.adjoint() * &s.vectors;
                let mut worst: f64 = 0.0;
                for i in 0..g.nrows() {
                    for j in 0..g.ncols() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((g[(i, j)] - want).norm());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }

    /// One-particle branch: in each sector, the lowest level (above the vacuum) whose degenerate
    /// group carries at least `threshold` of the projected probe state.
    pub fn identify_branch(&mut self, probe: &[Complex64], threshold: f64) -> &[BranchPoint] {
        let coeffs = self.decompose(probe);
        let mut out = Vec::new();
        for (si, (s, c)) in self.sectors.iter().zip(&coeffs).enumerate() {
            let mut total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if si == self.vacuum.0 {
                let e = s.energies[self.vacuum.1];
                total -= s.energies.iter().zip(c).filter(|(&x, _)| (x - e).abs() < 1e-9).map(|(_, z)| z.norm_sqr()).sum::<f64>();
            }
            if total < 1e-24 {
                continue;
            }
            let mut j = 0;
            while j < s.energies.len() {
                let mut end = j + 1;
                while end < s.energies.len() && (s.energies[end] - s.energies[j]).abs() < 1e-9 {
                    end += 1;
                }
                let is_vac = si == self.vacuum.0 && (s.energies[j] - s.energies[self.vacuum.1]).abs() < 1e-9;
                let w: f64 = c[j..end].iter().map(|z| z.norm_sqr()).sum::<f64>() / total;
                if !is_vac && w >= threshold {
                    out.push(BranchPoint { m: s.m, k: s.k, level: j, energy: s.energies[j], overlap: w });
                    break;
                }
                j = end;
            }
        }
        self.branch = out;
        &self.branch
    }

    /// CSV with columns `m,k,level,energy,tags`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LatticeError> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| LatticeError::Io(e.to_string());
        wr.write_record(["m", "k", "level", "energy", "tags"]).map_err(io)?;
        for (si, s) in self.sectors.iter().enumerate() {
            for (j, e) in s.energies.iter().enumerate() {
                let mut tags = Vec::new();
                if (si, j) == self.vacuum {
                    tags.push("vacuum");
                }
                if self.branch.iter().any(|b| b.m == s.m && b.level == j) {
                    tags.push("one-particle");
                }
                wr.write_record([s.m.to_string(), format!("{:.17e}", s.k), j.to_string(), format!("{e:.17e}"), tags.join(";")]).map_err(io)?;
            }
        }
        wr.flush().map_err(|e| LatticeError::Io(e.to_string()))
    }
}
