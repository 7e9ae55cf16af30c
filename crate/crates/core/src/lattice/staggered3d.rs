use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use super::{Boundary, LatticeError};
use crate::interpolators::dirac::{alpha, beta, gamma5, Spinor4};
use crate::Complex64;

const ZERO: Complex64 = Complex { re: 0.0, im: 0.0 };

/// Free staggered one-body matrix `h` with `H_0 = Σ ξ^†(r) h_{rs} ξ(s)`, site index
/// `(x L_y + y) L_z + z`.
#[derive(Clone, Debug)]
pub struct OneBody3D {
    pub dims: [usize; 3],
    pub spacing: f64,
    pub mass: f64,
    pub boundary: Boundary,
    pub matrix: DMatrix<Complex64>,
}

/// `η(r, x̂) = (-1)^z`, `η(r, ŷ) = (-1)^x`, `η(r, ẑ) = (-1)^y`.
pub fn eta(r: [usize; 3], axis: usize) -> f64 {
    let p = match axis {
        0 => r[2],
        1 => r[0],
        _ => r[1],
    };
    if p % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl OneBody3D {
    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index(&self, r: [usize; 3]) -> usize {
        (r[0] * self.dims[1] + r[1]) * self.dims[2] + r[2]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Coordinate-format Matrix Market text (`complex general`, 1-based indices).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<(), LatticeError> {
        let io = |e: std::io::Error| LatticeError::Io(e.to_string());
        let n = self.matrix.nrows();
        let nz: Vec<(usize, usize, Complex64)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, self.matrix[(i, j)])).filter(|t| t.2 != ZERO).collect();
        writeln!(w, "%%MatrixMarket matrix coordinate complex general").map_err(io)?;
        writeln!(w, "% staggered one-body matrix dims={:?} a={} m0={} boundary={:?}", self.dims, self.spacing, self.mass, self.boundary).map_err(io)?;
        writeln!(w, "{n} {n} {}", nz.len()).map_err(io)?;
        for (i, j, v) in nz {
            writeln!(w, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re, v.im).map_err(io)?;
        }
        Ok(())
    }
}

/// `H_0 = (1/2a) Σ_{r,n} η(r,n) [ξ^†(r) ξ(r+n) + h.c.] + m_0 Σ_r (-1)^{x+y+z} ξ^†(r) ξ(r)`.
pub fn build_free_staggered_3d(dims: [usize; 3], mass: f64, spacing: f64, boundary: Boundary) -> Result<OneBody3D, LatticeError> {
    if dims.iter().any(|&l| l == 0 || l % 2 != 0) {
        return Err(LatticeError::OddExtent(dims));
    }
    let n: usize = dims.iter().product();
    let mut h = OneBody3D { dims, spacing, mass, boundary, matrix: DMatrix::zeros(n, n) };
    for x in 0..dims[0] {
        for y in 0..dims[1] {
            for z in 0..dims[2] {
                let r = [x, y, z];
                let i = h.index(r);
                let stag = if (x + y + z) % 2 == 0 { 1.0 } else { -1.0 };
                h.matrix[(i, i)] += Complex::new(stag * mass, 0.0);
                for axis in 0..3 {
                    let mut s = r;
                    s[axis] += 1;
                    if s[axis] == dims[axis] {
                        if boundary == Boundary::Open {
                            continue;
                        }
                        s[axis] = 0;
                    }
                    let j = h.index(s);
                    let t = Complex::new(eta(r, axis) / (2.0 * spacing), 0.0);
                    h.matrix[(i, j)] += t;
                    h.matrix[(j, i)] += t;
                }
            }
        }
    }
    Ok(h)
}

/// `i^{-x-z} A(y) D(x,z)` with `A(y) = [i^{y-1/2} + (-i)^{y-1/2}]/√2` on the principal branch.
pub fn stagger_phase(r: [usize; 3]) -> Complex64 {
    let (x, y, z) = (r[0] as f64, r[1] as f64, r[2] as f64);
    let pre = Complex::from_polar(1.0, -PI / 2.0 * (x + z));
    let h = y - 0.5;
    let a = (Complex::from_polar(1.0, PI / 2.0 * h) + Complex::from_polar(1.0, -PI / 2.0 * h)) / 2f64.sqrt();
    let sx = if r[0].is_multiple_of(2) { 1.0 } else { -1.0 };
    let sz = if r[2].is_multiple_of(2) { 1.0 } else { -1.0 };
    let d = 0.5 * (sx + sz - sx * sz + 1.0);
    pre * a * d
}

/// Site-to-spinor assignment of one unit cube and the flavour rotation.
#[derive(Clone, Debug, Serialize)]
pub struct StaggeredIdentification {
    pub variant: u8,
    /// Offsets of `f_1..f_4` and `g_1..g_4` from the cube origin `2r`.
    pub f_sites: [[usize; 3]; 4],
    pub g_sites: [[usize; 3]; 4],
}

/// `M = i diag(σ_y, -σ_y)`.
pub fn mixing_matrix() -> Spinor4 {
    let mut m = Spinor4::zeros();
    let one = Complex::new(1.0, 0.0);
    m[(0, 1)] = one;
    m[(1, 0)] = -one;
    m[(2, 3)] = -one;
    m[(3, 2)] = one;
    m
}

impl StaggeredIdentification {
    pub fn variant1() -> Self {
        Self { variant: 1, f_sites: [[0, 0, 0], [1, 0, 1], [0, 0, 1], [1, 0, 0]], g_sites: [[1, 1, 0], [2, 1, 1], [1, 1, 1], [2, 1, 0]] }
    }

    pub fn variant2() -> Self {
        Self { variant: 2, f_sites: [[0, 0, 0], [1, 0, 1], [0, 0, 1], [1, 0, 0]], g_sites: [[1, 1, 0], [0, 1, 1], [1, 1, 1], [0, 1, 0]] }
    }

    pub fn new(variant: u8) -> Result<Self, LatticeError> {
        match variant {
            1 => Ok(Self::variant1()),
            2 => Ok(Self::variant2()),
            v => Err(LatticeError::InvalidSpec(format!("identification variant {v}"))),
        }
    }

    /// Each of the eight corner parities `(x, y, z) mod 2` appears exactly once.
    pub fn covers_cube(&self) -> bool {
        let mut seen = [false; 8];
        for o in self.f_sites.iter().chain(&self.g_sites) {
            seen[(o[0] % 2) * 4 + (o[1] % 2) * 2 + o[2] % 2] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// `(u, d)` rows in terms of `(f, g)`: 8x8 with columns `f_1..f_4, g_1..g_4`.
    pub fn rotation(&self) -> DMatrix<Complex64> {
        let m = mixing_matrix();
        let id = Spinor4::identity();
        let i = Complex::new(0.0, 1.0);
        let (uf, ug, df, dg) = if self.variant == 1 {
            let h = Complex::new(0.5, 0.0);
            ((id - m * i) * h, (id + m * i) * h, (m - id * i) * h, -(m + id * i) * h)
        } else {
            let s = Complex::new(0.5f64.sqrt(), 0.0);
            (id * s, id * s, m * s, -m * s)
        };
        let mut out = DMatrix::zeros(8, 8);
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] = uf[(r, c)];
                out[(r, c + 4)] = ug[(r, c)];
                out[(r + 4, c)] = df[(r, c)];
                out[(r + 4, c + 4)] = dg[(r, c)];
            }
        }
        out
    }
}

fn cells(dims: [usize; 3]) -> [usize; 3] {
    [dims[0] / 2, dims[1] / 2, dims[2] / 2]
}

fn cell_index(c: [usize; 3], r: [usize; 3]) -> usize {
    (r[0] * c[1] + r[1]) * c[2] + r[2]
}

fn cell_iter(c: [usize; 3]) -> impl Iterator<Item = [usize; 3]> {
    (0..c[0]).flat_map(move |x| (0..c[1]).flat_map(move |y| (0..c[2]).map(move |z| [x, y, z])))
}

/// Transform `V` with `(u, d)(cell) = V ξ`, rows `8 cell + 4 flavour + component`; sites are
/// taken modulo the extents.
pub fn transform(dims: [usize; 3], id: &StaggeredIdentification) -> DMatrix<Complex64> {
    let c = cells(dims);
    let ncell = c.iter().product::<usize>();
    let n: usize = dims.iter().product();
    let rot = id.rotation();
    let site = |s: [usize; 3]| ((s[0] % dims[0]) * dims[1] + s[1] % dims[1]) * dims[2] + s[2] % dims[2];
    let mut v = DMatrix::zeros(8 * ncell, n);
    for r in cell_iter(c) {
        let ci = cell_index(c, r);
        let mut fg = Vec::with_capacity(8);
        for o in id.f_sites.iter().chain(&id.g_sites) {
            let s = [2 * r[0] + o[0], 2 * r[1] + o[1], 2 * r[2] + o[2]];
            let wrapped = [s[0] % dims[0], s[1] % dims[1], s[2] % dims[2]];
            fg.push((site(s), stagger_phase(wrapped)));
        }
        for row in 0..8 {
            for (col, &(s, ph)) in fg.iter().enumerate() {
                v[(8 * ci + row, s)] += rot[(row, col)] * ph;
            }
        }
    }
    v
}

/// `V h V^†` in the `(u, d)` basis.
pub fn identify_ud(h: &OneBody3D, id: &StaggeredIdentification) -> Result<DMatrix<Complex64>, LatticeError> {
    let v = transform(h.dims, id);
    let n = v.nrows();
    let dev = (&v * v.adjoint() - DMatrix::<Complex64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > 1e-12 {
        return Err(LatticeError::NonUnitary(dev));
    }
    Ok(&v * &h.matrix * v.adjoint())
}

/// Stencils acting componentwise on four-component cell fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DerivativeKind {
    X,
    Y,
    Z,
    XY,
    /// `[q(r+n) - q(r-n)]/2`.
    CentralX,
    CentralY,
    /// `[q(r+n) + q(r-n) - 2q(r)]/2`.
    SecondX,
    SecondY,
    /// `Δ_ẑ` with forward and backward components exchanged.
    ZMirrored,
}

type Stencil = [Vec<(f64, [i64; 3])>; 4];

const O: [i64; 3] = [0, 0, 0];

fn add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(a: [i64; 3]) -> [i64; 3] {
    [-a[0], -a[1], -a[2]]
}

fn unit(axis: usize) -> [i64; 3] {
    let mut e = [0; 3];
    e[axis] = 1;
    e
}

impl DerivativeKind {
    pub fn stencil(self) -> Stencil {
        let (x, y, z) = (unit(0), unit(1), unit(2));
        let fw = |n: [i64; 3]| vec![(1.0, n), (-1.0, O)];
        let bw = |n: [i64; 3]| vec![(1.0, O), (-1.0, neg(n))];
        let cen = |n: [i64; 3]| vec![(0.5, n), (-0.5, neg(n))];
        let sec = |n: [i64; 3]| vec![(0.5, n), (0.5, neg(n)), (-1.0, O)];
        let h = |t: [(f64, [i64; 3]); 4]| t.iter().map(|&(c, o)| (0.5 * c, o)).collect::<Vec<_>>();
        let (mx, my, xy_) = (neg(x), neg(y), add(x, y));
        let mxy = neg(xy_);
        match self {
            Self::X => [fw(x), bw(x), fw(x), bw(x)],
            Self::Z => [fw(z), bw(z), bw(z), fw(z)],
            Self::ZMirrored => [bw(z), fw(z), fw(z), bw(z)],
            Self::Y => {
                let a = h([(1.0, O), (-1.0, my), (1.0, xy_), (-1.0, x)]);
                let b = h([(1.0, y), (-1.0, O), (1.0, mx), (-1.0, mxy)]);
                let d = h([(1.0, mx), (-1.0, mxy), (1.0, y), (-1.0, O)]);
                [a.clone(), b, a, d]
            }
            Self::XY => {
                let a = h([(1.0, O), (-1.0, my), (-1.0, xy_), (1.0, x)]);
                let b = h([(1.0, y), (-1.0, O), (-1.0, mx), (1.0, mxy)]);
                let d = h([(1.0, mx), (-1.0, mxy), (-1.0, y), (1.0, O)]);
                [a.clone(), b, a, d]
            }
            Self::CentralX => [cen(x), cen(x), cen(x), cen(x)],
            Self::CentralY => [cen(y), cen(y), cen(y), cen(y)],
            Self::SecondX => [sec(x), sec(x), sec(x), sec(x)],
            Self::SecondY => [sec(y), sec(y), sec(y), sec(y)],
        }
    }
}

fn neighbour(c: [usize; 3], r: [usize; 3], off: [i64; 3], boundary: Boundary) -> Option<[usize; 3]> {
    let mut out = [0; 3];
    for k in 0..3 {
        let t = r[k] as i64 + off[k];
        let n = c[k] as i64;
        out[k] = match boundary {
            Boundary::Periodic => t.rem_euclid(n) as usize,
            Boundary::Open if (0..n).contains(&t) => t as usize,
            Boundary::Open => return None,
        };
    }
    Some(out)
}

/// Stencil applied to a field `q[cell][component]` on a grid of `cell_dims`; open boundaries read
/// zero outside. Samples are spaced by `a`, which only enters through the field values.
pub fn discrete_derivative(kind: DerivativeKind, field: &[[Complex64; 4]], cell_dims: [usize; 3], boundary: Boundary) -> Vec<[Complex64; 4]> {
    let st = kind.stencil();
    cell_iter(cell_dims)
        .map(|r| {
            let mut out = [ZERO; 4];
            for (comp, terms) in st.iter().enumerate() {
                for &(coef, off) in terms {
                    if let Some(s) = neighbour(cell_dims, r, off, boundary) {
                        out[comp] += field[cell_index(cell_dims, s)][comp] * coef;
                    }
                }
            }
            out
        })
        .collect()
}

/// `Γ Δ` as a `4 C x 4 C` matrix (index `4 cell + component`).
fn gamma_stencil(g: &Spinor4, kind: DerivativeKind, c: [usize; 3], boundary: Boundary) -> DMatrix<Complex64> {
    let ncell = c.iter().product::<usize>();
    let st = kind.stencil();
    let mut m = DMatrix::zeros(4 * ncell, 4 * ncell);
    for r in cell_iter(c) {
        let ci = cell_index(c, r);
        for (j, terms) in st.iter().enumerate() {
            for &(coef, off) in terms {
                let Some(s) = neighbour(c, r, off, boundary) else { continue };
                let cj = cell_index(c, s);
                for i in 0..4 {
                    m[(4 * ci + i, 4 * cj + j)] += g[(i, j)] * coef;
                }
            }
        }
    }
    m
}

fn spin(g: &Spinor4, ncell: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(4 * ncell, 4 * ncell);
    for c in 0..ncell {
        for i in 0..4 {
            for j in 0..4 {
                m[(4 * c + i, 4 * c + j)] = g[(i, j)];
            }
        }
    }
    m
}

/// The four flavour blocks of a `(u, d)` matrix.
#[derive(Clone, Debug)]
pub struct UdBlocks {
    pub uu: DMatrix<Complex64>,
    pub ud: DMatrix<Complex64>,
    pub du: DMatrix<Complex64>,
    pub dd: DMatrix<Complex64>,
}

impl UdBlocks {
    pub fn split(m: &DMatrix<Complex64>) -> Self {
        let ncell = m.nrows() / 8;
        let blk = |fr: usize, fc: usize| {
            DMatrix::from_fn(4 * ncell, 4 * ncell, |i, j| m[(8 * (i / 4) + 4 * fr + i % 4, 8 * (j / 4) + 4 * fc + j % 4)])
        };
        Self { uu: blk(0, 0), ud: blk(0, 1), du: blk(1, 0), dd: blk(1, 1) }
    }

    pub fn join(&self) -> DMatrix<Complex64> {
        let ncell = self.uu.nrows() / 4;
        DMatrix::from_fn(8 * ncell, 8 * ncell, |i, j| {
            let (fi, fj) = ((i % 8) / 4, (j % 8) / 4);
            let (bi, bj) = (4 * (i / 8) + i % 4, 4 * (j / 8) + j % 4);
            match (fi, fj) {
                (0, 0) => self.uu[(bi, bj)],
                (0, 1) => self.ud[(bi, bj)],
                (1, 0) => self.du[(bi, bj)],
                _ => self.dd[(bi, bj)],
            }
        })
    }
}

/// Target `(u, d)` Hamiltonian built from the Δ stencils and Dirac matrices.
///
/// Variant 1: `(i/2a) α·Δ ± (i/2a) βγ_5 Δ_x̂ŷ + m_0 β` on `u` (`+`) and `d` (`-`), no mixing.
/// Variant 2: `(i/2a) α·Δ + m_0 β` per flavour with central `Δ_x̂, Δ_ŷ`, mixing
/// `(i/2a) βγ_5 (Δ²_x̂ ± i Δ²_ŷ)`. With `mirror_d_z` the `d` flavour uses [`DerivativeKind::ZMirrored`].
pub fn ud_target(dims: [usize; 3], mass: f64, spacing: f64, boundary: Boundary, variant: u8, mirror_d_z: bool) -> UdBlocks {
    let c = cells(dims);
    let ncell = c.iter().product::<usize>();
    let pre = Complex::new(0.0, 0.5 / spacing);
    let gs = |g: &Spinor4, k| gamma_stencil(g, k, c, boundary);
    let mass_term = spin(&beta(), ncell) * Complex::new(mass, 0.0);
    let (kx, ky) = if variant == 1 { (DerivativeKind::X, DerivativeKind::Y) } else { (DerivativeKind::CentralX, DerivativeKind::CentralY) };
    let dz = if mirror_d_z { DerivativeKind::ZMirrored } else { DerivativeKind::Z };
    let kin_u = gs(&alpha(0), kx) + gs(&alpha(1), ky) + gs(&alpha(2), DerivativeKind::Z);
    let kin_d = gs(&alpha(0), kx) + gs(&alpha(1), ky) + gs(&alpha(2), dz);
    let bg5 = beta() * gamma5();
    let zero = DMatrix::zeros(4 * ncell, 4 * ncell);
    if variant == 1 {
        let xy = gs(&bg5, DerivativeKind::XY);
        UdBlocks { uu: (kin_u + &xy) * pre + &mass_term, dd: (kin_d - &xy) * pre + &mass_term, ud: zero.clone(), du: zero }
    } else {
        let i = Complex::new(0.0, 1.0);
        let (sx, sy) = (gs(&bg5, DerivativeKind::SecondX), gs(&bg5, DerivativeKind::SecondY));
        UdBlocks {
            uu: kin_u * pre + &mass_term,
            dd: kin_d * pre + &mass_term,
            ud: (&sx + &sy * i) * pre,
            du: (&sx - &sy * i) * pre,
        }
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entrywise comparison of the transformed matrix with a target.
#[derive(Clone, Debug, Serialize)]
pub struct IdentificationReport {
    pub variant: u8,
    pub dims: [usize; 3],
    pub boundary: Boundary,
    pub mirror_d_z: bool,
    pub unitarity: f64,
    pub uu: f64,
    pub dd: f64,
    pub ud: f64,
    pub du: f64,
    /// Largest entry of the transformed `u^† ... d` and `d^† ... u` blocks.
    pub mixing: f64,
    /// `max |T - T^†|` of the target.
    pub target_hermiticity: f64,
}

impl IdentificationReport {
    pub fn compute(h: &OneBody3D, id: &StaggeredIdentification, mirror_d_z: bool) -> Result<Self, LatticeError> {
        let v = transform(h.dims, id);
        let n = v.nrows();
        let unitarity = max_abs(&(&v * v.adjoint() - DMatrix::<Complex64>::identity(n, n)));
        let t = UdBlocks::split(&identify_ud(h, id)?);
        let target = ud_target(h.dims, h.mass, h.spacing, h.boundary, id.variant, mirror_d_z);
        let joined = target.join();
        Ok(Self {
            variant: id.variant,
            dims: h.dims,
            boundary: h.boundary,
            mirror_d_z,
            unitarity,
            uu: max_abs(&(&t.uu - &target.uu)),
            dd: max_abs(&(&t.dd - &target.dd)),
            ud: max_abs(&(&t.ud - &target.ud)),
            du: max_abs(&(&t.du - &target.du)),
            mixing: max_abs(&t.ud).max(max_abs(&t.du)),
            target_hermiticity: max_abs(&(&joined - joined.adjoint())),
        })
    }

    pub fn max_mismatch(&self) -> f64 {
        self.uu.max(self.dd).max(self.ud).max(self.du)
    }
}
