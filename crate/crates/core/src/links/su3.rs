use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{LinkError, LinkFactor, LinkOpDecomposition, LinkSpace};

/// Labels stored as integers: `p`, `q`, `2T`, `2T^z`, `3Y` for the left and right sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Su3Label {
    pub p: i32,
    pub q: i32,
    pub t2: [i32; 2],
    pub tz2: [i32; 2],
    pub y3: [i32; 2],
}

impl Su3Label {
    pub fn is_valid(&self, cutoff: i32) -> bool {
        let (p, q) = (self.p, self.q);
        if p < 0 || q < 0 || p + q > cutoff {
            return false;
        }
        (0..2).all(|i| {
            let (t2, tz2, y3) = (self.t2[i], self.tz2[i], self.y3[i]);
            t2 >= 0 && t2 <= p + q && tz2.abs() <= t2 && (t2 - tz2) % 2 == 0 && y3 >= -(q + 2 * p) && y3 <= p + 2 * q && (p + 2 * q - y3) % 3 == 0
        })
    }

    /// `p,q,T_L,T_L^z,Y_L,T_R,T_R^z,Y_R` with reduced fractions, e.g. `1,0,1/2,-1/2,1/3,0,0,-2/3`.
    pub fn key(&self) -> String {
        let mut parts = vec![self.p.to_string(), self.q.to_string()];
        for i in 0..2 {
            parts.push(frac(self.t2[i], 2));
            parts.push(frac(self.tz2[i], 2));
            parts.push(frac(self.y3[i], 3));
        }
        parts.join(",")
    }
}

fn frac(num: i32, den: i32) -> String {
    if num % den == 0 {
        (num / den).to_string()
    } else {
        format!("{num}/{den}")
    }
}

const P: usize = 0;
const Q: usize = 1;
const T: [usize; 2] = [2, 5];
const TZ: [usize; 2] = [3, 6];
const Y: [usize; 2] = [4, 7];

/// Registers `p, q ∈ 0..=c`, `2T ∈ 0..=c`, `2T^z ∈ -c..=c`, `3Y ∈ -2c..=2c` for cutoff `p + q ≤ c`.
pub fn su3_space(cutoff: usize) -> Arc<LinkSpace> {
    let c = cutoff;
    let sizes = [("p", c + 1), ("q", c + 1), ("TL2", c + 1), ("TzL2", 2 * c + 1), ("YL3", 4 * c + 1), ("TR2", c + 1), ("TzR2", 2 * c + 1), ("YR3", 4 * c + 1)];
    let ci = c as i32;
    Arc::new(LinkSpace::new(&sizes, move |v| decode_label(v, ci).is_valid(ci)))
}

fn decode_label(v: &[usize], c: i32) -> Su3Label {
    let g = |i: usize| v[i] as i32;
    Su3Label {
        p: g(P),
        q: g(Q),
        t2: [g(T[0]), g(T[1])],
        tz2: [g(TZ[0]) - c, g(TZ[1]) - c],
        y3: [g(Y[0]) - 2 * c, g(Y[1]) - 2 * c],
    }
}

fn cutoff_of(space: &LinkSpace) -> i32 {
    (space.registers()[P].size - 1) as i32
}

pub fn su3_label(space: &LinkSpace, idx: u64) -> Option<Su3Label> {
    space.decode(idx).map(|v| decode_label(&v, cutoff_of(space)))
}

/// Names of the diagonal operators a table must provide.
pub static SU3_NAMES: std::sync::LazyLock<Vec<String>> = std::sync::LazyLock::new(|| {
    let mut v: Vec<String> = vec!["N1".into(), "N2".into(), "N3".into()];
    for side in ["L", "R"] {
        for k in 1..=3 {
            for a in 1..=2 {
                v.push(format!("C{side}{k}{a}a"));
                v.push(format!("C{side}{k}{a}b"));
            }
            v.push(format!("C{side}{k}3"));
        }
    }
    v
});

/// Entries of the SU(3) diagonal operators, keyed by [`Su3Label::key`] and operator name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalTable {
    pub entries: BTreeMap<String, BTreeMap<String, f64>>,
}

impl DiagonalTable {
    /// Same value for every operator and state.
    pub fn uniform(cutoff: usize, value: f64) -> Self {
        Self::filled(cutoff, |_, _| value)
    }

    /// Uniform random entries in `[-1, 1]`.
    pub fn random(cutoff: usize, seed: u64) -> Self {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self::filled(cutoff, |_, _| rng.gen_range(-1.0..=1.0))
    }

    fn filled(cutoff: usize, mut f: impl FnMut(&Su3Label, &str) -> f64) -> Self {
        let space = su3_space(cutoff);
        let mut entries = BTreeMap::new();
        for &b in space.physical() {
            let l = su3_label(&space, b).unwrap();
            let ops = SU3_NAMES.iter().map(|n| (n.clone(), f(&l, n))).collect();
            entries.insert(l.key(), ops);
        }
        Self { entries }
    }

    pub fn from_json(text: &str) -> Result<Self, LinkError> {
        serde_json::from_str(text).map_err(|e| LinkError::Table(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Every entry in `[-1, 1]` and every physical state of `space` present with all operators.
    pub fn validate(&self, space: &LinkSpace) -> Result<(), LinkError> {
        for ops in self.entries.values() {
            if let Some(&v) = ops.values().find(|v| !(-1.0..=1.0).contains(*v)) {
                return Err(LinkError::OutOfRange(v));
            }
        }
        for &b in space.physical() {
            let key = su3_label(space, b).unwrap().key();
            let ops = self.entries.get(&key).ok_or_else(|| LinkError::MissingEntry(key.clone()))?;
            if let Some(n) = SU3_NAMES.iter().find(|n| !ops.contains_key(*n)) {
                return Err(LinkError::MissingEntry(format!("{n} at {key}")));
            }
        }
        Ok(())
    }

    fn values(&self, space: &LinkSpace, name: &str) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << space.width()];
        for &b in space.physical() {
            let key = su3_label(space, b).unwrap().key();
            out[b as usize] = self.entries[&key][name];
        }
        out
    }
}

/// `(ΔT^z, ΔY)` of `M_α` in register steps (`2T^z`, `3Y`).
fn m_shift(alpha: usize) -> (i64, i64) {
    match alpha {
        1 => (1, 1),
        2 => (-1, 1),
        _ => (0, -2),
    }
}

/// `U_{αβ} = M^L_α M^R_β (P^+ 𝒞^L_{1α} 𝒞^R_{1β} N̂_1 + P^- Q^+ 𝒞^L_{2α} 𝒞^R_{2β} N̂_2 + Q^- 𝒞^L_{3α} 𝒞^R_{3β} N̂_3)`
/// with `𝒞_{kα} = T^+ Ĉ_{kα}^{(a)} + T^- Ĉ_{kα}^{(b)}` for `α ≤ 2` and `𝒞_{k3} = Ĉ_{k3}`, expanded into
/// `3 n(α) n(β)` terms (`n = 2, 2, 1`).
pub fn su3_link_component(alpha: usize, beta: usize, space: &Arc<LinkSpace>, table: &DiagonalTable) -> Result<LinkOpDecomposition, LinkError> {
    if !(1..=3).contains(&alpha) || !(1..=3).contains(&beta) {
        return Err(LinkError::InvalidLabel(format!("alpha={alpha} beta={beta}")));
    }
    table.validate(space)?;
    let diag = |name: String| LinkFactor::Diagonal { values: Arc::new(table.values(space, &name)), name };
    // factors of 𝒞^side_{kγ}: list of (T shift or none, diagonal name)
    let split = |side: usize, k: usize, g: usize| -> Vec<(Option<i64>, String)> {
        let s = ["L", "R"][side];
        if g == 3 {
            vec![(None, format!("C{s}{k}3"))]
        } else {
            vec![(Some(1), format!("C{s}{k}{g}a")), (Some(-1), format!("C{s}{k}{g}b"))]
        }
    };
    let outer: [Vec<(usize, i64)>; 3] = [vec![(P, 1)], vec![(P, -1), (Q, 1)], vec![(Q, -1)]];
    let mut d = LinkOpDecomposition::new(space.clone(), 1.0);
    let (lz, ly) = m_shift(alpha);
    let (rz, ry) = m_shift(beta);
    for k in 1..=3 {
        for (tl, cl) in split(0, k, alpha) {
            for (tr, cr) in split(1, k, beta) {
                let mut f = vec![
                    LinkFactor::Shift { register: TZ[0], by: lz },
                    LinkFactor::Shift { register: Y[0], by: ly },
                    LinkFactor::Shift { register: TZ[1], by: rz },
                    LinkFactor::Shift { register: Y[1], by: ry },
                ];
                f.extend(outer[k - 1].iter().map(|&(register, by)| LinkFactor::Shift { register, by }));
                // T_L and T_R commute; every diagonal is read on the input labels (Ĉ^L depends on
                // p, q and left labels only, Ĉ^R on p, q and right labels)
                f.extend(tl.map(|by| LinkFactor::Shift { register: T[0], by }));
                f.extend(tr.map(|by| LinkFactor::Shift { register: T[1], by }));
                f.push(diag(cl.clone()));
                f.push(diag(cr.clone()));
                f.push(diag(format!("N{k}")));
                d.push(format!("N{k}:{cl}:{cr}"), f)?;
            }
        }
    }
    Ok(d)
}
