use std::sync::Arc;

use super::{LinkError, LinkFactor, LinkOpDecomposition, LinkSpace};

/// Doubled labels `(2j, 2m_L, 2m_R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Su2Label {
    pub j2: i32,
    pub ml2: i32,
    pub mr2: i32,
}

impl Su2Label {
    pub fn is_valid(&self) -> bool {
        self.j2 >= 0 && self.ml2.abs() <= self.j2 && self.mr2.abs() <= self.j2 && (self.j2 - self.ml2) % 2 == 0 && (self.j2 - self.mr2) % 2 == 0
    }
}

const J: usize = 0;
const ML: usize = 1;
const MR: usize = 2;

/// Registers `j2 ∈ 0..=2j_max`, `m ∈ -j_max..=j_max` in half steps stored as `2m + 2j_max`.
pub fn su2_space(jmax2: usize) -> Arc<LinkSpace> {
    let jm = jmax2 as i32;
    Arc::new(LinkSpace::new(&[("j2", jmax2 + 1), ("mL", 2 * jmax2 + 1), ("mR", 2 * jmax2 + 1)], move |v| {
        Su2Label { j2: v[J] as i32, ml2: v[ML] as i32 - jm, mr2: v[MR] as i32 - jm }.is_valid()
    }))
}

pub fn su2_label(space: &LinkSpace, idx: u64) -> Option<Su2Label> {
    let jm = (space.registers()[J].size - 1) as i32;
    space.decode(idx).map(|v| Su2Label { j2: v[J] as i32, ml2: v[ML] as i32 - jm, mr2: v[MR] as i32 - jm })
}

/// Physical states with `j < j_max`.
pub fn su2_interior(space: &LinkSpace) -> Vec<u64> {
    let jm = (space.registers()[J].size - 1) as i32;
    space.physical().iter().copied().filter(|&b| su2_label(space, b).unwrap().j2 < jm).collect()
}

/// `<J', m+μ | j, m; 1/2, μ>` in doubled labels (`mu2 = ±1`, `jp2 = j2 ± 1`).
pub fn su2_cg(j2: i32, m2: i32, mu2: i32, jp2: i32) -> Result<f64, LinkError> {
    if j2 < 0 || m2.abs() > j2 || (j2 - m2) % 2 != 0 || mu2.abs() != 1 || (jp2 - j2).abs() != 1 || jp2 < 0 {
        return Err(LinkError::InvalidLabel(format!("j2={j2} m2={m2} mu2={mu2} jp2={jp2}")));
    }
    if (m2 + mu2).abs() > jp2 {
        return Ok(0.0);
    }
    let (j, m) = (j2 as f64 / 2.0, m2 as f64 / 2.0);
    let den = 2.0 * j + 1.0;
    Ok(match (jp2 > j2, mu2 > 0) {
        (true, true) => ((j + m + 1.0) / den).sqrt(),
        (true, false) => ((j - m + 1.0) / den).sqrt(),
        (false, true) => -((j - m) / den).sqrt(),
        (false, false) => ((j + m) / den).sqrt(),
    })
}

/// `c^±_{αβ}(j, m_L, m_R)`; zero when `j ± 1/2` is negative.
pub fn su2_c_pm(alpha: usize, beta: usize, label: Su2Label, sign: i32) -> Result<f64, LinkError> {
    if !(1..=2).contains(&alpha) || !(1..=2).contains(&beta) || sign.abs() != 1 || !label.is_valid() {
        return Err(LinkError::InvalidLabel(format!("alpha={alpha} beta={beta} {label:?}")));
    }
    let jp2 = label.j2 + sign;
    if jp2 < 0 {
        return Ok(0.0);
    }
    let mu_l = 3 - 2 * alpha as i32;
    let mu_r = 3 - 2 * beta as i32;
    let norm = ((label.j2 as f64 + 1.0) / (jp2 as f64 + 1.0)).sqrt();
    Ok(norm * su2_cg(label.j2, label.ml2, mu_l, jp2)? * su2_cg(label.j2, label.mr2, mu_r, jp2)?)
}

/// `U_{αβ} = M^L_α M^R_β (J^- c^-_{αβ} + J^+ c^+_{αβ})` on the truncated register.
pub fn su2_link_component(alpha: usize, beta: usize, space: &Arc<LinkSpace>) -> Result<LinkOpDecomposition, LinkError> {
    if !(1..=2).contains(&alpha) || !(1..=2).contains(&beta) {
        return Err(LinkError::InvalidLabel(format!("alpha={alpha} beta={beta}")));
    }
    let jmax2 = (space.registers()[J].size - 1) as i32;
    let mu_l = 3 - 2 * alpha as i64;
    let mu_r = 3 - 2 * beta as i64;
    let mut d = LinkOpDecomposition::new(space.clone(), 1.0);
    for (sign, name) in [(-1i32, "J-"), (1, "J+")] {
        let mut values = vec![0.0; 1usize << space.width()];
        for &b in space.physical() {
            let l = su2_label(space, b).unwrap();
            if l.j2 + sign <= jmax2 {
                values[b as usize] = su2_c_pm(alpha, beta, l, sign)?;
            }
        }
        let cname = if sign < 0 { "c-" } else { "c+" };
        d.push(
            name,
            vec![
                LinkFactor::Shift { register: ML, by: mu_l },
                LinkFactor::Shift { register: MR, by: mu_r },
                LinkFactor::Shift { register: J, by: sign as i64 },
                LinkFactor::Diagonal { name: cname.into(), values: Arc::new(values) },
            ],
        )?;
    }
    Ok(d)
}

/// Eigenvalues of `E^2`, `E_L^3`, `E_R^3` per register index (zero on padding).
pub fn su2_electric(space: &LinkSpace) -> [Vec<f64>; 3] {
    let dim = 1usize << space.width();
    let mut out = [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]];
    for b in 0..dim as u64 {
        if let Some(l) = su2_label(space, b) {
            let j = l.j2 as f64 / 2.0;
            out[0][b as usize] = j * (j + 1.0);
            out[1][b as usize] = l.ml2 as f64 / 2.0;
            out[2][b as usize] = l.mr2 as f64 / 2.0;
        }
    }
    out
}
