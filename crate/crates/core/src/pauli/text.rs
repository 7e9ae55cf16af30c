use num_complex::Complex;

use super::{OperatorSum, PauliError, PauliTerm};
use crate::scalar::Real;

/// One term per line: `<re> <im> <letters>`. Floats are written in shortest round-trip form.
pub fn write_operator_sum<T: Real>(op: &OperatorSum<T>) -> String {
    let mut out = String::new();
    for t in op.terms() {
        let c = t.coefficient();
        out.push_str(&format!("{:?} {:?} {}\n", c.re, c.im, t.string()));
    }
    out
}

/// Inverse of [`write_operator_sum`]. Blank lines and lines starting with `#` are skipped.
pub fn parse_operator_sum<T: Real + std::str::FromStr>(width: usize, text: &str) -> Result<OperatorSum<T>, PauliError> {
    let mut terms = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(PauliError::Parse(format!("line {}: expected 3 fields", n + 1)));
        }
        let num = |s: &str| s.parse::<T>().map_err(|_| PauliError::Parse(format!("line {}: bad number {s}", n + 1)));
        let c = Complex::new(num(parts[0])?, num(parts[1])?);
        let t = PauliTerm::parse(c, parts[2])?;
        if t.width() != width {
            return Err(PauliError::WidthMismatch { left: width, right: t.width() });
        }
        terms.push(t);
    }
    OperatorSum::from_terms(width, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let a = PauliTerm::parse(Complex::new(0.1f64, -1.0 / 3.0), "XYZI").unwrap();
        let b = PauliTerm::parse(Complex::new(std::f64::consts::PI, 1e-300), "IIZZ").unwrap();
        let op = OperatorSum::from_terms(4, vec![a, b]).unwrap();
        let back: OperatorSum<f64> = parse_operator_sum(4, &write_operator_sum(&op)).unwrap();
        assert_eq!(op, back);
    }
}
