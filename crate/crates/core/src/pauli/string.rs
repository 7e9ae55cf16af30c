use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::PauliError;

/// Maximum register width representable by a [`PauliString`].
pub const MAX_WIDTH: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '1' => Some(Letter::I),
            'X' | 'x' => Some(Letter::X),
            'Y' | 'y' => Some(Letter::Y),
            'Z' | 'z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Phase-free Pauli string packed as X and Z bit planes (bit `q` is qubit `q`).
///
/// The letter on qubit `q` is `i^{x_q z_q} X^{x_q} Z^{z_q}`, so every string is Hermitian.
/// Qubit `q` is bit `q` of a computational-basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    width: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(width: usize) -> Result<Self, PauliError> {
        Self::from_masks(width, 0, 0)
    }

    pub fn from_masks(width: usize, x: u64, z: u64) -> Result<Self, PauliError> {
        if width > MAX_WIDTH {
            return Err(PauliError::WidthTooLarge { width, cap: MAX_WIDTH });
        }
        let mask = width_mask(width);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(PauliError::QubitOutOfRange { width });
        }
        Ok(Self { width: width as u8, x, z })
    }

    /// Single letter on `qubit`, identity elsewhere.
    pub fn single(width: usize, qubit: usize, letter: Letter) -> Result<Self, PauliError> {
        if qubit >= width {
            return Err(PauliError::QubitOutOfRange { width });
        }
        let (xb, zb) = letter.bits();
        Self::from_masks(width, (xb as u64) << qubit, (zb as u64) << qubit)
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self, PauliError> {
        let mut x = 0u64;
        let mut z = 0u64;
        if letters.len() > MAX_WIDTH {
            return Err(PauliError::WidthTooLarge { width: letters.len(), cap: MAX_WIDTH });
        }
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x |= (xb as u64) << q;
            z |= (zb as u64) << q;
        }
        Self::from_masks(letters.len(), x, z)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.width()).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of Y letters, i.e. the exponent of `i` relating the string to `X^x Z^z`.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Group product `self * other = i^k * result`; returns `(k mod 4, result)`.
    pub fn mul(&self, other: &PauliString) -> Result<(u8, PauliString), PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch { left: self.width(), right: other.width() });
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok(((k % 4) as u8, PauliString { width: self.width, x, z }))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Action on a basis state: `P|b> = i^k |b'>` with `k` returned mod 4.
    pub fn act(&self, basis: u64) -> (u64, u8) {
        let sign = ((self.z & basis).count_ones() & 1) * 2;
        (basis ^ self.x, ((self.y_count() + sign) % 4) as u8)
    }

    /// Embed into a wider register, placing qubit `q` at `positions[q]`.
    pub fn embed(&self, width: usize, positions: &[usize]) -> Result<PauliString, PauliError> {
        if positions.len() != self.width() {
            return Err(PauliError::WidthMismatch { left: positions.len(), right: self.width() });
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, &p) in positions.iter().enumerate() {
            if p >= width {
                return Err(PauliError::QubitOutOfRange { width });
            }
            x |= ((self.x >> q) & 1) << p;
            z |= ((self.z >> q) & 1) << p;
        }
        PauliString::from_masks(width, x, z)
    }
}

fn width_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl Ord for PauliString {
    /// Lexicographic on letters, qubit 0 first, with `I < X < Y < Z`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            let diff = (self.x ^ other.x) | (self.z ^ other.z);
            if diff == 0 {
                return Ordering::Equal;
            }
            let q = diff.trailing_zeros() as usize;
            self.letter(q).cmp(&other.letter(q))
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return write!(f, "-");
        }
        for q in 0..self.width() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return PauliString::identity(0);
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| PauliError::Parse(format!("bad letter {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        PauliString::from_letters(&letters)
    }
}
