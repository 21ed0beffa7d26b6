//! Dense Pauli operators on up to 64 qubits.
//!
//! Internally an operator is stored as `i^phase · X^x · Z^z`, i.e. every
//! qubit carries `X^{x_q} Z^{z_q}` in that order. A Hermitian `Y` on qubit q
//! is therefore `x_q = z_q = 1` with one extra factor of `i` in the phase.
//! This keeps Clifford conjugation cheap: CNOT never touches the phase and H
//! only adds `2·(x_q ∧ z_q)`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a [`Pauli`] can describe.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const NON_IDENTITY: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PauliKind::I => '-',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }
}

/// Overall coefficient of a Pauli string written with Hermitian letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Sign {
    fn from_quarter_turns(k: u8) -> Self {
        match k & 3 {
            0 => Sign::PlusOne,
            1 => Sign::PlusI,
            2 => Sign::MinusOne,
            _ => Sign::MinusI,
        }
    }
}

/// An n-qubit Pauli operator with phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pauli {
    n: u8,
    x: u64,
    z: u64,
    /// Quarter turns in the `X^x Z^z` convention.
    phase: u8,
}

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Pauli { n: n as u8, x: 0, z: 0, phase: 0 }
    }

    /// Hermitian Pauli with `+1` sign built from raw bit masks (`Y` where both bits are set).
    pub fn from_bits(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        let m = mask(n);
        let (x, z) = (x & m, z & m);
        Pauli { n: n as u8, x, z, phase: ((x & z).count_ones() & 3) as u8 }
    }

    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
        let (x, z) = kind.bits();
        Pauli::from_bits(n, (x as u64) << qubit, (z as u64) << qubit)
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        Pauli::from_bits(n, qubits.iter().fold(0, |m, &q| m | 1 << q), 0)
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        Pauli::from_bits(n, 0, qubits.iter().fold(0, |m, &q| m | 1 << q))
    }

    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn get(&self, qubit: usize) -> PauliKind {
        PauliKind::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, kind: PauliKind) {
        let sign = self.sign();
        let (x, z) = kind.bits();
        self.x = (self.x & !(1 << qubit)) | (x as u64) << qubit;
        self.z = (self.z & !(1 << qubit)) | (z as u64) << qubit;
        self.set_sign(sign);
    }

    pub fn sign(&self) -> Sign {
        let ys = ((self.x & self.z).count_ones() & 3) as u8;
        Sign::from_quarter_turns(self.phase.wrapping_sub(ys) & 3)
    }

    pub fn set_sign(&mut self, sign: Sign) {
        let k = match sign {
            Sign::PlusOne => 0,
            Sign::PlusI => 1,
            Sign::MinusOne => 2,
            Sign::MinusI => 3,
        };
        self.phase = (k + (self.x & self.z).count_ones() as u8) & 3;
    }

    /// Drops the coefficient, returning the Hermitian `+1` representative.
    pub fn unsigned(&self) -> Self {
        Pauli::from_bits(self.n as usize, self.x, self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// X component only (Y letters become X).
    pub fn x_part(&self) -> Self {
        Pauli::from_bits(self.n as usize, self.x, 0)
    }

    /// Z component only (Y letters become Z).
    pub fn z_part(&self) -> Self {
        Pauli::from_bits(self.n as usize, 0, self.z)
    }

    pub fn commutes(&self, other: &Pauli) -> bool {
        debug_assert_eq!(self.n, other.n);
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 0
    }

    /// Same operator up to the overall coefficient.
    pub fn eq_up_to_phase(&self, other: &Pauli) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Restricts to the listed qubits; qubit `qubits[k]` becomes qubit `k`.
    pub fn restrict(&self, qubits: &[usize]) -> Pauli {
        let mut x = 0;
        let mut z = 0;
        for (k, &q) in qubits.iter().enumerate() {
            x |= (self.x >> q & 1) << k;
            z |= (self.z >> q & 1) << k;
        }
        Pauli::from_bits(qubits.len(), x, z)
    }

    /// Places this operator into a larger register; qubit `k` goes to `qubits[k]`.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> Pauli {
        assert_eq!(qubits.len(), self.n as usize);
        let mut x = 0;
        let mut z = 0;
        for (k, &q) in qubits.iter().enumerate() {
            x |= (self.x >> k & 1) << q;
            z |= (self.z >> k & 1) << q;
        }
        let mut out = Pauli::from_bits(n, x, z);
        out.set_sign(self.sign());
        out
    }

    /// Conjugation by H on `q`.
    #[inline]
    pub fn apply_h(&mut self, q: usize) {
        let xb = self.x >> q & 1;
        let zb = self.z >> q & 1;
        self.phase = (self.phase + 2 * (xb & zb) as u8) & 3;
        self.x = (self.x & !(1 << q)) | zb << q;
        self.z = (self.z & !(1 << q)) | xb << q;
    }

    /// Conjugation by CNOT with control `c` and target `t`.
    #[inline]
    pub fn apply_cx(&mut self, c: usize, t: usize) {
        self.x ^= (self.x >> c & 1) << t;
        self.z ^= (self.z >> t & 1) << c;
    }

    #[inline]
    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let dx = (self.x >> a ^ self.x >> b) & 1;
        self.x ^= dx << a | dx << b;
        let dz = (self.z >> a ^ self.z >> b) & 1;
        self.z ^= dz << a | dz << b;
    }

    /// Clears whatever acts on qubit `q` (used when a qubit is reset).
    #[inline]
    pub fn clear(&mut self, q: usize) {
        let sign = self.sign();
        self.x &= !(1 << q);
        self.z &= !(1 << q);
        self.set_sign(sign);
    }

    /// Formats as one symbol per qubit, inserting `|` before each listed boundary.
    pub fn display_grouped(&self, breaks: &[usize]) -> String {
        let mut s = String::with_capacity(self.n as usize + breaks.len());
        for q in 0..self.n as usize {
            if breaks.contains(&q) {
                s.push('|');
            }
            s.push(self.get(q).symbol());
        }
        s
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a+c} Z^{b+d}
        let swaps = (self.z & rhs.x).count_ones() as u8;
        Pauli { n: self.n, x: self.x ^ rhs.x, z: self.z ^ rhs.z, phase: (self.phase + rhs.phase + 2 * (swaps & 1)) & 3 }
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.sign() {
            Sign::PlusOne => "+",
            Sign::PlusI => "+i",
            Sign::MinusOne => "-",
            Sign::MinusI => "-i",
        };
        write!(f, "{prefix}{}", self.display_grouped(&[]))
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_grouped(&[]))
    }
}

/// Parses dense strings such as `"--XX"`, `"IXYZ"` or `"-iXZ"`.
///
/// A leading `+`, `-`, `+i`, `-i` or `i` sets the coefficient; `-` and `I`
/// inside the body both mean identity, so a dense string whose first letter
/// is identity must carry an explicit sign (`"+-X"`).
impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = if let Some(rest) = s.strip_prefix("+i") {
            (Sign::PlusI, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (Sign::MinusI, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Sign::PlusI, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Sign::PlusOne, rest)
        } else if s.len() > 1 && s.starts_with('-') && !s[1..].contains(['-', 'I']) {
            (Sign::MinusOne, &s[1..])
        } else {
            (Sign::PlusOne, s)
        };
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::Parse(format!("pauli string longer than {MAX_QUBITS}: {s}")));
        }
        let mut p = Pauli::identity(n);
        for (q, c) in body.chars().enumerate() {
            let kind = match c {
                'I' | '-' | '_' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                other => return Err(Error::Parse(format!("bad pauli letter {other:?} in {s:?}"))),
            };
            p.set(q, kind);
        }
        p.set_sign(sign);
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        // XY = iZ, YZ = iX, ZX = iY
        let x = Pauli::single(1, 0, PauliKind::X);
        let y = Pauli::single(1, 0, PauliKind::Y);
        let z = Pauli::single(1, 0, PauliKind::Z);
        let xy = x * y;
        assert!(xy.eq_up_to_phase(&z));
        assert_eq!(xy.sign(), Sign::PlusI);
        assert_eq!((y * z).sign(), Sign::PlusI);
        assert!((z * x).eq_up_to_phase(&y));
        assert_eq!((z * x).sign(), Sign::PlusI);
        assert_eq!((y * x).sign(), Sign::MinusI);
    }

    #[test]
    fn commutation_examples() {
        let n = 7;
        let x1 = Pauli::x_on(n, &[0]);
        let z1 = Pauli::z_on(n, &[0]);
        assert!(!x1.commutes(&z1));
        let xl = Pauli::x_on(n, &[0, 3, 6]);
        let zl = Pauli::z_on(n, &[0, 3, 6]);
        assert!(!xl.commutes(&zl));
        let s1x = Pauli::x_on(n, &[0, 1, 2, 3]);
        assert!(s1x.commutes(&zl));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("--XX").to_string(), "--XX");
        assert_eq!(p("IXYZ").to_string(), "-XYZ");
        assert_eq!(p("-XZ").sign(), Sign::MinusOne);
        assert_eq!(p("+-X").to_string(), "-X");
        assert!("XQ".parse::<Pauli>().is_err());
    }

    #[test]
    fn hadamard_maps_y_to_minus_y() {
        let mut y = Pauli::single(1, 0, PauliKind::Y);
        y.apply_h(0);
        assert_eq!(y.get(0), PauliKind::Y);
        assert_eq!(y.sign(), Sign::MinusOne);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = Pauli> {
        (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, k)| {
            let mut p = Pauli::from_bits(n, x, z);
            p.set_sign(Sign::from_quarter_turns(k));
            p
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_pauli(9), b in arb_pauli(9), c in arb_pauli(9)) {
            prop_assert_eq!((a * b) * c, a * (b * c));
        }

        #[test]
        fn square_is_plus_minus_identity(a in arb_pauli(9)) {
            let sq = a * a;
            prop_assert!(sq.is_identity());
            prop_assert!(matches!(sq.sign(), Sign::PlusOne | Sign::MinusOne));
            prop_assert_eq!(a.unsigned() * a.unsigned(), Pauli::identity(9));
        }

        #[test]
        fn commutation_matches_product_order(a in arb_pauli(6), b in arb_pauli(6)) {
            let ab = a * b;
            let ba = b * a;
            prop_assert!(ab.eq_up_to_phase(&ba));
            prop_assert_eq!(a.commutes(&b), ab == ba);
        }

        #[test]
        fn weight_counts_support(x in any::<u64>(), z in any::<u64>()) {
            let p = Pauli::from_bits(12, x, z);
            let expected = (0..12).filter(|&q| p.get(q) != PauliKind::I).count() as u32;
            prop_assert_eq!(p.weight(), expected);
        }
    }
}
