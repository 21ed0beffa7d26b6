//! The [[7,1,3]] CSS code built from the Hamming parity-check matrix.
//!
//! Bit conventions: qubit `i` (0-based) is bit `i` of a mask; a 3-bit
//! syndrome stores the outcome of the first generator in bit 0. Strings are
//! printed first-element-first, so mask `0b011` on three bits reads `"110"`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Formats the low `n` bits of `v`, bit 0 first.
pub fn bits_to_string(v: u64, n: usize) -> String {
    (0..n).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`bits_to_string`]; spaces are ignored.
pub fn bits_from_str(s: &str) -> Result<u64> {
    let mut v = 0;
    let mut i = 0;
    for c in s.chars() {
        match c {
            '0' => i += 1,
            '1' => {
                v |= 1 << i;
                i += 1
            }
            ' ' | '_' => {}
            other => return Err(Error::Parse(format!("bad bit {other:?} in {s:?}"))),
        }
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Syndrome {
    /// Outcomes of the X-type generators (flag Z errors).
    pub x: u8,
    /// Outcomes of the Z-type generators (flag X errors).
    pub z: u8,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} z={}", bits_to_string(self.x as u64, 3), bits_to_string(self.z as u64, 3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

/// A CSS code with identical X and Z parity checks, three generators of each type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDefinition {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Row `r` of the parity-check matrix as a qubit mask.
    pub checks: [u64; 3],
    /// Support of the minimum-weight logical X and Z.
    pub logical_support: u64,
    /// `decode[s]`: qubit whose single error produces syndrome `s`.
    decode: [Option<usize>; 8],
}

impl CodeDefinition {
    pub fn steane() -> Self {
        let rows = [[1, 1, 1, 1, 0, 0, 0], [0, 1, 1, 0, 1, 1, 0], [0, 0, 1, 1, 0, 1, 1]];
        let checks = rows.map(|r| r.iter().enumerate().fold(0u64, |m, (q, &b)| m | (b as u64) << q));
        let mut decode = [None; 8];
        for q in 0..7 {
            let col = (0..3).fold(0usize, |s, r| s | ((checks[r] >> q & 1) as usize) << r);
            decode[col] = Some(q);
        }
        CodeDefinition { name: "steane".into(), n: 7, k: 1, d: 3, checks, logical_support: 0b100_1001, decode }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "steane" | "713" | "[[7,1,3]]" => Ok(Self::steane()),
            other => Err(Error::Config(format!("unknown code {other:?}; available: steane"))),
        }
    }

    pub fn stabilizer_x(&self, r: usize) -> Pauli {
        Pauli::from_bits(self.n, self.checks[r], 0)
    }

    pub fn stabilizer_z(&self, r: usize) -> Pauli {
        Pauli::from_bits(self.n, 0, self.checks[r])
    }

    /// `S1X, S2X, S3X, S1Z, S2Z, S3Z`.
    pub fn stabilizers(&self) -> Vec<Pauli> {
        (0..3).map(|r| self.stabilizer_x(r)).chain((0..3).map(|r| self.stabilizer_z(r))).collect()
    }

    pub fn logical_x(&self) -> Pauli {
        Pauli::from_bits(self.n, self.logical_support, 0)
    }

    pub fn logical_z(&self) -> Pauli {
        Pauli::from_bits(self.n, 0, self.logical_support)
    }

    /// `H · b` for a bit string `b` given as a mask.
    pub fn syndrome_from_bits(&self, b: u64) -> u8 {
        (0..3).fold(0u8, |s, r| s | (((self.checks[r] & b).count_ones() & 1) as u8) << r)
    }

    /// Syndrome of a measured transversal bit string: both bases use the same
    /// matrix for this code.
    pub fn syndrome_from_bitstring(&self, b: u64, _basis: Basis) -> u8 {
        self.syndrome_from_bits(b)
    }

    pub fn syndrome_of(&self, e: &Pauli) -> Syndrome {
        Syndrome { x: self.syndrome_from_bits(e.z_bits()), z: self.syndrome_from_bits(e.x_bits()) }
    }

    /// Single-qubit correction for a 3-bit syndrome.
    pub fn lookup(&self, s: u8) -> Option<usize> {
        self.decode[s as usize & 7]
    }

    /// Mask of the correction for `s` (empty for the trivial syndrome).
    pub fn lookup_mask(&self, s: u8) -> u64 {
        self.lookup(s).map_or(0, |q| 1 << q)
    }

    /// Standard recovery: X correction from the Z-type outcomes, Z correction
    /// from the X-type outcomes.
    pub fn recovery(&self, s: Syndrome) -> Pauli {
        Pauli::from_bits(self.n, self.lookup_mask(s.z), self.lookup_mask(s.x))
    }

    fn group_mask(&self, m: usize) -> u64 {
        (0..3).filter(|r| m >> r & 1 == 1).fold(0, |acc, r| acc ^ self.checks[r])
    }

    /// Minimum weight of the coset `v + rowspace(H)`.
    pub fn coset_min_weight(&self, v: u64) -> u32 {
        (0..8).map(|m| (v ^ self.group_mask(m)).count_ones()).min().unwrap()
    }

    /// Minimum-weight element of `E·S` over the 64-element stabilizer group,
    /// ties broken towards the lexicographically smallest `(x, z)` strings
    /// read qubit 1 first. Signs are dropped.
    pub fn reduce_min_weight(&self, e: &Pauli) -> Pauli {
        let key = |x: u64, z: u64| ((x | z).count_ones(), rev(x, self.n), rev(z, self.n));
        let mut best = (e.x_bits(), e.z_bits());
        let mut best_key = key(best.0, best.1);
        for mx in 0..8 {
            for mz in 0..8 {
                let x = e.x_bits() ^ self.group_mask(mx);
                let z = e.z_bits() ^ self.group_mask(mz);
                let k = key(x, z);
                if k < best_key {
                    best_key = k;
                    best = (x, z);
                }
            }
        }
        Pauli::from_bits(self.n, best.0, best.1)
    }

    /// X-part reduces to weight ≥ 2 modulo the X stabilizers: uncorrectable
    /// on the logical zero state.
    pub fn is_harmful_for_zero(&self, e: &Pauli) -> bool {
        self.coset_min_weight(e.x_bits()) >= 2
    }

    /// Dual predicate for the logical plus state.
    pub fn is_harmful_for_plus(&self, e: &Pauli) -> bool {
        self.coset_min_weight(e.z_bits()) >= 2
    }

    /// Residual after one perfect round of lookup-table correction, in reduced form.
    pub fn ideal_decode(&self, e: &Pauli) -> Pauli {
        let r = self.recovery(self.syndrome_of(e));
        self.reduce_min_weight(&(r * e.unsigned()))
    }

    pub fn is_estimated_logical_failure(&self, r_dot_e: &Pauli) -> bool {
        !r_dot_e.commutes(&self.logical_z())
    }

    pub fn is_true_logical_failure(&self, residual: &Pauli) -> bool {
        !self.ideal_decode(residual).commutes(&self.logical_z())
    }

    /// X-only fast path of [`Self::is_true_logical_failure`].
    pub fn true_failure_x(&self, x: u64) -> bool {
        let r = x ^ self.lookup_mask(self.syndrome_from_bits(x));
        (r & self.logical_support).count_ones() & 1 == 1
    }

    /// X-only fast path of [`Self::is_estimated_logical_failure`].
    pub fn estimated_failure_x(&self, x: u64) -> bool {
        (x & self.logical_support).count_ones() & 1 == 1
    }
}

fn rev(v: u64, n: usize) -> u64 {
    v.reverse_bits() >> (64 - n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliKind;

    #[test]
    fn bit_strings() {
        assert_eq!(bits_to_string(0b011, 3), "110");
        assert_eq!(bits_from_str("10 00 01").unwrap(), 0b100001);
        assert_eq!(bits_from_str("0100000").unwrap(), 0b10);
        assert!(bits_from_str("012").is_err());
    }

    #[test]
    fn stabilizers_commute_and_logicals_anticommute() {
        let c = CodeDefinition::steane();
        let s = c.stabilizers();
        for a in &s {
            for b in &s {
                assert!(a.commutes(b));
            }
            assert!(a.commutes(&c.logical_x()));
            assert!(a.commutes(&c.logical_z()));
        }
        assert!(!c.logical_x().commutes(&c.logical_z()));
    }

    #[test]
    fn single_errors_decode_to_identity() {
        let c = CodeDefinition::steane();
        for q in 0..7 {
            for kind in PauliKind::NON_IDENTITY {
                let e = Pauli::single(7, q, kind);
                assert!(c.ideal_decode(&e).is_identity(), "{e}");
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let c = CodeDefinition::steane();
        assert!(c.reduce_min_weight(&c.stabilizer_z(0)).is_identity());
        let all = Pauli::x_on(7, &[0, 1, 2, 3, 4, 5, 6]);
        let r = c.reduce_min_weight(&all);
        assert_eq!(r.weight(), 3);
        assert!(!r.commutes(&c.logical_z()));
        assert!((c.stabilizer_x(1) * all).eq_up_to_phase(&c.logical_x()));
    }
}
