//! Circuit-level depolarizing noise with a single rate `p`.
//!
//! Sites: after every H (one-qubit channel), after every CNOT (two-qubit
//! channel), after every reset (X or Y), and before every readout (flip).
//! A SWAP is either one two-qubit site or three CNOT sites.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SwapNoise {
    /// Three CNOT sites per SWAP.
    #[default]
    Decomposed,
    /// One two-qubit site per SWAP.
    Atomic,
}

impl std::str::FromStr for SwapNoise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decomposed" => Ok(SwapNoise::Decomposed),
            "atomic" => Ok(SwapNoise::Atomic),
            other => Err(Error::Config(format!("swap noise must be decomposed or atomic, got {other:?}"))),
        }
    }
}

impl fmt::Display for SwapNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwapNoise::Decomposed => "decomposed",
            SwapNoise::Atomic => "atomic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p: f64,
    pub swap: SwapNoise,
}

impl NoiseParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Config(format!("physical error rate must lie in [0, 1), got {p}")));
        }
        Ok(NoiseParams { p, swap: SwapNoise::Decomposed })
    }

    pub fn noiseless() -> Self {
        NoiseParams { p: 0.0, swap: SwapNoise::Decomposed }
    }

    pub fn with_swap(mut self, swap: SwapNoise) -> Self {
        self.swap = swap;
        self
    }

    /// Total probability that a site of this kind misbehaves.
    pub fn site_probability(&self, kind: SiteKind) -> f64 {
        match kind {
            SiteKind::OneQubit | SiteKind::TwoQubit => self.p,
            SiteKind::Prep | SiteKind::Meas => 2.0 * self.p / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiteKind {
    OneQubit,
    TwoQubit,
    Prep,
    Meas,
}

/// A place where a single fault can occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultSite {
    /// Index of the op in its circuit.
    pub location: usize,
    /// CNOT position inside a decomposed SWAP, otherwise 0.
    pub sub: u8,
    pub kind: SiteKind,
    /// Acted-on qubits; the second entry is meaningful for two-qubit sites.
    pub qubits: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaultKind {
    One(PauliKind),
    Two(PauliKind, PauliKind),
    Flip,
}

const LETTERS: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];

impl FaultKind {
    /// The 15 non-identity two-qubit Paulis, first qubit major.
    pub fn two_qubit_paulis() -> impl Iterator<Item = FaultKind> {
        (1..16).map(|k| FaultKind::Two(LETTERS[k / 4], LETTERS[k % 4]))
    }

    pub fn candidates(kind: SiteKind) -> Vec<FaultKind> {
        match kind {
            SiteKind::OneQubit => PauliKind::NON_IDENTITY.iter().map(|&k| FaultKind::One(k)).collect(),
            SiteKind::TwoQubit => Self::two_qubit_paulis().collect(),
            SiteKind::Prep => vec![FaultKind::One(PauliKind::X), FaultKind::One(PauliKind::Y)],
            SiteKind::Meas => vec![FaultKind::Flip],
        }
    }

    /// Label in the style `-X`, `XZ`, `Y-`, `flip`.
    pub fn label(&self) -> String {
        match self {
            FaultKind::One(k) => format!("{}", k.symbol()),
            FaultKind::Two(a, b) => format!("{}{}", a.symbol(), b.symbol()),
            FaultKind::Flip => "flip".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fault {
    pub site: FaultSite,
    pub kind: FaultKind,
}

impl Fault {
    /// The Pauli this fault applies, on an `n`-qubit register (`None` for flips).
    pub fn pauli(&self, n: usize) -> Option<Pauli> {
        let [a, b] = self.site.qubits;
        match self.kind {
            FaultKind::One(k) => Some(Pauli::single(n, a, k)),
            FaultKind::Two(ka, kb) => {
                let mut p = Pauli::identity(n);
                p.set(a, ka);
                p.set(b, kb);
                Some(p)
            }
            FaultKind::Flip => None,
        }
    }
}

/// Sites of one op, in execution order.
pub fn sites_of_op(circuit: &Circuit, location: usize, swap: SwapNoise) -> Vec<FaultSite> {
    let gate = circuit.ops()[location].gate;
    let t = gate.targets();
    let site = |sub, kind, qubits| FaultSite { location, sub, kind, qubits };
    match gate.kind {
        GateKind::H => vec![site(0, SiteKind::OneQubit, [t[0], usize::MAX])],
        GateKind::PrepZ => vec![site(0, SiteKind::Prep, [t[0], usize::MAX])],
        GateKind::MeasZ => vec![site(0, SiteKind::Meas, [t[0], usize::MAX])],
        GateKind::Cnot => vec![site(0, SiteKind::TwoQubit, [t[0], t[1]])],
        GateKind::Swap => match swap {
            SwapNoise::Atomic => vec![site(0, SiteKind::TwoQubit, [t[0], t[1]])],
            SwapNoise::Decomposed => {
                vec![site(0, SiteKind::TwoQubit, [t[0], t[1]]), site(1, SiteKind::TwoQubit, [t[1], t[0]]), site(2, SiteKind::TwoQubit, [t[0], t[1]])]
            }
        },
    }
}

pub fn fault_sites(circuit: &Circuit, swap: SwapNoise) -> Vec<FaultSite> {
    (0..circuit.len()).flat_map(|loc| sites_of_op(circuit, loc, swap)).collect()
}

/// Every site paired with its candidate faults.
pub fn enumerate_fault_sites(circuit: &Circuit, swap: SwapNoise) -> Vec<(FaultSite, Vec<FaultKind>)> {
    fault_sites(circuit, swap).into_iter().map(|s| (s, FaultKind::candidates(s.kind))).collect()
}

/// Draws the fault (if any) at one site.
#[inline]
pub fn sample_site<R: Rng + ?Sized>(kind: SiteKind, params: &NoiseParams, rng: &mut R) -> Option<FaultKind> {
    if params.p == 0.0 {
        return None;
    }
    let u: f64 = rng.gen();
    let total = params.site_probability(kind);
    if u >= total {
        return None;
    }
    // reuse the uniform draw to pick the branch
    let frac = u / total;
    Some(match kind {
        SiteKind::OneQubit => FaultKind::One(PauliKind::NON_IDENTITY[((frac * 3.0) as usize).min(2)]),
        SiteKind::TwoQubit => {
            let k = 1 + ((frac * 15.0) as usize).min(14);
            FaultKind::Two(LETTERS[k / 4], LETTERS[k % 4])
        }
        SiteKind::Prep => FaultKind::One(if frac < 0.5 { PauliKind::X } else { PauliKind::Y }),
        SiteKind::Meas => FaultKind::Flip,
    })
}

/// Independent draws over every site of the circuit.
pub fn sample_noise<R: Rng + ?Sized>(circuit: &Circuit, params: &NoiseParams, rng: &mut R) -> Vec<Fault> {
    fault_sites(circuit, params.swap).into_iter().filter_map(|site| sample_site(site.kind, params, rng).map(|kind| Fault { site, kind })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn candidate_counts() {
        assert_eq!(FaultKind::candidates(SiteKind::OneQubit).len(), 3);
        assert_eq!(FaultKind::candidates(SiteKind::TwoQubit).len(), 15);
        assert_eq!(FaultKind::candidates(SiteKind::Prep).len(), 2);
        assert_eq!(FaultKind::candidates(SiteKind::Meas).len(), 1);
        let set: std::collections::HashSet<_> = FaultKind::two_qubit_paulis().collect();
        assert_eq!(set.len(), 15);
    }

    #[test]
    fn zero_rate_never_faults() {
        let mut c = Circuit::new(2);
        c.prep_z(0).h(0).cx(0, 1).meas_z(1, crate::circuit::Label::new("m", 0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(sample_noise(&c, &NoiseParams::noiseless(), &mut rng).is_empty());
        }
    }

    #[test]
    fn swap_modes() {
        let mut c = Circuit::new(2);
        c.swap(0, 1);
        assert_eq!(fault_sites(&c, SwapNoise::Decomposed).len(), 3);
        assert_eq!(fault_sites(&c, SwapNoise::Atomic).len(), 1);
        assert!(NoiseParams::new(1.0).is_err());
    }
}
