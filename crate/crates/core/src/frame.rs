//! Deterministic Pauli-frame propagation of injected faults.
//!
//! Every intrinsically random outcome is pinned to its fault-free value, so
//! a fault shows up purely as XOR offsets on the measurement record.

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::noise::{Fault, FaultKind, SwapNoise};
use crate::pauli::Pauli;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameResult {
    /// Frame on the whole register at circuit end.
    pub frame: Pauli,
    /// Per measurement (in order): did the reported bit flip?
    pub flips: Vec<bool>,
}

impl FrameResult {
    /// Flipped bits of `positions` packed little-endian.
    pub fn bits(&self, positions: &[usize]) -> u64 {
        positions.iter().enumerate().fold(0, |m, (k, &i)| m | (self.flips[i] as u64) << k)
    }
}

/// Conjugates the frame by one op and records the readout flip if it is a
/// measurement. Faults scheduled inside a decomposed SWAP are applied between
/// its CNOTs.
#[inline]
pub(crate) fn step(frame: &mut Pauli, circuit: &Circuit, loc: usize, swap: SwapNoise, inner: &mut dyn FnMut(u8, &mut Pauli)) -> Option<bool> {
    let op = &circuit.ops()[loc];
    let t = op.gate.targets();
    match op.gate.kind {
        GateKind::H => frame.apply_h(t[0]),
        GateKind::Cnot => frame.apply_cx(t[0], t[1]),
        GateKind::Swap => match swap {
            SwapNoise::Atomic => frame.apply_swap(t[0], t[1]),
            SwapNoise::Decomposed => {
                frame.apply_cx(t[0], t[1]);
                inner(0, frame);
                frame.apply_cx(t[1], t[0]);
                inner(1, frame);
                frame.apply_cx(t[0], t[1]);
            }
        },
        GateKind::PrepZ => frame.clear(t[0]),
        GateKind::MeasZ => {
            let flip = frame.x_bits() >> t[0] & 1 == 1;
            // a Z on a freshly measured Z eigenstate is a phase
            let x = frame.get(t[0]).bits().0;
            frame.set(t[0], crate::pauli::PauliKind::from_bits(x, false));
            return Some(flip);
        }
    }
    None
}

/// Runs the circuit with the given faults injected at their sites.
pub fn propagate(circuit: &Circuit, faults: &[Fault], swap: SwapNoise) -> Result<FrameResult> {
    let n = circuit.num_qubits();
    for f in faults {
        if f.site.location >= circuit.len() {
            return Err(Error::LocationOutOfRange { location: f.site.location, len: circuit.len() });
        }
    }
    let mut frame = Pauli::identity(n);
    let mut flips = Vec::new();
    for loc in 0..circuit.len() {
        let here = |sub: u8| faults.iter().filter(move |f| f.site.location == loc && f.site.sub == sub);
        let mut inner = |sub: u8, fr: &mut Pauli| {
            for f in here(sub) {
                if let Some(p) = f.pauli(n) {
                    *fr = *fr * p;
                }
            }
        };
        let is_meas = circuit.ops()[loc].gate.kind == GateKind::MeasZ;
        let decomposed_swap = circuit.ops()[loc].gate.kind == GateKind::Swap && swap == SwapNoise::Decomposed;
        if is_meas {
            let mut flip = step(&mut frame, circuit, loc, swap, &mut inner).unwrap();
            flip ^= here(0).filter(|f| f.kind == FaultKind::Flip).count() % 2 == 1;
            flips.push(flip);
        } else {
            step(&mut frame, circuit, loc, swap, &mut inner);
            let last_sub = if decomposed_swap { 2 } else { 0 };
            inner(last_sub, &mut frame);
        }
    }
    Ok(frame_result(frame, flips))
}

fn frame_result(frame: Pauli, flips: Vec<bool>) -> FrameResult {
    FrameResult { frame, flips }
}

/// Injects an arbitrary Pauli immediately after op `location`.
pub fn propagate_pauli(circuit: &Circuit, location: usize, injected: &Pauli) -> Result<FrameResult> {
    let n = circuit.num_qubits();
    if location >= circuit.len() {
        return Err(Error::LocationOutOfRange { location, len: circuit.len() });
    }
    if injected.num_qubits() != n {
        return Err(Error::InvalidGate(format!("injected Pauli has {} qubits, circuit has {n}", injected.num_qubits())));
    }
    let mut frame = Pauli::identity(n);
    let mut flips = Vec::new();
    for loc in 0..circuit.len() {
        if let Some(flip) = step(&mut frame, circuit, loc, SwapNoise::Atomic, &mut |_, _| {}) {
            flips.push(flip);
        }
        if loc == location {
            frame = frame * *injected;
        }
    }
    Ok(frame_result(frame, flips))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Label;
    use crate::noise::{FaultSite, SiteKind};
    use crate::pauli::PauliKind;

    #[test]
    fn no_fault_is_trivial() {
        let mut c = Circuit::new(3);
        c.prep_x(0).cx(0, 1).cx(1, 2).meas_z(2, Label::new("m", 0));
        let r = propagate(&c, &[], SwapNoise::Decomposed).unwrap();
        assert!(r.frame.is_identity());
        assert_eq!(r.flips, vec![false]);
    }

    #[test]
    fn x_fault_spreads_through_cnot_chain() {
        let mut c = Circuit::new(3);
        c.cx(0, 1).cx(1, 2).meas_z(2, Label::new("m", 0));
        let r = propagate_pauli(&c, 0, &Pauli::x_on(3, &[1])).unwrap();
        assert_eq!(r.frame.to_string(), "-XX");
        assert_eq!(r.flips, vec![true]);
        assert!(propagate_pauli(&c, 9, &Pauli::identity(3)).is_err());
    }

    #[test]
    fn fault_inside_decomposed_swap() {
        let mut c = Circuit::new(2);
        c.swap(0, 1);
        // X on the control after the first CNOT of CX(0,1) CX(1,0) CX(0,1)
        let f = Fault { site: FaultSite { location: 0, sub: 0, kind: SiteKind::TwoQubit, qubits: [0, 1] }, kind: FaultKind::Two(PauliKind::X, PauliKind::I) };
        let r = propagate(&c, &[f], SwapNoise::Decomposed).unwrap();
        assert_eq!(r.frame.to_string(), "XX");
        let f2 = Fault { site: FaultSite { sub: 2, ..f.site }, ..f };
        assert_eq!(propagate(&c, &[f2], SwapNoise::Decomposed).unwrap().frame.to_string(), "X-");
    }

    #[test]
    fn measurement_flip_only_touches_record() {
        let mut c = Circuit::new(1);
        c.meas_z(0, Label::new("m", 0));
        let f = Fault { site: FaultSite { location: 0, sub: 0, kind: SiteKind::Meas, qubits: [0, 0] }, kind: FaultKind::Flip };
        let r = propagate(&c, &[f], SwapNoise::Decomposed).unwrap();
        assert_eq!(r.flips, vec![true]);
        assert!(r.frame.is_identity());
    }
}
