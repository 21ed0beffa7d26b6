//! Circuit representation: located gates over a register with roles,
//! optional grid coordinates and labelled measurements.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primitive operations. X-basis preparation and readout are expanded into
/// explicit `H` gates around the Z-basis primitives when a circuit is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    Cnot,
    Swap,
    PrepZ,
    MeasZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, GateKind::H | GateKind::Cnot | GateKind::Swap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    targets: [usize; 2],
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidGate(format!("{kind:?} takes {} target(s), got {}", kind.arity(), targets.len())));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidGate(format!("{kind:?} targets must be distinct, got {targets:?}")));
        }
        let mut t = [usize::MAX; 2];
        t[..targets.len()].copy_from_slice(targets);
        Ok(Gate { kind, targets: t })
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    fn remap(&self, map: &[usize]) -> Gate {
        let mut g = *self;
        for t in &mut g.targets[..self.kind.arity()] {
            *t = map[*t];
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GateKind::H => "H",
            GateKind::Cnot => "CX",
            GateKind::Swap => "SWAP",
            GateKind::PrepZ => "PREPZ",
            GateKind::MeasZ => "MEASZ",
        };
        match self.targets() {
            [a] => write!(f, "{name}[{a}]"),
            [a, b] => write!(f, "{name}[{a},{b}]"),
            _ => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Data,
    Syndrome,
    Flag,
    Verification,
    AncillaData,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Data => "data",
            Role::Syndrome => "syndrome",
            Role::Flag => "flag",
            Role::Verification => "verification",
            Role::AncillaData => "ancilla-data",
        }
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "data" => Role::Data,
            "syndrome" | "synd" => Role::Syndrome,
            "flag" => Role::Flag,
            "verification" | "verify" => Role::Verification,
            "ancilla-data" | "ancilla_data" | "ancilladata" => Role::AncillaData,
            other => return Err(Error::Parse(format!("unknown qubit role {other:?}"))),
        })
    }
}

pub type Coord = (i32, i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitInfo {
    pub role: Role,
    pub coord: Option<Coord>,
}

/// Measurement label of the form `slot[index]`, e.g. `f0X[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub slot: String,
    pub index: usize,
}

impl Label {
    pub fn new(slot: impl Into<String>, index: usize) -> Self {
        Label { slot: slot.into(), index }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.slot, self.index)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("label {s:?} is not of the form slot[index]"));
        let open = s.find('[').ok_or_else(bad)?;
        let body = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let slot = &s[..open];
        if slot.is_empty() || !slot.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad());
        }
        let index = body.parse().map_err(|_| bad())?;
        Ok(Label::new(slot, index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Op {
    pub gate: Gate,
    pub label: Option<Label>,
}

/// Ordered list of operations; the position of an op is its location index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    qubits: Vec<QubitInfo>,
    ops: Vec<Op>,
}

impl Circuit {
    /// `n` qubits, all data, no coordinates.
    pub fn new(n: usize) -> Self {
        Circuit { qubits: vec![QubitInfo { role: Role::Data, coord: None }; n], ops: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[QubitInfo] {
        &self.qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn set_role(&mut self, q: usize, role: Role) -> &mut Self {
        self.qubits[q].role = role;
        self
    }

    pub fn set_coord(&mut self, q: usize, coord: Coord) -> &mut Self {
        self.qubits[q].coord = Some(coord);
        self
    }

    pub fn qubits_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.qubits.len()).filter(|&q| self.qubits[q].role == role).collect()
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        self.qubits_with_role(Role::Data)
    }

    pub fn push(&mut self, gate: Gate, label: Option<Label>) -> Result<()> {
        for &q in gate.targets() {
            if q >= self.qubits.len() {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.qubits.len() });
            }
        }
        if (gate.kind == GateKind::MeasZ) != label.is_some() {
            return Err(Error::InvalidGate(format!("{gate}: exactly the measurements carry labels")));
        }
        self.ops.push(Op { gate, label });
        Ok(())
    }

    fn unchecked(&mut self, kind: GateKind, targets: &[usize]) -> &mut Self {
        self.push(Gate::new(kind, targets).expect("valid gate"), None).expect("qubit in range");
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.unchecked(GateKind::H, &[q])
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.unchecked(GateKind::Cnot, &[c, t])
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.unchecked(GateKind::Swap, &[a, b])
    }

    pub fn prep_z(&mut self, q: usize) -> &mut Self {
        self.unchecked(GateKind::PrepZ, &[q])
    }

    /// `PrepZ` followed by `H`.
    pub fn prep_x(&mut self, q: usize) -> &mut Self {
        self.prep_z(q).h(q)
    }

    pub fn meas_z(&mut self, q: usize, label: Label) -> &mut Self {
        self.push(Gate::new(GateKind::MeasZ, &[q]).expect("valid gate"), Some(label)).expect("qubit in range");
        self
    }

    /// `H` followed by `MeasZ`.
    pub fn meas_x(&mut self, q: usize, label: Label) -> &mut Self {
        self.h(q).meas_z(q, label)
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits() != self.num_qubits() {
            return Err(Error::InvalidGate(format!("cannot append a {}-qubit circuit to a {}-qubit circuit", other.num_qubits(), self.num_qubits())));
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Relabels qubit `q` as `map[q]` inside a register of `n` qubits.
    pub fn embed(&self, n: usize, map: &[usize]) -> Result<Circuit> {
        if map.len() != self.num_qubits() {
            return Err(Error::InvalidGate(format!("qubit map has {} entries, need {}", map.len(), self.num_qubits())));
        }
        if let Some(&q) = map.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        let mut out = Circuit::new(n);
        for (q, info) in self.qubits.iter().enumerate() {
            out.qubits[map[q]] = *info;
        }
        out.ops = self.ops.iter().map(|op| Op { gate: op.gate.remap(map), label: op.label.clone() }).collect();
        Ok(out)
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.gate.kind == kind).count()
    }

    pub fn cnot_count(&self) -> usize {
        self.count(GateKind::Cnot)
    }

    pub fn swap_count(&self) -> usize {
        self.count(GateKind::Swap)
    }

    /// CNOTs plus three per SWAP.
    pub fn cnot_equivalents(&self) -> usize {
        self.cnot_count() + 3 * self.swap_count()
    }

    /// Distinct non-data qubits touched by any operation.
    pub fn ancilla_count(&self) -> usize {
        let mut used = vec![false; self.num_qubits()];
        for op in &self.ops {
            for &q in op.gate.targets() {
                used[q] = true;
            }
        }
        (0..self.num_qubits()).filter(|&q| used[q] && self.qubits[q].role != Role::Data).count()
    }

    /// Labels in measurement order.
    pub fn measurement_labels(&self) -> Vec<&Label> {
        self.ops.iter().filter_map(|op| op.label.as_ref()).collect()
    }

    /// Position of each labelled bit of `slot` within the measurement record,
    /// ordered by index. Missing indices are an error.
    pub fn slot_positions(&self, slot: &str) -> Result<Vec<usize>> {
        let mut found: Vec<(usize, usize)> = self.measurement_labels().iter().enumerate().filter(|(_, l)| l.slot == slot).map(|(m, l)| (l.index, m)).collect();
        found.sort_unstable();
        for (k, &(idx, _)) in found.iter().enumerate() {
            if idx != k {
                return Err(Error::CircuitCheck(format!("slot {slot} has a gap or duplicate at index {k}")));
            }
        }
        Ok(found.into_iter().map(|(_, m)| m).collect())
    }

    /// Ordinal of each op among the unitary gates (`None` for prep/measure).
    pub fn gate_indices(&self) -> Vec<Option<usize>> {
        let mut next = 0;
        self.ops
            .iter()
            .map(|op| {
                op.gate.kind.is_unitary().then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    /// The same circuit conjugated by H on every qubit: CNOTs reverse,
    /// Z-basis prep/readout become X-basis, and `H·H` pairs cancel.
    /// Slot names ending in `X` switch to `Z` and vice versa.
    pub fn h_dual(&self) -> Circuit {
        let mut raw: Vec<Op> = Vec::with_capacity(self.ops.len() * 2);
        let h = |q| Op { gate: Gate::new(GateKind::H, &[q]).unwrap(), label: None };
        for op in &self.ops {
            let t = op.gate.targets();
            match op.gate.kind {
                GateKind::Cnot => raw.push(Op { gate: Gate::new(GateKind::Cnot, &[t[1], t[0]]).unwrap(), label: None }),
                GateKind::PrepZ => {
                    raw.push(op.clone());
                    raw.push(h(t[0]));
                }
                GateKind::MeasZ => {
                    let label = op.label.as_ref().map(|l| Label::new(swap_basis_suffix(&l.slot), l.index));
                    raw.push(h(t[0]));
                    raw.push(Op { gate: op.gate, label });
                }
                GateKind::H | GateKind::Swap => raw.push(op.clone()),
            }
        }
        let mut out = Circuit { qubits: self.qubits.clone(), ops: Vec::with_capacity(raw.len()) };
        // last[q] = index in out.ops of the latest op touching q
        let mut last: Vec<Option<usize>> = vec![None; self.num_qubits()];
        let mut dead = vec![false; raw.len()];
        for op in raw {
            if op.gate.kind == GateKind::H {
                let q = op.gate.targets()[0];
                if let Some(i) = last[q] {
                    if !dead[i] && out.ops[i].gate.kind == GateKind::H {
                        dead[i] = true;
                        last[q] = None;
                        continue;
                    }
                }
            }
            let i = out.ops.len();
            for &q in op.gate.targets() {
                last[q] = Some(i);
            }
            out.ops.push(op);
        }
        out.ops = out.ops.into_iter().zip(dead).filter(|(_, d)| !d).map(|(op, _)| op).collect();
        out
    }
}

fn swap_basis_suffix(slot: &str) -> String {
    if let Some(stem) = slot.strip_suffix('X') {
        format!("{stem}Z")
    } else if let Some(stem) = slot.strip_suffix('Z') {
        format!("{stem}X")
    } else {
        slot.to_string()
    }
}
