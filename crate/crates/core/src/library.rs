//! Concrete circuits: flag-assisted weight-4 checks, the grid platforms that
//! host them, verified logical-zero preparations and the transversal
//! Steane-type extraction register.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Coord, GateKind, Label, Role};
use crate::circuit_file;
use crate::code::{Basis, CodeDefinition};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::sim::run_ideal;
use crate::verify::{verify_fault_tolerance, Target};

/// Shipped verified |0⟩_L preparation on a 3×3 patch.
pub const GOTORL_SOURCE: &str = include_str!("../../../circuits/gotorl.txt");

/// Flag-assisted wirings of a weight-4 X check. `One` and `Two` use one flag,
/// `Chain` and `Star` two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlagVariant {
    One,
    Two,
    Chain,
    Star,
}

impl FlagVariant {
    pub fn flag_count(self) -> usize {
        match self {
            FlagVariant::One | FlagVariant::Two => 1,
            FlagVariant::Chain | FlagVariant::Star => 2,
        }
    }
}

impl FromStr for FlagVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "one" => Ok(FlagVariant::One),
            "2" | "two" => Ok(FlagVariant::Two),
            "3" | "chain" => Ok(FlagVariant::Chain),
            "star" => Ok(FlagVariant::Star),
            other => Err(Error::Config(format!("unknown flag circuit {other:?}"))),
        }
    }
}

impl fmt::Display for FlagVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagVariant::One => "one",
            FlagVariant::Two => "two",
            FlagVariant::Chain => "chain",
            FlagVariant::Star => "star",
        })
    }
}

/// Qubit assignment of one check. `data` is in wiring order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckWiring {
    pub variant: FlagVariant,
    pub syndrome: usize,
    pub flags: Vec<usize>,
    pub data: [usize; 4],
}

/// Measures `stabilizer` (weight 4, pure X or pure Z) through `wiring`.
/// Outcomes are labelled `s{round}B[check]` and `f{round}B[k·check + j]`
/// where `B` is the stabilizer type and `k` the number of flags.
pub fn build_flag_circuit(stabilizer: &Pauli, wiring: &CheckWiring, round: usize, check: usize) -> Result<Circuit> {
    let n = stabilizer.num_qubits();
    let basis = match (stabilizer.x_bits(), stabilizer.z_bits()) {
        (x, 0) if x != 0 => Basis::X,
        (0, z) if z != 0 => Basis::Z,
        _ => return Err(Error::UnsupportedStabilizer(format!("{stabilizer} is not a pure X or pure Z operator"))),
    };
    if stabilizer.weight() != 4 {
        return Err(Error::UnsupportedStabilizer(format!("{stabilizer} has weight {}, expected 4", stabilizer.weight())));
    }
    let support = wiring.data.iter().fold(0u64, |m, &q| m | 1u64.checked_shl(q as u32).unwrap_or(0));
    if support != stabilizer.support() || support.count_ones() != 4 {
        return Err(Error::UnsupportedStabilizer(format!("wiring data {:?} do not match the support of {stabilizer}", wiring.data)));
    }
    let k = wiring.variant.flag_count();
    if wiring.flags.len() != k {
        return Err(Error::CircuitCheck(format!("{} circuit needs {k} flag(s), got {}", wiring.variant, wiring.flags.len())));
    }
    let mut used: Vec<usize> = wiring.data.to_vec();
    used.push(wiring.syndrome);
    used.extend(&wiring.flags);
    if let Some(&q) = used.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    let mut sorted = used.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != used.len() {
        return Err(Error::CircuitCheck(format!("check qubits overlap: {used:?}")));
    }

    // built as an X check; a Z check is its H-conjugate, which also renames the slots
    let (sx, fx) = (format!("s{round}X"), format!("f{round}X"));
    let s = wiring.syndrome;
    let f = &wiring.flags;
    let d = wiring.data;
    let mut c = Circuit::new(n);
    c.prep_z(s).h(s);
    for &q in f {
        c.prep_z(q);
    }
    let cnots: Vec<(usize, usize)> = match wiring.variant {
        FlagVariant::One => vec![(s, d[0]), (s, f[0]), (s, d[1]), (s, d[2]), (s, f[0]), (s, d[3])],
        FlagVariant::Two => vec![(s, f[0]), (f[0], d[2]), (s, d[0]), (f[0], d[3]), (s, d[1]), (s, f[0])],
        FlagVariant::Chain => {
            vec![(s, f[0]), (f[0], f[1]), (s, d[0]), (s, d[1]), (f[0], d[2]), (f[1], d[3]), (f[0], f[1]), (s, f[0])]
        }
        FlagVariant::Star => {
            vec![(s, f[0]), (s, f[1]), (s, d[1]), (s, d[2]), (f[0], d[0]), (f[1], d[3]), (s, f[1]), (s, f[0])]
        }
    };
    for (a, b) in cnots {
        c.cx(a, b);
    }
    c.h(s).meas_z(s, Label::new(sx, check));
    for (j, &q) in f.iter().enumerate() {
        c.meas_z(q, Label::new(fx.clone(), k * check + j));
    }
    c.set_role(s, Role::Syndrome);
    for &q in f {
        c.set_role(q, Role::Flag);
    }
    Ok(match basis {
        Basis::X => c,
        Basis::Z => c.h_dual(),
    })
}

/// A single X check of `S = X0 X1 X2 X3` on its own small patch:
/// data 0–3, syndrome 4, flags 5 (and 6).
pub fn standalone_check(variant: FlagVariant) -> Circuit {
    let k = variant.flag_count();
    let n = 5 + k;
    let wiring = CheckWiring { variant, syndrome: 4, flags: (5..5 + k).collect(), data: [0, 1, 2, 3] };
    let mut c = build_flag_circuit(&Pauli::x_on(n, &[0, 1, 2, 3]), &wiring, 0, 0).expect("valid wiring");
    // ids: d0 d1 d2 d3 s f1 f2
    let coords: &[Coord] = match variant {
        FlagVariant::One | FlagVariant::Two => &[(0, 1), (2, 1), (0, 2), (2, 2), (1, 1), (1, 2)],
        FlagVariant::Chain => &[(0, 1), (2, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3)],
        FlagVariant::Star => &[(0, 0), (1, 0), (1, 2), (2, 0), (1, 1), (0, 1), (2, 1)],
    };
    for (q, &xy) in coords.iter().enumerate() {
        c.set_coord(q, xy);
    }
    c
}

/// Two-qubit gates between qubits that are not grid neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub location: usize,
    pub gate: String,
    pub coords: [Coord; 2],
}

/// Lists nearest-neighbour violations; every qubit touched by a two-qubit
/// gate needs a coordinate.
pub fn validate_connectivity(circuit: &Circuit) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for (loc, op) in circuit.ops().iter().enumerate() {
        if op.gate.kind.arity() != 2 {
            continue;
        }
        let t = op.gate.targets();
        let coord = |q: usize| circuit.qubits()[q].coord.ok_or_else(|| Error::CircuitCheck(format!("qubit {q} has no coordinate")));
        let (a, b) = (coord(t[0])?, coord(t[1])?);
        if (a.0 - b.0).abs() + (a.1 - b.1).abs() != 1 {
            out.push(Violation { location: loc, gate: op.gate.to_string(), coords: [a, b] });
        }
    }
    Ok(out)
}

/// A grid hosting the code with one flag-assisted check per stabilizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Platform {
    pub name: String,
    pub coords: Vec<Coord>,
    /// Site of code qubit `i` while the checks run.
    pub data: [usize; 7],
    /// Wiring of stabilizer `r`; shared by its X and Z versions.
    pub checks: [CheckWiring; 3],
}

impl Platform {
    /// Eleven sites: the code qubits around four shared ancillas.
    pub fn citadel() -> Self {
        Platform {
            name: "citadel".into(),
            coords: vec![(0, 2), (0, 1), (1, 0), (2, 0), (1, 3), (2, 3), (3, 2), (1, 2), (1, 1), (2, 1), (2, 2)],
            data: [0, 1, 2, 3, 4, 5, 6],
            checks: [
                CheckWiring { variant: FlagVariant::Star, syndrome: 8, flags: vec![7, 9], data: [0, 1, 2, 3] },
                CheckWiring { variant: FlagVariant::Chain, syndrome: 8, flags: vec![7, 10], data: [1, 2, 4, 5] },
                CheckWiring { variant: FlagVariant::Chain, syndrome: 10, flags: vec![9, 8], data: [6, 5, 3, 2] },
            ],
        }
    }

    /// Twelve sites: the 3×3 verified preparation plus three border sites,
    /// with the code qubits moved off the centre by SWAPs before the checks.
    pub fn gotorl_fb() -> Self {
        Platform {
            name: "gotorl-fb".into(),
            coords: vec![(2, 0), (1, 0), (2, 1), (0, 1), (0, 2), (2, 2), (1, 2), (1, 1), (0, 0), (0, 3), (1, 3), (3, 0)],
            data: [11, 3, 2, 8, 9, 5, 10],
            checks: [
                CheckWiring { variant: FlagVariant::Chain, syndrome: 7, flags: vec![1, 0], data: [3, 2, 8, 11] },
                CheckWiring { variant: FlagVariant::Chain, syndrome: 4, flags: vec![6, 7], data: [9, 3, 5, 2] },
                CheckWiring { variant: FlagVariant::Chain, syndrome: 6, flags: vec![7, 1], data: [10, 5, 2, 8] },
            ],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "citadel" => Ok(Self::citadel()),
            "gotorl-fb" => Ok(Self::gotorl_fb()),
            other => Err(Error::Config(format!("unknown platform {other:?}"))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.coords.len()
    }

    /// Sets coordinates and marks the code sites as data, everything else as
    /// an ancilla unless a role was already assigned.
    pub fn decorate(&self, c: &mut Circuit) {
        for (q, &xy) in self.coords.iter().enumerate() {
            c.set_coord(q, xy);
            if self.data.contains(&q) {
                c.set_role(q, Role::Data);
            } else if c.qubits()[q].role == Role::Data {
                c.set_role(q, Role::Syndrome);
            }
        }
    }

    /// Stabilizer `r` of type `basis` measured in round `round`.
    pub fn check(&self, code: &CodeDefinition, r: usize, basis: Basis, round: usize) -> Result<Circuit> {
        let n = self.num_qubits();
        let s = match basis {
            Basis::X => code.stabilizer_x(r),
            Basis::Z => code.stabilizer_z(r),
        };
        let mut c = build_flag_circuit(&s.embed(n, &self.data), &self.checks[r], round, r)?;
        self.decorate(&mut c);
        Ok(c)
    }

    /// The three checks of one type, in stabilizer order.
    pub fn round(&self, code: &CodeDefinition, basis: Basis, round: usize) -> Result<Vec<Circuit>> {
        (0..3).map(|r| self.check(code, r, basis, round)).collect()
    }

    /// Concatenation of `circuits`, decorated.
    pub fn join(&self, circuits: &[Circuit]) -> Result<Circuit> {
        let mut out = Circuit::new(self.num_qubits());
        for c in circuits {
            out.append(c)?;
        }
        self.decorate(&mut out);
        Ok(out)
    }

    /// Logical-zero preparation for this platform. Citadel: fresh data plus
    /// the three X checks (round 0). GotoRL-FB: the verified preparation
    /// followed by the SWAP reconfiguration.
    pub fn encoder(&self, code: &CodeDefinition) -> Result<Circuit> {
        match self.name.as_str() {
            "citadel" => {
                let mut prep = Circuit::new(self.num_qubits());
                for &q in &self.data {
                    prep.prep_z(q);
                }
                let mut parts = vec![prep];
                parts.extend(self.round(code, Basis::X, 0)?);
                self.join(&parts)
            }
            "gotorl-fb" => self.encoder_with(code, &gotorl_encoder(code)?),
            other => Err(Error::Config(format!("platform {other:?} has no encoder"))),
        }
    }

    /// GotoRL-FB preparation built around the given verified 8-qubit
    /// preparation; the result is re-checked for locality and output state.
    pub fn encoder_with(&self, code: &CodeDefinition, g: &Circuit) -> Result<Circuit> {
        match self.name.as_str() {
            "gotorl-fb" => {
                let mut c = g.embed(self.num_qubits(), &(0..8).collect::<Vec<_>>())?;
                for (a, b) in GOTORL_FB_SWAPS {
                    c.swap(a, b);
                }
                for q in 0..self.num_qubits() {
                    c.set_role(q, Role::Data);
                }
                self.decorate(&mut c);
                if !validate_connectivity(&c)?.is_empty() {
                    return Err(Error::CircuitCheck("preparation does not fit the platform layout".into()));
                }
                check_prepares_zero(&c, code, &self.data)?;
                Ok(c)
            }
            other => Err(Error::Config(format!("platform {other:?} has no swap-based encoder"))),
        }
    }
}

/// Moves the code qubits from the 3×3 preparation patch to the check layout.
pub const GOTORL_FB_SWAPS: [(usize, usize); 6] = [(8, 3), (4, 9), (1, 7), (6, 10), (3, 7), (0, 11)];

/// Checks that `c` prepares logical zero on its data qubits (ascending ids)
/// with every other measurement reading 0 when fault-free.
pub fn check_prepares_zero(c: &Circuit, code: &CodeDefinition, data: &[usize]) -> Result<()> {
    let (state, meas) = run_ideal(c);
    if let Some(k) = meas.iter().position(|m| !m.deterministic || m.outcome) {
        return Err(Error::CircuitCheck(format!("measurement {k} is not deterministically 0 without faults")));
    }
    let n = c.num_qubits();
    let mut ops = code.stabilizers();
    ops.push(code.logical_z());
    for p in ops {
        if state.expectation(&p.embed(n, data)) != Some(false) {
            return Err(Error::CircuitCheck(format!("{p} is not a +1 stabilizer of the prepared state")));
        }
    }
    Ok(())
}

/// Parses and validates a verified logical-zero preparation: 7 data qubits,
/// one verification qubit, nearest-neighbour gates, correct output state and
/// single-fault tolerance.
pub fn load_verified_encoder(text: &str, code: &CodeDefinition) -> Result<Circuit> {
    let c = circuit_file::parse(text)?;
    let data = c.data_qubits();
    if data.len() != code.n {
        return Err(Error::CircuitCheck(format!("expected {} data qubits, found {}", code.n, data.len())));
    }
    if c.qubits_with_role(Role::Verification).len() != 1 {
        return Err(Error::CircuitCheck("expected exactly one verification qubit".into()));
    }
    if let Some(v) = validate_connectivity(&c)?.first() {
        return Err(Error::CircuitCheck(format!("{} at location {} joins {:?} and {:?}", v.gate, v.location, v.coords[0], v.coords[1])));
    }
    check_prepares_zero(&c, code, &data)?;
    if !verify_fault_tolerance(&c, code, Target::ZeroState)?.is_fault_tolerant() {
        return Err(Error::CircuitCheck("preparation is not fault-tolerant".into()));
    }
    Ok(c)
}

/// The shipped 8-qubit preparation (11 CNOTs, verification qubit 7).
pub fn gotorl_encoder(code: &CodeDefinition) -> Result<Circuit> {
    let c = load_verified_encoder(GOTORL_SOURCE, code)?;
    if c.cnot_count() != 11 {
        return Err(Error::CircuitCheck("shipped preparation must use 11 CNOTs".into()));
    }
    validate_gotorl_encoder(c, code)
}

/// Accepts a user-supplied preparation in place of the shipped one: same
/// checks as [`load_verified_encoder`], plus the 8-qubit layout with
/// verification qubit 7 on the 3×3 patch.
pub fn validate_gotorl_encoder(c: Circuit, code: &CodeDefinition) -> Result<Circuit> {
    if c.num_qubits() != 8 || c.qubits()[7].role != Role::Verification {
        return Err(Error::CircuitCheck("preparation must have 8 qubits with verification qubit 7".into()));
    }
    let shipped = circuit_file::parse(GOTORL_SOURCE)?;
    if c.qubits().iter().zip(shipped.qubits()).any(|(a, b)| a.coord != b.coord) {
        return Err(Error::CircuitCheck("preparation must use the shipped 3×3 coordinates".into()));
    }
    let data = c.data_qubits();
    if data.len() != code.n {
        return Err(Error::CircuitCheck(format!("expected {} data qubits, found {}", code.n, data.len())));
    }
    if let Some(v) = validate_connectivity(&c)?.first() {
        return Err(Error::CircuitCheck(format!("{} at location {} is not nearest-neighbour", v.gate, v.location)));
    }
    check_prepares_zero(&c, code, &data)?;
    if !verify_fault_tolerance(&c, code, Target::ZeroState)?.is_fault_tolerant() {
        return Err(Error::CircuitCheck("preparation is not fault-tolerant".into()));
    }
    Ok(c)
}

/// Register for transversal extraction: a verified preparation patch
/// (sites 0–7) next to the data block (sites 8–14). The patch hosts first a
/// logical zero (X information) and then a logical plus (Z information).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteaneRegister {
    pub coords: Vec<Coord>,
    pub ancilla: [usize; 7],
    pub verification: usize,
    pub data: [usize; 7],
    zero: Circuit,
}

impl SteaneRegister {
    pub fn new(code: &CodeDefinition) -> Result<Self> {
        Self::with_encoder(gotorl_encoder(code)?)
    }

    /// Uses `zero` (8 qubits, verification qubit 7) as the patch preparation.
    pub fn with_encoder(zero: Circuit) -> Result<Self> {
        if zero.num_qubits() != 8 || zero.qubits()[7].role != Role::Verification {
            return Err(Error::CircuitCheck("patch preparation must have 8 qubits with verification qubit 7".into()));
        }
        let mut coords: Vec<Coord> = zero.qubits().iter().map(|i| i.coord.map(|(r, c)| (r + 1, c + 1)).unwrap()).collect();
        coords.extend([(3, 0), (2, 0), (4, 2), (0, 2), (1, 4), (4, 3), (2, 4)]);
        Ok(SteaneRegister { coords, ancilla: [0, 1, 2, 3, 4, 5, 6], verification: 7, data: [8, 9, 10, 11, 12, 13, 14], zero })
    }

    pub fn num_qubits(&self) -> usize {
        self.coords.len()
    }

    fn decorate(&self, c: &mut Circuit) {
        for (q, &xy) in self.coords.iter().enumerate() {
            c.set_coord(q, xy);
        }
        for &q in &self.ancilla {
            c.set_role(q, Role::AncillaData);
        }
        c.set_role(self.verification, Role::Verification);
        for &q in &self.data {
            c.set_role(q, Role::Data);
        }
    }

    fn patch(&self, basis: Basis) -> Result<Circuit> {
        let p = match basis {
            Basis::Z => self.zero.clone(),
            Basis::X => self.zero.h_dual(),
        };
        p.embed(self.num_qubits(), &(0..8).collect::<Vec<_>>())
    }

    /// Logical zero on the patch, copied onto fresh data by transversal CNOTs;
    /// the patch is then read out in the X basis (`b0X`).
    pub fn encoder(&self) -> Result<Circuit> {
        let mut c = self.patch(Basis::Z)?;
        for &q in &self.data {
            c.prep_z(q);
        }
        for i in 0..7 {
            c.cx(self.ancilla[i], self.data[i]);
        }
        for i in 0..7 {
            c.meas_x(self.ancilla[i], Label::new("b0X", i));
        }
        self.decorate(&mut c);
        Ok(c)
    }

    /// Logical plus on the patch, transversal CNOTs from the data, Z readout
    /// of the patch (`b0Z`).
    pub fn z_extraction(&self) -> Result<Circuit> {
        let mut c = self.patch(Basis::X)?;
        for i in 0..7 {
            c.cx(self.data[i], self.ancilla[i]);
        }
        for i in 0..7 {
            c.meas_z(self.ancilla[i], Label::new("b0Z", i));
        }
        self.decorate(&mut c);
        Ok(c)
    }
}

/// Gate and qubit budget of one logical-zero preparation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceSummary {
    pub name: String,
    pub encoding_cnots: usize,
    /// SWAPs (three CNOTs each) or transversal CNOTs.
    pub extra_cnots: usize,
    pub ancillas: usize,
}

/// Resources of the three preparations: flag-bridge, verified patch plus
/// SWAPs, verified patch plus transversal copy.
pub fn resource_audit(code: &CodeDefinition) -> Result<Vec<ResourceSummary>> {
    let fb = Platform::citadel().encoder(code)?;
    let gfb = Platform::gotorl_fb().encoder(code)?;
    let st = SteaneRegister::new(code)?;
    let mut full = st.encoder()?;
    full.append(&st.z_extraction()?)?;
    let g = gotorl_encoder(code)?;
    let swaps = gfb.count(GateKind::Swap);
    Ok(vec![
        ResourceSummary { name: "FB".into(), encoding_cnots: fb.cnot_count(), extra_cnots: 0, ancillas: fb.ancilla_count() },
        ResourceSummary { name: "GotoRL-FB".into(), encoding_cnots: g.cnot_count(), extra_cnots: 3 * swaps, ancillas: gfb.ancilla_count() },
        ResourceSummary {
            name: "GotoRL-Steane".into(),
            encoding_cnots: g.cnot_count(),
            extra_cnots: st.encoder()?.cnot_count() - g.cnot_count(),
            ancillas: full.ancilla_count(),
        },
    ])
}
