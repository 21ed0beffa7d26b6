//! Plain-text circuit format.
//!
//! ```text
//! # comment
//! QUBITS 8
//! COORD 7 1 1
//! ROLE 7 verification
//! PREPX 3
//! CX 3 7
//! MEASZ 7 f0X[0]
//! ```
//!
//! `PREPX q` expands to `PREPZ q; H q` and `MEASX q l` to `H q; MEASZ q l`.

use std::fmt::Write as _;
use std::path::Path;

use crate::circuit::{Circuit, Gate, GateKind, Label, Role};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::CircuitFile { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap().to_ascii_uppercase();
        let args: Vec<&str> = words.collect();
        let int = |k: usize| -> Result<i64> {
            args.get(k)
                .ok_or_else(|| err(format!("{keyword} expects more arguments")))?
                .parse::<i64>()
                .map_err(|_| err(format!("{keyword}: {:?} is not an integer", args[k])))
        };
        let expect = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(format!("{keyword} takes {n} argument(s), got {}", args.len())))
            }
        };
        if keyword == "QUBITS" {
            expect(1)?;
            if circuit.is_some() {
                return Err(err("QUBITS given twice".into()));
            }
            let n = int(0)?;
            if !(1..=64).contains(&n) {
                return Err(err(format!("QUBITS must be between 1 and 64, got {n}")));
            }
            circuit = Some(Circuit::new(n as usize));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| err("QUBITS must come first".into()))?;
        let qubit = |k: usize| -> Result<usize> {
            let q = int(k)?;
            if q < 0 || q as usize >= c.num_qubits() {
                return Err(err(format!("qubit {q} out of range for {} qubits", c.num_qubits())));
            }
            Ok(q as usize)
        };
        let label = |k: usize| -> Result<Label> { args[k].parse::<Label>().map_err(|e| err(e.to_string())) };
        let gate = |kind: GateKind, qs: &[usize]| Gate::new(kind, qs).map_err(|e| err(e.to_string()));
        match keyword.as_str() {
            "COORD" => {
                expect(3)?;
                let q = qubit(0)?;
                let (r, col) = (int(1)? as i32, int(2)? as i32);
                c.set_coord(q, (r, col));
            }
            "ROLE" => {
                expect(2)?;
                let q = qubit(0)?;
                let role: Role = args[1].parse().map_err(|e: Error| err(e.to_string()))?;
                c.set_role(q, role);
            }
            "H" => {
                expect(1)?;
                let q = qubit(0)?;
                c.push(gate(GateKind::H, &[q])?, None)?;
            }
            "CX" | "CNOT" => {
                expect(2)?;
                let (a, b) = (qubit(0)?, qubit(1)?);
                c.push(gate(GateKind::Cnot, &[a, b])?, None)?;
            }
            "SWAP" => {
                expect(2)?;
                let (a, b) = (qubit(0)?, qubit(1)?);
                c.push(gate(GateKind::Swap, &[a, b])?, None)?;
            }
            "PREPZ" => {
                expect(1)?;
                let q = qubit(0)?;
                c.prep_z(q);
            }
            "PREPX" => {
                expect(1)?;
                let q = qubit(0)?;
                c.prep_x(q);
            }
            "MEASZ" => {
                expect(2)?;
                let q = qubit(0)?;
                let l = label(1)?;
                c.meas_z(q, l);
            }
            "MEASX" => {
                expect(2)?;
                let q = qubit(0)?;
                let l = label(1)?;
                c.meas_x(q, l);
            }
            other => return Err(err(format!("unknown keyword {other:?}"))),
        }
    }
    circuit.ok_or_else(|| Error::CircuitFile { line: 0, msg: "missing QUBITS line".into() })
}

pub fn load(path: impl AsRef<Path>) -> Result<Circuit> {
    parse(&std::fs::read_to_string(path)?)
}

/// Serializes with explicit Z-basis primitives and H gates.
pub fn write(circuit: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "QUBITS {}", circuit.num_qubits()).unwrap();
    for (q, info) in circuit.qubits().iter().enumerate() {
        if let Some((r, c)) = info.coord {
            writeln!(s, "COORD {q} {r} {c}").unwrap();
        }
        writeln!(s, "ROLE {q} {}", info.role.name()).unwrap();
    }
    for op in circuit.ops() {
        let t = op.gate.targets();
        match op.gate.kind {
            GateKind::H => writeln!(s, "H {}", t[0]),
            GateKind::Cnot => writeln!(s, "CX {} {}", t[0], t[1]),
            GateKind::Swap => writeln!(s, "SWAP {} {}", t[0], t[1]),
            GateKind::PrepZ => writeln!(s, "PREPZ {}", t[0]),
            GateKind::MeasZ => writeln!(s, "MEASZ {} {}", t[0], op.label.as_ref().unwrap()),
        }
        .unwrap();
    }
    s
}
