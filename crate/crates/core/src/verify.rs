//! Exhaustive single-fault certification.
//!
//! Every fault site of a circuit is paired with each of its candidate faults,
//! propagated through the Pauli frame, and the resulting data error, syndrome
//! bits and flag bits are recorded. A circuit is fault-tolerant when every
//! harmful data error is accompanied by a non-trivial flag.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::code::{bits_to_string, CodeDefinition};
use crate::error::{Error, Result};
use crate::frame::propagate;
use crate::noise::{enumerate_fault_sites, Fault, FaultKind, FaultSite, SwapNoise};
use crate::pauli::Pauli;

/// Which logical state the circuit is meant to protect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Target {
    /// X errors matter (logical |0⟩ or an X-type syndrome extraction).
    #[default]
    ZeroState,
    /// Z errors matter.
    PlusState,
    /// Either part matters (a full error-correction gadget).
    Both,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Target::ZeroState),
            "plus" => Ok(Target::PlusState),
            "ec" | "both" => Ok(Target::Both),
            other => Err(Error::Config(format!("state must be zero, plus or ec, got {other:?}"))),
        }
    }
}

impl Target {
    /// Minimum weight of the relevant part of `e` modulo the stabilizers.
    pub fn weight(self, code: &CodeDefinition, e: &Pauli) -> u32 {
        match self {
            Target::ZeroState => code.coset_min_weight(e.x_bits()),
            Target::PlusState => code.coset_min_weight(e.z_bits()),
            Target::Both => code.coset_min_weight(e.x_bits()).max(code.coset_min_weight(e.z_bits())),
        }
    }

    pub fn is_harmful(self, code: &CodeDefinition, e: &Pauli) -> bool {
        self.weight(code, e) >= 2
    }

    /// Single-qubit correction of the relevant type on code qubit `q`.
    fn correction(self, n: usize, q: usize) -> Pauli {
        match self {
            Target::PlusState => Pauli::z_on(n, &[q]),
            _ => Pauli::x_on(n, &[q]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRecord {
    pub site: FaultSite,
    pub kind: FaultKind,
    /// Unitary-gate ordinal of the faulty op; `None` for prep/readout sites.
    pub gate_index: Option<usize>,
    pub gate: String,
    /// Injected Pauli on the whole register (identity for readout flips).
    pub initial: Pauli,
    pub syndrome: u64,
    pub flags: u64,
    /// Final error on the data qubits, in code order.
    pub data_error: Pauli,
    pub harmful: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultReport {
    pub data: Vec<usize>,
    pub syndrome_len: usize,
    pub flag_len: usize,
    pub target: Target,
    pub records: Vec<FaultRecord>,
}

impl FaultReport {
    pub fn harmful(&self) -> impl Iterator<Item = &FaultRecord> {
        self.records.iter().filter(|r| r.harmful)
    }

    /// Harmful faults that leave every flag trivial.
    pub fn violations(&self) -> impl Iterator<Item = &FaultRecord> {
        self.harmful().filter(|r| r.flags == 0)
    }

    pub fn is_fault_tolerant(&self) -> bool {
        self.violations().next().is_none()
    }

    /// Tab-separated table of the harmful faults (or of every fault).
    pub fn to_tsv(&self, all: bool, num_qubits: usize) -> String {
        let mut s = String::from("Index\tGate\tFault\tInitial Pauli\ts\tf\tError\n");
        let mut order: Vec<usize> = self.data.clone();
        order.extend((0..num_qubits).filter(|q| !self.data.contains(q)));
        for r in self.records.iter().filter(|r| all || r.harmful) {
            let initial = r.initial.restrict(&order);
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.gate_index.map_or("-".to_string(), |i| i.to_string()),
                r.gate,
                r.kind.label(),
                initial.unsigned().display_grouped(&[self.data.len()]),
                bits_to_string(r.syndrome, self.syndrome_len),
                bits_to_string(r.flags, self.flag_len),
                r.data_error.unsigned(),
            )
            .unwrap();
        }
        s
    }
}

/// Measurement positions of every slot whose name starts with `prefix`,
/// grouped by slot in order of first appearance, then by index.
pub fn prefixed_positions(circuit: &Circuit, prefix: char) -> Result<Vec<usize>> {
    let labels = circuit.measurement_labels();
    let mut slots: Vec<&str> = Vec::new();
    for l in &labels {
        if l.slot.starts_with(prefix) && !slots.contains(&l.slot.as_str()) {
            slots.push(&l.slot);
        }
    }
    let mut out = Vec::new();
    for slot in slots {
        let mut found: Vec<(usize, usize)> = labels.iter().enumerate().filter(|(_, l)| l.slot == slot).map(|(m, l)| (l.index, m)).collect();
        found.sort_unstable();
        if found.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::CircuitCheck(format!("slot {slot} measured twice at one index")));
        }
        out.extend(found.into_iter().map(|(_, m)| m));
    }
    Ok(out)
}

fn check_data(circuit: &Circuit, code: &CodeDefinition, data: &[usize]) -> Result<()> {
    if data.len() > code.n {
        return Err(Error::CircuitCheck(format!("{} data qubits exceed code length {}", data.len(), code.n)));
    }
    if let Some(&q) = data.iter().find(|&&q| q >= circuit.num_qubits()) {
        return Err(Error::QubitOutOfRange { qubit: q, n: circuit.num_qubits() });
    }
    Ok(())
}

/// Every single fault of `circuit`, with `data[i]` taken as code qubit `i`.
pub fn enumerate_faults(circuit: &Circuit, code: &CodeDefinition, data: &[usize], target: Target, swap: SwapNoise) -> Result<FaultReport> {
    check_data(circuit, code, data)?;
    let syn = prefixed_positions(circuit, 's')?;
    let flag = prefixed_positions(circuit, 'f')?;
    let n = circuit.num_qubits();
    let indices = circuit.gate_indices();
    let cases: Vec<Fault> =
        enumerate_fault_sites(circuit, swap).into_iter().flat_map(|(site, kinds)| kinds.into_iter().map(move |kind| Fault { site, kind })).collect();
    let run = |f: &Fault| -> Result<FaultRecord> {
        let r = propagate(circuit, std::slice::from_ref(f), swap)?;
        let restricted = r.frame.restrict(data).unsigned();
        let data_error = restricted.embed(code.n, &(0..data.len()).collect::<Vec<_>>());
        Ok(FaultRecord {
            site: f.site,
            kind: f.kind,
            gate_index: indices[f.site.location],
            gate: circuit.ops()[f.site.location].gate.to_string(),
            initial: f.pauli(n).unwrap_or_else(|| Pauli::identity(n)),
            syndrome: r.bits(&syn),
            flags: r.bits(&flag),
            harmful: target.is_harmful(code, &data_error),
            data_error: restricted,
        })
    };
    #[cfg(feature = "parallel")]
    let records: Result<Vec<FaultRecord>> = cases.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let records: Result<Vec<FaultRecord>> = cases.iter().map(run).collect();
    Ok(FaultReport { data: data.to_vec(), syndrome_len: syn.len(), flag_len: flag.len(), target, records: records? })
}

/// Certifies `circuit` using its `Data`-role qubits (ascending) as the code qubits.
pub fn verify_fault_tolerance(circuit: &Circuit, code: &CodeDefinition, target: Target) -> Result<FaultReport> {
    enumerate_faults(circuit, code, &circuit.data_qubits(), target, SwapNoise::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagPatternClass {
    pub pattern: u64,
    pub flag_len: usize,
    /// Indices into the report's records.
    pub rows: Vec<usize>,
    /// Largest reduced weight of the relevant error part over the rows.
    pub max_weight: u32,
    /// Code qubit of the single-qubit correction, if one is needed.
    pub correction: Option<usize>,
    pub admissible: bool,
    /// Non-trivial flags in more than one check: needs two faults.
    pub multi_fault: bool,
}

impl FlagPatternClass {
    /// Flag pattern with a space between checks, e.g. `"11 00 00"`.
    pub fn pattern_string(&self, per_check: usize) -> String {
        let s = bits_to_string(self.pattern, self.flag_len);
        let chunks: Vec<&str> = (0..s.len()).step_by(per_check.max(1)).map(|i| &s[i..(i + per_check).min(s.len())]).collect();
        chunks.join(" ")
    }
}

fn touched_groups(pattern: u64, per_check: usize) -> usize {
    let mask = (1u64 << per_check) - 1;
    (0..64 / per_check).filter(|g| pattern >> (g * per_check) & mask != 0).count()
}

/// Groups the faults of `report` by flag pattern and, for patterns with a
/// weight-2 residual, searches single-qubit corrections in qubit order.
pub fn classify_flag_patterns(report: &FaultReport, code: &CodeDefinition, per_check: usize) -> Vec<FlagPatternClass> {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, r) in report.records.iter().enumerate() {
        groups.entry(r.flags).or_default().push(i);
    }
    let weight = |i: usize, corr: Option<&Pauli>| {
        let e = report.records[i].data_error.embed(code.n, &(0..report.data.len()).collect::<Vec<_>>());
        let e = corr.map_or(e, |c| e * *c);
        report.target.weight(code, &e)
    };
    groups
        .into_iter()
        .map(|(pattern, rows)| {
            let max_weight = rows.iter().map(|&i| weight(i, None)).max().unwrap_or(0);
            let multi_fault = touched_groups(pattern, per_check) > 1;
            let (admissible, correction) = if max_weight <= 1 {
                (true, None)
            } else {
                match (0..report.data.len()).find(|&q| {
                    let c = report.target.correction(code.n, q);
                    rows.iter().all(|&i| weight(i, Some(&c)) <= 1)
                }) {
                    Some(q) => (true, Some(q)),
                    None => (false, None),
                }
            };
            FlagPatternClass { pattern, flag_len: report.flag_len, rows, max_weight, correction, admissible, multi_fault }
        })
        .collect()
}

/// Re-runs the enumeration with the given flag-conditioned corrections
/// applied and reports whether every single fault now ends at weight ≤ 1
/// or raises a flag with no correction registered.
pub fn recertify(circuit: &Circuit, code: &CodeDefinition, data: &[usize], target: Target, corrections: &HashMap<u64, usize>) -> Result<bool> {
    let report = enumerate_faults(circuit, code, data, target, SwapNoise::default())?;
    let idx: Vec<usize> = (0..data.len()).collect();
    Ok(report.records.iter().all(|r| {
        let mut e = r.data_error.embed(code.n, &idx);
        if let Some(&q) = corrections.get(&r.flags) {
            e = e * target.correction(code.n, q);
        } else if r.flags != 0 {
            return true;
        }
        !target.is_harmful(code, &e)
    }))
}

/// Decoder table keyed by a round-1 X-check flag pattern and the Z-type
/// syndrome of a following perfect round. Values are X masks on the code.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct F1s2Lut {
    pub flag_len: usize,
    entries: BTreeMap<(u64, u8), u64>,
}

impl F1s2Lut {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, f1: u64, s2: u8) -> Option<u64> {
        self.entries.get(&(f1, s2)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u8, u64)> + '_ {
        self.entries.iter().map(|(&(f, s), &m)| (f, s, m))
    }
}

/// Builds the table from the round-1 X-check circuits. Check `i` must label
/// its two flags with indices `2i` and `2i+1` of one flag slot; `data[j]` is
/// code qubit `j`. Faults that raise no flag are left to the standard decoder.
pub fn build_f1s2_lut(checks: &[Circuit], code: &CodeDefinition, data: &[usize]) -> Result<F1s2Lut> {
    let mut entries: BTreeMap<(u64, u8), (u64, String)> = BTreeMap::new();
    let mut flag_len = 0;
    for c in checks {
        let report = enumerate_faults(c, code, data, Target::ZeroState, SwapNoise::default())?;
        let labels = c.measurement_labels();
        let flag_pos = prefixed_positions(c, 'f')?;
        let shift: Vec<usize> = flag_pos.iter().map(|&m| labels[m].index).collect();
        flag_len = flag_len.max(shift.iter().max().map_or(0, |m| m + 1));
        for r in &report.records {
            if r.flags == 0 {
                continue;
            }
            let f1 = (0..shift.len()).filter(|&k| r.flags >> k & 1 == 1).fold(0u64, |m, k| m | 1 << shift[k]);
            let x = r.data_error.x_bits();
            let s2 = code.syndrome_from_bits(x);
            let key = (f1, s2);
            let describe = || format!("{} {} at {}", r.gate, r.kind.label(), r.site.location);
            match entries.get(&key) {
                Some(&(prev, ref who)) => {
                    if code.coset_min_weight(prev ^ x) != 0 {
                        return Err(Error::LutConflict(format!(
                            "key f1={} s2={}: {} vs {}",
                            bits_to_string(f1, 6),
                            bits_to_string(s2 as u64, 3),
                            who,
                            describe()
                        )));
                    }
                    if x.count_ones() < prev.count_ones() {
                        entries.insert(key, (x, describe()));
                    }
                }
                None => {
                    entries.insert(key, (x, describe()));
                }
            }
        }
    }
    let entries = entries.into_iter().map(|(k, (x, _))| (k, min_weight_rep(code, x))).collect();
    Ok(F1s2Lut { flag_len, entries })
}

/// Lightest element of `x + rowspace(H)`, keeping `x` on ties.
fn min_weight_rep(code: &CodeDefinition, x: u64) -> u64 {
    let mut best = x;
    for m in 1..8u64 {
        let y = (0..3).filter(|r| m >> r & 1 == 1).fold(x, |acc, r| acc ^ code.checks[r]);
        if y.count_ones() < best.count_ones() {
            best = y;
        }
    }
    best
}
