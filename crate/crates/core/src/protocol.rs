//! Encoding and encoding-plus-EC protocols as per-shot state machines.
//!
//! A [`Protocol`] is compiled once from a [`ProtocolConfig`] and then shared
//! read-only between shots. Each shot returns a [`ShotRecord`] holding the raw
//! outcomes, the post-selection verdict, the applied recovery and both
//! failure notions for the logical-zero state.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::code::{bits_from_str, Basis, CodeDefinition};
use crate::error::{Error, Result};
use crate::library::{self, Platform, SteaneRegister};
use crate::noise::{NoiseParams, SwapNoise};
use crate::sim::{Engine, Simulator};
use crate::verify::{self, F1s2Lut, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    EncFb,
    EncGotorlFb,
    EncGotorlSteane,
    BareFb,
    BareGotorl,
    HybridFb,
    HybridSteane,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 7] = [
        ProtocolKind::EncFb,
        ProtocolKind::EncGotorlFb,
        ProtocolKind::EncGotorlSteane,
        ProtocolKind::BareFb,
        ProtocolKind::BareGotorl,
        ProtocolKind::HybridFb,
        ProtocolKind::HybridSteane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::EncFb => "enc-fb",
            ProtocolKind::EncGotorlFb => "enc-gotorl-fb",
            ProtocolKind::EncGotorlSteane => "enc-gotorl-steane",
            ProtocolKind::BareFb => "bare-fb",
            ProtocolKind::BareGotorl => "bare-gotorl",
            ProtocolKind::HybridFb => "hybrid-fb",
            ProtocolKind::HybridSteane => "hybrid-steane",
        }
    }

    /// Encoding only: failure means a harmful error on the prepared state.
    pub fn is_encoding_only(self) -> bool {
        matches!(self, ProtocolKind::EncFb | ProtocolKind::EncGotorlFb | ProtocolKind::EncGotorlSteane)
    }

    fn uses_gotorl(self) -> bool {
        matches!(self, ProtocolKind::EncGotorlFb | ProtocolKind::EncGotorlSteane | ProtocolKind::BareGotorl | ProtocolKind::HybridSteane)
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Config(format!("unknown protocol {s:?}")))
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which shots are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Policy {
    /// All flags trivial.
    Trivial,
    /// Encoding flag pattern in the first extended set.
    Set1,
    /// Encoding flag pattern in the second extended set.
    Set2,
    /// Trivial round-1 Z flags, and X flags that are trivial or form a key
    /// of the augmented table together with `s2`.
    F1s2,
    /// Trivial flags and trivial first Z-type syndrome.
    S0z,
    /// Keep everything.
    None,
}

impl Policy {
    pub const ALL: [Policy; 6] = [Policy::Trivial, Policy::Set1, Policy::Set2, Policy::F1s2, Policy::S0z, Policy::None];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Trivial => "trivial",
            Policy::Set1 => "set1",
            Policy::Set2 => "set2",
            Policy::F1s2 => "f1s2",
            Policy::S0z => "s0z",
            Policy::None => "none",
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Config(format!("unknown policy {s:?}")))
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// X-recovery strategy for the EC protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Decoder {
    /// Standard single-qubit table on `s2`.
    #[default]
    S2,
    /// Augmented table keyed on `(f1, s2)`, standard table when `f1` is trivial.
    F1s2,
}

impl Decoder {
    pub fn name(self) -> &'static str {
        match self {
            Decoder::S2 => "s2",
            Decoder::F1s2 => "f1s2",
        }
    }
}

impl FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s2" => Ok(Decoder::S2),
            "f1s2" => Ok(Decoder::F1s2),
            other => Err(Error::Config(format!("unknown decoder {other:?}"))),
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flag patterns kept by [`Policy::Set1`]: single-check patterns that need
/// no correction. Flags of check `i` are bits `2i`, `2i+1`.
pub const FLAG_SET_1: [&str; 5] = ["00 00 00", "10 00 00", "01 00 00", "00 01 00", "00 00 01"];
/// Patterns [`Policy::Set2`] keeps on top of [`FLAG_SET_1`]; the last three
/// need a correction.
pub const FLAG_SET_2_EXTRA: [&str; 5] = ["00 11 00", "00 00 11", "11 00 00", "00 10 00", "00 00 10"];

pub fn flag_set(policy: Policy) -> Option<Vec<u64>> {
    let parse = |v: &[&str]| v.iter().map(|s| bits_from_str(s).unwrap()).collect::<Vec<_>>();
    match policy {
        Policy::Set1 => Some(parse(&FLAG_SET_1)),
        Policy::Set2 => Some(parse(&[&FLAG_SET_1[..], &FLAG_SET_2_EXTRA[..]].concat())),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    pub policy: Policy,
    pub decoder: Decoder,
    pub swap: SwapNoise,
    pub engine: Engine,
    /// Replacement for the shipped 8-qubit verified preparation.
    pub gotorl: Option<Circuit>,
}

impl ProtocolConfig {
    pub fn new(kind: ProtocolKind, policy: Policy) -> Self {
        ProtocolConfig { kind, policy, decoder: Decoder::default(), swap: SwapNoise::default(), engine: Engine::default(), gotorl: None }
    }

    pub fn decoder(mut self, d: Decoder) -> Self {
        self.decoder = d;
        self
    }

    pub fn engine(mut self, e: Engine) -> Self {
        self.engine = e;
        self
    }

    pub fn swap(mut self, s: SwapNoise) -> Self {
        self.swap = s;
        self
    }

    /// Rejects combinations that have no meaning.
    pub fn validate(&self) -> Result<()> {
        use Policy::*;
        use ProtocolKind::*;
        let ok = match self.kind {
            EncFb => matches!(self.policy, Trivial | Set1 | Set2 | None),
            EncGotorlFb | EncGotorlSteane => matches!(self.policy, Trivial | None),
            BareFb | BareGotorl | HybridFb | HybridSteane => matches!(self.policy, Trivial | F1s2 | S0z | None),
        };
        if !ok {
            return Err(Error::Config(format!("policy {} does not apply to {}", self.policy, self.kind)));
        }
        if self.kind == HybridSteane && self.policy == F1s2 {
            return Err(Error::Config("hybrid-steane has no round-1 flags; use trivial, s0z or none".into()));
        }
        if self.gotorl.is_some() && !self.kind.uses_gotorl() {
            return Err(Error::Config(format!("{} does not use the verified preparation circuit", self.kind)));
        }
        Ok(())
    }
}

/// Where each measurement of a stage lands: register `reg` (kind·2 + basis,
/// kinds s, f, b) at bit `bit`.
#[derive(Debug, Clone)]
struct Stage {
    circuit: Circuit,
    slots: Vec<(u8, u8)>,
}

const IGNORE: u8 = u8::MAX;

impl Stage {
    fn new(circuit: Circuit) -> Self {
        let slots = circuit
            .measurement_labels()
            .iter()
            .map(|l| {
                let kind = match l.slot.chars().next() {
                    Some('s') => 0,
                    Some('f') => 1,
                    Some('b') => 2,
                    _ => return (IGNORE, 0),
                };
                let basis = match l.slot.chars().last() {
                    Some('X') => 0,
                    Some('Z') => 1,
                    _ => return (IGNORE, 0),
                };
                (kind * 2 + basis, l.index as u8)
            })
            .collect();
        Stage { circuit, slots }
    }

    fn run<R: Rng + ?Sized>(&self, sim: &mut Simulator<'_, R>, buf: &mut Vec<bool>) -> Regs {
        buf.clear();
        sim.run_into(&self.circuit, buf);
        let mut regs = Regs::default();
        for (&b, &(reg, bit)) in buf.iter().zip(&self.slots) {
            if reg != IGNORE && b {
                regs.0[reg as usize] |= 1 << bit;
            }
        }
        regs
    }
}

/// Outcome registers `[sX, sZ, fX, fZ, bX, bZ]`.
#[derive(Debug, Clone, Copy, Default)]
struct Regs([u64; 6]);

impl Regs {
    fn s(&self, b: usize) -> u64 {
        self.0[b]
    }
    fn f(&self, b: usize) -> u64 {
        self.0[2 + b]
    }
    fn b(&self, b: usize) -> u64 {
        self.0[4 + b]
    }
}

/// Outcomes of one shot. Pairs are indexed `[X, Z]`; unused stages stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShotRecord {
    pub s0: [u8; 2],
    pub f0: [u64; 2],
    pub b0: [u64; 2],
    pub s1: [u8; 2],
    pub f1: [u64; 2],
    pub s2: [u8; 2],
    pub f2: [u64; 2],
    /// Round 1 stopped before its last check.
    pub terminated_early: bool,
    /// A second round was run.
    pub round2: bool,
    /// X part of the data error before recovery, code order.
    pub error_x: u64,
    /// Z part of the data error before recovery, code order.
    pub error_z: u64,
    /// X part of the recovery (frame update) that was applied.
    pub recovery_x: u64,
    pub recovery_z: u64,
    pub accepted: bool,
    pub fail_estimated: bool,
    pub fail_true: bool,
    /// Faults sampled during the shot.
    pub faults: u32,
}

/// Post-selection verdict and failure classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub recovery_x: u64,
    pub recovery_z: u64,
    pub fail_estimated: bool,
    pub fail_true: bool,
}

#[derive(Debug, Clone)]
pub struct Protocol {
    config: ProtocolConfig,
    code: CodeDefinition,
    n: usize,
    data: [usize; 7],
    encoder: Stage,
    /// Transversal Z-type extraction (Steane only).
    extraction: Option<Stage>,
    /// `[round1, round2]`, each ordered X1 X2 X3 Z1 Z2 Z3.
    rounds: Option<[Vec<Stage>; 2]>,
    accepted_patterns: Option<Vec<u64>>,
    /// Encoding flag pattern → X correction mask (code order).
    corrections: HashMap<u64, u64>,
    lut: F1s2Lut,
}

impl Protocol {
    pub fn new(config: ProtocolConfig) -> Result<Self> {
        config.validate()?;
        let code = CodeDefinition::steane();
        let zero = match &config.gotorl {
            Some(c) => library::validate_gotorl_encoder(c.clone(), &code)?,
            None => library::gotorl_encoder(&code)?,
        };
        let kind = config.kind;
        let (n, data, encoder, extraction, platform) = match kind {
            ProtocolKind::EncFb | ProtocolKind::BareFb | ProtocolKind::HybridFb => {
                let pf = Platform::citadel();
                (pf.num_qubits(), pf.data, pf.encoder(&code)?, None, Some(pf))
            }
            ProtocolKind::EncGotorlFb | ProtocolKind::BareGotorl => {
                let pf = Platform::gotorl_fb();
                (pf.num_qubits(), pf.data, pf.encoder_with(&code, &zero)?, None, Some(pf))
            }
            ProtocolKind::EncGotorlSteane | ProtocolKind::HybridSteane => {
                let reg = SteaneRegister::with_encoder(zero)?;
                let ext = (kind == ProtocolKind::HybridSteane).then(|| reg.z_extraction()).transpose()?;
                (reg.num_qubits(), reg.data, reg.encoder()?, ext, None)
            }
        };
        let rounds = match (&platform, kind.is_encoding_only()) {
            (Some(pf), false) => {
                let mut rounds: [Vec<Stage>; 2] = Default::default();
                for (k, stages) in rounds.iter_mut().enumerate() {
                    for basis in [Basis::X, Basis::Z] {
                        stages.extend(pf.round(&code, basis, k + 1)?.into_iter().map(Stage::new));
                    }
                }
                Some(rounds)
            }
            _ => None,
        };
        let accepted_patterns = flag_set(config.policy);
        let mut corrections = HashMap::new();
        if let Some(set) = &accepted_patterns {
            let report = verify::enumerate_faults(&encoder, &code, &data, Target::ZeroState, config.swap)?;
            let classes = verify::classify_flag_patterns(&report, &code, 2);
            for class in classes.iter().filter(|c| set.contains(&c.pattern)) {
                if !class.admissible {
                    return Err(Error::CircuitCheck(format!("accepted flag pattern {} has no single-qubit correction", class.pattern_string(2))));
                }
                if let Some(q) = class.correction {
                    corrections.insert(class.pattern, 1 << q);
                }
            }
        }
        let wants_lut = config.policy == Policy::F1s2 || config.decoder == Decoder::F1s2;
        let lut = match &platform {
            Some(pf) if wants_lut && !kind.is_encoding_only() => verify::build_f1s2_lut(&pf.round(&code, Basis::X, 1)?, &code, &data)?,
            _ => F1s2Lut::default(),
        };
        if kind == ProtocolKind::HybridSteane && config.decoder == Decoder::F1s2 {
            return Err(Error::Config("hybrid-steane decodes with the standard table only".into()));
        }
        Ok(Protocol {
            config,
            code,
            n,
            data,
            encoder: Stage::new(encoder),
            extraction: extraction.map(Stage::new),
            rounds,
            accepted_patterns,
            corrections,
            lut,
        })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Corrections applied to accepted encoding flag patterns.
    pub fn corrections(&self) -> &HashMap<u64, u64> {
        &self.corrections
    }

    pub fn lut(&self) -> &F1s2Lut {
        &self.lut
    }

    fn data_part(&self, bits: u64) -> u64 {
        self.data.iter().enumerate().fold(0, |m, (i, &q)| m | (bits >> q & 1) << i)
    }

    /// Runs one noisy shot at physical error rate `params.p`.
    pub fn run_shot<R: Rng + ?Sized>(&self, params: NoiseParams, rng: &mut R) -> ShotRecord {
        let params = params.with_swap(self.config.swap);
        let mut sim = Simulator::new(self.n, params, self.config.engine, rng);
        let mut buf = Vec::with_capacity(16);
        let mut rec = ShotRecord::default();
        let enc = self.encoder.run(&mut sim, &mut buf);
        rec.s0[0] = enc.s(0) as u8;
        rec.f0[0] = enc.f(0);
        rec.b0[0] = enc.b(0);
        let kind = self.config.kind;
        // bare protocols stop at a flagged encoder unless nothing is post-selected
        let skip_ec = matches!(kind, ProtocolKind::BareFb | ProtocolKind::BareGotorl) && self.config.policy != Policy::None && rec.f0[0] != 0;
        if let Some(ext) = &self.extraction {
            let z = ext.run(&mut sim, &mut buf);
            rec.f0[1] = z.f(1);
            rec.b0[1] = z.b(1);
            rec.s0 = [self.code.syndrome_from_bits(rec.b0[0]), self.code.syndrome_from_bits(rec.b0[1])];
        } else if let (Some(rounds), false) = (&self.rounds, skip_ec) {
            self.run_ec(rounds, &mut sim, &mut buf, &mut rec);
        }
        let frame = sim.frame();
        rec.error_x = self.data_part(frame.x_bits());
        rec.error_z = self.data_part(frame.z_bits());
        rec.faults = sim.fault_count() as u32;
        let v = self.classify(&rec, self.config.policy, self.config.decoder);
        rec.accepted = v.accepted;
        rec.recovery_x = v.recovery_x;
        rec.recovery_z = v.recovery_z;
        rec.fail_estimated = v.fail_estimated;
        rec.fail_true = v.fail_true;
        rec
    }

    fn run_ec<R: Rng + ?Sized>(&self, rounds: &[Vec<Stage>; 2], sim: &mut Simulator<'_, R>, buf: &mut Vec<bool>, rec: &mut ShotRecord) {
        let hybrid = self.config.kind == ProtocolKind::HybridFb;
        let reference_x = if self.config.kind == ProtocolKind::BareGotorl { 0 } else { rec.s0[0] };
        let mut clean = true;
        let start = if hybrid {
            rec.s1[0] = rec.s0[0];
            rec.f1[0] = rec.f0[0];
            clean = rec.f0[0] == 0;
            3
        } else {
            0
        };
        if clean {
            for (k, stage) in rounds[0].iter().enumerate().skip(start) {
                let (basis, r) = (k / 3, k % 3);
                let out = stage.run(sim, buf);
                rec.s1[basis] |= out.s(basis) as u8;
                rec.f1[basis] |= out.f(basis);
                let reference = if basis == 0 { reference_x >> r & 1 } else { 0 };
                if out.f(basis) != 0 || (out.s(basis) >> r & 1) as u8 != reference {
                    clean = false;
                    rec.terminated_early = k < 5;
                    break;
                }
            }
        }
        if clean {
            rec.s2 = rec.s1;
            return;
        }
        rec.round2 = true;
        for (k, stage) in rounds[1].iter().enumerate() {
            let basis = k / 3;
            let out = stage.run(sim, buf);
            rec.s2[basis] |= out.s(basis) as u8;
            rec.f2[basis] |= out.f(basis);
        }
    }

    /// Acceptance, recovery and failure classification of a finished record
    /// under any policy and decoder valid for this protocol.
    pub fn classify(&self, rec: &ShotRecord, policy: Policy, decoder: Decoder) -> Verdict {
        let code = &self.code;
        let kind = self.config.kind;
        if kind.is_encoding_only() {
            let f0 = rec.f0[0];
            let accepted = match policy {
                Policy::None => true,
                Policy::Set1 | Policy::Set2 => match &self.accepted_patterns {
                    Some(set) if policy == self.config.policy => set.contains(&f0),
                    _ => flag_set(policy).unwrap().contains(&f0),
                },
                _ => f0 == 0,
            };
            let recovery_x = if matches!(policy, Policy::Set1 | Policy::Set2) { self.corrections.get(&f0).copied().unwrap_or(0) } else { 0 };
            let harmful = code.coset_min_weight(rec.error_x ^ recovery_x) >= 2;
            return Verdict { accepted, recovery_x, recovery_z: 0, fail_estimated: harmful, fail_true: harmful };
        }
        let (s_x, s_z) = if kind == ProtocolKind::HybridSteane { (rec.s0[0], rec.s0[1]) } else { (rec.s2[0], rec.s2[1]) };
        let flags_ok = if kind == ProtocolKind::HybridSteane { rec.f0 == [0, 0] } else { rec.f0[0] == 0 && rec.f1 == [0, 0] };
        let enc_ok = rec.f0[0] == 0;
        let s1z = if kind == ProtocolKind::HybridSteane { rec.s0[1] } else { rec.s1[1] };
        let lut_hit = self.lut.get(rec.f1[0], s_z);
        let accepted = match policy {
            Policy::None => true,
            Policy::Trivial | Policy::Set1 | Policy::Set2 => flags_ok,
            Policy::S0z => flags_ok && s1z == 0,
            Policy::F1s2 => {
                let pre = match kind {
                    ProtocolKind::BareFb | ProtocolKind::BareGotorl => enc_ok,
                    _ => true,
                };
                // the table is keyed on X-check flags only: any Z-check flag has no entry
                pre && rec.f1[1] == 0 && (rec.f1[0] == 0 || lut_hit.is_some())
            }
        };
        let table = |s: u8| code.lookup_mask(s);
        let recovery_x = match decoder {
            Decoder::F1s2 if rec.f1[0] != 0 => lut_hit.unwrap_or_else(|| table(s_z)),
            _ => table(s_z),
        };
        let recovery_z = table(s_x);
        let residual = rec.error_x ^ recovery_x;
        Verdict { accepted, recovery_x, recovery_z, fail_estimated: code.estimated_failure_x(residual), fail_true: code.true_failure_x(residual) }
    }
}
