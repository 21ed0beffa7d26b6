//! Single-fault certification checked against the reference fault tables.

mod common;

use std::collections::HashMap;

use steane_grid::circuit::Circuit;
use steane_grid::code::{bits_from_str, Basis, CodeDefinition};
use steane_grid::library::{standalone_check, FlagVariant, Platform};
use steane_grid::noise::SwapNoise;
use steane_grid::verify::{build_f1s2_lut, classify_flag_patterns, enumerate_faults, verify_fault_tolerance, FaultReport, Target};

use common::{gate_rows, CIRCUIT3_HARMFUL, F1S2, PATTERN_01, PATTERN_11};

fn code() -> CodeDefinition {
    CodeDefinition::steane()
}

#[test]
fn circuit3_harmful_faults_match_table() {
    let c = standalone_check(FlagVariant::Chain);
    let report = verify_fault_tolerance(&c, &code(), Target::ZeroState).unwrap();
    assert!(report.is_fault_tolerant());
    let rows = gate_rows(&report, c.num_qubits(), |r| r.harmful);
    assert_eq!(rows, CIRCUIT3_HARMFUL);
    // every single fault site: 8 CNOTs, 2 H, 3 preps, 3 readouts
    assert_eq!(report.records.len(), 8 * 15 + 2 * 3 + 3 * 2 + 3);
}

#[test]
fn one_flag_circuits_are_fault_tolerant_and_unflagged_is_not() {
    for v in [FlagVariant::One, FlagVariant::Two, FlagVariant::Star] {
        let c = standalone_check(v);
        assert!(verify_fault_tolerance(&c, &code(), Target::ZeroState).unwrap().is_fault_tolerant(), "{v}");
    }
    // circuit 1 with its flag readout removed
    let c = standalone_check(FlagVariant::One);
    let mut bare = Circuit::new(c.num_qubits());
    for op in c.ops() {
        let t = op.gate.targets();
        if t.contains(&5) {
            continue;
        }
        bare.push(op.gate, op.label.clone()).unwrap();
    }
    for q in 4..6 {
        bare.set_role(q, steane_grid::circuit::Role::Syndrome);
    }
    let r = verify_fault_tolerance(&bare, &code(), Target::ZeroState).unwrap();
    assert!(!r.is_fault_tolerant());
}

fn fb_encoder_report() -> (Circuit, FaultReport) {
    let p = Platform::citadel();
    let enc = p.encoder(&code()).unwrap();
    let report = enumerate_faults(&enc, &code(), &p.data, Target::ZeroState, SwapNoise::Decomposed).unwrap();
    (enc, report)
}

#[test]
fn fb_encoder_flag_patterns_match_table() {
    let (enc, report) = fb_encoder_report();
    assert!(report.is_fault_tolerant());
    let pattern = |s: &str| bits_from_str(s).unwrap();
    let rows01 = gate_rows(&report, enc.num_qubits(), |r| r.flags == pattern("010000"));
    assert_eq!(rows01, PATTERN_01);
    let rows11 = gate_rows(&report, enc.num_qubits(), |r| r.flags == pattern("110000"));
    assert_eq!(rows11, PATTERN_11);
}

#[test]
fn fb_encoder_corrections_are_synthesized_and_recertified() {
    let (_, report) = fb_encoder_report();
    let classes = classify_flag_patterns(&report, &code(), 2);
    let by_pattern: HashMap<String, _> = classes.iter().map(|c| (c.pattern_string(2), c)).collect();
    let c01 = by_pattern["01 00 00"];
    assert!(c01.admissible && c01.correction.is_none() && c01.max_weight <= 1);
    let c11 = by_pattern["11 00 00"];
    assert!(c11.admissible);
    assert_eq!(c11.correction, Some(2), "X on the third qubit");
    for c in &classes {
        assert!(c.admissible || c.multi_fault, "{}", c.pattern_string(2));
    }
    let single: HashMap<u64, usize> = classes.iter().filter(|c| !c.multi_fault).filter_map(|c| c.correction.map(|q| (c.pattern, q))).collect();
    let p = Platform::citadel();
    let enc = p.encoder(&code()).unwrap();
    assert!(steane_grid::verify::recertify(&enc, &code(), &p.data, Target::ZeroState, &single).unwrap());
}

#[test]
fn f1s2_table_matches_up_to_stabilizers() {
    let p = Platform::citadel();
    let checks = p.round(&code(), Basis::X, 1).unwrap();
    let lut = build_f1s2_lut(&checks, &code(), &p.data).unwrap();
    assert_eq!(lut.len(), F1S2.len());
    let c = code();
    for &(f1, s2, rec) in F1S2 {
        let key_f = bits_from_str(f1).unwrap();
        let key_s = bits_from_str(s2).unwrap() as u8;
        let want = rec.iter().fold(0u64, |m, q| m | 1 << (q - 1));
        let got = lut.get(key_f, key_s).unwrap_or_else(|| panic!("missing key {f1} {s2}"));
        assert_eq!(c.coset_min_weight(got ^ want), 0, "{f1} {s2}");
    }
}
