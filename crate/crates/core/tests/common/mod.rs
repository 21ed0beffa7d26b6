//! Reference fault tables shared by the verifier tests and the acceptance run.
#![allow(dead_code)]

use steane_grid::verify::{FaultRecord, FaultReport};

pub const CIRCUIT3_HARMFUL: &[&str] = &[
    "1 CX[4,5] -X ----|-X- 0 10 --XX",
    "1 CX[4,5] -Y ----|-Y- 1 10 --XX",
    "1 CX[4,5] X- ----|X-- 0 10 XX--",
    "1 CX[4,5] XZ ----|XZ- 1 10 XX--",
    "1 CX[4,5] Y- ----|Y-- 1 10 XX--",
    "1 CX[4,5] YZ ----|YZ- 0 10 XX--",
    "1 CX[4,5] ZX ----|ZX- 1 10 --XX",
    "1 CX[4,5] ZY ----|ZY- 0 10 --XX",
    "2 CX[5,6] XX ----|-XX 0 10 --XX",
    "2 CX[5,6] XY ----|-XY 1 10 --XX",
    "2 CX[5,6] YX ----|-YX 1 10 --XX",
    "2 CX[5,6] YY ----|-YY 0 10 --XX",
    "3 CX[4,0] XX X---|X-- 0 10 XX--",
    "3 CX[4,0] XY Y---|X-- 0 10 YX--",
    "3 CX[4,0] YX X---|Y-- 1 10 XX--",
    "3 CX[4,0] YY Y---|Y-- 1 10 YX--",
];

pub const PATTERN_01: &[&str] = &[
    "2 CX[8,9] -X -------|--X- 000 010000 ---X---",
    "2 CX[8,9] -Y -------|--Y- 100 010000 ---X---",
    "2 CX[8,9] ZX -------|-ZX- 100 010000 ---X---",
    "2 CX[8,9] ZY -------|-ZY- 000 010000 ---X---",
    "6 CX[9,3] X- -------|--X- 000 010000 -------",
    "6 CX[9,3] XX ---X---|--X- 000 010000 ---X---",
    "6 CX[9,3] XY ---Y---|--X- 001 010000 ---Y---",
    "6 CX[9,3] XZ ---Z---|--X- 001 010000 ---Z---",
    "6 CX[9,3] Y- -------|--Y- 100 010000 -------",
    "6 CX[9,3] YX ---X---|--Y- 100 010000 ---X---",
    "6 CX[9,3] YY ---Y---|--Y- 101 010000 ---Y---",
    "6 CX[9,3] YZ ---Z---|--Y- 101 010000 ---Z---",
    "7 CX[8,9] -X -------|--X- 000 010000 -------",
    "7 CX[8,9] -Y -------|--Y- 000 010000 -------",
    "7 CX[8,9] ZX -------|-ZX- 100 010000 -------",
    "7 CX[8,9] ZY -------|-ZY- 100 010000 -------",
];

pub const PATTERN_11: &[&str] = &[
    "2 CX[8,9] X- -------|-X-- 000 110000 -XX----",
    "2 CX[8,9] XZ -------|-XZ- 100 110000 -XX----",
    "2 CX[8,9] Y- -------|-Y-- 100 110000 -XX----",
    "2 CX[8,9] YZ -------|-YZ- 000 110000 -XX----",
    "3 CX[8,1] X- -------|-X-- 000 110000 --X----",
    "3 CX[8,1] XX -X-----|-X-- 000 110000 -XX----",
    "3 CX[8,1] XY -Y-----|-X-- 010 110000 -YX----",
    "3 CX[8,1] XZ -Z-----|-X-- 010 110000 -ZX----",
    "3 CX[8,1] Y- -------|-Y-- 100 110000 --X----",
    "3 CX[8,1] YX -X-----|-Y-- 100 110000 -XX----",
    "3 CX[8,1] YY -Y-----|-Y-- 110 110000 -YX----",
    "3 CX[8,1] YZ -Z-----|-Y-- 110 110000 -ZX----",
    "4 CX[8,2] X- -------|-X-- 000 110000 -------",
    "4 CX[8,2] XX --X----|-X-- 000 110000 --X----",
    "4 CX[8,2] XY --Y----|-X-- 011 110000 --Y----",
    "4 CX[8,2] XZ --Z----|-X-- 011 110000 --Z----",
    "4 CX[8,2] Y- -------|-Y-- 100 110000 -------",
    "4 CX[8,2] YX --X----|-Y-- 100 110000 --X----",
    "4 CX[8,2] YY --Y----|-Y-- 111 110000 --Y----",
    "4 CX[8,2] YZ --Z----|-Y-- 111 110000 --Z----",
    "7 CX[8,9] XX -------|-XX- 000 110000 -------",
    "7 CX[8,9] XY -------|-XY- 000 110000 -------",
    "7 CX[8,9] YX -------|-YX- 100 110000 -------",
    "7 CX[8,9] YY -------|-YY- 100 110000 -------",
];

/// (f1, s2, recovery on 1-based qubits)
pub const F1S2: &[(&str, &str, &[usize])] = &[
    ("10 00 00", "100", &[1]),
    ("01 00 00", "101", &[4]),
    ("11 00 00", "001", &[5, 6]),
    ("11 00 00", "111", &[3]),
    ("11 00 00", "000", &[]),
    ("10 00 00", "000", &[]),
    ("01 00 00", "000", &[]),
    ("00 10 00", "001", &[5, 6]),
    ("00 01 00", "011", &[6]),
    ("00 11 00", "010", &[5]),
    ("00 10 00", "111", &[3]),
    ("00 10 00", "000", &[]),
    ("00 11 00", "000", &[]),
    ("00 01 00", "000", &[]),
    ("00 00 01", "111", &[3]),
    ("00 00 10", "010", &[6, 7]),
    ("00 00 11", "101", &[4]),
    ("00 00 10", "011", &[6]),
    ("00 00 10", "000", &[]),
    ("00 00 11", "000", &[]),
    ("00 00 01", "000", &[]),
];

/// Gate-fault rows of the report, space separated, in enumeration order.
pub fn gate_rows(report: &FaultReport, n: usize, keep: impl Fn(&FaultRecord) -> bool) -> Vec<String> {
    let tsv = report.to_tsv(true, n);
    tsv.lines().skip(1).zip(&report.records).filter(|(_, r)| r.gate_index.is_some() && keep(r)).map(|(l, _)| l.replace('\t', " ")).collect()
}
