//! Stabilizer tableau in destabilizer/stabilizer form.
//!
//! Rows are [`Pauli`] values, so row multiplication carries its phase
//! exactly and no separate rowsum phase table is needed.

use rand::Rng;

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliKind, Sign};

/// Result of a single Z measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    /// `true` for the -1 eigenvalue.
    pub outcome: bool,
    pub deterministic: bool,
}

/// How intrinsically random outcomes are resolved.
pub enum OutcomeSource<'a, R: Rng + ?Sized> {
    Random(&'a mut R),
    /// Every random outcome takes this value.
    Forced(bool),
}

#[derive(Clone, Debug)]
pub struct TableauState {
    n: usize,
    /// rows[0..n] destabilizers, rows[n..2n] stabilizers.
    rows: Vec<Pauli>,
}

impl TableauState {
    /// All qubits in |0⟩.
    pub fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(Pauli::single(n, q, PauliKind::X));
        }
        for q in 0..n {
            rows.push(Pauli::single(n, q, PauliKind::Z));
        }
        TableauState { n, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[Pauli] {
        &self.rows[self.n..]
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn h(&mut self, q: usize) {
        for r in &mut self.rows {
            r.apply_h(q);
        }
    }

    #[inline]
    pub fn cx(&mut self, c: usize, t: usize) {
        for r in &mut self.rows {
            r.apply_cx(c, t);
        }
    }

    #[inline]
    pub fn swap(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.apply_swap(a, b);
        }
    }

    /// Applies a Pauli operator to the state (flips the signs of anticommuting rows).
    pub fn apply_pauli(&mut self, p: &Pauli) {
        for r in &mut self.rows {
            if !r.commutes(p) {
                let s = r.sign();
                r.set_sign(match s {
                    Sign::PlusOne => Sign::MinusOne,
                    Sign::MinusOne => Sign::PlusOne,
                    Sign::PlusI => Sign::MinusI,
                    Sign::MinusI => Sign::PlusI,
                });
            }
        }
    }

    /// Measures Z on `q`, collapsing the state.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, source: OutcomeSource<'_, R>) -> Measurement {
        let n = self.n;
        let bit = 1u64 << q;
        let pivot = (n..2 * n).find(|&i| self.rows[i].x_bits() & bit != 0);
        match pivot {
            Some(p) => {
                let pivot_row = self.rows[p];
                for i in 0..2 * n {
                    if i != p && self.rows[i].x_bits() & bit != 0 {
                        self.rows[i] = self.rows[i] * pivot_row;
                    }
                }
                let outcome = match source {
                    OutcomeSource::Random(rng) => rng.gen::<bool>(),
                    OutcomeSource::Forced(v) => v,
                };
                self.rows[p - n] = pivot_row;
                let mut z = Pauli::single(n, q, PauliKind::Z);
                if outcome {
                    z.set_sign(Sign::MinusOne);
                }
                self.rows[p] = z;
                Measurement { outcome, deterministic: false }
            }
            None => {
                let mut acc = Pauli::identity(n);
                for i in 0..n {
                    if self.rows[i].x_bits() & bit != 0 {
                        acc = acc * self.rows[i + n];
                    }
                }
                debug_assert!(acc.eq_up_to_phase(&Pauli::single(n, q, PauliKind::Z)));
                Measurement { outcome: acc.sign() == Sign::MinusOne, deterministic: true }
            }
        }
    }

    /// Resets `q` to |0⟩.
    pub fn reset_z<R: Rng + ?Sized>(&mut self, q: usize, source: OutcomeSource<'_, R>) {
        if self.measure_z(q, source).outcome {
            self.apply_pauli(&Pauli::single(self.n, q, PauliKind::X));
        }
    }

    /// Deterministic value of the Hermitian observable `p` (`Some(true)` for -1),
    /// or `None` when a measurement of `p` would be random.
    pub fn expectation(&self, p: &Pauli) -> Option<bool> {
        let n = self.n;
        if self.rows[n..].iter().any(|s| !s.commutes(p)) {
            return None;
        }
        let mut acc = Pauli::identity(n);
        for i in 0..n {
            if !self.rows[i].commutes(p) {
                acc = acc * self.rows[i + n];
            }
        }
        debug_assert!(acc.eq_up_to_phase(p));
        let target = p.sign();
        Some(acc.sign() != target)
    }

    /// Applies one circuit gate; measurement gates return their outcome.
    pub fn apply_gate<R: Rng + ?Sized>(&mut self, gate: &Gate, source: OutcomeSource<'_, R>) -> Result<Option<bool>> {
        for &q in gate.targets() {
            self.check(q)?;
        }
        let t = gate.targets();
        Ok(match gate.kind {
            GateKind::H => {
                self.h(t[0]);
                None
            }
            GateKind::Cnot => {
                self.cx(t[0], t[1]);
                None
            }
            GateKind::Swap => {
                self.swap(t[0], t[1]);
                None
            }
            GateKind::PrepZ => {
                self.reset_z(t[0], source);
                None
            }
            GateKind::MeasZ => Some(self.measure_z(t[0], source).outcome),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Mat = [[(f64, f64); 4]; 4];

    fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn matmul(a: &Mat, b: &Mat) -> Mat {
        let mut out = [[(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let v = cmul(a[i][k], b[k][j]);
                    out[i][j].0 += v.0;
                    out[i][j].1 += v.1;
                }
            }
        }
        out
    }

    fn single(k: PauliKind) -> [[(f64, f64); 2]; 2] {
        let o = (0.0, 0.0);
        let one = (1.0, 0.0);
        match k {
            PauliKind::I => [[one, o], [o, one]],
            PauliKind::X => [[o, one], [one, o]],
            PauliKind::Y => [[o, (0.0, -1.0)], [(0.0, 1.0), o]],
            PauliKind::Z => [[one, o], [o, (-1.0, 0.0)]],
        }
    }

    /// Dense matrix of a two-qubit Pauli; qubit 0 is the most significant index bit.
    fn dense(p: &Pauli) -> Mat {
        let a = single(p.get(0));
        let b = single(p.get(1));
        let coeff = match p.sign() {
            Sign::PlusOne => (1.0, 0.0),
            Sign::PlusI => (0.0, 1.0),
            Sign::MinusOne => (-1.0, 0.0),
            Sign::MinusI => (0.0, -1.0),
        };
        let mut m = [[(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = cmul(coeff, cmul(a[i >> 1][j >> 1], b[i & 1][j & 1]));
            }
        }
        m
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        (0..4).all(|i| (0..4).all(|j| (a[i][j].0 - b[i][j].0).abs() < 1e-12 && (a[i][j].1 - b[i][j].1).abs() < 1e-12))
    }

    fn all_two_qubit() -> Vec<Pauli> {
        let kinds = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];
        let mut v = vec![];
        for a in kinds {
            for b in kinds {
                let mut p = Pauli::identity(2);
                p.set(0, a);
                p.set(1, b);
                v.push(p);
            }
        }
        v
    }

    #[test]
    fn cnot_conjugation_matches_dense_matrices() {
        let o = (0.0, 0.0);
        let one = (1.0, 0.0);
        // |ab⟩ with a = control (qubit 0)
        let cnot: Mat = [[one, o, o, o], [o, one, o, o], [o, o, o, one], [o, o, one, o]];
        for p in all_two_qubit() {
            let expected = matmul(&matmul(&cnot, &dense(&p)), &cnot);
            let mut q = p;
            q.apply_cx(0, 1);
            assert!(close(&dense(&q), &expected), "CNOT conjugation wrong for {p:?}: got {q:?}");
        }
    }

    #[test]
    fn hadamard_and_swap_conjugation_match_dense_matrices() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h1 = [[(s, 0.0), (s, 0.0)], [(s, 0.0), (-s, 0.0)]];
        let id = single(PauliKind::I);
        let mut h0: Mat = [[(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                h0[i][j] = cmul(h1[i >> 1][j >> 1], id[i & 1][j & 1]);
            }
        }
        let o = (0.0, 0.0);
        let one = (1.0, 0.0);
        let swap: Mat = [[one, o, o, o], [o, o, one, o], [o, one, o, o], [o, o, o, one]];
        for p in all_two_qubit() {
            let mut q = p;
            q.apply_h(0);
            assert!(close(&dense(&q), &matmul(&matmul(&h0, &dense(&p)), &h0)), "H wrong for {p:?}");
            let mut q = p;
            q.apply_swap(0, 1);
            assert!(close(&dense(&q), &matmul(&matmul(&swap, &dense(&p)), &swap)), "SWAP wrong for {p:?}");
        }
    }

    #[test]
    fn fresh_qubit_measures_zero() {
        let mut t = TableauState::new(3);
        let m = t.measure_z::<ChaCha8Rng>(1, OutcomeSource::Forced(true));
        assert_eq!(m, Measurement { outcome: false, deterministic: true });
    }

    #[test]
    fn plus_state_is_random_and_then_repeatable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut ones = 0;
        for _ in 0..200 {
            let mut t = TableauState::new(1);
            t.h(0);
            let m1 = t.measure_z(0, OutcomeSource::Random(&mut rng));
            assert!(!m1.deterministic);
            let m2 = t.measure_z(0, OutcomeSource::Random(&mut rng));
            assert!(m2.deterministic);
            assert_eq!(m1.outcome, m2.outcome);
            ones += m1.outcome as u32;
        }
        assert!((60..140).contains(&ones));
    }

    #[test]
    fn seeded_measurements_are_reproducible() {
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32)
                .map(|_| {
                    let mut t = TableauState::new(1);
                    t.h(0);
                    t.measure_z(0, OutcomeSource::Random(&mut rng)).outcome
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
    }

    #[test]
    fn bell_pair_correlations() {
        let mut t = TableauState::new(2);
        t.h(0);
        t.cx(0, 1);
        assert_eq!(t.expectation(&"XX".parse().unwrap()), Some(false));
        assert_eq!(t.expectation(&"ZZ".parse().unwrap()), Some(false));
        assert_eq!(t.expectation(&"YY".parse().unwrap()), Some(true));
        assert_eq!(t.expectation(&"ZI".parse().unwrap()), None);
        t.apply_pauli(&"XI".parse().unwrap());
        assert_eq!(t.expectation(&"ZZ".parse().unwrap()), Some(true));
        let a = t.measure_z::<ChaCha8Rng>(0, OutcomeSource::Forced(false));
        let b = t.measure_z::<ChaCha8Rng>(1, OutcomeSource::Forced(false));
        assert!(!a.deterministic && b.deterministic);
        assert_ne!(a.outcome, b.outcome);
    }

    #[test]
    fn out_of_range_gate_is_rejected() {
        let mut t = TableauState::new(2);
        let g = Gate::new(GateKind::H, &[5]).unwrap();
        assert!(t.apply_gate::<ChaCha8Rng>(&g, OutcomeSource::Forced(false)).is_err());
    }
}
