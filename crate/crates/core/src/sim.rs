//! Noisy shot simulator: a noiseless tableau supplies the intrinsically random
//! outcomes, a Pauli frame carries the sampled faults, and the reported bit is
//! their XOR plus any readout flip.

use rand::Rng;

use crate::circuit::{Circuit, GateKind};
use serde::{Deserialize, Serialize};

use crate::noise::{FaultKind, NoiseParams, SiteKind, SwapNoise};
use crate::pauli::{Pauli, PauliKind};
use crate::tableau::{Measurement, OutcomeSource, TableauState};

/// Fault-free execution with every random outcome forced to 0.
pub fn run_ideal(circuit: &Circuit) -> (TableauState, Vec<Measurement>) {
    let mut t = TableauState::new(circuit.num_qubits());
    let mut out = Vec::new();
    for op in circuit.ops() {
        let q = op.gate.targets();
        match op.gate.kind {
            GateKind::MeasZ => out.push(t.measure_z::<rand::rngs::mock::StepRng>(q[0], OutcomeSource::Forced(false))),
            GateKind::PrepZ => t.reset_z::<rand::rngs::mock::StepRng>(q[0], OutcomeSource::Forced(false)),
            GateKind::H => t.h(q[0]),
            GateKind::Cnot => t.cx(q[0], q[1]),
            GateKind::Swap => t.swap(q[0], q[1]),
        }
    }
    (t, out)
}

/// How intrinsically random outcomes are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Engine {
    /// Pauli frame only: every random outcome takes the value 0 in the
    /// fault-free reference, so a reported bit is the frame flip plus any
    /// readout flip.
    #[default]
    Frame,
    /// A stabilizer tableau samples the reference outcomes; the frame rides on top.
    Tableau,
}

impl std::str::FromStr for Engine {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "frame" => Ok(Engine::Frame),
            "tableau" => Ok(Engine::Tableau),
            other => Err(crate::Error::Config(format!("engine must be frame or tableau, got {other:?}"))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Frame => "frame",
            Engine::Tableau => "tableau",
        })
    }
}

pub struct Simulator<'r, R: Rng + ?Sized> {
    ideal: Option<TableauState>,
    frame: Pauli,
    params: NoiseParams,
    rng: &'r mut R,
    faults: usize,
    /// Sites left before the next one that faults with probability `p`.
    countdown: u64,
}

const LETTERS: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];

impl<'r, R: Rng + ?Sized> Simulator<'r, R> {
    /// `n` qubits in |0⟩ with an empty frame.
    pub fn new(n: usize, params: NoiseParams, engine: Engine, rng: &'r mut R) -> Self {
        let ideal = (engine == Engine::Tableau).then(|| TableauState::new(n));
        let mut s = Simulator { ideal, frame: Pauli::identity(n), params, rng, faults: 0, countdown: 0 };
        s.countdown = s.gap();
        s
    }

    pub fn frame(&self) -> &Pauli {
        &self.frame
    }

    pub fn ideal(&self) -> Option<&TableauState> {
        self.ideal.as_ref()
    }

    /// Number of faults sampled so far.
    pub fn fault_count(&self) -> usize {
        self.faults
    }

    /// Multiplies a Pauli into the frame (a classical correction).
    pub fn apply_frame(&mut self, p: &Pauli) {
        self.frame = self.frame * *p;
    }

    /// Geometric number of silent sites before the next candidate.
    fn gap(&mut self) -> u64 {
        let p = self.params.p;
        if p <= 0.0 {
            return u64::MAX;
        }
        let u: f64 = 1.0 - self.rng.gen::<f64>();
        (u.ln() / (-p).ln_1p()).floor().min(u64::MAX as f64 / 2.0) as u64
    }

    /// Every site is a candidate with probability `p`; prep and readout
    /// candidates then go through with probability 2/3.
    #[inline]
    fn draw(&mut self, kind: SiteKind) -> Option<FaultKind> {
        if self.countdown > 0 {
            self.countdown -= 1;
            return None;
        }
        self.countdown = self.gap();
        let f = match kind {
            SiteKind::OneQubit => FaultKind::One(LETTERS[1 + self.rng.gen_range(0..3)]),
            SiteKind::TwoQubit => {
                let k = 1 + self.rng.gen_range(0..15);
                FaultKind::Two(LETTERS[k / 4], LETTERS[k % 4])
            }
            SiteKind::Prep => match self.rng.gen_range(0..3) {
                0 => FaultKind::One(PauliKind::X),
                1 => FaultKind::One(PauliKind::Y),
                _ => return None,
            },
            SiteKind::Meas => match self.rng.gen_range(0..3) {
                2 => return None,
                _ => FaultKind::Flip,
            },
        };
        self.faults += 1;
        Some(f)
    }

    #[inline]
    fn one(&mut self, q: usize) {
        if let Some(FaultKind::One(k)) = self.draw(SiteKind::OneQubit) {
            self.frame = self.frame * Pauli::single(self.frame.num_qubits(), q, k);
        }
    }

    #[inline]
    fn two(&mut self, a: usize, b: usize) {
        if let Some(FaultKind::Two(ka, kb)) = self.draw(SiteKind::TwoQubit) {
            let n = self.frame.num_qubits();
            self.frame = self.frame * Pauli::single(n, a, ka) * Pauli::single(n, b, kb);
        }
    }

    /// Executes `circuit` and returns the reported measurement bits in order.
    pub fn run(&mut self, circuit: &Circuit) -> Vec<bool> {
        let mut out = Vec::with_capacity(circuit.measurement_labels().len());
        self.run_into(circuit, &mut out);
        out
    }

    pub fn run_into(&mut self, circuit: &Circuit, out: &mut Vec<bool>) {
        debug_assert_eq!(circuit.num_qubits(), self.frame.num_qubits());
        for op in circuit.ops() {
            let t = op.gate.targets();
            match op.gate.kind {
                GateKind::H => {
                    if let Some(s) = &mut self.ideal {
                        s.h(t[0]);
                    }
                    self.frame.apply_h(t[0]);
                    self.one(t[0]);
                }
                GateKind::Cnot => {
                    if let Some(s) = &mut self.ideal {
                        s.cx(t[0], t[1]);
                    }
                    self.frame.apply_cx(t[0], t[1]);
                    self.two(t[0], t[1]);
                }
                GateKind::Swap => {
                    if let Some(s) = &mut self.ideal {
                        s.swap(t[0], t[1]);
                    }
                    match self.params.swap {
                        SwapNoise::Atomic => {
                            self.frame.apply_swap(t[0], t[1]);
                            self.two(t[0], t[1]);
                        }
                        SwapNoise::Decomposed => {
                            for (c, tt) in [(t[0], t[1]), (t[1], t[0]), (t[0], t[1])] {
                                self.frame.apply_cx(c, tt);
                                self.two(c, tt);
                            }
                        }
                    }
                }
                GateKind::PrepZ => {
                    if let Some(s) = &mut self.ideal {
                        s.reset_z(t[0], OutcomeSource::Random(&mut *self.rng));
                    }
                    self.frame.clear(t[0]);
                    if let Some(FaultKind::One(k)) = self.draw(SiteKind::Prep) {
                        self.frame = self.frame * Pauli::single(self.frame.num_qubits(), t[0], k);
                    }
                }
                GateKind::MeasZ => {
                    let flip = self.draw(SiteKind::Meas).is_some();
                    let ideal = match &mut self.ideal {
                        Some(s) => s.measure_z(t[0], OutcomeSource::Random(&mut *self.rng)).outcome,
                        None => false,
                    };
                    let q = t[0];
                    let frame_flip = self.frame.x_bits() >> q & 1 == 1;
                    // a Z on a freshly measured Z eigenstate is only a phase
                    let x = self.frame.get(q).bits().0;
                    self.frame.set(q, PauliKind::from_bits(x, false));
                    out.push(ideal ^ frame_flip ^ flip);
                }
            }
        }
    }
}
