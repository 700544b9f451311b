// SPDX-License-Identifier: Apache-2.0

//! Branching statevector simulation and ensemble equivalence.
//!
//! Simulation starts from |0…0⟩ with all classical bits false. Each
//! measurement splits a branch into its outcomes; conditionals route each
//! branch by its own classical bits. Two circuits are equivalent when they
//! produce the same distribution over classical registers and, for each
//! register value, the same conditional mixed state.
//!
//! Qubit 0 is the least significant bit of the amplitude index. CX takes
//! `qubits[0]` as control and `qubits[1]` as target.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, GateKind, Instruction, ValidationError};

pub const DEFAULT_QUBIT_CAP: usize = 10;

/// Branches below this probability are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("circuit has {got} qubits, simulator cap is {cap}")]
    QubitCapExceeded { got: usize, cap: usize },
    #[error("register shapes differ: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleBranch {
    pub clbits: Vec<bool>,
    pub state: Vec<Complex64>,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub num_qubits: usize,
    pub branches: Vec<EnsembleBranch>,
}

impl Ensemble {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.prob).sum()
    }

    /// Branches grouped by classical register: total probability and the
    /// normalized density matrix (row-major, `dim × dim`).
    pub fn grouped(&self) -> BTreeMap<Vec<bool>, (f64, Vec<Complex64>)> {
        let dim = 1usize << self.num_qubits;
        let mut groups: BTreeMap<Vec<bool>, (f64, Vec<Complex64>)> = BTreeMap::new();
        for b in &self.branches {
            let entry = groups
                .entry(b.clbits.clone())
                .or_insert_with(|| (0.0, vec![Complex64::new(0.0, 0.0); dim * dim]));
            entry.0 += b.prob;
            for (r, amp_r) in b.state.iter().enumerate() {
                if amp_r.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &mut entry.1[r * dim..(r + 1) * dim];
                for (cell, amp_c) in row.iter_mut().zip(&b.state) {
                    *cell += amp_r * amp_c.conj() * b.prob;
                }
            }
        }
        for (p, rho) in groups.values_mut() {
            for cell in rho.iter_mut() {
                *cell /= *p;
            }
        }
        groups
    }
}

pub fn simulate(c: &Circuit) -> Result<Ensemble, SimError> {
    simulate_capped(c, DEFAULT_QUBIT_CAP)
}

pub fn simulate_capped(c: &Circuit, cap: usize) -> Result<Ensemble, SimError> {
    if c.num_qubits > cap {
        return Err(SimError::QubitCapExceeded {
            got: c.num_qubits,
            cap,
        });
    }
    c.validate()?;
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << c.num_qubits];
    state[0] = Complex64::new(1.0, 0.0);
    let start = EnsembleBranch {
        clbits: vec![false; c.num_clbits],
        state,
        prob: 1.0,
    };
    Ok(Ensemble {
        num_qubits: c.num_qubits,
        branches: run_block(&c.instrs, vec![start]),
    })
}

fn run_block(instrs: &[Instruction], mut branches: Vec<EnsembleBranch>) -> Vec<EnsembleBranch> {
    for instr in instrs {
        match instr {
            Instruction::Gate { kind, qubits } => {
                for b in &mut branches {
                    apply_gate(&mut b.state, *kind, qubits);
                }
            }
            Instruction::Measure { qubit, clbit } => {
                branches = branches
                    .into_iter()
                    .flat_map(|b| measure(b, *qubit, *clbit))
                    .collect();
            }
            Instruction::Conditional(c) => {
                let (taken, not_taken): (Vec<_>, Vec<_>) =
                    branches.into_iter().partition(|b| c.expr.eval(&b.clbits));
                branches = run_block(&c.if_body, taken);
                branches.extend(run_block(&c.else_body, not_taken));
            }
        }
    }
    branches
}

fn measure(b: EnsembleBranch, qubit: usize, clbit: usize) -> Vec<EnsembleBranch> {
    let mask = 1usize << qubit;
    let p_one: f64 = b
        .state
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let p_zero = (1.0 - p_one).max(0.0);
    let mut out = Vec::with_capacity(2);
    for (outcome, p) in [(false, p_zero), (true, p_one)] {
        let prob = b.prob * p;
        if prob <= PRUNE_THRESHOLD || p <= PRUNE_THRESHOLD {
            continue;
        }
        let scale = 1.0 / p.sqrt();
        let state = b
            .state
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i & mask != 0) == outcome {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let mut clbits = b.clbits.clone();
        clbits[clbit] = outcome;
        out.push(EnsembleBranch {
            clbits,
            state,
            prob,
        });
    }
    out
}

/// Applies one gate in place.
pub fn apply_gate(state: &mut [Complex64], kind: GateKind, qubits: &[usize]) {
    let i = Complex64::new(0.0, 1.0);
    let frac = std::f64::consts::FRAC_1_SQRT_2;
    let mask = 1usize << qubits[0];
    match kind {
        GateKind::X | GateKind::Y | GateKind::H => {
            for lo in 0..state.len() {
                if lo & mask != 0 {
                    continue;
                }
                let hi = lo | mask;
                let (a, b) = (state[lo], state[hi]);
                let (na, nb) = match kind {
                    GateKind::X => (b, a),
                    GateKind::Y => (-i * b, i * a),
                    _ => ((a + b) * frac, (a - b) * frac),
                };
                state[lo] = na;
                state[hi] = nb;
            }
        }
        GateKind::Z | GateKind::S => {
            let phase = if kind == GateKind::Z {
                Complex64::new(-1.0, 0.0)
            } else {
                i
            };
            for (idx, amp) in state.iter_mut().enumerate() {
                if idx & mask != 0 {
                    *amp *= phase;
                }
            }
        }
        GateKind::CX => {
            let target = 1usize << qubits[1];
            for idx in 0..state.len() {
                if idx & mask != 0 && idx & target == 0 {
                    state.swap(idx, idx | target);
                }
            }
        }
    }
}

pub fn equivalent(a: &Circuit, b: &Circuit, tol: f64) -> Result<bool, SimError> {
    if a.num_qubits != b.num_qubits || a.num_clbits != b.num_clbits {
        return Err(SimError::ShapeMismatch(
            a.num_qubits,
            a.num_clbits,
            b.num_qubits,
            b.num_clbits,
        ));
    }
    let ga = simulate(a)?.grouped();
    let gb = simulate(b)?.grouped();
    if ga.len() != gb.len() {
        return Ok(false);
    }
    for ((ka, (pa, rho_a)), (kb, (pb, rho_b))) in ga.iter().zip(&gb) {
        if ka != kb || (pa - pb).abs() > tol {
            return Ok(false);
        }
        let worst = rho_a
            .iter()
            .zip(rho_b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if worst > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::motivating;
    use crate::circuit::{CondExpr, Instruction as I};

    fn c(n: usize, m: usize, instrs: Vec<Instruction>) -> Circuit {
        Circuit::with_instrs(n, m, instrs)
    }

    fn amp(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn empty_circuit_single_branch() {
        let e = simulate(&c(2, 1, vec![])).unwrap();
        assert_eq!(e.branches.len(), 1);
        assert_eq!(e.branches[0].prob, 1.0);
        assert_eq!(e.branches[0].clbits, vec![false]);
        assert_eq!(e.branches[0].state[0], amp(1.0, 0.0));
    }

    #[test]
    fn hadamard_then_measure_splits_evenly() {
        let e = simulate(&c(1, 1, vec![I::h(0), I::measure(0, 0)])).unwrap();
        assert_eq!(e.branches.len(), 2);
        for b in &e.branches {
            assert!((b.prob - 0.5).abs() < 1e-12);
        }
        let mut bits: Vec<_> = e.branches.iter().map(|b| b.clbits.clone()).collect();
        bits.sort();
        assert_eq!(bits, vec![vec![false], vec![true]]);
    }

    #[test]
    fn gate_matrices() {
        let one = |g: Instruction| {
            simulate(&c(1, 0, vec![g])).unwrap().branches[0]
                .state
                .clone()
        };
        assert!(close(&one(I::x(0)), &[amp(0.0, 0.0), amp(1.0, 0.0)]));
        assert!(close(&one(I::y(0)), &[amp(0.0, 0.0), amp(0.0, 1.0)]));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&one(I::h(0)), &[amp(r, 0.0), amp(r, 0.0)]));
        let st = simulate(&c(1, 0, vec![I::h(0), I::s(0)])).unwrap().branches[0]
            .state
            .clone();
        assert!(close(&st, &[amp(r, 0.0), amp(0.0, r)]));
        let st = simulate(&c(1, 0, vec![I::h(0), I::z(0)])).unwrap().branches[0]
            .state
            .clone();
        assert!(close(&st, &[amp(r, 0.0), amp(-r, 0.0)]));
    }

    #[test]
    fn cx_convention() {
        // X on qubit 0 (index 1), then CX(0 -> 1) gives index 3.
        let st = simulate(&c(2, 0, vec![I::x(0), I::cx(0, 1)]))
            .unwrap()
            .branches[0]
            .state
            .clone();
        assert!((st[3] - amp(1.0, 0.0)).norm() < 1e-12);
        // Control on qubit 1 (unset): nothing happens.
        let st = simulate(&c(2, 0, vec![I::x(0), I::cx(1, 0)]))
            .unwrap()
            .branches[0]
            .state
            .clone();
        assert!((st[1] - amp(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dependency_example_branches() {
        // H(0) M(0->0) Z(1) IF(c0){X(1)} ELSE {Y(1)}
        let circ = c(
            2,
            1,
            vec![
                I::h(0),
                I::measure(0, 0),
                I::z(1),
                I::cond(CondExpr::bit(0), vec![I::x(1)], vec![I::y(1)]),
            ],
        );
        let e = simulate(&circ).unwrap();
        assert_eq!(e.branches.len(), 2);
        for b in &e.branches {
            assert!((b.prob - 0.5).abs() < 1e-12);
            if b.clbits[0] {
                // |q1=1, q0=1⟩
                assert!((b.state[3] - amp(1.0, 0.0)).norm() < 1e-12);
            } else {
                // Y|0⟩ = i|1⟩ on q1, q0 = 0
                assert!((b.state[2] - amp(0.0, 1.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn equivalence_basics() {
        let x = c(1, 0, vec![I::x(0)]);
        let z = c(1, 0, vec![I::z(0)]);
        assert!(!equivalent(&x, &z, 1e-9).unwrap());
        // From |0⟩, X and Y only differ by a global phase.
        let y = c(1, 0, vec![I::y(0)]);
        assert!(equivalent(&x, &y, 1e-9).unwrap());
        let hy = c(1, 0, vec![I::h(0), I::y(0)]);
        let hx = c(1, 0, vec![I::h(0), I::x(0)]);
        assert!(!equivalent(&hx, &hy, 1e-9).unwrap());
        assert!(equivalent(&motivating(), &motivating(), 1e-9).unwrap());
        assert!(matches!(
            equivalent(&x, &c(2, 0, vec![]), 1e-9),
            Err(SimError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn measurement_distinguishes_registers() {
        let a = c(1, 1, vec![I::x(0), I::measure(0, 0)]);
        let b = c(1, 1, vec![I::measure(0, 0), I::x(0)]);
        assert!(!equivalent(&a, &b, 1e-9).unwrap());
    }

    #[test]
    fn qubit_cap() {
        assert!(matches!(
            simulate(&Circuit::new(11, 0)),
            Err(SimError::QubitCapExceeded { got: 11, cap: 10 })
        ));
    }
}
