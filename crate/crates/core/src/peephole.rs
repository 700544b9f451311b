// SPDX-License-Identifier: Apache-2.0

//! Adjacent-pair gate cancellation.
//!
//! Within straight-line code, a gate is adjacent to an earlier one when no
//! instruction in between touches any of its qubits. Adjacent identical
//! involutions (X, Y, Z, H, and CX with the same control and target) cancel,
//! and adjacent `S · S` becomes `Z`. Measurements block their own qubit.
//! Conditionals block every qubit; their bodies are optimized on their own
//! and a conditional left with two empty bodies is dropped.

use crate::circuit::{Circuit, GateKind, Instruction};
use crate::expand::{rec_branch_expand, ExpandConfig, ExpandError};

/// Result of combining two adjacent gates on the same qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    Cancel,
    Replace(GateKind),
}

/// The fixed rule set. Both gates must act on the identical ordered qubit
/// list for a rule to fire.
pub fn rewrite_rule(first: GateKind, second: GateKind) -> Option<Rewrite> {
    match (first, second) {
        (GateKind::S, GateKind::S) => Some(Rewrite::Replace(GateKind::Z)),
        (a, b) if a == b && a.is_self_inverse() => Some(Rewrite::Cancel),
        _ => None,
    }
}

pub fn optimize(c: &Circuit) -> Circuit {
    c.with_body(optimize_block(&c.instrs, c.num_qubits))
}

pub fn optimize_pipeline(c: &Circuit, cfg: ExpandConfig) -> Result<Circuit, ExpandError> {
    Ok(optimize(&rec_branch_expand(c, cfg)?))
}

enum Slot {
    Live(Instruction),
    Dead,
}

/// Per-qubit stacks of output positions. The top of a qubit's stack is the
/// last surviving instruction touching it; a barrier hides everything
/// underneath it.
struct Frontier {
    slots: Vec<Slot>,
    stacks: Vec<Vec<Option<usize>>>,
}

impl Frontier {
    fn new(num_qubits: usize) -> Self {
        Frontier {
            slots: Vec::new(),
            stacks: vec![Vec::new(); num_qubits],
        }
    }

    fn ensure(&mut self, q: usize) {
        if q >= self.stacks.len() {
            self.stacks.resize(q + 1, Vec::new());
        }
    }

    fn push_gate(&mut self, kind: GateKind, qubits: Vec<usize>) {
        for &q in &qubits {
            self.ensure(q);
        }
        let top = self.stacks[qubits[0]].last().copied().flatten();
        if let Some(pos) = top {
            let shared = qubits
                .iter()
                .all(|&q| self.stacks[q].last().copied().flatten() == Some(pos));
            if shared {
                if let Slot::Live(Instruction::Gate {
                    kind: prev,
                    qubits: prev_qubits,
                }) = &self.slots[pos]
                {
                    if *prev_qubits == qubits {
                        if let Some(rw) = rewrite_rule(*prev, kind) {
                            self.slots[pos] = Slot::Dead;
                            for &q in &qubits {
                                self.stacks[q].pop();
                            }
                            if let Rewrite::Replace(next) = rw {
                                // The replacement may itself combine with
                                // whatever is now exposed.
                                self.push_gate(next, qubits);
                            }
                            return;
                        }
                    }
                }
            }
        }
        let pos = self.slots.len();
        for &q in &qubits {
            self.stacks[q].push(Some(pos));
        }
        self.slots
            .push(Slot::Live(Instruction::Gate { kind, qubits }));
    }

    fn push_measure(&mut self, qubit: usize, clbit: usize) {
        self.ensure(qubit);
        let pos = self.slots.len();
        self.stacks[qubit].push(Some(pos));
        self.slots
            .push(Slot::Live(Instruction::Measure { qubit, clbit }));
    }

    fn push_barrier(&mut self, instr: Instruction) {
        for stack in &mut self.stacks {
            stack.push(None);
        }
        self.slots.push(Slot::Live(instr));
    }

    fn finish(self) -> Vec<Instruction> {
        self.slots
            .into_iter()
            .filter_map(|s| match s {
                Slot::Live(i) => Some(i),
                Slot::Dead => None,
            })
            .collect()
    }
}

fn optimize_block(instrs: &[Instruction], num_qubits: usize) -> Vec<Instruction> {
    let mut f = Frontier::new(num_qubits);
    for instr in instrs {
        match instr {
            Instruction::Gate { kind, qubits } => f.push_gate(*kind, qubits.clone()),
            Instruction::Measure { qubit, clbit } => f.push_measure(*qubit, *clbit),
            Instruction::Conditional(c) => {
                let if_body = optimize_block(&c.if_body, num_qubits);
                let else_body = optimize_block(&c.else_body, num_qubits);
                if if_body.is_empty() && else_body.is_empty() {
                    continue;
                }
                f.push_barrier(Instruction::cond(c.expr.clone(), if_body, else_body));
            }
        }
    }
    f.finish()
}
