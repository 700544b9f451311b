// SPDX-License-Identifier: Apache-2.0

//! Syntactic dependence of condition expressions on preceding code.
//!
//! An expression depends on a sub-circuit when the sub-circuit writes a
//! classical bit the expression reads. The irreducible split cuts a prefix
//! just after its last such writer.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{CondExpr, Instruction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DependencyError {
    #[error("condition does not depend on the given prefix")]
    NoDependency,
}

/// Classical bits an instruction may write.
pub fn writes(instr: &Instruction) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    collect_writes(instr, &mut out);
    out
}

fn collect_writes(instr: &Instruction, out: &mut BTreeSet<usize>) {
    match instr {
        Instruction::Gate { .. } => {}
        Instruction::Measure { clbit, .. } => {
            out.insert(*clbit);
        }
        Instruction::Conditional(c) => {
            for i in c.if_body.iter().chain(&c.else_body) {
                collect_writes(i, out);
            }
        }
    }
}

fn writes_any(instr: &Instruction, bits: &BTreeSet<usize>) -> bool {
    match instr {
        Instruction::Gate { .. } => false,
        Instruction::Measure { clbit, .. } => bits.contains(clbit),
        Instruction::Conditional(c) => c
            .if_body
            .iter()
            .chain(&c.else_body)
            .any(|i| writes_any(i, bits)),
    }
}

pub fn depends_on(expr: &CondExpr, sub: &[Instruction]) -> bool {
    let reads = expr.reads();
    !reads.is_empty() && sub.iter().any(|i| writes_any(i, &reads))
}

/// A prefix cut into the part a condition irreducibly depends on and the
/// independent remainder. `head` runs first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub head: Vec<Instruction>,
    pub tail: Vec<Instruction>,
}

/// Cuts `prefix` right after the last top-level instruction writing a bit
/// read by `expr`. Conditionals in the prefix are never split internally.
pub fn irreducible_split(
    prefix: &[Instruction],
    expr: &CondExpr,
) -> Result<SplitResult, DependencyError> {
    let reads = expr.reads();
    let last = prefix
        .iter()
        .rposition(|i| writes_any(i, &reads))
        .ok_or(DependencyError::NoDependency)?;
    Ok(SplitResult {
        head: prefix[..=last].to_vec(),
        tail: prefix[last + 1..].to_vec(),
    })
}
