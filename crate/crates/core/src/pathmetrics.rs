// SPDX-License-Identifier: Apache-2.0

//! Execution paths and per-path depth / gate-count metrics.
//!
//! A path fixes one outcome for every conditional it meets and flattens the
//! taken branches into straight-line code. Paths are syntactic: every
//! combination of outcomes is a path, reachable or not.
//!
//! [`enumerate_paths`] lists paths explicitly and is capped.
//! [`metrics`] computes the same extrema without listing paths, so it scales
//! to circuits with millions of paths.

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Instruction};

/// Maximum number of conditionals a single path may meet before explicit
/// enumeration refuses.
pub const DEFAULT_PATH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("path explosion: a path meets {count} conditionals, cap is {cap}")]
    PathExplosion { count: usize, cap: usize },
    #[error("outcome vector does not match the circuit: {0}")]
    BadOutcome(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionPath {
    /// One entry per conditional met, in the order met.
    pub outcome: Vec<bool>,
    /// Gates and measurements only.
    pub ops: Vec<Instruction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub max_p_depth: usize,
    pub min_p_depth: usize,
    pub max_p_gate_count: usize,
    pub min_p_gate_count: usize,
    /// Saturates at `u64::MAX`.
    pub path_count: u64,
}

impl MetricsReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Most conditionals met along any single path.
pub fn max_conditionals_on_path(instrs: &[Instruction]) -> usize {
    instrs
        .iter()
        .map(|i| match i {
            Instruction::Conditional(c) => {
                1 + max_conditionals_on_path(&c.if_body).max(max_conditionals_on_path(&c.else_body))
            }
            _ => 0,
        })
        .sum()
}

/// Number of distinct paths, saturating.
pub fn path_count(instrs: &[Instruction]) -> u64 {
    instrs.iter().fold(1u64, |acc, i| match i {
        Instruction::Conditional(c) => {
            acc.saturating_mul(path_count(&c.if_body).saturating_add(path_count(&c.else_body)))
        }
        _ => acc,
    })
}

pub fn enumerate_paths(c: &Circuit) -> Result<Vec<ExecutionPath>, MetricsError> {
    enumerate_paths_capped(c, DEFAULT_PATH_CAP)
}

pub fn enumerate_paths_capped(c: &Circuit, cap: usize) -> Result<Vec<ExecutionPath>, MetricsError> {
    let count = max_conditionals_on_path(&c.instrs);
    if count > cap {
        return Err(MetricsError::PathExplosion { count, cap });
    }
    Ok(paths_of(&c.instrs))
}

fn paths_of(instrs: &[Instruction]) -> Vec<ExecutionPath> {
    let mut acc = vec![ExecutionPath {
        outcome: Vec::new(),
        ops: Vec::new(),
    }];
    for instr in instrs {
        match instr {
            Instruction::Conditional(c) => {
                let taken = paths_of(&c.if_body);
                let not_taken = paths_of(&c.else_body);
                let mut next = Vec::with_capacity(acc.len() * (taken.len() + not_taken.len()));
                for p in &acc {
                    for (branch, sub) in [(true, &taken), (false, &not_taken)] {
                        for q in sub.iter() {
                            let mut outcome = p.outcome.clone();
                            outcome.push(branch);
                            outcome.extend_from_slice(&q.outcome);
                            let mut ops = p.ops.clone();
                            ops.extend_from_slice(&q.ops);
                            next.push(ExecutionPath { outcome, ops });
                        }
                    }
                }
                acc = next;
            }
            op => {
                for p in &mut acc {
                    p.ops.push(op.clone());
                }
            }
        }
    }
    acc
}

/// Flattens the circuit along one outcome vector.
pub fn replay(c: &Circuit, outcome: &[bool]) -> Result<Vec<Instruction>, MetricsError> {
    let mut ops = Vec::new();
    let mut rest = outcome;
    replay_into(&c.instrs, &mut rest, &mut ops)?;
    if !rest.is_empty() {
        return Err(MetricsError::BadOutcome("outcome vector too long"));
    }
    Ok(ops)
}

fn replay_into(
    instrs: &[Instruction],
    outcome: &mut &[bool],
    ops: &mut Vec<Instruction>,
) -> Result<(), MetricsError> {
    for instr in instrs {
        match instr {
            Instruction::Conditional(c) => {
                let (&first, tail) = outcome
                    .split_first()
                    .ok_or(MetricsError::BadOutcome("outcome vector too short"))?;
                *outcome = tail;
                let body = if first { &c.if_body } else { &c.else_body };
                replay_into(body, outcome, ops)?;
            }
            op => ops.push(op.clone()),
        }
    }
    Ok(())
}

/// Qubits an op occupies.
fn op_qubits(op: &Instruction) -> &[usize] {
    match op {
        Instruction::Gate { qubits, .. } => qubits,
        Instruction::Measure { qubit, .. } => std::slice::from_ref(qubit),
        Instruction::Conditional(_) => &[],
    }
}

fn advance(frontier: &mut Vec<u32>, qubits: &[usize]) {
    if let Some(&hi) = qubits.iter().max() {
        if hi >= frontier.len() {
            frontier.resize(hi + 1, 0);
        }
    }
    let layer = 1 + qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
    for &q in qubits {
        frontier[q] = layer;
    }
}

/// ASAP layer count of a flattened path.
pub fn path_depth(ops: &[Instruction]) -> usize {
    let mut frontier = Vec::new();
    for op in ops {
        advance(&mut frontier, op_qubits(op));
    }
    frontier.into_iter().max().unwrap_or(0) as usize
}

/// Number of gates and measurements in a flattened path.
pub fn path_gate_count(ops: &[Instruction]) -> usize {
    ops.iter().filter(|op| !op.is_conditional()).count()
}

pub fn metrics(c: &Circuit) -> MetricsReport {
    let (min_count, max_count) = gate_count_range(&c.instrs);
    let start = vec![vec![0u32; c.num_qubits]];
    let highest = depth_frontiers(&c.instrs, start.clone(), Extremum::Max);
    let lowest = depth_frontiers(&c.instrs, start, Extremum::Min);
    let depth_of = |f: &Vec<u32>| f.iter().copied().max().unwrap_or(0) as usize;
    MetricsReport {
        max_p_depth: highest.iter().map(depth_of).max().unwrap_or(0),
        min_p_depth: lowest.iter().map(depth_of).min().unwrap_or(0),
        max_p_gate_count: max_count,
        min_p_gate_count: min_count,
        path_count: path_count(&c.instrs),
    }
}

fn gate_count_range(instrs: &[Instruction]) -> (usize, usize) {
    instrs.iter().fold((0, 0), |(lo, hi), i| match i {
        Instruction::Conditional(c) => {
            let (a_lo, a_hi) = gate_count_range(&c.if_body);
            let (b_lo, b_hi) = gate_count_range(&c.else_body);
            (lo + a_lo.min(b_lo), hi + a_hi.max(b_hi))
        }
        _ => (lo + 1, hi + 1),
    })
}

#[derive(Clone, Copy)]
enum Extremum {
    Max,
    Min,
}

/// Propagates the set of reachable per-qubit layer frontiers through the
/// instructions, keeping only the Pareto-extreme ones. Layering is monotone
/// in the frontier, so dominated frontiers can never produce a new extremum.
fn depth_frontiers(instrs: &[Instruction], mut set: Vec<Vec<u32>>, ext: Extremum) -> Vec<Vec<u32>> {
    for instr in instrs {
        match instr {
            Instruction::Conditional(c) => {
                let mut merged = depth_frontiers(&c.if_body, set.clone(), ext);
                merged.extend(depth_frontiers(&c.else_body, set, ext));
                set = prune(merged, ext);
            }
            op => {
                for f in &mut set {
                    advance(f, op_qubits(op));
                }
            }
        }
    }
    prune(set, ext)
}

fn dominates(a: &[u32], b: &[u32], ext: Extremum) -> bool {
    match ext {
        Extremum::Max => a.iter().zip(b).all(|(x, y)| x >= y),
        Extremum::Min => a.iter().zip(b).all(|(x, y)| x <= y),
    }
}

fn prune(mut set: Vec<Vec<u32>>, ext: Extremum) -> Vec<Vec<u32>> {
    if set.len() <= 1 {
        return set;
    }
    set.sort_unstable();
    set.dedup();
    // Visit candidates from the most extreme sum inward so dominators are
    // kept before the frontiers they dominate.
    let key = |f: &Vec<u32>| f.iter().map(|&v| v as u64).sum::<u64>();
    match ext {
        Extremum::Max => set.sort_by_key(|f| std::cmp::Reverse(key(f))),
        Extremum::Min => set.sort_by_key(key),
    }
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for f in set {
        if !kept.iter().any(|k| dominates(k, &f, ext)) {
            kept.push(f);
        }
    }
    kept
}
