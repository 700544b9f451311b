// SPDX-License-Identifier: Apache-2.0

//! Dynamic-circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered instruction list over a global qubit and
//! classical-bit index space. Instructions are stored in execution order:
//! `instrs[0]` runs first. Conditional bodies share the parent's index space
//! and are plain instruction lists; an absent else-branch is an empty list.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Native Clifford gate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    S,
    H,
    CX,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::H,
        GateKind::CX,
    ];

    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::CX => 2,
            _ => 1,
        }
    }

    /// Whether `g · g` is the identity.
    pub fn is_self_inverse(self) -> bool {
        !matches!(self, GateKind::S)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::H => "H",
            GateKind::CX => "CX",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|g| g.name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boolean condition over classical-bit reads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CondExpr {
    Bit(usize),
    Not(Box<CondExpr>),
    And(Box<CondExpr>, Box<CondExpr>),
    Or(Box<CondExpr>, Box<CondExpr>),
    Xor(Box<CondExpr>, Box<CondExpr>),
    Const(bool),
}

impl CondExpr {
    pub fn bit(index: usize) -> Self {
        CondExpr::Bit(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: CondExpr) -> Self {
        CondExpr::Not(Box::new(e))
    }

    pub fn and(a: CondExpr, b: CondExpr) -> Self {
        CondExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CondExpr, b: CondExpr) -> Self {
        CondExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: CondExpr, b: CondExpr) -> Self {
        CondExpr::Xor(Box::new(a), Box::new(b))
    }

    /// Classical bits read by the expression.
    pub fn reads(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_reads(&mut out);
        out
    }

    fn collect_reads(&self, out: &mut BTreeSet<usize>) {
        match self {
            CondExpr::Bit(i) => {
                out.insert(*i);
            }
            CondExpr::Not(e) => e.collect_reads(out),
            CondExpr::And(a, b) | CondExpr::Or(a, b) | CondExpr::Xor(a, b) => {
                a.collect_reads(out);
                b.collect_reads(out);
            }
            CondExpr::Const(_) => {}
        }
    }

    /// Evaluates against a classical register. Bits past the end read false.
    pub fn eval(&self, clbits: &[bool]) -> bool {
        match self {
            CondExpr::Bit(i) => clbits.get(*i).copied().unwrap_or(false),
            CondExpr::Not(e) => !e.eval(clbits),
            CondExpr::And(a, b) => a.eval(clbits) && b.eval(clbits),
            CondExpr::Or(a, b) => a.eval(clbits) || b.eval(clbits),
            CondExpr::Xor(a, b) => a.eval(clbits) ^ b.eval(clbits),
            CondExpr::Const(v) => *v,
        }
    }
}

/// Classically controlled two-way branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub expr: CondExpr,
    pub if_body: Vec<Instruction>,
    pub else_body: Vec<Instruction>,
}

impl Conditional {
    pub fn new(expr: CondExpr, if_body: Vec<Instruction>, else_body: Vec<Instruction>) -> Self {
        Conditional {
            expr,
            if_body,
            else_body,
        }
    }

    /// Nesting depth: 1 when neither body holds a conditional, otherwise one
    /// more than the deepest conditional found in either body.
    pub fn nesting_depth(&self) -> usize {
        1 + body_nesting_depth(&self.if_body).max(body_nesting_depth(&self.else_body))
    }

    /// `2^nesting_depth`, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        let depth = self.nesting_depth();
        if depth >= 64 {
            u64::MAX
        } else {
            1u64 << depth
        }
    }
}

/// Deepest nesting depth among the conditionals of a body (0 if none).
///
/// Only top-level conditionals of the body are inspected; their own depth
/// already accounts for anything nested below them.
pub fn body_nesting_depth(body: &[Instruction]) -> usize {
    body.iter()
        .filter_map(|i| match i {
            Instruction::Conditional(c) => Some(c.nesting_depth()),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Gate { kind: GateKind, qubits: Vec<usize> },
    Measure { qubit: usize, clbit: usize },
    Conditional(Conditional),
}

impl Instruction {
    pub fn gate(kind: GateKind, qubits: &[usize]) -> Self {
        Instruction::Gate {
            kind,
            qubits: qubits.to_vec(),
        }
    }

    pub fn x(q: usize) -> Self {
        Self::gate(GateKind::X, &[q])
    }

    pub fn y(q: usize) -> Self {
        Self::gate(GateKind::Y, &[q])
    }

    pub fn z(q: usize) -> Self {
        Self::gate(GateKind::Z, &[q])
    }

    pub fn s(q: usize) -> Self {
        Self::gate(GateKind::S, &[q])
    }

    pub fn h(q: usize) -> Self {
        Self::gate(GateKind::H, &[q])
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::gate(GateKind::CX, &[control, target])
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Instruction::Measure { qubit, clbit }
    }

    pub fn cond(expr: CondExpr, if_body: Vec<Instruction>, else_body: Vec<Instruction>) -> Self {
        Instruction::Conditional(Conditional::new(expr, if_body, else_body))
    }

    pub fn as_conditional(&self) -> Option<&Conditional> {
        match self {
            Instruction::Conditional(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_conditional(&self) -> bool {
        matches!(self, Instruction::Conditional(_))
    }

    /// Instruction count under the program-size convention: gates and
    /// measurements are 1, a conditional is 1 for its test plus its bodies.
    pub fn size(&self) -> usize {
        match self {
            Instruction::Gate { .. } | Instruction::Measure { .. } => 1,
            Instruction::Conditional(c) => {
                1 + fragment_size(&c.if_body) + fragment_size(&c.else_body)
            }
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate { kind, qubits } => {
                write!(f, "{kind}(")?;
                for (i, q) in qubits.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{q}")?;
                }
                f.write_str(")")
            }
            Instruction::Measure { qubit, clbit } => write!(f, "M({qubit}->{clbit})"),
            Instruction::Conditional(c) => {
                write!(f, "IF[{} | {}]", c.if_body.len(), c.else_body.len())
            }
        }
    }
}

/// Size of a sub-program (an instruction list with no enclosing circuit
/// declaration).
pub fn fragment_size(instrs: &[Instruction]) -> usize {
    instrs.iter().map(Instruction::size).sum()
}

/// Number of conditionals in an instruction list, counted recursively.
pub fn count_conditionals(instrs: &[Instruction]) -> usize {
    instrs
        .iter()
        .map(|i| match i {
            Instruction::Conditional(c) => {
                1 + count_conditionals(&c.if_body) + count_conditionals(&c.else_body)
            }
            _ => 0,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub instrs: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            instrs: Vec::new(),
        }
    }

    pub fn with_instrs(num_qubits: usize, num_clbits: usize, instrs: Vec<Instruction>) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            instrs,
        }
    }

    pub fn push(&mut self, instr: Instruction) -> &mut Self {
        self.instrs.push(instr);
        self
    }

    /// Sequential composition: `self` runs first, then `other`.
    pub fn concat(&self, other: &Circuit) -> Circuit {
        let mut instrs = self.instrs.clone();
        instrs.extend(other.instrs.iter().cloned());
        Circuit {
            num_qubits: self.num_qubits.max(other.num_qubits),
            num_clbits: self.num_clbits.max(other.num_clbits),
            instrs,
        }
    }

    /// Same registers, different instructions.
    pub fn with_body(&self, instrs: Vec<Instruction>) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            instrs,
        }
    }

    /// Program size. The circuit declaration itself counts as one
    /// instruction, on top of [`fragment_size`] of the body.
    pub fn program_size(&self) -> usize {
        1 + fragment_size(&self.instrs)
    }

    pub fn count_conditionals(&self) -> usize {
        count_conditionals(&self.instrs)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        validate_body(
            &self.instrs,
            self.num_qubits,
            self.num_clbits,
            &[],
            LocationStep::Top,
        )
    }
}

/// Path to an instruction, e.g. `instrs[2].if[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location(pub Vec<LocationStep>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocationStep {
    Top(usize),
    If(usize),
    Else(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match step {
                LocationStep::Top(n) => write!(f, "instrs[{n}]")?,
                LocationStep::If(n) => write!(f, "if[{n}]")?,
                LocationStep::Else(n) => write!(f, "else[{n}]")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("index out of range at {location}: {what} {index} >= {bound}")]
    IndexOutOfRange {
        location: Location,
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("arity mismatch at {location}: {kind} takes {expected} qubit(s), got {got}")]
    ArityMismatch {
        location: Location,
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("duplicate qubit {qubit} at {location}")]
    DuplicateQubit { location: Location, qubit: usize },
}

fn validate_body(
    instrs: &[Instruction],
    num_qubits: usize,
    num_clbits: usize,
    parent: &[LocationStep],
    at: fn(usize) -> LocationStep,
) -> Result<(), ValidationError> {
    for (i, instr) in instrs.iter().enumerate() {
        let loc = || {
            let mut v = parent.to_vec();
            v.push(at(i));
            Location(v)
        };
        match instr {
            Instruction::Gate { kind, qubits } => {
                if qubits.len() != kind.arity() {
                    return Err(ValidationError::ArityMismatch {
                        location: loc(),
                        kind: *kind,
                        expected: kind.arity(),
                        got: qubits.len(),
                    });
                }
                for (j, &q) in qubits.iter().enumerate() {
                    if q >= num_qubits {
                        return Err(ValidationError::IndexOutOfRange {
                            location: loc(),
                            what: "qubit",
                            index: q,
                            bound: num_qubits,
                        });
                    }
                    if qubits[..j].contains(&q) {
                        return Err(ValidationError::DuplicateQubit {
                            location: loc(),
                            qubit: q,
                        });
                    }
                }
            }
            Instruction::Measure { qubit, clbit } => {
                if *qubit >= num_qubits {
                    return Err(ValidationError::IndexOutOfRange {
                        location: loc(),
                        what: "qubit",
                        index: *qubit,
                        bound: num_qubits,
                    });
                }
                if *clbit >= num_clbits {
                    return Err(ValidationError::IndexOutOfRange {
                        location: loc(),
                        what: "clbit",
                        index: *clbit,
                        bound: num_clbits,
                    });
                }
            }
            Instruction::Conditional(c) => {
                if let Some(&bad) = c.expr.reads().iter().find(|&&b| b >= num_clbits) {
                    return Err(ValidationError::IndexOutOfRange {
                        location: loc(),
                        what: "clbit",
                        index: bad,
                        bound: num_clbits,
                    });
                }
                let here = loc().0;
                validate_body(&c.if_body, num_qubits, num_clbits, &here, LocationStep::If)?;
                validate_body(
                    &c.else_body,
                    num_qubits,
                    num_clbits,
                    &here,
                    LocationStep::Else,
                )?;
            }
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use Instruction as I;

    #[test]
    fn empty_circuit_is_valid() {
        assert_eq!(Circuit::new(0, 0).validate(), Ok(()));
    }

    #[test]
    fn duplicate_cx_qubit_rejected() {
        let c = Circuit::with_instrs(2, 0, vec![I::gate(GateKind::CX, &[0, 0])]);
        assert!(matches!(
            c.validate(),
            Err(ValidationError::DuplicateQubit { qubit: 0, .. })
        ));
    }

    #[test]
    fn arity_and_range_errors() {
        let c = Circuit::with_instrs(2, 0, vec![I::gate(GateKind::H, &[0, 1])]);
        assert!(matches!(
            c.validate(),
            Err(ValidationError::ArityMismatch { .. })
        ));
        let c = Circuit::with_instrs(1, 0, vec![I::measure(0, 0)]);
        assert!(matches!(
            c.validate(),
            Err(ValidationError::IndexOutOfRange { what: "clbit", .. })
        ));
    }

    #[test]
    fn nested_error_location() {
        let c = Circuit::with_instrs(
            1,
            1,
            vec![
                I::x(0),
                I::cond(CondExpr::bit(0), vec![], vec![I::x(0), I::x(3)]),
            ],
        );
        let err = c.validate().unwrap_err();
        match err {
            ValidationError::IndexOutOfRange { location, .. } => {
                assert_eq!(location.to_string(), "instrs[1].else[1]")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn condition_reading_missing_bit_rejected() {
        let c = Circuit::with_instrs(1, 1, vec![I::cond(CondExpr::bit(2), vec![], vec![])]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn dependency_example_circuit_validates() {
        let c = Circuit::with_instrs(
            2,
            1,
            vec![
                I::h(0),
                I::measure(0, 0),
                I::z(1),
                I::cond(CondExpr::bit(0), vec![I::x(1)], vec![I::y(1)]),
            ],
        );
        assert_eq!(c.validate(), Ok(()));
    }

    #[test]
    fn nesting_depth_cases() {
        let flat = Conditional::new(CondExpr::bit(0), vec![I::x(0)], vec![]);
        assert_eq!(flat.nesting_depth(), 1);
        assert_eq!(flat.size(), 2);

        let nested = nested();
        assert_eq!(nested.nesting_depth(), 2);
        assert_eq!(nested.size(), 4);

        let deeper = Conditional::new(
            CondExpr::bit(0),
            vec![Instruction::Conditional(nested)],
            vec![Instruction::Conditional(flat)],
        );
        assert_eq!(deeper.nesting_depth(), 3);
        assert_eq!(deeper.size(), 8);
    }

    #[test]
    fn program_sizes_of_worked_examples() {
        assert_eq!(motivating().program_size(), 12);
        assert_eq!(Instruction::Conditional(nested()).size(), 7);

        let restructured = Circuit::with_instrs(
            1,
            1,
            vec![I::cond(
                CondExpr::bit(0),
                vec![
                    I::x(0),
                    I::y(0),
                    I::y(0),
                    I::x(0),
                    I::h(0),
                    I::h(0),
                    I::z(0),
                    I::y(0),
                    I::y(0),
                    I::z(0),
                ],
                vec![I::x(0), I::y(0), I::y(0), I::z(0)],
            )],
        );
        assert_eq!(restructured.program_size(), 16);
    }

    #[test]
    fn reads_and_eval() {
        let e = CondExpr::xor(
            CondExpr::bit(1),
            CondExpr::and(CondExpr::bit(3), CondExpr::not(CondExpr::Const(false))),
        );
        assert_eq!(e.reads().into_iter().collect::<Vec<_>>(), vec![1, 3]);
        assert!(e.eval(&[false, true, false, false]));
        assert!(!e.eval(&[false, true, false, true]));
        assert!(!CondExpr::bit(9).eval(&[true]));
    }

    #[test]
    fn fragment_size_is_additive() {
        let a = motivating();
        let b = Circuit::with_instrs(1, 1, vec![I::h(0), I::measure(0, 0)]);
        let ab = a.concat(&b);
        assert_eq!(
            fragment_size(&ab.instrs),
            fragment_size(&a.instrs) + fragment_size(&b.instrs)
        );
    }
}
