// SPDX-License-Identifier: Apache-2.0

//! `dyncirc-v1` JSON documents.
//!
//! ```json
//! {"version":"dyncirc-v1","num_qubits":1,"num_clbits":1,"instrs":[
//!   {"kind":"gate","g":"H","q":[0]},
//!   {"kind":"measure","q":0,"c":0},
//!   {"kind":"cond","expr":{"op":"bit","c":0},"if":[],"else":[]}]}
//! ```
//!
//! Expressions: `{"op":"bit","c":i}`, `{"op":"not","arg":e}`,
//! `{"op":"and"|"or"|"xor","lhs":e,"rhs":e}`, `{"op":"const","value":b}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CondExpr, GateKind, Instruction, ValidationError};

pub const SCHEMA_VERSION: &str = "dyncirc-v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("schema version mismatch: expected \"{SCHEMA_VERSION}\", found \"{0}\"")]
    SchemaVersionMismatch(String),
    #[error("invalid circuit: {0}")]
    Invalid(#[from] ValidationError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: String,
    num_qubits: usize,
    num_clbits: usize,
    instrs: Vec<WireInstr>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum WireInstr {
    Gate {
        g: WireGate,
        q: Vec<usize>,
    },
    Measure {
        q: usize,
        c: usize,
    },
    Cond {
        expr: WireExpr,
        #[serde(rename = "if")]
        if_body: Vec<WireInstr>,
        #[serde(rename = "else")]
        else_body: Vec<WireInstr>,
    },
}

#[derive(Serialize, Deserialize, Clone, Copy)]
enum WireGate {
    X,
    Y,
    Z,
    S,
    H,
    CX,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum WireExpr {
    Bit {
        c: usize,
    },
    Not {
        arg: Box<WireExpr>,
    },
    And {
        lhs: Box<WireExpr>,
        rhs: Box<WireExpr>,
    },
    Or {
        lhs: Box<WireExpr>,
        rhs: Box<WireExpr>,
    },
    Xor {
        lhs: Box<WireExpr>,
        rhs: Box<WireExpr>,
    },
    Const {
        value: bool,
    },
}

impl From<GateKind> for WireGate {
    fn from(g: GateKind) -> Self {
        match g {
            GateKind::X => WireGate::X,
            GateKind::Y => WireGate::Y,
            GateKind::Z => WireGate::Z,
            GateKind::S => WireGate::S,
            GateKind::H => WireGate::H,
            GateKind::CX => WireGate::CX,
        }
    }
}

impl From<WireGate> for GateKind {
    fn from(g: WireGate) -> Self {
        match g {
            WireGate::X => GateKind::X,
            WireGate::Y => GateKind::Y,
            WireGate::Z => GateKind::Z,
            WireGate::S => GateKind::S,
            WireGate::H => GateKind::H,
            WireGate::CX => GateKind::CX,
        }
    }
}

impl From<&CondExpr> for WireExpr {
    fn from(e: &CondExpr) -> Self {
        let b = |x: &CondExpr| Box::new(WireExpr::from(x));
        match e {
            CondExpr::Bit(c) => WireExpr::Bit { c: *c },
            CondExpr::Not(a) => WireExpr::Not { arg: b(a) },
            CondExpr::And(l, r) => WireExpr::And {
                lhs: b(l),
                rhs: b(r),
            },
            CondExpr::Or(l, r) => WireExpr::Or {
                lhs: b(l),
                rhs: b(r),
            },
            CondExpr::Xor(l, r) => WireExpr::Xor {
                lhs: b(l),
                rhs: b(r),
            },
            CondExpr::Const(v) => WireExpr::Const { value: *v },
        }
    }
}

impl From<WireExpr> for CondExpr {
    fn from(e: WireExpr) -> Self {
        let b = |x: Box<WireExpr>| Box::new(CondExpr::from(*x));
        match e {
            WireExpr::Bit { c } => CondExpr::Bit(c),
            WireExpr::Not { arg } => CondExpr::Not(b(arg)),
            WireExpr::And { lhs, rhs } => CondExpr::And(b(lhs), b(rhs)),
            WireExpr::Or { lhs, rhs } => CondExpr::Or(b(lhs), b(rhs)),
            WireExpr::Xor { lhs, rhs } => CondExpr::Xor(b(lhs), b(rhs)),
            WireExpr::Const { value } => CondExpr::Const(value),
        }
    }
}

impl From<&Instruction> for WireInstr {
    fn from(i: &Instruction) -> Self {
        match i {
            Instruction::Gate { kind, qubits } => WireInstr::Gate {
                g: (*kind).into(),
                q: qubits.clone(),
            },
            Instruction::Measure { qubit, clbit } => WireInstr::Measure {
                q: *qubit,
                c: *clbit,
            },
            Instruction::Conditional(c) => WireInstr::Cond {
                expr: (&c.expr).into(),
                if_body: c.if_body.iter().map(Into::into).collect(),
                else_body: c.else_body.iter().map(Into::into).collect(),
            },
        }
    }
}

impl From<WireInstr> for Instruction {
    fn from(i: WireInstr) -> Self {
        match i {
            WireInstr::Gate { g, q } => Instruction::Gate {
                kind: g.into(),
                qubits: q,
            },
            WireInstr::Measure { q, c } => Instruction::Measure { qubit: q, clbit: c },
            WireInstr::Cond {
                expr,
                if_body,
                else_body,
            } => Instruction::cond(
                expr.into(),
                if_body.into_iter().map(Into::into).collect(),
                else_body.into_iter().map(Into::into).collect(),
            ),
        }
    }
}

fn document(c: &Circuit) -> Document {
    Document {
        version: SCHEMA_VERSION.to_string(),
        num_qubits: c.num_qubits,
        num_clbits: c.num_clbits,
        instrs: c.instrs.iter().map(Into::into).collect(),
    }
}

/// Compact single-line encoding.
pub fn to_json(c: &Circuit) -> String {
    serde_json::to_string(&document(c)).expect("wire types always serialize")
}

pub fn to_json_pretty(c: &Circuit) -> String {
    serde_json::to_string_pretty(&document(c)).expect("wire types always serialize")
}

/// Parses and validates a document.
pub fn from_json(text: &str) -> Result<Circuit, JsonError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| JsonError::Parse {
        line: e.line(),
        column: e.column(),
        reason: e.to_string(),
    })?;
    if doc.version != SCHEMA_VERSION {
        return Err(JsonError::SchemaVersionMismatch(doc.version));
    }
    let c = Circuit::with_instrs(
        doc.num_qubits,
        doc.num_clbits,
        doc.instrs.into_iter().map(Into::into).collect(),
    );
    c.validate()?;
    Ok(c)
}
