// SPDX-License-Identifier: Apache-2.0

//! Optimizing dynamic quantum circuits by recursive branch expansion.
//!
//! Branch expansion copies code that does not feed a conditional's test into
//! both of its branches. A peephole optimizer that treats conditionals as
//! barriers can then cancel gates across what used to be a branch boundary.
//!
//! - [`circuit`]: the IR and its structural measures
//! - [`dependency`]: which preceding code a condition depends on
//! - [`expand`]: single-step and recursive branch expansion
//! - [`peephole`]: adjacent-pair cancellation
//! - [`pathmetrics`]: execution paths and their depth / gate counts
//! - [`simverify`]: ensemble simulator and equivalence oracle
//! - [`randgen`]: seeded benchmark generators
//! - [`harness`]: experiment driver, CSV and SVG output
//! - [`json`]: the `dyncirc-v1` file format

pub mod circuit;
pub mod dependency;
pub mod expand;
pub mod harness;
pub mod json;
pub mod pathmetrics;
pub mod peephole;
pub mod randgen;
pub mod simverify;

pub use circuit::{Circuit, CondExpr, Conditional, GateKind, Instruction, ValidationError};
pub use expand::{expand_once, rec_branch_expand, ExpandConfig, ExpandError};
pub use json::{from_json, to_json, JsonError};
pub use pathmetrics::{metrics, MetricsReport};
pub use peephole::{optimize, optimize_pipeline};
pub use simverify::{equivalent, simulate, SimError};
