// SPDX-License-Identifier: Apache-2.0

//! Branch expansion.
//!
//! [`expand_once`] moves condition-independent code on either side of a
//! conditional into both of its branches. [`rec_branch_expand`] applies it
//! to the leftmost conditional of each level and then recurses into the
//! resulting bodies while the depth budget lasts.

use thiserror::Error;

use crate::circuit::{Circuit, Conditional, Instruction, ValidationError};
use crate::dependency::{depends_on, irreducible_split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpandConfig {
    /// How many levels below the current one may still be expanded.
    pub depth_limit: u32,
}

impl ExpandConfig {
    pub fn new(depth_limit: u32) -> Self {
        ExpandConfig { depth_limit }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("code moved into the branches writes a bit the condition reads")]
    DependencyViolation,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// `head · IF(E){absorbed · if · suffix} ELSE {absorbed · else · suffix}`.
///
/// `head` stays in front of the conditional. `absorbed` must not write any
/// bit the condition reads.
pub fn expand_once(
    head: &[Instruction],
    absorbed: &[Instruction],
    cdt: &Conditional,
    suffix: &[Instruction],
) -> Result<Vec<Instruction>, ExpandError> {
    if depends_on(&cdt.expr, absorbed) {
        return Err(ExpandError::DependencyViolation);
    }
    let wrap = |body: &[Instruction]| -> Vec<Instruction> {
        let mut v = Vec::with_capacity(absorbed.len() + body.len() + suffix.len());
        v.extend_from_slice(absorbed);
        v.extend_from_slice(body);
        v.extend_from_slice(suffix);
        v
    };
    let mut out = head.to_vec();
    out.push(Instruction::cond(
        cdt.expr.clone(),
        wrap(&cdt.if_body),
        wrap(&cdt.else_body),
    ));
    Ok(out)
}

/// One absorption step performed by [`rec_branch_expand_traced`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionStep {
    /// Fragment size of the level before absorption.
    pub size_before: usize,
    /// Fragment size of the level right after absorption, before recursing.
    pub size_after: usize,
}

pub fn rec_branch_expand(c: &Circuit, cfg: ExpandConfig) -> Result<Circuit, ExpandError> {
    rec_branch_expand_traced(c, cfg, &mut |_| {})
}

/// Like [`rec_branch_expand`], reporting every absorption to `observe`.
pub fn rec_branch_expand_traced(
    c: &Circuit,
    cfg: ExpandConfig,
    observe: &mut dyn FnMut(ExpansionStep),
) -> Result<Circuit, ExpandError> {
    c.validate()?;
    Ok(c.with_body(expand_level(&c.instrs, cfg.depth_limit, observe)))
}

fn expand_level(
    instrs: &[Instruction],
    depth_limit: u32,
    observe: &mut dyn FnMut(ExpansionStep),
) -> Vec<Instruction> {
    let Some(pos) = instrs.iter().position(Instruction::is_conditional) else {
        return instrs.to_vec();
    };
    let Instruction::Conditional(cdt) = &instrs[pos] else {
        unreachable!()
    };
    let prefix = &instrs[..pos];
    let suffix = &instrs[pos + 1..];

    let (head, absorbed): (&[Instruction], &[Instruction]) = if depends_on(&cdt.expr, prefix) {
        let cut = irreducible_split(prefix, &cdt.expr)
            .expect("prefix dependency already established")
            .head
            .len();
        (&prefix[..cut], &prefix[cut..])
    } else {
        (&[], prefix)
    };

    let mut out = expand_once(head, absorbed, cdt, suffix)
        .expect("absorbed part is independent by construction");
    observe(ExpansionStep {
        size_before: crate::circuit::fragment_size(instrs),
        size_after: crate::circuit::fragment_size(&out),
    });

    if depth_limit > 0 {
        let Some(Instruction::Conditional(expanded)) = out.last_mut() else {
            unreachable!()
        };
        expanded.if_body = expand_level(&expanded.if_body, depth_limit - 1, observe);
        expanded.else_body = expand_level(&expanded.else_body, depth_limit - 1, observe);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::motivating;
    use crate::circuit::{CondExpr, Instruction as I};

    fn restructured() -> Circuit {
        Circuit::with_instrs(
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
        )
    }

    #[test]
    fn expand_once_restructures_motivating_example() {
        let c = motivating();
        let cdt = c.instrs[2].as_conditional().unwrap();
        let out = expand_once(&[], &c.instrs[..2], cdt, &c.instrs[3..]).unwrap();
        assert_eq!(out, restructured().instrs);
    }

    #[test]
    fn empty_expansion_is_identity() {
        let cdt = Conditional::new(CondExpr::bit(0), vec![I::x(0)], vec![I::z(0)]);
        let out = expand_once(&[], &[], &cdt, &[]).unwrap();
        assert_eq!(out, vec![Instruction::Conditional(cdt)]);
    }

    #[test]
    fn measurement_stays_outside() {
        let cdt = Conditional::new(CondExpr::bit(0), vec![I::x(0)], vec![]);
        let out = expand_once(&[I::measure(0, 0)], &[I::h(1)], &cdt, &[]).unwrap();
        assert_eq!(
            out,
            vec![
                I::measure(0, 0),
                I::cond(CondExpr::bit(0), vec![I::h(1), I::x(0)], vec![I::h(1)]),
            ]
        );
    }

    #[test]
    fn absorbing_a_writer_is_rejected() {
        let cdt = Conditional::new(CondExpr::bit(0), vec![], vec![]);
        assert_eq!(
            expand_once(&[], &[I::measure(0, 0)], &cdt, &[]),
            Err(ExpandError::DependencyViolation)
        );
    }

    #[test]
    fn motivating_example_depth_one() {
        let out = rec_branch_expand(&motivating(), ExpandConfig::new(1)).unwrap();
        assert_eq!(out, restructured());
    }

    #[test]
    fn conditional_free_is_unchanged() {
        let c = Circuit::with_instrs(2, 1, vec![I::h(0), I::cx(0, 1), I::measure(1, 0)]);
        for d in 0..3 {
            assert_eq!(rec_branch_expand(&c, ExpandConfig::new(d)).unwrap(), c);
        }
    }

    #[test]
    fn sequential_conditionals_nest() {
        // M(0->0) IF(c0){X(1)} M(1->1) IF(c1){Z(0)}
        let c = Circuit::with_instrs(
            2,
            2,
            vec![
                I::measure(0, 0),
                I::cond(CondExpr::bit(0), vec![I::x(1)], vec![]),
                I::measure(1, 1),
                I::cond(CondExpr::bit(1), vec![I::z(0)], vec![]),
            ],
        );
        let out = rec_branch_expand(&c, ExpandConfig::new(2)).unwrap();
        let inner = |pre: Vec<Instruction>| {
            let mut v = pre;
            v.push(I::measure(1, 1));
            v.push(I::cond(CondExpr::bit(1), vec![I::z(0)], vec![]));
            v
        };
        assert_eq!(
            out.instrs,
            vec![
                I::measure(0, 0),
                I::cond(CondExpr::bit(0), inner(vec![I::x(1)]), inner(vec![])),
            ]
        );
        assert_eq!(out.instrs[1].as_conditional().unwrap().nesting_depth(), 2);
        let bound = c.count_conditionals() * (1 << 3) * c.program_size();
        assert!(out.program_size() <= bound);
    }

    #[test]
    fn depth_zero_still_absorbs_but_does_not_recurse() {
        let c = Circuit::with_instrs(
            1,
            2,
            vec![
                I::cond(CondExpr::bit(0), vec![], vec![]),
                I::x(0),
                I::cond(CondExpr::bit(1), vec![], vec![]),
                I::x(0),
            ],
        );
        let out = rec_branch_expand(&c, ExpandConfig::new(0)).unwrap();
        assert_eq!(out.instrs.len(), 1);
        let top = out.instrs[0].as_conditional().unwrap();
        // The inner conditional's suffix stays after it, unexpanded.
        assert_eq!(top.if_body.len(), 3);
        assert!(top.if_body[1].is_conditional());
    }

    #[test]
    fn invalid_input_is_reported() {
        let c = Circuit::with_instrs(1, 0, vec![I::x(4)]);
        assert!(matches!(
            rec_branch_expand(&c, ExpandConfig::new(1)),
            Err(ExpandError::Invalid(_))
        ));
    }

    #[test]
    fn trace_reports_each_absorption() {
        let mut steps = Vec::new();
        rec_branch_expand_traced(&motivating(), ExpandConfig::new(1), &mut |s| steps.push(s))
            .unwrap();
        assert_eq!(
            steps,
            vec![ExpansionStep {
                size_before: 11,
                size_after: 15
            }]
        );
    }
}
