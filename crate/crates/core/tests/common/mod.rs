// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use dyncirc::circuit::{Circuit, CondExpr, GateKind, Instruction};
use dyncirc::randgen::{gen_pattern1, gen_pattern2, GenConfig, DEFAULT_P_CX};
use proptest::prelude::*;

pub const QUBITS: usize = 3;
pub const CLBITS: usize = 3;

pub fn motivating() -> Circuit {
    use Instruction as I;
    Circuit::with_instrs(
        1,
        1,
        vec![
            I::x(0),
            I::y(0),
            I::cond(
                CondExpr::bit(0),
                vec![I::y(0), I::x(0), I::h(0), I::h(0), I::z(0), I::y(0)],
                vec![],
            ),
            I::y(0),
            I::z(0),
        ],
    )
}

/// The expected result of expanding [`motivating`] at depth limit 1.
pub fn motivating_restructured() -> Circuit {
    use Instruction as I;
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

/// The hand-optimized form of [`motivating`].
pub fn motivating_optimized() -> Circuit {
    use Instruction as I;
    Circuit::with_instrs(
        1,
        1,
        vec![I::cond(CondExpr::bit(0), vec![], vec![I::x(0), I::z(0)])],
    )
}

/// X(0) Y(0) H(1) IF(E){H(0)} ELSE {H(0) X(0) Z(1)}
pub fn metric_example() -> Circuit {
    use Instruction as I;
    Circuit::with_instrs(
        2,
        1,
        vec![
            I::x(0),
            I::y(0),
            I::h(1),
            I::cond(
                CondExpr::bit(0),
                vec![I::h(0)],
                vec![I::h(0), I::x(0), I::z(1)],
            ),
        ],
    )
}

/// IF(E1) X ELSE [H, IF(E2) Y ELSE Z, S]
pub fn nested_example() -> Instruction {
    use Instruction as I;
    I::cond(
        CondExpr::bit(0),
        vec![I::x(0)],
        vec![
            I::h(0),
            I::cond(CondExpr::bit(1), vec![I::y(0)], vec![I::z(0)]),
            I::s(0),
        ],
    )
}

/// Generated circuits: both patterns, n ≤ 3, k ≤ 4, d ≤ 3, d_s ≤ 4.
pub fn generated_corpus() -> Vec<(String, Circuit)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    for n in 1..=3 {
        for d_s in [1, 2, 4] {
            for k in 1..=4 {
                for rep in 0..3 {
                    seed += 1;
                    let cfg = GenConfig {
                        n,
                        d_s,
                        k,
                        d: 1,
                        seed,
                        p_cx: DEFAULT_P_CX,
                    };
                    out.push((
                        format!("p1 n={n} ds={d_s} k={k} seed={seed}"),
                        gen_pattern1(&cfg).unwrap(),
                    ));
                    let d = 1 + (rep + k) % 3;
                    let cfg = GenConfig { d, ..cfg };
                    out.push((
                        format!("p2 n={n} ds={d_s} k={k} d={d} seed={seed}"),
                        gen_pattern2(&cfg).unwrap(),
                    ));
                }
            }
        }
    }
    out
}

fn gate() -> impl Strategy<Value = Instruction> {
    (0..GateKind::ALL.len(), 0..QUBITS, 1..QUBITS).prop_map(|(g, q, off)| {
        let kind = GateKind::ALL[g];
        if kind == GateKind::CX {
            Instruction::cx(q, (q + off) % QUBITS)
        } else {
            Instruction::gate(kind, &[q])
        }
    })
}

fn leaf() -> impl Strategy<Value = Instruction> {
    prop_oneof![
        6 => gate(),
        1 => (0..QUBITS, 0..CLBITS).prop_map(|(q, c)| Instruction::measure(q, c)),
    ]
}

pub fn expr() -> impl Strategy<Value = CondExpr> {
    let leaf = prop_oneof![
        6 => (0..CLBITS).prop_map(CondExpr::Bit),
        1 => any::<bool>().prop_map(CondExpr::Const),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(CondExpr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| CondExpr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| CondExpr::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| CondExpr::xor(a, b)),
        ]
    })
}

pub fn instruction() -> impl Strategy<Value = Instruction> {
    leaf().prop_recursive(3, 40, 6, |inner| {
        prop_oneof![
            3 => leaf(),
            1 => (
                expr(),
                prop::collection::vec(inner.clone(), 0..5),
                prop::collection::vec(inner, 0..5)
            )
                .prop_map(|(e, a, b)| Instruction::cond(e, a, b)),
        ]
    })
}

/// Random valid circuits over 3 qubits and 3 classical bits, with
/// measurements and (nested) conditionals anywhere.
pub fn circuit() -> impl Strategy<Value = Circuit> {
    prop::collection::vec(instruction(), 0..10)
        .prop_map(|instrs| Circuit::with_instrs(QUBITS, CLBITS, instrs))
}
