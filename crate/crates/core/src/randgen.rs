// SPDX-License-Identifier: Apache-2.0

//! Seeded benchmark circuits.
//!
//! # Streams
//!
//! Every random sub-circuit draws from its own ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`). The stream seed is derived
//! from a key `[block, node, role]` by folding with SplitMix64:
//!
//! ```text
//! h = splitmix64(seed)
//! for t in key { h = splitmix64(h ^ t) }
//! ```
//!
//! `node` numbers the nested conditionals of a block heap-style (outermost
//! is 1, its if-child `2n`, its else-child `2n + 1`). Roles: 1 = the
//! sub-circuit before the conditional, 2 = choice of measured qubit,
//! 3 / 4 = random if / else bodies of an innermost conditional. Because
//! streams are keyed per block, a circuit with `k` blocks is a prefix of the
//! one with `k + 1` blocks for the same seed.
//!
//! # Layers
//!
//! Each layer of a random sub-circuit shuffles the qubits; with probability
//! `p_cx` (and at least two qubits) the first two shuffled qubits get a
//! `CX(control, target)`. Every remaining qubit draws uniformly from
//! `{X, Y, Z, S, H, skip}`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CondExpr, GateKind, Instruction};

pub const DEFAULT_P_CX: f64 = 0.3;

/// Qubit the QEC demo's correction acts on.
pub const QEC_CORRECTION_QUBIT: usize = 4;

const ROLE_BODY: u64 = 1;
const ROLE_MEASURE: u64 = 2;
const ROLE_IF: u64 = 3;
const ROLE_ELSE: u64 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub d_s: usize,
    pub k: usize,
    /// Nesting depth, pattern 2 only.
    pub d: usize,
    pub seed: u64,
    pub p_cx: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 3,
            d_s: 5,
            k: 1,
            d: 1,
            seed: 0,
            p_cx: DEFAULT_P_CX,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidConfig(m.to_string()));
        if self.n < 1 {
            return bad("n must be at least 1");
        }
        if self.d_s < 1 {
            return bad("d_s must be at least 1");
        }
        if self.k < 1 {
            return bad("k must be at least 1");
        }
        if self.d < 1 {
            return bad("d must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p_cx) {
            return bad("p_cx must lie in [0, 1]");
        }
        Ok(())
    }
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child stream for `key` under `seed`.
pub fn stream(seed: u64, key: &[u64]) -> ChaCha8Rng {
    let h = key.iter().fold(splitmix64(seed), |h, &t| splitmix64(h ^ t));
    ChaCha8Rng::seed_from_u64(h)
}

const SINGLE: [Option<GateKind>; 6] = [
    Some(GateKind::X),
    Some(GateKind::Y),
    Some(GateKind::Z),
    Some(GateKind::S),
    Some(GateKind::H),
    None,
];

/// Conditional-free random code with exactly `depth` layers.
pub fn random_subcircuit<R: Rng + ?Sized>(
    n: usize,
    depth: usize,
    p_cx: f64,
    rng: &mut R,
) -> Vec<Instruction> {
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..depth {
        order.shuffle(rng);
        let mut rest = &order[..];
        if n >= 2 && rng.gen_bool(p_cx) {
            out.push(Instruction::cx(order[0], order[1]));
            rest = &order[2..];
        }
        for &q in rest {
            if let Some(kind) = SINGLE[rng.gen_range(0..SINGLE.len())] {
                out.push(Instruction::gate(kind, &[q]));
            }
        }
    }
    out
}

/// Random prefix code of a block followed by the measurement its condition
/// reads.
fn measured_prefix(cfg: &GenConfig, block: usize, node: u64, clbit: usize) -> Vec<Instruction> {
    let key = |role| [block as u64, node, role];
    let mut body = random_subcircuit(
        cfg.n,
        cfg.d_s,
        cfg.p_cx,
        &mut stream(cfg.seed, &key(ROLE_BODY)),
    );
    let q = stream(cfg.seed, &key(ROLE_MEASURE)).gen_range(0..cfg.n);
    body.push(Instruction::measure(q, clbit));
    body
}

/// `level` levels of nesting for one block; level 1 is a shallow block with
/// random if/else bodies, level 0 is empty.
fn nested_block(cfg: &GenConfig, block: usize, node: u64, level: usize) -> Vec<Instruction> {
    if level == 0 {
        return Vec::new();
    }
    let clbit = block * cfg.d + (cfg.d - level);
    let mut out = measured_prefix(cfg, block, node, clbit);
    let (if_body, else_body) = if level == 1 {
        let key = |role| [block as u64, node, role];
        (
            random_subcircuit(
                cfg.n,
                cfg.d_s,
                cfg.p_cx,
                &mut stream(cfg.seed, &key(ROLE_IF)),
            ),
            random_subcircuit(
                cfg.n,
                cfg.d_s,
                cfg.p_cx,
                &mut stream(cfg.seed, &key(ROLE_ELSE)),
            ),
        )
    } else {
        (
            nested_block(cfg, block, 2 * node, level - 1),
            nested_block(cfg, block, 2 * node + 1, level - 1),
        )
    };
    out.push(Instruction::cond(CondExpr::bit(clbit), if_body, else_body));
    out
}

/// Empty: the base of the nested pattern.
pub fn nested_block_base() -> Vec<Instruction> {
    Vec::new()
}

/// `k` shallow blocks: random code, a measurement, then a conditional on
/// that measurement with random if/else bodies.
pub fn gen_pattern1(cfg: &GenConfig) -> Result<Circuit, GenError> {
    cfg.validate()?;
    let flat = GenConfig { d: 1, ..*cfg };
    let instrs = (0..cfg.k)
        .flat_map(|b| nested_block(&flat, b, 1, 1))
        .collect();
    Ok(Circuit::with_instrs(cfg.n, cfg.k, instrs))
}

/// `k` blocks nested `d` deep. Each level measures into its own bit and
/// both branches hold independently drawn copies of the next level down.
pub fn gen_pattern2(cfg: &GenConfig) -> Result<Circuit, GenError> {
    cfg.validate()?;
    let instrs = (0..cfg.k)
        .flat_map(|b| nested_block(cfg, b, 1, cfg.d))
        .collect();
    Ok(Circuit::with_instrs(cfg.n, cfg.k * cfg.d, instrs))
}

/// Two blocks of a 9-qubit code: a stand-in logical op, a one-measurement
/// syndrome, an X correction on [`QEC_CORRECTION_QUBIT`], then a logical Z
/// realized as X on every qubit.
pub fn shor_qec_demo() -> Circuit {
    let mut instrs = vec![
        Instruction::h(0),
        Instruction::measure(0, 0),
        Instruction::cond(
            CondExpr::bit(0),
            vec![Instruction::x(QEC_CORRECTION_QUBIT)],
            vec![],
        ),
    ];
    instrs.extend((0..9).map(Instruction::x));
    Circuit::with_instrs(9, 1, instrs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fragment_size;
    use crate::dependency::{depends_on, irreducible_split};

    fn cfg(n: usize, d_s: usize, k: usize, d: usize, seed: u64) -> GenConfig {
        GenConfig {
            n,
            d_s,
            k,
            d,
            seed,
            p_cx: DEFAULT_P_CX,
        }
    }

    #[test]
    fn single_qubit_single_layer() {
        for seed in 0..50 {
            let c = random_subcircuit(1, 1, 0.3, &mut stream(seed, &[]));
            assert!(c.len() <= 1);
        }
    }

    #[test]
    fn deterministic() {
        let a = random_subcircuit(3, 5, 0.3, &mut stream(42, &[]));
        let b = random_subcircuit(3, 5, 0.3, &mut stream(42, &[]));
        assert_eq!(a, b);
        assert_eq!(
            gen_pattern2(&cfg(3, 4, 3, 2, 9)),
            gen_pattern2(&cfg(3, 4, 3, 2, 9))
        );
    }

    #[test]
    fn layer_depth_bound() {
        for seed in 0..100 {
            let body = random_subcircuit(3, 5, 0.3, &mut stream(seed, &[]));
            assert!(crate::pathmetrics::path_depth(&body) <= 5);
            assert!(body.iter().all(|i| matches!(i, Instruction::Gate { .. })));
        }
    }

    #[test]
    fn cx_frequency_matches_probability() {
        let mut cx = 0usize;
        let layers = 1000 * 5;
        for seed in 0..1000 {
            let body = random_subcircuit(3, 5, 0.3, &mut stream(seed, &[7]));
            cx += body
                .iter()
                .filter(|i| {
                    matches!(
                        i,
                        Instruction::Gate {
                            kind: GateKind::CX,
                            ..
                        }
                    )
                })
                .count();
        }
        let freq = cx as f64 / layers as f64;
        assert!((freq - 0.3).abs() <= 0.05, "freq {freq}");
    }

    #[test]
    fn pattern1_structure() {
        let c = gen_pattern1(&cfg(3, 5, 1, 1, 3)).unwrap();
        let conds: Vec<_> = c
            .instrs
            .iter()
            .filter_map(Instruction::as_conditional)
            .collect();
        let measures = c
            .instrs
            .iter()
            .filter(|i| matches!(i, Instruction::Measure { .. }))
            .count();
        assert_eq!((conds.len(), measures), (1, 1));

        let c = gen_pattern1(&cfg(3, 4, 6, 1, 11)).unwrap();
        assert_eq!(c.num_clbits, 6);
        c.validate().unwrap();
        let mut start = 0;
        for (pos, instr) in c.instrs.iter().enumerate() {
            if let Instruction::Conditional(cdt) = instr {
                assert_eq!(cdt.nesting_depth(), 1);
                let block_prefix = &c.instrs[start..pos];
                assert!(depends_on(&cdt.expr, block_prefix));
                let split = irreducible_split(block_prefix, &cdt.expr).unwrap();
                assert!(split.tail.is_empty());
                assert!(matches!(
                    split.head.last(),
                    Some(Instruction::Measure { .. })
                ));
                start = pos + 1;
            }
        }
    }

    #[test]
    fn pattern1_size_grows_with_k() {
        let sizes: Vec<_> = (1..=10)
            .map(|k| gen_pattern1(&cfg(3, 5, k, 1, 1)).unwrap().program_size())
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
        let small = gen_pattern1(&cfg(3, 5, 4, 1, 1)).unwrap();
        let big = gen_pattern1(&cfg(3, 5, 5, 1, 1)).unwrap();
        assert_eq!(&big.instrs[..small.instrs.len()], &small.instrs[..]);
    }

    #[test]
    fn pattern2_depth_one_matches_pattern1() {
        let c = cfg(3, 5, 4, 1, 21);
        assert_eq!(gen_pattern2(&c).unwrap(), gen_pattern1(&c).unwrap());
        assert!(nested_block_base().is_empty());
    }

    #[test]
    fn pattern2_nesting() {
        let c = gen_pattern2(&cfg(3, 3, 1, 2, 5)).unwrap();
        let top = c.instrs.last().unwrap().as_conditional().unwrap();
        assert_eq!(top.nesting_depth(), 2);
        assert_eq!(top.size(), 4);
        for d in 1..=4 {
            let c = gen_pattern2(&cfg(3, 2, 3, d, 5)).unwrap();
            c.validate().unwrap();
            let tops: Vec<_> = c
                .instrs
                .iter()
                .filter_map(Instruction::as_conditional)
                .collect();
            assert_eq!(tops.len(), 3);
            assert!(tops.iter().all(|t| t.nesting_depth() == d));
        }
        // Branches are drawn independently.
        let c = gen_pattern2(&cfg(3, 5, 1, 2, 5)).unwrap();
        let top = c.instrs.last().unwrap().as_conditional().unwrap();
        assert_ne!(top.if_body, top.else_body);
        assert!(fragment_size(&top.if_body) > 0);
    }

    #[test]
    fn invalid_configs() {
        assert!(gen_pattern1(&cfg(0, 5, 1, 1, 0)).is_err());
        assert!(gen_pattern1(&cfg(3, 0, 1, 1, 0)).is_err());
        assert!(gen_pattern1(&cfg(3, 5, 0, 1, 0)).is_err());
        assert!(gen_pattern2(&cfg(3, 5, 1, 0, 0)).is_err());
        let mut c = cfg(3, 5, 1, 1, 0);
        c.p_cx = 1.5;
        assert!(gen_pattern1(&c).is_err());
    }

    #[test]
    fn qec_demo_shape() {
        let c = shor_qec_demo();
        c.validate().unwrap();
        assert_eq!(c.num_qubits, 9);
        assert_eq!(c.count_conditionals(), 1);
    }
}
