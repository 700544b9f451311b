// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Circuits are read and written as `dyncirc-v1`
//! JSON; `-` or a missing path means standard input / output.
//!
//! Exit codes: 0 success, 1 semantic failure, 2 usage or I/O error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dyncirc::harness::{self, ExperimentConfig, Pattern};
use dyncirc::json::{from_json, to_json_pretty};
use dyncirc::randgen::{gen_pattern1, gen_pattern2, shor_qec_demo, GenConfig, DEFAULT_P_CX};
use dyncirc::{
    equivalent, metrics, optimize, optimize_pipeline, rec_branch_expand, Circuit, ExpandConfig,
};

#[derive(Parser)]
#[command(
    name = "dyncirc",
    version,
    about = "Branch expansion for dynamic quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenPattern {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "qec")]
    Qec,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpPattern {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark circuit.
    Generate {
        #[arg(long, value_enum)]
        pattern: GenPattern,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "ds", default_value_t = 5)]
        d_s: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "p-cx", default_value_t = DEFAULT_P_CX)]
        p_cx: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recursive branch expansion.
    Expand {
        input: Option<PathBuf>,
        #[arg(long = "depth-limit")]
        depth_limit: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Peephole gate cancellation.
    Optimize {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Expansion followed by optimization.
    Pipeline {
        input: Option<PathBuf>,
        #[arg(long = "depth-limit")]
        depth_limit: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Path metrics as one line of JSON.
    Metrics { input: Option<PathBuf> },
    /// Equivalence check by ensemble simulation.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Baseline versus preprocessed sweep over block counts.
    Experiment {
        #[arg(long, value_enum)]
        pattern: ExpPattern,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "ds", default_value_t = 5)]
        d_s: usize,
        #[arg(long = "k-min", default_value_t = 1)]
        k_min: usize,
        #[arg(long = "k-max", default_value_t = 20)]
        k_max: usize,
        #[arg(long, default_value_t = 25)]
        seeds: usize,
        #[arg(long = "seed-base", default_value_t = 0)]
        seed_base: u64,
        #[arg(long = "depth-limits", value_delimiter = ',', default_value = "1")]
        depth_limits: Vec<u32>,
        /// Nesting depth of pattern 2 blocks.
        #[arg(long = "nesting-d", default_value_t = 4)]
        nesting_d: usize,
        #[arg(long = "p-cx", default_value_t = DEFAULT_P_CX)]
        p_cx: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write per-seed metrics to raw.csv.
        #[arg(long = "dump-raw")]
        dump_raw: bool,
    },
    /// Expansion demo on a 9-qubit error-correction block pair.
    DemoQec {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the original, baseline and pipeline circuits here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit 1.
    Semantic(String),
    /// Exit 2.
    Usage(String),
}

type CliResult = Result<(), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_circuit(path: Option<&Path>) -> Result<Circuit, Failure> {
    let text = match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(usage)?;
            s
        }
    };
    from_json(&text).map_err(usage)
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(usage)
        }
    }
}

fn write_circuit(path: Option<&Path>, c: &Circuit) -> CliResult {
    let mut text = to_json_pretty(c);
    text.push('\n');
    write_text(path, &text)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate {
            pattern,
            n,
            d_s,
            k,
            d,
            seed,
            p_cx,
            output,
        } => {
            let cfg = GenConfig {
                n,
                d_s,
                k,
                d,
                seed,
                p_cx,
            };
            let c = match pattern {
                GenPattern::One => gen_pattern1(&cfg).map_err(usage)?,
                GenPattern::Two => gen_pattern2(&cfg).map_err(usage)?,
                GenPattern::Qec => shor_qec_demo(),
            };
            write_circuit(output.as_deref(), &c)
        }
        Command::Expand {
            input,
            depth_limit,
            output,
        } => {
            let c = read_circuit(input.as_deref())?;
            let out = rec_branch_expand(&c, ExpandConfig::new(depth_limit)).map_err(usage)?;
            write_circuit(output.as_deref(), &out)
        }
        Command::Optimize { input, output } => {
            let c = read_circuit(input.as_deref())?;
            write_circuit(output.as_deref(), &optimize(&c))
        }
        Command::Pipeline {
            input,
            depth_limit,
            output,
        } => {
            let c = read_circuit(input.as_deref())?;
            let out = optimize_pipeline(&c, ExpandConfig::new(depth_limit)).map_err(usage)?;
            write_circuit(output.as_deref(), &out)
        }
        Command::Metrics { input } => {
            let c = read_circuit(input.as_deref())?;
            write_text(None, &format!("{}\n", metrics(&c).to_json_line()))
        }
        Command::Verify { a, b, tol } => {
            let ca = read_circuit(Some(&a))?;
            let cb = read_circuit(Some(&b))?;
            let eq = equivalent(&ca, &cb, tol).map_err(usage)?;
            write_text(
                None,
                &format!("{}\n", json!({ "equivalent": eq, "tol": tol })),
            )?;
            if eq {
                Ok(())
            } else {
                Err(Failure::Semantic(String::new()))
            }
        }
        Command::Experiment {
            pattern,
            n,
            d_s,
            k_min,
            k_max,
            seeds,
            seed_base,
            depth_limits,
            nesting_d,
            p_cx,
            out,
            dump_raw,
        } => {
            if k_min < 1 || k_min > k_max {
                return Err(usage("need 1 <= k-min <= k-max"));
            }
            let cfg = ExperimentConfig {
                pattern: match pattern {
                    ExpPattern::One => Pattern::Shallow,
                    ExpPattern::Two => Pattern::Nested,
                },
                n,
                d_s,
                k_values: (k_min..=k_max).collect(),
                seeds_per_point: seeds,
                seed_base,
                depth_limits,
                nesting_d,
                p_cx,
            };
            fs::create_dir_all(&out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            let started = Instant::now();
            let outcome = harness::run_experiment_raw(&cfg).map_err(usage)?;
            eprintln!(
                "experiment: {} rows in {:.2}s",
                outcome.rows.len(),
                started.elapsed().as_secs_f64()
            );
            let csv_path = out.join("results.csv");
            harness::write_csv(&outcome.rows, &csv_path).map_err(usage)?;
            for p in harness::plot_svg(&outcome.rows, &out).map_err(usage)? {
                eprintln!("wrote {}", p.display());
            }
            if dump_raw {
                harness::write_raw_csv(cfg.pattern, &outcome.raw, &out.join("raw.csv"))
                    .map_err(usage)?;
            }
            eprintln!("wrote {}", csv_path.display());
            Ok(())
        }
        Command::DemoQec { tol, emit } => {
            let report = harness::run_qec_demo(tol).map_err(usage)?;
            if let Some(dir) = emit {
                fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                write_circuit(Some(&dir.join("qec_original.json")), &shor_qec_demo())?;
                write_circuit(Some(&dir.join("qec_baseline.json")), &report.baseline)?;
                write_circuit(Some(&dir.join("qec_pipeline.json")), &report.pipeline)?;
            }
            let line = serde_json::to_string(&report).map_err(usage)?;
            write_text(None, &format!("{line}\n"))?;
            let reduced = report.baseline_if_gate_count == report.pipeline_if_gate_count + 2
                && report.baseline_else_gate_count == report.pipeline_else_gate_count;
            if report.equivalent && reduced {
                Ok(())
            } else {
                Err(Failure::Semantic(
                    "demo did not reproduce the expected cancellation".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
