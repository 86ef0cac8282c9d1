//! Command-line front end. `run` takes the argument list and returns the
//! exit code together with the text for standard output and standard error,
//! so the binary is a thin wrapper and tests can call it directly.
//!
//! Exit codes: 0 when the requested check passes, 1 when it fails, 2 on
//! unreadable input or bad usage.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use cellhom::combinatorics::census;
use cellhom::datasets::{builtin_chains, reconcile, resolve, Builtin, BUILTIN_CHAINS};
use cellhom::filtration::{e1_page, type_subcomplex_check, Filtration, FiltrationError};
use cellhom::{parse_chains, parse_chc, Chain, ChainComplex, ListCheck};
use clap::{Parser, Subcommand, ValueEnum};

const BUILTIN: &str = "builtin:";

#[derive(Debug, Parser)]
#[command(
    name = "cellhom",
    about = "Check mod-2 cellular chain complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that consecutive boundary maps compose to zero
    Verify { file: String },
    /// Betti numbers in every degree
    Betti { file: String },
    /// Euler characteristic from the cell counts
    Euler { file: String },
    /// Cells of first and second type per degree
    Census { file: String },
    /// Check that chains are cycles whose classes form a homology basis
    Cycles {
        file: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        chains: String,
    },
    /// Dimension of the cycle space, its basis, or a check of a given basis
    Kernel {
        file: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        chains: Option<String>,
    },
    /// Filtration levels and the first page of the spectral sequence
    Filtration {
        file: String,
        #[arg(long, value_enum)]
        key: Key,
    },
    /// Incidences on which two encodings of a complex disagree
    Reconcile { file_a: String, file_b: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Key {
    Mult,
    Type,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An error that stops a command, with the exit code to report.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = String::new();
    match execute(cli.command, &mut out) {
        Ok(code) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: out,
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Loads `builtin:<selector>` or a `.chc` file.
fn load_complex(source: &str) -> Result<ChainComplex, Failure> {
    if let Some(sel) = source.strip_prefix(BUILTIN) {
        let b: Builtin = sel.parse().map_err(|e| usage(format!("{e}")))?;
        return b.load().map_err(|e| usage(format!("{source}: {e}")));
    }
    let text = std::fs::read_to_string(PathBuf::from(source))
        .map_err(|e| usage(format!("{source}: {e}")))?;
    parse_chc(&text).map_err(|e| usage(format!("{source}: {e}")))
}

/// Loads `builtin:<name>` or a chains file, keeping chains of `degree`.
fn load_chains(source: &str, degree: usize) -> Result<Vec<(usize, Chain)>, Failure> {
    let text = if let Some(name) = source.strip_prefix(BUILTIN) {
        builtin_chains(name)
            .ok_or_else(|| {
                let known: Vec<&str> = BUILTIN_CHAINS.iter().map(|(n, _)| *n).collect();
                usage(format!(
                    "unknown built-in chains {name:?} (known: {})",
                    known.join(", ")
                ))
            })?
            .to_string()
    } else {
        std::fs::read_to_string(PathBuf::from(source))
            .map_err(|e| usage(format!("{source}: {e}")))?
    };
    let entries = parse_chains(&text).map_err(|e| usage(format!("{source}: {e}")))?;
    Ok(entries
        .into_iter()
        .filter(|e| e.chain.degree == degree)
        .map(|e| (e.line, e.chain))
        .collect())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list_positions(v: &[usize], lines: &[usize]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    let parts: Vec<String> = v.iter().map(|&k| format!("line {}", lines[k])).collect();
    parts.join(",")
}

fn write_list_check(out: &mut String, c: &ListCheck, lines: &[usize], basis_label: &str) {
    let _ = writeln!(out, "count\t{}", c.count);
    let _ = writeln!(out, "expected\t{}", c.expected);
    let _ = writeln!(out, "non_cycles\t{}", list_positions(&c.non_cycles, lines));
    let _ = writeln!(out, "dependent\t{}", list_positions(&c.dependent, lines));
    let _ = writeln!(out, "independent\t{}", yes_no(c.dependent.is_empty()));
    let _ = writeln!(out, "{basis_label}\t{}", yes_no(c.passed()));
}

fn complex_error(e: cellhom::ComplexError) -> Failure {
    match e {
        cellhom::ComplexError::Invalid(_) => failed(e.to_string()),
        _ => usage(e.to_string()),
    }
}

fn execute(cmd: Command, out: &mut String) -> Result<i32, Failure> {
    match cmd {
        Command::Verify { file } => {
            let x = load_complex(&file)?;
            let v = x.validate();
            let _ = writeln!(out, "complex\t{}", x.name());
            let _ = writeln!(out, "cells\t{}", x.total_cells());
            let _ = writeln!(out, "violations\t{}", v.len());
            for e in &v {
                let _ = writeln!(out, "violation\t{}\t{}\t{}", e.degree, e.higher, e.lower);
            }
            Ok(if v.is_empty() { 0 } else { 1 })
        }
        Command::Betti { file } => {
            let x = load_complex(&file)?;
            let r = x.betti().map_err(complex_error)?;
            for (d, b) in r.betti_numbers().iter().enumerate() {
                let _ = writeln!(out, "H_{d}\t{b}");
            }
            Ok(0)
        }
        Command::Euler { file } => {
            let x = load_complex(&file)?;
            let _ = writeln!(out, "euler\t{}", x.euler());
            Ok(0)
        }
        Command::Census { file } => {
            let x = load_complex(&file)?;
            let c = census(&x);
            let _ = writeln!(out, "dim\tfirst\tsecond\ttotal");
            for d in 0..=x.max_degree() {
                let _ = writeln!(out, "{d}\t{}\t{}\t{}", c.first[d], c.second[d], c.total(d));
            }
            let _ = writeln!(
                out,
                "all\t{}\t{}\t{}",
                c.first_total(),
                c.second_total(),
                x.total_cells()
            );
            Ok(0)
        }
        Command::Cycles {
            file,
            degree,
            chains,
        } => {
            let x = load_complex(&file)?;
            let list = load_chains(&chains, degree)?;
            for (line, c) in &list {
                let cycle = x.is_cycle(c).map_err(complex_error)?;
                let _ = writeln!(out, "chain\tline {line}\tcycle={}\t{c}", yes_no(cycle));
            }
            let lines: Vec<usize> = list.iter().map(|(l, _)| *l).collect();
            let chains: Vec<Chain> = list.into_iter().map(|(_, c)| c).collect();
            let check = x
                .check_homology_basis(degree, &chains)
                .map_err(complex_error)?;
            let _ = writeln!(out, "degree\t{degree}");
            write_list_check(out, &check, &lines, "homology_basis");
            Ok(if check.passed() { 0 } else { 1 })
        }
        Command::Kernel {
            file,
            degree,
            chains,
        } => {
            let x = load_complex(&file)?;
            if degree > x.max_degree() {
                return Err(usage(format!(
                    "degree {degree} exceeds the top degree {}",
                    x.max_degree()
                )));
            }
            let _ = writeln!(out, "degree\t{degree}");
            let _ = writeln!(out, "dim_ker\t{}", x.cycle_rank(degree));
            match chains {
                None => {
                    for (k, c) in x.cycle_basis(degree).iter().enumerate() {
                        let _ = writeln!(out, "basis\t{}\t{c}", k + 1);
                    }
                    Ok(0)
                }
                Some(source) => {
                    let list = load_chains(&source, degree)?;
                    let lines: Vec<usize> = list.iter().map(|(l, _)| *l).collect();
                    let chains: Vec<Chain> = list.into_iter().map(|(_, c)| c).collect();
                    let check = x
                        .check_kernel_list(degree, &chains)
                        .map_err(complex_error)?;
                    write_list_check(out, &check, &lines, "kernel_basis");
                    Ok(if check.passed() { 0 } else { 1 })
                }
            }
        }
        Command::Filtration { file, key } => {
            let x = load_complex(&file)?;
            let closed = type_subcomplex_check(&x);
            let f = match key {
                Key::Mult => Filtration::by_multiplicity(x),
                Key::Type => Filtration::by_type(x),
            };
            let f = match f {
                Ok(f) => f,
                Err(FiltrationError::NotMonotone(v)) => {
                    let _ = writeln!(out, "monotone_violations\t{}", v.len());
                    for (h, l) in &v {
                        let _ = writeln!(out, "violation\t{h}\t{l}");
                    }
                    return Err(failed("the key increases along the boundary"));
                }
                Err(e) => return Err(usage(e.to_string())),
            };
            let levels: Vec<String> = f.levels().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "levels\t{}", levels.join(","));
            let _ = writeln!(out, "monotone_violations\t0");
            for (p, _) in f.levels().iter().enumerate() {
                let _ = writeln!(out, "stage\t{p}\t{}", f.stage(p).total_cells());
            }
            let page = e1_page(&f).map_err(|e| match e {
                FiltrationError::Complex(c) => complex_error(c),
                other => usage(other.to_string()),
            })?;
            let _ = writeln!(out, "E1\tp\tq\tdim");
            for ((p, q), v) in page.nonzero() {
                let _ = writeln!(out, "E1\t{p}\t{q}\t{v}");
            }
            let _ = writeln!(out, "E1_euler\t{}", page.euler());
            let _ = writeln!(out, "second_type_closed\t{}", yes_no(closed));
            Ok(0)
        }
        Command::Reconcile { file_a, file_b } => {
            let a = load_complex(&file_a)?;
            let b = load_complex(&file_b)?;
            let d = reconcile(&a, &b).map_err(|e| usage(e.to_string()))?;
            let _ = writeln!(
                out,
                "degree\thigher\tlower\tpresent_in\tresolution\tambiguous"
            );
            if d.is_empty() {
                return Ok(0);
            }
            match resolve(&a, &b, &d) {
                Ok(r) => {
                    for e in &r.entries {
                        let x = &e.discrepancy;
                        let _ = writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}",
                            x.degree,
                            x.higher,
                            x.lower,
                            x.present_in,
                            if e.present { "present" } else { "absent" },
                            yes_no(e.ambiguous)
                        );
                    }
                    Ok(1)
                }
                Err(err) => {
                    for x in &d {
                        let _ = writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t-\t-",
                            x.degree, x.higher, x.lower, x.present_in
                        );
                    }
                    Err(failed(err.to_string()))
                }
            }
        }
    }
}
