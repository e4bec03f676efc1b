use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use plumbkit::arith::{eval_neg_cont_frac, neg_cont_frac, Rational};
use plumbkit::calculus::{
    reduce_to_s3, MoveTrace, ReduceOptions, ReductionVerdict, DEFAULT_BUDGET,
};
use plumbkit::io::{parse_graph, parse_trace, to_dot, write_graph, write_trace};
use plumbkit::report::{self, MuMethod};
use plumbkit::scan::{scan_range, summarize, ScanParams};
use plumbkit::seifert::{brieskorn_seifert, BrieskornTriple};
use plumbkit::{Error, PlumbingGraph};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "plumbkit",
    version,
    about = "Plumbing calculus and Rohlin invariants of Brieskorn spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lattice,
    Plumbing,
    Both,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Negative continued fraction of NUM/DEN (must be below -1).
    #[command(allow_negative_numbers = true)]
    Expand { num: i64, den: i64 },
    /// Seifert invariants of Σ(a1,a2,a3).
    Seifert { a1: i64, a2: i64, a3: i64 },
    /// Star plumbing graph of Σ(a1,a2,a3), in graph-file format.
    Plumb {
        a1: i64,
        a2: i64,
        a3: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinant, signature, Wu class, μ̄ and Rohlin invariant of a graph file.
    Invariants {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Rohlin invariant of Σ(a1,a2,a3).
    Mu {
        a1: i64,
        a2: i64,
        a3: i64,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Search for a blow-down/cancellation sequence reducing a graph to S³.
    Reduce {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the move trace here on success.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Maximum blow-ups per search path.
        #[arg(long, default_value_t = 0)]
        blow_ups: usize,
    },
    /// Scan rs(p+q)² + pq = ±1 over a parameter grid.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, default_value_t = 100)]
        p_bound: i64,
        #[arg(long, default_value_t = 100)]
        q_bound: i64,
        #[arg(long, default_value_t = -20)]
        r_min: i64,
        #[arg(long, default_value_t = 20)]
        r_max: i64,
        #[arg(long, default_value_t = -20)]
        s_min: i64,
        #[arg(long, default_value_t = 20)]
        s_max: i64,
        /// Write every record, one JSON object per line.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Render a graph file as DOT.
    ExportDot { graph: PathBuf },
    /// Replay a trace file and print the graph it ends at.
    ReplayTrace { trace: PathBuf },
    /// Checkable items of the lemma for Σ(5,9,13) and Σ(3,13,23).
    Lemma {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<PlumbingGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Nonempty range with zero removed.
fn nonzero_range(name: &str, lo: i64, hi: i64) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    if lo > hi || (lo == 0 && hi == 0) {
        return Err(Failure::Usage(format!(
            "{name} range [{lo}, {hi}] has no nonzero values"
        )));
    }
    Ok(lo..=hi)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand { num, den } => {
            let x = Rational::new(num, den)?;
            let cf = neg_cont_frac(&x)?;
            debug_assert_eq!(eval_neg_cont_frac(&cf), x);
            println!("{cf}");
        }
        Command::Seifert { a1, a2, a3 } => {
            let t = BrieskornTriple::new(a1, a2, a3)?;
            let s = brieskorn_seifert(&t)?;
            println!("{t}: {s}");
            println!("euler number: {}", s.euler_number());
            let weights: Vec<String> = s.arms().iter().map(|a| a.weight().to_string()).collect();
            println!("arm weights: {}", weights.join(" "));
        }
        Command::Plumb { a1, a2, a3, out } => {
            let t = BrieskornTriple::new(a1, a2, a3)?;
            let s = brieskorn_seifert(&t)?;
            let g = report::plumbing_of(&t)?;
            let header = [format!("Star plumbing of {t}"), format!("Seifert data {s}")];
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let text = plumbkit::io::write_graph_with_header(&g, &header);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Invariants { graph, format } => {
            let g = load_graph(&graph)?;
            let inv = report::invariants(&g);
            match format {
                Format::Text => print!("{}", inv.render()),
                Format::Records => {
                    let wu = inv
                        .wu_class
                        .as_ref()
                        .map(|s| s.iter().map(|v| v.as_str().to_owned()).collect::<Vec<_>>());
                    let line = serde_json::json!({
                        "vertices": inv.vertices,
                        "edges": inv.edges,
                        "determinant": inv.determinant.to_string(),
                        "signature": inv.signature,
                        "wu_class": wu,
                        "mu_bar": inv.mu_bar,
                        "rohlin": inv.rohlin,
                    });
                    println!("{line}");
                }
            }
        }
        Command::Mu { a1, a2, a3, method } => {
            let t = BrieskornTriple::new(a1, a2, a3)?;
            let method = match method {
                Method::Lattice => MuMethod::Lattice,
                Method::Plumbing => MuMethod::Plumbing,
                Method::Both => MuMethod::Both,
            };
            let r = report::mu(&t, method)?;
            println!("{}", r.render());
            if !r.agree() {
                eprintln!("methods disagree on {t}");
                return Err(Failure::Exit(EXIT_DISAGREE));
            }
        }
        Command::Reduce {
            graph,
            budget,
            trace,
            blow_ups,
        } => {
            let g = load_graph(&graph)?;
            let result = reduce_to_s3(
                &g,
                ReduceOptions {
                    budget,
                    max_blow_ups: blow_ups,
                },
            );
            println!("{}", result.verdict);
            match &result.verdict {
                ReductionVerdict::S3 { trace: t } => {
                    println!("moves: {}", t.moves.len());
                    if let Some(path) = trace {
                        write(&path, &write_trace(t))?;
                    }
                }
                ReductionVerdict::Unknown { budget_exhausted } => {
                    println!("visited states: {}", result.visited);
                    println!("budget exhausted: {budget_exhausted}");
                    return Err(Failure::Exit(EXIT_NEGATIVE));
                }
                ReductionVerdict::NotHomologySphere { .. } => {
                    return Err(Failure::Exit(EXIT_NEGATIVE))
                }
            }
        }
        Command::Scan {
            p_bound,
            q_bound,
            r_min,
            r_max,
            s_min,
            s_max,
            out,
            format,
        } => {
            let r_range = nonzero_range("r", r_min, r_max)?;
            let s_range = nonzero_range("s", s_min, s_max)?;
            let params = ScanParams::new(p_bound, q_bound, r_range, s_range)?;
            let records = scan_range(&params);
            let lines: String = records.iter().map(|r| r.to_record_line() + "\n").collect();
            if let Some(path) = out {
                write(&path, &lines)?;
            }
            match format {
                Format::Text => print!(
                    "{}",
                    report::render_scan_summary(&records, &summarize(&records))
                ),
                Format::Records => print!("{lines}"),
            }
        }
        Command::ExportDot { graph } => print!("{}", to_dot(&load_graph(&graph)?)),
        Command::ReplayTrace { trace } => {
            let file = parse_trace(&read(&trace)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", trace.display())))?;
            let t = MoveTrace::from_specs(file.start, &file.moves)?;
            t.replay()?;
            print!("{}", write_graph(&t.end));
            if !t.end.is_empty() {
                return Err(Failure::Exit(EXIT_NEGATIVE));
            }
        }
        Command::Lemma { format } => {
            let entries = report::lemma_report()?;
            match format {
                Format::Text => print!("{}", report::render_lemma(&entries)),
                Format::Records => {
                    for e in &entries {
                        println!("{}", serde_json::to_string(e).expect("entry serializes"));
                    }
                }
            }
            if !entries.iter().all(|e| e.holds()) {
                return Err(Failure::Exit(EXIT_NEGATIVE));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Exit(code)) => ExitCode::from(code),
    }
}
