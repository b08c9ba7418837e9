use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use immersion_core::generate::{alpha_critical_reduce, Generator};
use immersion_core::graph6;
use immersion_core::harness::{
    run_sweep, Report, RunStatus, Sweep, SweepConfig, Universe, MAX_SWEEP_ORDER,
};
use immersion_core::immersion::{
    find_target_immersion, make_target, verify_certificate, Budget, SearchOutcome, TargetSpec,
};
use immersion_core::invariants::{
    chromatic_number_alpha2, clique_number, has_induced_c4, independence_number, is_alpha_critical,
};
use immersion_core::proof::{audit_proof_with, AuditOptions};
use immersion_core::Graph;
use serde::Serialize;

const FORMAT_VERSION: u32 = 1;

/// Immersion search, alpha <= 2 graph generation and exhaustive verification sweeps.
#[derive(Parser)]
#[command(name = "immersion", version)]
struct Cli {
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for random universes; echoed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search-node budget per immersion query.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget per immersion query, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    /// Run sweeps over the graphs of this graph6 file instead of an enumerated range.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Record per-graph timings in sweep reports (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Range {
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 9)]
    n_max: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Emit graph6 lines: graphs with alpha <= 2 on N vertices, up to isomorphism.
    Gen {
        #[arg(long)]
        n: usize,
        /// Only graphs with alpha exactly 2.
        #[arg(long)]
        exact_alpha2: bool,
        /// Emit the triangle-free graphs instead (the complements).
        #[arg(long, conflicts_with = "exact_alpha2")]
        triangle_free: bool,
        /// Emit this many seeded random graphs with alpha <= 2 instead of enumerating.
        #[arg(long, conflicts_with = "triangle_free")]
        random: Option<usize>,
    },
    /// Invariant report for each graph of a graph6 file (stdin if omitted).
    Alpha { file: Option<PathBuf> },
    /// Search for an immersion of a target in one graph and print the certificate.
    Immerse {
        graph6: String,
        /// kst:S,T | clique:K | kll:L,T | g6:<line>
        #[arg(long)]
        target: TargetSpec,
    },
    /// K_{l, ceil(n/2) - l} in every alpha = 2 graph, for every l with 2l <= ceil(n/2).
    #[command(name = "verify-theorem4")]
    VerifyTheorem4 {
        #[command(flatten)]
        range: Range,
    },
    /// K_{ceil(n/2)} in every alpha <= 2 graph without an induced C4.
    #[command(name = "verify-c4free")]
    VerifyC4free {
        #[command(flatten)]
        range: Range,
    },
    /// Clique-topped K^l_{l, chi - l} in every alpha = 2 graph with 2l <= chi.
    #[command(name = "probe-kll")]
    ProbeKll {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        range: Range,
    },
    /// Structural audit over a range (all valid l unless --ell), or of one graph.
    Audit {
        #[arg(long)]
        ell: Option<usize>,
        #[command(flatten)]
        range: Range,
        /// Audit this graph6 graph only and print every step.
        #[arg(long)]
        graph: Option<String>,
        /// With --graph, evaluate every step instead of stopping at the first violation.
        #[arg(long, requires = "graph")]
        full: bool,
    },
    /// Delete edges while alpha stays the same; one graph6 line out per line in.
    #[command(name = "reduce-critical")]
    ReduceCritical { file: Option<PathBuf> },
}

enum Failure {
    Usage(String),
    Io(String),
}

type Outcome = Result<ExitCode, Failure>;

const VIOLATION: u8 = 1;
const USAGE: u8 = 2;
const UNDECIDED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let budget = Budget {
        max_nodes: cli.budget_nodes,
        max_millis: cli.budget_ms,
    };
    let cfg = SweepConfig {
        budget,
        seed: cli.seed,
        jobs: cli.jobs,
        timings: cli.timings,
    };
    match &cli.command {
        Command::Gen {
            n,
            exact_alpha2,
            triangle_free,
            random,
        } => {
            let graphs = match random {
                Some(count) => Universe::random(*n, *count, cli.seed).graphs,
                None => {
                    let gen = Generator::with_max_order(MAX_SWEEP_ORDER);
                    let out = if *triangle_free {
                        gen.triangle_free(*n)
                    } else {
                        gen.alpha2(*n, *exact_alpha2)
                    };
                    out.map_err(|e| Failure::Usage(e.to_string()))?
                }
            };
            emit(cli, &encode_all(&graphs)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Alpha { file } => {
            let graphs = read_graphs(file.as_ref())?;
            let rows: Vec<Invariants> = graphs.iter().map(invariants).collect();
            let text = match cli.format {
                Format::Json => json(&rows),
                Format::Text => rows.iter().map(Invariants::line).collect(),
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Immerse {
            graph6: line,
            target,
        } => immerse(cli, line, target, budget),
        Command::VerifyTheorem4 { range } => sweep(cli, Sweep::Theorem4, range, true, &cfg),
        Command::VerifyC4free { range } => sweep(cli, Sweep::C4Free, range, false, &cfg),
        Command::ProbeKll { ell, range } => {
            if *ell == 0 {
                return Err(Failure::Usage("--ell must be positive".into()));
            }
            sweep(cli, Sweep::Kll { ell: *ell }, range, true, &cfg)
        }
        Command::Audit {
            ell,
            range,
            graph,
            full,
        } => match graph {
            None => {
                if *ell == Some(0) {
                    return Err(Failure::Usage("--ell must be positive".into()));
                }
                sweep(cli, Sweep::Audit { ell: *ell }, range, true, &cfg)
            }
            Some(line) => {
                let g = parse_graph(line)?;
                let ell = ell.ok_or_else(|| Failure::Usage("--graph needs --ell".into()))?;
                let audit = audit_proof_with(
                    &g,
                    ell,
                    AuditOptions {
                        full: *full,
                        budget,
                    },
                )
                .map_err(|e| Failure::Usage(e.to_string()))?;
                let text = match cli.format {
                    Format::Json => json(&audit),
                    Format::Text => {
                        let mut s = String::new();
                        for v in &audit.verdicts {
                            s.push_str(&format!(
                                "{}: {}\n",
                                v.step.name(),
                                serde_json::to_string(&v.verdict).unwrap()
                            ));
                        }
                        s
                    }
                };
                emit(cli, &text)?;
                Ok(if audit.is_anomaly() {
                    ExitCode::from(VIOLATION)
                } else {
                    ExitCode::SUCCESS
                })
            }
        },
        Command::ReduceCritical { file } => {
            let graphs: Vec<Graph> = read_graphs(file.as_ref())?
                .iter()
                .map(alpha_critical_reduce)
                .collect();
            emit(cli, &encode_all(&graphs)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sweep(cli: &Cli, sweep: Sweep, range: &Range, exact: bool, cfg: &SweepConfig) -> Outcome {
    let universe = match &cli.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Universe::from_graph6(&path.display().to_string(), &text)
                .map_err(|(line, e)| Failure::Usage(format!("{}:{line}: {e}", path.display())))?
        }
        None => {
            if range.n_min == 0 || range.n_min > range.n_max {
                return Err(Failure::Usage(format!(
                    "empty range {}..={}",
                    range.n_min, range.n_max
                )));
            }
            Universe::enumerated(range.n_min, range.n_max, exact)
                .map_err(|e| Failure::Usage(e.to_string()))?
        }
    };
    let report = run_sweep(sweep, &universe, cfg);
    emit(cli, &render(cli, &report))?;
    Ok(match report.status {
        RunStatus::Verified => ExitCode::SUCCESS,
        RunStatus::Violated => ExitCode::from(VIOLATION),
        RunStatus::Undecided => ExitCode::from(UNDECIDED),
    })
}

fn render(cli: &Cli, report: &Report) -> String {
    match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}

#[derive(Serialize)]
struct ImmerseOutput<'a> {
    format_version: u32,
    graph6: &'a str,
    target: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a immersion_core::immersion::ImmersionCertificate>,
}

fn immerse(cli: &Cli, line: &str, target: &TargetSpec, budget: Budget) -> Outcome {
    let g = parse_graph(line)?;
    let h = make_target(target).map_err(|e| Failure::Usage(e.to_string()))?;
    let outcome =
        find_target_immersion(&g, target, budget).map_err(|e| Failure::Usage(e.to_string()))?;
    let (status, code) = match &outcome {
        SearchOutcome::Found(c) => {
            verify_certificate(&g, &h, c).expect("solver certificates verify");
            ("found", ExitCode::SUCCESS)
        }
        SearchOutcome::NotFound => ("not_found", ExitCode::from(VIOLATION)),
        SearchOutcome::Undecided => ("undecided", ExitCode::from(UNDECIDED)),
    };
    let cert = outcome.certificate();
    let out = ImmerseOutput {
        format_version: FORMAT_VERSION,
        graph6: line.trim(),
        target: target.to_string(),
        status,
        digest: cert.map(|c| c.digest()),
        certificate: cert,
    };
    let text = match cli.format {
        Format::Json => json(&out),
        Format::Text => {
            let mut s = format!("{} in {}: {status}\n", out.target, out.graph6);
            if let Some(c) = cert {
                s.push_str(&format!("branch: {:?}\n", c.branch));
                for p in &c.paths {
                    s.push_str(&format!("{:?}: {:?}\n", p.h_edge, p.walk));
                }
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(code)
}

#[derive(Serialize)]
struct Invariants {
    graph6: String,
    n: usize,
    edges: usize,
    alpha: usize,
    omega: usize,
    /// Only computed when alpha <= 2.
    chi: Option<usize>,
    max_degree: usize,
    induced_c4: bool,
    alpha_critical: bool,
}

impl Invariants {
    fn line(&self) -> String {
        let chi = self.chi.map_or("-".to_string(), |c| c.to_string());
        format!(
            "{} n={} m={} alpha={} omega={} chi={chi} maxdeg={} induced_c4={} alpha_critical={}\n",
            self.graph6,
            self.n,
            self.edges,
            self.alpha,
            self.omega,
            self.max_degree,
            self.induced_c4,
            self.alpha_critical
        )
    }
}

fn invariants(g: &Graph) -> Invariants {
    Invariants {
        graph6: graph6::encode(g).expect("decoded graphs re-encode"),
        n: g.order(),
        edges: g.size(),
        alpha: independence_number(g),
        omega: clique_number(g),
        chi: chromatic_number_alpha2(g).ok(),
        max_degree: g.max_degree(),
        induced_c4: has_induced_c4(g),
        alpha_critical: is_alpha_critical(g),
    }
}

fn parse_graph(line: &str) -> Result<Graph, Failure> {
    graph6::decode(line.trim()).map_err(|e| Failure::Usage(format!("invalid graph6 {line:?}: {e}")))
}

fn read_graphs(file: Option<&PathBuf>) -> Result<Vec<Graph>, Failure> {
    let (name, text) = match file {
        Some(p) => (
            p.display().to_string(),
            fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        ),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(e.to_string()))?;
            ("<stdin>".to_string(), s)
        }
    };
    graph6::decode_lines(&text).map_err(|(line, e)| Failure::Usage(format!("{name}:{line}: {e}")))
}

fn encode_all(graphs: &[Graph]) -> Result<String, Failure> {
    graph6::encode_lines(graphs).map_err(|e| Failure::Usage(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}
