//! Command-line front end: parse .rg files, run the exact oracles and the
//! certificate pipeline, emit certificates and traces, and drive the
//! stress harness.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse or contract
//! error, 3 resource budget exceeded.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scycle::instances::{figure2, k5, pattern_instance, random_instance, RandomSpec, RootMark};
use scycle::oracle::{certificate_to_json, CertificateJson};
use scycle::{
    hit4, is_nice, mu_exact, parse_rg, tau_exact, verify_certificate_json, write_rg, Certificate,
    Mode, OracleError, PatternId, PipelineError, RootedGraph, TauResult, ALL_PATTERNS,
};

/// S-cycle packing/covering toolkit.
///
/// Graphs are read in the line-oriented .rg format: `vertex <name>`,
/// `edge <a> <b>` (repeat for parallels, `edge x x` for a loop) and
/// `root <name>`; `#` starts a comment. Certificates are JSON objects
/// `{"type": "packing"|"hitting", "cycles": [[...]], "vertices": [...],
/// "graph_hash": "..."}` bound to the instance by a hash of its
/// canonical text.
#[derive(Parser)]
#[command(name = "scycle", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Input .rg file; `-` or absent reads standard input.
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum number of vertex-disjoint S-cycles, capped.
    Mu {
        #[command(flatten)]
        input: InputArg,
        /// Cap on the packing search (1..=3).
        #[arg(long, default_value_t = 2)]
        cap: usize,
        /// Write the packing certificate JSON here.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Minimum size of an S-cycle hitting set, up to a bound.
    Tau {
        #[command(flatten)]
        input: InputArg,
        /// Bound on the covering search (<= 6).
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Write the hitting certificate JSON here.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Produce a certificate: two disjoint S-cycles or a hitting set of
    /// size at most 4.
    Hit4 {
        #[command(flatten)]
        input: InputArg,
        /// strict: fail on any uncovered case; fallback: recover via the
        /// exact oracles.
        #[arg(long, default_value = "fallback")]
        mode: String,
        /// Write the certificate JSON here.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Include the step trace in the certificate and print it.
        #[arg(long)]
        trace: bool,
    },
    /// Check a certificate against its instance.
    Verify {
        #[command(flatten)]
        input: InputArg,
        /// Certificate JSON file.
        #[arg(short = 'c', long = "certificate")]
        certificate: PathBuf,
    },
    /// Emit a bundled instance: figure2, k5, or pattern:NAME.
    Gen {
        /// figure2 | k5 | pattern:NAME (e.g. pattern:K4pp).
        what: String,
        /// Output file; absent writes standard output.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Emit every catalog pattern as a .rg file with an expectation line.
    Catalog {
        /// Output directory.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Cross-validate the pipeline against the oracles on seeded random
    /// instances.
    Stress {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long = "max-n", default_value_t = 10)]
        max_n: usize,
    },
}

enum Failure {
    Verification(String),
    Contract(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Contract(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Contract(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<scycle::GraphError> for Failure {
    fn from(e: scycle::GraphError) -> Self {
        Failure::Contract(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure::Resource(e.to_string()),
            other => Failure::Contract(other.to_string()),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Oracle(OracleError::BudgetExceeded { .. }) => {
                Failure::Resource(e.to_string())
            }
            PipelineError::StructureViolation { .. } => Failure::Verification(e.to_string()),
            other => Failure::Contract(other.to_string()),
        }
    }
}

fn read_graph(arg: &InputArg) -> Result<RootedGraph, Failure> {
    let text = match &arg.input {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| Failure::Contract(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Contract(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(parse_rg(&text)?)
}

fn emit_certificate(
    g: &RootedGraph,
    cert: &Certificate,
    trace: Option<Vec<String>>,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let json = certificate_to_json(g, cert, trace);
    let text = serde_json::to_string_pretty(&json)
        .map_err(|e| Failure::Contract(format!("serialize: {e}")))?;
    match out {
        Some(p) => fs::write(p, text.as_bytes())
            .map_err(|e| Failure::Contract(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pattern_arg(name: &str) -> Result<PatternId, Failure> {
    PatternId::from_name(name)
        .ok_or_else(|| Failure::Contract(format!("unknown pattern {name}; see `catalog`")))
}

/// Default pattern instance for `gen`: every certifying path of length 2
/// with a root in its interior, so the union is an S-cycle subdivision.
fn default_instance(pattern: PatternId) -> Result<RootedGraph, Failure> {
    let lengths = vec![2usize; pattern.edge_count()];
    let marks: Vec<RootMark> = (0..pattern.edge_count())
        .map(|e| RootMark::OnEdge { edge: e, offset: 1 })
        .collect();
    let (g, _) = pattern_instance(pattern, &lengths, &marks)
        .map_err(|e| Failure::Contract(e.to_string()))?;
    Ok(g)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Mu { input, cap, out } => {
            let g = read_graph(&input)?;
            let (mu, pack) = mu_exact(&g, cap)?;
            println!("{mu}");
            emit_certificate(&g, &Certificate::Packing(pack), None, &out)
        }
        Command::Tau { input, bound, out } => {
            let g = read_graph(&input)?;
            match tau_exact(&g, bound)? {
                TauResult::Exact(tau, hit) => {
                    println!("{tau}");
                    emit_certificate(&g, &Certificate::Hitting(hit), None, &out)
                }
                TauResult::ExceedsBound => {
                    println!("exceeds bound");
                    Ok(())
                }
            }
        }
        Command::Hit4 {
            input,
            mode,
            out,
            trace,
        } => {
            let g = read_graph(&input)?;
            let mode = Mode::parse(&mode)
                .ok_or_else(|| Failure::Contract(format!("unknown mode {mode}")))?;
            let run = hit4(&g, mode)?;
            match &run.certificate {
                Certificate::Hitting(h) => println!("hitting size={}", h.vertices.len()),
                Certificate::Packing(p) => println!("packing cycles={}", p.cycles.len()),
            }
            if trace {
                for line in &run.trace {
                    eprintln!("{line}");
                }
            }
            let trace_field = trace.then_some(run.trace.clone());
            emit_certificate(&g, &run.certificate, trace_field, &out)
        }
        Command::Verify { input, certificate } => {
            let g = read_graph(&input)?;
            let text = fs::read_to_string(&certificate)
                .map_err(|e| Failure::Contract(format!("{}: {e}", certificate.display())))?;
            let json: CertificateJson = serde_json::from_str(&text)
                .map_err(|e| Failure::Contract(format!("certificate JSON: {e}")))?;
            match verify_certificate_json(&g, &json) {
                Ok(()) => {
                    println!("valid");
                    Ok(())
                }
                Err(diag) => Err(Failure::Verification(diag)),
            }
        }
        Command::Gen { what, out } => {
            let g = match what.as_str() {
                "figure2" => figure2(),
                "k5" => k5(),
                other => match other.strip_prefix("pattern:") {
                    Some(name) => default_instance(pattern_arg(name)?)?,
                    None => {
                        return Err(Failure::Contract(format!(
                            "unknown instance {other}; use figure2, k5 or pattern:NAME"
                        )))
                    }
                },
            };
            let text = write_rg(&g);
            match out {
                Some(p) => fs::write(&p, text.as_bytes())
                    .map_err(|e| Failure::Contract(format!("{}: {e}", p.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Catalog { out } => {
            fs::create_dir_all(&out)
                .map_err(|e| Failure::Contract(format!("{}: {e}", out.display())))?;
            for p in ALL_PATTERNS {
                if p == PatternId::Loop1 {
                    continue; // internal seed shape, not part of the catalog
                }
                let nice = is_nice(p)?;
                let g = p.to_graph();
                let text = format!(
                    "# expects |V|={} |E|={} nice={}\n{}",
                    p.vertex_count(),
                    p.edge_count(),
                    nice,
                    write_rg(&g)
                );
                let path = out.join(format!("{}.rg", p.name()));
                fs::write(&path, text.as_bytes())
                    .map_err(|e| Failure::Contract(format!("{}: {e}", path.display())))?;
            }
            println!("wrote {} patterns to {}", ALL_PATTERNS.len() - 1, out.display());
            Ok(())
        }
        Command::Stress { seed, count, max_n } => stress(seed, count, max_n),
    }
}

fn stress(seed: u64, count: u64, max_n: usize) -> Result<(), Failure> {
    let mut mu_hist = [0usize; 3];
    let mut hits = 0usize;
    let mut packs = 0usize;
    let mut violations = 0usize;
    let mut mismatches = 0usize;
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let n = 3 + (s as usize * 7) % max_n.saturating_sub(2).max(1);
        let m = (s as usize * 13) % (2 * n + 1);
        let mut spec = RandomSpec::new(s, n, m);
        spec.root_density = 0.25 + 0.5 * ((s % 5) as f64) / 4.0;
        let g = random_instance(&spec);
        let (mu, _) = mu_exact(&g, 2)?;
        mu_hist[mu] += 1;
        if mu <= 1
            && hit4(&g, Mode::Strict).is_err() {
                violations += 1;
            }
        match hit4(&g, Mode::Fallback) {
            Ok(run) => {
                let ok = match (&run.certificate, mu) {
                    (Certificate::Hitting(h), 0 | 1) => {
                        hits += 1;
                        h.vertices.len() <= 4
                    }
                    (Certificate::Packing(_), 2) => {
                        packs += 1;
                        true
                    }
                    _ => false,
                };
                if !ok || scycle::verify_certificate(&g, &run.certificate).is_err() {
                    mismatches += 1;
                    eprintln!("mismatch at instance {i} (seed {s})");
                }
            }
            Err(e) => {
                mismatches += 1;
                eprintln!("pipeline failure at instance {i} (seed {s}): {e}");
            }
        }
    }
    println!("instances:            {count}");
    println!("mu histogram:         0: {}  1: {}  >=2: {}", mu_hist[0], mu_hist[1], mu_hist[2]);
    println!("hitting certificates: {hits}");
    println!("packing certificates: {packs}");
    println!("strict violations:    {violations}");
    println!("mismatches:           {mismatches}");
    if mismatches == 0 && violations == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{mismatches} mismatches, {violations} violations"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
