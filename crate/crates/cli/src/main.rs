//! `agcalc`: invert formal maps, verify the symbol identities, and run the
//! nilpotency lab from the command line.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error, 3 resource
//! guard.

mod commands;
mod mapfile;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use agcalc::corpus::{CorpusSpec, Family};
use agcalc::inversion::Method;
use agcalc::lab::DEFAULT_TERM_CEILING;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Abort, CorpusRun, LabChecks, MethodChoice, Outcome, Suite};
use mapfile::{LoadedMap, MapFile};
use report::Report;

#[derive(Parser)]
#[command(
    name = "agcalc",
    version,
    about = "Exact inversion of formal maps z - H"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Print wall-clock time to stderr.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute G = F^-1 modulo degree above D.
    Invert {
        map: PathBuf,
        #[arg(long, short = 'd')]
        degree: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Check that every discarded tail term vanishes in the window.
        #[arg(long)]
        audit: bool,
    },
    /// Run the identity suite on a map.
    Verify {
        map: PathBuf,
        #[arg(long, short = 'd')]
        degree: u32,
        #[arg(long = "xi-degree", short = 'k', default_value_t = 2)]
        xi_degree: u32,
        /// Multiplier q(z) as a polynomial literal, e.g. "1 + z1*z2".
        #[arg(long, default_value = "1")]
        q: String,
    },
    /// Nilpotency of JH and the Lambda^m(P^m) scans.
    Lab {
        map: PathBuf,
        #[arg(long = "m-max", short = 'm', default_value_t = 6)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = LabArg::All)]
        checks: LabArg,
    },
    /// Generate a deterministic corpus and run a suite over it.
    Corpus {
        /// Families to generate (comma separated); defaults to all.
        #[arg(long, value_delimiter = ',')]
        family: Option<Vec<String>>,
        /// Corpus descriptor as JSON; flags below override its fields.
        #[arg(long, value_name = "PATH")]
        spec: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        run: SuiteArg,
        #[arg(long, short = 'd', default_value_t = 6)]
        degree: u32,
        #[arg(long = "xi-degree", short = 'k', default_value_t = 2)]
        xi_degree: u32,
        #[arg(long = "m-max", short = 'm', default_value_t = 6)]
        m_max: u32,
        #[arg(long)]
        audit: bool,
        /// Directory for report.json, summary.txt and the generated map files.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fixedpoint,
    Ag,
    Lambda,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabArg {
    Nilpotent,
    Scan0,
    Scan1,
    Equiv,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    InvertAll,
    Verify,
    Lab,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().unwrap().get_name().to_string()
}

fn flags<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn read(path: &Path) -> Result<Vec<u8>, Abort> {
    fs::read(path).map_err(|e| Abort::input(format!("{}: {e}", path.display())))
}

fn load_map(bytes: &[u8]) -> Result<LoadedMap, Abort> {
    let text = std::str::from_utf8(bytes).map_err(|e| Abort::input(format!("map file: {e}")))?;
    let file = MapFile::parse(text).map_err(Abort::input)?;
    file.load()
        .map_err(|e| Abort::input(format!("map file: {e}")))
}

fn term_ceiling() -> Result<usize, Abort> {
    match std::env::var("AGCALC_TERM_CEILING") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Abort::input(format!("AGCALC_TERM_CEILING: not a count: {v:?}"))),
        Err(_) => Ok(DEFAULT_TERM_CEILING),
    }
}

fn corpus_spec(
    spec: Option<&Path>,
    family: Option<Vec<String>>,
    n: Option<Vec<usize>>,
    count: Option<usize>,
    seed: Option<u64>,
) -> Result<(CorpusSpec, Vec<u8>), Abort> {
    let mut s = match spec {
        Some(p) => {
            let bytes = read(p)?;
            serde_json::from_slice(&bytes)
                .map_err(|e| Abort::input(format!("corpus descriptor: {e}")))?
        }
        None => CorpusSpec::default(),
    };
    if let Some(fams) = family {
        s.families = fams
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| match f.as_str() {
                "all" => Ok(Family::ALL.to_vec()),
                f => f.parse::<Family>().map(|f| vec![f]),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Abort::input(e.to_string()))?
            .concat();
    }
    if let Some(n) = n {
        s.ns = n;
    }
    if let Some(c) = count {
        s.count = c;
    }
    if let Some(seed) = seed {
        s.seed = seed;
    }
    s.validate().map_err(|e| Abort::input(e.to_string()))?;
    let canonical = serde_json::to_vec(&s).expect("descriptor serializes");
    Ok((s, canonical))
}

fn write_corpus_out(
    dir: &Path,
    report: &Report,
    maps: &[agcalc::corpus::CorpusMap],
) -> Result<(), Abort> {
    let io = |e: std::io::Error| Abort::input(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir.join("maps")).map_err(io)?;
    fs::write(dir.join("report.json"), report.to_json()).map_err(io)?;
    fs::write(dir.join("summary.txt"), report.to_text()).map_err(io)?;
    for m in maps {
        let mut s = serde_json::to_string_pretty(&MapFile::from_corpus(m)).expect("serializes");
        s.push('\n');
        fs::write(dir.join("maps").join(format!("{}.json", m.id)), s).map_err(io)?;
    }
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Invert {
            map,
            degree,
            method,
            audit,
        } => {
            let bytes = read(&map)?;
            let loaded = load_map(&bytes)?;
            let f = flags([
                ("degree", degree.to_string()),
                ("method", value_name(method)),
                ("audit", audit.to_string()),
            ]);
            let choice = match method {
                MethodArg::Fixedpoint => MethodChoice::One(Method::FixedPoint),
                MethodArg::Ag => MethodChoice::One(Method::AbhyankarGurjar),
                MethodArg::Lambda => MethodChoice::One(Method::LambdaSeries),
                MethodArg::All => MethodChoice::All,
            };
            commands::invert(
                &loaded,
                Report::new("invert", f, &bytes),
                degree,
                choice,
                audit,
            )
        }
        Command::Verify {
            map,
            degree,
            xi_degree,
            q,
        } => {
            let bytes = read(&map)?;
            let loaded = load_map(&bytes)?;
            let f = flags([
                ("degree", degree.to_string()),
                ("xi-degree", xi_degree.to_string()),
                ("q", q.clone()),
            ]);
            commands::verify(
                &loaded,
                Report::new("verify", f, &bytes),
                degree,
                xi_degree,
                &q,
            )
        }
        Command::Lab { map, m_max, checks } => {
            let ceiling = term_ceiling()?;
            let bytes = read(&map)?;
            let loaded = load_map(&bytes)?;
            if !loaded.h.is_exact() {
                return Err(Abort::input("lab needs a polynomial map (no \"trunc\")"));
            }
            let f = flags([
                ("m-max", m_max.to_string()),
                ("checks", value_name(checks)),
                ("term-ceiling", ceiling.to_string()),
            ]);
            let which = match checks {
                LabArg::Nilpotent => LabChecks::Nilpotent,
                LabArg::Scan0 => LabChecks::Scan0,
                LabArg::Scan1 => LabChecks::Scan1,
                LabArg::Equiv => LabChecks::Equiv,
                LabArg::All => LabChecks::All,
            };
            commands::lab(
                &loaded,
                Report::new("lab", f, &bytes),
                m_max,
                which,
                ceiling,
            )
        }
        Command::Corpus {
            family,
            spec,
            n,
            count,
            seed,
            run,
            degree,
            xi_degree,
            m_max,
            audit,
            out,
        } => {
            let ceiling = term_ceiling()?;
            let (spec, canonical) = corpus_spec(spec.as_deref(), family, n, count, seed)?;
            if degree == 0 {
                return Err(Abort::input("--degree must be at least 1"));
            }
            let f = flags([
                ("run", value_name(run)),
                ("degree", degree.to_string()),
                ("xi-degree", xi_degree.to_string()),
                ("m-max", m_max.to_string()),
                ("audit", audit.to_string()),
            ]);
            let suite = match run {
                SuiteArg::InvertAll => Suite::InvertAll,
                SuiteArg::Verify => Suite::Verify,
                SuiteArg::Lab => Suite::Lab,
            };
            let cfg = CorpusRun {
                suite,
                degree,
                xi_degree,
                m_max,
                ceiling,
                audit,
            };
            let (report, maps) =
                commands::corpus(&spec, Report::new("corpus", f, &canonical), &cfg)?;
            if let Some(dir) = out {
                write_corpus_out(&dir, &report, &maps)?;
            }
            Ok(report)
        }
    }
}

fn emit(report: &Report, out: &OutputArgs) -> Result<(), Abort> {
    if out.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(p) = &out.report {
        fs::write(p, report.to_json())
            .map_err(|e| Abort::input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command);
    if cli.output.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(report) => {
            if let Err(e) = emit(&report, &cli.output) {
                eprintln!("error: {}", e.message);
                return ExitCode::from(e.code);
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(a) => {
            if let Some(p) = &a.partial {
                let _ = emit(p, &cli.output);
            }
            eprintln!("error: {}", a.message);
            ExitCode::from(a.code)
        }
    }
}
