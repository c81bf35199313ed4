//! Command-line front end. Exit codes: 0 success, 2 when the tested
//! property does not hold, 1 for usage, input and IO errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{generate_equations, ConfigurationSet, Subsystem};
use crate::decomp::{build_plan, chain_bound, gamma_edge};
use crate::error::{Error, Result};
use crate::gordan::{gordan_alternative, GordanOutcome};
use crate::grouporacle::{
    generate_configurations, parse_generators, verify_decomposition, Decomposition,
    FreeGroupOracle, GroupOracle, Instance, TableGroupOracle,
};
use crate::io;
use crate::normality::{
    attest_exhaustively, certificate_matrix, conjecture_scan, search_normality_with_jobs,
    verify_normality, SystemPair,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILS: i32 = 2;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(name = "paradecomp", version, about = "Normality certificates and decomposition plans for configuration equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks a normality certificate, or searches for one when --pi is absent.
    CheckNormal {
        a: PathBuf,
        b: PathBuf,
        /// Row order as 1-based images, e.g. "1 7 3 6 5 4 2".
        #[arg(long)]
        pi: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Searches for the lexicographically first normality certificate.
    SearchNormal {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Enumerates all row orders when no certificate exists.
        #[arg(long)]
        attest: bool,
    },
    /// Decides whether Mx = 0 has a nonzero nonnegative solution.
    Gordan { matrix: PathBuf },
    /// Lists the configuration equations of a configuration set.
    Equations {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Writes the stacked b - a matrix in matrix format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the decomposition plan of a subsystem and optionally verifies it.
    Decompose {
        config: PathBuf,
        subsystem: PathBuf,
        #[arg(long)]
        pi: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// free:<rank> or table:<file>
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Generator elements, e.g. "a b" for a free group.
        #[arg(long)]
        generators: Option<String>,
        /// Prefix-rule file for free-group partitions.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Scans all small pairs for ones without a normality certificate.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lifts the size guard.
        #[arg(long)]
        force: bool,
    },
    /// Enumerates the configurations realised on a ball.
    GenConfig {
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        generators: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Looks for a chained row order of a subsystem whose column sums are all one.
    ChainBound { config: PathBuf, subsystem: PathBuf },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut buf = String::new();
    let result = execute(&cli.command, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

macro_rules! with_oracle {
    ($oracle:expr, $o:ident => $body:expr) => {
        match $oracle {
            AnyOracle::Free($o) => $body,
            AnyOracle::Table($o) => $body,
        }
    };
}

fn pair_from(a: &Path, b: &Path) -> Result<SystemPair> {
    SystemPair::new(io::read_binary_matrix(a)?, io::read_binary_matrix(b)?)
}

fn subsystem_from(config: &Path, subsystem: &Path) -> Result<Subsystem> {
    let cs = io::read_configurations(config)?;
    let sels = io::read_selections(subsystem)?;
    Subsystem::new(&generate_equations(&cs), sels)
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut String) -> Result<()> {
    match path {
        Some(p) => io::write_text(p, text),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn execute(cmd: &Command, out: &mut String) -> Result<i32> {
    match cmd {
        Command::CheckNormal { a, b, pi, jobs } => {
            let pair = pair_from(a, b)?;
            let pi = match pi {
                Some(s) => io::parse_permutation(s)?,
                None => match search_normality_with_jobs(&pair, *jobs) {
                    Some(c) => c.pi,
                    None => {
                        out.push_str("NOT NORMAL\n");
                        return Ok(EXIT_FAILS);
                    }
                },
            };
            let matrix = certificate_matrix(&pair, &pi)?;
            out.push_str(&format!("pi {pi}\n{matrix}"));
            Ok(if verify_normality(&pair, &pi) {
                out.push_str("NORMAL\n");
                EXIT_OK
            } else {
                out.push_str("NOT NORMAL\n");
                EXIT_FAILS
            })
        }
        Command::SearchNormal { a, b, jobs, attest } => {
            let pair = pair_from(a, b)?;
            match search_normality_with_jobs(&pair, *jobs) {
                Some(c) => {
                    out.push_str(&format!("pi {}\n{}NORMAL\n", c.pi, c.matrix));
                    Ok(EXIT_OK)
                }
                None => {
                    if *attest {
                        let at = attest_exhaustively(&pair);
                        out.push_str(&format!(
                            "attestation rejected={}/{}\n",
                            at.permutations_rejected, at.permutations_checked
                        ));
                    }
                    out.push_str("NOT NORMAL\n");
                    Ok(EXIT_FAILS)
                }
            }
        }
        Command::Gordan { matrix } => {
            let m = io::read_matrix(matrix)?;
            match gordan_alternative(&m) {
                GordanOutcome::Solution(x) => {
                    let parts: Vec<String> =
                        x.iter().map(|v| format!("{}/{}", v.numer(), v.denom())).collect();
                    out.push_str(&format!("SOLUTION x={}\n", parts.join(" ")));
                }
                GordanOutcome::Certificate(c) => {
                    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                    out.push_str(&format!("CERTIFICATE m={}\n", parts.join(" ")));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Equations {
            config,
            format,
            out: path,
        } => {
            let cs = io::read_configurations(config)?;
            let eqs = generate_equations(&cs);
            let sep = match format {
                Format::Text => " ",
                Format::Tsv => "\t",
            };
            if *format == Format::Tsv {
                out.push_str("equation\tb-a\n");
            } else {
                out.push_str(&format!("equations {} configs {}\n", eqs.len(), eqs.l()));
            }
            for e in eqs.equations() {
                let d: Vec<String> = e.difference().iter().map(ToString::to_string).collect();
                out.push_str(&format!("{}{sep}{}\n", e.id, d.join(" ")));
            }
            if let Some(p) = path {
                io::write_text(p, &eqs.matrix().to_string())?;
            }
            Ok(EXIT_OK)
        }
        Command::Decompose {
            config,
            subsystem,
            pi,
            jobs,
            oracle,
            radius,
            generators,
            partition,
            dot,
        } => {
            let cs = io::read_configurations(config)?;
            let sub = Subsystem::new(&generate_equations(&cs), io::read_selections(subsystem)?)?;
            let pi = match pi {
                Some(s) => io::parse_permutation(s)?,
                None => match search_normality_with_jobs(sub.pair(), *jobs) {
                    Some(c) => c.pi,
                    None => {
                        out.push_str("NOT NORMAL\n");
                        return Ok(EXIT_FAILS);
                    }
                },
            };
            let plan = match build_plan(&sub, &pi) {
                Ok(plan) => plan,
                Err(Error::Precondition(msg)) => {
                    out.push_str(&format!("PRECONDITION FAILS: {msg}\n"));
                    return Ok(EXIT_FAILS);
                }
                Err(e) => return Err(e),
            };
            out.push_str(&plan.to_string());
            out.push_str(&format!("gamma-edge {}\n", gamma_edge(&sub, &pi)?));
            if let Some(p) = dot {
                io::write_text(p, &plan.diagram.to_dot())?;
            }
            let Some(descriptor) = oracle else {
                return Ok(EXIT_OK);
            };
            let gens = generators
                .as_deref()
                .ok_or_else(|| Error::Precondition("--oracle needs --generators".into()))?;
            let decomposition = plan.decomposition();
            let passed = with_oracle!(&load_oracle(descriptor, partition.as_deref())?, o => {
                verify_plan(o, gens, &cs, &decomposition, *radius, out)?
            });
            Ok(if passed { EXIT_OK } else { EXIT_FAILS })
        }
        Command::Scan {
            n,
            l,
            jobs,
            format,
            out: path,
            force,
        } => {
            let report = conjecture_scan(*n, *l, *jobs, *force)?;
            let text = match format {
                Format::Text => report.to_string(),
                Format::Tsv => report.to_tsv(),
            };
            emit(path, &text, out)?;
            Ok(if report.counterexamples.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILS
            })
        }
        Command::GenConfig {
            oracle,
            generators,
            radius,
            partition,
            out: path,
        } => {
            let gc = with_oracle!(&load_oracle(oracle, partition.as_deref())?, o => {
                generate_configurations(o, &parse_generators(o, generators)?, *radius)?
            });
            let text = format!("# stable {}\n{}", gc.stable, gc.set);
            emit(path, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::ChainBound { config, subsystem } => {
            let sub = subsystem_from(config, subsystem)?;
            match chain_bound(sub.pair()) {
                Ok(Some((pi, bound))) => {
                    out.push_str(&format!("pi {pi}\nbound {bound}\n"));
                    Ok(EXIT_OK)
                }
                Ok(None) => {
                    out.push_str("NO CHAIN\n");
                    Ok(EXIT_FAILS)
                }
                Err(Error::NotApplicable(msg)) => {
                    out.push_str(&format!("NOT APPLICABLE: {msg}\n"));
                    Ok(EXIT_FAILS)
                }
                Err(e) => Err(e),
            }
        }
    }
}

enum AnyOracle {
    Free(FreeGroupOracle),
    Table(TableGroupOracle),
}

/// `free:<rank>` (first-letter blocks unless a prefix-rule file is given) or `table:<file>`.
fn load_oracle(descriptor: &str, partition: Option<&Path>) -> Result<AnyOracle> {
    match descriptor.split_once(':') {
        Some(("free", rank)) => Ok(AnyOracle::Free(io::free_oracle(rank, partition)?)),
        Some(("table", file)) => {
            if partition.is_some() {
                return Err(Error::Precondition(
                    "--partition applies to free groups only; tables carry their own".into(),
                ));
            }
            Ok(AnyOracle::Table(io::read_table(Path::new(file))?))
        }
        _ => Err(Error::Precondition(format!(
            "oracle {descriptor:?} is neither free:<rank> nor table:<file>"
        ))),
    }
}

fn verify_plan<O: GroupOracle>(
    oracle: &O,
    generators: &str,
    cs: &ConfigurationSet,
    decomposition: &Decomposition,
    radius: usize,
    out: &mut String,
) -> Result<bool> {
    let gens = parse_generators(oracle, generators)?;
    let realised = generate_configurations(oracle, &gens, radius.max(1))?;
    if let Some(c) = realised.set.items().iter().find(|c| cs.index_of(c).is_none()) {
        return Err(Error::Precondition(format!(
            "the oracle realises configuration {c}, which the configuration file lacks"
        )));
    }
    let instance = Instance::new(oracle, gens, cs.clone())?;
    let report = verify_decomposition(decomposition, &instance, radius)?;
    out.push_str(&report.to_string());
    Ok(report.passed())
}
