//! Command-line front end for the `qcluster` engine.
//!
//! Exit codes: 0 success, 1 property violation, 2 parse or validation failure.

mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qcluster::bounds::{self, Coprimality, Sample};
use qcluster::explore;
use qcluster::{Error, QuantumSeed, SeedFile, TorusElement};

pub use report::{Report, Status};

#[derive(Parser, Debug)]
#[command(
    name = "qcluster",
    version,
    about = "Exact computations in generalized quantum cluster algebras"
)]
pub struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a seed file and the invariants of its initial seed.
    Verify { seed: PathBuf },
    /// Mutate along a word and print the resulting seed.
    Mutate {
        seed: PathBuf,
        /// 1-based directions, e.g. `1,2,1` or `121`.
        #[arg(long, default_value = "")]
        word: String,
        /// Write the reached seed as a new seed file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only this variable (1-based).
        #[arg(long)]
        var: Option<usize>,
        #[arg(long)]
        ordered: bool,
    },
    /// Print the cluster variables reached by a word.
    Expand {
        seed: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
        /// Use ordered monomials `X1^a*X2^b` instead of `X(a,b)`.
        #[arg(long)]
        ordered: bool,
    },
    /// Explore all words up to a depth and check every division is exact.
    LaurentCheck {
        seed: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Periods of alternating mutation sequences.
    Periodic {
        seed: PathBuf,
        #[arg(long, default_value_t = 24)]
        max_depth: usize,
    },
    /// Upper-bound membership of an element of the initial torus.
    UbMember {
        seed: PathBuf,
        #[arg(long, conflicts_with = "element_file")]
        element: Option<String>,
        #[arg(long)]
        element_file: Option<PathBuf>,
        /// Run the mutation-invariance comparison without a coprimality certificate.
        #[arg(long)]
        assume_coprime: bool,
    },
    /// Check that cluster variables have coefficients in ℕ[q^{±1/2}, h].
    Positivity {
        seed: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Compare powers of mutated variables with their V and W factorizations.
    FactorizationCheck {
        seed: PathBuf,
        /// Direction (1-based); all directions when omitted.
        #[arg(long)]
        i: Option<usize>,
        /// Exponent; 1 through 4 when omitted.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value = "")]
        word: String,
    },
}

/// Parses `argv` (including the program name), runs the command and returns the
/// exit code together with the rendered output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let report = execute(&cli.command);
    (report.status.exit_code(), report.render(cli.json))
}

pub fn execute(command: &Command) -> Report {
    let mut report = Report::new(command_name(command));
    if let Err(e) = dispatch(command, &mut report) {
        report.status = match e {
            Error::LaurentViolation { .. } | Error::EpsilonMismatch { .. } => Status::Violation,
            _ => Status::Error,
        };
        report.findings.push(format!("error: {e}"));
    }
    report
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Verify { .. } => "verify",
        Command::Mutate { .. } => "mutate",
        Command::Expand { .. } => "expand",
        Command::LaurentCheck { .. } => "laurent-check",
        Command::Periodic { .. } => "periodic",
        Command::UbMember { .. } => "ub-member",
        Command::Positivity { .. } => "positivity",
        Command::FactorizationCheck { .. } => "factorization-check",
    }
}

/// Parses `1,2,1`, `1 2 1` or `121` into 0-based directions.
pub fn parse_word(text: &str, n: usize) -> Result<Vec<usize>, Error> {
    let text = text.trim();
    let parts: Vec<String> = if text.contains([',', ' ']) {
        text.split([',', ' '])
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    };
    parts
        .iter()
        .enumerate()
        .map(|(pos, p)| {
            let k: usize = p.parse().map_err(|_| Error::Syntax {
                pos,
                message: format!("bad direction {p:?} in word"),
            })?;
            if k == 0 || k > n {
                return Err(Error::InvalidDirection { direction: k, n });
            }
            Ok(k - 1)
        })
        .collect()
}

fn fmt_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "()".to_string();
    }
    word.iter()
        .map(|k| (k + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_vec(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn render(x: &TorusElement, ordered: bool) -> String {
    if ordered {
        x.ordered_form()
    } else {
        x.to_string()
    }
}

fn load(report: &mut Report, path: &PathBuf) -> Result<QuantumSeed, Error> {
    report.time("load", || SeedFile::load(path)?.to_seed())
}

fn dispatch(command: &Command, report: &mut Report) -> Result<(), Error> {
    match command {
        Command::Verify { seed } => {
            let s = load(report, seed)?;
            report.note(format!("m = {}, n = {}", s.m(), s.n()));
            report.note(format!("dtilde = {}", fmt_vec(s.pair().dtilde())));
            report.note(format!("d = {}", fmt_vec(s.exchange().degrees())));
            let findings = report.time("invariants", || s.check_invariants());
            if findings.is_empty() {
                report.note("invariants hold");
            }
            for f in findings {
                report.violation(f);
            }
        }
        Command::Mutate {
            seed,
            word,
            out,
            var,
            ordered,
        } => {
            let s = load(report, seed)?;
            let word = parse_word(word, s.n())?;
            let reached = report.time("mutate", || s.apply_word(&word))?;
            match var {
                Some(k) => {
                    if *k == 0 || *k > s.m() {
                        return Err(Error::InvalidDirection {
                            direction: *k,
                            n: s.m(),
                        });
                    }
                    report.note(render(reached.var(k - 1), *ordered));
                }
                None => {
                    report.note(format!("word = {}", fmt_word(&word)));
                    report.note(format!("lambda = {}", reached.pair().lambda()));
                    report.note(format!("btilde = {}", reached.pair().btilde()));
                    for (k, x) in reached.vars().iter().enumerate() {
                        report.note(format!("X{} = {}", k + 1, render(x, *ordered)));
                    }
                }
            }
            if let Some(path) = out {
                SeedFile::from_seed(&reached).save(path)?;
            }
        }
        Command::Expand {
            seed,
            word,
            ordered,
        } => {
            let s = load(report, seed)?;
            let word = parse_word(word, s.n())?;
            let reached = report.time("mutate", || s.apply_word(&word))?;
            for (k, x) in reached.vars().iter().enumerate() {
                report.note(format!("X{} = {}", k + 1, render(x, *ordered)));
            }
        }
        Command::LaurentCheck { seed, depth } => {
            let s = load(report, seed)?;
            let explored = report.time("explore", || explore::bfs_explore(&s, *depth));
            report.note(format!("depth = {depth}"));
            report.note(format!("words explored = {}", explored.words_explored));
            report.note(format!("distinct seeds = {}", explored.seeds.len()));
            for v in &explored.violations {
                report.violation(format!("word {}: {}", fmt_word(&v.word), v.error));
            }
            if explored.violations.is_empty() {
                report.note("all divisions exact");
            }
            let findings: Vec<String> = report.time("invariants", || {
                explored
                    .seeds
                    .iter()
                    .flat_map(|v| v.seed.check_invariants())
                    .collect()
            });
            if findings.is_empty() {
                report.note("invariants hold on every seed");
            }
            for f in findings {
                report.violation(f);
            }
            for cycle in explored.cycles().iter().take(8) {
                report.note(format!(
                    "cycle of length {}: {}",
                    cycle.len(),
                    fmt_word(cycle)
                ));
            }
        }
        Command::Periodic { seed, max_depth } => {
            let s = load(report, seed)?;
            let periods = report.time("iterate", || {
                explore::all_alternating_periods(&s, *max_depth)
            })?;
            for p in periods {
                let show = |x: Option<usize>| {
                    x.map_or("none within max depth".to_string(), |v| v.to_string())
                };
                report.note(format!(
                    "directions ({},{}): seed period {}, variable period {}",
                    p.directions.0 + 1,
                    p.directions.1 + 1,
                    show(p.seed_period),
                    show(p.variable_period)
                ));
            }
        }
        Command::UbMember {
            seed,
            element,
            element_file,
            assume_coprime,
        } => {
            let s = load(report, seed)?;
            let text = match (element, element_file) {
                (Some(t), _) => t.clone(),
                (None, Some(path)) => std::fs::read_to_string(path)
                    .map_err(|e| Error::SeedFile(format!("{}: {e}", path.display())))?,
                (None, None) => {
                    return Err(Error::InvalidExchangeData(
                        "one of --element or --element-file is required".to_string(),
                    ))
                }
            };
            let y = qcluster::parse_element(text.trim(), s.initial_context())?;
            let verdicts = report.time("membership", || bounds::ub_report(&s, &y));
            for (i, v) in verdicts.iter().enumerate() {
                report.note(format!(
                    "direction {}: {}",
                    i + 1,
                    if *v { "member" } else { "not a member" }
                ));
            }
            report.note(format!("ub_member = {}", verdicts.iter().all(|v| *v)));
            let coprime = bounds::coprime_check_rank2(&s);
            report.note(format!("coprimality = {coprime:?}"));
            if coprime == Coprimality::Coprime || *assume_coprime {
                let mut samples = bounds::invariance_samples(&s)?;
                samples.push(Sample {
                    label: "input".to_string(),
                    element: y,
                });
                let findings =
                    report.time("invariance", || bounds::invariance_check(&s, &samples))?;
                let bad: Vec<_> = findings.iter().filter(|f| !f.consistent()).collect();
                report.note(format!(
                    "invariance: {} comparisons, {} inconsistent",
                    findings.len(),
                    bad.len()
                ));
                for f in bad {
                    report.violation(format!(
                        "{} across direction {}: {} here, {} there",
                        f.label,
                        f.direction + 1,
                        f.here,
                        f.there
                    ));
                }
            } else {
                report.note("invariance comparison skipped (no coprimality certificate)");
            }
        }
        Command::Positivity { seed, depth } => {
            let s = load(report, seed)?;
            let scan = report.time("scan", || explore::positivity_scan(&s, *depth));
            report.note(format!("variables checked = {}", scan.variables_checked));
            for v in &scan.violations {
                report.violation(format!("word {}: {}", fmt_word(&v.word), v.error));
            }
            for f in &scan.failures {
                report.violation(format!(
                    "X{} after {} has a negative coefficient: {}",
                    f.index + 1,
                    fmt_word(&f.word),
                    f.element
                ));
            }
            if scan.failures.is_empty() {
                report.note("all coefficients nonnegative");
            }
        }
        Command::FactorizationCheck {
            seed,
            i,
            s: power,
            word,
        } => {
            let seed = load(report, seed)?;
            let word = parse_word(word, seed.n())?;
            let reached = seed.apply_word(&word)?;
            let directions: Vec<usize> = match i {
                Some(k) => parse_word(&k.to_string(), seed.n())?,
                None => (0..seed.n()).collect(),
            };
            let powers: Vec<u32> = match power {
                Some(p) => vec![*p],
                None => (1..=4).collect(),
            };
            for &dir in &directions {
                for &p in &powers {
                    let check = report.time("check", || {
                        bounds::power_factorization_check(&reached, dir, p)
                    })?;
                    let line = format!(
                        "i = {}, s = {}: V form {}, W form {}",
                        dir + 1,
                        p,
                        if check.v_form { "holds" } else { "fails" },
                        if check.w_form { "holds" } else { "fails" }
                    );
                    if check.holds() {
                        report.note(line);
                    } else {
                        report.violation(line);
                    }
                }
            }
        }
    }
    Ok(())
}
