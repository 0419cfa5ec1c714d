mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use teamltl::decide::{mc_team_dnf, mc_team_quasiflat, sat_team_dnf, sat_team_quasiflat, DecideOptions};
use teamltl::ltlengine::{mc_ltl, parse_kripke, sat_ltl, KripkeStructure};
use teamltl::normform::{enumerate_selections, to_dnf, to_quasiflat};
use teamltl::team::{parse_team_file, TeamFile};
use teamltl::teamctl::{eval_tef_with, parse_tef, to_ctl, to_ltl};
use teamltl::{eval_lax_with, eval_strict_with, parse_formula, Error, EvalOptions, Formula, Limits, Result, UntilBound};

use report::{error_code, error_kind, Report};

#[derive(Parser, Debug)]
#[command(name = "teamltl", version, about = "Evaluate, normalize and decide asynchronous TeamLTL formulas")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for disjunct checks in mc and sat.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report the syntactic fragment of a formula.
    Classify {
        #[arg(short)]
        f: String,
    },
    /// Print the ⊎-disjunctive normal form.
    Dnf {
        #[arg(short)]
        f: String,
        /// Drop syntactically repeated disjuncts.
        #[arg(long)]
        dedupe: bool,
    },
    /// Print the quasi-flat normal form of a left-downward-closed formula.
    Quasiflat {
        #[arg(short)]
        f: String,
    },
    /// Evaluate a formula on the team in FILE.
    Eval {
        #[arg(long, value_enum)]
        semantics: Semantics,
        #[arg(long, value_name = "FILE")]
        team: PathBuf,
        #[arg(short)]
        f: String,
        /// Search until witnesses up to prefix + B·loop instead of the
        /// automatic bound.
        #[arg(long, value_name = "B", value_parser = clap::value_parser!(u64).range(1..))]
        audit_bound: Option<u64>,
    },
    /// Check whether the traces of a Kripke structure satisfy a formula.
    Mc {
        #[arg(long, value_name = "FILE")]
        kripke: PathBuf,
        #[arg(short)]
        f: String,
        #[arg(long, value_enum, default_value_t = Mode::Dnf)]
        mode: Mode,
    },
    /// Decide satisfiability and print a witness team.
    Sat {
        #[arg(short)]
        f: String,
        #[arg(long, value_enum, default_value_t = Mode::Dnf)]
        mode: Mode,
    },
    /// Translate between left-flat TeamLTL and the tef fragment of TeamCTL.
    Translate {
        #[arg(short)]
        f: String,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Evaluate a tef formula on the multiteam in FILE.
    Tefeval {
        #[arg(long, value_name = "FILE")]
        team: PathBuf,
        #[arg(short)]
        f: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Semantics {
    Lax,
    Strict,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Dnf,
    Quasiflat,
    Ltl,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Direction {
    ToLtl,
    ToCtl,
}

fn limits() -> Result<Limits> {
    match std::env::var("TEAMLTL_LIMITS") {
        Ok(s) => s.parse(),
        Err(_) => Ok(Limits::default()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn team_file(path: &Path) -> Result<TeamFile> {
    parse_team_file(&read(path)?)
}

fn kripke_file(path: &Path) -> Result<KripkeStructure> {
    parse_kripke(&read(path)?)
}

/// Parses the inputs, then runs the command, timing both phases.
fn timed<I>(parse: impl FnOnce() -> Result<I>, run: impl FnOnce(I) -> Result<Report>) -> Result<Report> {
    let t0 = Instant::now();
    let input = parse()?;
    let t1 = Instant::now();
    let mut report = run(input)?;
    report.parse_time = t1 - t0;
    report.run_time = t1.elapsed();
    Ok(report)
}

fn formulas_json(fs: &[Formula]) -> Value {
    fs.iter().map(|f| f.to_string()).collect()
}

fn run(cli: &Cli) -> Result<Report> {
    let limits = limits()?;
    let opts = DecideOptions {
        jobs: cli.jobs,
        ..DecideOptions::default()
    };
    match &cli.command {
        Command::Classify { f } => timed(
            || parse_formula(f),
            |f| {
                let info = f.classify();
                let value = serde_json::to_value(info).unwrap();
                let mut text = String::new();
                for (k, v) in value.as_object().unwrap() {
                    text.push_str(&format!("{k}: {v}\n"));
                }
                Ok(Report::body(text, value))
            },
        ),
        Command::Dnf { f, dedupe } => timed(
            || parse_formula(f),
            |f| {
                let mut dnf = to_dnf(&f)?;
                if *dedupe {
                    dnf = dnf.deduped();
                }
                let bor_count = enumerate_selections(&f)?.bor_count();
                let value = json!({ "bor_count": bor_count, "disjuncts": formulas_json(&dnf.disjuncts) });
                Ok(Report::body(dnf.to_string(), value))
            },
        ),
        Command::Quasiflat { f } => timed(
            || parse_formula(f),
            |f| {
                let qf = to_quasiflat(&f)?;
                let value: Value = qf
                    .disjuncts
                    .iter()
                    .map(|d| json!({ "alpha": d.alpha.to_string(), "betas": formulas_json(&d.betas) }))
                    .collect();
                Ok(Report::body(qf.to_string(), json!({ "disjuncts": value })))
            },
        ),
        Command::Eval {
            semantics,
            team,
            f,
            audit_bound,
        } => timed(
            || Ok((team_file(team)?, parse_formula(f)?)),
            |(team, f)| {
                let eval_opts = EvalOptions {
                    limits,
                    until_bound: audit_bound.map_or(UntilBound::Auto, |b| UntilBound::Fixed(b as usize)),
                };
                let v = match semantics {
                    Semantics::Lax => eval_lax_with(&team.team(), &f, &eval_opts)?,
                    Semantics::Strict => eval_strict_with(&team.multiteam(), &f, &eval_opts)?,
                };
                Ok(Report::verdict(v))
            },
        ),
        Command::Mc { kripke, f, mode } => timed(
            || Ok((kripke_file(kripke)?, parse_formula(f)?)),
            |(k, f)| {
                let v = match mode {
                    Mode::Dnf => mc_team_dnf(&k, &f, &opts)?,
                    Mode::Quasiflat => mc_team_quasiflat(&k, &f, &opts)?,
                    Mode::Ltl => mc_ltl(&k, &f)?,
                };
                Ok(Report::from_verdict(v))
            },
        ),
        Command::Sat { f, mode } => timed(
            || parse_formula(f),
            |f| {
                let v = match mode {
                    Mode::Dnf => sat_team_dnf(&f, &opts)?,
                    Mode::Quasiflat => sat_team_quasiflat(&f, &opts)?,
                    Mode::Ltl => sat_ltl(&f)?,
                };
                Ok(Report::from_verdict(v))
            },
        ),
        Command::Translate { f, direction } => match direction {
            Direction::ToLtl => timed(
                || parse_tef(f),
                |f| {
                    let g = to_ltl(&f)?.to_string();
                    Ok(Report::body(g.clone(), json!(g)))
                },
            ),
            Direction::ToCtl => timed(
                || parse_formula(f),
                |f| {
                    let g = to_ctl(&f)?.to_string();
                    Ok(Report::body(g.clone(), json!(g)))
                },
            ),
        },
        Command::Tefeval { team, f } => timed(
            || Ok((team_file(team)?, parse_tef(f)?)),
            |(team, f)| Ok(Report::verdict(eval_tef_with(&team.multiteam(), &f, &limits)?)),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "kind": error_kind(&e) }));
            }
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
