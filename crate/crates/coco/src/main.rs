//! `coco`: validate coherent configurations, decompose their adjacency
//! algebras into matrix units, compute Krein parameters with feasibility
//! verdicts, and screen generalized-quadrangle orders in closed form.
//!
//! Exit codes: 0 on pass (boundary verdicts included), 1 on usage or input
//! errors (malformed JSON, axiom failures, non-fiber-commutative input),
//! 2 on mathematical infeasibility.

use std::fs;
use std::io::{Read as _, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use coco::gq::{
    gen_gq_dualgrid, gen_gq_grid, gen_gq_w2, generate, gq_closed_form, gq_feasibility,
    gq_to_configuration,
};
use coco::report::{
    closed_form_report, ideals_section, krein_section, render_closed_form_text,
    render_gq_feasibility_text, render_sweep_text, render_text, verdict_name, Meta, Report,
};
use coco::{
    absolute_bound, config, decompose, feasibility_report, krein_all, parse_json, validate_axioms,
    verify_units, CoherentConfiguration, Error, Tolerances, ValidationMode, ValidationReport,
    Verdict,
};

#[derive(Parser)]
#[command(
    name = "coco",
    version,
    about = "Coherent-configuration analysis and Krein feasibility screening"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Random seed for probe matrices and gauge choices.
    #[arg(long, global = true, default_value_t = 42, value_name = "SEED")]
    seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Eigenvalue convergence tolerance.
    #[arg(long, global = true, value_name = "EPS")]
    tol_eig: Option<f64>,

    /// Positive-semidefiniteness tolerance.
    #[arg(long, global = true, value_name = "EPS")]
    tol_psd: Option<f64>,

    /// Numeric-rank tolerance.
    #[arg(long, global = true, value_name = "EPS")]
    tol_rank: Option<f64>,

    /// Integrality tolerance for multiplicities.
    #[arg(long, global = true, value_name = "EPS")]
    tol_int: Option<f64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the coherent-configuration axioms and fiber commutativity.
    Validate {
        #[command(flatten)]
        input: InputSpec,

        /// Sample this many cells for the triangle-count axiom instead of
        /// checking every cell.
        #[arg(long, value_name = "CELLS")]
        sampled: Option<usize>,
    },

    /// Build the gauge-fixed matrix-unit basis and report the ideal layout.
    Decompose {
        #[command(flatten)]
        input: InputSpec,
    },

    /// Compute all Krein matrices and run every feasibility test.
    Krein {
        #[command(flatten)]
        input: InputSpec,
    },

    /// Check the absolute bound for every ideal pair.
    Bounds {
        #[command(flatten)]
        input: InputSpec,
    },

    /// Generalized-quadrangle construction and closed-form screening.
    Gq {
        #[command(subcommand)]
        command: GqCommand,
    },
}

#[derive(Subcommand)]
enum GqCommand {
    /// Emit the point-line configuration of a bundled quadrangle as JSON.
    Build { s: u64, t: u64 },

    /// Evaluate every closed-form Krein matrix of order (s, t).
    #[command(name = "closed-form")]
    ClosedForm { s: u64, t: u64 },

    /// Screen one order (s, t) for Krein feasibility, or sweep ranges.
    Feasibility {
        #[arg(
            value_name = "S",
            required_unless_present = "sweep",
            conflicts_with = "sweep"
        )]
        s: Option<u64>,

        #[arg(
            value_name = "T",
            required_unless_present = "sweep",
            conflicts_with = "sweep"
        )]
        t: Option<u64>,

        /// Screen every order in two inclusive ranges `A..B C..D`.
        #[arg(long, num_args = 2, value_names = ["S_RANGE", "T_RANGE"])]
        sweep: Option<Vec<String>>,
    },
}

#[derive(Args)]
struct InputSpec {
    /// Configuration JSON path; '-' or absent reads stdin.
    #[arg(value_name = "INPUT")]
    input: Option<PathBuf>,

    /// Build a bundled family instead of reading input: gq-w2, gq-grid S,
    /// gq-dualgrid T, cyclic N, hamming-2-2.
    #[arg(long, num_args = 1..=2, value_names = ["FAMILY", "PARAM"], conflicts_with = "input")]
    gen: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let tols = tolerances(cli)?;
    match &cli.command {
        Command::Validate { input, sampled } => cmd_validate(cli, &tols, input, *sampled),
        Command::Decompose { input } => cmd_decompose(cli, &tols, input),
        Command::Krein { input } => cmd_krein(cli, &tols, input),
        Command::Bounds { input } => cmd_bounds(cli, &tols, input),
        Command::Gq { command } => match command {
            GqCommand::Build { s, t } => cmd_gq_build(*s, *t),
            GqCommand::ClosedForm { s, t } => cmd_gq_closed_form(cli, *s, *t),
            GqCommand::Feasibility { s, t, sweep } => {
                cmd_gq_feasibility(cli, *s, *t, sweep.as_deref())
            }
        },
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Error> {
    let mut t = Tolerances::default();
    if let Some(eig) = cli.tol_eig {
        t.eig = eig;
    }
    if let Some(psd) = cli.tol_psd {
        t.psd = psd;
    }
    if let Some(rank) = cli.tol_rank {
        t.rank = rank;
    }
    if let Some(int) = cli.tol_int {
        t.integrality = int;
    }
    for (name, value) in [
        ("--tol-eig", t.eig),
        ("--tol-psd", t.psd),
        ("--tol-rank", t.rank),
        ("--tol-int", t.integrality),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be a positive finite number, got {value}"
            )));
        }
    }
    Ok(t)
}

fn load(spec: &InputSpec) -> Result<(CoherentConfiguration, String), Error> {
    if let Some(gen) = &spec.gen {
        let family = gen[0].as_str();
        let param = gen
            .get(1)
            .map(|raw| {
                raw.parse::<u64>().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "generator parameter '{raw}' is not a nonnegative integer"
                    ))
                })
            })
            .transpose()?;
        let cc = generate(family, param)?;
        let source = match param {
            Some(p) => format!("gen:{family}({p})"),
            None => format!("gen:{family}"),
        };
        return Ok((cc, source));
    }
    let (text, source) = match &spec.input {
        Some(path) if path.as_os_str() != "-" => {
            (fs::read_to_string(path)?, path.display().to_string())
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            (buf, "stdin".to_string())
        }
    };
    Ok((parse_json(&text)?, source))
}

fn meta(cli: &Cli, tols: &Tolerances, source: &str, cc: &CoherentConfiguration) -> Meta {
    Meta::new(source, cli.seed, *tols, cc.n(), cc.fiber_sizes().to_vec())
}

fn emit(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Text => print_out(&render_text(report)),
        Format::Json => print_out(&report.to_json()),
    }
}

/// Writes to stdout, exiting quietly if the reading end has closed.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .is_err()
    {
        std::process::exit(0);
    }
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    s.push('\n');
    s
}

struct Validated {
    cc: CoherentConfiguration,
    source: String,
    validation: ValidationReport,
}

enum Loaded {
    Pass(Box<Validated>),
    Invalid(Box<Report>),
}

fn load_validated(cli: &Cli, tols: &Tolerances, input: &InputSpec) -> Result<Loaded, Error> {
    let (cc, source) = load(input)?;
    let validation = validate_axioms(&cc, ValidationMode::Exhaustive);
    if !validation.axioms_pass() {
        let report = Report {
            meta: meta(cli, tols, &source, &cc),
            validation: Some(validation),
            ideals: None,
            krein: None,
            bounds: None,
            verdict: "invalid".to_string(),
        };
        return Ok(Loaded::Invalid(Box::new(report)));
    }
    Ok(Loaded::Pass(Box::new(Validated {
        cc,
        source,
        validation,
    })))
}

fn cmd_validate(
    cli: &Cli,
    tols: &Tolerances,
    input: &InputSpec,
    sampled: Option<usize>,
) -> Result<u8, Error> {
    let (cc, source) = load(input)?;
    let mode = match sampled {
        Some(cells) => ValidationMode::Sampled {
            cells,
            seed: cli.seed,
        },
        None => ValidationMode::Exhaustive,
    };
    let validation = validate_axioms(&cc, mode);
    let pass = validation.axioms_pass();
    let report = Report {
        meta: meta(cli, tols, &source, &cc),
        validation: Some(validation),
        ideals: None,
        krein: None,
        bounds: None,
        verdict: if pass { "valid" } else { "invalid" }.to_string(),
    };
    emit(cli, &report);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_decompose(cli: &Cli, tols: &Tolerances, input: &InputSpec) -> Result<u8, Error> {
    let v = match load_validated(cli, tols, input)? {
        Loaded::Pass(v) => v,
        Loaded::Invalid(report) => {
            emit(cli, &report);
            return Ok(1);
        }
    };
    let basis = decompose(&v.cc, cli.seed, tols)?;
    let checks = verify_units(&v.cc, &basis);
    let ideals = ideals_section(&basis, &checks);
    let pass = ideals.unit_residuals_pass;
    let report = Report {
        meta: meta(cli, tols, &v.source, &v.cc),
        validation: Some(v.validation),
        ideals: Some(ideals),
        krein: None,
        bounds: None,
        verdict: if pass { "valid" } else { "invalid" }.to_string(),
    };
    emit(cli, &report);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_krein(cli: &Cli, tols: &Tolerances, input: &InputSpec) -> Result<u8, Error> {
    let v = match load_validated(cli, tols, input)? {
        Loaded::Pass(v) => v,
        Loaded::Invalid(report) => {
            emit(cli, &report);
            return Ok(1);
        }
    };
    let basis = decompose(&v.cc, cli.seed, tols)?;
    let checks = verify_units(&v.cc, &basis);
    let table = krein_all(&basis)?;
    let feas = feasibility_report(&table, &basis, tols)?;
    let report = Report {
        meta: meta(cli, tols, &v.source, &v.cc),
        validation: Some(v.validation),
        ideals: Some(ideals_section(&basis, &checks)),
        krein: Some(krein_section(&table, &feas)),
        bounds: Some(feas.bounds.clone()),
        verdict: verdict_name(feas.verdict).to_string(),
    };
    emit(cli, &report);
    Ok(if feas.verdict == Verdict::Infeasible {
        2
    } else {
        0
    })
}

fn cmd_bounds(cli: &Cli, tols: &Tolerances, input: &InputSpec) -> Result<u8, Error> {
    let v = match load_validated(cli, tols, input)? {
        Loaded::Pass(v) => v,
        Loaded::Invalid(report) => {
            emit(cli, &report);
            return Ok(1);
        }
    };
    let basis = decompose(&v.cc, cli.seed, tols)?;
    let table = krein_all(&basis)?;
    let bounds = absolute_bound(&table, tols)?;
    let pass = bounds.iter().all(|b| b.pass);
    let report = Report {
        meta: meta(cli, tols, &v.source, &v.cc),
        validation: None,
        ideals: None,
        krein: None,
        bounds: Some(bounds),
        verdict: if pass { "feasible" } else { "infeasible" }.to_string(),
    };
    emit(cli, &report);
    Ok(if pass { 0 } else { 2 })
}

fn cmd_gq_build(s: u64, t: u64) -> Result<u8, Error> {
    let inc = match (s, t) {
        (2, 2) => gen_gq_w2(),
        (s, 1) => gen_gq_grid(s)?,
        (1, t) => gen_gq_dualgrid(t)?,
        _ => {
            let msg = format!(
                "no bundled quadrangle of order ({s}, {t}); available orders: (s, 1), (1, t), (2, 2)"
            );
            return Err(Error::InvalidArgument(msg));
        }
    };
    let cc = gq_to_configuration(&inc)?;
    let mut json = config::to_json(&cc);
    json.push('\n');
    print_out(&json);
    Ok(0)
}

fn cmd_gq_closed_form(cli: &Cli, s: u64, t: u64) -> Result<u8, Error> {
    let table = gq_closed_form(s, t)?;
    match cli.format {
        Format::Text => print_out(&render_closed_form_text(&table)),
        Format::Json => print_out(&pretty_json(&closed_form_report(&table))),
    }
    Ok(0)
}

fn cmd_gq_feasibility(
    cli: &Cli,
    s: Option<u64>,
    t: Option<u64>,
    sweep: Option<&[String]>,
) -> Result<u8, Error> {
    if let Some(ranges) = sweep {
        let (sa, sb) = parse_range(&ranges[0])?;
        let (ta, tb) = parse_range(&ranges[1])?;
        let pairs: Vec<(u64, u64)> = (sa..=sb)
            .flat_map(|s| (ta..=tb).map(move |t| (s, t)))
            .collect();
        let rows = pairs
            .into_par_iter()
            .map(|(s, t)| gq_feasibility(s, t))
            .collect::<Result<Vec<_>, Error>>()?;
        match cli.format {
            Format::Text => print_out(&render_sweep_text(&rows)),
            Format::Json => print_out(&pretty_json(&rows)),
        }
        return Ok(0);
    }
    let (s, t) = (s.expect("clap enforces S"), t.expect("clap enforces T"));
    let feas = gq_feasibility(s, t)?;
    match cli.format {
        Format::Text => print_out(&render_gq_feasibility_text(&feas)),
        Format::Json => print_out(&pretty_json(&feas)),
    }
    Ok(if feas.verdict == Verdict::Infeasible {
        2
    } else {
        0
    })
}

fn parse_range(raw: &str) -> Result<(u64, u64), Error> {
    let bad = || {
        Error::InvalidArgument(format!(
            "range '{raw}' is not of the form A..B with 1 <= A <= B"
        ))
    };
    let (lo, hi) = raw.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let a = lo.parse::<u64>().map_err(|_| bad())?;
    let b = hi.parse::<u64>().map_err(|_| bad())?;
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}
