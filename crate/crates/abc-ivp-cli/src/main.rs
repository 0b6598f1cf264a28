//! Command line front end: solves, convergence tables, epidemic runs,
//! weight dumps and Mittag-Leffler spot evaluation.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure.

mod plot;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use abc_ivp::error::Error;
use abc_ivp::models::{self, Incidence, Preset, ProblemFile};
use abc_ivp::params::{AbcParams, Grid, Normalization};
use abc_ivp::quadrature::lag_weights;
use abc_ivp::report::{self, fmt_f64, max_absolute_error, run_convergence};
use abc_ivp::solver::{solve_with, PredictorScheme, ProblemSpec};
use abc_ivp::special::{mittag_leffler, MlfQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AbChoice {
    Unit,
    Gamma,
}

impl From<AbChoice> for Normalization {
    fn from(c: AbChoice) -> Self {
        match c {
            AbChoice::Unit => Normalization::Unit,
            AbChoice::Gamma => Normalization::GammaForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemKind {
    /// D^α y = tⁿ, y(0) = 1 on [0, 2]
    Tpow,
    /// D^α y = t − y, y(0) = 0 on [0, 1]
    Linear,
}

#[derive(Parser)]
#[command(
    name = "abc-ivp",
    version,
    about = "Predictor-corrector solver for fractional initial value problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Fractional order(s), comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    alpha: Vec<f64>,

    /// Normalization of the fractional operator
    #[arg(long, global = true, value_enum, default_value_t = AbChoice::Gamma)]
    ab: AbChoice,

    /// Step count(s), comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    steps: Vec<usize>,

    /// Final time (defaults to the problem's own horizon)
    #[arg(long, global = true)]
    t_end: Option<f64>,

    /// Directory for generated files
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// File format for reports and trajectories
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Use the literal start-up/predictor coefficient set (comparison only;
    /// ruins the convergence order)
    #[arg(long, global = true)]
    paper_literal_predictor: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one benchmark problem and write its trajectory
    Solve {
        #[arg(long, value_enum, default_value_t = ProblemKind::Linear)]
        problem: ProblemKind,
        /// Forcing exponent n for the tpow problem
        #[arg(long, default_value_t = 3)]
        exponent: u32,
        /// Emit the auxiliary start-up rows into the trajectory file
        #[arg(long)]
        startup_rows: bool,
    },
    /// Error tables against the exact solution over doubling grids
    Convergence {
        #[arg(long, value_enum, default_value_t = ProblemKind::Tpow)]
        problem: ProblemKind,
        #[arg(long, default_value_t = 3)]
        exponent: u32,
    },
    /// Run the SI epidemic model from a preset or a problem file
    Epidemic {
        /// One of set1..set4
        #[arg(long, conflicts_with = "problem_file")]
        preset: Option<String>,
        /// JSON problem description
        #[arg(long)]
        problem_file: Option<PathBuf>,
        #[arg(long, default_value = "bilinear")]
        incidence: String,
        /// Initial data u0,v0 (repeatable); defaults to the preset's
        #[arg(long = "initial", value_name = "U0,V0")]
        initial: Vec<String>,
        /// Write an SVG overlay of all runs
        #[arg(long)]
        plot: bool,
        /// Write the equivalent problem file next to the summary
        #[arg(long)]
        emit_problem: bool,
    },
    /// Dump quadrature weight tables as CSV (columns target,k,j,value)
    Weights {
        /// Single target step (defaults to every target on the grid)
        #[arg(long)]
        target: Option<usize>,
    },
    /// Evaluate the two-parameter Mittag-Leffler function
    Mlf {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Argument(s), comma separated
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        z: Vec<f64>,
    },
}

/// Prints one progress line to stdout. The generated files are the real
/// product, so a consumer that closed the pipe early (`abc-ivp ... | head`)
/// only silences further chatter; the run itself completes.
macro_rules! say {
    ($($arg:tt)*) => {
        let _ = writeln!(std::io::stdout(), $($arg)*);
    };
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ConvergenceFailure(_) | Error::NonFiniteRhs { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn scheme_of(cli: &Cli) -> PredictorScheme {
    if cli.paper_literal_predictor {
        PredictorScheme::Literal
    } else {
        PredictorScheme::Corrected
    }
}

fn alphas_or(cli: &Cli, default: &[f64]) -> Vec<f64> {
    if cli.alpha.is_empty() {
        default.to_vec()
    } else {
        cli.alpha.clone()
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content)?;
    say!("wrote {}", path.display());
    Ok(())
}

fn build_problem(
    kind: ProblemKind,
    exponent: u32,
    params: &AbcParams,
) -> Result<ProblemSpec, Error> {
    match kind {
        ProblemKind::Tpow => models::power_forcing_problem(exponent, params),
        ProblemKind::Linear => models::linear_problem(params),
    }
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    problem: &'a str,
    alpha: f64,
    ab: Normalization,
    times: &'a [f64],
    states: &'a [Vec<f64>],
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Solve {
            problem,
            exponent,
            startup_rows,
        } => {
            let scheme = scheme_of(&cli);
            let ab: Normalization = cli.ab.into();
            for &alpha in &alphas_or(&cli, &[0.9]) {
                let params = AbcParams::new(alpha, ab)?;
                let spec = build_problem(*problem, *exponent, &params)?;
                let t_end = cli.t_end.unwrap_or_else(|| spec.t_end());
                let n_steps = *cli.steps.first().unwrap_or(&40);
                let grid = Grid::new(t_end, n_steps)?;
                let mut traj = solve_with(&spec, params, grid, scheme)?;
                traj.includes_startup_nodes = *startup_rows;
                let stem = format!("{}-a{}-{}", spec.label(), alpha, ab_tag(ab));
                match cli.format {
                    OutputFormat::Csv => {
                        let path = cli.out_dir.join(format!("{stem}.csv"));
                        write_file(&path, &report::trajectory_to_csv(&traj))?;
                    }
                    OutputFormat::Json => {
                        let body = serde_json::to_string_pretty(&TrajectoryJson {
                            problem: spec.label(),
                            alpha,
                            ab,
                            times: traj.times(),
                            states: traj.states(),
                        })
                        .expect("trajectory serializes");
                        let path = cli.out_dir.join(format!("{stem}.json"));
                        write_file(&path, &body)?;
                    }
                }
                if spec.has_exact() {
                    say!(
                        "  max error vs exact solution: {}",
                        fmt_f64(max_absolute_error(&traj, &spec)?)
                    );
                }
                say!(
                    "  steps {} rhs evaluations {} wall {:.3}s",
                    n_steps,
                    traj.stats().rhs_evaluations,
                    traj.stats().wall.as_secs_f64()
                );
            }
            Ok(())
        }

        Command::Convergence { problem, exponent } => {
            let scheme = scheme_of(&cli);
            let ab: Normalization = cli.ab.into();
            let alphas = alphas_or(&cli, &[0.5, 0.7, 0.9]);
            let steps = if cli.steps.is_empty() {
                vec![10, 20, 40, 80, 160, 320]
            } else {
                cli.steps.clone()
            };
            let reports = run_convergence(
                |p| build_problem(*problem, *exponent, p),
                &alphas,
                &steps,
                ab,
                scheme,
            )?;
            for report in &reports {
                say!(
                    "problem {} alpha {} ({})",
                    report.problem,
                    report.alpha,
                    ab_tag(ab)
                );
                say!("  {:>6} {:>12} {:>8} {:>10}", "N", "AE", "EOC", "seconds");
                for row in &report.rows {
                    say!(
                        "  {:>6} {:>12.4e} {:>8} {:>10.4}",
                        row.n,
                        row.ae,
                        row.eoc.map(|e| format!("{e:.2}")).unwrap_or_else(|| "-".into()),
                        row.seconds
                    );
                }
                let stem = format!(
                    "{}-a{}-{}-convergence",
                    report.problem,
                    report.alpha,
                    ab_tag(ab)
                );
                match cli.format {
                    OutputFormat::Csv => {
                        write_file(&cli.out_dir.join(format!("{stem}.csv")), &report.to_csv())?
                    }
                    OutputFormat::Json => {
                        write_file(&cli.out_dir.join(format!("{stem}.json")), &report.to_json())?
                    }
                }
            }
            Ok(())
        }

        Command::Epidemic {
            preset,
            problem_file,
            incidence,
            initial,
            plot: make_plot,
            emit_problem,
        } => {
            let scheme = scheme_of(&cli);
            let (label, ep, alphas, inits, t_end, n_steps, ab) = match (preset, problem_file) {
                (Some(name), None) => {
                    let preset: Preset = name.parse()?;
                    let inc: Incidence = incidence.parse()?;
                    let ep = preset.epidemic_params(inc);
                    let alphas = alphas_or(&cli, &preset.default_alphas());
                    let inits = if initial.is_empty() {
                        preset.default_initial_data()
                    } else {
                        parse_initial_data(initial)?
                    };
                    let t_end = cli.t_end.unwrap_or(200.0);
                    let n_steps = *cli.steps.first().unwrap_or(&2000);
                    (
                        format!("{}-{incidence}", preset.name()),
                        ep,
                        alphas,
                        inits,
                        t_end,
                        n_steps,
                        cli.ab.into(),
                    )
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(path)?;
                    let file = ProblemFile::from_json(&text)?;
                    let ep = file.epidemic_params()?;
                    let stem = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "problem".into());
                    (
                        stem,
                        ep,
                        vec![file.alpha],
                        vec![(file.u0, file.v0)],
                        file.t_end,
                        file.n_steps,
                        // the file pins its own normalization
                        file.ab_normalization,
                    )
                }
                _ => {
                    return Err(Error::Parse(
                        "epidemic needs exactly one of --preset or --problem-file".into(),
                    ))
                }
            };
            let (trajectories, summary) =
                report::run_epidemic(&label, &ep, &alphas, &inits, t_end, n_steps, ab, scheme)?;
            say!(
                "r0 = {:.4}, disease-free ({:.4}, 0){}",
                summary.equilibria.r0,
                summary.equilibria.disease_free.0,
                summary
                    .equilibria
                    .endemic
                    .map(|(u, v)| format!(", endemic ({u:.4}, {v:.4})"))
                    .unwrap_or_default()
            );
            for run in &summary.runs {
                say!(
                    "  alpha {} from ({}, {:.4}): final ({:.6}, {:.6})",
                    run.alpha, run.u0, run.v0, run.final_state.0, run.final_state.1
                );
            }
            for (stem, traj) in &trajectories {
                write_file(
                    &cli.out_dir.join(format!("{stem}.csv")),
                    &report::trajectory_to_csv(traj),
                )?;
            }
            write_file(
                &cli.out_dir.join(format!("{label}-summary.json")),
                &summary.to_json(),
            )?;
            if *emit_problem {
                if alphas.len() != 1 || inits.len() != 1 {
                    return Err(Error::Parse(
                        "--emit-problem needs a single alpha and a single initial datum".into(),
                    ));
                }
                let file = ProblemFile {
                    lambda: ep.lambda_birth,
                    gamma: ep.gamma_transmission,
                    mu: ep.mu,
                    sigma_tilde: ep.sigma_tilde,
                    incidence: ep.incidence,
                    alpha: alphas[0],
                    ab_normalization: ab,
                    u0: inits[0].0,
                    v0: inits[0].1,
                    t_end,
                    n_steps,
                };
                write_file(
                    &cli.out_dir.join(format!("{label}-problem.json")),
                    &file.to_json(),
                )?;
            }
            if *make_plot {
                let mut series = Vec::new();
                for (stem, traj) in &trajectories {
                    let csv = report::trajectory_to_csv(traj);
                    series.extend(plot::trajectory_series(stem, &csv)?);
                }
                let svg = plot::render(&series)?;
                write_file(&cli.out_dir.join(format!("{label}.svg")), &svg)?;
            }
            Ok(())
        }

        Command::Weights { target } => {
            let ab: Normalization = cli.ab.into();
            let alphas = alphas_or(&cli, &[0.5]);
            let t_end = cli.t_end.unwrap_or(1.0);
            let n_steps = *cli.steps.first().unwrap_or(&16);
            for &alpha in &alphas {
                let params = AbcParams::new(alpha, ab)?;
                let grid = Grid::new(t_end, n_steps)?;
                let targets: Vec<usize> = match target {
                    Some(t) => vec![*t],
                    None => (1..=n_steps).collect(),
                };
                let mut csv = String::from("target,k,j,value\n");
                for &t in &targets {
                    let table = lag_weights(&params, &grid, t)?;
                    for k in 0..t {
                        for j in 0..3 {
                            csv.push_str(&format!(
                                "{t},{k},{j},{}\n",
                                fmt_f64(table.weight(j, k))
                            ));
                        }
                    }
                }
                let path = cli
                    .out_dir
                    .join(format!("weights-a{alpha}-N{n_steps}.csv"));
                write_file(&path, &csv)?;
            }
            Ok(())
        }

        Command::Mlf { beta, z } => {
            if cli.alpha.len() != 1 {
                return Err(Error::Parse(
                    "mlf needs exactly one --alpha value".into(),
                ));
            }
            for &zi in z {
                let q = MlfQuery::new(cli.alpha[0], *beta, zi)?;
                // 16 significant digits, one value per line
                say!("{:.15e}", mittag_leffler(&q)?);
            }
            Ok(())
        }
    }
}

fn ab_tag(ab: Normalization) -> &'static str {
    match ab {
        Normalization::Unit => "unit",
        Normalization::GammaForm => "gamma",
    }
}

fn parse_initial_data(raw: &[String]) -> Result<Vec<(f64, f64)>, Error> {
    raw.iter()
        .map(|s| {
            let mut it = s.split(',');
            let parse = |f: Option<&str>| {
                f.and_then(|x| x.trim().parse::<f64>().ok()).ok_or_else(|| {
                    Error::Parse(format!("initial data must be U0,V0 got {s:?}"))
                })
            };
            let u0 = parse(it.next())?;
            let v0 = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse(format!(
                    "initial data must be U0,V0 got {s:?}"
                )));
            }
            Ok((u0, v0))
        })
        .collect()
}
