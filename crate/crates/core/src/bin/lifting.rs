use clap::{Parser, Subcommand};
use lifting::cli::{
    reproduce_figure, run_scenario, CliError, FigureId, Format, RunOptions, Scenario, SweepConfig, SweepParameter,
    EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_THRESHOLD, FIGURE_IDS,
};
use lifting::propagator::DEFAULT_TOL;
use lifting::validation::{run_all, run_criterion, CRITERIA};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Lifting of quasi-degeneracy: numerical, exact and asymptotic
/// propagators compared on configured scenarios.
#[derive(Parser)]
#[command(name = "lifting", version)]
struct Cli {
    /// Integrator tolerance, within [1e-13, 1e-6].
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for sweep rows (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Directory for reports and figure data.
    #[arg(long, global = true, env = "LIFTING_OUT_DIR", default_value = "lifting-out")]
    out_dir: PathBuf,
    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML scenario (a single point, or its sweep if it has one).
    Run { config: PathBuf },
    /// Run a scenario as a sweep; flags override the config's sweep table.
    Sweep {
        config: PathBuf,
        /// t0_delta0, t0_omega0 or tau
        #[arg(long)]
        parameter: Option<String>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        /// Number of sweep points, at least 2 (default 51 when the config has no sweep)
        #[arg(long)]
        points: Option<usize>,
    },
    /// Write the data behind a figure (fig1..fig11, figliftall, or all).
    Figure { id: String },
    /// Run the acceptance suite; exits 2 when any criterion fails.
    Validate {
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { EXIT_OK as u8 });
        }
    };
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if !(1e-13..=1e-6).contains(&cli.tol) {
        return Err(CliError::Config { path: "--tol".into(), message: format!("must lie in [1e-13, 1e-6], got {}", cli.tol) });
    }
    let opts = RunOptions { tol: cli.tol, workers: cli.workers };
    match &cli.command {
        Command::Run { config } => run(Scenario::from_path(config)?, cli, &opts),
        Command::Sweep { config, parameter, from, to, points } => {
            let mut s = Scenario::from_path(config)?;
            let origin = config.display().to_string();
            let base = s.sweep.clone();
            let parameter = match parameter.as_deref() {
                None => base.as_ref().map(|b| b.parameter),
                Some(p) => Some(parse_parameter(p).map_err(|m| CliError::Config { path: "--parameter".into(), message: m })?),
            };
            let sweep = match (parameter, from.or(base.as_ref().map(|b| b.from)), to.or(base.as_ref().map(|b| b.to))) {
                (Some(parameter), Some(from), Some(to)) => SweepConfig {
                    parameter,
                    from,
                    to,
                    points: points.or(base.as_ref().map(|b| b.points)).unwrap_or(51),
                },
                _ => {
                    return Err(CliError::Config {
                        path: origin,
                        message: "no sweep: add a [sweep] table or pass --parameter, --from and --to".into(),
                    })
                }
            };
            s.sweep = Some(sweep);
            s.validate().map_err(|m| CliError::Config { path: origin, message: m })?;
            run(s, cli, &opts)
        }
        Command::Figure { id } => {
            let ids: Vec<FigureId> = if id == "all" {
                FIGURE_IDS.to_vec()
            } else {
                vec![id.parse().map_err(|m| CliError::Config { path: "figure".into(), message: m })?]
            };
            for id in ids {
                for t in reproduce_figure(id, &opts)? {
                    println!("{}", t.write(&cli.out_dir, cli.format)?.display());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Validate { criterion } => {
            let outcomes = match criterion {
                Some(c) if (1..=CRITERIA).contains(c) => vec![run_criterion(*c, cli.tol)],
                Some(c) => {
                    return Err(CliError::Config { path: "--criterion".into(), message: format!("expected 1..={CRITERIA}, got {c}") })
                }
                None => opts.install(|| run_all(cli.tol)),
            };
            match cli.format {
                Format::Csv => outcomes.iter().for_each(|o| println!("{o}")),
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcomes).unwrap_or_default()),
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            eprintln!("validate: {} passed, {failed} failed", outcomes.len() - failed);
            Ok(if failed > 0 { EXIT_THRESHOLD } else { EXIT_OK })
        }
    }
}

fn parse_parameter(p: &str) -> Result<SweepParameter, String> {
    match p {
        "t0_delta0" => Ok(SweepParameter::T0Delta0),
        "t0_omega0" => Ok(SweepParameter::T0Omega0),
        "tau" => Ok(SweepParameter::Tau),
        other => Err(format!("unknown sweep parameter `{other}` (expected t0_delta0, t0_omega0 or tau)")),
    }
}

fn run(s: Scenario, cli: &Cli, opts: &RunOptions) -> Result<i32, CliError> {
    let report = run_scenario(&s, opts)?;
    let stem = s.output.clone().unwrap_or_else(|| s.name.clone());
    for p in report.write(Path::new(&cli.out_dir), &stem, cli.format)? {
        println!("{}", p.display());
    }
    for m in &report.summary {
        eprintln!(
            "{}: max |p+ err| {:.3e}, max phase err {:.3e} over {} rows",
            m.model.as_str(),
            m.max_abs_error,
            m.max_phase_error,
            m.evaluated_rows
        );
    }
    if report.any_failed() {
        eprintln!("{} row(s) failed numerically", report.rows.iter().filter(|r| r.failed).count());
        return Ok(EXIT_NUMERIC);
    }
    if report.threshold_breached {
        eprintln!("threshold {} breached", report.threshold.unwrap_or(f64::NAN));
        return Ok(EXIT_THRESHOLD);
    }
    Ok(EXIT_OK)
}
