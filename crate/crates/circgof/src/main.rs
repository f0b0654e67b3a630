use circgof::data::{
    self, embedded_descriptors, embedded_raw, embedded_sample, ingest_csv, ingest_dwd_wind,
    pair_series, stackplot_data, AngleUnit, DwdSelection, EMBEDDED_IDS,
};
use circgof::{
    circular_autocorrelation, classical_bootstrap, conditional_means, fit_mle, warp_speed_power,
    Angle, BootstrapConfig, Error, FitConfig, PairedSample, Result, RunManifest, ScenarioConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "circgof", version, about = "Circular-circular regression with wrapped Cauchy errors: fitting, goodness-of-fit tests and power studies")]
struct Cli {
    /// Size of the rayon thread pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the regression model by maximum likelihood.
    Fit {
        #[command(flatten)]
        input: DataArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit, then bootstrap p-values for the residual goodness-of-fit tests.
    Gof {
        #[command(flatten)]
        input: DataArgs,
        /// Number of bootstrap replicates.
        #[arg(long = "B", default_value_t = 10_000)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Poisson mean of a Tn weight (repeatable).
        #[arg(long = "lambda")]
        lambdas: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a warp-speed size/power scenario from a TOML file.
    Power {
        /// Scenario description (TOML).
        scenario: PathBuf,
        /// Override the scenario's replicate count.
        #[arg(long = "B")]
        b: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Nominal level (repeatable); overrides the scenario's alphas.
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Circular autocorrelation of a single angle series.
    Autocorr {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, default_value_t = 5)]
        max_lag: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit (angle, stack index) coordinates for a stack plot.
    StackplotData {
        #[command(flatten)]
        input: SeriesArgs,
        /// Plot the residuals of a model fit instead of the raw series.
        #[arg(long)]
        residuals: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inspect the embedded datasets.
    Datasets {
        #[command(subcommand)]
        command: DatasetsCommand,
    },
}

#[derive(Subcommand)]
enum DatasetsCommand {
    /// List embedded dataset ids and provenance.
    List,
    /// Print one embedded dataset as CSV in its native unit.
    Show { id: String },
}

/// Source of a paired (covariate, response) sample: an embedded dataset
/// id, a CSV file, or a pair of DWD hourly wind files.
#[derive(Args, Clone, Serialize)]
struct DataArgs {
    /// Embedded dataset id or path to a CSV file with headers.
    #[arg(long)]
    data: Option<String>,
    /// Angle unit of CSV input.
    #[arg(long, value_enum, default_value_t = UnitArg::Deg)]
    unit: UnitArg,
    /// Covariate column name for CSV input.
    #[arg(long, default_value = "x")]
    x_col: String,
    /// Response column name for CSV input.
    #[arg(long, default_value = "y")]
    y_col: String,
    /// DWD hourly wind file providing the covariate.
    #[arg(long, conflicts_with = "data", requires = "dwd_y")]
    dwd_x: Option<PathBuf>,
    /// Hour of day selected from the covariate DWD file.
    #[arg(long, default_value_t = 6)]
    dwd_x_hour: u32,
    /// DWD hourly wind file providing the response.
    #[arg(long, conflicts_with = "data", requires = "dwd_x")]
    dwd_y: Option<PathBuf>,
    /// Hour of day selected from the response DWD file.
    #[arg(long, default_value_t = 12)]
    dwd_y_hour: u32,
    /// Keep only the most recent N paired observations.
    #[arg(long)]
    last: Option<usize>,
}

#[derive(Args, Clone, Serialize)]
struct SeriesArgs {
    /// Embedded dataset id or path to a CSV file with headers.
    #[arg(long)]
    data: Option<String>,
    #[arg(long, value_enum, default_value_t = UnitArg::Deg)]
    unit: UnitArg,
    /// Column to read from CSV input; for embedded datasets, `x` or `y`.
    #[arg(long, default_value = "x")]
    col: String,
    /// DWD hourly wind file to read instead of --data.
    #[arg(long, conflicts_with = "data")]
    dwd: Option<PathBuf>,
    /// Hour of day selected from the DWD file.
    #[arg(long, default_value_t = 6)]
    dwd_hour: u32,
    /// Keep only the most recent N observations.
    #[arg(long)]
    last: Option<usize>,
}

#[derive(Args, Clone, Serialize)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the artifact here (manifest goes to <out>.manifest.json);
    /// default is stdout with the manifest on stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum UnitArg {
    Deg,
    Rad,
}

impl From<UnitArg> for AngleUnit {
    fn from(u: UnitArg) -> AngleUnit {
        match u {
            UnitArg::Deg => AngleUnit::Degrees,
            UnitArg::Rad => AngleUnit::Radians,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum FormatArg {
    Csv,
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("circgof: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("circgof: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for data problems, 3 for optimization failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FitFailure(_) | Error::SingularMap { .. } => 3,
        _ => 2,
    }
}

fn load_paired(args: &DataArgs) -> Result<PairedSample> {
    let sample = if let (Some(px), Some(py)) = (&args.dwd_x, &args.dwd_y) {
        let x = ingest_dwd_wind(px, &DwdSelection::new(args.dwd_x_hour))?;
        let y = ingest_dwd_wind(py, &DwdSelection::new(args.dwd_y_hour))?;
        pair_series(&x, &y)?
    } else {
        let id = args.data.as_deref().ok_or_else(|| {
            Error::DegenerateData("no input: pass --data or --dwd-x/--dwd-y".into())
        })?;
        if EMBEDDED_IDS.contains(&id) {
            embedded_sample(id)?
        } else {
            ingest_csv(Path::new(id), args.unit.into(), &args.x_col, &args.y_col)?
        }
    };
    take_last_paired(sample, args.last)
}

fn take_last_paired(sample: PairedSample, last: Option<usize>) -> Result<PairedSample> {
    match last {
        Some(n) if n < sample.len() => {
            let skip = sample.len() - n;
            PairedSample::new(sample.x()[skip..].to_vec(), sample.y()[skip..].to_vec())
        }
        Some(0) => Err(Error::EmptySelection("--last 0 keeps nothing".into())),
        _ => Ok(sample),
    }
}

fn load_series(args: &SeriesArgs) -> Result<Vec<Angle>> {
    let mut series = if let Some(p) = &args.dwd {
        ingest_dwd_wind(p, &DwdSelection::new(args.dwd_hour))?
            .into_iter()
            .map(|(_, a)| a)
            .collect()
    } else {
        let id = args.data.as_deref().ok_or_else(|| {
            Error::DegenerateData("no input: pass --data or --dwd".into())
        })?;
        if EMBEDDED_IDS.contains(&id) {
            let s = embedded_sample(id)?;
            match args.col.as_str() {
                "x" => s.x().to_vec(),
                "y" => s.y().to_vec(),
                other => {
                    return Err(Error::UnknownDataset(format!(
                        "embedded datasets have columns x and y, not {other}"
                    )))
                }
            }
        } else {
            data::ingest_csv_series(Path::new(id), args.unit.into(), &args.col)?
        }
    };
    if let Some(n) = args.last {
        if n == 0 {
            return Err(Error::EmptySelection("--last 0 keeps nothing".into()));
        }
        if n < series.len() {
            series.drain(..series.len() - n);
        }
    }
    Ok(series)
}

/// Write the artifact to --out (or stdout) and its manifest to
/// <out>.manifest.json (or stderr).
fn emit(output: &OutputArgs, artifact: &str, manifest: &RunManifest) -> Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, artifact)?;
            let mut mpath = path.clone().into_os_string();
            mpath.push(".manifest.json");
            std::fs::write(mpath, manifest.to_json())?;
        }
        None => {
            println!("{artifact}");
            eprintln!("{}", manifest.to_json());
        }
    }
    Ok(())
}

fn manifest<C: Serialize>(config: &C, seed: Option<u64>, started: Instant) -> RunManifest {
    RunManifest::new(
        std::env::args().collect(),
        config,
        seed,
        started.elapsed().as_millis(),
    )
}

fn run(command: Command) -> Result<()> {
    let started = Instant::now();
    match command {
        Command::Fit { input, output } => {
            let sample = load_paired(&input)?;
            let fit = fit_mle(&sample, &FitConfig::default())?;
            let (m1, m2) = conditional_means(&fit.params)?;
            let artifact = match output.format {
                FormatArg::Json => serde_json::to_string_pretty(&fit).expect("fit serializes"),
                FormatArg::Csv => {
                    let mut s = String::from(
                        "n,theta0,theta1,r,delta,loglik,mu_pi4,mu_3pi4,converged\n",
                    );
                    let _ = writeln!(
                        s,
                        "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
                        fit.residuals.len(),
                        fit.params.theta0.radians(),
                        fit.params.theta1.radians(),
                        fit.params.r,
                        fit.params.delta,
                        fit.loglik,
                        m1.radians(),
                        m2.radians(),
                        fit.converged
                    );
                    s
                }
                FormatArg::Text => {
                    let p = &fit.params;
                    format!(
                        "n            {}\n\
                         theta0       {:.4}\n\
                         theta1       {:.4}\n\
                         r            {:.4}\n\
                         delta        {:.4}\n\
                         loglik       {:.4}\n\
                         mu(pi/4)     {:.4}\n\
                         mu(3pi/4)    {:.4}\n\
                         converged    {}",
                        fit.residuals.len(),
                        p.theta0.radians(),
                        p.theta1.radians(),
                        p.r,
                        p.delta,
                        fit.loglik,
                        m1.radians(),
                        m2.radians(),
                        fit.converged
                    )
                }
            };
            emit(&output, &artifact, &manifest(&input, None, started))
        }
        Command::Gof {
            input,
            b,
            seed,
            lambdas,
            output,
        } => {
            let sample = load_paired(&input)?;
            let mut config = BootstrapConfig::new(b, seed);
            if !lambdas.is_empty() {
                config.lambdas = lambdas;
            }
            let report = classical_bootstrap(&sample, &FitConfig::default(), &config)?;
            let artifact = match output.format {
                FormatArg::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes")
                }
                FormatArg::Csv => {
                    let mut s = String::from("statistic,observed,p_value\n");
                    for ((label, p), (_, obs)) in
                        report.p_values.iter().zip(report.observed.values())
                    {
                        let _ = writeln!(s, "{label},{obs:.6},{p:.6}");
                    }
                    s
                }
                FormatArg::Text => {
                    let mut s = format!("n = {}, B = {b}, seed = {seed}\n", sample.len());
                    let _ = writeln!(s, "{:<10} {:>12} {:>9}", "statistic", "observed", "p");
                    for ((label, p), (_, obs)) in
                        report.p_values.iter().zip(report.observed.values())
                    {
                        let _ = writeln!(s, "{label:<10} {obs:>12.6} {p:>9.4}");
                    }
                    s.trim_end().to_string()
                }
            };
            emit(&output, &artifact, &manifest(&(&input, b, seed), Some(seed), started))
        }
        Command::Power {
            scenario,
            b,
            seed,
            alphas,
            output,
        } => {
            let text = std::fs::read_to_string(&scenario)?;
            let mut scenario: ScenarioConfig =
                toml::from_str(&text).map_err(|e| Error::FormatError(e.to_string()))?;
            if let Some(b) = b {
                scenario.b = b;
            }
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            if !alphas.is_empty() {
                scenario.alphas = alphas;
            }
            let result = warp_speed_power(&scenario, &FitConfig::default())?;
            let artifact = match output.format {
                FormatArg::Json => {
                    serde_json::to_string_pretty(&result).expect("result serializes")
                }
                FormatArg::Csv => {
                    let mut s = String::from("statistic");
                    for a in &result.alphas {
                        let _ = write!(s, ",alpha={a}");
                    }
                    s.push('\n');
                    for (label, row) in result.labels.iter().zip(&result.rates) {
                        let _ = write!(s, "{label}");
                        for r in row {
                            let _ = write!(s, ",{:.4}", r);
                        }
                        s.push('\n');
                    }
                    s
                }
                FormatArg::Text => {
                    let mut s = format!(
                        "{} innovations, n = {}, B = {}, seed = {}\n",
                        scenario.innovation.label(),
                        scenario.n,
                        scenario.b,
                        scenario.seed
                    );
                    let _ = write!(s, "{:<10}", "statistic");
                    for a in &result.alphas {
                        let _ = write!(s, " {:>11}", format!("alpha={a}"));
                    }
                    s.push('\n');
                    for (label, row) in result.labels.iter().zip(&result.rates) {
                        let _ = write!(s, "{label:<10}");
                        for r in row {
                            let _ = write!(s, " {:>10.1}%", 100.0 * r);
                        }
                        s.push('\n');
                    }
                    s.trim_end().to_string()
                }
            };
            emit(
                &output,
                &artifact,
                &manifest(&scenario, Some(scenario.seed), started),
            )
        }
        Command::Autocorr {
            input,
            max_lag,
            output,
        } => {
            let series = load_series(&input)?;
            let coefficients = circular_autocorrelation(&series, max_lag)?;
            let artifact = match output.format {
                FormatArg::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        lag: usize,
                        rho: f64,
                        p_value: f64,
                    }
                    let rows: Vec<Row> = coefficients
                        .iter()
                        .map(|&(lag, rho, p)| Row {
                            lag,
                            rho,
                            p_value: p,
                        })
                        .collect();
                    serde_json::to_string_pretty(&rows).expect("rows serialize")
                }
                FormatArg::Csv => {
                    let mut s = String::from("lag,rho,p_value\n");
                    for (lag, rho, p) in &coefficients {
                        let _ = writeln!(s, "{lag},{rho:.6},{p:.6}");
                    }
                    s
                }
                FormatArg::Text => {
                    let mut s = format!("n = {}\n", series.len());
                    let _ = writeln!(s, "{:<5} {:>9} {:>9}", "lag", "rho", "p");
                    for (lag, rho, p) in &coefficients {
                        let _ = writeln!(s, "{lag:<5} {rho:>9.4} {p:>9.4}");
                    }
                    s.trim_end().to_string()
                }
            };
            emit(&output, &artifact, &manifest(&(&input, max_lag), None, started))
        }
        Command::StackplotData {
            input,
            residuals,
            output,
        } => {
            let series = if residuals {
                let paired = load_paired(&DataArgs {
                    data: input.data.clone(),
                    unit: input.unit,
                    x_col: "x".into(),
                    y_col: "y".into(),
                    dwd_x: None,
                    dwd_x_hour: 6,
                    dwd_y: None,
                    dwd_y_hour: 12,
                    last: input.last,
                })?;
                fit_mle(&paired, &FitConfig::default())?.residuals
            } else {
                load_series(&input)?
            };
            let coords = stackplot_data(&series);
            let artifact = match output.format {
                FormatArg::Json => serde_json::to_string_pretty(&coords).expect("coords serialize"),
                FormatArg::Csv | FormatArg::Text => {
                    let mut s = String::from("angle,stack\n");
                    for (a, k) in &coords {
                        let _ = writeln!(s, "{a:.6},{k}");
                    }
                    s
                }
            };
            emit(&output, &artifact, &manifest(&input, None, started))
        }
        Command::Datasets { command } => match command {
            DatasetsCommand::List => {
                for d in embedded_descriptors() {
                    println!(
                        "{:<16} {:<8} ({}, {})  {}",
                        d.id,
                        match d.angle_unit {
                            AngleUnit::Degrees => "degrees",
                            AngleUnit::Radians => "radians",
                        },
                        d.columns.0,
                        d.columns.1,
                        d.provenance
                    );
                }
                Ok(())
            }
            DatasetsCommand::Show { id } => {
                let (x, y, _) = embedded_raw(&id)?;
                println!("x,y");
                for (a, b) in x.iter().zip(&y) {
                    println!("{a},{b}");
                }
                Ok(())
            }
        },
    }
}
