use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdst_core::geometry::Process;
use mdst_core::harness::output::{coupling_table, longest_edge_table, weight_table};
use mdst_core::harness::verify::run_suite;
use mdst_core::harness::{
    coupling_experiment, ks_two_sample, run_longest_edge_experiment, run_weight_experiment, EmpiricalDistribution,
    ExperimentConfig, Format, RegionMode, Table,
};
use mdst_core::limits::{
    constants_table, lln_constant, max_dickman_batch, mu_prime, qmax1_batch, recomposed_batch, sample_limit,
    DickmanMethod, Family, OngMeanBudget, DEFAULT_COEFF_TOL, DEFAULT_FIXPOINT_ROUNDS, DEFAULT_TAIL_TOL,
};
use mdst_core::{build_mdst, Error, NodeKey, Strategy};
use serde_json::json;

const COLUMNS: &str = "\
Output columns (CSV; JSON carries the same fields per record):
  simulate, couple, longest   n,statistic,value
  constants                   constant,d,alpha,value,value_7dp,exact,stderr,note
  dickman, fixedpoint         n,statistic,value   (--stat summary)
                              index,value         (--stat samples)
  verify                      check,trials,failures,passed,detail

Exit status: 0 on success, 1 when a check fails (a JSON failure record is
written to stderr), 2 on invalid usage.";

#[derive(Parser)]
#[command(name = "mdst", version, about = "Minimal directed spanning trees and on-line nearest-neighbour graphs on random points", after_help = COLUMNS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcessArg {
    Poisson,
    Binomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Brute,
    Indexed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Edge-weight exponent.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Intensities (Poisson) or point counts (binomial), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    n: Vec<f64>,
    /// Replicates per intensity.
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Exponent offset in the slab heights n^(eps - 1/d) and n^(-1/2 - eps).
    #[arg(long, default_value_t = mdst_core::harness::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "poisson")]
    process: ProcessArg,
    #[arg(long, value_enum, default_value = "indexed")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write `series,x,y` plot data to PATH.
    #[arg(long, value_name = "PATH")]
    emit_plot: Option<PathBuf>,
    /// Write the first replicate's points to PATH.
    #[arg(long, value_name = "PATH")]
    dump_points: Option<PathBuf>,
    /// Write the first replicate's tree edges to PATH.
    #[arg(long, value_name = "PATH")]
    dump_graph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    Full,
    Gamma,
    Boundary,
    Intermediate,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Summary,
    Mean,
    Samples,
}

#[derive(Clone, Copy, ValueEnum)]
enum DickmanLaw {
    /// M = max{1-U, U M}.
    MaxDickman,
    /// max{U M', (1-U) M''}.
    Qmax1,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Records,
    Fixpoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    J,
    H,
    G,
}

#[derive(Subcommand)]
enum Command {
    /// Total tree weight per intensity, scaled by n^(alpha/d - 1) when alpha < d.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "full")]
        region: RegionArg,
        /// Fixed boundary slab height, overriding n^(-1/2 - eps).
        #[arg(long)]
        boundary_height: Option<f64>,
    },
    /// Limit constants at (d, alpha).
    Constants {
        #[command(flatten)]
        common: Common,
        /// Estimate mu_prime for d >= 3 by Monte Carlo (--reps clouds at 1e4 and 1e5 points).
        #[arg(long)]
        monte_carlo: bool,
    },
    /// Max-Dickman or Q_max(1) draws.
    Dickman {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "summary")]
        stat: StatArg,
        #[arg(long, value_enum, default_value = "max-dickman")]
        law: DickmanLaw,
        #[arg(long, value_enum, default_value = "records")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
        tail_tol: f64,
        #[arg(long, default_value_t = DEFAULT_FIXPOINT_ROUNDS)]
        rounds: u32,
    },
    /// Draws of the mean-zero fixed points J, H and G.
    Fixedpoint {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "g")]
        family: FamilyArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_COEFF_TOL)]
        coeff_tol: f64,
        #[arg(long, value_enum, default_value = "summary")]
        stat: StatArg,
        /// Draw the right-hand side of the equation instead.
        #[arg(long)]
        recompose: bool,
    },
    /// Property suite: oracle equivalence, record identity, slab decomposition, coupling.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Keep every instance at or below 500 points.
        #[arg(long)]
        quick: bool,
    },
    /// Tree on the base slab against the on-line graph on its projection.
    Couple {
        #[command(flatten)]
        common: Common,
    },
    /// Longest tree edge per intensity; at d = 2 also the distance to Q_max(1).
    Longest {
        #[command(flatten)]
        common: Common,
        /// Q_max(1) draws for the comparison (0 to skip).
        #[arg(long, default_value_t = 100_000)]
        reference_draws: usize,
    },
}

enum Failure {
    Usage(String),
    Check(serde_json::Value),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimension { .. }
            | Error::InvalidParameter { .. }
            | Error::InvalidInput(_)
            | Error::DuplicateLastCoordinate { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl Common {
    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }

    fn config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.d, self.alpha)
            .with_grid(self.n.clone())
            .with_replicates(self.reps)
            .with_seed(self.seed);
        c.epsilon = self.epsilon;
        c.process = match self.process {
            ProcessArg::Poisson => Process::Poisson,
            ProcessArg::Binomial => Process::Binomial,
        };
        c.strategy = match self.strategy {
            StrategyArg::Brute => Strategy::Brute,
            StrategyArg::Indexed => Strategy::Indexed,
        };
        c
    }

    fn refuse_dumps(&self, command: &str) -> Outcome {
        if self.dump_points.is_some() || self.dump_graph.is_some() {
            return Err(Failure::Usage(format!(
                "--dump-points and --dump-graph do not apply to `{command}`"
            )));
        }
        Ok(())
    }

    fn refuse_plot(&self, command: &str) -> Outcome {
        if self.emit_plot.is_some() {
            return Err(Failure::Usage(format!("--emit-plot does not apply to `{command}`")));
        }
        Ok(())
    }

    /// Points and tree of replicate 0 at the first intensity.
    fn dump(&self, config: &ExperimentConfig) -> Outcome {
        if self.dump_points.is_none() && self.dump_graph.is_none() {
            return Ok(());
        }
        config.validate()?;
        let cloud = config.sample(0, 0)?;
        if let Some(path) = &self.dump_points {
            cloud.write_csv(BufWriter::new(File::create(path)?))?;
        }
        if let Some(path) = &self.dump_graph {
            build_mdst(&cloud.points, config.strategy)?.write_csv(BufWriter::new(File::create(path)?))?;
        }
        Ok(())
    }

    fn emit(&self, table: &Table) -> Outcome {
        let stdout = io::stdout();
        table.write(self.format(), stdout.lock())?;
        if let Some(path) = &self.emit_plot {
            table.write_plot(BufWriter::new(File::create(path)?))?;
        }
        Ok(())
    }
}

fn write_samples(format: Format, values: &[f64]) -> Outcome {
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Csv => {
            writeln!(out, "index,value")?;
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{i},{v}")?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut out, values).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sample_output(common: &Common, stat: StatArg, values: Vec<f64>) -> Outcome {
    if let StatArg::Samples = stat {
        common.refuse_plot("--stat samples")?;
        return write_samples(common.format(), &values);
    }
    let dist = EmpiricalDistribution::new(values)?;
    let n = dist.len() as f64;
    let mut table = Table::default();
    match stat {
        StatArg::Mean => {
            table.push(n, "mean", dist.mean);
            table.push(n, "stderr", dist.stderr);
        }
        _ => {
            table.push_summary(n, "", &dist);
            table.push(n, "skewness", dist.skewness());
            table.push(n, "excess_kurtosis", dist.excess_kurtosis());
        }
    }
    common.emit(&table)
}

fn simulate(common: &Common, region: RegionArg, boundary_height: Option<f64>) -> Outcome {
    let mut config = common.config();
    config.boundary_height = boundary_height;
    let mode = match region {
        RegionArg::Full => RegionMode::Full,
        RegionArg::Gamma => RegionMode::Gamma,
        RegionArg::Boundary => RegionMode::Boundary,
        RegionArg::Intermediate => RegionMode::Intermediate,
    };
    let rows = run_weight_experiment(&config, mode)?;
    let mut table = weight_table(&rows);
    if mode == RegionMode::Full {
        let (d, a) = (config.d, config.alpha);
        let target = if a < d as f64 {
            lln_constant(d, a).ok()
        } else if d == 2 {
            mu_prime(d, a, None).ok().map(|c| c.value)
        } else {
            None
        };
        if let Some(t) = target {
            for r in &rows {
                table.push(r.n, "limit", t);
            }
        }
    }
    common.emit(&table)?;
    common.dump(&config)
}

fn constants(common: &Common, monte_carlo: bool) -> Outcome {
    common.refuse_dumps("constants")?;
    common.refuse_plot("constants")?;
    let budget = monte_carlo.then(|| OngMeanBudget {
        replicates: common.reps,
        seed: common.seed,
        ..OngMeanBudget::default()
    });
    let rows = constants_table(common.d, common.alpha, budget.as_ref())?;
    let mut out = io::stdout().lock();
    match common.format() {
        Format::Csv => {
            writeln!(out, "constant,d,alpha,value,value_7dp,exact,stderr,note")?;
            for c in &rows {
                let d = c.name.d().map(|d| d.to_string()).unwrap_or_default();
                let a = c.name.alpha().map(|a| a.to_string()).unwrap_or_default();
                let se = c.stderr.map(|s| s.to_string()).unwrap_or_default();
                let note = c.note.as_deref().unwrap_or("").replace(',', ";");
                writeln!(
                    out,
                    "{},{d},{a},{},{:.7},{},{se},{note}",
                    c.name.label(),
                    c.value,
                    c.value,
                    c.exact
                )?;
            }
        }
        Format::Json => {
            let records: Vec<_> = rows
                .iter()
                .map(|c| {
                    json!({
                        "constant": c.name.label(),
                        "d": c.name.d(),
                        "alpha": c.name.alpha(),
                        "value": c.value,
                        "exact": c.exact,
                        "stderr": c.stderr,
                        "note": c.note,
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &records).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dickman(
    common: &Common,
    samples: usize,
    stat: StatArg,
    law: DickmanLaw,
    method: MethodArg,
    tail_tol: f64,
    rounds: u32,
) -> Outcome {
    common.refuse_dumps("dickman")?;
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let values = match law {
        DickmanLaw::MaxDickman => {
            let method = match method {
                MethodArg::Records => DickmanMethod::Records,
                MethodArg::Fixpoint => DickmanMethod::Fixpoint { rounds },
            };
            max_dickman_batch(common.seed, samples, tail_tol, method)?
        }
        DickmanLaw::Qmax1 => qmax1_batch(common.seed, samples),
    };
    sample_output(common, stat, values)
}

fn fixedpoint(
    common: &Common,
    family: FamilyArg,
    samples: usize,
    coeff_tol: f64,
    stat: StatArg,
    recompose: bool,
) -> Outcome {
    common.refuse_dumps("fixedpoint")?;
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let family = match family {
        FamilyArg::J => Family::J,
        FamilyArg::H => Family::H,
        FamilyArg::G => Family::G,
    };
    let values = if recompose {
        recomposed_batch(family, common.alpha, common.seed, samples, coeff_tol)?
    } else {
        (0..samples as u64)
            .map(|i| sample_limit(family, common.alpha, NodeKey::root(common.seed, i), coeff_tol).map(|s| s.value))
            .collect::<Result<Vec<_>, _>>()?
    };
    sample_output(common, stat, values)
}

fn verify(common: &Common, quick: bool) -> Outcome {
    common.refuse_dumps("verify")?;
    common.refuse_plot("verify")?;
    let checks = run_suite(quick, common.seed)?;
    let mut out = io::stdout().lock();
    match common.format() {
        Format::Csv => {
            writeln!(out, "check,trials,failures,passed,detail")?;
            for c in &checks {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.name,
                    c.trials,
                    c.failures,
                    c.passed(),
                    c.detail.replace(',', ";")
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &checks).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(json!({ "command": "verify", "failed": failed })))
    }
}

fn couple(common: &Common) -> Outcome {
    let config = common.config();
    let rows = coupling_experiment(&config)?;
    common.emit(&coupling_table(&rows))?;
    common.dump(&config)?;
    let dirty: Vec<_> = rows.iter().filter(|r| !r.clean()).collect();
    if dirty.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(json!({ "command": "couple", "failed": dirty })))
    }
}

fn longest(common: &Common, reference_draws: usize) -> Outcome {
    let config = common.config();
    let rows = run_longest_edge_experiment(&config)?;
    let mut table = longest_edge_table(&rows);
    if config.d == 2 && reference_draws > 0 {
        let reference = EmpiricalDistribution::new(qmax1_batch(common.seed ^ 0x716d, reference_draws))?;
        for r in &rows {
            table.push(r.n, "ks_vs_qmax1", ks_two_sample(&r.lengths, &reference));
        }
    }
    common.emit(&table)?;
    common.dump(&config)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Simulate {
            common,
            region,
            boundary_height,
        } => simulate(common, *region, *boundary_height),
        Command::Constants { common, monte_carlo } => constants(common, *monte_carlo),
        Command::Dickman {
            common,
            samples,
            stat,
            law,
            method,
            tail_tol,
            rounds,
        } => dickman(common, *samples, *stat, *law, *method, *tail_tol, *rounds),
        Command::Fixedpoint {
            common,
            family,
            samples,
            coeff_tol,
            stat,
            recompose,
        } => fixedpoint(common, *family, *samples, *coeff_tol, *stat, *recompose),
        Command::Verify { common, quick } => verify(common, *quick),
        Command::Couple { common } => couple(common),
        Command::Longest {
            common,
            reference_draws,
        } => longest(common, *reference_draws),
    }
}

fn check_path(path: &Option<PathBuf>) -> Outcome {
    match path.as_deref().and_then(Path::parent) {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(Failure::Usage(format!("directory {} does not exist", dir.display())))
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Simulate { common, .. }
        | Command::Constants { common, .. }
        | Command::Dickman { common, .. }
        | Command::Fixedpoint { common, .. }
        | Command::Verify { common, .. }
        | Command::Couple { common }
        | Command::Longest { common, .. } => common.clone(),
    };
    let result = [&common.emit_plot, &common.dump_points, &common.dump_graph]
        .into_iter()
        .try_for_each(check_path)
        .and_then(|_| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(record)) => {
            eprintln!("{}", json!({ "status": "check_failed", "record": record }));
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("{}", json!({ "status": "error", "message": msg }));
            ExitCode::from(1)
        }
    }
}
