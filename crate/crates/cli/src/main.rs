use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use disconc::output::{write_json, write_ndjson, Destination, Header};
use disconc::sweep::{SweepSpec, DEFAULT_TEMPERATURES, DEFAULT_VARIANCES};
use disconc::validate::{Status, ValidateSpec};
use disconc::{crossover, sweep, validate};
use disconc_core::{Average, Channel, QuadratureConfig};

/// Disorder-averaged correlators and concurrence of the XX chain near its
/// critical field. Energies are in units of J.
#[derive(Parser)]
#[command(name = "disconc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate correlators, concurrences and entropies over a grid.
    Sweep(SweepArgs),
    /// Compare the perturbative kernels against the Monte Carlo oracle.
    Validate(ValidateArgs),
    /// Locate the field where disorder starts to raise the concurrence.
    Crossover(CrossoverArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// CSV output file (default: <output-dir>/<command>.csv, else stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Directory for default output files.
    #[arg(long, env = "DISCONC_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Also write the table as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Relative tolerance of the double integrals.
    #[arg(long, default_value_t = QuadratureConfig::two_d().rel_tol)]
    rel_tol: f64,
}

impl OutputArgs {
    fn destination(&self, command: &str) -> Destination {
        Destination::resolve(self.output.clone(), self.output_dir.clone(), command)
    }

    fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig::two_d().with_rel_tol(self.rel_tol)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AverageArg {
    Quenched,
    Annealed,
}

impl From<AverageArg> for Average {
    fn from(a: AverageArg) -> Self {
        match a {
            AverageArg::Quenched => Average::Quenched,
            AverageArg::Annealed => Average::Annealed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    /// Random bond couplings.
    Coupling,
    /// Random site fields (oracle only).
    Field,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Coupling => Channel::Coupling,
            ChannelArg::Field => Channel::Field,
        }
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.8)]
    b_min: f64,
    #[arg(long, default_value_t = 1.2)]
    b_max: f64,
    /// Number of field values, including both ends.
    #[arg(long, default_value_t = 41)]
    steps: usize,
    /// Temperatures; 0 is the ground state.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_TEMPERATURES)]
    temperatures: Vec<f64>,
    /// Disorder variances Δ.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_VARIANCES)]
    variances: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values = ["quenched", "annealed"])]
    averages: Vec<AverageArg>,
    /// Accept variances above the perturbative ceiling.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1.01)]
    b: f64,
    #[arg(long, default_value_t = 0.02)]
    temperature: f64,
    #[arg(long, default_value_t = 5e-4)]
    variance: f64,
    #[arg(long, value_enum, default_value_t = ChannelArg::Coupling)]
    channel: ChannelArg,
    #[arg(long, value_delimiter = ',', default_values = ["quenched", "annealed"])]
    averages: Vec<AverageArg>,
    /// Correlator offsets R whose slopes are compared.
    #[arg(long, value_delimiter = ',', default_values_t = [1u32])]
    offsets: Vec<u32>,
    #[arg(long, default_value_t = 128)]
    n_sites: usize,
    /// Antithetic pairs per average.
    #[arg(long, default_value_t = 4000)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Fraction of central sites used for averaging.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    bulk_window: f64,
    /// Write every realization as NDJSON.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CrossoverArgs {
    #[arg(long, value_enum, default_value_t = AverageArg::Quenched)]
    average: AverageArg,
    #[arg(long, default_value_t = 0.02)]
    temperature: f64,
    #[arg(long, default_value_t = 1e-3)]
    variance: f64,
    /// Concurrence distance, 1 or 2.
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 0.02)]
    b_min: f64,
    #[arg(long, default_value_t = 2.0)]
    b_max: f64,
    /// Coarse scan step.
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// Resolution of the bisection.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<bool> {
    let spec = SweepSpec {
        b_min: a.b_min,
        b_max: a.b_max,
        steps: a.steps,
        temperatures: a.temperatures.clone(),
        variances: a.variances.clone(),
        averages: a.averages.iter().map(|&x| x.into()).collect(),
        force: a.force,
    };
    let rows = sweep::run(&spec, &a.out.quadrature())?;
    let header = Header::new("sweep", None)
        .param("j", disconc::J)
        .param("b_min", spec.b_min)
        .param("b_max", spec.b_max)
        .param("steps", spec.steps)
        .param("temperatures", join(&spec.temperatures))
        .param("variances", join(&spec.variances))
        .param("rel_tol", a.out.rel_tol);
    a.out.destination("sweep").write_csv(&header, &rows)?;
    if let Some(p) = &a.out.json {
        write_json(p, &header, &rows)?;
    }
    Ok(true)
}

fn cmd_validate(a: ValidateArgs) -> anyhow::Result<bool> {
    let spec = ValidateSpec {
        b: a.b,
        temperature: a.temperature,
        variance: a.variance,
        channel: a.channel.into(),
        averages: a.averages.iter().map(|&x| x.into()).collect(),
        offsets: a.offsets.clone(),
        n_sites: a.n_sites,
        n_samples: a.samples,
        seed: a.seed,
        bulk_window: a.bulk_window,
    };
    let report = validate::run(&spec, &a.out.quadrature(), a.dump.is_some())?;
    let header = Header::new("validate", Some(spec.seed))
        .param("j", disconc::J)
        .param("b", spec.b)
        .param("temperature", spec.temperature)
        .param("variance", spec.variance)
        .param("n_sites", spec.n_sites)
        .param("samples", spec.n_samples)
        .param("bulk_window", spec.bulk_window);
    a.out.destination("validate").write_csv(&header, &report.checks)?;
    if let Some(p) = &a.out.json {
        write_json(p, &header, &report.checks)?;
    }
    if let Some(p) = &a.dump {
        write_ndjson(p, &report.samples)?;
    }
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        eprintln!("{status} {} {} R={}", c.check, c.average, c.r);
    }
    Ok(report.passed())
}

fn cmd_crossover(a: CrossoverArgs) -> anyhow::Result<bool> {
    let spec = crossover::CrossoverSpec {
        average: a.average.into(),
        temperature: a.temperature,
        variance: a.variance,
        r: a.r,
        b_min: a.b_min,
        b_max: a.b_max,
        step: a.step,
        tolerance: a.tolerance,
    };
    let row = crossover::run(&spec, &a.out.quadrature())?;
    let header = Header::new("crossover", None)
        .param("j", disconc::J)
        .param("step", spec.step)
        .param("tolerance", spec.tolerance);
    let rows = [row];
    a.out.destination("crossover").write_csv(&header, &rows)?;
    if let Some(p) = &a.out.json {
        write_json(p, &header, &rows)?;
    }
    match rows[0].b_c {
        Some(b) => eprintln!("B_c = {b:.4}"),
        None => eprintln!("no crossover in [{}, {}]", spec.b_min, spec.b_max),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Crossover(a) => cmd_crossover(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
