use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use igq::config::{parse_dimensions, parse_tolerance, ConfigFile, Settings, CONFIG_ENV};
use igq::formats::{
    real_matrix_from_json, state_from_json, state_to_json, CompositeJson, GaugeMapJson, HJStateJson, ObservableJson,
    TrialLogEntry,
};
use igq::report::Status;
use igq::suites::Suite;
use igq_core::classify::classify;
use igq_core::composite::tensor;
use igq_core::dynamics::hj_residual;
use igq_core::measurement::{build_simulation, simulate_measurement};
use igq_core::{tol, OrthogonalMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

/// Alias so clap takes `--n` as one value rather than a repeated list.
type Dimensions = Vec<usize>;

#[derive(Parser)]
#[command(name = "igq", version, about = "Checks and tools for information-geometric quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON-lines report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Dimension, inclusive range (2..5) or list (2,3,5).
        #[arg(long = "n", value_parser = parse_dimensions)]
        dimensions: Option<Dimensions>,
        /// Corpus size for every suite in this run.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance override, CHECK=VALUE. Repeatable.
        #[arg(long = "tol", value_parser = parse_tolerance)]
        tolerances: Vec<(String, f64)>,
        /// JSON config with keys seed, tolerances, dimensions, trials.
        #[arg(long, env = CONFIG_ENV)]
        config: Option<PathBuf>,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a 2N×2N real matrix (JSON array of rows) as a gauge map.
    Classify {
        matrix: PathBuf,
        #[arg(long, default_value_t = tol::BLOCK_FIT)]
        tol: f64,
    },
    /// Simulate repeated measurements of an observable and log each trial.
    Measure {
        #[arg(long)]
        observable: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = igq::config::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor two states into a composite.
    Tensor { first: PathBuf, second: PathBuf },
    /// Hamilton–Jacobi residuals from lattice states at t − Δt, t and t + Δt.
    HjResidual {
        before: PathBuf,
        at: PathBuf,
        after: PathBuf,
        #[arg(long)]
        dt: f64,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify { suite, dimensions, trials, seed, tolerances, config, out } => {
            let cfg = match &config {
                Some(path) => ConfigFile::load(path)?,
                None => ConfigFile::default(),
            };
            let mut settings = Settings::from_config(cfg);
            if let Some(seed) = seed {
                settings.seed = seed;
            }
            if dimensions.is_some() {
                settings.dimensions = dimensions;
            }
            settings.trials_override = trials;
            settings.tolerances.extend(tolerances);
            let mut sink = open_out(out.as_deref())?;
            let (_, summary) = igq::verify(suite, &settings, &mut sink)?;
            sink.flush()?;
            Ok(summary.status == Status::Pass)
        }
        Command::Classify { matrix, tol } => {
            let m = OrthogonalMap::with_tolerance(real_matrix_from_json(read_json(&matrix)?)?, tol)?;
            let g = classify(&m, tol)?;
            print_json(&GaugeMapJson::from(&g))?;
            Ok(g.is_gauge_invariant())
        }
        Command::Measure { observable, state, trials, seed, out } => {
            let obs = read_json::<ObservableJson>(&observable)?.into_observable()?;
            let v = state_from_json(read_json(&state)?)?;
            let n = obs.n();
            let arrangement = build_simulation(obs.basis(), &vec![0.0; n], &vec![0.0; n])?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sink = open_out(out.as_deref())?;
            for trial in 0..trials {
                let (result, output) = simulate_measurement(&arrangement, &v, &mut rng)?;
                serde_json::to_writer(&mut sink, &TrialLogEntry { trial, result, output_state: state_to_json(&output) })?;
                sink.write_all(b"\n")?;
            }
            sink.flush()?;
            Ok(true)
        }
        Command::Tensor { first, second } => {
            let a = state_from_json(read_json(&first)?)?;
            let b = state_from_json(read_json(&second)?)?;
            print_json(&CompositeJson::new(a.n(), b.n(), &tensor(&a, &b)))?;
            Ok(true)
        }
        Command::HjResidual { before, at, after, dt } => {
            let states = [&before, &at, &after]
                .map(|p| read_json::<HJStateJson>(p).and_then(|j| Ok(j.into_state()?)));
            let [b, a, f] = states;
            let (b, a, f) = (b?, a?, f?);
            let provider = |t: f64| Ok(if t < 0.0 { b.clone() } else if t > 0.0 { f.clone() } else { a.clone() });
            let (continuity, hj) = hj_residual(&provider, 0.0, dt)?;
            print_json(&serde_json::json!({ "continuity": continuity, "hamilton_jacobi": hj }))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
