//! `capbern` command-line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capbern::bernstein::{sikkema_constant, BernsteinImage, MultiDegree};
use capbern::capacity::{Capacity, CapacitySpec, CheckMode, GroundSpace};
use capbern::choquet::{choquet_integral, choquet_integral_oracle, choquet_lp_norm, AtomFunction};
use capbern::experiments::{parse_config, run_experiment};
use capbern::format::{fmt_f64, to_json_string};
use capbern::randomfn::{
    choquet_modulus, euclidean_modulus, stochastic_modulus, FamilySpec, Grid, RandomFunction, FAMILY_CATALOG,
};
use capbern::stochastic::{deviation_tail_bound, max_deviation, sample_order_statistics, SeededStream};
use capbern::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const THREADS_ENV: &str = "CAPBERN_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "capbern",
    version,
    about = "Choquet integrals and Bernstein approximation of random functions"
)]
struct Cli {
    /// Worker threads (defaults to $CAPBERN_THREADS, then to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choquet integral (or L^p norm) of a function given by its atom values.
    Integrate {
        #[arg(long)]
        capacity: PathBuf,
        /// Comma-separated values, one per atom.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// `all` or comma-separated atom indices.
        #[arg(long, default_value = "all")]
        subset: String,
        #[arg(long, value_enum, default_value_t = Method::Sorted)]
        method: Method,
        /// Quadrature points per half-line for the oracle method.
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        /// Print the Choquet L^p norm over the whole space instead.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Monotonicity, subadditivity and submodularity of a capacity.
    CapacityCheck {
        #[arg(long)]
        capacity: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
    },
    /// Choquet L^p modulus of a built-in family, or its sample modulus with `--atom`.
    Modulus {
        #[arg(long)]
        capacity: PathBuf,
        /// Family name or JSON object.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Comma-separated deltas (one per axis; a single value for `--atom`).
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        atom: Option<usize>,
    },
    /// Uniform error of the tensor Bernstein operator per atom, with the modulus bound.
    Approx {
        #[arg(long)]
        family: String,
        #[arg(long)]
        capacity: Option<PathBuf>,
        /// Number of atoms when no capacity is given.
        #[arg(long, default_value_t = 1)]
        atoms: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Comma-separated degrees, one per axis, or one for all.
        #[arg(long)]
        degree: String,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Samples one row of random nodes and evaluates the exceedance bound.
    Stochastic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Distortion slope at 0; read from `--capacity` when omitted.
        #[arg(long)]
        u_prime0: Option<f64>,
        #[arg(long)]
        capacity: Option<PathBuf>,
    },
    /// Runs an experiment config, writing rows as CSV and a JSON summary to stdout.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lists the built-in random-function families.
    ListFamilies,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Sorted,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Analytic,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid argument `{arg}`: {message}")]
    Argument { arg: &'static str, message: String },
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn load_capacity(path: &Path) -> CliResult<Capacity> {
    let text = read(path)?;
    let spec: CapacitySpec = serde_json::from_str(&text).map_err(|e| Error::Config {
        key: "capacity".into(),
        message: e.to_string(),
    })?;
    Ok(spec.build()?)
}

fn parse_list<T: std::str::FromStr>(arg: &'static str, text: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|s| {
            s.trim().parse::<T>().map_err(|e| CliError::Argument {
                arg,
                message: format!("`{}`: {e}", s.trim()),
            })
        })
        .collect()
}

fn parse_family(text: &str) -> CliResult<FamilySpec> {
    let json = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        json!({ "name": text }).to_string()
    };
    serde_json::from_str(&json).map_err(|e| CliError::Argument {
        arg: "family",
        message: e.to_string(),
    })
}

fn default_grid(dim: usize, grid: Option<usize>) -> CliResult<Grid> {
    Ok(match grid {
        Some(g) => Grid::new(dim, g)?,
        None => Grid::default_for(dim)?,
    })
}

fn integrate(
    capacity: &Path,
    values: &str,
    subset: &str,
    method: Method,
    steps: usize,
    p: Option<f64>,
) -> CliResult<String> {
    let cap = load_capacity(capacity)?;
    let f = AtomFunction::new(parse_list("values", values)?)?;
    if let Some(p) = p {
        return Ok(fmt_f64(choquet_lp_norm(&f, &cap, p)?));
    }
    let domain = if subset.trim() == "all" {
        cap.full()
    } else {
        cap.space().subset_from_indices(&parse_list("subset", subset)?)?
    };
    let value = match method {
        Method::Sorted => choquet_integral(&f, &cap, domain)?.value,
        Method::Oracle => choquet_integral_oracle(&f, &cap, domain, steps)?.value,
    };
    Ok(fmt_f64(value))
}

fn capacity_check(capacity: &Path, mode: Mode) -> CliResult<String> {
    let cap = load_capacity(capacity)?;
    let mode = match mode {
        Mode::Exhaustive => CheckMode::Exhaustive,
        Mode::Analytic => CheckMode::Analytic,
    };
    Ok(to_json_string(&cap.check_properties(mode)?))
}

#[allow(clippy::too_many_arguments)]
fn modulus(
    capacity: &Path,
    family: &str,
    dim: usize,
    delta: &str,
    p: f64,
    grid: Option<usize>,
    atom: Option<usize>,
) -> CliResult<String> {
    let cap = load_capacity(capacity)?;
    let f = parse_family(family)?.build(cap.space(), dim)?;
    let grid = default_grid(dim, grid)?;
    let deltas: Vec<f64> = parse_list("delta", delta)?;
    let value = match atom {
        Some(w) => {
            if deltas.len() != 1 {
                return Err(CliError::Argument {
                    arg: "delta",
                    message: "the sample modulus takes a single delta".into(),
                });
            }
            stochastic_modulus(&f, deltas[0], w, &grid)?
        }
        None => choquet_modulus(&f, &cap, &deltas, p, &grid)?,
    };
    Ok(fmt_f64(value))
}

fn approx(
    family: &str,
    capacity: Option<&Path>,
    atoms: usize,
    dim: usize,
    degree: &str,
    grid: Option<usize>,
) -> CliResult<String> {
    let space = match capacity {
        Some(path) => load_capacity(path)?.space().clone(),
        None => GroundSpace::with_atoms(atoms)?,
    };
    let f: RandomFunction = parse_family(family)?.build(&space, dim)?;
    let mut degrees: Vec<usize> = parse_list("degree", degree)?;
    if degrees.len() == 1 {
        degrees = vec![degrees[0]; dim];
    }
    let degrees = MultiDegree::new(degrees)?;
    let grid = default_grid(dim, grid)?;
    let image = BernsteinImage::new(&f, &degrees)?;
    let table = f.tabulate(&grid)?;
    let m = space.atom_count();
    let mut errors = vec![0.0f64; m];
    for flat in 0..grid.len() {
        let approx = image.eval(&grid.point(flat))?;
        for w in 0..m {
            errors[w] = errors[w].max((approx[w] - table.value(flat, w)).abs());
        }
    }
    let delta = 1.0 / (degrees.min() as f64).sqrt();
    let constant = if dim == 1 { sikkema_constant() } else { 3.0 };
    let moduli: Vec<f64> = (0..m).map(|w| euclidean_modulus(&table, delta, w)).collect();
    let bounds: Vec<f64> = moduli.iter().map(|o| constant * o).collect();
    Ok(to_json_string(&json!({
        "degrees": degrees.degrees(),
        "delta": delta,
        "constant": constant,
        "sup_error": errors,
        "modulus": moduli,
        "bound": bounds,
    })))
}

#[allow(clippy::too_many_arguments)]
fn stochastic(
    n: usize,
    seed: u64,
    index: u64,
    epsilon: Option<f64>,
    r: Option<f64>,
    u_prime0: Option<f64>,
    capacity: Option<&Path>,
) -> CliResult<String> {
    let row = sample_order_statistics(n, &SeededStream::new(seed, index))?;
    let mut out = json!({
        "n": n,
        "seed": seed,
        "index": index,
        "max_deviation": max_deviation(&row),
    });
    if let (Some(eps), Some(r)) = (epsilon, r) {
        let slope = match (u_prime0, capacity) {
            (Some(s), _) => s,
            (None, Some(path)) => match load_capacity(path)?.repr() {
                capbern::capacity::CapacityRepr::Distorted { distortion, .. } => distortion.finite_slope_at_zero()?,
                _ => {
                    return Err(CliError::Argument {
                        arg: "capacity",
                        message: "a distorted probability capacity is required".into(),
                    })
                }
            },
            (None, None) => {
                return Err(CliError::Argument {
                    arg: "u-prime0",
                    message: "give --u-prime0 or --capacity".into(),
                })
            }
        };
        out["tail_bound"] = json!(deviation_tail_bound(n, eps, r, slope)?);
    }
    Ok(to_json_string(&out))
}

fn experiment(config: &Path, seed: Option<u64>, out: Option<&Path>) -> CliResult<(String, bool)> {
    let text = read(config)?;
    let mut parsed = parse_config(&text)?;
    if seed.is_some() {
        parsed.seed = seed;
    }
    let resolved = parsed.resolve()?;
    let result = run_experiment(&resolved)?;
    if let Some(path) = out {
        fs::write(path, result.to_csv()).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok((to_json_string(&result.summary()), result.all_pass()))
}

fn list_families() -> String {
    FAMILY_CATALOG
        .iter()
        .map(|(name, formula)| format!("{name}\t{formula}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| CliError::Argument {
                arg: "CAPBERN_THREADS",
                message: format!("`{v}` is not a thread count"),
            })?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        // a pool may already exist when embedded; the default one is then kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<(String, bool)> {
    configure_threads(cli.threads)?;
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Integrate {
            capacity,
            values,
            subset,
            method,
            steps,
            p,
        } => ok(integrate(&capacity, &values, &subset, method, steps, p)?),
        Command::CapacityCheck { capacity, mode } => ok(capacity_check(&capacity, mode)?),
        Command::Modulus {
            capacity,
            family,
            dim,
            delta,
            p,
            grid,
            atom,
        } => ok(modulus(&capacity, &family, dim, &delta, p, grid, atom)?),
        Command::Approx {
            family,
            capacity,
            atoms,
            dim,
            degree,
            grid,
        } => ok(approx(&family, capacity.as_deref(), atoms, dim, &degree, grid)?),
        Command::Stochastic {
            n,
            seed,
            index,
            epsilon,
            r,
            u_prime0,
            capacity,
        } => ok(stochastic(n, seed, index, epsilon, r, u_prime0, capacity.as_deref())?),
        Command::Experiment { config, seed, out } => experiment(&config, seed, out.as_deref()),
        Command::ListFamilies => ok(list_families()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((output, all_pass)) => {
            println!("{output}");
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
