//! Command-line front end.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::acceptance;
use crate::distributions::{
    number_distribution, phase_distribution, NumberDistribution, PhaseDistribution,
};
use crate::error::{Error, Result};
use crate::output::{number_dataset, phase_dataset, write_dataset, Format};
use crate::spin::SpinJ;
use crate::states::{
    cat_state, coherent_state, density_of, squeezed_state, CoherentSpec, PureState,
};

/// Squeezing parameter used for the squeezed-state figure.
pub const FIGURE_ZETA: f64 = 2.6892;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

/// Decimal radians, or `<p>pi`, `<p>pi/<q>` with integer `p`, `q` (`pi/4`, `-3pi/8`).
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let Some(pos) = t.find("pi") else {
        return match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::parse(text, "expected radians or a multiple of pi")),
        };
    };
    let p: i64 = match &t[..pos] {
        "" | "+" => 1,
        "-" => -1,
        s => s
            .parse()
            .map_err(|_| Error::parse(s, "expected an integer multiplier of pi"))?,
    };
    let rest = &t[pos + 2..];
    let q: i64 = if rest.is_empty() {
        1
    } else {
        let Some(den) = rest.strip_prefix('/') else {
            return Err(Error::parse(rest, "expected `/<q>` after pi"));
        };
        match den.parse::<i64>() {
            Ok(q) if q > 0 => q,
            _ => return Err(Error::parse(den, "expected a positive integer denominator")),
        }
    };
    Ok(p as f64 * PI / q as f64)
}

/// `theta,phi[,weight]`, with the weight a complex number such as `1`, `-1`, `0.5+0.5i`.
pub fn parse_component(text: &str) -> Result<CoherentSpec> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(Error::parse(text, "expected theta,phi[,weight]"));
    }
    let theta = parse_angle(parts[0])?;
    let phi = parse_angle(parts[1])?;
    let weight = match parts.get(2) {
        Some(w) => Complex64::from_str(w.trim())
            .map_err(|_| Error::parse(*w, "expected a complex weight such as 1 or 0.5-1i"))?,
        None => Complex64::new(1.0, 0.0),
    };
    CoherentSpec::new(theta, phi, weight)
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn component_arg(s: &str) -> std::result::Result<CoherentSpec, String> {
    parse_component(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Phase grid size (default max(1024, 4j+2))
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Atomic coherent state |theta, phi>
    Coherent {
        /// j as `10`, `21/2` or `10.5`
        #[arg(long)]
        j: SpinJ,
        /// Polar angle in [0, pi]; accepts `pi/4`-style fractions
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true, default_value = "0")]
        phi: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Atomic squeezed state (integer j)
    Squeezed {
        #[arg(long)]
        j: SpinJ,
        /// Squeezing parameter, > 0
        #[arg(long)]
        zeta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Superposition of coherent states
    Cat {
        #[arg(long)]
        j: SpinJ,
        /// theta,phi[,weight]; repeat for each component
        #[arg(
            long = "component",
            required = true,
            value_parser = component_arg,
            allow_hyphen_values = true
        )]
        components: Vec<CoherentSpec>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Datasets for figure 1, 2 or 3
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        number: u8,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance suite
    Check,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinphase",
    version,
    about = "Number and phase distributions of spin-j states"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Coherent { theta: f64, phi: f64 },
    Squeezed { zeta: f64 },
    Cat { components: Vec<CoherentSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    State { j: SpinJ, state: StateSpec },
    Figure(u8),
    Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_grid: Option<usize>,
    pub output_path: PathBuf,
    pub format: Format,
}

impl RunConfig {
    /// Parses command-line arguments; clap reports usage errors itself.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, output) = match cli.command {
            CommandArgs::Coherent {
                j,
                theta,
                phi,
                output,
            } => (
                Command::State {
                    j,
                    state: StateSpec::Coherent { theta, phi },
                },
                Some(output),
            ),
            CommandArgs::Squeezed { j, zeta, output } => (
                Command::State {
                    j,
                    state: StateSpec::Squeezed { zeta },
                },
                Some(output),
            ),
            CommandArgs::Cat {
                j,
                components,
                output,
            } => (
                Command::State {
                    j,
                    state: StateSpec::Cat { components },
                },
                Some(output),
            ),
            CommandArgs::Figure { number, output } => (Command::Figure(number), Some(output)),
            CommandArgs::Check => (Command::Check, None),
        };
        let (n_grid, output_path, format) = match output {
            Some(o) => {
                let format = match o.format {
                    FormatArg::Csv => Format::Csv,
                    FormatArg::Json => Format::Json,
                };
                (o.grid, o.out, format)
            }
            None => (None, PathBuf::from("."), Format::Csv),
        };
        Ok(RunConfig {
            command,
            n_grid,
            output_path,
            format,
        })
    }
}

pub fn default_grid(j: SpinJ) -> usize {
    1024.max(2 * j.twice() as usize + 2)
}

fn tolerance(j: SpinJ) -> f64 {
    if j.twice() <= 120 {
        1e-12
    } else {
        1e-9
    }
}

/// Both distributions of one state plus the metadata written alongside them.
#[derive(Debug, Clone)]
pub struct Computed {
    pub number: NumberDistribution,
    pub phase: PhaseDistribution,
    pub meta: BTreeMap<String, String>,
}

fn build_state(j: SpinJ, state: &StateSpec) -> Result<(PureState, Option<f64>)> {
    Ok(match state {
        StateSpec::Coherent { theta, phi } => (coherent_state(j, *theta, *phi)?, None),
        StateSpec::Squeezed { zeta } => {
            let s = squeezed_state(j, *zeta)?;
            (s.state, Some(s.normalization))
        }
        StateSpec::Cat { components } => {
            let s = cat_state(j, components)?;
            (s.state, Some(s.normalization))
        }
    })
}

/// Builds the state, evaluates `p(m)` and `p(φ)` and checks normalization and positivity.
pub fn compute(j: SpinJ, state: &StateSpec, n_grid: usize) -> Result<Computed> {
    let (psi, normalization) = build_state(j, state)?;
    let rho = density_of(&psi);
    let number = number_distribution(&rho)?;
    let phase = phase_distribution(&rho, n_grid)?;

    let sum_residual = number.total() - 1.0;
    let integral_residual = phase.integral() - 1.0;
    let tol = tolerance(j);
    if sum_residual.abs() > tol || integral_residual.abs() > tol {
        return Err(Error::Consistency(format!(
            "normalization residuals {sum_residual:e} (p(m)) and \
             {integral_residual:e} (p(phi)) exceed {tol:e}"
        )));
    }
    if phase.min() < -1e-12 {
        return Err(Error::Consistency(format!(
            "p(phi) reaches {:e}",
            phase.min()
        )));
    }

    let mut meta = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        meta.insert(k.to_string(), v);
    };
    put("j", j.to_string());
    put("n_grid", n_grid.to_string());
    put("sum_residual", format!("{sum_residual:e}"));
    put("integral_residual", format!("{integral_residual:e}"));
    match state {
        StateSpec::Coherent { theta, phi } => {
            put("state", "coherent".into());
            put("theta", theta.to_string());
            put("phi", phi.to_string());
        }
        StateSpec::Squeezed { zeta } => {
            put("state", "squeezed".into());
            put("zeta", zeta.to_string());
        }
        StateSpec::Cat { components } => {
            put("state", "cat".into());
            let list: Vec<String> = components
                .iter()
                .map(|c| format!("{},{},{}", c.theta(), c.phi(), c.weight()))
                .collect();
            put("components", list.join(";"));
        }
    }
    if let Some(n) = normalization {
        put("normalization", format!("{n:e}"));
    }
    Ok(Computed {
        number,
        phase,
        meta,
    })
}

fn grid_for(j: SpinJ, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| default_grid(j))
}

/// One figure's parameter sets: state, the `j` values for `p(φ)` and for `p(m)`.
pub fn figure_plan(number: u8) -> Result<(StateSpec, Vec<u32>, Vec<u32>)> {
    let cat = || StateSpec::Cat {
        components: vec![
            CoherentSpec::at(FRAC_PI_4, FRAC_PI_4).expect("valid angle"),
            CoherentSpec::at(FRAC_PI_4, FRAC_PI_4 + FRAC_PI_8).expect("valid angle"),
        ],
    };
    match number {
        1 => Ok((
            StateSpec::Coherent {
                theta: FRAC_PI_4,
                phi: FRAC_PI_4,
            },
            vec![10, 20, 30],
            vec![10, 20, 30],
        )),
        2 => Ok((
            StateSpec::Squeezed { zeta: FIGURE_ZETA },
            vec![2, 10, 20],
            vec![10, 20],
        )),
        3 => Ok((cat(), vec![10, 20, 30], vec![10, 20, 30])),
        _ => Err(Error::domain(format!(
            "no figure {number}; choose 1, 2 or 3"
        ))),
    }
}

/// Writes every dataset of one figure into `dir`.
pub fn emit_figure(
    number: u8,
    n_grid: Option<usize>,
    dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>> {
    let (state, phase_js, number_js) = figure_plan(number)?;
    let mut all: Vec<u32> = phase_js.iter().chain(&number_js).copied().collect();
    all.sort_unstable();
    all.dedup();
    let mut files = Vec::new();
    for jj in all {
        let j = SpinJ::integer(jj);
        let mut c = compute(j, &state, grid_for(j, n_grid))?;
        c.meta.insert("figure".into(), number.to_string());
        let stem = format!("fig{number}_j{}", j.file_label());
        if number_js.contains(&jj) {
            files.push(write_dataset(
                dir,
                &format!("{stem}_pm"),
                &number_dataset(&c.number, &c.meta),
                format,
            )?);
        }
        if phase_js.contains(&jj) {
            files.push(write_dataset(
                dir,
                &format!("{stem}_pphi"),
                &phase_dataset(&c.phase, &c.meta),
                format,
            )?);
        }
    }
    Ok(files)
}

fn state_name(state: &StateSpec) -> &'static str {
    match state {
        StateSpec::Coherent { .. } => "coherent",
        StateSpec::Squeezed { .. } => "squeezed",
        StateSpec::Cat { .. } => "cat",
    }
}

#[derive(Debug)]
pub enum Outcome {
    Files(Vec<PathBuf>),
    Check(Vec<acceptance::CriterionResult>),
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::State { j, state } => {
            let c = compute(*j, state, grid_for(*j, config.n_grid))?;
            std::fs::create_dir_all(&config.output_path)?;
            let stem = format!("{}_j{}", state_name(state), j.file_label());
            let dir = &config.output_path;
            Ok(Outcome::Files(vec![
                write_dataset(
                    dir,
                    &format!("{stem}_pm"),
                    &number_dataset(&c.number, &c.meta),
                    config.format,
                )?,
                write_dataset(
                    dir,
                    &format!("{stem}_pphi"),
                    &phase_dataset(&c.phase, &c.meta),
                    config.format,
                )?,
            ]))
        }
        Command::Figure(n) => {
            std::fs::create_dir_all(&config.output_path)?;
            Ok(Outcome::Files(emit_figure(
                *n,
                config.n_grid,
                &config.output_path,
                config.format,
            )?))
        }
        Command::Check => Ok(Outcome::Check(acceptance::run_all())),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Consistency(_) => EXIT_CONSISTENCY,
        Error::Io(_) => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID,
    }
}

/// Parses `args`, runs, prints results, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(Outcome::Files(files)) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Ok(Outcome::Check(results)) => {
            for r in &results {
                println!("{r}");
            }
            if results.iter().all(|r| r.passed) {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("spinphase: {e}");
            exit_code(&e)
        }
    }
}
