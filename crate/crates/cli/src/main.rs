//! `thermdec`: thermal-emission decoherence and heating rates from the command line.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Settings;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<thermal_decoherence::Error> for CliError {
    fn from(e: thermal_decoherence::Error) -> Self {
        use thermal_decoherence::Error as E;
        match e {
            E::Argument(_) | E::Parse { .. } | E::Validation(_) => CliError::Config(e.to_string()),
            E::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "thermdec", version, about = "Decoherence and heating of rigid bodies by thermal photon emission")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total and spectral photon emission rate of a small particle.
    EmissionRate(EmissionArgs),
    /// Localization rate over a grid of rotation angles and displacements.
    DecoherenceMap(MapArgs),
    /// Center-of-mass and rotational heating versus temperature or aspect ratio.
    HeatingCurves(HeatingArgs),
    /// Surface-emission rates of a body larger than the thermal wavelength.
    LargeParticle(LargeArgs),
    /// Truncated angular-momentum dynamics of a linear rotor.
    RotorSim(RotorArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// key = value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Optical-constant CSV, or `builtin:silica`.
    #[arg(long)]
    material: Option<String>,
    /// Temperature [K].
    #[arg(long)]
    temp: Option<String>,
    /// sphere, spheroid or ellipsoid.
    #[arg(long)]
    shape: Option<String>,
    /// Sphere diameter [m].
    #[arg(long)]
    diameter: Option<String>,
    /// Spheroid semi-axis along the symmetry axis [m].
    #[arg(long)]
    l_par: Option<String>,
    /// Spheroid transverse semi-axis [m].
    #[arg(long)]
    l_perp: Option<String>,
    /// Ellipsoid semi-axes `l1,l2,l3` [m].
    #[arg(long)]
    axes: Option<String>,
    /// Mass [amu].
    #[arg(long)]
    mass_amu: Option<String>,
    /// Mass density [kg/m³].
    #[arg(long)]
    density: Option<String>,
    /// exact or approximate depolarization factors.
    #[arg(long)]
    depolarization: Option<String>,
    /// Relative tolerance of frequency integrals.
    #[arg(long)]
    tol: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Exit with status 3 when a validity warning is raised.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct EmissionArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[command(flatten)]
    common: Common,
    /// Rotation angles [rad]: `a,b,c` or `start:stop:count`; `pi` suffix allowed.
    #[arg(long, allow_hyphen_values = true)]
    thetas: Option<String>,
    /// Displacements along the axis [m], same grid syntax.
    #[arg(long)]
    dx: Option<String>,
    /// Common rotation and translation axis `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<String>,
}

#[derive(Args, Debug)]
struct HeatingArgs {
    #[command(flatten)]
    common: Common,
    /// Temperature grid [K].
    #[arg(long)]
    temps: Option<String>,
    /// Aspect-ratio grid ℓ∥/ℓ⊥ at fixed volume.
    #[arg(long)]
    aspects: Option<String>,
    /// Trap frequency [Hz] for phonon-rate columns.
    #[arg(long)]
    trap_freq_hz: Option<String>,
}

#[derive(Args, Debug)]
struct LargeArgs {
    #[command(flatten)]
    common: Common,
    /// material or black-body.
    #[arg(long)]
    emissivity: Option<String>,
    /// Surface tiling nodes in the polar direction.
    #[arg(long)]
    surface_polar: Option<String>,
    /// Surface tiling nodes in the azimuthal direction.
    #[arg(long)]
    surface_azimuth: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    thetas: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<String>,
}

#[derive(Args, Debug)]
struct RotorArgs {
    #[command(flatten)]
    common: Common,
    /// Largest angular momentum ℓ kept in the basis.
    #[arg(long)]
    lmax: Option<String>,
    /// Wavepacket concentration.
    #[arg(long)]
    kappa: Option<String>,
    /// Orientational decoherence rate [1/s]; computed from the particle when absent.
    #[arg(long)]
    gamma_or: Option<String>,
    /// First orientation `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Second orientation `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    m_prime: Option<String>,
    /// Final time [s].
    #[arg(long)]
    t_final: Option<String>,
    /// Time step [s].
    #[arg(long)]
    dt: Option<String>,
    /// Free-rotation constant B [1/s].
    #[arg(long)]
    rotation_constant: Option<String>,
    /// Store every n-th step.
    #[arg(long)]
    record_every: Option<String>,
    /// Density-matrix entries to write, `i:j` pairs separated by commas.
    #[arg(long)]
    entries: Option<String>,
}

const COMMON_KEYS: &[&str] = &[
    "material", "temp", "shape", "diameter", "l-par", "l-perp", "axes", "mass-amu", "density",
    "depolarization", "tol", "out", "format", "strict",
];

fn settings(common: &Common, extra: &[(&str, &Option<String>)], allowed: &[&str]) -> Result<Settings, CliError> {
    let mut s = match &common.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    for (key, value) in [
        ("material", &common.material),
        ("temp", &common.temp),
        ("shape", &common.shape),
        ("diameter", &common.diameter),
        ("l-par", &common.l_par),
        ("l-perp", &common.l_perp),
        ("axes", &common.axes),
        ("mass-amu", &common.mass_amu),
        ("density", &common.density),
        ("depolarization", &common.depolarization),
        ("tol", &common.tol),
        ("out", &common.out),
        ("format", &common.format),
    ]
    .into_iter()
    .chain(extra.iter().copied())
    {
        s.set(key, value.as_ref());
    }
    s.set_flag("strict", common.strict);
    let keys: Vec<&str> = COMMON_KEYS.iter().chain(allowed).copied().collect();
    s.check_keys(&keys)?;
    Ok(s)
}

fn run(cli: Cli) -> Result<(Vec<String>, bool), CliError> {
    let s = match &cli.command {
        Command::EmissionRate(a) => settings(&a.common, &[], &[])?,
        Command::DecoherenceMap(a) => settings(
            &a.common,
            &[("thetas", &a.thetas), ("dx", &a.dx), ("axis", &a.axis)],
            &["thetas", "dx", "axis"],
        )?,
        Command::HeatingCurves(a) => settings(
            &a.common,
            &[("temps", &a.temps), ("aspects", &a.aspects), ("trap-freq-hz", &a.trap_freq_hz)],
            &["temps", "aspects", "trap-freq-hz"],
        )?,
        Command::LargeParticle(a) => settings(
            &a.common,
            &[
                ("emissivity", &a.emissivity),
                ("surface-polar", &a.surface_polar),
                ("surface-azimuth", &a.surface_azimuth),
                ("thetas", &a.thetas),
                ("dx", &a.dx),
                ("axis", &a.axis),
            ],
            &["emissivity", "surface-polar", "surface-azimuth", "thetas", "dx", "axis"],
        )?,
        Command::RotorSim(a) => settings(
            &a.common,
            &[
                ("lmax", &a.lmax),
                ("kappa", &a.kappa),
                ("gamma-or", &a.gamma_or),
                ("m", &a.m),
                ("m-prime", &a.m_prime),
                ("t-final", &a.t_final),
                ("dt", &a.dt),
                ("rotation-constant", &a.rotation_constant),
                ("record-every", &a.record_every),
                ("entries", &a.entries),
            ],
            &["lmax", "kappa", "gamma-or", "m", "m-prime", "t-final", "dt", "rotation-constant", "record-every", "entries"],
        )?,
    };
    let strict = s.flag("strict")?;
    let warnings = match cli.command {
        Command::EmissionRate(_) => commands::emission_rate(&s)?,
        Command::DecoherenceMap(_) => commands::decoherence_map(&s)?,
        Command::HeatingCurves(_) => commands::heating_curves(&s)?,
        Command::LargeParticle(_) => commands::large_particle(&s)?,
        Command::RotorSim(_) => commands::rotor_sim(&s)?,
    };
    Ok((warnings, strict))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((warnings, strict)) => {
            if strict && !warnings.is_empty() {
                eprintln!("error: {} validity warning(s) with --strict", warnings.len());
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
