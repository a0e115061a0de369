//! Command-line front end: argument parsing, config files and dispatch.

mod commands;
pub mod ranges;
pub mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::model::{SymmetryMode, UnitSystem, HBAR_C_MEV_FM, PROTON_REST_ENERGY_MEV};
use ranges::{parse_float_range, parse_kappa_range, parse_unsigned_range};
pub use table::{format_float, Cell, Format, Table};

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for a physics or verification failure.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for a usage error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dirac-pdm",
    version,
    about = "Spin and pseudospin bound states of the Dirac equation with a position-dependent mass"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic energy levels over parameter ranges.
    #[command(args_override_self = true)]
    Spectrum(CommonArgs),
    /// Sampled radial wavefunction of one bound state.
    #[command(args_override_self = true)]
    Wavefunction(WaveArgs),
    /// Compare analytic levels with the shooting solver.
    #[command(args_override_self = true)]
    Verify(CommonArgs),
    /// Approximation gap along a sequence of b values.
    #[command(args_override_self = true)]
    Sweep(CommonArgs),
    /// Special cases: Schrodinger limit, s waves, constant mass, duality.
    #[command(args_override_self = true)]
    Limits(LimitArgs),
}

#[derive(Debug, Clone, Default, Args)]
struct CommonArgs {
    /// spin, pseudospin or both.
    #[arg(long)]
    mode: Option<String>,
    /// Vector coupling q: value, list `a,b,c` or range `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Mass parameter b (same range syntax as --q).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Constant potential A, in the active energy unit.
    #[arg(long = "A", visible_alias = "a", allow_hyphen_values = true)]
    a: Option<String>,
    /// Radial quantum number: value, list or inclusive range `lo:hi`.
    #[arg(long)]
    n: Option<String>,
    /// Spin-orbit number; zero is dropped from ranges.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// natural (m0 = hbar_c = 1) or physical (MeV, fm).
    #[arg(long)]
    units: Option<String>,
    /// Rest energy in MeV for physical units.
    #[arg(long)]
    m0: Option<String>,
    /// hbar*c in MeV fm for physical units.
    #[arg(long)]
    hbarc: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allowed |E_numeric - E_analytic| for verify.
    #[arg(long)]
    tol: Option<String>,
    /// Outer radius in units of 1/eps.
    #[arg(long)]
    rmax: Option<String>,
    /// Inner grid radius in units of 1/eps (wavefunction tables).
    #[arg(long)]
    rmin: Option<String>,
    /// Integration steps per shooting sweep.
    #[arg(long)]
    steps: Option<String>,
    /// Number of grid points (wavefunction tables).
    #[arg(long)]
    points: Option<String>,
    /// Flat key=value file mirroring the long flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct WaveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// dominant, companion or both.
    #[arg(long)]
    component: Option<String>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("limit").required(true).args(["nonrel", "s_wave", "constant_mass", "duality"])))]
struct LimitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Orbital number for the Schrodinger limit.
    #[arg(long)]
    l: Option<String>,
    /// Schrodinger-limit wavefunction table.
    #[arg(long)]
    nonrel: bool,
    /// s-wave levels from the closed s-wave condition.
    #[arg(long)]
    s_wave: bool,
    /// Constant-mass spectra (b = 0, A = 0).
    #[arg(long)]
    constant_mass: bool,
    /// Variable/constant mass pairing at q = b/2.
    #[arg(long)]
    duality: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Wavefunction,
    Verify,
    Sweep,
    Limits(LimitKind),
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Wavefunction => "wavefunction",
            CommandKind::Verify => "verify",
            CommandKind::Sweep => "sweep",
            CommandKind::Limits(_) => "limits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Nonrelativistic,
    SWave,
    ConstantMass,
    Duality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentChoice {
    Dominant,
    Companion,
    Both,
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub modes: Vec<SymmetryMode>,
    pub q: Vec<f64>,
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    pub n: Vec<u32>,
    pub kappa: Vec<i32>,
    pub l: Vec<u32>,
    pub units: UnitSystem,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: f64,
    /// Outer radius in units of `1/ε`; command-specific default when absent.
    pub r_max: Option<f64>,
    pub r_min: Option<f64>,
    pub steps: Option<usize>,
    pub points: Option<usize>,
    pub component: ComponentChoice,
}

const KEYS: &[&str] = &[
    "mode",
    "q",
    "b",
    "A",
    "n",
    "kappa",
    "l",
    "units",
    "m0",
    "hbarc",
    "format",
    "out",
    "tol",
    "rmax",
    "rmin",
    "steps",
    "points",
    "component",
];

type Settings = BTreeMap<&'static str, String>;

fn read_config_file(path: &PathBuf) -> Result<Settings> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        let key = key.trim().trim_start_matches("--");
        let key = if key == "a" { "A" } else { key };
        let known = KEYS.iter().find(|k| **k == key).ok_or_else(|| {
            Error::Config(format!("{}:{}: unknown key `{key}`", path.display(), i + 1))
        })?;
        out.insert(known, value.trim().to_string());
    }
    Ok(out)
}

fn overlay(settings: &mut Settings, common: &CommonArgs) {
    let flags: [(&'static str, &Option<String>); 14] = [
        ("mode", &common.mode),
        ("q", &common.q),
        ("b", &common.b),
        ("A", &common.a),
        ("n", &common.n),
        ("kappa", &common.kappa),
        ("units", &common.units),
        ("m0", &common.m0),
        ("hbarc", &common.hbarc),
        ("format", &common.format),
        ("tol", &common.tol),
        ("rmax", &common.rmax),
        ("rmin", &common.rmin),
        ("steps", &common.steps),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            settings.insert(key, v.clone());
        }
    }
    if let Some(v) = &common.points {
        settings.insert("points", v.clone());
    }
    if let Some(p) = &common.out {
        settings.insert("out", p.to_string_lossy().into_owned());
    }
}

struct Defaults {
    mode: &'static str,
    q: &'static str,
    b: &'static str,
    a: &'static str,
    n: &'static str,
    kappa: &'static str,
    tol: f64,
}

fn defaults(command: CommandKind) -> Defaults {
    let base = Defaults {
        mode: "both",
        q: "1",
        b: "0",
        a: "0",
        n: "0",
        kappa: "1",
        tol: 1e-6,
    };
    match command {
        CommandKind::Spectrum => Defaults {
            n: "0:3",
            kappa: "-2,-1,1,2",
            ..base
        },
        CommandKind::Wavefunction => Defaults {
            mode: "spin",
            ..base
        },
        CommandKind::Verify => Defaults {
            q: "0.5,1",
            b: "0,0.1,0.3",
            a: "0,0.2",
            n: "0:3",
            kappa: "-2,-1,1,2",
            ..base
        },
        CommandKind::Sweep => Defaults {
            b: "0.2,0.1,0.05,0.025",
            ..base
        },
        CommandKind::Limits(_) => Defaults {
            kappa: "-1,1",
            ..base
        },
    }
}

fn parse_modes(text: &str) -> Result<Vec<SymmetryMode>> {
    match text.trim() {
        "both" => Ok(vec![SymmetryMode::Spin, SymmetryMode::Pseudospin]),
        other => other.parse::<SymmetryMode>().map(|m| vec![m]).map_err(|_| {
            Error::Config(format!(
                "unknown mode `{other}` (expected spin, pseudospin or both)"
            ))
        }),
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, text: &str) -> Result<T> {
    text.trim()
        .parse::<T>()
        .map_err(|_| Error::Config(format!("invalid value `{text}` for --{key}")))
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!(
            "--{key} must be positive and finite, got {v}"
        )))
    }
}

impl RunConfig {
    fn resolve(command: CommandKind, s: &Settings) -> Result<Self> {
        let d = defaults(command);
        let get = |key: &str, fallback: &'static str| -> String {
            s.get(key).cloned().unwrap_or_else(|| fallback.to_string())
        };
        let units = match get("units", "natural").trim() {
            "natural" => UnitSystem::Natural,
            "physical" => UnitSystem::Physical {
                m0_mev: positive(
                    "m0",
                    s.get("m0")
                        .map_or(Ok(PROTON_REST_ENERGY_MEV), |v| parse_scalar("m0", v))?,
                )?,
                hbar_c_mev_fm: positive(
                    "hbarc",
                    s.get("hbarc")
                        .map_or(Ok(HBAR_C_MEV_FM), |v| parse_scalar("hbarc", v))?,
                )?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown units `{other}` (expected natural or physical)"
                )))
            }
        };
        if units == UnitSystem::Natural && (s.contains_key("m0") || s.contains_key("hbarc")) {
            return Err(Error::Config(
                "--m0/--hbarc require --units physical".into(),
            ));
        }
        let opt_f64 = |key: &str| -> Result<Option<f64>> {
            s.get(key)
                .map(|v| parse_scalar::<f64>(key, v).and_then(|x| positive(key, x)))
                .transpose()
        };
        let opt_usize = |key: &str| -> Result<Option<usize>> {
            s.get(key)
                .map(|v| parse_scalar::<usize>(key, v))
                .transpose()
        };
        let component = match get("component", "dominant").trim() {
            "dominant" => ComponentChoice::Dominant,
            "companion" => ComponentChoice::Companion,
            "both" => ComponentChoice::Both,
            other => {
                return Err(Error::Config(format!(
                    "unknown component `{other}` (expected dominant, companion or both)"
                )))
            }
        };
        let cfg = Self {
            command,
            modes: parse_modes(&get("mode", d.mode))?,
            q: parse_float_range("q", &get("q", d.q))?,
            b: parse_float_range("b", &get("b", d.b))?,
            a: parse_float_range("A", &get("A", d.a))?,
            n: parse_unsigned_range("n", &get("n", d.n))?,
            kappa: parse_kappa_range(&get("kappa", d.kappa))?,
            l: parse_unsigned_range("l", &get("l", "0"))?,
            units,
            format: get("format", "csv").trim().parse()?,
            out: s.get("out").map(PathBuf::from),
            tol: opt_f64("tol")?.unwrap_or(d.tol),
            r_max: opt_f64("rmax")?,
            r_min: opt_f64("rmin")?,
            steps: opt_usize("steps")?,
            points: opt_usize("points")?,
            component,
        };
        if let Some(steps) = cfg.steps {
            if steps < 100 {
                return Err(Error::Config(format!(
                    "--steps must be at least 100, got {steps}"
                )));
            }
        }
        Ok(cfg)
    }
}

/// Parse `args` (including the program name) into a [`RunConfig`].
pub fn parse_config<I, T>(args: I) -> std::result::Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ParseOutcome::Clap)?;
    let (command, common, extra) = match cli.command {
        Command::Spectrum(c) => (CommandKind::Spectrum, c, Settings::new()),
        Command::Verify(c) => (CommandKind::Verify, c, Settings::new()),
        Command::Sweep(c) => (CommandKind::Sweep, c, Settings::new()),
        Command::Wavefunction(w) => {
            let mut extra = Settings::new();
            if let Some(c) = w.component {
                extra.insert("component", c);
            }
            (CommandKind::Wavefunction, w.common, extra)
        }
        Command::Limits(l) => {
            let kind = if l.nonrel {
                LimitKind::Nonrelativistic
            } else if l.s_wave {
                LimitKind::SWave
            } else if l.constant_mass {
                LimitKind::ConstantMass
            } else {
                LimitKind::Duality
            };
            let mut extra = Settings::new();
            if let Some(v) = l.l {
                extra.insert("l", v);
            }
            (CommandKind::Limits(kind), l.common, extra)
        }
    };
    let mut settings = match &common.config {
        Some(path) => read_config_file(path).map_err(ParseOutcome::Error)?,
        None => Settings::new(),
    };
    overlay(&mut settings, &common);
    settings.extend(extra);
    RunConfig::resolve(command, &settings).map_err(ParseOutcome::Error)
}

/// Why argument parsing stopped short of a [`RunConfig`].
#[derive(Debug)]
pub enum ParseOutcome {
    Clap(clap::Error),
    Error(Error),
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_config(args) {
        Ok(cfg) => cfg,
        Err(ParseOutcome::Clap(e)) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
        Err(ParseOutcome::Error(e)) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    match execute(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Execute a resolved configuration, writing its table to `cfg.out` or
/// stdout.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    let outcome = commands::dispatch(cfg)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    let text = outcome.table.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
            {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source: e,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(outcome.code)
}

/// Build the output table without writing it.
pub fn render(cfg: &RunConfig) -> Result<(Table, i32)> {
    let outcome = commands::dispatch(cfg)?;
    Ok((outcome.table, outcome.code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut full = vec!["dirac-pdm"];
        full.extend_from_slice(args);
        parse_config(full).unwrap()
    }

    #[test]
    fn defaults_follow_command() {
        let v = cfg(&["verify"]);
        assert_eq!(v.modes.len(), 2);
        assert_eq!(v.kappa, vec![-2, -1, 1, 2]);
        assert_eq!(v.b, vec![0.0, 0.1, 0.3]);
        assert_eq!(v.tol, 1e-6);
        let w = cfg(&["wavefunction"]);
        assert_eq!(w.modes, vec![SymmetryMode::Spin]);
    }

    #[test]
    fn negative_values_and_repeats() {
        let c = cfg(&["spectrum", "--kappa", "-2:-1", "--b", "-0.1", "--b", "0.2"]);
        assert_eq!(c.kappa, vec![-2, -1]);
        assert_eq!(c.b, vec![0.2]);
        let c = cfg(&["spectrum", "--A", "0.1"]);
        assert_eq!(c.a, vec![0.1]);
    }

    #[test]
    fn usage_errors() {
        for args in [
            vec!["dirac-pdm", "spectrum", "--kappa", "0"],
            vec!["dirac-pdm", "spectrum", "--mode", "up"],
            vec!["dirac-pdm", "spectrum", "--format", "xml"],
            vec!["dirac-pdm", "spectrum", "--m0", "900"],
            vec!["dirac-pdm", "verify", "--steps", "5"],
        ] {
            match parse_config(args.clone()) {
                Err(ParseOutcome::Error(Error::Config(_))) => {}
                other => panic!("{args:?}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_config(["dirac-pdm", "limits"]),
            Err(ParseOutcome::Clap(_))
        ));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = std::env::temp_dir().join(format!("dirac-pdm-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(
            &path,
            "# sweep\nq = 0.5\nkappa=-1\nunits=physical\nm0=939\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let c = cfg(&["spectrum", "--config", p, "--q", "0.75"]);
        assert_eq!(c.q, vec![0.75]);
        assert_eq!(c.kappa, vec![-1]);
        assert_eq!(
            c.units,
            UnitSystem::Physical {
                m0_mev: 939.0,
                hbar_c_mev_fm: HBAR_C_MEV_FM
            }
        );
        std::fs::write(&path, "bogus=1\n").unwrap();
        assert!(parse_config(["dirac-pdm", "spectrum", "--config", p]).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
