use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use dirac_fem::{Scheme, DEFAULT_LIGHT_SPEED};
use serde::Serialize;

use crate::error::CliError;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "DIRAC_FEM_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Nucleus {
    Point,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    CompareSchemes,
    Convergence,
    Coincidence,
    VerifyTau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Comma-separated list of interior node counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NValues(pub Vec<usize>);

impl FromStr for NValues {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad node count `{}`: {e}", part.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(NValues)
    }
}

/// Which `kappa` series a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KappaSelection {
    Single(i32),
    /// Both `+k` and `-k`.
    Pair(u32),
}

impl KappaSelection {
    /// Series in display order, positive first.
    pub fn kappas(self) -> Vec<i32> {
        match self {
            Self::Single(k) => vec![k],
            Self::Pair(k) => {
                let k = k as i32;
                vec![k, -k]
            }
        }
    }

    pub fn abs(self) -> u32 {
        match self {
            Self::Single(k) => k.unsigned_abs(),
            Self::Pair(k) => k,
        }
    }
}

/// One layer of settings: command-line flags or a config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Nuclear charge number
    #[arg(long = "Z", value_name = "Z")]
    pub z: Option<f64>,
    /// Single kappa series
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<i32>,
    /// Solve both +k and -k
    #[arg(long = "abs-kappa")]
    pub abs_kappa: Option<u32>,
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    pub nucleus: Option<Nucleus>,
    /// Radius of the uniformly charged nucleus (required for --nucleus extended)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Left end of the radial domain
    #[arg(long)]
    pub a: Option<f64>,
    /// Right end of the radial domain (default 60/Z)
    #[arg(long)]
    pub b: Option<f64>,
    /// Interior mesh nodes
    #[arg(long)]
    pub n: Option<usize>,
    /// Exponential grading of the mesh
    #[arg(long = "mesh-gamma")]
    pub mesh_gamma: Option<f64>,
    /// Speed of light in atomic units
    #[arg(long = "c-value")]
    pub c_value: Option<f64>,
    /// Electron mass in atomic units
    #[arg(long)]
    pub mass: Option<f64>,
    /// Number of physical levels to report
    #[arg(long)]
    pub levels: Option<usize>,
    /// Relative tolerance for matching computed and exact levels
    #[arg(long = "match-tol")]
    pub match_tol: Option<f64>,
    /// Largest admissible |Im lambda| / |lambda| of a bound state
    #[arg(long = "reality-tol")]
    pub reality_tol: Option<f64>,
    /// Keep the slope dof at the left boundary for |kappa| = 1
    #[arg(long = "free-lower-slope", num_args = 0..=1, default_missing_value = "true")]
    pub free_lower_slope: Option<bool>,
    /// Node counts for convergence mode, comma separated
    #[arg(long = "n-values")]
    pub n_values: Option<NValues>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the assembled matrices as PREFIX.lhs.txt and PREFIX.rhs.txt
    #[arg(long, value_name = "PREFIX")]
    pub dump: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

fn parse_value<T>(key: &str, value: &str) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("invalid value `{value}` for `{key}`: {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false)
        .map_err(|e| CliError::Config(format!("invalid value `{value}` for `{key}`: {e}")))
}

impl Overrides {
    /// Sets one key from a config file. Keys use the flag names; `_` and `-`
    /// are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let normalized = key.replace('_', "-");
        match normalized.as_str() {
            "Z" | "z" => self.z = Some(parse_value(key, value)?),
            "kappa" => self.kappa = Some(parse_value(key, value)?),
            "abs-kappa" => self.abs_kappa = Some(parse_value(key, value)?),
            "scheme" => self.scheme = Some(parse_value(key, value)?),
            "nucleus" => self.nucleus = Some(parse_enum(key, value)?),
            "radius" => self.radius = Some(parse_value(key, value)?),
            "a" => self.a = Some(parse_value(key, value)?),
            "b" => self.b = Some(parse_value(key, value)?),
            "n" => self.n = Some(parse_value(key, value)?),
            "mesh-gamma" => self.mesh_gamma = Some(parse_value(key, value)?),
            "c-value" => self.c_value = Some(parse_value(key, value)?),
            "mass" => self.mass = Some(parse_value(key, value)?),
            "levels" => self.levels = Some(parse_value(key, value)?),
            "match-tol" => self.match_tol = Some(parse_value(key, value)?),
            "reality-tol" => self.reality_tol = Some(parse_value(key, value)?),
            "free-lower-slope" => self.free_lower_slope = Some(parse_value(key, value)?),
            "n-values" => self.n_values = Some(parse_value(key, value)?),
            "mode" => self.mode = Some(parse_enum(key, value)?),
            "format" => self.format = Some(parse_enum(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "dump" => self.dump = Some(PathBuf::from(value)),
            _ => return Err(CliError::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(CliError::Config(format!(
                    "line {}: empty key or value in `{line}`",
                    lineno + 1
                )));
            }
            out.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    /// Fields set in `top` win. `kappa` and `abs-kappa` are one setting.
    pub fn layered_under(self, top: Overrides) -> Overrides {
        let (kappa, abs_kappa) = if top.kappa.is_some() || top.abs_kappa.is_some() {
            (top.kappa, top.abs_kappa)
        } else {
            (self.kappa, self.abs_kappa)
        };
        Overrides {
            z: top.z.or(self.z),
            kappa,
            abs_kappa,
            scheme: top.scheme.or(self.scheme),
            nucleus: top.nucleus.or(self.nucleus),
            radius: top.radius.or(self.radius),
            a: top.a.or(self.a),
            b: top.b.or(self.b),
            n: top.n.or(self.n),
            mesh_gamma: top.mesh_gamma.or(self.mesh_gamma),
            c_value: top.c_value.or(self.c_value),
            mass: top.mass.or(self.mass),
            levels: top.levels.or(self.levels),
            match_tol: top.match_tol.or(self.match_tol),
            reality_tol: top.reality_tol.or(self.reality_tol),
            free_lower_slope: top.free_lower_slope.or(self.free_lower_slope),
            n_values: top.n_values.or(self.n_values),
            mode: top.mode.or(self.mode),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
            dump: top.dump.or(self.dump),
        }
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub z: f64,
    pub kappa: KappaSelection,
    pub mass: f64,
    pub c: f64,
    pub scheme: Scheme,
    pub nucleus: Nucleus,
    pub radius: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub mesh_gamma: f64,
    pub levels: usize,
    /// Explicit tolerance; each scheme has its own default otherwise.
    pub match_tol: Option<f64>,
    pub reality_tol: f64,
    pub free_lower_slope: bool,
    pub n_values: Vec<usize>,
    pub mode: Mode,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub dump: Option<PathBuf>,
}

impl RunConfig {
    /// Applies defaults and checks the settings that are not physics
    /// invariants (those are checked when the operator is built).
    pub fn resolve(o: Overrides) -> Result<Self, CliError> {
        let kappa = match (o.kappa, o.abs_kappa) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set either `kappa` or `abs-kappa`, not both".into(),
                ))
            }
            (Some(k), None) => KappaSelection::Single(k),
            (None, Some(k)) => KappaSelection::Pair(k),
            (None, None) => KappaSelection::Pair(1),
        };
        let z = o.z.unwrap_or(1.0);
        let scheme = o.scheme.unwrap_or(Scheme::HermiteSupg);
        let nucleus = o.nucleus.unwrap_or(Nucleus::Point);
        if nucleus == Nucleus::Extended && o.radius.is_none() {
            return Err(CliError::Config(
                "`radius` is required for an extended nucleus".into(),
            ));
        }
        let n = o.n.unwrap_or(100);
        if n == 0 {
            return Err(CliError::Config("`n` must be at least 1".into()));
        }
        let levels = o.levels.unwrap_or(6);
        if levels == 0 {
            return Err(CliError::Config("`levels` must be at least 1".into()));
        }
        if let Some(tol) = o.match_tol {
            if !(tol > 0.0 && tol < 0.1) {
                return Err(CliError::Config(format!(
                    "`match-tol` {tol} outside (0, 0.1)"
                )));
            }
        }
        let reality_tol = o.reality_tol.unwrap_or(1e-8);
        if !(reality_tol >= 0.0 && reality_tol.is_finite()) {
            return Err(CliError::Config(format!(
                "`reality-tol` {reality_tol} must be nonnegative"
            )));
        }
        let b = o.b.unwrap_or(if z > 0.0 { 60.0 / z } else { 60.0 });
        let n_values = o
            .n_values
            .map(|v| v.0)
            .unwrap_or_else(|| vec![(n / 4).max(1), (n / 2).max(2), n.max(3)]);
        if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] == 0 {
            return Err(CliError::Config(format!(
                "`n-values` must be positive and strictly increasing, got {n_values:?}"
            )));
        }
        Ok(Self {
            z,
            kappa,
            mass: o.mass.unwrap_or(1.0),
            c: o.c_value.unwrap_or(DEFAULT_LIGHT_SPEED),
            scheme,
            nucleus,
            radius: o.radius,
            a: o.a.unwrap_or(1e-5),
            b,
            n,
            mesh_gamma: o.mesh_gamma.unwrap_or(6.0),
            levels,
            match_tol: o.match_tol,
            reality_tol,
            free_lower_slope: o.free_lower_slope.unwrap_or(false),
            n_values,
            mode: o.mode.unwrap_or(Mode::Solve),
            format: o.format.unwrap_or(Format::Table),
            out: o.out,
            dump: o.dump,
        })
    }
}

impl RunConfig {
    pub fn match_tol_for(&self, scheme: Scheme) -> f64 {
        self.match_tol.unwrap_or(match scheme {
            Scheme::LinearGalerkin => 1e-3,
            Scheme::HermiteGalerkin | Scheme::HermiteSupg => 1e-5,
        })
    }
}
