//! Run descriptions: command-line flags merged over an optional flat
//! `key = value` config file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Arg, ArgAction, ArgMatches, Command as ClapCommand};

use crate::grid::Grid;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Equilibrium,
    Thermal,
    Dynamics,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Spectrum,
        Command::Equilibrium,
        Command::Thermal,
        Command::Dynamics,
        Command::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Equilibrium => "equilibrium",
            Command::Thermal => "thermal",
            Command::Dynamics => "dynamics",
            Command::Sweep => "sweep",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Command::Spectrum => "Level energies, wall forces, collision rates and quantum sizes",
            Command::Equilibrium => {
                "Zero-point strain equilibrium, binding energy and stiffened spring"
            }
            Command::Thermal => {
                "Self-consistent box size and expansion coefficient over a temperature grid"
            }
            Command::Dynamics => "Breathing oscillation of the box about its strained size",
            Command::Sweep => "Equilibrium over a grid of spring stiffnesses",
        }
    }

    /// Whether the command needs a stiffness, given directly or through SI.
    fn needs_system(self) -> bool {
        matches!(
            self,
            Command::Equilibrium | Command::Thermal | Command::Dynamics
        )
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command '{s}'")))
    }
}

/// How the physical system is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    Unset,
    Reduced {
        stiffness: f64,
        mass_ratio: Option<f64>,
    },
    Physical {
        particle_mass: f64,
        box_size: f64,
        spring_stiffness: f64,
        wall_mass: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub command: Command,
    pub parameters: Parameters,
    pub ell: Option<f64>,
    pub levels: Option<u32>,
    pub t_grid: Option<Grid>,
    pub k_grid: Option<Grid>,
    pub t: Option<f64>,
    pub y0: Option<f64>,
    pub dt_factor: Option<f64>,
    pub n_periods: Option<u32>,
    pub sample_every: Option<usize>,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_LEVELS: u32 = 10;
pub const DEFAULT_T_GRID: &str = "0:4:0.1";
pub const DEFAULT_Y0: f64 = 1e-3;
pub const DEFAULT_DT_FACTOR: f64 = 1000.0;
pub const DEFAULT_PERIODS: u32 = 20;

impl Scenario {
    pub fn levels(&self) -> u32 {
        self.levels.unwrap_or(DEFAULT_LEVELS)
    }

    pub fn t_grid(&self) -> Grid {
        self.t_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_T_GRID.parse().expect("default grid parses"))
    }

    pub fn y0(&self) -> f64 {
        self.y0.unwrap_or(DEFAULT_Y0)
    }

    pub fn dt_factor(&self) -> f64 {
        self.dt_factor.unwrap_or(DEFAULT_DT_FACTOR)
    }

    pub fn n_periods(&self) -> u32 {
        self.n_periods.unwrap_or(DEFAULT_PERIODS)
    }

    pub fn sample_every(&self) -> usize {
        self.sample_every.unwrap_or(1)
    }

    /// The settings as config-file text; parsing it back with the same
    /// command yields an equal scenario.
    pub fn to_config_text(&self) -> String {
        let mut lines = Vec::new();
        let mut put = |key: &str, value: String| lines.push(format!("{key} = {value}"));
        match &self.parameters {
            Parameters::Unset => {}
            Parameters::Reduced {
                stiffness,
                mass_ratio,
            } => {
                put("K", stiffness.to_string());
                if let Some(mu) = mass_ratio {
                    put("mu", mu.to_string());
                }
            }
            Parameters::Physical {
                particle_mass,
                box_size,
                spring_stiffness,
                wall_mass,
            } => {
                put("particle-mass", particle_mass.to_string());
                put("box-size", box_size.to_string());
                put("spring-stiffness", spring_stiffness.to_string());
                if let Some(w) = wall_mass {
                    put("wall-mass", w.to_string());
                }
            }
        }
        if let Some(v) = self.ell {
            put("ell", v.to_string());
        }
        if let Some(v) = self.levels {
            put("levels", v.to_string());
        }
        if let Some(g) = &self.t_grid {
            put("t-grid", g.to_string());
        }
        if let Some(g) = &self.k_grid {
            put("k-grid", g.to_string());
        }
        if let Some(v) = self.t {
            put("t", v.to_string());
        }
        if let Some(v) = self.y0 {
            put("y0", v.to_string());
        }
        if let Some(v) = self.dt_factor {
            put("dt-factor", v.to_string());
        }
        if let Some(v) = self.n_periods {
            put("n-periods", v.to_string());
        }
        if let Some(v) = self.sample_every {
            put("sample-every", v.to_string());
        }
        if let Some(p) = &self.out {
            put("out", p.display().to_string());
        }
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}

/// `(key, help)` for every setting accepted as a flag or config key.
const KEYS: &[(&str, &str)] = &[
    ("K", "Dimensionless spring stiffness k·d²/ε₀"),
    ("mu", "Wall-to-particle mass ratio M/m [default: 1000]"),
    ("particle-mass", "Particle mass in kg (SI parameterization)"),
    ("box-size", "Unstrained box size in m (SI parameterization)"),
    (
        "spring-stiffness",
        "Wall spring stiffness in N/m (SI parameterization)",
    ),
    (
        "wall-mass",
        "Wall mass in kg (SI parameterization) [default: 1000 particle masses]",
    ),
    (
        "ell",
        "spectrum: relative box size [default: strained size if K is given, else 1]",
    ),
    ("levels", "spectrum: number of levels listed [default: 10]"),
    (
        "t-grid",
        "thermal: temperatures in units of T₀, start:stop:step or a,b,c [default: 0:4:0.1]",
    ),
    ("k-grid", "sweep: stiffness grid, start:stop:step or a,b,c"),
    (
        "t",
        "thermal: temperature at which to report the expansion coefficient",
    ),
    (
        "y0",
        "dynamics: initial displacement as a fraction of the strain [default: 0.001]",
    ),
    (
        "dt-factor",
        "dynamics: time steps per harmonic period [default: 1000]",
    ),
    (
        "n-periods",
        "dynamics: number of harmonic periods to integrate [default: 20]",
    ),
    (
        "sample-every",
        "dynamics: keep every n-th step in the output [default: 1]",
    ),
    (
        "out",
        "Directory for CSV and summary.json (omit to print CSV on stdout, summary on stderr)",
    ),
];

fn cli() -> ClapCommand {
    let mut root = ClapCommand::new("zpbox")
        .about("Particle in a 1-D box with elastically restrained walls")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = ClapCommand::new(cmd.as_str()).about(cmd.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("Flat key = value file; flags take precedence"),
        );
        for (key, help) in KEYS {
            sub = sub.arg(
                Arg::new(*key)
                    .long(*key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .action(ArgAction::Set)
                    .help(*help),
            );
        }
        root = root.subcommand(sub);
    }
    root
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` or
/// `;` are ignored; keys may use `_` in place of `-`.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}'",
                i + 1
            )));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!(
                "config line {}: duplicate key '{key}'",
                i + 1
            )));
        }
    }
    Ok(map)
}

/// Builds a [`Scenario`] from command-line arguments (including the program
/// name) and optional config text. When `config_text` is `None` and
/// `--config FILE` is given, the file is read.
pub fn parse_scenario<I, T>(args: I, config_text: Option<&str>) -> Result<Scenario, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = cli().try_get_matches_from(args)?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command: Command = name.parse()?;

    let mut settings = match (config_text, sub.get_one::<String>("config")) {
        (Some(text), _) => parse_config(text)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config '{path}': {e}")))?;
            parse_config(&text)?
        }
        (None, None) => BTreeMap::new(),
    };
    overlay_flags(&mut settings, sub);
    build(command, &settings)
}

fn overlay_flags(settings: &mut BTreeMap<String, String>, sub: &ArgMatches) {
    for (key, _) in KEYS {
        if let Some(v) = sub.get_one::<String>(key) {
            settings.insert((*key).to_string(), v.clone());
        }
    }
}

fn get<T: FromStr>(settings: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    settings
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Usage(format!("malformed value for --{key}: '{v}'")))
        })
        .transpose()
}

fn positive(settings: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    match get::<f64>(settings, key)? {
        Some(v) if !(v.is_finite() && v > 0.0) => Err(CliError::Usage(format!(
            "--{key} must be finite and > 0, got {v}"
        ))),
        other => Ok(other),
    }
}

fn grid(settings: &BTreeMap<String, String>, key: &str) -> Result<Option<Grid>, CliError> {
    settings
        .get(key)
        .map(|v| {
            v.parse::<Grid>()
                .map_err(|e| CliError::Usage(format!("--{key}: {e}")))
        })
        .transpose()
}

fn build(command: Command, s: &BTreeMap<String, String>) -> Result<Scenario, CliError> {
    let stiffness = positive(s, "K")?;
    let mass_ratio = positive(s, "mu")?;
    let particle_mass = positive(s, "particle-mass")?;
    let box_size = positive(s, "box-size")?;
    let spring_stiffness = positive(s, "spring-stiffness")?;
    let wall_mass = positive(s, "wall-mass")?;

    let any_reduced = stiffness.is_some() || mass_ratio.is_some();
    let any_si = particle_mass.is_some()
        || box_size.is_some()
        || spring_stiffness.is_some()
        || wall_mass.is_some();
    let parameters =
        match (any_reduced, any_si) {
            (true, true) => return Err(CliError::Usage(
                "conflicting parameterization: give either --K/--mu or the SI quantities, not both"
                    .into(),
            )),
            (true, false) => Parameters::Reduced {
                stiffness: stiffness.ok_or_else(|| CliError::Usage("--mu requires --K".into()))?,
                mass_ratio,
            },
            (false, true) => match (particle_mass, box_size, spring_stiffness) {
                (Some(particle_mass), Some(box_size), Some(spring_stiffness)) => {
                    Parameters::Physical {
                        particle_mass,
                        box_size,
                        spring_stiffness,
                        wall_mass,
                    }
                }
                _ => return Err(CliError::Usage(
                    "SI parameterization needs --particle-mass, --box-size and --spring-stiffness"
                        .into(),
                )),
            },
            (false, false) => Parameters::Unset,
        };

    if command.needs_system() && parameters == Parameters::Unset {
        return Err(CliError::Usage(format!(
            "{command} needs --K or the SI quantities"
        )));
    }
    if command == Command::Sweep && parameters != Parameters::Unset {
        return Err(CliError::Usage(
            "sweep takes its stiffnesses from --k-grid only".into(),
        ));
    }

    let levels = get::<u32>(s, "levels")?;
    if levels == Some(0) || levels.is_some_and(|n| n > zpbox_core::spectrum::MAX_LEVEL) {
        return Err(CliError::Usage("--levels must be in 1..=1000000".into()));
    }
    let t_grid = grid(s, "t-grid")?;
    if let Some(g) = &t_grid {
        if g.values()[0] < 0.0 {
            return Err(CliError::Usage("--t-grid temperatures must be >= 0".into()));
        }
    }
    let k_grid = grid(s, "k-grid")?;
    if let Some(g) = &k_grid {
        if !(g.values()[0] > 0.0) {
            return Err(CliError::Usage("--k-grid stiffnesses must be > 0".into()));
        }
    }
    if command == Command::Sweep && k_grid.is_none() {
        return Err(CliError::Usage("sweep needs --k-grid".into()));
    }
    let y0 = get::<f64>(s, "y0")?;
    if let Some(y) = y0 {
        if !(y.is_finite() && y.abs() < 1.0) {
            return Err(CliError::Usage(format!(
                "--y0 must satisfy |y0| < 1 (fraction of strain), got {y}"
            )));
        }
    }
    let sample_every = get::<usize>(s, "sample-every")?;
    if sample_every == Some(0) {
        return Err(CliError::Usage("--sample-every must be >= 1".into()));
    }
    let n_periods = get::<u32>(s, "n-periods")?;
    if n_periods == Some(0) {
        return Err(CliError::Usage("--n-periods must be >= 1".into()));
    }

    Ok(Scenario {
        command,
        parameters,
        ell: positive(s, "ell")?,
        levels,
        t_grid,
        k_grid,
        t: positive(s, "t")?,
        y0,
        dt_factor: positive(s, "dt-factor")?,
        n_periods,
        sample_every,
        out: s.get("out").map(PathBuf::from),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Scenario, CliError> {
        let mut argv = vec!["zpbox"];
        argv.extend_from_slice(args);
        parse_scenario(argv, None)
    }

    #[test]
    fn equilibrium_with_k() {
        let s = parse(&["equilibrium", "--K", "2"]).unwrap();
        assert_eq!(s.command, Command::Equilibrium);
        assert_eq!(
            s.parameters,
            Parameters::Reduced {
                stiffness: 2.0,
                mass_ratio: None
            }
        );
    }

    #[test]
    fn thermal_with_grid_and_out() {
        let s = parse(&[
            "thermal", "--K", "2", "--t-grid", "0:4:0.1", "--out", "runs/",
        ])
        .unwrap();
        assert_eq!(s.command, Command::Thermal);
        assert_eq!(s.t_grid.unwrap().values().len(), 41);
        assert_eq!(s.out, Some(PathBuf::from("runs/")));
    }

    #[test]
    fn conflicting_parameterization_is_usage_error() {
        let err = parse(&["equilibrium", "--K", "2", "--particle-mass", "9.1e-31"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("conflicting"));
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["equilibrium"][..],
            &["equilibrium", "--K", "abc"],
            &["equilibrium", "--K", "-1"],
            &["equilibrium", "--bogus", "1"],
            &["frobnicate"],
            &["sweep"],
            &["sweep", "--k-grid", "1,2", "--K", "3"],
            &["equilibrium", "--particle-mass", "1e-30"],
            &["thermal", "--K", "2", "--t-grid", "1:0:0.1"],
            &["dynamics", "--K", "2", "--y0", "1.5"],
            &["spectrum", "--levels", "0"],
            &["equilibrium", "--mu", "10"],
        ] {
            let err = parse(args).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}: {err}");
        }
    }

    #[test]
    fn flags_override_config() {
        let cfg = "# comment\nK = 3\nmu=50\n\nn_periods = 7\n";
        let s = parse_scenario(["zpbox", "dynamics", "--K", "2"], Some(cfg)).unwrap();
        assert_eq!(
            s.parameters,
            Parameters::Reduced {
                stiffness: 2.0,
                mass_ratio: Some(50.0)
            }
        );
        assert_eq!(s.n_periods, Some(7));
    }

    #[test]
    fn config_rejects_unknown_and_malformed() {
        assert!(parse_config("nonsense = 1").is_err());
        assert!(parse_config("K 2").is_err());
        assert!(parse_config("K = 1\nK = 2").is_err());
        assert_eq!(parse_config("; x\n").unwrap().len(), 0);
    }

    #[test]
    fn echo_round_trips() {
        let cases: &[&[&str]] = &[
            &["equilibrium", "--K", "2"],
            &[
                "dynamics",
                "--K",
                "0.1",
                "--mu",
                "250",
                "--y0",
                "-0.25",
                "--n-periods",
                "3",
                "--sample-every",
                "5",
            ],
            &[
                "thermal",
                "--particle-mass",
                "9.109e-31",
                "--box-size",
                "1e-9",
                "--spring-stiffness",
                "0.3",
                "--t-grid",
                "0:2:0.25",
                "--t",
                "1",
            ],
            &["sweep", "--k-grid", "1,10,100", "--out", "a dir/x"],
            &["spectrum", "--ell", "1.38", "--levels", "50"],
        ];
        for args in cases {
            let s = parse(args).unwrap();
            let text = s.to_config_text();
            let again = parse_scenario(["zpbox", s.command.as_str()], Some(&text)).unwrap();
            assert_eq!(again, s, "{text}");
        }
    }
}
