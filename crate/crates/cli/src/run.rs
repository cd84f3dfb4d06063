use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use zpbox_core::dynamics::{self, harmonic_frequency, integrate_sampled};
use zpbox_core::spectrum;
use zpbox_core::thermal::{thermal_point, thermal_sweep};
use zpbox_core::units::{PhysicalInput, DEFAULT_MASS_RATIO};
use zpbox_core::{solve_equilibrium, ReducedSystem, StrainSolution};

use crate::format::{csv_table, format_number, json_object, JsonValue};
use crate::scenario::{Command, Parameters, Scenario};
use crate::CliError;

pub const SPECTRUM_HEADER: [&str; 5] = [
    "n",
    "energy",
    "wall_force",
    "collision_freq",
    "quantum_size",
];
pub const THERMAL_HEADER: [&str; 6] = ["t", "ell", "alpha", "mean_force", "p1", "p2"];
pub const DYNAMICS_HEADER: [&str; 7] = [
    "t",
    "eta",
    "v",
    "E_particle",
    "E_strain",
    "E_kinetic",
    "E_total",
];
pub const SWEEP_HEADER: [&str; 6] = [
    "K",
    "ell",
    "strain",
    "binding_exact",
    "binding_first_order",
    "K_prime",
];

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub command: Command,
    /// The scenario as config text; see [`Scenario::to_config_text`].
    pub scenario: String,
    pub system: Option<ReducedSystem>,
    pub ell: Option<f64>,
    pub strain: Option<f64>,
    pub residual: Option<f64>,
    pub binding_exact: Option<f64>,
    pub binding_first_order: Option<f64>,
    pub strain_energy: Option<f64>,
    pub effective_stiffness: Option<f64>,
    /// Expansion coefficient at `alpha_t`.
    pub alpha: Option<f64>,
    pub alpha_t: Option<f64>,
    pub omega_harmonic: Option<f64>,
    pub omega_measured: Option<f64>,
    pub energy_drift: Option<f64>,
    pub exchange_correlation: Option<f64>,
    /// Files written, in the order they were written.
    pub outputs: Vec<PathBuf>,
    /// CSV text of the series, if the command produces one.
    pub table: Option<String>,
    /// Not part of the JSON, which must be reproducible byte for byte.
    pub duration: Duration,
}

impl RunSummary {
    fn new(scenario: &Scenario, system: Option<ReducedSystem>) -> Self {
        RunSummary {
            command: scenario.command,
            scenario: scenario.to_config_text(),
            system,
            ell: None,
            strain: None,
            residual: None,
            binding_exact: None,
            binding_first_order: None,
            strain_energy: None,
            effective_stiffness: None,
            alpha: None,
            alpha_t: None,
            omega_harmonic: None,
            omega_measured: None,
            energy_drift: None,
            exchange_correlation: None,
            outputs: Vec::new(),
            table: None,
            duration: Duration::ZERO,
        }
    }

    fn record_equilibrium(&mut self, sol: &StrainSolution) {
        self.ell = Some(sol.ell);
        self.strain = Some(sol.strain);
        self.residual = Some(sol.residual);
        self.binding_exact = Some(sol.binding_exact);
        self.binding_first_order = Some(sol.binding_first_order);
        self.strain_energy = Some(sol.strain_energy);
        self.effective_stiffness = Some(sol.effective_stiffness);
    }

    /// Flat JSON object; numbers carry 17 significant digits.
    pub fn to_json(&self) -> String {
        let scales = self.system.and_then(|s| s.scales);
        let fields = [
            ("command", JsonValue::String(self.command.to_string())),
            ("scenario", JsonValue::String(self.scenario.clone())),
            ("K", self.system.map(|s| s.stiffness).into()),
            ("mu", self.system.map(|s| s.mass_ratio).into()),
            ("energy_scale_J", scales.map(|s| s.energy).into()),
            ("length_scale_m", scales.map(|s| s.length).into()),
            ("time_scale_s", scales.map(|s| s.time).into()),
            ("temperature_scale_K", scales.map(|s| s.temperature).into()),
            ("ell", self.ell.into()),
            ("strain", self.strain.into()),
            ("residual", self.residual.into()),
            ("binding_exact", self.binding_exact.into()),
            ("binding_first_order", self.binding_first_order.into()),
            ("strain_energy", self.strain_energy.into()),
            ("K_prime", self.effective_stiffness.into()),
            ("alpha", self.alpha.into()),
            ("alpha_t", self.alpha_t.into()),
            ("omega_harmonic", self.omega_harmonic.into()),
            ("omega_measured", self.omega_measured.into()),
            ("energy_drift", self.energy_drift.into()),
            ("exchange_correlation", self.exchange_correlation.into()),
            (
                "outputs",
                JsonValue::Strings(
                    self.outputs
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect(),
                ),
            ),
        ];
        json_object(&fields)
    }
}

fn resolve_system(params: &Parameters) -> Result<Option<ReducedSystem>, CliError> {
    Ok(match *params {
        Parameters::Unset => None,
        Parameters::Reduced {
            stiffness,
            mass_ratio,
        } => Some(ReducedSystem::dimensionless(
            stiffness,
            mass_ratio.unwrap_or(DEFAULT_MASS_RATIO),
        )?),
        Parameters::Physical {
            particle_mass,
            box_size,
            spring_stiffness,
            wall_mass,
        } => {
            let input = PhysicalInput {
                particle_mass,
                box_size,
                spring_stiffness,
                wall_mass: wall_mass.unwrap_or(DEFAULT_MASS_RATIO * particle_mass),
            };
            Some(input.to_reduced()?)
        }
    })
}

fn require(system: Option<ReducedSystem>) -> ReducedSystem {
    system.expect("scenario validation guarantees a system for this command")
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("ZPBOX_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "ZPBOX_THREADS must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn spectrum_table(ell: f64, levels: u32) -> Result<String, CliError> {
    let rows = (1..=levels)
        .map(|n| {
            Ok(vec![
                n.to_string(),
                format_number(spectrum::energy_level(n, ell)?),
                format_number(spectrum::wall_force(n, ell)?),
                format_number(spectrum::collision_frequency(n, ell)?),
                format_number(spectrum::quantum_size(n, ell)?),
            ])
        })
        .collect::<Result<Vec<_>, zpbox_core::Error>>()?;
    Ok(csv_table(&SPECTRUM_HEADER, rows))
}

fn sweep_table(grid: &[f64]) -> Result<String, CliError> {
    let evaluate = || -> Vec<zpbox_core::Result<StrainSolution>> {
        grid.par_iter().map(|&k| solve_equilibrium(k)).collect()
    };
    let solutions = match thread_count()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?
            .install(evaluate),
        None => evaluate(),
    };
    let rows = solutions
        .into_iter()
        .map(|sol| {
            let sol = sol?;
            Ok(vec![
                format_number(sol.stiffness),
                format_number(sol.ell),
                format_number(sol.strain),
                format_number(sol.binding_exact),
                format_number(sol.binding_first_order),
                format_number(sol.effective_stiffness),
            ])
        })
        .collect::<Result<Vec<_>, zpbox_core::Error>>()?;
    Ok(csv_table(&SWEEP_HEADER, rows))
}

/// Executes a scenario. All results are computed before anything is
/// written, so a failing run leaves no files behind.
pub fn run(scenario: &Scenario) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let system = resolve_system(&scenario.parameters)?;
    let mut summary = RunSummary::new(scenario, system);

    let table: Option<String> = match scenario.command {
        Command::Spectrum => {
            let ell = match (scenario.ell, system) {
                (Some(ell), _) => ell,
                (None, Some(sys)) => solve_equilibrium(sys.stiffness)?.ell,
                (None, None) => 1.0,
            };
            summary.ell = Some(ell);
            Some(spectrum_table(ell, scenario.levels())?)
        }
        Command::Equilibrium => {
            let sol = solve_equilibrium(require(system).stiffness)?;
            summary.record_equilibrium(&sol);
            None
        }
        Command::Thermal => {
            let k = require(system).stiffness;
            summary.record_equilibrium(&solve_equilibrium(k)?);
            if let Some(t) = scenario.t {
                summary.alpha_t = Some(t);
                summary.alpha = Some(thermal_point(k, t)?.alpha);
            }
            let points = thermal_sweep(k, scenario.t_grid().values())?;
            let rows = points.iter().map(|p| {
                vec![
                    format_number(p.t),
                    format_number(p.ell),
                    format_number(p.alpha),
                    format_number(p.mean_force),
                    format_number(p.occupancies[0]),
                    format_number(p.occupancies[1]),
                ]
            });
            Some(csv_table(&THERMAL_HEADER, rows))
        }
        Command::Dynamics => {
            let sys = require(system);
            let sol = solve_equilibrium(sys.stiffness)?;
            summary.record_equilibrium(&sol);
            let mu = sys.mass_ratio;
            let omega = harmonic_frequency(&sol, mu);
            let per_period = scenario.dt_factor();
            let dt = 2.0 * std::f64::consts::PI / (omega * per_period);
            let n_steps = (scenario.n_periods() as f64 * per_period).round() as usize;
            let traj = integrate_sampled(
                &sol,
                mu,
                scenario.y0() * sol.strain,
                0.0,
                dt,
                n_steps,
                scenario.sample_every(),
            )?;
            summary.omega_harmonic = Some(omega);
            summary.omega_measured = dynamics::measured_frequency(&traj).ok();
            summary.energy_drift = Some(traj.max_relative_drift);
            summary.exchange_correlation = dynamics::energy_exchange_stats(&traj)
                .ok()
                .map(|s| s.correlation);
            let rows = (0..traj.len()).map(|i| {
                [
                    traj.times[i],
                    traj.eta[i],
                    traj.velocity[i],
                    traj.particle_energy[i],
                    traj.strain_energy[i],
                    traj.kinetic_energy[i],
                    traj.total_energy[i],
                ]
                .into_iter()
                .map(format_number)
                .collect()
            });
            Some(csv_table(&DYNAMICS_HEADER, rows))
        }
        Command::Sweep => {
            let grid = scenario
                .k_grid
                .as_ref()
                .expect("scenario validation guarantees a k-grid");
            Some(sweep_table(grid.values())?)
        }
    };

    if let Some(dir) = &scenario.out {
        std::fs::create_dir_all(dir)?;
        if let Some(table) = &table {
            let path = dir.join(format!("{}.csv", scenario.command));
            std::fs::write(&path, table)?;
            summary.outputs.push(path);
        }
        let path = dir.join("summary.json");
        summary.outputs.push(path.clone());
        std::fs::write(&path, summary.to_json())?;
    }
    summary.table = table;
    summary.duration = started.elapsed();
    Ok(summary)
}
