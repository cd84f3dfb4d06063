//! Breathing oscillation of the strained box.
//!
//! The wall coordinate `η` (displacement of the box size from `ℓ`) is a
//! classical degree of freedom with inertia `μ`; the particle follows
//! adiabatically in the ground state of the instantaneous box. The potential
//! is the total energy `1/(ℓ+η)² + (K/2)(s+η)²` and the equations of motion
//! are integrated with velocity Verlet.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::equilibrium::StrainSolution;
use crate::error::{require_positive, Error, Result};

/// Sampled wall trajectory. Every vector has one entry per stored sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub eta: Vec<f64>,
    pub velocity: Vec<f64>,
    /// `1/(ℓ+η)²`
    pub particle_energy: Vec<f64>,
    /// `(K/2)(s+η)²`
    pub strain_energy: Vec<f64>,
    /// `(μ/2)v²`
    pub kinetic_energy: Vec<f64>,
    pub total_energy: Vec<f64>,
    /// Largest `|E(t) − E(0)|/E(0)` over every step, sampled or not.
    pub max_relative_drift: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Final `(η, v)`.
    pub fn last_state(&self) -> Option<(f64, f64)> {
        Some((*self.eta.last()?, *self.velocity.last()?))
    }
}

/// `−dE/dη = 2/(ℓ+η)³ − K(s+η)`, measured from the computed equilibrium.
///
/// The expression is expanded about `η = 0` so that the balance of the two
/// large terms cancels analytically; the force is exactly zero at the root.
pub fn restoring_force(y: f64, sol: &StrainSolution) -> Result<f64> {
    let size = sol.ell + y;
    if !(size > 0.0) {
        return Err(Error::BoxCollapse { size });
    }
    Ok(force(y, sol))
}

fn force(y: f64, sol: &StrainSolution) -> f64 {
    let l = sol.ell;
    let size = l + y;
    // 2/ℓ³ − 2/(ℓ+y)³ = 2y(3ℓ² + 3ℓy + y²)/(ℓ³(ℓ+y)³)
    let particle = 2.0 * y * (3.0 * l * l + 3.0 * l * y + y * y) / (l * l * l * size * size * size);
    -sol.stiffness * y - particle
}

/// Small-oscillation angular frequency `sqrt(K′/μ)`.
pub fn harmonic_frequency(sol: &StrainSolution, mu: f64) -> f64 {
    (sol.effective_stiffness / mu).sqrt()
}

/// One thousandth of the harmonic period.
pub fn default_time_step(sol: &StrainSolution, mu: f64) -> f64 {
    2.0 * PI / (1000.0 * harmonic_frequency(sol, mu))
}

fn energies(y: f64, v: f64, sol: &StrainSolution, mu: f64) -> (f64, f64, f64) {
    let size = sol.ell + y;
    let particle = 1.0 / (size * size);
    let strain = 0.5 * sol.stiffness * (sol.strain + y).powi(2);
    let kinetic = 0.5 * mu * v * v;
    (particle, strain, kinetic)
}

/// Velocity-Verlet integration of `μ·η̈ = F(η)` storing every step.
pub fn integrate(
    sol: &StrainSolution,
    mu: f64,
    y0: f64,
    v0: f64,
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    integrate_sampled(sol, mu, y0, v0, dt, n_steps, 1)
}

/// As [`integrate`], keeping the initial state and every `sample_every`-th
/// step (and always the final one).
pub fn integrate_sampled(
    sol: &StrainSolution,
    mu: f64,
    y0: f64,
    v0: f64,
    dt: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<Trajectory> {
    require_positive("mu", mu)?;
    require_positive("dt", dt)?;
    if !v0.is_finite() {
        return Err(Error::invalid("v0", v0, "must be finite"));
    }
    if !(y0.is_finite() && y0.abs() < sol.strain) {
        return Err(Error::Domain(format!(
            "|y0| = {} must be below the strain {}",
            y0.abs(),
            sol.strain
        )));
    }
    let stride = sample_every.max(1);
    let capacity = n_steps / stride + 2;
    let mut traj = Trajectory {
        times: Vec::with_capacity(capacity),
        eta: Vec::with_capacity(capacity),
        velocity: Vec::with_capacity(capacity),
        particle_energy: Vec::with_capacity(capacity),
        strain_energy: Vec::with_capacity(capacity),
        kinetic_energy: Vec::with_capacity(capacity),
        total_energy: Vec::with_capacity(capacity),
        max_relative_drift: 0.0,
    };
    let record = |traj: &mut Trajectory, step: usize, y: f64, v: f64, e: (f64, f64, f64)| {
        traj.times.push(step as f64 * dt);
        traj.eta.push(y);
        traj.velocity.push(v);
        traj.particle_energy.push(e.0);
        traj.strain_energy.push(e.1);
        traj.kinetic_energy.push(e.2);
        traj.total_energy.push(e.0 + e.1 + e.2);
    };

    let (mut y, mut v) = (y0, v0);
    let e0 = energies(y, v, sol, mu);
    let total0 = e0.0 + e0.1 + e0.2;
    record(&mut traj, 0, y, v, e0);

    let mut accel = force(y, sol) / mu;
    for step in 1..=n_steps {
        let half = v + 0.5 * dt * accel;
        y += dt * half;
        let size = sol.ell + y;
        if !(size > 0.0) {
            return Err(Error::CollapseDuringRun { step, size });
        }
        accel = force(y, sol) / mu;
        v = half + 0.5 * dt * accel;

        let e = energies(y, v, sol, mu);
        let drift = ((e.0 + e.1 + e.2 - total0) / total0).abs();
        if drift > traj.max_relative_drift {
            traj.max_relative_drift = drift;
        }
        if step % stride == 0 || step == n_steps {
            record(&mut traj, step, y, v, e);
        }
    }
    Ok(traj)
}

/// Angular frequency from the mean spacing of linearly interpolated zero
/// crossings of `η − mean(η)`; `ω = π / mean half-period`.
pub fn measured_frequency(traj: &Trajectory) -> Result<f64> {
    let n = traj.eta.len();
    if n < 2 {
        return Err(Error::Analysis("trajectory too short".into()));
    }
    let mean = traj.eta.iter().sum::<f64>() / n as f64;
    let mut crossings = Vec::new();
    for i in 1..n {
        let a = traj.eta[i - 1] - mean;
        let b = traj.eta[i] - mean;
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            let (ta, tb) = (traj.times[i - 1], traj.times[i]);
            crossings.push(ta + (tb - ta) * a / (a - b));
        }
    }
    if crossings.len() < 4 {
        return Err(Error::Analysis(format!(
            "need at least 4 zero crossings, found {}",
            crossings.len()
        )));
    }
    let half_period =
        (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    Ok(PI / half_period)
}

/// How the particle and spring trade energy along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeStats {
    /// Pearson correlation of the particle and strain energy deviations.
    pub correlation: f64,
    /// `max|δε_particle + δε_strain| / max|δε_particle|`.
    pub max_antisymmetry_defect: f64,
}

pub fn energy_exchange_stats(traj: &Trajectory) -> Result<ExchangeStats> {
    let n = traj.len();
    if n < 100 {
        return Err(Error::Analysis(format!(
            "need at least 100 samples, got {n}"
        )));
    }
    let deviations = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| x - mean).collect::<Vec<_>>()
    };
    let dp = deviations(&traj.particle_energy);
    let ds = deviations(&traj.strain_energy);
    let spread_p = dp.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let spread_s = ds.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = traj.particle_energy[0]
        .abs()
        .max(traj.strain_energy[0].abs());
    // Anything below a few ulps of the energies themselves is rounding noise.
    let floor = 64.0 * f64::EPSILON * scale;
    if spread_p <= floor || spread_s <= floor {
        return Err(Error::Analysis(
            "energies do not vary along the trajectory".into(),
        ));
    }
    let cov: f64 = dp.iter().zip(&ds).map(|(a, b)| a * b).sum();
    let var_p: f64 = dp.iter().map(|a| a * a).sum();
    let var_s: f64 = ds.iter().map(|b| b * b).sum();
    let defect = dp
        .iter()
        .zip(&ds)
        .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
    Ok(ExchangeStats {
        correlation: cov / (var_p * var_s).sqrt(),
        max_antisymmetry_defect: defect / spread_p,
    })
}
