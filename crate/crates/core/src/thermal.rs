//! Finite-temperature strain: Boltzmann occupancy of the box levels, the
//! occupancy-averaged wall force and the self-consistent box size `ℓ(t)`.
//!
//! Temperatures are in units of `T₀ = ε₀/k_B`. Level energies are taken in
//! the box the particle currently occupies, `n²/ℓ²`.

use serde::{Deserialize, Serialize};

use crate::equilibrium::solve_equilibrium;
use crate::error::{require_positive, Error, Result};
use crate::spectrum::MAX_LEVEL;

/// Levels are retained until the Boltzmann exponent exceeds this (`e^{-37} ≈ 1e-16`).
const TAIL_EXPONENT: f64 = 37.0;
const MIN_LEVELS: usize = 4;

const DAMPING: f64 = 0.5;
const MAX_ITER: usize = 10_000;
const CONVERGENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub t: f64,
    pub ell: f64,
    /// `p_n` for `n = 1..=n_max`.
    pub occupancies: Vec<f64>,
    pub mean_force: f64,
    /// `(1/ℓ)·dℓ/dt`.
    pub alpha: f64,
    pub n_max: usize,
}

fn check_temperature(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::invalid(
            "t",
            t,
            "temperature must be finite and >= 0",
        ))
    }
}

/// Number of levels kept at temperature `t` in a box of size `ell`: the
/// smallest `n` with `(n² − 1)/(ℓ²·t) > 37`, and at least four.
pub fn truncation_level(t: f64, ell: f64) -> Result<usize> {
    check_temperature(t)?;
    require_positive("ell", ell)?;
    if t == 0.0 {
        return Ok(MIN_LEVELS);
    }
    // (n² − 1) > 37·ℓ²·t
    let bound = TAIL_EXPONENT * ell * ell * t + 1.0;
    let mut n = bound.sqrt().floor() as usize;
    while ((n * n) as f64 - 1.0) / (ell * ell * t) <= TAIL_EXPONENT {
        n += 1;
    }
    if n > MAX_LEVEL as usize {
        return Err(Error::invalid(
            "t",
            t,
            "temperature needs more than 10^6 levels",
        ));
    }
    Ok(n.max(MIN_LEVELS))
}

/// Normalised Boltzmann weights `p_n ∝ exp(−(n² − 1)/(ℓ²·t))`.
///
/// At `t = 0` the particle is in the ground state.
pub fn occupancies(t: f64, ell: f64) -> Result<Vec<f64>> {
    let n_max = truncation_level(t, ell)?;
    let mut p = vec![0.0; n_max];
    if t == 0.0 {
        p[0] = 1.0;
        return Ok(p);
    }
    let beta = 1.0 / (ell * ell * t);
    for (i, w) in p.iter_mut().enumerate() {
        let n = (i + 1) as f64;
        *w = (-(n * n - 1.0) * beta).exp();
    }
    // Smallest terms first.
    let z: f64 = p.iter().rev().sum();
    for w in &mut p {
        *w /= z;
    }
    Ok(p)
}

fn force_from(p: &[f64], ell: f64) -> f64 {
    let s: f64 = p
        .iter()
        .enumerate()
        .rev()
        .map(|(i, w)| {
            let n = (i + 1) as f64;
            w * n * n
        })
        .sum();
    2.0 * s / (ell * ell * ell)
}

/// `Σ p_n · 2n²/ℓ³`, the thermally averaged outward wall force.
pub fn mean_wall_force(t: f64, ell: f64) -> Result<f64> {
    let p = occupancies(t, ell)?;
    Ok(force_from(&p, ell))
}

/// Self-consistent box size at temperature `t`: solves
/// `K·(ℓ − 1) = ⟨f⟩(t, ℓ)` by damped fixed-point iteration on the strain,
/// seeded at the zero-temperature root. `alpha` is left at zero; see
/// [`expansion_coefficient`].
pub fn equilibrium_size_at_t(stiffness: f64, t: f64) -> Result<ThermalPoint> {
    let k = require_positive("K", stiffness)?;
    check_temperature(t)?;
    let ground = solve_equilibrium(k)?;
    if t == 0.0 {
        let occupancies = occupancies(0.0, ground.ell)?;
        return Ok(ThermalPoint {
            t,
            ell: ground.ell,
            mean_force: force_from(&occupancies, ground.ell),
            n_max: occupancies.len(),
            occupancies,
            alpha: 0.0,
        });
    }

    let mut strain = ground.strain;
    let mut last_step = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..MAX_ITER {
        let ell = 1.0 + strain;
        let target = mean_wall_force(t, ell)? / k;
        let step = DAMPING * (target - strain);
        strain += step;
        // Iterate past the tolerance until the update stops shrinking.
        if step.abs() < CONVERGENCE_TOL {
            if step == 0.0 || step.abs() >= last_step {
                stalled += 1;
            }
            if stalled >= 3 {
                break;
            }
        }
        last_step = step.abs();
    }
    if !(last_step < CONVERGENCE_TOL) {
        return Err(Error::NonConvergence {
            method: "damped fixed-point iteration for l(t)",
            iterations: MAX_ITER,
            residual: last_step,
        });
    }
    let ell = 1.0 + strain;
    let occupancies = occupancies(t, ell)?;
    Ok(ThermalPoint {
        t,
        ell,
        mean_force: force_from(&occupancies, ell),
        n_max: occupancies.len(),
        occupancies,
        alpha: 0.0,
    })
}

/// Default difference step for [`expansion_coefficient`], `max(1e-3, t/100)`.
pub fn default_step(t: f64) -> f64 {
    (t / 100.0).max(1e-3)
}

/// `α = [ℓ(t+h) − ℓ(t−h)] / (2h·ℓ(t))`, for `t − h > 0`.
pub fn expansion_coefficient(stiffness: f64, t: f64, step: f64) -> Result<f64> {
    require_positive("step", step)?;
    if !(t - step > 0.0) {
        return Err(Error::invalid(
            "t",
            t,
            "central difference needs t - step > 0",
        ));
    }
    let centre = equilibrium_size_at_t(stiffness, t)?.ell;
    expansion_around(stiffness, t, step, centre)
}

fn expansion_around(stiffness: f64, t: f64, step: f64, centre: f64) -> Result<f64> {
    let up = equilibrium_size_at_t(stiffness, t + step)?.ell;
    let down = equilibrium_size_at_t(stiffness, t - step)?.ell;
    Ok((up - down) / (2.0 * step * centre))
}

/// One [`ThermalPoint`] per grid temperature, with `alpha` filled in.
///
/// `alpha` uses the central difference with [`default_step`]; where that
/// would reach below zero temperature a forward difference is used instead.
pub fn thermal_sweep(stiffness: f64, t_grid: &[f64]) -> Result<Vec<ThermalPoint>> {
    for (i, &t) in t_grid.iter().enumerate() {
        check_temperature(t)?;
        if i > 0 && !(t > t_grid[i - 1]) {
            return Err(Error::invalid(
                "t_grid",
                t,
                "grid must be strictly increasing",
            ));
        }
    }
    t_grid
        .iter()
        .map(|&t| {
            thermal_point(stiffness, t).map_err(|e| Error::AtTemperature {
                t,
                source: Box::new(e),
            })
        })
        .collect()
}

/// [`equilibrium_size_at_t`] with the expansion coefficient filled in.
pub fn thermal_point(stiffness: f64, t: f64) -> Result<ThermalPoint> {
    let mut point = equilibrium_size_at_t(stiffness, t)?;
    let h = default_step(t);
    point.alpha = if t - h > 0.0 {
        expansion_around(stiffness, t, h, point.ell)?
    } else {
        let up = equilibrium_size_at_t(stiffness, t + h)?.ell;
        (up - point.ell) / (h * point.ell)
    };
    Ok(point)
}
