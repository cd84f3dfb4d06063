//! Stationary states of a particle in a rigid box of relative size `ℓ`.
//!
//! With lengths in units of `d` and energies in `ε₀`, level `n` has
//! wavenumber `nπ/ℓ`, energy `n²/ℓ²` and pushes on each wall with force
//! `2n²/ℓ³` (units `ε₀/d`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::numerics::{integrate_panels, newton_bisect};

/// Largest quantum number accepted.
pub const MAX_LEVEL: u32 = 1_000_000;

const QUAD_TOL: f64 = 1e-12;
const QUAD_MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumLevel {
    pub n: u32,
    pub ell: f64,
    pub energy: f64,
    pub wavenumber: f64,
}

impl QuantumLevel {
    pub fn new(n: u32, ell: f64) -> Result<Self> {
        check(n, ell)?;
        Ok(QuantumLevel {
            n,
            ell,
            energy: energy_unchecked(n, ell),
            wavenumber: wavenumber_unchecked(n, ell),
        })
    }
}

fn check(n: u32, ell: f64) -> Result<()> {
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::invalid(
            "n",
            n as f64,
            "quantum number must be in 1..=1000000",
        ));
    }
    require_positive("ell", ell)?;
    Ok(())
}

fn energy_unchecked(n: u32, ell: f64) -> f64 {
    let n = n as f64;
    n * n / (ell * ell)
}

fn wavenumber_unchecked(n: u32, ell: f64) -> f64 {
    n as f64 * PI / ell
}

fn check_position(x: f64, ell: f64) -> Result<()> {
    if (0.0..=ell).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} outside the box [0, {ell}]")))
    }
}

/// `E_n = n²/ℓ²` in units of `ε₀`.
pub fn energy_level(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(energy_unchecked(n, ell))
}

/// `q_n·d = nπ/ℓ`.
pub fn wavenumber(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(wavenumber_unchecked(n, ell))
}

/// `Ψ_n(x) = sqrt(2/ℓ)·sin(nπx/ℓ)`, in units of `d^(-1/2)`.
pub fn wavefunction(n: u32, x: f64, ell: f64) -> Result<f64> {
    check(n, ell)?;
    check_position(x, ell)?;
    Ok(psi(n, x, ell))
}

fn psi(n: u32, x: f64, ell: f64) -> f64 {
    (2.0 / ell).sqrt() * (wavenumber_unchecked(n, ell) * x).sin()
}

fn dpsi(n: u32, x: f64, ell: f64) -> f64 {
    let q = wavenumber_unchecked(n, ell);
    (2.0 / ell).sqrt() * q * (q * x).cos()
}

fn d2psi(n: u32, x: f64, ell: f64) -> f64 {
    let q = wavenumber_unchecked(n, ell);
    -(2.0 / ell).sqrt() * q * q * (q * x).sin()
}

/// `∂ₓΨ_n(x)`.
pub fn wavefunction_derivative(n: u32, x: f64, ell: f64) -> Result<f64> {
    check(n, ell)?;
    check_position(x, ell)?;
    Ok(dpsi(n, x, ell))
}

/// `∂²ₓΨ_n(x)`.
pub fn wavefunction_second_derivative(n: u32, x: f64, ell: f64) -> Result<f64> {
    check(n, ell)?;
    check_position(x, ell)?;
    Ok(d2psi(n, x, ell))
}

/// The standing wave written as counter-propagating plane waves,
/// `sqrt(2/ℓ)·(e^{iqx} − e^{−iqx})/(2i)`.
pub fn plane_wave_superposition(n: u32, x: f64, ell: f64) -> Result<Complex64> {
    check(n, ell)?;
    check_position(x, ell)?;
    let q = wavenumber_unchecked(n, ell);
    let forward = Complex64::new(0.0, q * x).exp();
    let backward = Complex64::new(0.0, -q * x).exp();
    Ok((forward - backward) / Complex64::new(0.0, 2.0) * (2.0 / ell).sqrt())
}

fn quad<F: Fn(f64) -> f64>(n: u32, ell: f64, f: F) -> Result<f64> {
    quad_scaled(n, ell, 1.0, f)
}

/// Quadrature with the absolute tolerance multiplied by `scale`, for
/// integrands whose magnitude is `scale` times that of `|Ψ|²`.
fn quad_scaled<F: Fn(f64) -> f64>(n: u32, ell: f64, scale: f64, f: F) -> Result<f64> {
    // One starting panel per antinode.
    Ok(integrate_panels(f, 0.0, ell, n as usize, QUAD_TOL * scale, QUAD_MAX_PANELS)?.value)
}

/// `∫|Ψ_n|² dx` over the box, by quadrature.
pub fn norm(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    quad(n, ell, |x| psi(n, x, ell).powi(2))
}

/// `⟨x⟩ = ∫ x |Ψ_n|² dx`, by quadrature. Analytically `ℓ/2` for every level.
pub fn position_expectation(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    quad(n, ell, |x| x * psi(n, x, ell).powi(2))
}

/// `⟨q⟩ = ∫ Ψ_n (−i∂ₓ) Ψ_n dx`, by quadrature.
pub fn momentum_expectation(n: u32, ell: f64) -> Result<Complex64> {
    check(n, ell)?;
    let overlap = quad(n, ell, |x| psi(n, x, ell) * dpsi(n, x, ell))?;
    Ok(Complex64::new(0.0, -overlap))
}

/// `⟨q²⟩ = ∫ Ψ_n (−∂²ₓ) Ψ_n dx`, by quadrature. Analytically `(nπ/ℓ)²`.
pub fn momentum_square_expectation(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    let q = wavenumber_unchecked(n, ell);
    quad_scaled(n, ell, (q * q).max(1.0), |x| {
        -psi(n, x, ell) * d2psi(n, x, ell)
    })
}

/// Positions of the sign changes of `Ψ_n` strictly inside `(0, ℓ)`.
///
/// The box is sampled at `64·n` uniform points and each bracketed sign change
/// is refined by bisection.
pub fn interior_nodes(n: u32, ell: f64) -> Result<Vec<f64>> {
    check(n, ell)?;
    let samples = 64 * n as usize;
    let h = ell / samples as f64;
    let mut nodes = Vec::with_capacity(n as usize - 1);
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..samples {
        let x = h * i as f64;
        let v = psi(n, x, ell);
        if v == 0.0 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if pv.signum() != v.signum() {
                let sign = pv.signum();
                // Orient so the bracketed function rises through zero.
                let root = newton_bisect(
                    |t| -sign * psi(n, t, ell),
                    |t| -sign * dpsi(n, t, ell),
                    px,
                    x,
                    0.0,
                )?;
                nodes.push(root);
            }
        }
        prev = Some((x, v));
    }
    Ok(nodes)
}

/// `f_n = −∂E_n/∂ℓ = 2n²/ℓ³` in units of `ε₀/d`.
pub fn wall_force(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(2.0 * energy_unchecked(n, ell) / ell)
}

/// Momentum transferred to a wall in one reflection, `2ħq_n`, in units of `ħ/d`.
pub fn wall_impulse(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(2.0 * wavenumber_unchecked(n, ell))
}

/// Rate of collisions with one wall, `(ħq_n/m)/(2ℓd)`, in units of `ε₀/ħ`.
///
/// In these units impulse times frequency is the wall force: `n/(πℓ²)`.
pub fn collision_frequency(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(n as f64 / (PI * ell * ell))
}

/// Half de Broglie wavelength `λ_n/2 = ℓ/n`.
pub fn quantum_size(n: u32, ell: f64) -> Result<f64> {
    check(n, ell)?;
    Ok(ell / n as f64)
}
