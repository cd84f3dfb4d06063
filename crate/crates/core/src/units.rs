//! Physical constants and the reduced unit system.
//!
//! Reduced quantities are measured against the unstrained box: length `d`,
//! energy `ε₀ = h²/(8 m d²)`, temperature `T₀ = ε₀/k_B`, time
//! `d·sqrt(m/ε₀)`, force `ε₀/d` and stiffness `ε₀/d²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Planck constant in J·s (CODATA 2018, exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant in J/K (CODATA 2018, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Wall-to-particle mass ratio used when none is given.
pub const DEFAULT_MASS_RATIO: f64 = 1000.0;

/// SI description of the particle, the box and its wall spring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInput {
    /// kg
    pub particle_mass: f64,
    /// m
    pub box_size: f64,
    /// N/m
    pub spring_stiffness: f64,
    /// kg
    pub wall_mass: f64,
}

impl PhysicalInput {
    /// Input with the wall mass set to [`DEFAULT_MASS_RATIO`] particle masses.
    pub fn with_default_wall(particle_mass: f64, box_size: f64, spring_stiffness: f64) -> Self {
        PhysicalInput {
            particle_mass,
            box_size,
            spring_stiffness,
            wall_mass: DEFAULT_MASS_RATIO * particle_mass,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("particle_mass", self.particle_mass)?;
        require_positive("box_size", self.box_size)?;
        require_positive("spring_stiffness", self.spring_stiffness)?;
        require_positive("wall_mass", self.wall_mass)?;
        Ok(())
    }

    /// Ground-state energy `h²/(8 m d²)` of the unstrained box, in joules.
    pub fn zero_point_energy(&self) -> f64 {
        PLANCK * PLANCK / (8.0 * self.particle_mass * self.box_size * self.box_size)
    }

    pub fn to_reduced(&self) -> Result<ReducedSystem> {
        to_reduced(self)
    }
}

/// Conversion factors from reduced units to SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiScales {
    /// ε₀ in J.
    pub energy: f64,
    /// d in m.
    pub length: f64,
    /// d·sqrt(m/ε₀) in s.
    pub time: f64,
    /// T₀ = ε₀/k_B in K.
    pub temperature: f64,
    /// Particle mass m in kg.
    pub mass: f64,
}

/// Dimensionless particle + box + spring system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSystem {
    /// Spring stiffness `K = k d²/ε₀`.
    pub stiffness: f64,
    /// Wall inertia `μ = M/m`.
    pub mass_ratio: f64,
    /// Present when the system was built from SI input.
    pub scales: Option<SiScales>,
}

impl ReducedSystem {
    /// A system specified directly in reduced units, without SI scales.
    pub fn dimensionless(stiffness: f64, mass_ratio: f64) -> Result<Self> {
        require_positive("K", stiffness)?;
        require_positive("mu", mass_ratio)?;
        Ok(ReducedSystem {
            stiffness,
            mass_ratio,
            scales: None,
        })
    }

    pub fn from_reduced(&self, value: f64, kind: Dimension) -> Result<f64> {
        from_reduced(self, value, kind)
    }

    /// Converts an SI quantity into reduced units.
    pub fn to_dimensionless(&self, value: f64, kind: Dimension) -> Result<f64> {
        Ok(value / self.scale(kind)?)
    }

    pub fn scale(&self, kind: Dimension) -> Result<f64> {
        let s = self.scales.ok_or(Error::NoScales("ReducedSystem"))?;
        Ok(match kind {
            Dimension::Energy => s.energy,
            Dimension::Length => s.length,
            Dimension::Time => s.time,
            Dimension::Temperature => s.temperature,
            Dimension::Force => s.energy / s.length,
            Dimension::Stiffness => s.energy / (s.length * s.length),
        })
    }

    /// Wall mass in kg.
    pub fn wall_mass(&self) -> Result<f64> {
        let s = self.scales.ok_or(Error::NoScales("ReducedSystem"))?;
        Ok(self.mass_ratio * s.mass)
    }
}

/// Physical dimension of a reduced quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Energy,
    Length,
    Time,
    Temperature,
    Force,
    Stiffness,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Energy,
        Dimension::Length,
        Dimension::Time,
        Dimension::Temperature,
        Dimension::Force,
        Dimension::Stiffness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Energy => "energy",
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Temperature => "temperature",
            Dimension::Force => "force",
            Dimension::Stiffness => "stiffness",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unsupported dimension '{s}'")))
    }
}

pub fn to_reduced(input: &PhysicalInput) -> Result<ReducedSystem> {
    input.validate()?;
    let m = input.particle_mass;
    let d = input.box_size;
    let energy = input.zero_point_energy();
    let scales = SiScales {
        energy,
        length: d,
        time: d * (m / energy).sqrt(),
        temperature: energy / BOLTZMANN,
        mass: m,
    };
    Ok(ReducedSystem {
        stiffness: input.spring_stiffness * d * d / energy,
        mass_ratio: input.wall_mass / m,
        scales: Some(scales),
    })
}

pub fn from_reduced(sys: &ReducedSystem, value: f64, kind: Dimension) -> Result<f64> {
    Ok(value * sys.scale(kind)?)
}
