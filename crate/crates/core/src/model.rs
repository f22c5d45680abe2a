//! Shared physical constants, materials and geometry.
//!
//! Everything here is stored in SI base units. Conversions to the µm / pF /
//! MPa values used in design files and CSV output happen at the I/O boundary
//! through the factors in [`units`].

use crate::error::{Error, Result};

/// Vacuum permittivity in F/m, pinned to four significant digits.
pub const VACUUM_PERMITTIVITY: f64 = 8.854e-12;

/// Unit conversion factors (multiply to go to SI, divide to come back).
pub mod units {
    pub const MICROMETRE: f64 = 1e-6;
    pub const PICOFARAD: f64 = 1e-12;
    pub const GIGAPASCAL: f64 = 1e9;
    pub const MEGAPASCAL: f64 = 1e6;
    /// MPa/µm expressed in Pa/m.
    pub const MEGAPASCAL_PER_MICROMETRE: f64 = 1e12;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// F/m
    pub vacuum_permittivity: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            vacuum_permittivity: VACUUM_PERMITTIVITY,
        }
    }
}

/// Effective structural material of the suspended membrane.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Pa
    pub youngs_modulus: f64,
    /// Mid-plane residual stress in Pa; negative is compressive.
    pub residual_stress: f64,
    /// Through-thickness stress gradient in Pa/m.
    pub stress_gradient: f64,
    pub relative_permittivity: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, youngs_modulus: f64) -> Result<Self> {
        let m = Material {
            name: name.into(),
            youngs_modulus,
            residual_stress: 0.0,
            stress_gradient: 0.0,
            relative_permittivity: 1.0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_residual_stress(mut self, stress: f64) -> Self {
        self.residual_stress = stress;
        self
    }

    pub fn with_stress_gradient(mut self, gradient: f64) -> Self {
        self.stress_gradient = gradient;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > 0.0 && self.youngs_modulus.is_finite()) {
            return Err(Error::invalid(
                "youngs_modulus",
                format!("must be positive, got {}", self.youngs_modulus),
            ));
        }
        if !(self.relative_permittivity >= 1.0 && self.relative_permittivity.is_finite()) {
            return Err(Error::invalid(
                "relative_permittivity",
                format!("must be >= 1, got {}", self.relative_permittivity),
            ));
        }
        if !self.residual_stress.is_finite() || !self.stress_gradient.is_finite() {
            return Err(Error::invalid("material stress", "must be finite"));
        }
        Ok(())
    }
}

/// Rectangular prismatic beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
}

impl BeamGeometry {
    pub fn new(length: f64, width: f64, thickness: f64) -> Result<Self> {
        let b = BeamGeometry {
            length,
            width,
            thickness,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        positive("beam length", self.length)?;
        positive("beam width", self.width)?;
        positive("beam thickness", self.thickness)
    }

    pub fn cross_section_area(&self) -> f64 {
        self.width * self.thickness
    }

    pub fn second_moment(&self) -> f64 {
        second_moment(self)
    }
}

/// A parallel-plate electrode region: overlap footprint plus its air gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateRegion {
    pub length: f64,
    pub width: f64,
    pub gap: f64,
}

impl PlateRegion {
    pub fn new(length: f64, width: f64, gap: f64) -> Result<Self> {
        let r = PlateRegion { length, width, gap };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        positive("region length", self.length)?;
        positive("region width", self.width)?;
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::NonPositiveGap { gap: self.gap });
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        region_area(self)
    }
}

/// Overlap area `length * width` in m².
pub fn region_area(region: &PlateRegion) -> f64 {
    region.length * region.width
}

/// Second moment of area of the rectangular section, `w t³ / 12`, in m⁴.
pub fn second_moment(beam: &BeamGeometry) -> f64 {
    beam.width * beam.thickness.powi(3) / 12.0
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive, got {value}")))
    }
}
