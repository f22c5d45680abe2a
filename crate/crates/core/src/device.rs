//! Dual-gap tunable capacitor.
//!
//! The actuation electrodes sit under a gap `E_a`, the capacitive electrode
//! under a smaller gap `E_c`. The plate moves rigidly, so the lumped
//! actuator displacement is also the capacitive-gap closure. With
//! `E_a = 3 E_c` the stable travel `E_a / 3` covers the whole capacitive gap;
//! dimples stop the plate `dimple_residual_gap` short of the electrode.

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lumped::{self, LumpedActuator};
use crate::model::{units::MICROMETRE, BeamGeometry, PlateRegion, VACUUM_PERMITTIVITY};

#[derive(Debug, Clone, PartialEq)]
pub struct DualGapDesign {
    pub id: String,
    /// Gap is `E_c`.
    pub capacitive_region: PlateRegion,
    /// Gap is `E_a`; length is the combined length of all pads.
    pub actuation_region: PlateRegion,
    /// Number of actuation pads sharing `actuation_region` (for layout only).
    pub actuation_pads: u32,
    pub beam: BeamGeometry,
    pub dimple_residual_gap: f64,
    /// N/m
    pub effective_spring_constant: f64,
    /// F/m
    pub permittivity: f64,
}

impl DualGapDesign {
    /// Table 1 device: 250 × 80 µm capacitive plate over 1.5 µm, two
    /// 200 × 80 µm actuation pads over 4.5 µm, an 800 × 80 µm beam, 0.1 µm
    /// dimples and `k = 1.511 N/m`.
    pub fn paper_device() -> Self {
        let um = MICROMETRE;
        DualGapDesign {
            id: "paper-device".into(),
            capacitive_region: PlateRegion {
                length: 250.0 * um,
                width: 80.0 * um,
                gap: 1.5 * um,
            },
            actuation_region: PlateRegion {
                length: 2.0 * 200.0 * um,
                width: 80.0 * um,
                gap: 4.5 * um,
            },
            actuation_pads: 2,
            beam: BeamGeometry {
                length: 800.0 * um,
                width: 80.0 * um,
                thickness: 2.0 * um,
            },
            dimple_residual_gap: 0.1 * um,
            effective_spring_constant: 1.511,
            permittivity: VACUUM_PERMITTIVITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.capacitive_region.validate()?;
        self.actuation_region.validate()?;
        self.beam.validate()?;
        crate::model::positive("effective_spring_constant", self.effective_spring_constant)?;
        crate::model::positive("permittivity", self.permittivity)?;
        if self.actuation_pads == 0 {
            return Err(Error::invalid("actuation_pads", "at least one pad is required"));
        }
        if !(self.dimple_residual_gap > 0.0 && self.dimple_residual_gap < self.capacitive_region.gap) {
            return Err(Error::invalid(
                "dimple_residual_gap",
                format!(
                    "{:e} m must lie in (0, capacitive gap {:e} m)",
                    self.dimple_residual_gap, self.capacitive_region.gap
                ),
            ));
        }
        if !(self.actuation_region.gap > self.capacitive_region.gap) {
            return Err(Error::invalid(
                "actuation gap",
                format!(
                    "{:e} m must exceed the capacitive gap {:e} m",
                    self.actuation_region.gap, self.capacitive_region.gap
                ),
            ));
        }
        Ok(())
    }

    /// Non-fatal design remarks.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let ratio = self.actuation_region.gap / self.capacitive_region.gap;
        if (ratio - 3.0).abs() > 1e-9 {
            w.push(format!(
                "actuation gap is {ratio:.3}x the capacitive gap; the dual-gap rule is 3x"
            ));
        }
        w
    }

    /// Travel at which the dimples land.
    pub fn contact_displacement(&self) -> f64 {
        self.capacitive_region.gap - self.dimple_residual_gap
    }

    /// `E_a / 3 - (E_c - residual)`; positive when the dimples land before pull-in.
    pub fn pull_in_margin(&self) -> f64 {
        self.actuation_region.gap / 3.0 - self.contact_displacement()
    }

    /// Pad spans along the beam, placed symmetrically beside the capacitive
    /// plate at mid-span.
    pub fn actuation_spans(&self) -> Vec<(f64, f64)> {
        let l = self.beam.length;
        let half_c = 0.5 * self.capacitive_region.length;
        let pad = self.actuation_region.length / self.actuation_pads as f64;
        let c = 0.5 * l;
        match self.actuation_pads {
            1 => vec![(c - half_c - pad, c - half_c)],
            n => {
                let per_side = (n as f64 / 2.0).ceil() as usize;
                let mut spans = Vec::with_capacity(n as usize);
                for i in 0..per_side {
                    let end = c - half_c - i as f64 * pad;
                    spans.push((end - pad, end));
                }
                for i in 0..(n as usize - per_side) {
                    let start = c + half_c + i as f64 * pad;
                    spans.push((start, start + pad));
                }
                spans.sort_by(|a, b| a.0.total_cmp(&b.0));
                spans
            }
        }
    }

    /// Span of the capacitive plate along the beam.
    pub fn capacitive_span(&self) -> (f64, f64) {
        let c = 0.5 * self.beam.length;
        let h = 0.5 * self.capacitive_region.length;
        (c - h, c + h)
    }
}

/// `ε S_c / (E_c - x)` for a plate displacement `x`.
pub fn displacement_to_capacitance(design: &DualGapDesign, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::invalid("displacement", format!("must be non-negative, got {x}")));
    }
    let limit = design.contact_displacement();
    if x > limit * (1.0 + 1e-12) {
        return Err(Error::DimpleViolation { displacement: x, limit });
    }
    let gap = design.capacitive_region.gap - x.min(limit);
    lumped::parallel_plate_capacitance(design.capacitive_region.area(), gap, design.permittivity)
}

pub fn actuator_of(design: &DualGapDesign) -> LumpedActuator {
    LumpedActuator {
        spring_constant: design.effective_spring_constant,
        gap: design.actuation_region.gap,
        actuation_area: design.actuation_region.area(),
        permittivity: design.permittivity,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub voltage: f64,
    pub displacement: f64,
    pub capacitance: f64,
    pub stable: bool,
    pub dimple_contact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub v_start: f64,
    pub v_stop: f64,
    pub points: usize,
    /// Fold refinement enabled.
    pub adaptive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CVCurve {
    pub design_id: String,
    pub sweep: SweepSpec,
    pub points: Vec<EquilibriumPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub adaptive: bool,
    pub execution: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            adaptive: true,
            execution: Execution::default(),
        }
    }
}

/// Number of points inserted towards the fold by adaptive refinement.
const FOLD_REFINEMENT_POINTS: u32 = 8;

pub fn trace_cv_curve(design: &DualGapDesign, v_max: f64, n_points: usize) -> Result<CVCurve> {
    trace_cv_curve_with(design, v_max, n_points, &SweepOptions::default())
}

/// Quasi-static C–V sweep on a uniform grid over `[0, v_max]`.
///
/// Beyond the dimple-contact voltage the plate stays clamped at the contact
/// travel. If pull-in comes first, the curve ends with the fold point
/// (`stable = false`). When the fold is reachable and `v_max > 0.95 V_PI`,
/// extra voltages are inserted geometrically closer to `V_PI`.
pub fn trace_cv_curve_with(
    design: &DualGapDesign,
    v_max: f64,
    n_points: usize,
    opts: &SweepOptions,
) -> Result<CVCurve> {
    design.validate()?;
    if !(v_max >= 0.0 && v_max.is_finite()) {
        return Err(Error::invalid("v_max", format!("must be non-negative, got {v_max}")));
    }
    if n_points < 2 {
        return Err(Error::invalid("n_points", format!("needs at least 2, got {n_points}")));
    }
    let actuator = actuator_of(design);
    let v_pi = actuator.pull_in_voltage();
    let x_contact = design.contact_displacement();
    let v_contact = contact_voltage(design)?;
    let fold_reachable = v_contact.is_none();

    let mut grid: Vec<f64> = (0..n_points)
        .map(|i| v_max * i as f64 / (n_points - 1) as f64)
        .collect();
    let adaptive = opts.adaptive && fold_reachable && v_max > 0.95 * v_pi;
    if adaptive {
        let span = 0.05 * v_pi;
        for k in 1..=FOLD_REFINEMENT_POINTS {
            let v = v_pi - span * 0.5_f64.powi(k as i32);
            if v < v_max {
                grid.push(v);
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    // past the fold only the fold point itself is kept
    let fold_cut = fold_reachable && v_max > v_pi;
    if fold_cut {
        grid.retain(|&v| v < v_pi);
    }

    let solved = exec::try_map(opts.execution, &grid, |&v| -> Result<EquilibriumPoint> {
        if v_contact.is_some_and(|vc| v >= vc) {
            return contact_point(design, v, x_contact);
        }
        let eq = actuator.solve_equilibrium(v)?;
        if eq.displacement >= x_contact {
            return contact_point(design, v, x_contact);
        }
        Ok(EquilibriumPoint {
            voltage: v,
            displacement: eq.displacement,
            capacitance: displacement_to_capacitance(design, eq.displacement)?,
            stable: eq.stable,
            dimple_contact: false,
        })
    })?;
    let mut points = solved;
    if fold_cut {
        let x = actuator.pull_in_displacement();
        points.push(EquilibriumPoint {
            voltage: v_pi,
            displacement: x,
            capacitance: displacement_to_capacitance(design, x)?,
            stable: false,
            dimple_contact: false,
        });
    }

    Ok(CVCurve {
        design_id: design.id.clone(),
        sweep: SweepSpec {
            v_start: 0.0,
            v_stop: v_max,
            points: n_points,
            adaptive,
        },
        points,
    })
}

fn contact_point(design: &DualGapDesign, v: f64, x_contact: f64) -> Result<EquilibriumPoint> {
    Ok(EquilibriumPoint {
        voltage: v,
        displacement: x_contact,
        capacitance: displacement_to_capacitance(design, x_contact)?,
        stable: true,
        dimple_contact: true,
    })
}

/// Voltage at which the dimples land on the stable branch, or `None` when
/// pull-in comes first.
pub fn contact_voltage(design: &DualGapDesign) -> Result<Option<f64>> {
    let actuator = actuator_of(design);
    let x = design.contact_displacement();
    if x >= actuator.pull_in_displacement() {
        return Ok(None);
    }
    actuator.voltage_at_displacement(x).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignReport {
    pub c_zero: f64,
    pub c_max: f64,
    /// Percent.
    pub tuning_range: f64,
    pub pull_in_voltage: f64,
    /// Equals `pull_in_voltage` when pull-in precedes dimple contact.
    pub dimple_contact_voltage: f64,
    pub pull_in_margin: f64,
}

impl DesignReport {
    /// Tuning range recomputed from capacitances rounded to `resolution`
    /// (in F), mimicking hand arithmetic on rounded values.
    pub fn tuning_range_at_resolution(&self, resolution: f64) -> Result<f64> {
        let round = |c: f64| (c / resolution).round() * resolution;
        lumped::tuning_range(round(self.c_zero), round(self.c_max))
    }
}

pub fn evaluate_design(design: &DualGapDesign) -> Result<DesignReport> {
    design.validate()?;
    let actuator = actuator_of(design);
    let c_zero = displacement_to_capacitance(design, 0.0)?;
    let c_max = displacement_to_capacitance(design, design.contact_displacement())?;
    let v_pi = actuator.pull_in_voltage();
    Ok(DesignReport {
        c_zero,
        c_max,
        tuning_range: lumped::tuning_range(c_zero, c_max)?,
        pull_in_voltage: v_pi,
        dimple_contact_voltage: contact_voltage(design)?.unwrap_or(v_pi),
        pull_in_margin: design.pull_in_margin(),
    })
}
