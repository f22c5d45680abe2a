//! Phenomenological model of a reflowed resist motif.
//!
//! A patterned resist block softens during the cure cycle and grows two
//! ridges ("peaks") along its edges once the temperature passes an onset
//! point; the ridges keep growing until a saturation temperature. Narrow
//! motifs do not develop distinct ridges: below a merge width that scales
//! with resist thickness the top stays planar.
//!
//! Shapes are smooth closed forms rather than a flow simulation:
//!
//! * lithographic plateau of height `P` over the motif, with raised-cosine
//!   tapers to zero over `edge_taper_fraction * motif_width` on each side;
//! * two raised-cosine ridges, each `peak_width_fraction * motif_width`
//!   wide, lying just inside the motif edges, with height
//!   `growth * max_peak_height_fraction * T * (1 - W_merge / W)`, where `T`
//!   is the resist body thickness under the ridge.
//!
//! Every sample is computed from its distance to the motif centre, so
//! profiles are exactly mirror-symmetric.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::model::positive;

use super::height::{HeightProfile, MIN_SAMPLES};

pub const AMBIENT_TEMPERATURE: f64 = 20.0;
pub const DEFAULT_ONSET_TEMPERATURE: f64 = 117.5;
pub const DEFAULT_SATURATION_TEMPERATURE: f64 = 335.0;

/// Cure cycle, temperatures in °C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCycle {
    pub peak_temperature: f64,
    pub onset_temperature: f64,
    pub saturation_temperature: f64,
}

impl ThermalCycle {
    pub fn new(peak_temperature: f64) -> Result<Self> {
        let c = ThermalCycle {
            peak_temperature,
            onset_temperature: DEFAULT_ONSET_TEMPERATURE,
            saturation_temperature: DEFAULT_SATURATION_TEMPERATURE,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.onset_temperature < self.saturation_temperature) {
            return Err(Error::invalid(
                "thermal cycle",
                format!(
                    "onset {} °C must be below saturation {} °C",
                    self.onset_temperature, self.saturation_temperature
                ),
            ));
        }
        if !(self.peak_temperature >= AMBIENT_TEMPERATURE) {
            return Err(Error::invalid(
                "peak_temperature",
                format!("{} °C is below ambient", self.peak_temperature),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResistStack {
    /// Deposition order, m.
    pub layer_thicknesses: Vec<f64>,
    pub motif_width: f64,
    /// 0 for a flat substrate.
    pub cavity_depth: f64,
    pub on_cavity: bool,
}

impl ResistStack {
    pub fn flat(layer_thicknesses: Vec<f64>, motif_width: f64) -> Result<Self> {
        let s = ResistStack {
            layer_thicknesses,
            motif_width,
            cavity_depth: 0.0,
            on_cavity: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn on_cavity(layer_thicknesses: Vec<f64>, motif_width: f64, cavity_depth: f64) -> Result<Self> {
        let s = ResistStack {
            layer_thicknesses,
            motif_width,
            cavity_depth,
            on_cavity: true,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.layer_thicknesses.is_empty() {
            return Err(Error::invalid("layer_thicknesses", "at least one layer is required"));
        }
        for &t in &self.layer_thicknesses {
            positive("layer thickness", t)?;
        }
        positive("motif_width", self.motif_width)?;
        if !(self.cavity_depth >= 0.0 && self.cavity_depth.is_finite()) {
            return Err(Error::invalid("cavity_depth", "must be non-negative"));
        }
        if self.on_cavity != (self.cavity_depth > 0.0) {
            return Err(Error::invalid(
                "on_cavity",
                "must be set exactly when cavity_depth > 0",
            ));
        }
        Ok(())
    }

    pub fn total_thickness(&self) -> f64 {
        self.layer_thicknesses.iter().sum()
    }
}

/// Shape calibration knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    /// Ridge width as a fraction of motif width, at most 0.5.
    pub peak_width_fraction: f64,
    /// Merge width per unit resist thickness.
    pub merge_coefficient: f64,
    /// Stretch of the merge width for resist on a cavity.
    pub cavity_merge_multiplier: f64,
    /// Saturated ridge height per unit body thickness.
    pub max_peak_height_fraction: f64,
    /// Edge taper length as a fraction of motif width.
    pub edge_taper_fraction: f64,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            peak_width_fraction: 0.08,
            merge_coefficient: 50.0,
            cavity_merge_multiplier: 1.5,
            max_peak_height_fraction: 0.35,
            edge_taper_fraction: 0.05,
        }
    }
}

impl ProfileParams {
    pub fn validate(&self) -> Result<()> {
        positive("peak_width_fraction", self.peak_width_fraction)?;
        if self.peak_width_fraction > 0.5 {
            return Err(Error::invalid(
                "peak_width_fraction",
                format!("ridges would overlap at {}", self.peak_width_fraction),
            ));
        }
        positive("merge_coefficient", self.merge_coefficient)?;
        positive("cavity_merge_multiplier", self.cavity_merge_multiplier)?;
        positive("max_peak_height_fraction", self.max_peak_height_fraction)?;
        positive("edge_taper_fraction", self.edge_taper_fraction)
    }
}

/// Piecewise-linear ridge growth, 0 below onset and 1 from saturation on.
pub fn peak_growth_factor(cycle: &ThermalCycle) -> f64 {
    ((cycle.peak_temperature - cycle.onset_temperature)
        / (cycle.saturation_temperature - cycle.onset_temperature))
        .clamp(0.0, 1.0)
}

/// Motif width below which the two ridges merge into a planar top.
pub fn merge_transition_width(stack: &ResistStack, params: &ProfileParams) -> f64 {
    let mult = if stack.on_cavity {
        params.cavity_merge_multiplier
    } else {
        1.0
    };
    params.merge_coefficient * stack.total_thickness() * mult
}

/// Strictly wider than the merge width, ignoring round-off at the boundary.
fn is_two_peak(motif_width: f64, merge_width: f64) -> bool {
    motif_width > merge_width * (1.0 + 1e-9)
}

/// One reflowed layer as a function of distance from the motif centre.
#[derive(Debug, Clone, Copy)]
struct LayerShape {
    half_width: f64,
    taper: f64,
    plateau: f64,
    ridge_height: f64,
    ridge_width: f64,
}

impl LayerShape {
    fn new(
        motif_width: f64,
        plateau: f64,
        body_thickness: f64,
        merge_width: f64,
        growth: f64,
        params: &ProfileParams,
    ) -> Self {
        let ridge_height = if is_two_peak(motif_width, merge_width) && growth > 0.0 {
            growth * params.max_peak_height_fraction * body_thickness * (1.0 - merge_width / motif_width)
        } else {
            0.0
        };
        LayerShape {
            half_width: 0.5 * motif_width,
            taper: params.edge_taper_fraction * motif_width,
            plateau,
            ridge_height,
            ridge_width: params.peak_width_fraction * motif_width,
        }
    }

    /// Plateau with tapered edges, no ridges.
    fn base(&self, a: f64) -> f64 {
        if a <= self.half_width {
            self.plateau
        } else if a < self.half_width + self.taper {
            0.5 * self.plateau * (1.0 + (PI * (a - self.half_width) / self.taper).cos())
        } else {
            0.0
        }
    }

    fn ridge(&self, a: f64) -> f64 {
        if self.ridge_height == 0.0 {
            return 0.0;
        }
        let crest = self.half_width - 0.5 * self.ridge_width;
        let u = a - crest;
        if u.abs() < 0.5 * self.ridge_width {
            0.5 * self.ridge_height * (1.0 + (2.0 * PI * u / self.ridge_width).cos())
        } else {
            0.0
        }
    }

    fn height(&self, a: f64) -> f64 {
        self.base(a) + self.ridge(a)
    }
}

/// Distances from the span centre for `n` uniform samples, plus the positions.
fn sample_grid(span: f64, n: usize) -> Vec<(f64, f64)> {
    let dx = span / (n - 1) as f64;
    let mid = 0.5 * (n - 1) as f64;
    (0..n)
        .map(|i| {
            let offset = (i as f64 - mid) * dx;
            (i as f64 * dx, offset.abs())
        })
        .collect()
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::invalid(
            "n_samples",
            format!("needs at least {MIN_SAMPLES}, got {n}"),
        ));
    }
    Ok(())
}

/// Total sampled span for a motif: the motif plus a taper zone on each side.
pub fn profile_span(motif_width: f64, params: &ProfileParams) -> f64 {
    motif_width * (1.0 + 2.0 * params.edge_taper_fraction)
}

/// Top surface of one reflowed stack, heights above the cavity floor (or the
/// substrate when flat). The plateau sits at `cavity_depth + Σ thickness`.
pub fn reflow_profile(
    stack: &ResistStack,
    cycle: &ThermalCycle,
    params: &ProfileParams,
    n_samples: usize,
) -> Result<HeightProfile> {
    stack.validate()?;
    cycle.validate()?;
    params.validate()?;
    check_samples(n_samples)?;
    let body = stack.cavity_depth + stack.total_thickness();
    let shape = LayerShape::new(
        stack.motif_width,
        body,
        body,
        merge_transition_width(stack, params),
        peak_growth_factor(cycle),
        params,
    );
    let span = profile_span(stack.motif_width, params);
    let samples = sample_grid(span, n_samples)
        .into_iter()
        .map(|(x, a)| (x, shape.height(a)))
        .collect();
    HeightProfile::new(samples)
}

/// `max(h) - h(centre)`: how far the ridges stand above the motif centre.
pub fn peak_center_height_delta(profile: &HeightProfile) -> f64 {
    (profile.max_height() - profile.center_height()).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSpec {
    /// m; zero skips the layer.
    pub thickness: f64,
    pub cycle: ThermalCycle,
}

/// Three-coat sacrificial process over a cavity.
///
/// Coat 1 fills the cavity and is trimmed flush with its rim, leaving a flat
/// surface at `cavity_depth`. Coats 2 and 3 are each patterned over the
/// motif and reflowed with their own cycle, stacking on the running surface.
/// Ridge heights grow with the resist body under them (cavity fill plus the
/// coats so far). Heights are measured from the cavity floor.
pub fn tri_layer_process(
    motif_width: f64,
    cavity_depth: f64,
    layers: &[LayerSpec],
    params: &ProfileParams,
    n_samples: usize,
) -> Result<HeightProfile> {
    if layers.len() != 3 {
        return Err(Error::WrongLayerCount(layers.len()));
    }
    positive("motif_width", motif_width)?;
    positive("cavity_depth", cavity_depth)?;
    params.validate()?;
    check_samples(n_samples)?;
    if layers[0].thickness < cavity_depth {
        return Err(Error::invalid(
            "first layer thickness",
            format!(
                "{:e} m cannot fill a {:e} m cavity",
                layers[0].thickness, cavity_depth
            ),
        ));
    }
    for l in layers {
        l.cycle.validate()?;
        if !(l.thickness >= 0.0 && l.thickness.is_finite()) {
            return Err(Error::invalid("layer thickness", "must be non-negative"));
        }
    }

    let mut body = cavity_depth;
    let mut shapes = Vec::with_capacity(2);
    for l in &layers[1..] {
        if l.thickness == 0.0 {
            continue;
        }
        body += l.thickness;
        let stack = ResistStack::on_cavity(vec![l.thickness], motif_width, cavity_depth)?;
        shapes.push(LayerShape::new(
            motif_width,
            l.thickness,
            body,
            merge_transition_width(&stack, params),
            peak_growth_factor(&l.cycle),
            params,
        ));
    }
    let span = profile_span(motif_width, params);
    let samples = sample_grid(span, n_samples)
        .into_iter()
        .map(|(x, a)| (x, cavity_depth + shapes.iter().map(|s| s.height(a)).sum::<f64>()))
        .collect();
    HeightProfile::new(samples)
}

/// Generates one profile per stack.
pub fn reflow_batch(
    exec: Execution,
    stacks: &[ResistStack],
    cycle: &ThermalCycle,
    params: &ProfileParams,
    n_samples: usize,
) -> Result<Vec<HeightProfile>> {
    exec::try_map(exec, stacks, |s| reflow_profile(s, cycle, params, n_samples))
}
