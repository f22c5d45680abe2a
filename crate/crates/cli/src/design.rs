//! Design files: JSON documents describing a device, its material and the
//! solver/profile/release settings, with the built-in `paper-device` preset.

use std::path::Path;

use dualgap_core::device::DualGapDesign;
use dualgap_core::model::units::{GIGAPASCAL, MEGAPASCAL, MEGAPASCAL_PER_MICROMETRE, MICROMETRE};
use dualgap_core::model::{BeamGeometry, Material, PlateRegion, VACUUM_PERMITTIVITY};
use dualgap_core::profile::{LayerSpec, ProfileParams, ThermalCycle};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const PAPER_DEVICE: &str = include_str!("../presets/paper-device.json");

pub fn preset_text(name: &str) -> Option<&'static str> {
    match name {
        "paper-device" => Some(PAPER_DEVICE),
        _ => None,
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignFile {
    schema_version: u32,
    #[serde(default)]
    #[allow(dead_code)]
    extends: Option<String>,
    design: DesignSection,
    material: Option<MaterialSection>,
    solver: Option<SolverSection>,
    release: Option<ReleaseSection>,
    profile: Option<ProfileSection>,
    constants: Option<ConstantsSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignSection {
    id: Option<String>,
    capacitive: RegionSection,
    actuation: ActuationSection,
    beam: BeamSection,
    dimple_residual_gap_um: f64,
    spring: SpringSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionSection {
    length_um: f64,
    width_um: f64,
    gap_um: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActuationSection {
    pad_length_um: f64,
    pads: u32,
    width_um: f64,
    gap_um: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamSection {
    length_um: f64,
    width_um: f64,
    thickness_um: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpringSection {
    #[serde(rename = "k_N_per_m")]
    k: Option<f64>,
    from_beam: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialSection {
    name: String,
    #[serde(rename = "youngs_modulus_GPa")]
    youngs_modulus_gpa: f64,
    #[serde(rename = "residual_stress_MPa", default)]
    residual_stress_mpa: f64,
    #[serde(rename = "stress_gradient_MPa_per_um", default)]
    stress_gradient_mpa_per_um: f64,
    #[serde(default = "one")]
    relative_permittivity: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub fem_elements: usize,
    pub cv_points: usize,
    #[serde(rename = "v_max_V")]
    pub v_max: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            fem_elements: 64,
            cv_points: 121,
            v_max: 12.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReleaseMode {
    Calibrate,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialGap {
    Profile,
    Uniform,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SpanSection {
    Named(NamedSpan),
    Explicit {
        start_um: f64,
        end_um: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NamedSpan {
    Capacitive,
    Full,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReleaseSection {
    mode: ReleaseMode,
    target_center_deflection_um: Option<f64>,
    #[serde(default = "capacitive_span")]
    stressed_span: SpanSection,
    #[serde(default = "profile_gap")]
    initial_gap: InitialGap,
}

fn capacitive_span() -> SpanSection {
    SpanSection::Named(NamedSpan::Capacitive)
}

fn profile_gap() -> InitialGap {
    InitialGap::Profile
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Process {
    #[serde(rename = "single")]
    Single,
    #[serde(rename = "tri-layer")]
    TriLayer,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSection {
    process: Process,
    motif_width_um: f64,
    #[serde(default)]
    cavity_depth_um: f64,
    #[serde(rename = "peak_temperature_C")]
    peak_temperature: Option<f64>,
    layers: Vec<LayerEntry>,
    #[serde(rename = "onset_temperature_C")]
    onset_temperature: Option<f64>,
    #[serde(rename = "saturation_temperature_C")]
    saturation_temperature: Option<f64>,
    #[serde(default)]
    params: ParamsSection,
    #[serde(default = "default_samples")]
    n_samples: usize,
}

fn default_samples() -> usize {
    1201
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerEntry {
    thickness_um: f64,
    #[serde(rename = "peak_temperature_C")]
    peak_temperature: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    peak_width_fraction: Option<f64>,
    merge_coefficient: Option<f64>,
    cavity_merge_multiplier: Option<f64>,
    max_peak_height_fraction: Option<f64>,
    edge_taper_fraction: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsSection {
    #[serde(rename = "vacuum_permittivity_F_per_m")]
    vacuum_permittivity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StressedSpan {
    Capacitive,
    Full,
    /// m
    Explicit(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReleaseSettings {
    pub mode: ReleaseMode,
    /// m
    pub target_center_deflection: Option<f64>,
    pub stressed_span: StressedSpan,
    pub initial_gap: InitialGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSettings {
    pub process: Process,
    /// m
    pub motif_width: f64,
    /// m
    pub cavity_depth: f64,
    /// Per-layer thickness and thermal cycle, deposition order.
    pub layers: Vec<LayerSpec>,
    pub params: ProfileParams,
    pub n_samples: usize,
}

/// Fully validated design file in SI units.
#[derive(Debug, Clone)]
pub struct DesignBundle {
    pub design: DualGapDesign,
    pub material: Option<Material>,
    pub solver: SolverSection,
    pub release: ReleaseSettings,
    pub profile: ProfileSettings,
    pub warnings: Vec<String>,
}

/// Parses and validates a design document.
pub fn parse_design(text: &str) -> Result<DesignBundle, CliError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(format!("invalid JSON: {e}")))?;
    let file: DesignFile = match raw.get("extends") {
        Some(Value::String(name)) => {
            let base_text = preset_text(name)
                .ok_or_else(|| CliError::Schema(format!("extends: unknown preset {name:?}")))?;
            let mut merged: Value = serde_json::from_str(base_text).expect("preset is valid JSON");
            let mut patch = raw.clone();
            if let Value::Object(map) = &mut patch {
                map.remove("extends");
            }
            json_patch::merge(&mut merged, &patch);
            serde_path_to_error::deserialize(merged).map_err(|e| schema_error(&e))?
        }
        Some(_) => return Err(CliError::Schema("extends: must be a preset name".into())),
        None => {
            let mut de = serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(&mut de).map_err(|e| schema_error(&e))?
        }
    };
    file.into_bundle()
}

pub fn load_design(path: &Path) -> Result<(DesignBundle, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Schema(format!("{}: not UTF-8: {e}", path.display())))?;
    let bundle = parse_design(text).map_err(|e| e.context(&path.display().to_string()))?;
    Ok((bundle, bytes))
}

pub fn load_preset(name: &str) -> Result<DesignBundle, CliError> {
    let text = preset_text(name).ok_or_else(|| CliError::Schema(format!("unknown preset {name:?}")))?;
    parse_design(text)
}

fn schema_error(e: &serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let path = e.path().to_string();
    let inner = e.inner();
    if path == "." || path.is_empty() {
        CliError::Schema(inner.to_string())
    } else {
        CliError::Schema(format!("{path}: {inner}"))
    }
}

fn preset_file() -> DesignFile {
    serde_json::from_str(PAPER_DEVICE).expect("preset matches the schema")
}

impl DesignFile {
    fn into_bundle(self) -> Result<DesignBundle, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version: expected {SCHEMA_VERSION}, found {}",
                self.schema_version
            )));
        }
        let preset = preset_file();
        let um = MICROMETRE;
        let d = &self.design;

        let permittivity_vacuum = self
            .constants
            .as_ref()
            .map_or(VACUUM_PERMITTIVITY, |c| c.vacuum_permittivity);
        let material = self.material.as_ref().map(MaterialSection::to_material);
        let eps_r = material.as_ref().map_or(1.0, |m| m.relative_permittivity);

        let beam = BeamGeometry {
            length: d.beam.length_um * um,
            width: d.beam.width_um * um,
            thickness: d.beam.thickness_um * um,
        };
        let spring = match (d.spring.k, d.spring.from_beam) {
            (Some(k), None) => k,
            (None, Some(true)) => {
                let m = material.as_ref().ok_or_else(|| {
                    CliError::Schema("design.spring.from_beam: needs a material section for E".into())
                })?;
                dualgap_core::lumped::fixed_fixed_spring_constant(&beam, m.youngs_modulus)
            }
            (None, Some(false)) => {
                return Err(CliError::Schema(
                    "design.spring: from_beam must be true when given".into(),
                ))
            }
            (None, None) | (Some(_), Some(_)) => {
                return Err(CliError::Schema(
                    "design.spring: give exactly one of k_N_per_m or from_beam".into(),
                ))
            }
        };

        let design = DualGapDesign {
            id: d.id.clone().unwrap_or_else(|| "custom".into()),
            capacitive_region: PlateRegion {
                length: d.capacitive.length_um * um,
                width: d.capacitive.width_um * um,
                gap: d.capacitive.gap_um * um,
            },
            actuation_region: PlateRegion {
                length: d.actuation.pad_length_um * d.actuation.pads as f64 * um,
                width: d.actuation.width_um * um,
                gap: d.actuation.gap_um * um,
            },
            actuation_pads: d.actuation.pads,
            beam,
            dimple_residual_gap: d.dimple_residual_gap_um * um,
            effective_spring_constant: spring,
            permittivity: permittivity_vacuum * eps_r,
        };
        design.validate()?;
        if let Some(m) = &material {
            m.validate()?;
        }

        let solver = self.solver.unwrap_or_default();
        let release = self
            .release
            .or(preset.release)
            .expect("preset has a release section")
            .to_settings()?;
        let profile = self
            .profile
            .or(preset.profile)
            .expect("preset has a profile section")
            .to_settings()?;

        Ok(DesignBundle {
            warnings: design.warnings(),
            design,
            material,
            solver,
            release,
            profile,
        })
    }
}

impl MaterialSection {
    fn to_material(&self) -> Material {
        Material {
            name: self.name.clone(),
            youngs_modulus: self.youngs_modulus_gpa * GIGAPASCAL,
            residual_stress: self.residual_stress_mpa * MEGAPASCAL,
            stress_gradient: self.stress_gradient_mpa_per_um * MEGAPASCAL_PER_MICROMETRE,
            relative_permittivity: self.relative_permittivity,
        }
    }
}

impl ReleaseSection {
    fn to_settings(&self) -> Result<ReleaseSettings, CliError> {
        let target = self.target_center_deflection_um.map(|t| t * MICROMETRE);
        if self.mode == ReleaseMode::Calibrate && target.is_none() {
            return Err(CliError::Schema(
                "release.target_center_deflection_um: required in calibrate mode".into(),
            ));
        }
        let stressed_span = match self.stressed_span {
            SpanSection::Named(NamedSpan::Capacitive) => StressedSpan::Capacitive,
            SpanSection::Named(NamedSpan::Full) => StressedSpan::Full,
            SpanSection::Explicit { start_um, end_um } => {
                StressedSpan::Explicit(start_um * MICROMETRE, end_um * MICROMETRE)
            }
        };
        Ok(ReleaseSettings {
            mode: self.mode,
            target_center_deflection: target,
            stressed_span,
            initial_gap: self.initial_gap,
        })
    }
}

impl ProfileSection {
    fn to_settings(&self) -> Result<ProfileSettings, CliError> {
        let cycle = |t: f64| -> Result<ThermalCycle, CliError> {
            let mut c = ThermalCycle::new(t)?;
            if let Some(o) = self.onset_temperature {
                c.onset_temperature = o;
            }
            if let Some(s) = self.saturation_temperature {
                c.saturation_temperature = s;
            }
            c.validate()?;
            Ok(c)
        };
        let mut layers = Vec::with_capacity(self.layers.len());
        for (i, l) in self.layers.iter().enumerate() {
            let t = match (self.process, l.peak_temperature, self.peak_temperature) {
                (Process::TriLayer, Some(t), _) => t,
                (Process::TriLayer, None, _) => {
                    return Err(CliError::Schema(format!(
                        "profile.layers[{i}].peak_temperature_C: required for the tri-layer process"
                    )))
                }
                (Process::Single, None, Some(t)) => t,
                (Process::Single, Some(_), _) => {
                    return Err(CliError::Schema(format!(
                        "profile.layers[{i}].peak_temperature_C: a single process uses profile.peak_temperature_C"
                    )))
                }
                (Process::Single, None, None) => {
                    return Err(CliError::Schema(
                        "profile.peak_temperature_C: required for the single process".into(),
                    ))
                }
            };
            layers.push(LayerSpec {
                thickness: l.thickness_um * MICROMETRE,
                cycle: cycle(t)?,
            });
        }
        let p = &self.params;
        let d = ProfileParams::default();
        let params = ProfileParams {
            peak_width_fraction: p.peak_width_fraction.unwrap_or(d.peak_width_fraction),
            merge_coefficient: p.merge_coefficient.unwrap_or(d.merge_coefficient),
            cavity_merge_multiplier: p.cavity_merge_multiplier.unwrap_or(d.cavity_merge_multiplier),
            max_peak_height_fraction: p.max_peak_height_fraction.unwrap_or(d.max_peak_height_fraction),
            edge_taper_fraction: p.edge_taper_fraction.unwrap_or(d.edge_taper_fraction),
        };
        params.validate()?;
        Ok(ProfileSettings {
            process: self.process,
            motif_width: self.motif_width_um * MICROMETRE,
            cavity_depth: self.cavity_depth_um * MICROMETRE,
            layers,
            params,
            n_samples: self.n_samples,
        })
    }
}
