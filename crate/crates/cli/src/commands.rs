use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dualgap_core::device::{actuator_of, evaluate_design, trace_cv_curve};
use dualgap_core::fem::{build_mesh, calibrate_release, gap_function, release_profile, FactoredBeam};
use dualgap_core::format::sig9;
use dualgap_core::model::units::{MEGAPASCAL_PER_MICROMETRE, MICROMETRE, PICOFARAD};
use dualgap_core::profile::{
    peak_center_height_delta, reflow_profile, tri_layer_process, HeightProfile, ResistStack,
};
use dualgap_core::LumpedActuator;
use serde_json::{json, Map, Value};

use crate::design::{DesignBundle, InitialGap, Process, ProfileSettings, ReleaseMode, StressedSpan};
use crate::error::CliError;
use crate::output::{file_name, input_digest, sibling, Manifest, OutputSet};

/// A loaded design together with the bytes that identify it.
pub struct Input {
    pub bundle: DesignBundle,
    pub digest_bytes: Vec<u8>,
}

/// What a command hands back to `main` for printing.
pub struct Outcome {
    /// Machine-readable result (`--json`, or always for `report`).
    pub json: Value,
    /// Human-readable lines.
    pub text: String,
}

/// Rounds to nine significant digits so JSON output is as stable as the CSV.
fn num(x: f64) -> Value {
    let v: f64 = sig9(x).parse().expect("sig9 output parses");
    json!(v)
}

pub fn report(input: &Input) -> Result<Outcome, CliError> {
    let d = &input.bundle.design;
    let r = evaluate_design(d)?;
    let tr_rounded = r.tuning_range_at_resolution(0.01 * PICOFARAD)?;
    let json = json!({
        "design_id": d.id,
        "c_zero_pF": num(r.c_zero / PICOFARAD),
        "c_max_pF": num(r.c_max / PICOFARAD),
        "tr_exact_pct": num(r.tuning_range),
        "tr_paper_rounded_pct": num(tr_rounded),
        "v_pi_V": num(r.pull_in_voltage),
        "dimple_contact_voltage_V": num(r.dimple_contact_voltage),
        "pull_in_margin_um": num(r.pull_in_margin / MICROMETRE),
        "warnings": input.bundle.warnings,
    });
    let text = serde_json::to_string_pretty(&json).expect("report serialises");
    Ok(Outcome { json, text })
}

pub fn cv_sweep(input: &Input, v_max: f64, points: usize, out: &Path) -> Result<Outcome, CliError> {
    if !(v_max > 0.0 && v_max.is_finite()) {
        return Err(CliError::Schema(format!("--vmax must be positive, got {v_max}")));
    }
    if points < 2 {
        return Err(CliError::Schema(format!("--points needs at least 2, got {points}")));
    }
    let d = &input.bundle.design;
    let curve = trace_cv_curve(d, v_max, points)?;

    let mut csv = String::from("voltage_V,displacement_um,capacitance_pF,stable,dimple_contact\n");
    for p in &curve.points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            sig9(p.voltage),
            sig9(p.displacement / MICROMETRE),
            sig9(p.capacitance / PICOFARAD),
            p.stable,
            p.dimple_contact
        );
    }
    let last = curve.points.last().expect("at least two points");
    let mut extra = Map::new();
    extra.insert("rows".into(), json!(curve.points.len()));
    extra.insert("adaptive_refinement".into(), json!(curve.sweep.adaptive));
    extra.insert("final_capacitance_pF".into(), num(last.capacitance / PICOFARAD));
    extra.insert("final_dimple_contact".into(), json!(last.dimple_contact));
    extra.insert("terminated_at_pull_in".into(), json!(!last.stable));

    let flags = [("vmax", sig9(v_max)), ("points", points.to_string())];
    let mut set = OutputSet::default();
    set.add(out.to_path_buf(), csv);
    finish("cv-sweep", input, &flags, set, out, extra, |m| {
        format!(
            "{} rows, final C = {} pF{}",
            m["rows"],
            m["final_capacitance_pF"],
            if last.dimple_contact { " (dimple contact)" } else { "" }
        )
    })
}

pub fn release(input: &Input, elements: usize, out: &Path) -> Result<Outcome, CliError> {
    if elements < 8 || !elements.is_multiple_of(2) {
        return Err(CliError::Schema(format!(
            "--elements must be an even number of at least 8, got {elements}"
        )));
    }
    let b = &input.bundle;
    let d = &b.design;
    let material = b
        .material
        .clone()
        .ok_or_else(|| CliError::Schema("release needs a material section".into()))?;
    let mesh = build_mesh(&d.beam, &material, elements)?;
    if let Err(e) = FactoredBeam::new(&mesh) {
        return Err(CliError::from(e).context("prestressed beam is buckled"));
    }
    let l = d.beam.length;
    let span = match b.release.stressed_span {
        StressedSpan::Capacitive => d.capacitive_span(),
        StressedSpan::Full => (0.0, l),
        StressedSpan::Explicit(a, e) => (a, e),
    };

    let (field, gradient, calibrated) = match b.release.mode {
        ReleaseMode::Calibrate => {
            let target = b.release.target_center_deflection.expect("validated at load");
            let cal = calibrate_release(&mesh, &material, span, target)?;
            (cal.field, cal.stress_gradient, true)
        }
        ReleaseMode::Fixed => (release_profile(&mesh, &material, span)?, material.stress_gradient, false),
    };

    let initial = match b.release.initial_gap {
        InitialGap::Profile => {
            let full = generate_profile(&b.profile)?;
            crop_to_beam(&full, l, b.profile.n_samples)?
        }
        InitialGap::Uniform => {
            let gap = d.actuation_region.gap;
            HeightProfile::from_fn(0.0, l, 8 * elements + 1, |_| gap)?
        }
    };
    let gap = gap_function(&field, &initial)?;

    let mut csv = String::from("position_um,deflection_um,gap_um\n");
    for &(x, g) in gap.samples() {
        let _ = writeln!(
            csv,
            "{},{},{}",
            sig9(x / MICROMETRE),
            sig9(field.displacement_at(x) / MICROMETRE),
            sig9(g / MICROMETRE)
        );
    }

    let cap_stats = zone_stats(&gap, &[d.capacitive_span()]);
    let act_stats = zone_stats(&gap, &d.actuation_spans());
    let released = LumpedActuator {
        gap: act_stats.mean,
        ..actuator_of(d)
    };
    let summary = json!({
        "design_id": d.id,
        "elements": elements,
        "mode": if calibrated { "calibrate" } else { "fixed" },
        "stressed_span_um": [num(span.0 / MICROMETRE), num(span.1 / MICROMETRE)],
        "stress_gradient_MPa_per_um": num(gradient / MEGAPASCAL_PER_MICROMETRE),
        "center_deflection_um": num(field.center_displacement() / MICROMETRE),
        "critical_compressive_force_N": num(mesh.euler_critical_force()),
        "regions": {
            "capacitive": cap_stats.to_json(),
            "actuation": act_stats.to_json(),
        },
        "released_v_pi_V": num(released.pull_in_voltage()),
    });
    let summary_path = sibling(out, "summary.json");
    let mut set = OutputSet::default();
    set.add(out.to_path_buf(), csv);
    set.add(
        summary_path,
        serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n",
    );
    let mut extra = Map::new();
    extra.insert("center_deflection_um".into(), summary["center_deflection_um"].clone());
    extra.insert("capacitive_min_gap_um".into(), summary["regions"]["capacitive"]["min_gap_um"].clone());
    extra.insert("actuation_mean_gap_um".into(), summary["regions"]["actuation"]["mean_gap_um"].clone());
    let flags = [("elements", elements.to_string())];
    finish("release", input, &flags, set, out, extra, |m| {
        format!(
            "centre deflection {} um, capacitive min gap {} um, actuation mean gap {} um",
            m["center_deflection_um"], m["capacitive_min_gap_um"], m["actuation_mean_gap_um"]
        )
    })
}

pub fn profile(input: &Input, out: &Path) -> Result<Outcome, CliError> {
    let p = generate_profile(&input.bundle.profile)?;
    let mut extra = Map::new();
    extra.insert("maxima_count".into(), json!(p.local_maxima_count()));
    extra.insert("peak_center_delta_um".into(), num(peak_center_height_delta(&p) / MICROMETRE));
    extra.insert("max_height_um".into(), num(p.max_height() / MICROMETRE));
    let mut set = OutputSet::default();
    set.add(out.to_path_buf(), p.to_csv("x_um", "h_um"));
    finish("profile", input, &[], set, out, extra, |m| {
        format!(
            "{} local maxima, peak-centre delta {} um",
            m["maxima_count"], m["peak_center_delta_um"]
        )
    })
}

fn generate_profile(s: &ProfileSettings) -> Result<HeightProfile, CliError> {
    match s.process {
        Process::TriLayer => Ok(tri_layer_process(
            s.motif_width,
            s.cavity_depth,
            &s.layers,
            &s.params,
            s.n_samples,
        )?),
        Process::Single => {
            let thicknesses: Vec<f64> = s.layers.iter().map(|l| l.thickness).collect();
            let stack = if s.cavity_depth > 0.0 {
                ResistStack::on_cavity(thicknesses, s.motif_width, s.cavity_depth)?
            } else {
                ResistStack::flat(thicknesses, s.motif_width)?
            };
            let cycle = s
                .layers
                .first()
                .map(|l| l.cycle)
                .ok_or_else(|| CliError::Schema("profile.layers: at least one layer".into()))?;
            Ok(reflow_profile(&stack, &cycle, &s.params, s.n_samples)?)
        }
    }
}

/// The part of `profile` under the beam, centred on the motif.
fn crop_to_beam(profile: &HeightProfile, beam_length: f64, n: usize) -> Result<HeightProfile, CliError> {
    let span = profile.span();
    if span + 1e-9 * span < beam_length {
        return Err(CliError::Physics(format!(
            "profile spans {} um, shorter than the {} um beam",
            sig9(span / MICROMETRE),
            sig9(beam_length / MICROMETRE)
        )));
    }
    let start = profile.start() + 0.5 * (span - beam_length);
    Ok(profile.window(start, start + beam_length, n)?)
}

struct ZoneStats {
    min: f64,
    max: f64,
    mean: f64,
}

impl ZoneStats {
    fn to_json(&self) -> Value {
        json!({
            "min_gap_um": num(self.min / MICROMETRE),
            "max_gap_um": num(self.max / MICROMETRE),
            "mean_gap_um": num(self.mean / MICROMETRE),
        })
    }
}

fn zone_stats(gap: &HeightProfile, spans: &[(f64, f64)]) -> ZoneStats {
    let x0 = gap.start();
    let hs: Vec<f64> = gap
        .samples()
        .iter()
        .filter(|(x, _)| spans.iter().any(|&(a, b)| x - x0 >= a && x - x0 <= b))
        .map(|&(_, h)| h)
        .collect();
    ZoneStats {
        min: hs.iter().copied().fold(f64::INFINITY, f64::min),
        max: hs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: hs.iter().sum::<f64>() / hs.len() as f64,
    }
}

fn finish(
    command: &str,
    input: &Input,
    flags: &[(&str, String)],
    mut set: OutputSet,
    out: &Path,
    extra: Map<String, Value>,
    describe: impl Fn(&Map<String, Value>) -> String,
) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new(command, input_digest(command, &input.digest_bytes, flags));
    manifest.outputs = set.paths().map(file_name).collect();
    manifest.extra = extra;
    let manifest_path: PathBuf = sibling(out, "manifest.json");
    let manifest_json = serde_json::to_value(&manifest).expect("manifest serialises");
    set.add(
        manifest_path.clone(),
        serde_json::to_string_pretty(&manifest_json).expect("manifest serialises") + "\n",
    );
    let written = set.commit()?;
    let mut text = describe(&manifest.extra);
    for p in &written {
        let _ = write!(text, "\nwrote {}", p.display());
    }
    Ok(Outcome {
        json: manifest_json,
        text,
    })
}

/// Bytes identifying a preset run in digests.
pub fn preset_digest_bytes(name: &str, text: &str) -> Vec<u8> {
    let mut v = format!("preset:{name}\0").into_bytes();
    v.extend_from_slice(text.as_bytes());
    v
}

