//! Post-release membrane shape.
//!
//! Freed from the sacrificial layer, the membrane keeps its mid-plane
//! residual force (carried in the mesh as geometric stiffness) and any
//! through-thickness stress gradient `Γ`, which acts as an eigen-curvature
//! `Γ / E` over the stressed span. Over the full length of a uniform
//! clamped-clamped beam that curvature is completely restrained by the
//! clamps, so the release drive is applied over a sub-span: the oxide-loaded
//! movable plate.

use crate::error::{Error, Result};
use crate::model::Material;
use crate::profile::HeightProfile;

use super::mesh::{BeamMesh, CurvatureSpan, DeflectionField, LoadCase};
use super::solve::{load_vector, FactoredBeam};

fn release_load(material: &Material, span: (f64, f64), gradient: f64) -> LoadCase {
    LoadCase {
        curvature_spans: vec![CurvatureSpan {
            start: span.0,
            end: span.1,
            curvature: gradient / material.youngs_modulus,
        }],
        ..Default::default()
    }
}

fn check_span(mesh: &BeamMesh, span: (f64, f64)) -> Result<()> {
    let l = mesh.length();
    if !(span.0 >= 0.0 && span.1 <= l * (1.0 + 1e-12) && span.1 > span.0) {
        return Err(Error::invalid(
            "stressed span",
            format!("[{:e}, {:e}] m must lie inside [0, {l:e}] m", span.0, span.1),
        ));
    }
    Ok(())
}

/// Released shape under `material.stress_gradient` acting on `stressed_span`.
/// Negative displacement points towards the substrate.
pub fn release_profile(
    mesh: &BeamMesh,
    material: &Material,
    stressed_span: (f64, f64),
) -> Result<DeflectionField> {
    material.validate()?;
    check_span(mesh, stressed_span)?;
    FactoredBeam::new(mesh)?.solve(&release_load(material, stressed_span, material.stress_gradient))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReleaseCalibration {
    /// Pa/m
    pub stress_gradient: f64,
    pub field: DeflectionField,
    pub iterations: usize,
}

/// Bisects the stress gradient until the centre deflection hits `target`
/// (relative tolerance `1e-9`).
pub fn calibrate_release(
    mesh: &BeamMesh,
    material: &Material,
    stressed_span: (f64, f64),
    target_center_deflection: f64,
) -> Result<ReleaseCalibration> {
    material.validate()?;
    check_span(mesh, stressed_span)?;
    let beam = FactoredBeam::new(mesh)?;
    let center = |g: f64| -> (f64, DeflectionField) {
        let f = load_vector(mesh, &release_load(material, stressed_span, g));
        let field = beam.solve_vector(&f);
        (field.center_displacement(), field)
    };
    if target_center_deflection == 0.0 {
        return Ok(ReleaseCalibration {
            stress_gradient: 0.0,
            field: DeflectionField::zeros(mesh),
            iterations: 0,
        });
    }

    // 1 MPa/µm probe fixes the sign of the response
    let probe = 1e12;
    let (w_probe, _) = center(probe);
    if w_probe == 0.0 || !w_probe.is_finite() {
        return Err(Error::invalid(
            "stressed span",
            "a stress gradient over this span does not move the beam centre",
        ));
    }
    let sign = if (w_probe > 0.0) == (target_center_deflection > 0.0) {
        1.0
    } else {
        -1.0
    };
    let (mut lo, mut hi) = (0.0_f64, sign * probe);
    let mut w_hi = center(hi).0;
    let mut expansions = 0;
    while w_hi.abs() < target_center_deflection.abs() {
        lo = hi;
        hi *= 2.0;
        w_hi = center(hi).0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::NoConvergence {
                iterations: expansions,
                residual: (w_hi - target_center_deflection).abs(),
            });
        }
    }

    let tol = 1e-9 * target_center_deflection.abs();
    for it in 1..=200 {
        let mid = 0.5 * (lo + hi);
        let (w, field) = center(mid);
        if (w - target_center_deflection).abs() <= tol {
            return Ok(ReleaseCalibration {
                stress_gradient: mid,
                field,
                iterations: it,
            });
        }
        if w.abs() < target_center_deflection.abs() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: 200,
        residual: (center(0.5 * (lo + hi)).0 - target_center_deflection).abs(),
    })
}

/// `gap(x) = initial_gap(x) + w(x)` sampled on the initial profile's grid.
///
/// The profile is aligned to the beam by its first sample; its span must
/// match the beam length to within `1e-6` relative.
pub fn gap_function(release: &DeflectionField, initial_gap_profile: &HeightProfile) -> Result<HeightProfile> {
    let beam_span = release.length();
    let prof_span = initial_gap_profile.span();
    if (beam_span - prof_span).abs() > 1e-6 * beam_span {
        return Err(Error::SpanMismatch {
            expected: beam_span,
            found: prof_span,
        });
    }
    let x0 = initial_gap_profile.start();
    let mut samples = Vec::with_capacity(initial_gap_profile.len());
    for &(x, h) in initial_gap_profile.samples() {
        let w = release.displacement_at((x - x0).min(beam_span));
        let g = h + w;
        if g < 0.0 {
            return Err(Error::GapClosed {
                displacement: -w,
                gap: h,
            });
        }
        samples.push((x, g));
    }
    HeightProfile::new(samples)
}
