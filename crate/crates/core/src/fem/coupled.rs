//! Distributed electrostatic loading of the beam over its actuation spans.

use crate::error::{Error, Result};
use crate::model::VACUUM_PERMITTIVITY;
use crate::profile::HeightProfile;

use super::mesh::{BeamMesh, DeflectionField};
use super::solve::{integrate_line_load, FactoredBeam};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOptions {
    pub permittivity: f64,
    pub max_iterations: usize,
    /// Converged when the largest nodal displacement change drops below this, m.
    pub tolerance: f64,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        CoupledOptions {
            permittivity: VACUUM_PERMITTIVITY,
            max_iterations: 20_000,
            tolerance: 1e-12,
        }
    }
}

pub fn coupled_electrostatic_solve(
    mesh: &BeamMesh,
    gap_profile: &HeightProfile,
    voltage: f64,
    actuation_spans: &[(f64, f64)],
) -> Result<DeflectionField> {
    coupled_electrostatic_solve_with(mesh, gap_profile, voltage, actuation_spans, &CoupledOptions::default())
}

/// Fixed-point iteration on the electrostatic pressure `ε V² / (2 g²)`.
///
/// Each pass loads the spans with the pressure of the current gap
/// `g = g0 + w`, re-solves with the (once-factored) stiffness and updates
/// `w`. Below pull-in the iterates rise monotonically to the stable state;
/// beyond it they accelerate, which is reported as [`Error::PullIn`] after
/// three consecutive growing updates or as soon as a gap closes.
pub fn coupled_electrostatic_solve_with(
    mesh: &BeamMesh,
    gap_profile: &HeightProfile,
    voltage: f64,
    actuation_spans: &[(f64, f64)],
    opts: &CoupledOptions,
) -> Result<DeflectionField> {
    if !(voltage >= 0.0 && voltage.is_finite()) {
        return Err(Error::invalid("voltage", format!("must be non-negative, got {voltage}")));
    }
    let l = mesh.length();
    if (gap_profile.span() - l).abs() > 1e-6 * l {
        return Err(Error::SpanMismatch {
            expected: l,
            found: gap_profile.span(),
        });
    }
    if !(gap_profile.min_height() > 0.0) {
        return Err(Error::NonPositiveGap {
            gap: gap_profile.min_height(),
        });
    }
    for &(a, b) in actuation_spans {
        if !(b > a && a >= 0.0 && b <= l * (1.0 + 1e-12)) {
            return Err(Error::invalid(
                "actuation span",
                format!("[{a:e}, {b:e}] m must lie inside the beam"),
            ));
        }
    }

    let beam = FactoredBeam::new(mesh)?;
    let mut field = DeflectionField::zeros(mesh);
    if voltage == 0.0 || actuation_spans.is_empty() {
        return Ok(field);
    }

    let x0 = gap_profile.start();
    let pressure_scale = 0.5 * opts.permittivity * voltage * voltage * mesh.width();
    let in_span = |x: f64| actuation_spans.iter().any(|&(a, b)| x >= a && x <= b);
    let breaks: Vec<f64> = actuation_spans.iter().flat_map(|&(a, b)| [a, b]).collect();

    let mut last_change = f64::INFINITY;
    let mut growing = 0;
    for it in 1..=opts.max_iterations {
        let mut closed = false;
        let mut f = vec![0.0; 2 * mesh.nodes().len()];
        integrate_line_load(
            mesh,
            &breaks,
            |x| {
                if !in_span(x) {
                    return 0.0;
                }
                let g = gap_profile.height_at(x0 + x) + field.displacement_at(x);
                if g <= 0.0 {
                    closed = true;
                    return 0.0;
                }
                -pressure_scale / (g * g)
            },
            &mut f,
        );
        if closed {
            return Err(Error::PullIn { voltage });
        }
        let next = beam.solve_vector(&f);
        let change = next
            .displacement
            .iter()
            .zip(&field.displacement)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        field = next;
        if change < opts.tolerance {
            return Ok(field);
        }
        if field
            .positions
            .iter()
            .zip(&field.displacement)
            .any(|(&x, &w)| gap_profile.height_at(x0 + x) + w <= 0.0)
        {
            return Err(Error::PullIn { voltage });
        }
        if change > last_change {
            growing += 1;
            if growing >= 3 {
                return Err(Error::PullIn { voltage });
            }
        } else {
            growing = 0;
        }
        last_change = change;
        if it == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: change,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual: last_change,
    })
}

/// Onset of pull-in for the distributed model, by bisection on the voltage
/// between 0 and `v_upper` to relative tolerance `rel_tol`. Non-convergence
/// counts as unstable.
pub fn coupled_pull_in_voltage(
    mesh: &BeamMesh,
    gap_profile: &HeightProfile,
    actuation_spans: &[(f64, f64)],
    v_upper: f64,
    rel_tol: f64,
    opts: &CoupledOptions,
) -> Result<f64> {
    let stable = |v: f64| -> Result<bool> {
        match coupled_electrostatic_solve_with(mesh, gap_profile, v, actuation_spans, opts) {
            Ok(_) => Ok(true),
            Err(Error::PullIn { .. }) | Err(Error::NoConvergence { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    if stable(v_upper)? {
        return Err(Error::invalid(
            "v_upper",
            format!("beam is still stable at {v_upper} V"),
        ));
    }
    let (mut lo, mut hi) = (0.0, v_upper);
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
