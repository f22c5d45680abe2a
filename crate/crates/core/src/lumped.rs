//! Lumped parallel-plate electromechanics.
//!
//! A rigid plate on a linear spring `k` above a fixed electrode at gap `d`.
//! Static balance under bias `V` is
//!
//! ```text
//! k x = ε S V² / (2 (d - x)²)
//! ```
//!
//! which has a stable branch on `0 <= x < d/3`. The fold at `x = d/3` is the
//! pull-in point, with `V_PI = sqrt(8 k d³ / (27 ε S))`.

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::model::BeamGeometry;

/// `C = ε S / d`.
pub fn parallel_plate_capacitance(area: f64, gap: f64, permittivity: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::NonPositiveGap { gap });
    }
    if !(area > 0.0) {
        return Err(Error::invalid("area", format!("must be positive, got {area}")));
    }
    Ok(permittivity * area / gap)
}

/// Attractive force `ε S V² / (2 (d - x)²)` between the plates, in N.
pub fn electrostatic_force(
    voltage: f64,
    area: f64,
    gap: f64,
    displacement: f64,
    permittivity: f64,
) -> Result<f64> {
    if displacement < 0.0 {
        return Err(Error::invalid(
            "displacement",
            format!("must be non-negative, got {displacement}"),
        ));
    }
    if displacement >= gap {
        return Err(Error::GapClosed { displacement, gap });
    }
    let g = gap - displacement;
    Ok(permittivity * area * voltage * voltage / (2.0 * g * g))
}

/// Centre point-load stiffness of a clamped-clamped beam, `192 E I / L³`.
pub fn fixed_fixed_spring_constant(beam: &BeamGeometry, youngs_modulus: f64) -> f64 {
    192.0 * youngs_modulus * beam.second_moment() / beam.length.powi(3)
}

/// Travel at which a voltage-driven parallel plate becomes unstable.
pub fn pull_in_displacement(gap: f64) -> f64 {
    gap / 3.0
}

/// Tuning range `100 (C_max - C_min) / C_min` in percent.
pub fn tuning_range(c_min: f64, c_max: f64) -> Result<f64> {
    if !(c_min > 0.0) {
        return Err(Error::NonPositiveCapacitance { capacitance: c_min });
    }
    if c_max < c_min {
        return Err(Error::invalid(
            "c_max",
            format!("{c_max:e} F is below c_min {c_min:e} F"),
        ));
    }
    Ok(100.0 * (c_max - c_min) / c_min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedActuator {
    /// N/m
    pub spring_constant: f64,
    /// m
    pub gap: f64,
    /// m²
    pub actuation_area: f64,
    /// F/m
    pub permittivity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub displacement: f64,
    /// `|k x - F_el(x)|` at the returned displacement, in N.
    pub residual_force: f64,
    pub iterations: usize,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iterations: 100 }
    }
}

impl LumpedActuator {
    pub fn new(spring_constant: f64, gap: f64, actuation_area: f64, permittivity: f64) -> Result<Self> {
        let a = LumpedActuator {
            spring_constant,
            gap,
            actuation_area,
            permittivity,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        crate::model::positive("spring_constant", self.spring_constant)?;
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::NonPositiveGap { gap: self.gap });
        }
        crate::model::positive("actuation_area", self.actuation_area)?;
        crate::model::positive("permittivity", self.permittivity)
    }

    pub fn pull_in_displacement(&self) -> f64 {
        pull_in_displacement(self.gap)
    }

    pub fn pull_in_voltage(&self) -> f64 {
        let d = self.gap;
        (8.0 * self.spring_constant * d * d * d
            / (27.0 * self.permittivity * self.actuation_area))
            .sqrt()
    }

    pub fn electrostatic_force(&self, voltage: f64, displacement: f64) -> Result<f64> {
        electrostatic_force(
            voltage,
            self.actuation_area,
            self.gap,
            displacement,
            self.permittivity,
        )
    }

    /// Bias that holds the plate in static balance at `x`.
    ///
    /// Rises on `[0, d/3]` and falls beyond it; only the rising part is a
    /// stable equilibrium.
    pub fn voltage_at_displacement(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::invalid("displacement", format!("must be non-negative, got {x}")));
        }
        if x >= self.gap {
            return Err(Error::GapClosed {
                displacement: x,
                gap: self.gap,
            });
        }
        let g = self.gap - x;
        Ok((2.0 * self.spring_constant * x * g * g / (self.permittivity * self.actuation_area)).sqrt())
    }

    /// Electromechanical stiffness `k - ε S V² / (d - x)³`; positive on the
    /// stable branch.
    pub fn net_stiffness(&self, voltage: f64, x: f64) -> f64 {
        let g = self.gap - x;
        self.spring_constant - self.permittivity * self.actuation_area * voltage * voltage / (g * g * g)
    }

    pub fn solve_equilibrium(&self, voltage: f64) -> Result<EquilibriumResult> {
        self.solve_equilibrium_with(voltage, &SolverOptions::default())
    }

    /// Stable root of `k x (d - x)² = ε S V² / 2` on `[0, d/3]`.
    ///
    /// Safeguarded Newton on the force residual `k x - c / (d - x)²`. The
    /// residual is increasing and concave on the bracket, so Newton from the
    /// left never overshoots; bisection takes over whenever a step leaves the
    /// bracket or stalls. At `V = V_PI` (to a few ulp) the fold `x = d/3` is
    /// returned with `stable = false`.
    pub fn solve_equilibrium_with(&self, voltage: f64, opts: &SolverOptions) -> Result<EquilibriumResult> {
        if !(voltage >= 0.0 && voltage.is_finite()) {
            return Err(Error::invalid("voltage", format!("must be non-negative, got {voltage}")));
        }
        let k = self.spring_constant;
        let d = self.gap;
        let c = 0.5 * self.permittivity * self.actuation_area * voltage * voltage;
        if c == 0.0 {
            return Ok(EquilibriumResult {
                displacement: 0.0,
                residual_force: 0.0,
                iterations: 0,
                stable: true,
            });
        }

        let v_pi = self.pull_in_voltage();
        let fold_band = 4.0 * f64::EPSILON * v_pi;
        if voltage > v_pi + fold_band {
            return Err(Error::PullIn { voltage });
        }
        let residual = |x: f64| {
            let g = d - x;
            k * x - c / (g * g)
        };
        let x_fold = d / 3.0;
        if (voltage - v_pi).abs() <= fold_band || residual(x_fold) <= 0.0 {
            return Ok(EquilibriumResult {
                displacement: x_fold,
                residual_force: residual(x_fold).abs(),
                iterations: 0,
                stable: false,
            });
        }

        let (mut lo, mut hi) = (0.0_f64, x_fold);
        let mut x = 0.0_f64;
        let mut dx_old = hi - lo;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < opts.max_iterations {
            iterations += 1;
            let r = residual(x);
            if r == 0.0 {
                converged = true;
                break;
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let g = d - x;
            let slope = k - 2.0 * c / (g * g * g);
            let newton = x - r / slope;
            let x_next = if slope > 0.0 && newton > lo && newton < hi && (2.0 * r).abs() <= (dx_old * slope).abs() {
                newton
            } else {
                0.5 * (lo + hi)
            };
            dx_old = (x_next - x).abs();
            x = x_next;
            if dx_old <= 2.0 * ulp(x) || hi - lo <= 4.0 * ulp(hi) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                iterations,
                residual: residual(x).abs(),
            });
        }

        // last-ulp polish: pick the representable neighbour with the smallest residual
        let mut best = x;
        let mut best_r = residual(x).abs();
        let (mut up, mut down) = (x, x);
        for _ in 0..4 {
            up = up.next_up();
            down = down.next_down().max(0.0);
            for cand in [up, down] {
                if cand <= x_fold {
                    let rc = residual(cand).abs();
                    if rc < best_r {
                        best = cand;
                        best_r = rc;
                    }
                }
            }
        }

        Ok(EquilibriumResult {
            displacement: best,
            residual_force: best_r,
            iterations,
            stable: self.net_stiffness(voltage, best) > 0.0,
        })
    }

    /// Locates the fold by maximising the balance voltage `V(x)` over the
    /// whole gap with a golden-section search; independent of the closed
    /// forms for `d/3` and `V_PI`. Returns `(x_fold, v_fold)`.
    pub fn fold_by_search(&self) -> (f64, f64) {
        let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let d = self.gap;
        // maximise x (d - x)², which is monotone in V(x)
        let h = |x: f64| x * (d - x) * (d - x);
        let (mut a, mut b) = (0.0, d);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let (mut h1, mut h2) = (h(x1), h(x2));
        while b - a > 1e-12 * d {
            if h1 < h2 {
                a = x1;
                x1 = x2;
                h1 = h2;
                x2 = a + inv_phi * (b - a);
                h2 = h(x2);
            } else {
                b = x2;
                x2 = x1;
                h2 = h1;
                x1 = b - inv_phi * (b - a);
                h1 = h(x1);
            }
        }
        let x = 0.5 * (a + b);
        let v = self.voltage_at_displacement(x).unwrap_or(f64::NAN);
        (x, v)
    }

    /// Solves every voltage independently.
    pub fn solve_many(&self, exec: Execution, voltages: &[f64]) -> Vec<Result<EquilibriumResult>> {
        exec::map(exec, voltages, |&v| self.solve_equilibrium(v))
    }
}

fn ulp(x: f64) -> f64 {
    let ax = x.abs();
    ax.next_up() - ax
}
