use crate::error::{Error, Result};

use super::banded::{BandedCholesky, BandedSpd};
use super::element::{bending_stiffness, geometric_stiffness, shape, shape_dx, GAUSS4};
use super::mesh::{BeamMesh, DeflectionField, LoadCase};

const PIVOT_TOL: f64 = 1e-12;
const HALF_BANDWIDTH: usize = 3;

/// Factorised `K_bending + K_geometric` with both ends clamped. Reusable for
/// any number of right-hand sides.
#[derive(Debug, Clone)]
pub struct FactoredBeam {
    mesh: BeamMesh,
    chol: BandedCholesky,
}

impl FactoredBeam {
    pub fn new(mesh: &BeamMesh) -> Result<Self> {
        let n_free = 2 * (mesh.nodes().len() - 2);
        let mut k = BandedSpd::zeros(n_free, HALF_BANDWIDTH);
        for (e, el) in mesh.elements().iter().enumerate() {
            let h = mesh.element_length(e);
            let kb = bending_stiffness(el.flexural_rigidity, h);
            let kg = geometric_stiffness(el.axial_force, h);
            let dofs = element_free_dofs(mesh, e);
            for a in 0..4 {
                let Some(i) = dofs[a] else { continue };
                for b in a..4 {
                    let Some(j) = dofs[b] else { continue };
                    k.add(i, j, kb[a][b] + kg[a][b]);
                }
            }
        }
        let chol = k.factor(PIVOT_TOL).ok_or_else(|| Error::SingularSystem {
            axial_force: mesh
                .elements()
                .iter()
                .map(|e| e.axial_force)
                .fold(f64::INFINITY, f64::min),
            critical_force: mesh.euler_critical_force(),
        })?;
        Ok(FactoredBeam {
            mesh: mesh.clone(),
            chol,
        })
    }

    pub fn mesh(&self) -> &BeamMesh {
        &self.mesh
    }

    /// Solves for a global load vector (`2 · n_nodes` entries; clamped
    /// entries are ignored).
    pub fn solve_vector(&self, global_load: &[f64]) -> DeflectionField {
        let n_nodes = self.mesh.nodes().len();
        let rhs = &global_load[2..2 * (n_nodes - 1)];
        let u = self.chol.solve(rhs);
        let mut field = DeflectionField::zeros(&self.mesh);
        for node in 1..n_nodes - 1 {
            field.displacement[node] = u[2 * (node - 1)];
            field.rotation[node] = u[2 * (node - 1) + 1];
        }
        field
    }

    pub fn solve(&self, load: &LoadCase) -> Result<DeflectionField> {
        load.validate(self.mesh.length())?;
        Ok(self.solve_vector(&load_vector(&self.mesh, load)))
    }
}

fn element_free_dofs(mesh: &BeamMesh, e: usize) -> [Option<usize>; 4] {
    let last = mesh.nodes().len() - 1;
    let free = |node: usize, comp: usize| {
        if node == 0 || node == last {
            None
        } else {
            Some(2 * (node - 1) + comp)
        }
    };
    [free(e, 0), free(e, 1), free(e + 1, 0), free(e + 1, 1)]
}

/// Consistent (work-equivalent) global load vector.
pub(crate) fn load_vector(mesh: &BeamMesh, load: &LoadCase) -> Vec<f64> {
    let mut f = vec![0.0; 2 * mesh.nodes().len()];

    for &(x, p) in &load.point_loads {
        let (e, s) = mesh.locate(x);
        let n = shape(s, mesh.element_length(e));
        for a in 0..4 {
            f[2 * e + a] += p * n[a];
        }
    }

    if load.distributed.len() >= 2 {
        let samples = &load.distributed;
        let q_at = |x: f64| -> f64 {
            if x < samples[0].0 || x > samples[samples.len() - 1].0 {
                return 0.0;
            }
            let i = samples.partition_point(|s| s.0 <= x).clamp(1, samples.len() - 1);
            let (x0, q0) = samples[i - 1];
            let (x1, q1) = samples[i];
            if x1 == x0 {
                q1
            } else {
                q0 + (q1 - q0) * (x - x0) / (x1 - x0)
            }
        };
        let breaks: Vec<f64> = samples.iter().map(|s| s.0).collect();
        integrate_line_load(mesh, &breaks, q_at, &mut f);
    }

    for span in &load.curvature_spans {
        for (e, el) in mesh.elements().iter().enumerate() {
            let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
            let a = span.start.max(x0);
            let b = span.end.min(x1);
            if b <= a {
                continue;
            }
            let h = x1 - x0;
            let m0 = el.flexural_rigidity * span.curvature;
            let da = shape_dx((a - x0) / h, h);
            let db = shape_dx((b - x0) / h, h);
            for k in 0..4 {
                f[2 * e + k] += m0 * (db[k] - da[k]);
            }
        }
    }
    f
}

/// Adds `∫ q N dx` element by element, splitting each element at the given
/// break points so piecewise-smooth loads integrate accurately.
pub(crate) fn integrate_line_load(
    mesh: &BeamMesh,
    breaks: &[f64],
    mut q: impl FnMut(f64) -> f64,
    f: &mut [f64],
) {
    for e in 0..mesh.elements().len() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let h = x1 - x0;
        let mut cuts = vec![x0];
        cuts.extend(breaks.iter().copied().filter(|&b| b > x0 && b < x1));
        cuts.push(x1);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            for &(g, wt) in &GAUSS4 {
                let x = a + g * (b - a);
                let qx = q(x);
                if qx == 0.0 {
                    continue;
                }
                let n = shape((x - x0) / h, h);
                for k in 0..4 {
                    f[2 * e + k] += wt * (b - a) * qx * n[k];
                }
            }
        }
    }
}

/// Solves `(K_b + K_g) u = f` with both ends clamped.
pub fn assemble_and_solve(mesh: &BeamMesh, load: &LoadCase) -> Result<DeflectionField> {
    FactoredBeam::new(mesh)?.solve(load)
}

/// Centre stiffness `P / δ` under a unit point load at the centre node.
pub fn numeric_spring_constant(mesh: &BeamMesh) -> Result<f64> {
    let c = mesh.center_node().ok_or(Error::MeshMisaligned {
        center: 0.5 * mesh.length(),
    })?;
    let x = mesh.nodes()[c];
    let field = assemble_and_solve(mesh, &LoadCase::point(x, 1.0))?;
    Ok(1.0 / field.displacement[c])
}

/// Compressive axial force at which the prestressed stiffness stops being
/// positive definite, found by bisection on the uniform axial force.
pub fn buckling_force(mesh: &BeamMesh, rel_tol: f64) -> f64 {
    let stable = |p: f64| FactoredBeam::new(&mesh.with_axial_force(-p)).is_ok();
    let mut lo = 0.0;
    let mut hi = mesh.euler_critical_force();
    while stable(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
