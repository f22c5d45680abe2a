use crate::error::{Error, Result};
use crate::model::{BeamGeometry, Material};

use super::element::shape;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamElement {
    pub start: usize,
    pub end: usize,
    /// EI, N·m²
    pub flexural_rigidity: f64,
    /// Tension positive, N.
    pub axial_force: f64,
}

/// Clamped-clamped beam discretisation. Both end nodes have displacement and
/// rotation fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamMesh {
    nodes: Vec<f64>,
    elements: Vec<BeamElement>,
    width: f64,
}

impl BeamMesh {
    pub fn new(nodes: Vec<f64>, elements: Vec<BeamElement>, width: f64) -> Result<Self> {
        if elements.len() < 2 {
            return Err(Error::TooFewElements(elements.len()));
        }
        if nodes.len() != elements.len() + 1 {
            return Err(Error::invalid(
                "mesh",
                format!("{} nodes for {} elements", nodes.len(), elements.len()),
            ));
        }
        if nodes[0] != 0.0 {
            return Err(Error::invalid("mesh", "first node must sit at 0"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("mesh", "node positions must be strictly increasing"));
        }
        for (e, el) in elements.iter().enumerate() {
            if el.start != e || el.end != e + 1 {
                return Err(Error::invalid("mesh", format!("element {e} does not join nodes {e} and {}", e + 1)));
            }
            if !(el.flexural_rigidity > 0.0 && el.flexural_rigidity.is_finite()) {
                return Err(Error::invalid("mesh", format!("element {e} has non-positive EI")));
            }
            if !el.axial_force.is_finite() {
                return Err(Error::invalid("mesh", format!("element {e} axial force is not finite")));
            }
        }
        crate::model::positive("mesh width", width)?;
        Ok(BeamMesh { nodes, elements, width })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> &[BeamElement] {
        &self.elements
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn length(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn element_length(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    /// Same mesh with a uniform axial force in every element.
    pub fn with_axial_force(&self, axial_force: f64) -> BeamMesh {
        let mut m = self.clone();
        for el in &mut m.elements {
            el.axial_force = axial_force;
        }
        m
    }

    /// Same mesh with every EI multiplied by `factor`.
    pub fn with_scaled_rigidity(&self, factor: f64) -> Result<BeamMesh> {
        let mut m = self.clone();
        for el in &mut m.elements {
            el.flexural_rigidity *= factor;
        }
        BeamMesh::new(m.nodes, m.elements, m.width)
    }

    /// Element containing `x` and the local coordinate in it.
    pub(crate) fn locate(&self, x: f64) -> (usize, f64) {
        let e = match self.nodes.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(i) => i.min(self.elements.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.elements.len() - 1),
        };
        let s = ((x - self.nodes[e]) / self.element_length(e)).clamp(0.0, 1.0);
        (e, s)
    }

    /// Index of the node at mid-span, if there is one.
    pub fn center_node(&self) -> Option<usize> {
        let c = 0.5 * self.length();
        self.nodes
            .iter()
            .position(|&x| (x - c).abs() <= 1e-9 * self.length())
    }

    /// Smallest Euler buckling load of the clamped-clamped beam, `4π² EI / L²`.
    pub fn euler_critical_force(&self) -> f64 {
        let ei = self
            .elements
            .iter()
            .map(|e| e.flexural_rigidity)
            .fold(f64::INFINITY, f64::min);
        4.0 * std::f64::consts::PI.powi(2) * ei / self.length().powi(2)
    }
}

/// Uniform mesh; EI and axial force (`residual_stress · w · t`) from the
/// beam section and material.
pub fn build_mesh(beam: &BeamGeometry, material: &Material, n_elements: usize) -> Result<BeamMesh> {
    if n_elements < 2 {
        return Err(Error::TooFewElements(n_elements));
    }
    beam.validate()?;
    material.validate()?;
    let ei = material.youngs_modulus * beam.second_moment();
    let axial = material.residual_stress * beam.cross_section_area();
    let nodes: Vec<f64> = (0..=n_elements)
        .map(|i| beam.length * i as f64 / n_elements as f64)
        .collect();
    let elements = (0..n_elements)
        .map(|e| BeamElement {
            start: e,
            end: e + 1,
            flexural_rigidity: ei,
            axial_force: axial,
        })
        .collect();
    BeamMesh::new(nodes, elements, beam.width)
}

/// Eigen-curvature imposed over `[start, end]`, 1/m.
///
/// A through-thickness stress gradient `Γ` in a layer of modulus `E` wants
/// to curve the freed beam by `Γ / E` (positive: concave towards +w).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSpan {
    pub start: f64,
    pub end: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadCase {
    /// `(position, force)`, N, +w direction.
    pub point_loads: Vec<(f64, f64)>,
    /// `(position, q)` samples in N/m, linear between samples and zero outside.
    pub distributed: Vec<(f64, f64)>,
    pub curvature_spans: Vec<CurvatureSpan>,
}

impl LoadCase {
    pub fn point(position: f64, force: f64) -> Self {
        LoadCase {
            point_loads: vec![(position, force)],
            ..Default::default()
        }
    }

    pub fn uniform(length: f64, q: f64) -> Self {
        LoadCase {
            distributed: vec![(0.0, q), (length, q)],
            ..Default::default()
        }
    }

    pub fn validate(&self, length: f64) -> Result<()> {
        let tol = 1e-12 * length;
        for &(x, f) in &self.point_loads {
            if !(x >= -tol && x <= length + tol) || !f.is_finite() {
                return Err(Error::invalid(
                    "point load",
                    format!("position {x:e} m outside [0, {length:e}] m"),
                ));
            }
        }
        if self.distributed.windows(2).any(|w| !(w[1].0 >= w[0].0)) {
            return Err(Error::invalid("distributed load", "sample positions must be sorted"));
        }
        for s in &self.curvature_spans {
            if !(s.end > s.start) || !s.curvature.is_finite() {
                return Err(Error::invalid("curvature span", "needs start < end and finite curvature"));
            }
        }
        Ok(())
    }
}

/// Nodal solution of a beam solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionField {
    pub positions: Vec<f64>,
    pub displacement: Vec<f64>,
    pub rotation: Vec<f64>,
}

impl DeflectionField {
    pub fn zeros(mesh: &BeamMesh) -> Self {
        let n = mesh.nodes().len();
        DeflectionField {
            positions: mesh.nodes().to_vec(),
            displacement: vec![0.0; n],
            rotation: vec![0.0; n],
        }
    }

    pub fn length(&self) -> f64 {
        self.positions[self.positions.len() - 1]
    }

    /// Hermite interpolation of `w(x)`.
    pub fn displacement_at(&self, x: f64) -> f64 {
        let n = self.positions.len();
        let e = match self.positions.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => return self.displacement[i],
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.positions[e + 1] - self.positions[e];
        let s = ((x - self.positions[e]) / h).clamp(0.0, 1.0);
        let sf = shape(s, h);
        sf[0] * self.displacement[e]
            + sf[1] * self.rotation[e]
            + sf[2] * self.displacement[e + 1]
            + sf[3] * self.rotation[e + 1]
    }

    pub fn center_displacement(&self) -> f64 {
        self.displacement_at(0.5 * self.length())
    }

    pub fn max_abs_displacement(&self) -> f64 {
        self.displacement.iter().fold(0.0, |m, w| m.max(w.abs()))
    }
}
