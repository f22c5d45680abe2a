//! Clamped-clamped Euler–Bernoulli beam finite elements with geometric
//! (prestress) stiffness.

mod banded;
mod coupled;
mod element;
mod mesh;
mod release;
mod solve;

pub use coupled::{
    coupled_electrostatic_solve, coupled_electrostatic_solve_with, coupled_pull_in_voltage,
    CoupledOptions,
};
pub use mesh::{build_mesh, BeamElement, BeamMesh, CurvatureSpan, DeflectionField, LoadCase};
pub use release::{calibrate_release, gap_function, release_profile, ReleaseCalibration};
pub use solve::{assemble_and_solve, buckling_force, numeric_spring_constant, FactoredBeam};
