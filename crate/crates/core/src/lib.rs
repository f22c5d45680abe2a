//! Simulation and design analysis for electrostatically actuated dual-gap
//! MEMS tunable capacitors.
//!
//! * [`lumped`]: parallel-plate electromechanics, pull-in, equilibrium solving.
//! * [`device`]: dual-gap device model, C–V sweeps and the design report.
//! * [`fem`]: prestressed clamped-clamped beam FEM, release shape and
//!   distributed electrostatic loading.
//! * [`profile`]: sacrificial-layer reflow profiles that set the initial gap.
//!
//! All quantities are SI. Batch operations take an [`Execution`] and run on
//! rayon when the `parallel` feature is on.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod device;
pub mod error;
pub mod exec;
pub mod fem;
pub mod format;
pub mod lumped;
pub mod model;
pub mod profile;

pub use device::{
    actuator_of, displacement_to_capacitance, evaluate_design, trace_cv_curve, trace_cv_curve_with,
    CVCurve, DesignReport, DualGapDesign, EquilibriumPoint, SweepOptions,
};
pub use error::{Error, ErrorKind, Result};
pub use exec::Execution;
pub use lumped::{EquilibriumResult, LumpedActuator};
pub use model::{BeamGeometry, Material, PhysicalConstants, PlateRegion, VACUUM_PERMITTIVITY};
