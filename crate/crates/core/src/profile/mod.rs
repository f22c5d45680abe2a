//! Sacrificial-layer surface profiles.

mod height;
mod reflow;

pub use height::{HeightProfile, MIN_SAMPLES};
pub use reflow::{
    merge_transition_width, peak_center_height_delta, peak_growth_factor, profile_span,
    reflow_batch, reflow_profile, tri_layer_process, LayerSpec, ProfileParams, ResistStack,
    ThermalCycle, AMBIENT_TEMPERATURE, DEFAULT_ONSET_TEMPERATURE, DEFAULT_SATURATION_TEMPERATURE,
};
