use dualgap_core::device::DualGapDesign;
use dualgap_core::fem::{build_mesh, calibrate_release, gap_function};
use dualgap_core::model::{units::MICROMETRE as UM, Material};
use dualgap_core::profile::{profile_span, tri_layer_process, HeightProfile, LayerSpec, ProfileParams, ThermalCycle};

fn dual_peak_initial_gap(beam_length: f64) -> HeightProfile {
    let params = ProfileParams {
        peak_width_fraction: 0.4375,
        ..ProfileParams::default()
    };
    let layers = [
        LayerSpec { thickness: 4.5 * UM, cycle: ThermalCycle::new(200.0).unwrap() },
        LayerSpec { thickness: 1.0 * UM, cycle: ThermalCycle::new(350.0).unwrap() },
        LayerSpec { thickness: 0.5 * UM, cycle: ThermalCycle::new(350.0).unwrap() },
    ];
    let full = tri_layer_process(beam_length, 4.5 * UM, &layers, &params, 1761).unwrap();
    let taper = 0.5 * (profile_span(beam_length, &params) - beam_length);
    full.window(taper, taper + beam_length, 1601).unwrap()
}

fn zone<'a>(p: &'a HeightProfile, spans: &'a [(f64, f64)]) -> impl Iterator<Item = f64> + 'a {
    p.samples()
        .iter()
        .filter(|(x, _)| spans.iter().any(|&(a, b)| *x >= a && *x <= b))
        .map(|&(_, h)| h)
}

#[test]
fn calibrated_release_opens_actuation_gap() {
    let d = DualGapDesign::paper_device();
    let m = Material::new("oxide", 70e9).unwrap();
    let mesh = build_mesh(&d.beam, &m, 64).unwrap();
    let cal = calibrate_release(&mesh, &m, d.capacitive_span(), -4.5 * UM).unwrap();
    let init = dual_peak_initial_gap(d.beam.length);
    let gap = gap_function(&cal.field, &init).unwrap();

    let cap = [d.capacitive_span()];
    let act = d.actuation_spans();
    let cap_min = zone(&gap, &cap).fold(f64::INFINITY, f64::min);
    let act: Vec<f64> = zone(&gap, &act).collect();
    let act_mean = act.iter().sum::<f64>() / act.len() as f64;
    assert!((1.3 * UM..=1.7 * UM).contains(&cap_min));
    assert!(act_mean > 7.0 * UM);
}
