use dualgap_core::device::{actuator_of, DualGapDesign};
use dualgap_core::fem::{
    assemble_and_solve, build_mesh, coupled_pull_in_voltage, numeric_spring_constant, BeamMesh,
    CoupledOptions, FactoredBeam, LoadCase,
};
use dualgap_core::lumped::{fixed_fixed_spring_constant, LumpedActuator};
use dualgap_core::model::{units::MICROMETRE as UM, BeamGeometry, Material};
use dualgap_core::profile::HeightProfile;
use dualgap_core::{Error, VACUUM_PERMITTIVITY};
use proptest::prelude::*;

fn table1_mesh(n: usize) -> BeamMesh {
    let b = BeamGeometry::new(800.0 * UM, 80.0 * UM, 2.0 * UM).unwrap();
    build_mesh(&b, &Material::new("oxide", 70e9).unwrap(), n).unwrap()
}

/// Clamped-clamped beam, point load P at a: deflection at x ≤ a.
fn point_load_closed_form(ei: f64, l: f64, p: f64, a: f64, x: f64) -> f64 {
    let b = l - a;
    if x <= a {
        p * b * b * x * x * (3.0 * a * l - x * (3.0 * a + b)) / (6.0 * ei * l.powi(3))
    } else {
        point_load_closed_form(ei, l, p, b, l - x)
    }
}

#[test]
fn nodal_values_match_closed_form_for_off_centre_loads() {
    for n in [2, 5, 16] {
        let m = table1_mesh(n);
        let ei = m.elements()[0].flexural_rigidity;
        let l = m.length();
        let a = m.nodes()[1];
        let f = assemble_and_solve(&m, &LoadCase::point(a, -1e-6)).unwrap();
        for (&x, &w) in m.nodes().iter().zip(&f.displacement).skip(1).take(n - 1) {
            let exact = point_load_closed_form(ei, l, -1e-6, a, x);
            assert!((w - exact).abs() <= 1e-10 * exact.abs(), "n={n} x={x}: {w} vs {exact}");
        }
    }
}

#[test]
fn maxwell_betti_reciprocity() {
    let m = table1_mesh(20);
    let (a, b) = (m.nodes()[3], m.nodes()[14]);
    let wa = assemble_and_solve(&m, &LoadCase::point(b, 1.0)).unwrap().displacement_at(a);
    let wb = assemble_and_solve(&m, &LoadCase::point(a, 1.0)).unwrap().displacement_at(b);
    assert!((wa - wb).abs() <= 1e-10 * wa.abs());
}

#[test]
fn symmetric_load_gives_symmetric_field() {
    let m = table1_mesh(32).with_axial_force(2e-4);
    let l = m.length();
    let load = LoadCase {
        point_loads: vec![(0.25 * l, -1e-6), (0.75 * l, -1e-6)],
        distributed: vec![(0.3 * l, -0.01), (0.5 * l, -0.02), (0.7 * l, -0.01)],
        ..Default::default()
    };
    let f = assemble_and_solve(&m, &load).unwrap();
    let max = f.max_abs_displacement();
    let n = f.displacement.len();
    for i in 0..n {
        assert!((f.displacement[i] - f.displacement[n - 1 - i]).abs() < 1e-12 * max);
    }
}

#[test]
fn distributed_load_converges_at_second_order() {
    // triangular hump load; reference from a fine mesh
    let load = |l: f64| LoadCase {
        distributed: vec![(0.1 * l, 0.0), (0.37 * l, -0.05), (0.8 * l, 0.0)],
        ..Default::default()
    };
    let reference = {
        let m = table1_mesh(1024);
        let f = assemble_and_solve(&m, &load(m.length())).unwrap();
        move |x: f64| f.displacement_at(x)
    };
    let err = |n: usize| {
        let m = table1_mesh(n);
        let f = assemble_and_solve(&m, &load(m.length())).unwrap();
        (0..=200)
            .map(|i| {
                let x = m.length() * i as f64 / 200.0;
                (f.displacement_at(x) - reference(x)).abs()
            })
            .fold(0.0, f64::max)
    };
    let (e8, e16, e32) = (err(8), err(16), err(32));
    assert!(e8 / e16 >= 3.5, "{e8} {e16}");
    assert!(e16 / e32 >= 3.5, "{e16} {e32}");
}

#[test]
fn prestress_moves_stiffness_monotonically() {
    let m = table1_mesh(32);
    let pcr = m.euler_critical_force();
    let forces = [-0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 2.0];
    let ks: Vec<f64> = forces
        .iter()
        .map(|f| numeric_spring_constant(&m.with_axial_force(f * pcr)).unwrap())
        .collect();
    for w in ks.windows(2) {
        assert!(w[1] > w[0], "{ks:?}");
    }
}

#[test]
fn buckling_detected_near_euler_load() {
    for n in [32, 64] {
        let m = table1_mesh(n);
        let pcr = m.euler_critical_force();
        assert!(FactoredBeam::new(&m.with_axial_force(-0.95 * pcr)).is_ok());
        match FactoredBeam::new(&m.with_axial_force(-1.05 * pcr)) {
            Err(Error::SingularSystem { critical_force, .. }) => assert_eq!(critical_force, pcr),
            other => panic!("expected singular system, got {other:?}"),
        }
    }
}

#[test]
fn distributed_pull_in_within_sanity_band_of_lumped() {
    // central electrode over a third of the span; lumped k from the FEM
    let m = table1_mesh(48);
    let l = m.length();
    let k = numeric_spring_constant(&m).unwrap();
    let gap = 3.0 * UM;
    let span = (l / 3.0, 2.0 * l / 3.0);
    let area = (span.1 - span.0) * m.width();
    let lumped = LumpedActuator::new(k, gap, area, VACUUM_PERMITTIVITY).unwrap().pull_in_voltage();
    let profile = HeightProfile::from_fn(0.0, l, 97, |_| gap).unwrap();
    let v = coupled_pull_in_voltage(&m, &profile, &[span], 2.0 * lumped, 1e-3, &CoupledOptions::default()).unwrap();
    assert!((v / lumped - 1.0).abs() <= 0.25, "distributed {v} V vs lumped {lumped} V");
}

#[test]
fn fem_stiffness_agrees_with_design_spring() {
    let d = DualGapDesign::paper_device();
    let k = fixed_fixed_spring_constant(&d.beam, 70e9);
    let fem = numeric_spring_constant(&table1_mesh(64)).unwrap();
    assert!((fem / k - 1.0).abs() < 1e-10);
    // the design's k sits within 10% of a 70 GPa, 2 µm beam
    assert!((actuator_of(&d).spring_constant / k - 1.0).abs() < 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn spring_constant_is_nodally_exact(
        e in 50e9f64..200e9,
        l in 200e-6f64..1000e-6,
        w in 10e-6f64..100e-6,
        t in 0.5e-6f64..5e-6,
        n in prop::sample::select(vec![2usize, 4, 64]),
    ) {
        let b = BeamGeometry::new(l, w, t).unwrap();
        let mesh = build_mesh(&b, &Material::new("film", e).unwrap(), n).unwrap();
        let k = numeric_spring_constant(&mesh).unwrap();
        let exact = 192.0 * e * w * t.powi(3) / 12.0 / l.powi(3);
        prop_assert!((k / exact - 1.0).abs() < 1e-8);
    }
}
