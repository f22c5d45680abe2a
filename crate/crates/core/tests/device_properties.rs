use dualgap_core::device::{
    actuator_of, displacement_to_capacitance, evaluate_design, trace_cv_curve, DualGapDesign,
};
use dualgap_core::model::{units::MICROMETRE as UM, PlateRegion};
use proptest::prelude::*;

fn design(ec_um: f64, residual_frac: f64, k: f64) -> DualGapDesign {
    let d = DualGapDesign::paper_device();
    DualGapDesign {
        capacitive_region: PlateRegion { gap: ec_um * UM, ..d.capacitive_region },
        actuation_region: PlateRegion { gap: 3.0 * ec_um * UM, ..d.actuation_region },
        dimple_residual_gap: residual_frac * ec_um * UM,
        effective_spring_constant: k,
        ..d
    }
}

fn scaled(d: &DualGapDesign, alpha: f64) -> DualGapDesign {
    let s = |r: PlateRegion| PlateRegion { length: r.length * alpha, width: r.width * alpha, ..r };
    DualGapDesign {
        capacitive_region: s(d.capacitive_region),
        actuation_region: s(d.actuation_region),
        ..d.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tuning_range_identity(ec in 0.5f64..5.0, frac in 0.01f64..0.9, k in 0.1f64..50.0) {
        let d = design(ec, frac, k);
        let r = evaluate_design(&d).unwrap();
        let expect = 100.0 * (1.0 / frac - 1.0);
        prop_assert!((r.tuning_range / expect - 1.0).abs() < 1e-9);
        prop_assert!(r.c_max >= r.c_zero);
        prop_assert!(r.pull_in_margin > 0.0);
        prop_assert!(r.dimple_contact_voltage < r.pull_in_voltage);
    }

    #[test]
    fn lateral_scaling(alpha in 0.2f64..5.0, x_frac in 0.0f64..1.0) {
        let d = DualGapDesign::paper_device();
        let s = scaled(&d, alpha);
        let x = x_frac * d.contact_displacement();
        let c = displacement_to_capacitance(&d, x).unwrap();
        let cs = displacement_to_capacitance(&s, x).unwrap();
        prop_assert!((cs / (alpha * alpha * c) - 1.0).abs() < 1e-12);
        let (r, rs) = (evaluate_design(&d).unwrap(), evaluate_design(&s).unwrap());
        prop_assert!((r.tuning_range - rs.tuning_range).abs() < 1e-9);
    }

    #[test]
    fn curve_respects_dimples_and_force_balance(ec in 0.5f64..5.0, frac in 0.01f64..0.9, k in 0.1f64..50.0, vf in 0.5f64..1.5) {
        let d = design(ec, frac, k);
        let a = actuator_of(&d);
        let v_max = vf * a.pull_in_voltage();
        let curve = trace_cv_curve(&d, v_max, 64).unwrap();
        let c_cap = displacement_to_capacitance(&d, d.contact_displacement()).unwrap();
        for w in curve.points.windows(2) {
            prop_assert!(w[1].voltage > w[0].voltage);
            prop_assert!(w[1].capacitance >= w[0].capacitance);
        }
        for p in &curve.points {
            prop_assert!(d.capacitive_region.gap - p.displacement >= d.dimple_residual_gap * (1.0 - 1e-12));
            prop_assert!(p.capacitance <= c_cap * (1.0 + 1e-12));
            if p.dimple_contact {
                prop_assert_eq!(p.displacement, d.contact_displacement());
            } else if p.stable && p.voltage > 0.0 {
                let g = a.gap - p.displacement;
                let f = a.permittivity * a.actuation_area * p.voltage * p.voltage / (2.0 * g * g);
                let spring = a.spring_constant * p.displacement;
                prop_assert!((spring - f).abs() <= 1e-12 * spring);
            }
        }
    }
}

#[test]
fn released_design_reaches_dimples_at_23_volts() {
    let d = DualGapDesign::paper_device();
    let released = DualGapDesign {
        actuation_region: PlateRegion { gap: 7.0 * UM, ..d.actuation_region },
        ..d
    };
    let curve = trace_cv_curve(&released, 30.0, 301).unwrap();
    let last = curve.points.last().unwrap();
    assert!(last.dimple_contact && last.stable);
    let first_contact = curve.points.iter().find(|p| p.dimple_contact).unwrap();
    assert!(first_contact.voltage < 23.3);
}
