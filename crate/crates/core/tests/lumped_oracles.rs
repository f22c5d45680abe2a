use dualgap_core::lumped::{
    electrostatic_force, parallel_plate_capacitance, tuning_range, LumpedActuator,
};
use dualgap_core::{Error, Execution, VACUUM_PERMITTIVITY as EPS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_actuator(rng: &mut ChaCha8Rng) -> LumpedActuator {
    let k = 10f64.powf(rng.random_range(-1.0..2.0));
    let d = rng.random_range(0.5e-6..10e-6);
    let s = 10f64.powf(rng.random_range(-10.0..-7.0));
    LumpedActuator::new(k, d, s, EPS).unwrap()
}

/// First sign change of `k x - F(V, x)` found by a uniform scan of `[0, d)`.
fn scan_bracket(a: &LumpedActuator, v: f64, steps: usize) -> (f64, f64) {
    let c = 0.5 * a.permittivity * a.actuation_area * v * v;
    let r = |x: f64| a.spring_constant * x - c / ((a.gap - x) * (a.gap - x));
    let mut prev = 0.0;
    for i in 1..steps {
        let x = a.gap * i as f64 / steps as f64;
        if r(x) >= 0.0 {
            return (prev, x);
        }
        prev = x;
    }
    panic!("no sign change inside the gap");
}

#[test]
fn newton_root_inside_brute_force_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1a1);
    for _ in 0..100 {
        let a = random_actuator(&mut rng);
        let v = a.pull_in_voltage() * rng.random_range(0.01..0.99);
        let sol = a.solve_equilibrium(v).unwrap();
        let (lo, hi) = scan_bracket(&a, v, 1_000_000);
        assert!(sol.displacement >= lo && sol.displacement <= hi, "{} not in [{lo}, {hi}]", sol.displacement);
        let back = a.voltage_at_displacement(sol.displacement).unwrap();
        assert!((back - v).abs() <= 1e-9 * v, "round trip {back} vs {v}");
    }
}

#[test]
fn fold_sits_at_a_third_of_the_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf01d);
    for _ in 0..50 {
        let a = random_actuator(&mut rng);
        let (x_search, v_search) = a.fold_by_search();
        assert!((x_search / (a.gap / 3.0) - 1.0).abs() < 1e-6);
        assert!((v_search / a.pull_in_voltage() - 1.0).abs() < 1e-9);
        let at_fold = a.solve_equilibrium(a.pull_in_voltage()).unwrap();
        assert!(!at_fold.stable);
        assert!((at_fold.displacement / (a.gap / 3.0) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn table1_actuator_examples() {
    let a = LumpedActuator::new(1.511, 4.5e-6, 3.2e-8, EPS).unwrap();
    let near = a.solve_equilibrium(a.pull_in_voltage() - 1e-9).unwrap();
    assert!((near.displacement / 1.5e-6 - 1.0).abs() < 1e-4);
    let x = a.solve_equilibrium(10.6).unwrap().displacement;
    assert!((x - 0.75e-6).abs() < 0.01e-6, "{x}");
    // grid scan with 1e-10 m steps brackets the same root
    let c = 0.5 * EPS * 3.2e-8 * 10.6 * 10.6;
    let first = (1..45_000)
        .map(|i| i as f64 * 1e-10)
        .find(|&x| 1.511 * x - c / ((4.5e-6 - x) * (4.5e-6 - x)) >= 0.0)
        .unwrap();
    assert!(x <= first && x >= first - 1e-10);
}

#[test]
fn beyond_fold_reports_pull_in() {
    let a = LumpedActuator::new(1.511, 4.5e-6, 3.2e-8, EPS).unwrap();
    assert!(matches!(
        a.solve_equilibrium(1.01 * a.pull_in_voltage()),
        Err(Error::PullIn { .. })
    ));
}

#[test]
fn batch_solves_match_single_solves() {
    let a = LumpedActuator::new(1.511, 4.5e-6, 3.2e-8, EPS).unwrap();
    let vs: Vec<f64> = (0..300).map(|i| i as f64 * 0.05).collect();
    let seq = a.solve_many(Execution::Sequential, &vs);
    let par = a.solve_many(Execution::Parallel, &vs);
    for ((v, s), p) in vs.iter().zip(&seq).zip(&par) {
        match (s, p) {
            (Ok(s), Ok(p)) => {
                assert_eq!(s, p);
                assert_eq!(*s, a.solve_equilibrium(*v).unwrap());
            }
            (Err(_), Err(_)) => assert!(*v > a.pull_in_voltage()),
            _ => panic!("sequential and parallel disagree at {v} V"),
        }
    }
}

fn actuator_strategy() -> impl Strategy<Value = LumpedActuator> {
    (-1.0f64..2.0, 0.5e-6f64..10e-6, -10.0f64..-7.0)
        .prop_map(|(lk, d, ls)| LumpedActuator::new(10f64.powf(lk), d, 10f64.powf(ls), EPS).unwrap())
}

proptest! {
    #[test]
    fn capacitance_is_inverse_in_gap(s in 1e-10f64..1e-7, g in 0.1e-6f64..10e-6) {
        let c1 = parallel_plate_capacitance(s, g, EPS).unwrap();
        let c2 = parallel_plate_capacitance(s, 2.0 * g, EPS).unwrap();
        prop_assert!((c1 / c2 - 2.0).abs() < 1e-12);
        prop_assert!(tuning_range(c2, c1).unwrap() > 0.0);
    }

    #[test]
    fn stable_branch_is_monotone_and_balanced(a in actuator_strategy(), f1 in 0.0f64..0.999, f2 in 0.0f64..0.999) {
        let v_pi = a.pull_in_voltage();
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let x1 = a.solve_equilibrium(lo * v_pi).unwrap();
        let x2 = a.solve_equilibrium(hi * v_pi).unwrap();
        if hi > lo {
            prop_assert!(x1.displacement < x2.displacement);
        }
        prop_assert!(x2.displacement <= a.gap / 3.0);
        prop_assert!(x2.stable);
        prop_assert!(a.net_stiffness(hi * v_pi, x2.displacement) > 0.0);
        let spring = a.spring_constant * x2.displacement;
        if spring > 0.0 {
            let f = electrostatic_force(hi * v_pi, a.actuation_area, a.gap, x2.displacement, EPS).unwrap();
            prop_assert!((spring - f).abs() <= 1e-15 * spring.max(1e-30), "{} vs {}", spring, f);
        }
    }

    #[test]
    fn round_trip_voltage(a in actuator_strategy(), f in 0.001f64..0.999) {
        let v = f * a.pull_in_voltage();
        let x = a.solve_equilibrium(v).unwrap().displacement;
        let back = a.voltage_at_displacement(x).unwrap();
        prop_assert!((back - v).abs() <= 1e-9 * v);
    }
}
