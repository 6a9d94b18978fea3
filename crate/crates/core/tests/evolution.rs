use nested_udd::evolve::{evolve, run_events, run_once, BathInit, RunSeeds};
use nested_udd::linalg::{reduced_from_pure, C64};
use nested_udd::model::{initial_joint_state, random_haar_state, random_protected_state, SpinBathModel};
use nested_udd::operators::{build_control, BasisConvention, ControlName, ControlName::*, SystemState};
use nested_udd::schedule::{flatten, Event, EventList, LayeredSchedule, PulseRule};

fn survival(model: &SpinBathModel, schedule: &LayeredSchedule) -> f64 {
    let basis = BasisConvention::standard();
    let sys = SystemState::label(0, &basis);
    let events = flatten(schedule);
    let psi0 = initial_joint_state(&sys, model.n_bath_spins(), 3).unwrap();
    let psi = evolve(model, &events, &events.pulse_matrices(&basis), &psi0).unwrap();
    reduced_from_pure(psi.amplitudes(), 4).unwrap()[(0, 0)].re
}

#[test]
fn x0_layer_raises_survival_under_transverse_coupling() {
    let mut b = vec![[0.0; 3]; 5];
    b[0][0] = 0.5;
    let c = vec![vec![[[0.0; 3]; 3]; 5]; 5];
    let model = SpinBathModel::from_coefficients(5, 0, b, c).unwrap();
    let free = survival(&model, &LayeredSchedule::free(0.1).unwrap());
    let pulsed = survival(&model, &LayeredSchedule::uniform(&[X0], 2, PulseRule::Udd, 0.1).unwrap());
    assert!(free < 1.0 - 1e-4, "{free}");
    assert!(pulsed > free, "{pulsed} <= {free}");
}

#[test]
fn pulse_phases_do_not_matter() {
    let basis = BasisConvention::standard();
    let model = SpinBathModel::random(5, 21).unwrap();
    let s = LayeredSchedule::uniform(&[Xphi, X1, X0], 3, PulseRule::Udd, 0.1).unwrap();
    let events = flatten(&s);
    let plain = events.pulse_matrices(&basis);
    let phased: Vec<_> = plain.iter().enumerate().map(|(k, p)| p.scale(C64::from_polar(1.0, 0.7 + k as f64))).collect();
    let minus_i: Vec<_> = plain.iter().map(|p| p.scale(C64::new(0.0, -1.0))).collect();
    let sys = random_protected_state(4, &basis);
    let seeds = RunSeeds { bath: 5, state: 4 };
    let d0 = run_events(&model, &events, &plain, &sys, seeds, BathInit::Haar).unwrap().0;
    for pulses in [phased, minus_i] {
        let d = run_events(&model, &events, &pulses, &sys, seeds, BathInit::Haar).unwrap().0;
        assert!((d - d0).abs() <= 1e-12, "{d} vs {d0}");
    }
}

/// `A B e^{-iHτ} B A` against `B A e^{-iHτ} A B`, as explicit event lists.
fn sandwich_distance(model: &SpinBathModel, a: ControlName, b: ControlName, sys: &SystemState) -> (f64, f64) {
    let basis = BasisConvention::standard();
    let tau = 0.1;
    let list = |first: ControlName, second: ControlName| EventList {
        total_time: tau,
        layers: vec![first, second],
        events: vec![
            Event { time: 0.0, duration: 0.0, pulse: Some(0) },
            Event { time: 0.0, duration: 0.0, pulse: Some(1) },
            Event { time: tau, duration: tau, pulse: Some(1) },
            Event { time: tau, duration: 0.0, pulse: Some(0) },
            Event { time: tau, duration: 0.0, pulse: None },
        ],
    };
    let seeds = RunSeeds { bath: 8, state: 0 };
    let ab = list(a, b);
    let ba = list(b, a);
    let d_ab = run_events(model, &ab, &ab.pulse_matrices(&basis), sys, seeds, BathInit::Haar).unwrap().0;
    let d_ba = run_events(model, &ba, &ba.pulse_matrices(&basis), sys, seeds, BathInit::Haar).unwrap().0;
    (d_ab, d_ba)
}

#[test]
fn commuting_or_anticommuting_pairs_are_exchangeable() {
    for seed in 0..4 {
        let model = SpinBathModel::random(5, seed).unwrap();
        let sys = random_haar_state(seed + 100);
        for (a, b) in [(X0, X1), (X01, X1), (Z1, Z2), (Z2, Z3), (Z3, Z4)] {
            let (d_ab, d_ba) = sandwich_distance(&model, a, b, &sys);
            assert!((d_ab - d_ba).abs() <= 1e-10, "{a}-{b}: {d_ab} vs {d_ba}");
        }
    }
}

#[test]
fn xphi_and_x0_are_not_exchangeable() {
    let model = SpinBathModel::random(5, 1).unwrap();
    let sys = random_haar_state(7);
    let (d_ab, d_ba) = sandwich_distance(&model, Xphi, X0, &sys);
    assert!((d_ab - d_ba).abs() > 1e-6, "{d_ab} vs {d_ba}");
}

#[test]
fn coincident_products_follow_commutation() {
    use nested_udd::schedule::compose_coincident;
    let basis = BasisConvention::standard();
    let m = |c| build_control(c, &basis).matrix().clone();
    let (x0, x1, xphi) = (m(X0), m(X1), m(Xphi));
    assert!(compose_coincident(&[&x0, &x0]).approx_eq(&nested_udd::linalg::CMat::identity(4), 1e-14));
    assert!(compose_coincident(&[&x1, &x0]).approx_eq(&compose_coincident(&[&x0, &x1]), 1e-14));
    assert!(!compose_coincident(&[&xphi, &x0]).approx_eq(&compose_coincident(&[&x0, &xphi]), 1e-6));
}

#[test]
fn long_event_lists_keep_the_state_normalized() {
    // 11^4 = 14641 drift intervals.
    let basis = BasisConvention::local();
    let model = SpinBathModel::random(5, 2).unwrap();
    let s = LayeredSchedule::uniform(&[Z4, Z3, Z2, Z1], 10, PulseRule::Udd, 0.1).unwrap();
    assert_eq!(flatten(&s).drift_intervals(), 14641);
    let r = run_once(&model, &s, &random_haar_state(1), RunSeeds { bath: 2, state: 1 }, &basis, BathInit::Haar).unwrap();
    assert!(r.hygiene.within(1e-10), "{:?}", r.hygiene);
    assert!((0.0..=1.0).contains(&r.d_value));
}
