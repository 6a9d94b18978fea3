use nested_udd::linalg::{trace_distance, CMat, C64};
use nested_udd::model::{haar_vector, SpinBathModel};
use nested_udd::operators::ControlName;
use nested_udd::schedule::{flatten, periodic_times, udd_times, LayerSpec, LayeredSchedule, PulseRule};
use proptest::prelude::*;

fn rule() -> impl Strategy<Value = PulseRule> {
    prop_oneof![Just(PulseRule::Udd), Just(PulseRule::Periodic)]
}

fn layers() -> impl Strategy<Value = Vec<LayerSpec>> {
    prop::collection::vec((0usize..8, 1usize..5, rule()), 1..4)
        .prop_map(|v| v.into_iter().map(|(c, n, r)| LayerSpec::new(ControlName::ALL[c], n, r)).collect())
}

/// Density matrix mixing a few random pure states.
fn density(seed: u64, rank: usize) -> CMat {
    let mut rho = CMat::zeros(4);
    let weights: Vec<f64> = (0..rank).map(|k| 1.0 + (seed.wrapping_mul(k as u64 + 3) % 7) as f64).collect();
    let total: f64 = weights.iter().sum();
    for (k, w) in weights.iter().enumerate() {
        let v = haar_vector(4, seed.wrapping_add(1000 * k as u64));
        rho = &rho + &CMat::outer(&v, &v).unwrap().scale(C64::new(w / total, 0.0));
    }
    rho
}

proptest! {
    #[test]
    fn udd_times_are_reflection_symmetric(n in 1usize..=50, t0 in -10.0f64..10.0, span in 1e-3f64..10.0) {
        let t1 = t0 + span;
        let ts = udd_times(n, t0, t1).unwrap();
        prop_assert_eq!(ts.len(), n);
        for j in 0..n {
            prop_assert!((ts[j] + ts[n - 1 - j] - (t0 + t1)).abs() <= 1e-14 * (1.0 + t0.abs() + t1.abs()) * 4.0);
            prop_assert!(ts[j] > t0 && ts[j] < t1);
        }
        prop_assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn periodic_times_are_equally_spaced(n in 1usize..=50, span in 1e-3f64..10.0) {
        let ts = periodic_times(n, 0.0, span).unwrap();
        let step = span / (n + 1) as f64;
        for (k, t) in ts.iter().enumerate() {
            prop_assert!((t - step * (k + 1) as f64).abs() <= 1e-14 * span);
        }
    }

    #[test]
    fn flattened_schedules_account_for_all_time(ls in layers(), t in 1e-3f64..10.0) {
        let s = LayeredSchedule::new(ls.clone(), t).unwrap();
        let ev = flatten(&s);
        prop_assert!(ev.events.iter().all(|e| e.duration >= 0.0));
        prop_assert!((ev.total_drift() - t).abs() <= 1e-12 * t);
        prop_assert!(ev.events.windows(2).all(|w| w[0].time <= w[1].time));
        prop_assert!(ev.events.last().unwrap().pulse.is_none());

        let intervals: usize = ls.iter().map(|l| l.n_pulses + 1).product();
        prop_assert_eq!(ev.drift_intervals(), intervals);
        let mut governed = 1;
        for (k, l) in ls.iter().enumerate() {
            let per = l.n_pulses + l.n_pulses % 2;
            prop_assert_eq!(ev.pulses_of_layer(k), per * governed);
            governed *= l.n_pulses + 1;
        }
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), ra in 1usize..4, rb in 1usize..4) {
        let (x, y, z) = (density(a, ra), density(b, rb), density(c, 1));
        let dxy = trace_distance(&x, &y).unwrap();
        prop_assert!((0.0..=1.0).contains(&dxy));
        prop_assert!((dxy - trace_distance(&y, &x).unwrap()).abs() <= 1e-12);
        prop_assert!(trace_distance(&x, &x).unwrap() <= 1e-12);
        prop_assert!(dxy <= trace_distance(&x, &z).unwrap() + trace_distance(&z, &y).unwrap() + 1e-12);
    }

    #[test]
    fn model_documents_round_trip(n in 3usize..=5, seed in any::<u64>()) {
        let m = SpinBathModel::random(n, seed).unwrap();
        let back = SpinBathModel::from_json(&m.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.hamiltonian(), m.hamiltonian());
        prop_assert_eq!(back.to_document(), m.to_document());
    }
}
