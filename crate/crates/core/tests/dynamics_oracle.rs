//! Cross-checks the event-list propagator against a dense full-space product
//! built by direct recursion over layers, with exponentials from a Taylor
//! series rather than the eigendecomposition.

use nested_udd::evolve::{run_once, BathInit, RunSeeds};
use nested_udd::linalg::{reduced_from_pure, trace_distance, CMat, C64};
use nested_udd::model::{initial_joint_state, random_protected_state, SpinBathModel};
use nested_udd::operators::{build_control, BasisConvention, ControlName, ControlName::*};
use nested_udd::schedule::{LayeredSchedule, PulseRule};

fn expm_i(h: &CMat, t: f64) -> CMat {
    let d = h.dim();
    let norm = h.max_abs() * d as f64 * t.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = h.scale(C64::new(0.0, -t / 2f64.powi(squarings as i32)));
    let mut term = CMat::identity(d);
    let mut sum = CMat::identity(d);
    for k in 1..30 {
        term = (&term * &a).scale(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn times(rule: PulseRule, n: usize, t0: f64, t1: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| match rule {
            PulseRule::Udd => t0 + (t1 - t0) * (j as f64 * std::f64::consts::PI / (2 * n + 2) as f64).sin().powi(2),
            PulseRule::Periodic => t0 + (t1 - t0) * j as f64 / (n + 1) as f64,
        })
        .collect()
}

struct Nest<'a> {
    h: &'a CMat,
    xs: Vec<CMat>,
    n: usize,
    rule: PulseRule,
}

impl Nest<'_> {
    fn u(&self, layer: usize, t0: f64, t1: f64) -> CMat {
        if layer == self.xs.len() {
            return expm_i(self.h, t1 - t0);
        }
        let mut pts = vec![t0];
        pts.extend(times(self.rule, self.n, t0, t1));
        pts.push(t1);
        let x = &self.xs[layer];
        let mut u = self.u(layer + 1, pts[0], pts[1]);
        for k in 1..=self.n {
            u = &self.u(layer + 1, pts[k], pts[k + 1]) * &(x * &u);
        }
        if self.n % 2 == 1 {
            u = x * &u;
        }
        u
    }
}

fn oracle_d(model: &SpinBathModel, ordering: &[ControlName], n: usize, rule: PulseRule, t: f64, state_seed: u64, bath_seed: u64) -> f64 {
    let basis = BasisConvention::standard();
    let xs = ordering.iter().map(|&c| build_control(c, &basis).full_matrix(model.n_bath_spins())).collect();
    let u = Nest { h: model.hamiltonian(), xs, n, rule }.u(0, 0.0, t);
    let sys = random_protected_state(state_seed, &basis);
    let psi0 = initial_joint_state(&sys, model.n_bath_spins(), bath_seed).unwrap();
    let psi = u.matvec(psi0.amplitudes());
    trace_distance(&reduced_from_pure(&psi, 4).unwrap(), &sys.density()).unwrap()
}

fn compare(ordering: &[ControlName], n: usize, rule: PulseRule) {
    let basis = BasisConvention::standard();
    let model = SpinBathModel::random(5, 11).unwrap();
    let s = LayeredSchedule::uniform(ordering, n, rule, 0.1).unwrap();
    let sys = random_protected_state(5, &basis);
    let got = run_once(&model, &s, &sys, RunSeeds { bath: 6, state: 5 }, &basis, BathInit::Haar).unwrap().d_value;
    let want = oracle_d(&model, ordering, n, rule, 0.1, 5, 6);
    assert!((got - want).abs() <= 1e-12 + 1e-8 * want, "{ordering:?} N={n}: {got:e} vs {want:e}");
}

#[test]
fn expm_matches_eigen_propagator() {
    let m = SpinBathModel::random(5, 2).unwrap();
    let a = expm_i(m.hamiltonian(), 0.37);
    let b = nested_udd::linalg::propagator(m.eig(), 0.37).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-12);
}

#[test]
fn working_ordering_matches_oracle() {
    for n in 1..=3 {
        compare(&[Xphi, X1, X0], n, PulseRule::Udd);
    }
}

#[test]
fn closure_failure_ordering_matches_oracle() {
    for n in 1..=4 {
        compare(&[X0, X1, Xphi], n, PulseRule::Udd);
    }
}

#[test]
fn non_invariant_ordering_matches_oracle() {
    compare(&[X1, Xphi, X0], 2, PulseRule::Udd);
}

#[test]
fn periodic_matches_oracle() {
    for n in 1..=3 {
        compare(&[Xphi, X1, X0], n, PulseRule::Periodic);
    }
}

#[test]
fn local_z_scheme_matches_oracle() {
    let basis = BasisConvention::local();
    let model = SpinBathModel::random(5, 3).unwrap();
    let ordering = [Z4, Z3, Z2, Z1];
    let s = LayeredSchedule::uniform(&ordering, 2, PulseRule::Udd, 0.1).unwrap();
    let sys = nested_udd::model::random_haar_state(9);
    let got = run_once(&model, &s, &sys, RunSeeds { bath: 4, state: 9 }, &basis, BathInit::Haar).unwrap().d_value;

    let xs = ordering.iter().map(|&c| build_control(c, &basis).full_matrix(3)).collect();
    let u = Nest { h: model.hamiltonian(), xs, n: 2, rule: PulseRule::Udd }.u(0, 0.0, 0.1);
    let psi0 = initial_joint_state(&sys, 3, 4).unwrap();
    let psi = u.matvec(psi0.amplitudes());
    let want = trace_distance(&reduced_from_pure(&psi, 4).unwrap(), &sys.density()).unwrap();
    assert!((got - want).abs() <= 1e-12 + 1e-8 * want, "{got:e} vs {want:e}");
}
