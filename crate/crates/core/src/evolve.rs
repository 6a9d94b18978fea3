//! Exact pulsed evolution of the joint state and trace-distance measurement.
//!
//! Free evolution uses the model's cached eigenbasis: `ψ ← V e^{−iΛτ} V† ψ`.
//! Pulses are system operators applied to the slow indices of `ψ`. The π-pulse
//! `e^{−iπX/2} = −iX` is applied as `X`; the dropped phase is global.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, phases, reduced_from_pure, trace_distance, CMat, C64, ZERO};
use crate::model::{bath_basis_state, initial_joint_state, JointState, SpinBathModel};
use crate::operators::{ordering_label, BasisConvention, SystemState, SYS_DIM};
use crate::schedule::{flatten, EventList, LayeredSchedule};

/// Norm drift beyond this aborts a run.
pub const NORM_FAULT_TOL: f64 = 1e-8;

/// Initial bath state used by [`run_once`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BathInit {
    /// Haar-random pure bath state from the bath seed.
    #[default]
    Haar,
    /// `I/d_B`, realised as the average over bath basis states.
    MaximallyMixed,
}

/// Applies events to a state vector, reusing scratch buffers between events.
pub struct Propagator<'a> {
    model: &'a SpinBathModel,
    pulses: &'a [CMat],
    scratch: Vec<C64>,
}

impl<'a> Propagator<'a> {
    pub fn new(model: &'a SpinBathModel, pulses: &'a [CMat]) -> Result<Self> {
        for p in pulses {
            if p.dim() != SYS_DIM {
                return Err(Error::Shape(format!("pulse has dimension {}, expected 4", p.dim())));
            }
        }
        Ok(Self { model, pulses, scratch: vec![ZERO; model.dim()] })
    }

    fn drift(&mut self, psi: &mut [C64], tau: f64) {
        if tau == 0.0 {
            return;
        }
        let eig = self.model.eig();
        let v = eig.eigenvectors();
        v.adjoint_matvec_into(psi, &mut self.scratch);
        for (s, ph) in self.scratch.iter_mut().zip(phases(eig, tau)) {
            *s *= ph;
        }
        v.matvec_into(&self.scratch, psi);
    }

    fn pulse(&mut self, psi: &mut [C64], op: &CMat) {
        let bath = self.model.bath_dim();
        self.scratch.copy_from_slice(psi);
        for i in 0..SYS_DIM {
            let row = op.row(i);
            let out = &mut psi[i * bath..(i + 1) * bath];
            out.iter_mut().for_each(|z| *z = ZERO);
            for (j, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let src = &self.scratch[j * bath..(j + 1) * bath];
                for (o, s) in out.iter_mut().zip(src) {
                    *o += a * s;
                }
            }
        }
    }

    pub fn run(&mut self, events: &EventList, psi: &mut [C64]) -> Result<()> {
        if psi.len() != self.model.dim() {
            return Err(Error::Shape(format!("state has length {}, model needs {}", psi.len(), self.model.dim())));
        }
        for e in &events.events {
            if !(e.duration >= 0.0) {
                return Err(Error::InvalidDuration(e.duration));
            }
            self.drift(psi, e.duration);
            if let Some(p) = e.pulse {
                let op = self.pulses.get(p).ok_or_else(|| Error::InvalidSchedule(format!("no pulse matrix for layer {p}")))?;
                self.pulse(psi, op);
            }
        }
        Ok(())
    }
}

/// Propagates `psi0` through `events`; `pulses[k]` is the system matrix of
/// layer `k`.
pub fn evolve(model: &SpinBathModel, events: &EventList, pulses: &[CMat], psi0: &JointState) -> Result<JointState> {
    let mut psi = psi0.amplitudes().to_vec();
    Propagator::new(model, pulses)?.run(events, &mut psi)?;
    let out = JointState::from_raw(psi);
    let drift = (out.norm() - 1.0).abs();
    if drift > NORM_FAULT_TOL {
        return Err(Error::NumericalFault(format!("state norm drifted by {drift:.3e}")));
    }
    Ok(out)
}

/// Invariant checks gathered during one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Hygiene {
    pub norm_drift: f64,
    pub rho_hermitian_defect: f64,
    pub rho_trace_error: f64,
    /// Most negative eigenvalue of the reduced state (0 if none negative).
    pub rho_negativity: f64,
}

impl Hygiene {
    pub fn merge(self, o: Hygiene) -> Hygiene {
        Hygiene {
            norm_drift: self.norm_drift.max(o.norm_drift),
            rho_hermitian_defect: self.rho_hermitian_defect.max(o.rho_hermitian_defect),
            rho_trace_error: self.rho_trace_error.max(o.rho_trace_error),
            rho_negativity: self.rho_negativity.max(o.rho_negativity),
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.norm_drift <= tol && self.rho_hermitian_defect <= tol && self.rho_trace_error <= tol && self.rho_negativity <= tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub ordering: String,
    pub n: usize,
    pub total_time: f64,
    pub d_value: f64,
    pub model_seed: u64,
    pub bath_seed: u64,
    pub state_seed: u64,
    pub pulse_count: usize,
    pub hygiene: Hygiene,
}

/// Seeds identifying one realisation; recorded in [`RunResult`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunSeeds {
    pub bath: u64,
    pub state: u64,
}

/// Evolves `sys ⊗ bath` under the flattened schedule and measures the trace
/// distance between the final reduced state and `|sys⟩⟨sys|`.
pub fn run_once(
    model: &SpinBathModel,
    schedule: &LayeredSchedule,
    sys: &SystemState,
    seeds: RunSeeds,
    basis: &BasisConvention,
    bath: BathInit,
) -> Result<RunResult> {
    let events = flatten(schedule);
    let pulses = events.pulse_matrices(basis);
    run_events(model, &events, &pulses, sys, seeds, bath).map(|(d, hygiene)| RunResult {
        ordering: ordering_label(&events.layers),
        n: schedule.layers.first().map(|l| l.n_pulses).unwrap_or(0),
        total_time: schedule.total_time,
        d_value: d,
        model_seed: model.seed(),
        bath_seed: seeds.bath,
        state_seed: seeds.state,
        pulse_count: events.pulse_instants(),
        hygiene,
    })
}

/// Core of [`run_once`] on a pre-flattened event list.
pub fn run_events(
    model: &SpinBathModel,
    events: &EventList,
    pulses: &[CMat],
    sys: &SystemState,
    seeds: RunSeeds,
    bath: BathInit,
) -> Result<(f64, Hygiene)> {
    let baths: Vec<JointState> = match bath {
        BathInit::Haar => vec![initial_joint_state(sys, model.n_bath_spins(), seeds.bath)?],
        BathInit::MaximallyMixed => (0..model.bath_dim())
            .map(|b| JointState::product(sys, &bath_basis_state(model.n_bath_spins(), b)))
            .collect::<Result<_>>()?,
    };
    let weight = C64::new(1.0 / baths.len() as f64, 0.0);
    let mut rho = CMat::zeros(SYS_DIM);
    let mut norm_drift: f64 = 0.0;
    let mut prop = Propagator::new(model, pulses)?;
    for psi0 in baths {
        let mut psi = psi0.into_amplitudes();
        prop.run(events, &mut psi)?;
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let drift = (n - 1.0).abs();
        if drift > NORM_FAULT_TOL {
            return Err(Error::NumericalFault(format!("state norm drifted by {drift:.3e}")));
        }
        norm_drift = norm_drift.max(drift);
        rho = &rho + &reduced_from_pure(&psi, SYS_DIM)?.scale(weight);
    }

    let spectrum = herm_eig(&rho)?;
    let hygiene = Hygiene {
        norm_drift,
        rho_hermitian_defect: rho.hermitian_defect(),
        rho_trace_error: (rho.trace() - C64::new(1.0, 0.0)).norm(),
        rho_negativity: spectrum.eigenvalues().iter().map(|&l| (-l).max(0.0)).fold(0.0, f64::max),
    };
    let d = trace_distance(&rho, &sys.density())?;
    Ok((d, hygiene))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::propagator;
    use crate::model::random_protected_state;
    use crate::operators::ControlName;
    use crate::schedule::{Event, PulseRule};

    fn drift_only(t: f64) -> EventList {
        EventList { total_time: t, layers: vec![], events: vec![Event { time: t, duration: t, pulse: None }] }
    }

    #[test]
    fn zero_hamiltonian_leaves_state_alone() {
        let m = SpinBathModel::zero(5).unwrap();
        let sys = random_protected_state(1, &BasisConvention::standard());
        let psi0 = initial_joint_state(&sys, 3, 2).unwrap();
        let out = evolve(&m, &drift_only(0.7), &[], &psi0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn single_drift_matches_propagator() {
        let m = SpinBathModel::random(5, 4).unwrap();
        let sys = random_protected_state(1, &BasisConvention::standard());
        let psi0 = initial_joint_state(&sys, 3, 2).unwrap();
        let out = evolve(&m, &drift_only(0.3), &[], &psi0).unwrap();
        let want = propagator(m.eig(), 0.3).unwrap().matvec(psi0.amplitudes());
        for (a, b) in out.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn pulse_matches_lifted_operator() {
        let m = SpinBathModel::zero(5).unwrap();
        let basis = BasisConvention::standard();
        let xphi = crate::operators::build_control(ControlName::Xphi, &basis);
        let psi0 = initial_joint_state(&random_protected_state(3, &basis), 3, 5).unwrap();
        let events = EventList {
            total_time: 0.0,
            layers: vec![ControlName::Xphi],
            events: vec![Event { time: 0.0, duration: 0.0, pulse: Some(0) }, Event { time: 0.0, duration: 0.0, pulse: None }],
        };
        let out = evolve(&m, &events, &[xphi.matrix().clone()], &psi0).unwrap();
        let want = xphi.full_matrix(3).matvec(psi0.amplitudes());
        for (a, b) in out.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_time_gives_zero_distance() {
        let m = SpinBathModel::random(5, 1).unwrap();
        let basis = BasisConvention::standard();
        let s = LayeredSchedule::uniform(&[ControlName::Xphi, ControlName::X1, ControlName::X0], 2, PulseRule::Udd, 0.0).unwrap();
        let r = run_once(&m, &s, &random_protected_state(2, &basis), RunSeeds { bath: 3, state: 2 }, &basis, BathInit::Haar).unwrap();
        assert!(r.d_value < 1e-14, "{}", r.d_value);
    }

    #[test]
    fn free_evolution_decoheres() {
        let m = SpinBathModel::random(5, 1).unwrap();
        let basis = BasisConvention::standard();
        let s = LayeredSchedule::free(0.1).unwrap();
        let r = run_once(&m, &s, &random_protected_state(2, &basis), RunSeeds { bath: 3, state: 2 }, &basis, BathInit::Haar).unwrap();
        assert!(r.d_value > 1e-3);
        assert_eq!(r.ordering, "none");
    }

    #[test]
    fn mixed_bath_option_runs() {
        let m = SpinBathModel::random(5, 1).unwrap();
        let basis = BasisConvention::standard();
        let s = LayeredSchedule::uniform(&[ControlName::X0], 2, PulseRule::Udd, 0.1).unwrap();
        let r = run_once(&m, &s, &SystemState::label(0, &basis), RunSeeds::default(), &basis, BathInit::MaximallyMixed).unwrap();
        assert!(r.d_value > 0.0 && r.d_value < 0.1);
        assert!(r.hygiene.within(1e-10));
    }

    #[test]
    fn rejects_wrong_pulse_shape() {
        let m = SpinBathModel::zero(3).unwrap();
        assert!(Propagator::new(&m, &[CMat::identity(2)]).is_err());
    }
}
