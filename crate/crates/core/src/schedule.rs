//! Pulse timings and nested layer schedules.
//!
//! A [`LayeredSchedule`] lists layers outermost first. Flattening places the
//! outermost layer's pulses on `[0, T]`, then runs a full copy of the next
//! layer inside every interval between consecutive outer pulses (with `0` and
//! `T` as the end points), and so on inward. A layer with an odd pulse count
//! fires one extra pulse at the end of every interval it governs, so each
//! interval sees an even number of pulses.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::operators::{build_control, BasisConvention, ControlName};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseRule {
    /// `t₀ + (t₁ − t₀) sin²(jπ/(2N+2))`
    #[default]
    Udd,
    /// `t₀ + (t₁ − t₀) k/(N+1)`
    Periodic,
}

impl PulseRule {
    pub fn as_str(self) -> &'static str {
        match self {
            PulseRule::Udd => "udd",
            PulseRule::Periodic => "periodic",
        }
    }
}

impl FromStr for PulseRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "udd" => Ok(PulseRule::Udd),
            "periodic" | "cpmg" => Ok(PulseRule::Periodic),
            other => Err(Error::Config(format!("unknown pulse rule `{other}`"))),
        }
    }
}

/// Which pulse goes first when several layers fire at the same instant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coincidence {
    #[default]
    InnerFirst,
    OuterFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerSpec {
    pub control: ControlName,
    pub n_pulses: usize,
    pub rule: PulseRule,
}

impl LayerSpec {
    pub fn new(control: ControlName, n_pulses: usize, rule: PulseRule) -> Self {
        Self { control, n_pulses, rule }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayeredSchedule {
    /// Index 0 is the outermost layer.
    pub layers: Vec<LayerSpec>,
    pub total_time: f64,
    pub coincidence: Coincidence,
}

impl LayeredSchedule {
    pub fn new(layers: Vec<LayerSpec>, total_time: f64) -> Result<Self> {
        if !total_time.is_finite() || total_time < 0.0 {
            return Err(Error::InvalidSchedule(format!("total time {total_time}")));
        }
        if let Some(l) = layers.iter().find(|l| l.n_pulses == 0) {
            return Err(Error::InvalidSchedule(format!("layer {} has no pulses", l.control)));
        }
        Ok(Self { layers, total_time, coincidence: Coincidence::InnerFirst })
    }

    /// Same pulse count and rule in every layer of an outer-to-inner ordering.
    pub fn uniform(ordering: &[ControlName], n: usize, rule: PulseRule, total_time: f64) -> Result<Self> {
        Self::new(ordering.iter().map(|&c| LayerSpec::new(c, n, rule)).collect(), total_time)
    }

    /// No control: a single drift over `[0, T]`.
    pub fn free(total_time: f64) -> Result<Self> {
        Self::new(Vec::new(), total_time)
    }

    pub fn with_coincidence(mut self, c: Coincidence) -> Self {
        self.coincidence = c;
        self
    }

    pub fn ordering(&self) -> Vec<ControlName> {
        self.layers.iter().map(|l| l.control).collect()
    }
}

/// A drift of `duration` ending at `time`, followed by an optional pulse of
/// layer `pulse` (index into [`EventList::layers`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub duration: f64,
    pub pulse: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventList {
    pub total_time: f64,
    /// Layer controls, outermost first.
    pub layers: Vec<ControlName>,
    /// Chronological; the last event is the terminal drift with no pulse.
    pub events: Vec<Event>,
}

impl EventList {
    pub fn pulse_applications(&self) -> usize {
        self.events.iter().filter(|e| e.pulse.is_some()).count()
    }

    /// Distinct instants at which at least one pulse fires.
    pub fn pulse_instants(&self) -> usize {
        let mut count = 0;
        let mut last = f64::NAN;
        for e in self.events.iter().filter(|e| e.pulse.is_some()) {
            if e.time != last {
                count += 1;
                last = e.time;
            }
        }
        count
    }

    pub fn pulses_of_layer(&self, layer: usize) -> usize {
        self.events.iter().filter(|e| e.pulse == Some(layer)).count()
    }

    /// Number of free-evolution intervals of positive length.
    pub fn drift_intervals(&self) -> usize {
        self.events.iter().filter(|e| e.duration > 0.0).count()
    }

    pub fn total_drift(&self) -> f64 {
        self.events.iter().map(|e| e.duration).sum()
    }

    /// System matrices of the layer controls, indexed like [`Event::pulse`].
    pub fn pulse_matrices(&self, basis: &BasisConvention) -> Vec<CMat> {
        self.layers.iter().map(|&c| build_control(c, basis).matrix().clone()).collect()
    }

    /// `event_index,time,duration,pulse_name`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_index,time,duration,pulse_name\n");
        for (i, e) in self.events.iter().enumerate() {
            let name = e.pulse.map(|p| self.layers[p].as_str()).unwrap_or("none");
            let _ = writeln!(out, "{i},{},{},{name}", e.time, e.duration);
        }
        out
    }
}

/// UDD pulse times strictly inside `(t_start, t_end)`.
pub fn udd_times(n: usize, t_start: f64, t_end: f64) -> Result<Vec<f64>> {
    check_layer_args(n, t_start, t_end)?;
    Ok(rule_times(PulseRule::Udd, n, t_start, t_end))
}

/// Equally spaced pulse times strictly inside `(t_start, t_end)`.
pub fn periodic_times(n: usize, t_start: f64, t_end: f64) -> Result<Vec<f64>> {
    check_layer_args(n, t_start, t_end)?;
    Ok(rule_times(PulseRule::Periodic, n, t_start, t_end))
}

fn check_layer_args(n: usize, t_start: f64, t_end: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidSchedule("a layer needs at least one pulse".into()));
    }
    if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidSchedule(format!("empty interval [{t_start}, {t_end}]")));
    }
    Ok(())
}

fn rule_times(rule: PulseRule, n: usize, t0: f64, t1: f64) -> Vec<f64> {
    let span = t1 - t0;
    (1..=n)
        .map(|j| match rule {
            PulseRule::Udd => {
                let s = (j as f64 * PI / (2 * n + 2) as f64).sin();
                t0 + span * s * s
            }
            PulseRule::Periodic => t0 + span * j as f64 / (n + 1) as f64,
        })
        .collect()
}

/// Pulse times of every layer (outermost first), without terminal pulses.
pub fn nested_times(layers: &[LayerSpec], total_time: f64) -> Result<Vec<Vec<f64>>> {
    if layers.is_empty() {
        return Err(Error::InvalidSchedule("no layers".into()));
    }
    let mut out = Vec::with_capacity(layers.len());
    let mut parents = vec![(0.0, total_time)];
    for layer in layers {
        let mut times = Vec::new();
        let mut children = Vec::new();
        for &(a, b) in &parents {
            let ts = if b > a {
                check_layer_args(layer.n_pulses, a, b)?;
                rule_times(layer.rule, layer.n_pulses, a, b)
            } else {
                vec![a; layer.n_pulses]
            };
            let mut bounds = Vec::with_capacity(ts.len() + 2);
            bounds.push(a);
            bounds.extend_from_slice(&ts);
            bounds.push(b);
            children.extend(bounds.windows(2).map(|w| (w[0], w[1])));
            times.extend(ts);
        }
        out.push(times);
        parents = children;
    }
    Ok(out)
}

/// Flattens a layered schedule into chronological drift/pulse events.
pub fn flatten(s: &LayeredSchedule) -> EventList {
    let mut marks: Vec<(f64, usize)> = Vec::new();
    if !s.layers.is_empty() {
        emit(&s.layers, 0, 0.0, s.total_time, &mut marks);
    }
    if s.coincidence == Coincidence::OuterFirst {
        let mut i = 0;
        while i < marks.len() {
            let mut j = i;
            while j + 1 < marks.len() && marks[j + 1].0 == marks[i].0 {
                j += 1;
            }
            marks[i..=j].reverse();
            i = j + 1;
        }
    }

    let mut events = Vec::with_capacity(marks.len() + 1);
    let mut prev = 0.0;
    for (t, layer) in marks {
        events.push(Event { time: t, duration: t - prev, pulse: Some(layer) });
        prev = t;
    }
    events.push(Event { time: s.total_time, duration: s.total_time - prev, pulse: None });
    EventList { total_time: s.total_time, layers: s.ordering(), events }
}

fn emit(layers: &[LayerSpec], depth: usize, t0: f64, t1: f64, out: &mut Vec<(f64, usize)>) {
    let layer = layers[depth];
    let times = rule_times(layer.rule, layer.n_pulses, t0, t1);
    let mut start = t0;
    for (k, end) in times.iter().copied().chain(std::iter::once(t1)).enumerate() {
        if depth + 1 < layers.len() {
            emit(layers, depth + 1, start, end, out);
        }
        if k < times.len() {
            out.push((end, depth));
        }
        start = end;
    }
    if layer.n_pulses % 2 == 1 {
        out.push((t1, depth));
    }
}

/// Product of pulses fired at one instant; `pulses[0]` acts first.
pub fn compose_coincident(pulses: &[&CMat]) -> CMat {
    let dim = pulses.first().map(|p| p.dim()).unwrap_or(4);
    pulses.iter().fold(CMat::identity(dim), |acc, p| *p * &acc)
}
