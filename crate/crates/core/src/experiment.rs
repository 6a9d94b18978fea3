//! Averaged parameter sweeps over models, initial states and pulse counts,
//! CSV persistence, and log-log scaling fits.
//!
//! Every run is identified by `(model i, state j)`. Model coefficients depend
//! only on `i`, the system state only on `j`, and the bath state on `(i, j)`,
//! so all orderings and pulse counts in a sweep see the same realisations.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{run_events, BathInit, Hygiene, RunSeeds};
use crate::model::{random_haar_state, random_protected_state, SpinBathModel, DEFAULT_SPINS};
use crate::operators::{ordering_label, parse_ordering, BasisChoice, ControlName, SystemState};
use crate::schedule::{flatten, Coincidence, LayeredSchedule, PulseRule};

/// Purpose tags mixed into derived seeds.
pub mod tag {
    pub const MODEL: u64 = 0x6d6f_64656c;
    pub const STATE: u64 = 0x7374_617465;
    pub const BATH: u64 = 0x6261_7468;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for `(tag, i, j)` under `master`: a splitmix64 chain
/// `s ← splitmix64(s ⊕ x)` over `x = tag, i, j`, starting from `master`.
pub fn derive_seed(master: u64, tag: u64, i: u64, j: u64) -> u64 {
    [tag, i, j].iter().fold(splitmix64(master), |s, &x| splitmix64(s ^ x))
}

/// How initial system states are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// `α|0⟩ + β|1⟩`, Haar on the protected pair.
    #[default]
    Superposition,
    /// Haar over the whole system space.
    Haar,
    /// The basis state `|0⟩`.
    Basis0,
}

impl std::str::FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "superposition" => Ok(StateKind::Superposition),
            "haar" => Ok(StateKind::Haar),
            "basis0" => Ok(StateKind::Basis0),
            other => Err(Error::Config(format!("unknown state kind `{other}`"))),
        }
    }
}

mod ordering_strings {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<ControlName>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|o| ordering_label(o)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<ControlName>>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_ordering(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Outer-to-inner layer orderings; an empty ordering is free evolution.
    #[serde(with = "ordering_strings")]
    pub orderings: Vec<Vec<ControlName>>,
    pub n_values: Vec<usize>,
    pub total_time: f64,
    pub n_models: usize,
    pub n_states: usize,
    pub rule: PulseRule,
    pub master_seed: u64,
    pub basis: BasisChoice,
    pub state_kind: StateKind,
    pub n_spins: usize,
    pub bath: BathInit,
    pub coincidence: Coincidence,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            orderings: Vec::new(),
            n_values: (1..=10).collect(),
            total_time: 0.1,
            n_models: 10,
            n_states: 10,
            rule: PulseRule::Udd,
            master_seed: 1,
            basis: BasisChoice::Default,
            state_kind: StateKind::Superposition,
            n_spins: DEFAULT_SPINS,
            bath: BathInit::Haar,
            coincidence: Coincidence::InnerFirst,
        }
    }
}

/// All orderings of `items`, in lexicographic order of positions.
pub fn permutations(items: &[ControlName]) -> Vec<Vec<ControlName>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fourlayer,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fourlayer];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fourlayer => "fourlayer",
        }
    }

    pub fn config(self) -> SweepConfig {
        use ControlName::*;
        let base = SweepConfig::default();
        match self {
            Preset::Fig1 => SweepConfig { orderings: permutations(&[Xphi, X1, X0]), ..base },
            Preset::Fig2 => SweepConfig { orderings: permutations(&[Xphi, X1, X0]), rule: PulseRule::Periodic, ..base },
            Preset::Fig3 => SweepConfig { orderings: permutations(&[X01, X1, Xphi]), ..base },
            Preset::Fourlayer => SweepConfig {
                orderings: vec![vec![Z4, Z3, Z2, Z1], vec![Z4, Z1, Z2, Z3], vec![Z4, Z2, Z3, Z1]],
                n_values: (1..=6).collect(),
                basis: BasisChoice::Local,
                state_kind: StateKind::Haar,
                ..base
            },
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}`")))
    }
}

/// One CSV row: statistics of `d` over all runs of one `(ordering, N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ordering: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub rule: PulseRule,
    pub mean_d: f64,
    pub geo_mean_d: f64,
    /// Sample standard deviation (0 for a single run).
    pub std_d: f64,
    pub min_d: f64,
    pub max_d: f64,
    pub runs: usize,
    /// Distinct pulse instants in one run.
    pub pulses_total: usize,
}

pub const CSV_HEADER: &str = "ordering,N,rule,mean_d,geo_mean_d,std_d,min_d,max_d,runs,pulses_total";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Worst invariant violations seen across every run.
    pub hygiene: Hygiene,
}

impl SweepResult {
    pub fn row(&self, ordering: &str, n: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.ordering == ordering && r.n == n)
    }

    /// `(N, mean_d)` for one ordering, in row order.
    pub fn curve(&self, ordering: &str) -> Vec<(usize, f64)> {
        self.rows.iter().filter(|r| r.ordering == ordering).map(|r| (r.n, r.mean_d)).collect()
    }

    /// Orderings in first-appearance order.
    pub fn orderings(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.ordering.as_str()) {
                out.push(&r.ordering);
            }
        }
        out
    }

    /// Plain-text grid of `mean_d`, one line per ordering and one column per `N`.
    pub fn table(&self) -> String {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        let mut out = format!("{:<14}", "ordering");
        for n in &ns {
            out += &format!("{:>10}", format!("N={n}"));
        }
        out.push('\n');
        for o in self.orderings() {
            out += &format!("{o:<14}");
            for &n in &ns {
                match self.row(o, n) {
                    Some(r) => out += &format!("{:>10.2e}", r.mean_d),
                    None => out += &format!("{:>10}", "-"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Reads rows written by [`SweepResult::write_csv`], checking the header.
pub fn read_csv<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header `{header}`")));
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.n_models == 0 || cfg.n_states == 0 {
        return Err(Error::Config("models and states must be positive".into()));
    }
    if cfg.orderings.is_empty() {
        return Err(Error::Config("no orderings given".into()));
    }
    if cfg.n_values.is_empty() || cfg.n_values.contains(&0) {
        return Err(Error::Config("pulse counts must be positive".into()));
    }
    if !cfg.total_time.is_finite() || cfg.total_time < 0.0 {
        return Err(Error::InvalidDuration(cfg.total_time));
    }
    Ok(())
}

fn system_state(cfg: &SweepConfig, j: usize) -> SystemState {
    let basis = cfg.basis.convention();
    let seed = derive_seed(cfg.master_seed, tag::STATE, 0, j as u64);
    match cfg.state_kind {
        StateKind::Superposition => random_protected_state(seed, &basis),
        StateKind::Haar => random_haar_state(seed),
        StateKind::Basis0 => SystemState::label(0, &basis),
    }
}

/// The `n_models` random models of a config.
pub fn models(cfg: &SweepConfig) -> Result<Vec<SpinBathModel>> {
    (0..cfg.n_models)
        .into_par_iter()
        .map(|i| SpinBathModel::random(cfg.n_spins, derive_seed(cfg.master_seed, tag::MODEL, i as u64, 0)))
        .collect()
}

struct Stats {
    mean: f64,
    geo: f64,
    std: f64,
    min: f64,
    max: f64,
}

fn stats(d: &[f64]) -> Stats {
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let geo = if d.iter().any(|&x| x <= 0.0) { 0.0 } else { (d.iter().map(|x| x.ln()).sum::<f64>() / n).exp() };
    let std = if d.len() > 1 { (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Stats { mean, geo, std, min, max }
}

/// Runs every `(ordering, N, model, state)` combination and aggregates per
/// `(ordering, N)`. The result does not depend on the thread count.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    validate(cfg)?;
    let basis = cfg.basis.convention();
    let models = models(cfg)?;
    let states: Vec<SystemState> = (0..cfg.n_states).map(|j| system_state(cfg, j)).collect();

    let mut rows = Vec::new();
    let mut hygiene = Hygiene::default();
    for ordering in &cfg.orderings {
        let ns: &[usize] = if ordering.is_empty() { &cfg.n_values[..1] } else { &cfg.n_values };
        for &n in ns {
            let schedule = LayeredSchedule::uniform(ordering, n, cfg.rule, cfg.total_time)?.with_coincidence(cfg.coincidence);
            let events = flatten(&schedule);
            let pulses = events.pulse_matrices(&basis);
            let jobs: Vec<(usize, usize)> = (0..cfg.n_models).flat_map(|i| (0..cfg.n_states).map(move |j| (i, j))).collect();
            let results: Vec<(f64, Hygiene)> = jobs
                .par_iter()
                .map(|&(i, j)| {
                    let seeds = RunSeeds {
                        bath: derive_seed(cfg.master_seed, tag::BATH, i as u64, j as u64),
                        state: derive_seed(cfg.master_seed, tag::STATE, 0, j as u64),
                    };
                    run_events(&models[i], &events, &pulses, &states[j], seeds, cfg.bath)
                })
                .collect::<Result<_>>()?;
            let d: Vec<f64> = results.iter().map(|r| r.0).collect();
            hygiene = results.iter().fold(hygiene, |h, r| h.merge(r.1));
            let s = stats(&d);
            rows.push(SweepRow {
                ordering: ordering_label(ordering),
                n: if ordering.is_empty() { 0 } else { n },
                rule: cfg.rule,
                mean_d: s.mean,
                geo_mean_d: s.geo,
                std_d: s.std,
                min_d: s.min,
                max_d: s.max,
                runs: d.len(),
                pulses_total: events.pulse_instants(),
            });
        }
    }
    Ok(SweepResult { rows, hygiene })
}

/// [`sweep`] restricted to four-layer schemes of the local `Z` operators on
/// Haar-random system states.
pub fn four_layer_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    use ControlName::*;
    if cfg.basis != BasisChoice::Local {
        return Err(Error::Config("four-layer sweeps need the local basis".into()));
    }
    if cfg.state_kind != StateKind::Haar {
        return Err(Error::Config("four-layer sweeps need Haar-random system states".into()));
    }
    for o in &cfg.orderings {
        let mut sorted = o.clone();
        sorted.sort();
        if sorted != [Z1, Z2, Z3, Z4] {
            return Err(Error::Config(format!("`{}` is not an ordering of Z1..Z4", ordering_label(o))));
        }
    }
    sweep(cfg)
}

/// `k` points spaced evenly in `log(t)` from `a` to `b` inclusive.
pub fn log_spaced(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..k).map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (k - 1) as f64).exp()).collect(),
    }
}

/// Least-squares `(slope, intercept)` of `y` against `x`.
pub fn linear_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Values of `d` at or below this are treated as numerical noise in fits.
pub const NOISE_FLOOR: f64 = 1e-14;

/// Result of [`fit_order`].
#[derive(Clone, Debug, PartialEq)]
pub struct OrderFit {
    /// `(T, mean_d)` for every grid point, including ones below the floor.
    pub points: Vec<(f64, f64)>,
    /// `(slope, intercept)` in natural logs; `None` when fewer than two points
    /// clear [`NOISE_FLOOR`].
    pub fit: Option<(f64, f64)>,
    pub hygiene: Hygiene,
}

impl OrderFit {
    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.0)
    }
}

impl std::fmt::Display for OrderFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.fit {
            Some((slope, _)) => write!(f, "slope {slope:.4}"),
            None => write!(f, "below noise floor"),
        }
    }
}

/// Slope of `log mean_d` against `log T` for one ordering and pulse count,
/// averaging over the config's models and states at each `T`.
pub fn fit_order(base: &SweepConfig, ordering: &[ControlName], n: usize, t_values: &[f64]) -> Result<OrderFit> {
    let mut points = Vec::with_capacity(t_values.len());
    let mut hygiene = Hygiene::default();
    for &t in t_values {
        let cfg = SweepConfig { orderings: vec![ordering.to_vec()], n_values: vec![n], total_time: t, ..base.clone() };
        let r = sweep(&cfg)?;
        hygiene = hygiene.merge(r.hygiene);
        points.push((t, r.rows[0].mean_d));
    }
    let logs: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > NOISE_FLOOR && p.0 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    Ok(OrderFit { fit: linear_fit(&logs), points, hygiene })
}

/// Least-squares slope of `log₁₀ mean_d` against `N` over `n_lo..=n_hi`.
pub fn slope_vs_n(result: &SweepResult, ordering: &str, n_lo: usize, n_hi: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = result
        .curve(ordering)
        .into_iter()
        .filter(|&(n, d)| n >= n_lo && n <= n_hi && d > 0.0)
        .map(|(n, d)| (n as f64, d.log10()))
        .collect();
    linear_fit(&pts).map(|f| f.0)
}
