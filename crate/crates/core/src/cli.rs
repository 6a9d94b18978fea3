//! `nudd` command line: timing tables, algebra charts, single runs, sweeps and
//! scaling fits.
//!
//! Exit codes: 0 success, 1 numerical fault or I/O failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::algebra::{predict_chain, AlgebraContext};
use crate::error::{Error, Result};
use crate::evolve::{run_once, BathInit, RunSeeds};
use crate::experiment::{derive_seed, fit_order, four_layer_sweep, log_spaced, sweep, tag, Preset, StateKind, SweepConfig};
use crate::model::{random_haar_state, random_protected_state, SpinBathModel};
use crate::operators::{parse_ordering, BasisChoice, ControlName, Family, SystemState};
use crate::schedule::{flatten, LayerSpec, LayeredSchedule, PulseRule};

#[derive(Parser, Debug)]
#[command(name = "nudd", version, about = "Nested Uhrig decoupling of two qubits in a spin bath")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Flattened pulse timeline as CSV.
    Timing(TimingArgs),
    /// Algebra reduction chart for a layer ordering.
    Algebra(AlgebraArgs),
    /// One evolution; prints the result as JSON.
    Run(SweepArgs),
    /// Averaged sweep over models, states and pulse counts; writes CSV.
    Sweep(SweepArgs),
    /// Log-log slope of the averaged distance against total time.
    Fit(FitArgs),
}

#[derive(Args, Debug)]
pub struct TimingArgs {
    /// Layer controls, outermost first.
    #[arg(long, required = true)]
    pub layers: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub total_time: f64,
    #[arg(long, default_value = "udd")]
    pub rule: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    Y,
    Ytilde,
    R,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Y => Family::Y,
            FamilyArg::Ytilde => Family::YTilde,
            FamilyArg::R => Family::R,
        }
    }
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    #[arg(long, required = true)]
    pub ordering: String,
    #[arg(long, default_value = "default")]
    pub basis: String,
    /// Labels used in the chart.
    #[arg(long, value_enum, default_value = "y")]
    pub family: FamilyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags shared by `run` and `sweep`. Unset flags fall back to the config
/// file, then the preset, then built-in defaults.
#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Orderings, outermost first; repeat the flag for several.
    #[arg(long)]
    pub ordering: Vec<String>,
    /// Alias of `--ordering` for a single ordering.
    #[arg(long)]
    pub layers: Option<String>,
    /// Pulse counts: `4`, `1,2,3` or `1..10`.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long = "T")]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long)]
    pub models: Option<usize>,
    #[arg(long)]
    pub states: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub basis: Option<String>,
    /// superposition | haar | basis0
    #[arg(long)]
    pub state_kind: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = 0.01)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t_max: f64,
    #[arg(long, default_value_t = 8)]
    pub points: usize,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Config file: the flag names as JSON keys.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<String>,
    ordering: Option<OneOrMany<String>>,
    layers: Option<String>,
    n: Option<OneOrMany<usize>>,
    #[serde(rename = "T")]
    total_time: Option<f64>,
    rule: Option<String>,
    models: Option<usize>,
    states: Option<usize>,
    seed: Option<u64>,
    basis: Option<String>,
    state_kind: Option<String>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
}

/// `4`, `1,2,3` or `1..10` (inclusive).
pub fn parse_n_values(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("bad pulse counts `{s}`"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a == 0 || b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let v: Vec<usize> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if v.is_empty() || v.contains(&0) {
        return Err(bad());
    }
    Ok(v)
}

/// Resolved settings for `run`, `sweep` and `fit`.
#[derive(Debug)]
pub struct Resolved {
    pub config: SweepConfig,
    pub preset: Option<Preset>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl SweepArgs {
    /// Applies the preset, then the config file, then the flags.
    pub fn resolve(&self) -> Result<Resolved> {
        let file: ConfigFile = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => ConfigFile::default(),
        };
        let preset = self.preset.as_deref().or(file.preset.as_deref()).map(str::parse::<Preset>).transpose()?;
        let mut cfg = preset.map(Preset::config).unwrap_or_default();

        let mut orderings: Option<Vec<String>> = file.ordering.map(OneOrMany::into_vec);
        if let Some(l) = file.layers {
            orderings = Some(vec![l]);
        }
        if !self.ordering.is_empty() {
            orderings = Some(self.ordering.clone());
        }
        if let Some(l) = &self.layers {
            orderings = Some(vec![l.clone()]);
        }
        if let Some(os) = orderings {
            cfg.orderings = os.iter().map(|o| parse_ordering(o)).collect::<Result<_>>()?;
        }
        if let Some(n) = file.n {
            cfg.n_values = n.into_vec();
        }
        if let Some(n) = &self.n {
            cfg.n_values = parse_n_values(n)?;
        }
        if let Some(t) = self.total_time.or(file.total_time) {
            cfg.total_time = t;
        }
        if let Some(r) = self.rule.as_deref().or(file.rule.as_deref()) {
            cfg.rule = r.parse()?;
        }
        if let Some(m) = self.models.or(file.models) {
            cfg.n_models = m;
        }
        if let Some(s) = self.states.or(file.states) {
            cfg.n_states = s;
        }
        if let Some(s) = self.seed.or(file.seed) {
            cfg.master_seed = s;
        }
        if let Some(b) = self.basis.as_deref().or(file.basis.as_deref()) {
            cfg.basis = b.parse()?;
        }
        if let Some(k) = self.state_kind.as_deref().or(file.state_kind.as_deref()) {
            cfg.state_kind = k.parse()?;
        }
        let jobs = self.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        Ok(Resolved { config: cfg, preset, out: self.out.clone().or(file.out), jobs })
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_timing(a: &TimingArgs) -> Result<()> {
    let rule: PulseRule = a.rule.parse()?;
    let layers = parse_ordering(&a.layers)?.into_iter().map(|c| LayerSpec::new(c, a.n, rule)).collect();
    let s = LayeredSchedule::new(layers, a.total_time)?;
    emit(a.out.as_deref(), &flatten(&s).to_csv())
}

fn cmd_algebra(a: &AlgebraArgs) -> Result<()> {
    let basis: BasisChoice = a.basis.parse()?;
    let ordering = parse_ordering(&a.ordering)?;
    let ctx = AlgebraContext::new(basis.convention());
    let chain = predict_chain(&ctx, &ordering, &ctx.full_span());
    emit(a.out.as_deref(), &chain.render(&ctx, a.family.into()))
}

fn first_state(cfg: &SweepConfig) -> SystemState {
    let basis = cfg.basis.convention();
    let seed = derive_seed(cfg.master_seed, tag::STATE, 0, 0);
    match cfg.state_kind {
        StateKind::Superposition => random_protected_state(seed, &basis),
        StateKind::Haar => random_haar_state(seed),
        StateKind::Basis0 => SystemState::label(0, &basis),
    }
}

fn cmd_run(a: &SweepArgs) -> Result<()> {
    let r = a.resolve()?;
    let cfg = &r.config;
    let ordering: Vec<ControlName> = cfg.orderings.first().cloned().unwrap_or_default();
    let n = *cfg.n_values.first().ok_or_else(|| Error::Config("no pulse count".into()))?;
    let schedule = if ordering.is_empty() {
        LayeredSchedule::free(cfg.total_time)?
    } else {
        LayeredSchedule::uniform(&ordering, n, cfg.rule, cfg.total_time)?
    };
    let model = SpinBathModel::random(cfg.n_spins, derive_seed(cfg.master_seed, tag::MODEL, 0, 0))?;
    let seeds = RunSeeds {
        bath: derive_seed(cfg.master_seed, tag::BATH, 0, 0),
        state: derive_seed(cfg.master_seed, tag::STATE, 0, 0),
    };
    let result = run_once(&model, &schedule, &first_state(cfg), seeds, &cfg.basis.convention(), BathInit::Haar)?;
    emit(r.out.as_deref(), &(serde_json::to_string_pretty(&result)? + "\n"))
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let r = a.resolve()?;
    let result = with_jobs(r.jobs, || {
        if r.preset == Some(Preset::Fourlayer) {
            four_layer_sweep(&r.config)
        } else {
            sweep(&r.config)
        }
    })??;
    match &r.out {
        Some(p) => result.save(p),
        None => result.write_csv(std::io::stdout().lock()),
    }
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let r = a.sweep.resolve()?;
    if !(a.t_min > 0.0 && a.t_max > a.t_min) || a.points < 2 {
        return Err(Error::Config("fit needs 0 < t-min < t-max and at least two points".into()));
    }
    let ordering = r.config.orderings.first().cloned().ok_or_else(|| Error::Config("fit needs --ordering".into()))?;
    let n = *r.config.n_values.first().ok_or_else(|| Error::Config("no pulse count".into()))?;
    let ts = log_spaced(a.t_min, a.t_max, a.points);
    let fit = with_jobs(r.jobs, || fit_order(&r.config, &ordering, n, &ts))??;
    let mut text = String::from("T,mean_d\n");
    for (t, d) in &fit.points {
        text += &format!("{t},{d}\n");
    }
    text += &format!("# {fit}\n");
    emit(r.out.as_deref(), &text)
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalFault(_) | Error::EigenNoConvergence { .. } | Error::NotHermitian { .. } | Error::Io(_) | Error::Csv(_) => 1,
        _ => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Timing(a) => cmd_timing(a),
        Command::Algebra(a) => cmd_algebra(a),
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fit(a) => cmd_fit(a),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
