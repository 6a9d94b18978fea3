//! Log-log slope of the trace distance against total time for one X0 layer
//! protecting |0>, and for free evolution.
//!
//!     cargo run --release --example scaling_order

use nested_udd::experiment::{fit_order, log_spaced, StateKind, SweepConfig};
use nested_udd::operators::ControlName::X0;

fn main() -> nested_udd::Result<()> {
    let cfg = SweepConfig { n_models: 5, n_states: 1, state_kind: StateKind::Basis0, ..SweepConfig::default() };
    let ts = log_spaced(0.01, 0.1, 8);
    let free = fit_order(&cfg, &[], 1, &ts)?;
    println!("no control: {free}");
    for n in 1..=4 {
        let fit = fit_order(&cfg, &[X0], n, &ts)?;
        println!("N={n}: {fit} (N+1 = {})", n + 1);
    }
    Ok(())
}
