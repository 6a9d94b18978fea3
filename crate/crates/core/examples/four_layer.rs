//! Four layers of single-qubit controls (local basis) protecting Haar-random
//! two-qubit states, against free evolution.
//!
//!     cargo run --release --example four_layer

use nested_udd::experiment::{four_layer_sweep, sweep, Preset, SweepConfig};

fn main() -> nested_udd::Result<()> {
    let cfg = Preset::Fourlayer.config();
    let result = four_layer_sweep(&cfg)?;
    print!("{}", result.table());

    let free = sweep(&SweepConfig { orderings: vec![vec![]], ..cfg.clone() })?;
    println!("\nno control:    {:.2e}", free.rows[0].mean_d);
    for r in result.rows.iter().filter(|r| r.n == 1) {
        println!("{:<14} N=1 uses {} pulse instants", r.ordering, r.pulses_total);
    }
    Ok(())
}
