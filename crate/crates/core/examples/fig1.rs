//! Three-layer UDD over every ordering of {X0, X1, Xphi}: mean trace distance
//! against pulses per layer, with the log-slope of each curve.
//!
//!     cargo run --release --example fig1 [out.csv]

use nested_udd::experiment::{slope_vs_n, sweep, Preset};

fn main() -> nested_udd::Result<()> {
    let result = sweep(&Preset::Fig1.config())?;
    print!("{}", result.table());
    println!();
    for o in result.orderings() {
        println!("{o:<14} slope over N=2..10: {:+.2} decades/pulse", slope_vs_n(&result, o, 2, 10).unwrap_or(f64::NAN));
    }
    if let Some(path) = std::env::args().nth(1) {
        result.save(&path)?;
        eprintln!("wrote {path}");
    }
    Ok(())
}
