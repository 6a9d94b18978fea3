//! Pulse times for single and nested layers, and the flattened event list.
//!
//!     cargo run --example timing

use nested_udd::operators::ControlName::*;
use nested_udd::schedule::{flatten, nested_times, periodic_times, udd_times, LayerSpec, LayeredSchedule, PulseRule};

fn main() -> nested_udd::Result<()> {
    for n in 1..=4 {
        let udd: Vec<String> = udd_times(n, 0.0, 1.0)?.iter().map(|t| format!("{t:.4}")).collect();
        let per: Vec<String> = periodic_times(n, 0.0, 1.0)?.iter().map(|t| format!("{t:.4}")).collect();
        println!("N={n}  udd [{}]  periodic [{}]", udd.join(", "), per.join(", "));
    }

    let layers = [LayerSpec::new(Xphi, 2, PulseRule::Udd), LayerSpec::new(X1, 2, PulseRule::Udd)];
    for (k, ts) in nested_times(&layers, 1.0)?.iter().enumerate() {
        println!("layer {k}: {} pulses, first {:.4}", ts.len(), ts[0]);
    }

    let s = LayeredSchedule::new(layers.to_vec(), 1.0)?;
    print!("\n{}", flatten(&s).to_csv());

    for n in [9, 10] {
        let ev = flatten(&LayeredSchedule::uniform(&[Xphi, X1, X0], n, PulseRule::Udd, 0.1)?);
        println!("three layers, N={n}: {} pulse instants, {} drifts", ev.pulse_instants(), ev.drift_intervals());
    }
    Ok(())
}
