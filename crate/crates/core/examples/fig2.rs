//! Same orderings as `fig1`, but with equally spaced pulses in every layer.
//!
//!     cargo run --release --example fig2 [out.csv]

use nested_udd::experiment::{sweep, Preset};

fn main() -> nested_udd::Result<()> {
    let result = sweep(&Preset::Fig2.config())?;
    print!("{}", result.table());
    if let Some(path) = std::env::args().nth(1) {
        result.save(&path)?;
    }
    Ok(())
}
