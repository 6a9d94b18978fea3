//! Three-layer UDD over every ordering of {X01, X1, Xphi}, with the predicted
//! algebra outcome next to each simulated curve.
//!
//!     cargo run --release --example fig3 [out.csv]

use nested_udd::algebra::{predict_chain, AlgebraContext};
use nested_udd::experiment::{sweep, Preset};
use nested_udd::operators::{parse_ordering, BasisConvention};

fn main() -> nested_udd::Result<()> {
    let result = sweep(&Preset::Fig3.config())?;
    print!("{}", result.table());
    println!();

    let ctx = AlgebraContext::new(BasisConvention::standard());
    for o in result.orderings() {
        let chain = predict_chain(&ctx, &parse_ordering(o)?, &ctx.full_span());
        let last = result.curve(o).last().map(|p| p.1).unwrap_or(f64::NAN);
        println!("{o:<14} {:<24} mean_d(N=10) = {last:.2e}", format!("{:?}", chain.class()));
    }
    if let Some(path) = std::env::args().nth(1) {
        result.save(&path)?;
    }
    Ok(())
}
