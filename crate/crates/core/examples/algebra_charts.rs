//! Reduction charts for every three-layer ordering of the two X schemes and the
//! symmetric Z scheme.
//!
//!     cargo run --example algebra_charts [ordering ...]

use nested_udd::algebra::{predict_chain, AlgebraContext};
use nested_udd::experiment::permutations;
use nested_udd::operators::{ordering_label, parse_ordering, BasisConvention, ControlName::*, Family};

fn main() -> nested_udd::Result<()> {
    let ctx = AlgebraContext::new(BasisConvention::standard());
    let args: Vec<String> = std::env::args().skip(1).collect();
    let orderings = if args.is_empty() {
        let mut all = permutations(&[Xphi, X1, X0]);
        all.extend(permutations(&[Xphi, X1, X01]));
        all.push(vec![Z3, Z2, Z1]);
        all.push(vec![Z4, Z3, Z2, Z1]);
        all
    } else {
        args.iter().map(|a| parse_ordering(a)).collect::<nested_udd::Result<_>>()?
    };
    for o in orderings {
        let chain = predict_chain(&ctx, &o, &ctx.full_span());
        println!("== {}  ({:?})", ordering_label(&o), chain.class());
        println!("{}", chain.render(&ctx, Family::Y));
    }
    Ok(())
}
