//! Draws a random spin-bath model, saves it as JSON, reloads it and evolves a
//! protected state under three-layer UDD with both copies.
//!
//!     cargo run --example model_json [model.json]

use nested_udd::evolve::{run_once, BathInit, RunSeeds};
use nested_udd::model::{random_protected_state, SpinBathModel};
use nested_udd::operators::{BasisConvention, ControlName::*};
use nested_udd::schedule::{LayeredSchedule, PulseRule};

fn main() -> nested_udd::Result<()> {
    let model = SpinBathModel::random(5, 42)?;
    let json = model.to_json()?;
    let path = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("nudd-model.json").display().to_string());
    std::fs::write(&path, &json)?;
    let loaded = SpinBathModel::from_json(&std::fs::read_to_string(&path)?)?;
    println!("wrote {path} ({} bytes); spectrum spans [{:.3}, {:.3}]", json.len(), loaded.eig().eigenvalues()[0], loaded.eig().eigenvalues()[31]);

    let basis = BasisConvention::standard();
    let sys = random_protected_state(7, &basis);
    let s = LayeredSchedule::uniform(&[Xphi, X1, X0], 4, PulseRule::Udd, 0.1)?;
    for m in [&model, &loaded] {
        let r = run_once(m, &s, &sys, RunSeeds { bath: 1, state: 7 }, &basis, BathInit::Haar)?;
        println!("d = {:.6e} after {} pulse instants", r.d_value, r.pulse_count);
    }
    Ok(())
}
