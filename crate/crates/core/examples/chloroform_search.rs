//! Prepares |00> on 13C-labelled chloroform and runs the 1-SAT search on it.

use ppsim::hogg::{hogg_run, OneSatFormula};
use ppsim::prep::{prepare_pseudo_pure, PrepareOptions};
use ppsim::presets::preset;
use ppsim::spin::LevelIndex;
use ppsim::SpinSystem;

fn main() -> ppsim::Result<()> {
    let system: SpinSystem = preset("chloroform")?;
    let prep = prepare_pseudo_pure(
        &system,
        LevelIndex::from_zero_based(0),
        None,
        &PrepareOptions::default(),
    )?;
    println!("angles (deg): {:?}", prep.angles_deg);
    println!("diagonal:     {:?}", prep.state.diagonal());

    let formula: OneSatFormula = "V1&V2".parse()?;
    let out = hogg_run(&prep.state, &formula)?;
    println!(
        "{formula} -> |{}>, weights {:?}",
        out.most_likely(),
        out.probabilities
    );
    Ok(())
}
