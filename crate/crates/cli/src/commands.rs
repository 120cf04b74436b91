use std::path::Path;

use serde_json::{json, Value};

use ppsim::dsl::{compile, parse, run};
use ppsim::hogg::{hogg_run, OneSatFormula};
use ppsim::io::{read_file, state_from_json, system_from_json, system_to_value};
use ppsim::prep::{
    default_cascade, prepare_pseudo_pure, solve_angles, PrepareOptions, SolveOptions,
};
use ppsim::presets::{preset, presets, PRESET_NAMES};
use ppsim::spectro::{
    readout_spectrum, reconstruct, simulate_measurements, tomography_settings, ReadoutPulse,
};
use ppsim::spin::{level_of_n, thermal_deviation, LevelIndex};
use ppsim::{DeviationMatrix, SpinSystem};

use crate::args::{
    HoggArgs, PlotArgs, PrepareArgs, PulseArg, RunArgs, SolveArgs, SpectrumArgs, SystemArg,
    TomoArgs,
};
use crate::error::{CliError, CliResult};
use crate::render::{solver_value, spectra_svg, spectrum_csv, state_value, weights_value};

pub const SEED_VAR: &str = "PPSIM_SEED";

/// Primary output of a subcommand.
pub enum Output {
    Json(Value),
    Text(String),
}

fn read(path: &Path) -> CliResult<String> {
    read_file(path).map_err(|e| CliError::from(e).with_context("path", path.display().to_string()))
}

fn load_system(arg: &SystemArg) -> CliResult<SpinSystem> {
    let path = Path::new(&arg.system);
    if path.is_file() {
        return system_from_json(&read(path)?)
            .map_err(|e| CliError::from(e).with_context("path", arg.system.clone()));
    }
    if PRESET_NAMES.contains(&arg.system.as_str()) {
        return Ok(preset(&arg.system)?);
    }
    Err(CliError::input(
        format!(
            "`{}` is neither a readable file nor a preset ({})",
            arg.system,
            PRESET_NAMES.join(", ")
        ),
        json!({"path": arg.system}),
    ))
}

fn target_level(bits: &str, system: &SpinSystem) -> CliResult<LevelIndex> {
    level_of_n(bits, system.n_spins())
        .map_err(|e| CliError::from(e).with_context("target", bits.to_string()))
}

/// `thermal`, or a state JSON file matching the system size.
fn load_state(spec: &str, system: &SpinSystem) -> CliResult<DeviationMatrix> {
    let rho = if spec == "thermal" {
        thermal_deviation(system)
    } else {
        let path = Path::new(spec);
        state_from_json(&read(path)?)
            .map_err(|e| CliError::from(e).with_context("path", spec.to_string()))?
    };
    if rho.n_spins() != system.n_spins() {
        return Err(CliError::input(
            format!(
                "state has {} spins but the system has {}",
                rho.n_spins(),
                system.n_spins()
            ),
            json!({"state": spec}),
        ));
    }
    Ok(rho)
}

fn solve_options(grid: Option<usize>) -> SolveOptions {
    SolveOptions {
        grid_per_dim: grid,
        ..SolveOptions::default()
    }
}

fn pulse(p: PulseArg) -> ReadoutPulse {
    match p {
        PulseArg::None => ReadoutPulse::None,
        PulseArg::X90 => ReadoutPulse::X90,
        PulseArg::Y90 => ReadoutPulse::Y90,
    }
}

/// Seed from the flag, then the environment, then 0.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::input(
                format!("{SEED_VAR} must be a non-negative integer, got `{v}`"),
                json!({"variable": SEED_VAR}),
            )
        }),
        Err(_) => Ok(0),
    }
}

pub fn solve(a: &SolveArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let target = target_level(&a.target, &system)?;
    let cascade = default_cascade(system.n_spins(), target)?;
    let mut opts = solve_options(a.grid);
    if let Some(tol) = a.tol {
        opts.newton_tol = tol;
    }
    opts.max_angle_deg = a.max_angle;
    opts.published_seeds = !a.no_published_seeds;
    let res = solve_angles(&system, &cascade, &opts)?;
    let mut v = solver_value(&res, a.traces);
    v["target"] = json!(a.target);
    v["cascade"] = json!(cascade.to_string());
    Ok(Output::Json(v))
}

pub fn prepare(a: &PrepareArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let target = target_level(&a.target, &system)?;
    let opts = PrepareOptions {
        solve: solve_options(a.grid),
        ..PrepareOptions::default()
    };
    let prep = prepare_pseudo_pure(&system, target, a.angles.as_deref(), &opts)?;
    let mut v = state_value(&prep.state);
    v["target"] = json!(a.target);
    v["cascade"] = json!(prep.cascade.to_string());
    v["angles_deg"] = json!(prep.angles_deg);
    v["angles_source"] = json!(if prep.solver.is_some() {
        "solver"
    } else {
        "given"
    });
    v["spread"] = json!(prep.spread);
    v["pure_part"] = json!({
        "uniform_coeff": prep.pure.uniform_coeff,
        "pure_coeff": prep.pure.pure_coeff,
        "target": prep.pure.target.bits(system.n_spins()),
    });
    Ok(Output::Json(v))
}

pub fn run_program(a: &RunArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let src = read(&a.program)?;
    let program = parse(&src)
        .map_err(|e| CliError::from(e).with_context("path", a.program.display().to_string()))?;
    let seq = compile(&program, &system)
        .map_err(|e| CliError::from(e).with_context("path", a.program.display().to_string()))?;
    let n = system.n_spins();
    let rho0 = if a.initial != "thermal" && a.initial.chars().all(|c| c == '0' || c == '1') {
        DeviationMatrix::basis_state(target_level(&a.initial, &system)?, n)?
    } else {
        load_state(&a.initial, &system)?
    };
    let out = run(&seq, &rho0)?;
    let mut v = state_value(&out);
    v["statements"] = json!(program.len());
    Ok(Output::Json(v))
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let rho = load_state(&a.state, &system)?;
    let spec = readout_spectrum(&rho, a.spin, &system, pulse(a.pulse))?;
    Ok(Output::Text(spectrum_csv(&spec)))
}

pub fn tomo(a: &TomoArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let rho = load_state(&a.state, &system)?;
    let seed = resolve_seed(a.seed)?;
    let settings = tomography_settings(system.n_spins())?;
    let meas = simulate_measurements(&rho, &system, &settings, a.noise, seed)?;
    let res = reconstruct(&meas, &system)?;
    let max_rel_error = match res.clone().with_reference(&rho) {
        Ok(r) => json!(r.max_rel_error),
        Err(ppsim::Error::UndefinedMetric) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(Output::Json(json!({
        "reconstructed": state_value(&res.reconstructed),
        "residual_norm": res.residual_norm,
        "settings_used": res.settings_used,
        "max_rel_error": max_rel_error,
        "noise_sigma": a.noise,
        "seed": meas.seed,
    })))
}

pub fn plot(a: &PlotArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let rho = load_state(&a.state, &system)?;
    let spectra = (1..=system.n_spins())
        .map(|spin| readout_spectrum(&rho, spin, &system, pulse(a.pulse)))
        .collect::<ppsim::Result<Vec<_>>>()?;
    Ok(Output::Text(spectra_svg(&system, &spectra)))
}

pub fn hogg(a: &HoggArgs) -> CliResult<Output> {
    let system = load_system(&a.system)?;
    let formula = OneSatFormula::parse(&a.formula, system.n_spins())
        .map_err(|e| CliError::from(e).with_context("formula", a.formula.clone()))?;
    let rho = match &a.state {
        Some(s) => load_state(s, &system)?,
        None => {
            let zero = LevelIndex::from_zero_based(0);
            prepare_pseudo_pure(&system, zero, None, &PrepareOptions::default())?.state
        }
    };
    let out = hogg_run(&rho, &formula)?;
    Ok(Output::Json(json!({
        "formula": formula.to_string(),
        "solution": formula.solution(),
        "most_likely": out.most_likely(),
        "probabilities": weights_value(&out.probabilities),
        "uniform_coeff": out.uniform_coeff,
        "pure_coeff": out.pure_coeff,
        "rho_final": state_value(&out.rho_final),
    })))
}

pub fn list_presets() -> CliResult<Output> {
    Ok(Output::Json(Value::Array(
        presets::<f64>()
            .into_iter()
            .map(|(name, sys)| json!({"name": name, "system": system_to_value(&sys)}))
            .collect(),
    )))
}
