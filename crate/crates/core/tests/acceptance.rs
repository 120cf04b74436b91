//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppsim::dsl::{compile, parse};
use ppsim::hogg::{hogg_run, OneSatFormula};
use ppsim::prep::{
    default_cascade, prepare_pseudo_pure, pulsed_state, residual, solve_angles, validate_cascade,
    CascadeSpec, PrepareOptions, SolveOptions,
};
use ppsim::spectro::{
    readout_spectrum, reconstruct, simulate_measurements, tomography_settings, ReadoutPulse,
};
use ppsim::spin::{
    crush, evolve, expm_unitary, level_of, population_spread, thermal_deviation, CrushMode,
    LevelIndex,
};
use ppsim::{DeviationMatrix, Operator, SpinSystem};

const HOMO3_PUBLISHED: [f64; 6] = [182.02, 179.04, 229.38, 193.46, 200.28, 105.75];
const HETERO3_PUBLISHED: [f64; 6] = [201.89, 258.83, 313.40, 346.31, 295.37, 234.18];

type Criterion = (u8, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn homonuclear(n: usize) -> SpinSystem {
    SpinSystem::new(vec![1.0; n]).unwrap()
}

fn chloroform() -> SpinSystem {
    SpinSystem::new(vec![1.4048, 5.5857]).unwrap()
}

fn hetero3() -> SpinSystem {
    SpinSystem::new(vec![1.4048, 1.4048, 5.5857]).unwrap()
}

fn ground() -> LevelIndex {
    LevelIndex::from_zero_based(0)
}

fn unseeded() -> SolveOptions {
    SolveOptions {
        published_seeds: false,
        ..SolveOptions::default()
    }
}

fn prepare_options() -> PrepareOptions {
    PrepareOptions {
        solve: unseeded(),
        ..PrepareOptions::default()
    }
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn fmt_vec(v: &[f64], digits: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.digits$}")).collect();
    format!("({})", parts.join(", "))
}

/// Non-target spread over the full population range, after the crusher.
fn relative_spread(system: &SpinSystem, spec: &CascadeSpec, angles_deg: &[f64]) -> f64 {
    let rad: Vec<f64> = angles_deg.iter().map(|a| a.to_radians()).collect();
    let rho = crush(
        &pulsed_state(system, spec, &rad).unwrap(),
        CrushMode::AllOffDiagonal,
    );
    let d = rho.diagonal();
    let range =
        d.iter().cloned().fold(f64::MIN, f64::max) - d.iter().cloned().fold(f64::MAX, f64::min);
    population_spread(&rho, spec.target) / range
}

fn two_spin_root(system: &SpinSystem, want: [f64; 2], tol: f64) -> Outcome {
    let spec = default_cascade(2, ground()).unwrap();
    let (res, took) = timed(|| solve_angles(system, &spec, &unseeded()));
    let res = match res {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (root, dist) = res.nearest_root(&want).unwrap();
    let idx = res.roots.iter().position(|r| r.as_slice() == root).unwrap();
    let norm = res.residual_norms[idx];
    let pass = dist < tol && norm < 1e-10 && took < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "nearest root {} deg, max deviation {dist:.4} deg (< {tol}), residual norm {norm:.1e} (< 1e-10), {:.3} s (< 1 s)",
            fmt_vec(root, 4),
            took.as_secs_f64()
        ),
    )
}

fn criterion_1() -> Outcome {
    two_spin_root(&homonuclear(2), [77.42, 77.42], 0.05)
}

fn criterion_2() -> Outcome {
    let mut o = two_spin_root(&chloroform(), [127.13, 186.01], 0.5);
    let spec = default_cascade(2, ground()).unwrap();
    let r = residual(&[127.13, 186.01], &chloroform(), &spec).unwrap();
    let worst = r.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    o.pass &= worst < 5e-3;
    o.detail += &format!("; residual at (127.13, 186.01) max |component| {worst:.2e} (< 5e-3)");
    o
}

fn diag_check(got: &[f64], want: &[f64], tol: f64) -> (bool, f64) {
    let worst = got
        .iter()
        .zip(want)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    (worst < tol, worst)
}

fn criterion_3() -> Outcome {
    let p = match prepare_pseudo_pure(&homonuclear(2), ground(), None, &prepare_options()) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let third = 2.0 / 3.0;
    let (pass, worst) = diag_check(&p.state.diagonal(), &[2.0, -third, -third, -third], 1e-6);
    outcome(
        pass,
        format!(
            "diagonal {}, max deviation {worst:.1e} (< 1e-6)",
            fmt_vec(&p.state.diagonal(), 6)
        ),
    )
}

fn criterion_4() -> Outcome {
    let p = match prepare_pseudo_pure(&chloroform(), ground(), None, &prepare_options()) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (diag_ok, worst) = diag_check(
        &p.state.diagonal(),
        &[6.9905, -2.3303, -2.3303, -2.3303],
        1e-3,
    );
    let closed = 4.0 / 3.0 * (1.4048 + 5.5857);
    let coeff_ok =
        (p.pure.pure_coeff - 9.3208).abs() < 1e-3 && (p.pure.pure_coeff - closed).abs() < 1e-3;
    outcome(
        diag_ok && coeff_ok,
        format!(
            "diagonal {}, max deviation {worst:.1e} (< 1e-3); pure coefficient {:.5} vs 9.3208 and (4/3)(g1+g2) = {closed:.5}",
            fmt_vec(&p.state.diagonal(), 5),
            p.pure.pure_coeff
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, sys) in [
        ("homonuclear", homonuclear(2)),
        ("chloroform", chloroform()),
    ] {
        for t in 0..4 {
            let target = LevelIndex::from_zero_based(t);
            match prepare_pseudo_pure(&sys, target, None, &prepare_options()) {
                Ok(p) => {
                    let ok = p.pure.target == target && p.spread < 1e-6;
                    pass &= ok;
                    notes.push(format!(
                        "{name} |{}> spread {:.0e}",
                        target.bits(2),
                        p.spread
                    ));
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("{name} |{}>: {e}", target.bits(2)));
                }
            }
        }
    }
    outcome(pass, format!("{} (each < 1e-6)", notes.join(", ")))
}

fn three_spin(system: &SpinSystem, published: &[f64; 6]) -> Outcome {
    let spec = default_cascade(3, ground()).unwrap();
    let rel = relative_spread(system, &spec, published);
    let (res, took) = timed(|| solve_angles(system, &spec, &unseeded()));
    let (root_ok, solver_note) = match res {
        Ok(r) => {
            let ok = r.best_residual < 1e-8 && took < Duration::from_secs(60);
            (
                ok,
                format!(
                    "solver: {} roots from {} starts, best {} deg at residual {:.1e} (< 1e-8), {:.2} s (< 60 s)",
                    r.roots.len(),
                    r.starts_tried,
                    fmt_vec(r.best_root().unwrap(), 2),
                    r.best_residual,
                    took.as_secs_f64()
                ),
            )
        }
        Err(e) => (false, format!("solver: {e}")),
    };
    outcome(
        rel <= 0.01 && root_ok,
        format!(
            "published vector spread {:.4}% of population range (<= 1%); {solver_note}",
            100.0 * rel
        ),
    )
}

fn criterion_6() -> Outcome {
    three_spin(&homonuclear(3), &HOMO3_PUBLISHED)
}

fn criterion_7() -> Outcome {
    three_spin(&hetero3(), &HETERO3_PUBLISHED)
}

fn criterion_8() -> Outcome {
    let p = match prepare_pseudo_pure(&chloroform(), ground(), None, &prepare_options()) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut pass = true;
    let mut notes = Vec::new();
    for text in ["V1&V2", "V1&!V2", "!V1&V2", "!V1&!V2"] {
        let f: OneSatFormula = text.parse().unwrap();
        let sol = f.solution().unwrap();
        let idx = level_of(&sol).unwrap().zero_based();
        match hogg_run(&p.state, &f) {
            Ok(out) => {
                let err = (out.probabilities[idx] - 1.0).abs();
                pass &= err < 1e-10;
                notes.push(format!("{text} -> |{sol}> weight error {err:.0e}"));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{text}: {e}"));
            }
        }
    }
    outcome(pass, format!("{} (each < 1e-10)", notes.join(", ")))
}

fn random_deviation(rng: &mut ChaCha8Rng) -> DeviationMatrix {
    let a = DMatrix::from_fn(4, 4, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut h = (&a + a.adjoint()) * Complex::new(0.5, 0.0);
    let mean = h.trace() / Complex::new(4.0, 0.0);
    for i in 0..4 {
        h[(i, i)] -= mean;
    }
    DeviationMatrix::from_matrix(2, h).unwrap()
}

fn criterion_9() -> Outcome {
    let sys = chloroform();
    let settings = tomography_settings(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let worst = (0..100)
        .map(|_| {
            let rho = random_deviation(&mut rng);
            let m = simulate_measurements(&rho, &sys, &settings, 0.0, 0).unwrap();
            reconstruct(&m, &sys)
                .unwrap()
                .with_reference(&rho)
                .unwrap()
                .max_rel_error
                .unwrap()
        })
        .fold(0.0_f64, f64::max);
    let prepared = prepare_pseudo_pure(&sys, ground(), None, &prepare_options())
        .unwrap()
        .state;
    let mut errs: Vec<f64> = (0..200u64)
        .map(|seed| {
            let m = simulate_measurements(&prepared, &sys, &settings, 0.01, seed).unwrap();
            reconstruct(&m, &sys)
                .unwrap()
                .with_reference(&prepared)
                .unwrap()
                .max_rel_error
                .unwrap()
        })
        .collect();
    errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (errs[99] + errs[100]);
    outcome(
        worst < 1e-10 && (0.005..=0.05).contains(&median),
        format!(
            "noiseless worst max_rel_error {worst:.1e} over 100 random states (< 1e-10); sigma 0.01 median {:.3}% over 200 seeds (in [0.5%, 5%])",
            100.0 * median
        ),
    )
}

fn criterion_10() -> Outcome {
    let sys = chloroform()
        .with_j_hz(vec![vec![0.0, 214.95], vec![214.95, 0.0]])
        .unwrap();
    let prepared = prepare_pseudo_pure(&sys, ground(), None, &prepare_options())
        .unwrap()
        .state;
    let thermal = thermal_deviation(&sys);
    let mut pass = true;
    let mut oracle_err = 0.0_f64;
    let mut notes = Vec::new();
    for spin in 1..=2 {
        let pp = readout_spectrum(&prepared, spin, &sys, ReadoutPulse::X90).unwrap();
        let th = readout_spectrum(&thermal, spin, &sys, ReadoutPulse::X90).unwrap();
        let nonzero = pp
            .lines
            .iter()
            .filter(|l| l.amplitude.norm() > 1e-9)
            .count();
        let mags: Vec<f64> = th.lines.iter().map(|l| l.amplitude.norm()).collect();
        let equal = (mags[0] - mags[1]).abs() < 1e-10 && mags[0] > 0.0;
        pass &= nonzero == 1 && equal;
        notes.push(format!(
            "spin {spin}: {nonzero} line(s) prepared, thermal |a| = {:.4}, {:.4}",
            mags[0], mags[1]
        ));
        // x rotation of a diagonal state: amplitude on (m, k) is -i (rho_mm - rho_kk).
        for (rho, spec) in [(&prepared, &pp), (&thermal, &th)] {
            for l in &spec.lines {
                let (m, k) = l.transition;
                let want = Complex::new(0.0, -(rho.population(m) - rho.population(k)));
                oracle_err = oracle_err.max((l.amplitude - want).norm());
            }
        }
    }
    pass &= oracle_err < 1e-10;
    outcome(
        pass,
        format!(
            "{}; closed-form amplitude error {oracle_err:.1e} (< 1e-10)",
            notes.join("; ")
        ),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut unitarity = 0.0_f64;
    let mut herm = 0.0_f64;
    let mut trace = 0.0_f64;
    let mut crush_ok = true;
    for _ in 0..100 {
        let h = random_deviation(&mut rng).scale(rng.gen_range(0.0..10.0));
        let u = expm_unitary(&Operator::from_matrix(2, h.matrix().clone()).unwrap()).unwrap();
        unitarity = unitarity.max(u.unitarity_error());
        let rho = random_deviation(&mut rng);
        let out = evolve(&rho, &u).unwrap();
        herm = herm.max(out.hermiticity_error());
        trace = trace.max((out.trace() - rho.trace()).abs());
        for mode in [CrushMode::AllOffDiagonal, CrushMode::CoherenceOrder] {
            let once = crush(&rho, mode);
            crush_ok &= crush(&once, mode) == once && once.trace() == rho.trace();
        }
    }
    let routes_ok = (1..=4).all(|n| {
        (0..1usize << n).all(|t| {
            validate_cascade(&default_cascade(n, LevelIndex::from_zero_based(t)).unwrap())
                .is_valid()
        })
    });
    let bad = CascadeSpec::from_chain("00", &["00", "11"]);
    let rejects = bad
        .map(|s| !validate_cascade(&s).is_valid())
        .unwrap_or(true);
    let src = "block { sel 3 4 x 127.13 ; sel 2 4 x 186.01 }\nhard all y -90\ncrush order\napply oracle V1&!V2";
    let prog = parse(src).unwrap();
    let round_trip =
        parse(&prog.to_string()).unwrap() == prog && compile(&prog, &chloroform()).is_ok();
    let took = start.elapsed();
    let pass = unitarity < 1e-12
        && herm < 1e-12
        && trace < 1e-12
        && crush_ok
        && routes_ok
        && rejects
        && round_trip;
    outcome(
        pass,
        format!(
            "unitarity {unitarity:.0e}, Hermiticity {herm:.0e}, trace {trace:.0e} (each < 1e-12); crusher idempotent: {crush_ok}; routes valid: {routes_ok}; double flip rejected: {rejects}; DSL round trip: {round_trip}; {:.2} s. Full property suites run as separate test targets",
            took.as_secs_f64()
        ),
    )
}

/// Not a criterion: the published heteronuclear vector with 346.31 read as 364.31.
fn transposed_hetero_vector() -> String {
    let spec = default_cascade(3, ground()).unwrap();
    let mut v = HETERO3_PUBLISHED;
    v[3] = 364.31;
    let rel = relative_spread(&hetero3(), &spec, &v);
    format!(
        "INFO  [7] published heteronuclear vector with beta4 = 364.31 (digit transposition of 346.31): spread {:.4}% of range ({})",
        100.0 * rel,
        if rel <= 0.01 { "would pass" } else { "would fail" }
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "homonuclear 2-spin root", criterion_1),
        (2, "heteronuclear 2-spin root", criterion_2),
        (3, "homonuclear |00> pseudo-pure diagonal", criterion_3),
        (4, "chloroform |00> pseudo-pure diagonal", criterion_4),
        (5, "all four 2-spin targets", criterion_5),
        (6, "homonuclear 3-spin", criterion_6),
        (7, "heteronuclear 3-spin (13C-13C-1H)", criterion_7),
        (8, "Hogg search on the prepared state", criterion_8),
        (9, "tomography round trip and noise", criterion_9),
        (10, "readout spectra signature", criterion_10),
        (11, "invariant suites", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} [{id}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if id == 7 {
            println!("{}", transposed_hetero_vector());
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
