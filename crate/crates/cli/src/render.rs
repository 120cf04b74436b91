use std::fmt::Write;

use serde_json::{json, Map, Value};

use ppsim::io::{matrix_to_value, round_sig};
use ppsim::prep::SolverResult;
use ppsim::spin::LevelIndex;
use ppsim::{DeviationMatrix, SpinSystem, StickSpectrum};

pub fn state_value(rho: &DeviationMatrix) -> Value {
    json!({
        "matrix": matrix_to_value(rho.matrix()),
        "diagonal": rho.diagonal(),
    })
}

pub fn solver_value(res: &SolverResult<f64>, traces: bool) -> Value {
    let mut v = json!({
        "roots_deg": res.roots,
        "residual_norms": res.residual_norms,
        "starts_tried": res.starts_tried,
        "converged_starts": res.converged.iter().filter(|c| **c).count(),
        "best_residual": res.best_residual,
    });
    if traces {
        v["traces"] = res
            .traces
            .iter()
            .map(|t| {
                json!({
                    "start_deg": t.start_deg,
                    "converged": t.converged,
                    "iterations": t.iterations,
                    "final_norm": t.final_norm,
                })
            })
            .collect();
    }
    v
}

/// Probabilities keyed by bitstring.
pub fn weights_value(weights: &[f64]) -> Value {
    let n = weights.len().trailing_zeros() as usize;
    Value::Object(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| (LevelIndex::from_zero_based(i).bits(n), json!(w)))
            .collect::<Map<_, _>>(),
    )
}

fn fmt_num(x: f64) -> String {
    round_sig(x).to_string()
}

pub fn spectrum_csv(spec: &StickSpectrum) -> String {
    let mut out = String::from("freq_hz,re,im,transition\n");
    for l in &spec.lines {
        writeln!(
            out,
            "{},{},{},{}-{}",
            fmt_num(l.freq_hz),
            fmt_num(l.amplitude.re),
            fmt_num(l.amplitude.im),
            l.transition.0,
            l.transition.1
        )
        .expect("writing to a String");
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 160.0;
const MARGIN: f64 = 30.0;

/// One panel per spin; each line is a vertical segment scaled by its magnitude.
pub fn spectra_svg(system: &SpinSystem, spectra: &[StickSpectrum]) -> String {
    let width = PANEL_W + 2.0 * MARGIN;
    let height = spectra.len() as f64 * (PANEL_H + MARGIN) + MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("writing to a String");
    let peak = spectra
        .iter()
        .flat_map(|s| s.lines.iter().map(|l| l.amplitude.norm()))
        .fold(0.0_f64, f64::max);
    for (row, spec) in spectra.iter().enumerate() {
        let top = MARGIN + row as f64 * (PANEL_H + MARGIN);
        let base = top + PANEL_H;
        let span = spec
            .lines
            .iter()
            .map(|l| l.freq_hz.abs())
            .fold(0.0_f64, f64::max)
            .max(1.0)
            * 1.25;
        let label = escape(&system.labels()[spec.spin - 1]);
        writeln!(
            out,
            r#"  <g id="spin-{}"><text x="{MARGIN}" y="{}" font-size="12">{label}</text>"#,
            spec.spin,
            top - 8.0
        )
        .expect("writing to a String");
        writeln!(
            out,
            r#"    <line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="gray"/>"#,
            MARGIN + PANEL_W
        )
        .expect("writing to a String");
        for l in &spec.lines {
            // Frequency increases to the left, as on a spectrometer.
            let x = MARGIN + PANEL_W * (0.5 - l.freq_hz / (2.0 * span));
            let h = if peak > 0.0 {
                PANEL_H * l.amplitude.norm() / peak
            } else {
                0.0
            };
            writeln!(
                out,
                r#"    <line x1="{x:.2}" y1="{base}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="2"><title>{} Hz, {}-{}</title></line>"#,
                base - h,
                fmt_num(l.freq_hz),
                l.transition.0,
                l.transition.1
            )
            .expect("writing to a String");
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}
