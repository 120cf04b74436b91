//! Named spin systems.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::SpinSystem;

pub const PRESET_NAMES: [&str; 4] = ["chloroform", "homonuclear-2", "homonuclear-3", "hetero-3"];

fn lits<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Looks up a preset by name.
///
/// `chloroform` is the 13C-1H pair with its Larmor frequencies and J coupling; the
/// others carry only gyromagnetic ratios.
pub fn preset<T: Real>(name: &str) -> Result<SpinSystem<T>> {
    match name {
        "chloroform" => SpinSystem::new(lits(&[1.4048, 5.5857]))?
            .with_labels(labels(&["C", "H"]))?
            .with_larmor_mhz(lits(&[125.77, 500.13]))?
            .with_j_hz(vec![lits(&[0.0, 214.95]), lits(&[214.95, 0.0])]),
        "homonuclear-2" => SpinSystem::new(lits(&[1.0, 1.0]))?.with_labels(labels(&["A", "B"])),
        "homonuclear-3" => {
            SpinSystem::new(lits(&[1.0, 1.0, 1.0]))?.with_labels(labels(&["A", "B", "C"]))
        }
        "hetero-3" => SpinSystem::new(lits(&[1.4048, 1.4048, 5.5857]))?
            .with_labels(labels(&["C1", "C2", "H"])),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// All presets in [`PRESET_NAMES`] order.
pub fn presets<T: Real>() -> Vec<(&'static str, SpinSystem<T>)> {
    PRESET_NAMES
        .iter()
        .map(|&n| (n, preset(n).expect("built-in presets are valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        let c = preset::<f64>("chloroform").unwrap();
        assert_eq!(c.gamma(), &[1.4048, 5.5857]);
        assert_eq!(c.j_hz().unwrap()[0][1], 214.95);
        assert_eq!(preset::<f64>("homonuclear-2").unwrap().gamma(), &[1.0, 1.0]);
        assert_eq!(preset::<f64>("homonuclear-3").unwrap().n_spins(), 3);
        assert_eq!(preset::<f64>("hetero-3").unwrap().gamma()[2], 5.5857);
        assert!(matches!(
            preset::<f64>("water"),
            Err(Error::UnknownPreset(_))
        ));
        assert_eq!(presets::<f32>().len(), 4);
    }
}
