//! Routes of single-quantum transitions linking every non-target level.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::spin::{dim_of, level_of, LevelIndex};

/// One selectively excited transition of a cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CascadeStep {
    pub from: LevelIndex,
    pub to: LevelIndex,
    /// Spin (1-based) whose bit differs between the two levels.
    pub spin: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeSpec {
    pub n_spins: usize,
    pub target: LevelIndex,
    pub steps: Vec<CascadeStep>,
}

impl CascadeSpec {
    /// Builds a cascade from a chain of bitstrings, deriving each step's spin.
    pub fn from_chain(target: &str, chain: &[&str]) -> Result<Self> {
        let n = target.len();
        let target = level_of(target)?;
        let levels = chain
            .iter()
            .map(|b| crate::spin::level_of_n(b, n))
            .collect::<Result<Vec<_>>>()?;
        let steps = levels
            .windows(2)
            .map(|w| CascadeStep {
                from: w[0],
                to: w[1],
                spin: flipped_spin(w[0], w[1], n).unwrap_or(0),
            })
            .collect();
        Ok(Self {
            n_spins: n,
            target,
            steps,
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Non-target levels in index order.
    pub fn non_target_levels(&self) -> Vec<LevelIndex> {
        (0..(1usize << self.n_spins))
            .map(LevelIndex::from_zero_based)
            .filter(|l| *l != self.target)
            .collect()
    }
}

impl fmt::Display for CascadeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(
                f,
                "|{}>-|{}>",
                s.from.bits(self.n_spins),
                s.to.bits(self.n_spins)
            )?;
        }
        Ok(())
    }
}

/// The single spin whose bit differs between `a` and `b`, if exactly one does.
pub fn flipped_spin(a: LevelIndex, b: LevelIndex, n_spins: usize) -> Option<usize> {
    let diff = a.zero_based() ^ b.zero_based();
    if diff.count_ones() != 1 {
        return None;
    }
    Some(n_spins - diff.trailing_zeros() as usize)
}

const TWO_SPIN_ROUTE: [usize; 3] = [0b10, 0b11, 0b01];
const THREE_SPIN_ROUTE: [usize; 7] = [0b010, 0b110, 0b100, 0b101, 0b111, 0b011, 0b001];

/// Standard cascade for `target`.
///
/// Two and three spins use the |00> and |000> routes, with other targets obtained
/// by XOR-relabelling every level with the target bits. Larger systems walk the
/// reflected Gray code (also XOR-relabelled), which visits every non-target level
/// once with single bit flips.
pub fn default_cascade(n_spins: usize, target: LevelIndex) -> Result<CascadeSpec> {
    let dim = dim_of(n_spins)?;
    LevelIndex::new(target.value(), n_spins)?;
    let t = target.zero_based();
    let route: Vec<usize> = match n_spins {
        1 => vec![],
        2 => TWO_SPIN_ROUTE.to_vec(),
        3 => THREE_SPIN_ROUTE.to_vec(),
        _ => (1..dim).map(|i| i ^ (i >> 1)).collect(),
    };
    let levels: Vec<LevelIndex> = route
        .into_iter()
        .map(|s| LevelIndex::from_zero_based(s ^ t))
        .collect();
    let steps = levels
        .windows(2)
        .map(|w| CascadeStep {
            from: w[0],
            to: w[1],
            spin: flipped_spin(w[0], w[1], n_spins).expect("routes flip one bit"),
        })
        .collect();
    Ok(CascadeSpec {
        n_spins,
        target,
        steps,
    })
}

/// First constraint a cascade violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CascadeViolation {
    OutOfRange {
        step: usize,
    },
    MultiBitFlip {
        step: usize,
    },
    WrongSpin {
        step: usize,
        declared: usize,
        actual: usize,
    },
    TouchesTarget {
        step: usize,
    },
    Disconnected {
        step: usize,
    },
    Revisits {
        step: usize,
        level: usize,
    },
    Coverage {
        missing: Vec<usize>,
    },
}

impl fmt::Display for CascadeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OutOfRange { step } => write!(f, "step {step}: level out of range"),
            Self::MultiBitFlip { step } => {
                write!(
                    f,
                    "step {step}: flips more than one bit (not a resolvable line)"
                )
            }
            Self::WrongSpin {
                step,
                declared,
                actual,
            } => write!(
                f,
                "step {step}: declared spin {declared} but spin {actual} flips"
            ),
            Self::TouchesTarget { step } => write!(f, "step {step}: touches the target level"),
            Self::Disconnected { step } => {
                write!(
                    f,
                    "step {step}: does not continue the path from the previous step"
                )
            }
            Self::Revisits { step, level } => write!(f, "step {step}: revisits level {level}"),
            Self::Coverage { missing } => write!(f, "coverage: levels {missing:?} not visited"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeReport {
    pub violation: Option<CascadeViolation>,
}

impl CascadeReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::Input(format!("invalid cascade: {v}"))),
        }
    }
}

/// Checks single-bit flips, path connectivity, target exclusion and coverage.
/// Steps are numbered from 1 in the report.
pub fn validate_cascade(spec: &CascadeSpec) -> CascadeReport {
    let fail = |v| CascadeReport { violation: Some(v) };
    let n = spec.n_spins;
    let Ok(dim) = dim_of(n) else {
        return fail(CascadeViolation::OutOfRange { step: 0 });
    };
    if spec.target.value() > dim {
        return fail(CascadeViolation::OutOfRange { step: 0 });
    }
    let mut visited = BTreeSet::new();
    let mut tail: Option<LevelIndex> = None;
    for (i, s) in spec.steps.iter().enumerate() {
        let step = i + 1;
        if s.from.value() > dim || s.to.value() > dim {
            return fail(CascadeViolation::OutOfRange { step });
        }
        let Some(actual) = flipped_spin(s.from, s.to, n) else {
            return fail(CascadeViolation::MultiBitFlip { step });
        };
        if s.spin != actual {
            return fail(CascadeViolation::WrongSpin {
                step,
                declared: s.spin,
                actual,
            });
        }
        if s.from == spec.target || s.to == spec.target {
            return fail(CascadeViolation::TouchesTarget { step });
        }
        let next = match tail {
            None => {
                visited.insert(s.from);
                s.to
            }
            Some(t) if s.from == t => s.to,
            Some(t) if s.to == t => s.from,
            Some(_) => return fail(CascadeViolation::Disconnected { step }),
        };
        if !visited.insert(next) {
            return fail(CascadeViolation::Revisits {
                step,
                level: next.value(),
            });
        }
        tail = Some(next);
    }
    let missing: Vec<usize> = spec
        .non_target_levels()
        .into_iter()
        .filter(|l| !visited.contains(l) && dim > 2)
        .map(|l| l.value())
        .collect();
    if !missing.is_empty() {
        return fail(CascadeViolation::Coverage { missing });
    }
    CascadeReport { violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(spec: &CascadeSpec) -> Vec<String> {
        spec.steps
            .iter()
            .map(|s| format!("{}-{}", s.from.bits(spec.n_spins), s.to.bits(spec.n_spins)))
            .collect()
    }

    #[test]
    fn two_spin_routes() {
        let c = default_cascade(2, level_of("00").unwrap()).unwrap();
        assert_eq!(chain(&c), ["10-11", "11-01"]);
        assert_eq!(c.steps[0].spin, 2);
        assert_eq!(c.steps[1].spin, 1);
        let c = default_cascade(2, level_of("11").unwrap()).unwrap();
        assert_eq!(chain(&c), ["01-00", "00-10"]);
        let c = default_cascade(2, level_of("01").unwrap()).unwrap();
        assert_eq!(chain(&c), ["11-10", "10-00"]);
        let c = default_cascade(2, level_of("10").unwrap()).unwrap();
        assert_eq!(chain(&c), ["00-01", "01-11"]);
    }

    #[test]
    fn three_spin_route() {
        let c = default_cascade(3, level_of("000").unwrap()).unwrap();
        assert_eq!(
            chain(&c),
            ["010-110", "110-100", "100-101", "101-111", "111-011", "011-001"]
        );
        assert!(validate_cascade(&c).is_valid());
    }

    #[test]
    fn all_defaults_validate() {
        for n in 1..=5 {
            for t in 0..(1usize << n) {
                let c = default_cascade(n, LevelIndex::from_zero_based(t)).unwrap();
                assert_eq!(c.len(), (1usize << n).saturating_sub(2));
                assert!(
                    validate_cascade(&c).is_valid(),
                    "n={n} t={t}: {:?}",
                    validate_cascade(&c)
                );
            }
        }
    }

    #[test]
    fn detects_violations() {
        let two_bit = CascadeSpec::from_chain("01", &["00", "11", "10"]).unwrap();
        assert_eq!(
            validate_cascade(&two_bit).violation,
            Some(CascadeViolation::MultiBitFlip { step: 1 })
        );
        let short =
            CascadeSpec::from_chain("000", &["010", "110", "100", "101", "111", "011"]).unwrap();
        assert_eq!(
            validate_cascade(&short).violation,
            Some(CascadeViolation::Coverage { missing: vec![2] })
        );
        let through_target = CascadeSpec::from_chain("00", &["10", "00", "01"]).unwrap();
        assert_eq!(
            validate_cascade(&through_target).violation,
            Some(CascadeViolation::TouchesTarget { step: 1 })
        );
        let mut broken = default_cascade(3, level_of("000").unwrap()).unwrap();
        broken.steps.swap(2, 4);
        assert!(matches!(
            validate_cascade(&broken).violation,
            Some(CascadeViolation::Disconnected { .. })
        ));
        let mut wrong = default_cascade(2, level_of("00").unwrap()).unwrap();
        wrong.steps[0].spin = 1;
        assert!(matches!(
            validate_cascade(&wrong).violation,
            Some(CascadeViolation::WrongSpin { .. })
        ));
    }

    #[test]
    fn reversed_steps_still_form_a_path() {
        let c = CascadeSpec::from_chain("11", &["10", "00", "01"]).unwrap();
        assert!(validate_cascade(&c).is_valid());
    }
}
