use std::fmt;

use crate::spin::{Axis, CrushMode};

/// `sel m k axis angle`: one line-selective pulse, angle in degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sel {
    pub from: usize,
    pub to: usize,
    pub axis: Axis,
    pub angle_deg: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardTarget {
    All,
    Spin(usize),
}

/// Built-in unitaries addressable by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitaryRef {
    Walsh,
    Mixing,
    /// Conflict-phase oracle of a two-variable 1-SAT formula, kept as source text.
    Oracle(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    /// Simultaneous selective pulses sharing one propagator.
    Block(Vec<Sel>),
    Hard {
        target: HardTarget,
        axis: Axis,
        angle_deg: f64,
    },
    Crush(CrushMode),
    Unitary(UnitaryRef),
}

/// Parsed pulse program. Equality compares statements only, not source lines.
#[derive(Clone, Debug, Default)]
pub struct PulseProgram {
    pub statements: Vec<Statement>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

impl PartialEq for PulseProgram {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl PulseProgram {
    pub fn new(statements: Vec<Statement>) -> Self {
        let lines = (1..=statements.len()).collect();
        Self { statements, lines }
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Concatenation; line numbers of `other` are kept as-is.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.statements.extend(other.statements.iter().cloned());
        out.lines.extend(other.lines.iter().copied());
        out
    }
}

impl fmt::Display for Sel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sel {} {} {} {}",
            self.from, self.to, self.axis, self.angle_deg
        )
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Block(sels) => {
                f.write_str("block { ")?;
                for (i, s) in sels.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ; ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(" }")
            }
            Statement::Hard {
                target,
                axis,
                angle_deg,
            } => match target {
                HardTarget::All => write!(f, "hard all {axis} {angle_deg}"),
                HardTarget::Spin(i) => write!(f, "hard {i} {axis} {angle_deg}"),
            },
            Statement::Crush(CrushMode::AllOffDiagonal) => f.write_str("crush"),
            Statement::Crush(CrushMode::CoherenceOrder) => f.write_str("crush order"),
            Statement::Unitary(UnitaryRef::Walsh) => f.write_str("apply walsh"),
            Statement::Unitary(UnitaryRef::Mixing) => f.write_str("apply mixing"),
            Statement::Unitary(UnitaryRef::Oracle(formula)) => write!(f, "apply oracle {formula}"),
        }
    }
}

impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
