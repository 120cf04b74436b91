use super::ast::{HardTarget, PulseProgram, Statement, UnitaryRef};
use crate::error::{Error, Result};
use crate::hogg::{mixing, phase_oracle, walsh_hadamard, OneSatFormula};
use crate::prep::flipped_spin;
use crate::scalar::{deg_to_rad, Real};
use crate::spin::{
    crush, evolve, expm_unitary, generator, hard_generator, CrushMode, DeviationMatrix, LevelIndex,
    Operator, Pulse, SpinSystem,
};

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelEvent<T: Real> {
    Unitary(Operator<T>),
    Crush(CrushMode),
}

/// Compiled program: propagators and crusher events in execution order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSequence<T: Real> {
    pub n_spins: usize,
    pub events: Vec<ChannelEvent<T>>,
}

impl<T: Real> ChannelSequence<T> {
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.n_spins != other.n_spins {
            return Err(Error::Input(
                "sequences act on different spin counts".into(),
            ));
        }
        let mut events = self.events.clone();
        events.extend(other.events.iter().cloned());
        Ok(Self {
            n_spins: self.n_spins,
            events,
        })
    }
}

fn level(v: usize, n: usize, line: usize) -> Result<LevelIndex> {
    LevelIndex::new(v, n).map_err(|_| Error::Compile {
        line,
        message: format!("level {v} out of range 1..={} for {n} spins", 1usize << n),
    })
}

/// Lowers each statement to a propagator or crusher event.
///
/// A block becomes `exp(-i sum_k beta_k I_axis^(m_k, n_k))`; every selective
/// transition must flip exactly one spin.
pub fn compile<T: Real>(
    program: &PulseProgram,
    system: &SpinSystem<T>,
) -> Result<ChannelSequence<T>> {
    let n = system.n_spins();
    let mut events = Vec::with_capacity(program.len());
    for (idx, stmt) in program.statements.iter().enumerate() {
        let line = program.lines.get(idx).copied().unwrap_or(idx + 1);
        let event = match stmt {
            Statement::Block(sels) => {
                let mut pulses = Vec::with_capacity(sels.len());
                for s in sels {
                    let (a, b) = (level(s.from, n, line)?, level(s.to, n, line)?);
                    if flipped_spin(a, b, n).is_none() {
                        return Err(Error::Compile {
                            line,
                            message: format!(
                                "`sel {} {}` is not a resolvable line ({} -> {} flips {} spins)",
                                s.from,
                                s.to,
                                a.bits(n),
                                b.bits(n),
                                (a.zero_based() ^ b.zero_based()).count_ones()
                            ),
                        });
                    }
                    pulses.push(Pulse {
                        from: a,
                        to: b,
                        axis: s.axis,
                        angle: deg_to_rad(T::lit(s.angle_deg)),
                    });
                }
                ChannelEvent::Unitary(expm_unitary(&generator(&pulses, n)?)?)
            }
            Statement::Hard {
                target,
                axis,
                angle_deg,
            } => {
                let spins: Vec<usize> = match target {
                    HardTarget::All => (1..=n).collect(),
                    HardTarget::Spin(i) if *i <= n => vec![*i],
                    HardTarget::Spin(i) => {
                        return Err(Error::Compile {
                            line,
                            message: format!("spin {i} out of range 1..={n}"),
                        })
                    }
                };
                let h = hard_generator(&spins, *axis, deg_to_rad(T::lit(*angle_deg)), n)?;
                ChannelEvent::Unitary(expm_unitary(&h)?)
            }
            Statement::Crush(mode) => ChannelEvent::Crush(*mode),
            Statement::Unitary(r) => {
                let wrap = |e: Error| Error::Compile {
                    line,
                    message: e.to_string(),
                };
                let op = match r {
                    UnitaryRef::Walsh => walsh_hadamard(n).map_err(wrap)?,
                    UnitaryRef::Mixing => mixing(n).map_err(wrap)?,
                    UnitaryRef::Oracle(text) => {
                        let f = OneSatFormula::parse(text, n).map_err(wrap)?;
                        phase_oracle(&f).map_err(wrap)?
                    }
                };
                ChannelEvent::Unitary(op)
            }
        };
        events.push(event);
    }
    Ok(ChannelSequence { n_spins: n, events })
}

/// Left fold of evolve / crush over the events.
pub fn run<T: Real>(
    seq: &ChannelSequence<T>,
    rho0: &DeviationMatrix<T>,
) -> Result<DeviationMatrix<T>> {
    if rho0.n_spins() != seq.n_spins {
        return Err(Error::Input(format!(
            "state has {} spins but the sequence acts on {}",
            rho0.n_spins(),
            seq.n_spins
        )));
    }
    seq.events
        .iter()
        .try_fold(rho0.clone(), |rho, ev| match ev {
            ChannelEvent::Unitary(u) => evolve(&rho, u),
            ChannelEvent::Crush(mode) => Ok(crush(&rho, *mode)),
        })
}
