//! Textual pulse programs: parsing, compilation to a channel sequence, execution.

mod ast;
mod compile;
mod parser;

pub use ast::{HardTarget, PulseProgram, Sel, Statement, UnitaryRef};
pub use compile::{compile, run, ChannelEvent, ChannelSequence};
pub use parser::parse;
