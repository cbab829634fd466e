//! Finite state acceptors, transducers and word-difference machines.

pub mod difference;
pub mod fsa;
pub mod gsm;
pub mod pairs;

pub use difference::{async_companions, build_difference_machine, run_difference_machine, DifferenceMachine};
pub use fsa::{Fsa, HomMode, MachineFile, State, Sym};
pub use gsm::{Gsm, GsmEdge};
pub use pairs::{PairAlphabet, PAD};

/// The operations of [`regular_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Union,
    Intersection,
    Concatenation,
    Star,
    Plus,
    Complement,
}

pub fn regular_combine(op: CombineOp, a: &Fsa, b: Option<&Fsa>) -> crate::Result<Fsa> {
    let need = || {
        b.ok_or_else(|| crate::Error::InvalidParams(format!("{op:?} needs a second acceptor")))
    };
    match op {
        CombineOp::Union => a.union(need()?),
        CombineOp::Intersection => a.intersect(need()?),
        CombineOp::Concatenation => a.concat(need()?),
        CombineOp::Star => Ok(a.star()),
        CombineOp::Plus => Ok(a.plus()),
        CombineOp::Complement => Ok(a.complement()),
    }
}
