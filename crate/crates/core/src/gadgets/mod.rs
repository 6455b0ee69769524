//! Generators that turn games and space-bounded Turing machines into
//! multi-agent systems, plus the machine infrastructure they rely on.

mod alternating;
mod encoding;
mod game;
mod one_agent;
mod tm;
mod turn_based;

use thiserror::Error;

use crate::model::ModelError;

pub use alternating::atm_to_circuit_system;
pub use encoding::IdLayout;
pub use game::game_to_system;
pub use one_agent::dtm_to_one_agent_circuit;
pub use tm::{
    atm_accepts, dtm_accepts, tm_step, AltTM, DetTM, Dir, Label, MachineId, Move, StepOutcome,
    RESERVED_NAME_CHARS,
};
pub use turn_based::dtm_to_turnbased;

/// Default bound on configurations explored by [`atm_accepts`].
pub const DEFAULT_ID_CAP: usize = 1 << 20;

/// Largest gate count per unit of `(|R|·|Γ|)³·n` allowed for generated
/// circuits, measured on the curated machines and frozen.
#[cfg(test)]
pub(crate) const GATE_FACTOR: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("machine has no {0}")]
    Empty(&'static str),
    #[error("name {0:?} is empty or uses a reserved character")]
    BadName(String),
    #[error("duplicate name {0:?}")]
    Duplicate(String),
    #[error("{0} out of range")]
    OutOfRange(&'static str),
    #[error("no transition for state {state} reading {symbol}")]
    MissingTransition { state: String, symbol: String },
    #[error("duplicate transition for state {state} reading {symbol}")]
    DuplicateTransition { state: String, symbol: String },
    #[error("state {state} reading {symbol} has more than two moves")]
    Branching { state: String, symbol: String },
    #[error("malformed machine configuration: {0}")]
    MalformedId(String),
    #[error("tape length must be at least {min}, got {got}")]
    TapeTooShort { min: usize, got: usize },
    #[error("game has no initial state")]
    MissingInit,
    #[error("more than {0} configurations")]
    CapExceeded(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}
