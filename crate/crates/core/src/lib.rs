//! Nash-equilibrium realizability and verification for deterministic
//! multi-agent systems with reachability goals.
//!
//! Systems come in two representations: [`model::ExplicitSystem`], a dense
//! transition table, and [`model::CircuitSystem`], where states are bit vectors
//! and the transition function is a combinational [`circuit::Circuit`].
//! [`realize`] decides whether some strategy profile is a Nash equilibrium with
//! a prescribed winning set; [`verify`] checks a concrete profile.

pub mod circuit;
pub mod cli;
pub mod gadgets;
pub mod game;
pub mod io;
pub mod model;
pub mod oracle;
pub mod realize;
pub mod verify;

pub use model::{AgentSet, CircuitSystem, ExplicitSystem, MultiAgentSystem};

#[cfg(test)]
pub(crate) mod testutil;
