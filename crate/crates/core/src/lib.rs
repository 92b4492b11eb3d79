//! Reversible π-calculus with a pluggable extrusion memory.
//!
//! One transition engine ([`semantics`]) is parameterised by the memory
//! attached to each restriction ([`memory`]); three memory shapes give three
//! causal semantics. The remaining modules analyse causality, compare the
//! engine against independent oracles and run bounded metatheory checks.

pub mod bs_oracle;
pub mod causality;
pub mod memory;
pub mod pi_oracle;
pub mod semantics;
pub mod syntax;
pub mod verification;

pub use memory::{Memory, SemanticsKind};
pub use semantics::{Action, Direction, Engine, KeySupply, Label, Lts, Transition};
pub use syntax::{lift, parse_process, CauseSet, Key, KeyStar, Name, Process, RProcess};
