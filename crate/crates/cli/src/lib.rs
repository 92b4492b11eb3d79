//! Command-line and HTTP front ends for the reversible π-calculus engine.

pub mod api;
pub mod script;
pub mod session;
pub mod state;
