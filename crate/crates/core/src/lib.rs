//! Finite-horizon simulation of safe generation and identification games
//! over eventually-periodic integer languages.

pub mod adversaries;
pub mod arena;
pub mod cli;
pub mod collections;
pub mod demos;
pub mod learners;
pub mod set_algebra;
