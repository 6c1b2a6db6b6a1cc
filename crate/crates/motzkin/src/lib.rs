//! Std-side companion to `motzkin-core`: the chain Hamiltonian, numerical
//! Schmidt spectra, JSON formats, tiling pictures and the command line.

pub mod cli;
pub mod hamiltonian;
pub mod json;
pub mod render;
pub mod spectrum;
