//! A workbench for finite categorical semantics of dependent type theory.
//!
//! Everything is explicit and finite: categories are tables, universal
//! properties are decided by exhaustive search, and every structure carries
//! the witnesses that justify it.

pub mod fincat;
pub mod displayed;
pub mod compcat;
pub mod fixtures;
pub mod typeformers;
pub mod biequiv;
pub mod localprops;
pub mod ttlang;
pub mod io;
pub mod cli;
