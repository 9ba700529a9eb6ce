//! Proof search and certificate checking for a polarized linear logic with
//! equality and least and greatest fixed points.

pub mod certificate;
pub mod cli;
pub mod defs;
pub mod formula;
pub mod kernel;
pub mod term;
pub mod search;
pub mod problem;
pub mod syntax;
