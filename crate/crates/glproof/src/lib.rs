//! A proof workbench for Gödel-Löb provability logic.
//!
//! The crate parses formulas and sequents, checks proofs in several sequent
//! calculi, decides validity by proof search and by a finite-model oracle, and
//! translates proofs between calculi.

pub mod formula;
pub mod oracle;
pub mod pipeline;
pub mod semantics;
pub mod sequent;
pub mod format;
pub mod proof;
pub mod check;
pub mod cli;
pub mod rules;
pub mod relabel;
pub mod search;
pub mod transform;
pub mod render;
