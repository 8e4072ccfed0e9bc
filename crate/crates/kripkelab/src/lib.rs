//! A finite-model-theory workbench around multi-modal logic.
//!
//! This crate makes a family of classical definability and preservation
//! constructions executable on finite structures:
//!
//! * [`syntax`] — formula ASTs, parsers, printers, and fragment recognizers;
//! * [`kripke`] — finite frames/models, model checking, frame operations,
//!   bisimulation, and FO structures;
//! * [`folog`] — evaluation of first-order formulas with counting and
//!   monadic TC/LFP operators, interpretations, and the exists-bounded game;
//! * [`decide`] — validity/satisfiability for multi-modal K, frame
//!   validity, and semantic-property deciders with brute-force oracles;
//! * [`programs`] — modal programs, their relational semantics and standard
//!   translation, the completely-additive-formula compiler, and
//!   bisimulation-safety testing;
//! * [`gallery`] — named formulas, frame families, and reductions, plus
//!   the finite definability test.

pub mod bitset;
pub mod decide;
pub mod folog;
pub mod gallery;
pub mod kripke;
pub mod programs;
pub mod random;
pub mod syntax;

pub use bitset::BitSet;
