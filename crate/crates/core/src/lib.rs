//! Workbench for flat Heyting–Lewis logic: an intuitionistic propositional
//! language extended with a binary strict implication `⊐`.
//!
//! The crate is organised by concern:
//!
//! * [`syntax`]: formulas, parser and printer, syntactic closures and translations.
//! * [`kripke`]: flat, upward-flat and sharp frames; forcing; frame validity;
//!   exhaustive and sampled frame enumeration up to isomorphism.
//! * [`algebra`]: complex algebras of finite flat frames and their equational laws.
//! * [`proof`]: the Hilbert-style consecution calculus, derivation checking and
//!   macro elaboration of admissible rules.
//! * [`correspondence`]: first-order frame conditions and brute-force
//!   correspondence sweeps.
//! * [`canonical`]: finite canonical models built from prime theories and segments.
//! * [`decide`]: bounded derivability queries backed by proof search and
//!   countermodel search.
//! * [`reproduce`]: named fixture pipelines that re-derive every worked example.
//!
//! Sweeps over frames run on rayon when the `parallel` feature is enabled (the
//! default); every sweep also accepts [`Exec::Sequential`].

pub mod algebra;
pub mod canonical;
pub mod correspondence;
pub mod decide;
pub mod kripke;
pub mod par;
pub mod proof;
pub mod reproduce;
pub mod syntax;

pub use par::Exec;
pub use syntax::{Atom, Consecution, Formula, FormulaSet, Substitution};
