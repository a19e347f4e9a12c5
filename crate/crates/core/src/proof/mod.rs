//! The consecution calculus: Hilbert-style derivations of `Γ ⇒ φ` over the
//! fixed intuitionistic base plus `ka` and `tr`, extended by an [`AxiomBase`].
//!
//! The four primitive rules are Ax (an instance of a schema), El (a member
//! of `Γ`), MP and Na (`∅ ⇒ φ → ψ` gives `Γ ⇒ φ ⊐ ψ`). Weakening, cut,
//! substitution and both directions of the deduction theorem are available
//! as macro nodes and are expanded by [`elaborate`].

mod axioms;
pub mod build;
mod derivation;
mod elaborate;
mod library;
mod sexpr;

pub use axioms::{fixed_base, fixed_schema, AxiomBase, AxiomError, NamedAxiom};
pub use derivation::{check, check_primitive, CheckError, Derivation, Rule};
pub use elaborate::elaborate;
pub use library::{build as build_fixture, chain_4a, fixture, fixture_library, Fixture, FILES as FIXTURE_FILES};
pub use sexpr::{read_derivation, read_file, write_derivation, write_file, DerivationFile, ReadError};
