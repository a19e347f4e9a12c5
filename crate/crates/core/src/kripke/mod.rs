//! Finite flat, upward-flat and sharp frames and models.
//!
//! A flat frame `(W, ⊑, R)` pairs a preorder with an arbitrary relation.
//! Strict implication is forced at `w` when every `⊑`-successor `w'` whose
//! whole `R[w']` satisfies the antecedent also has all of `R[w']` satisfying
//! the consequent.

mod enumerate;
mod eval;
mod frame;
mod model;
mod modelfile;
mod sharp;
mod worldset;

pub use enumerate::{
    canonical_code, decode, enumerate_codes, enumerate_frames, enumerate_up_to, sample_frames, FrameClass, FrameCode,
    MAX_CODED_WORLDS,
};
pub use eval::{find_refutation, validates, validates_all, validates_consecution, Assignments, Compiled, Refutation};
pub use frame::{FlatFrame, FrameError};
pub use model::{FlatModel, ModelError, Valuation};
pub use modelfile::{
    parse_model, read_flat_model, write_frame, write_model, write_sharp_model, ModelFileError, ModelSpec,
};
pub use sharp::{SharpFrame, SharpModel};
pub use worldset::WorldSet;
