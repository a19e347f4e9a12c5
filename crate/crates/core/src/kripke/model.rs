use std::collections::BTreeMap;

use thiserror::Error;

use super::{FlatFrame, WorldSet};
use crate::syntax::{Atom, Formula};

/// Atom-to-upset assignment. Atoms absent from the map are false everywhere.
pub type Valuation = BTreeMap<Atom, WorldSet>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("V({atom}) is not an upset: {world} is in it but {above} is not (use --upclose to repair)")]
    NotUpset { atom: Atom, world: String, above: String },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("valuation of `{0}` refers to worlds outside the frame")]
    OutOfRange(Atom),
}

/// A flat frame together with an upset valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatModel {
    frame: FlatFrame,
    valuation: Valuation,
}

impl FlatModel {
    /// Rejects valuations that are not upsets.
    pub fn new(frame: FlatFrame, valuation: Valuation) -> Result<Self, ModelError> {
        for (atom, set) in &valuation {
            check_upset(&frame, atom, set, |w| frame.up(w))?;
        }
        Ok(FlatModel { frame, valuation })
    }

    /// Replaces each `V(p)` by its upward closure.
    pub fn upclosed(frame: FlatFrame, valuation: Valuation) -> Result<Self, ModelError> {
        for (atom, set) in &valuation {
            if set.iter().any(|w| w >= frame.len()) {
                return Err(ModelError::OutOfRange(atom.clone()));
            }
        }
        let valuation = valuation.into_iter().map(|(a, s)| (a, frame.upclose(&s))).collect();
        Ok(FlatModel { frame, valuation })
    }

    pub fn frame(&self) -> &FlatFrame {
        &self.frame
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn value(&self, atom: &Atom) -> WorldSet {
        self.valuation
            .get(atom)
            .cloned()
            .unwrap_or_else(|| self.frame.empty_set())
    }

    /// `⟦φ⟧`, evaluated directly from the forcing clauses.
    pub fn truth_set(&self, f: &Formula) -> WorldSet {
        let fr = &self.frame;
        let all = |pred: &dyn Fn(usize) -> bool| WorldSet::from_worlds(fr.len(), fr.worlds().filter(|&w| pred(w)));
        match f {
            Formula::Atom(a) => self.value(a),
            Formula::Top => fr.full_set(),
            Formula::Bot => fr.empty_set(),
            Formula::And(a, b) => self.truth_set(a).intersection(&self.truth_set(b)),
            Formula::Or(a, b) => self.truth_set(a).union(&self.truth_set(b)),
            Formula::Imp(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                all(&|w| fr.up(w).iter().all(|v| !ta.contains(v) || tb.contains(v)))
            }
            Formula::Sto(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                all(&|w| {
                    fr.up(w)
                        .iter()
                        .all(|v| !fr.succ(v).is_subset(&ta) || fr.succ(v).is_subset(&tb))
                })
            }
        }
    }

    pub fn forces(&self, w: usize, f: &Formula) -> Result<bool, ModelError> {
        if w >= self.frame.len() {
            return Err(ModelError::UnknownWorld(w.to_string()));
        }
        Ok(self.truth_set(f).contains(w))
    }

    pub fn forces_at(&self, world: &str, f: &Formula) -> Result<bool, ModelError> {
        let w = self
            .frame
            .index_of(world)
            .ok_or_else(|| ModelError::UnknownWorld(world.into()))?;
        self.forces(w, f)
    }

    /// Worlds forcing every premise but not the conclusion.
    pub fn refuting_worlds(&self, premises: &crate::FormulaSet, conclusion: &Formula) -> WorldSet {
        let mut s = self.frame.full_set();
        for p in premises {
            s.intersect_with(&self.truth_set(p));
        }
        s.subtract(&self.truth_set(conclusion));
        s
    }
}

pub(crate) fn check_upset<'a>(
    frame: &'a FlatFrame,
    atom: &Atom,
    set: &WorldSet,
    up: impl Fn(usize) -> &'a WorldSet,
) -> Result<(), ModelError> {
    for w in set.iter() {
        if w >= frame.len() {
            return Err(ModelError::OutOfRange(atom.clone()));
        }
        if let Some(v) = up(w).difference(set).first() {
            return Err(ModelError::NotUpset {
                atom: atom.clone(),
                world: frame.name(w).to_string(),
                above: frame.name(v).to_string(),
            });
        }
    }
    Ok(())
}
