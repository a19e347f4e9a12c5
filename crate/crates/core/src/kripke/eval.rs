//! Compiled evaluation and frame validity.

use std::collections::HashMap;

use super::{FlatFrame, FlatModel, Valuation, WorldSet};
use crate::syntax::{Atom, Consecution, Formula};

#[derive(Clone, Copy, Debug)]
enum Node {
    Atom(usize),
    Top,
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Sto(usize, usize),
}

/// Formulas flattened into a shared DAG so that a fixed set of formulas can
/// be re-evaluated cheaply under many valuations.
#[derive(Clone, Debug)]
pub struct Compiled {
    nodes: Vec<Node>,
    atoms: Vec<Atom>,
    roots: Vec<usize>,
}

impl Compiled {
    pub fn new<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Self {
        let mut c = Compiled {
            nodes: Vec::new(),
            atoms: Vec::new(),
            roots: Vec::new(),
        };
        let mut memo: HashMap<&'a Formula, usize> = HashMap::new();
        let mut atom_ix: HashMap<Atom, usize> = HashMap::new();
        for f in formulas {
            let r = c.intern(f, &mut memo, &mut atom_ix);
            c.roots.push(r);
        }
        c
    }

    fn intern<'a>(
        &mut self,
        f: &'a Formula,
        memo: &mut HashMap<&'a Formula, usize>,
        atom_ix: &mut HashMap<Atom, usize>,
    ) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let node = match f {
            Formula::Atom(a) => {
                let next = self.atoms.len();
                let i = *atom_ix.entry(a.clone()).or_insert(next);
                if i == next {
                    self.atoms.push(a.clone());
                }
                Node::Atom(i)
            }
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::And(a, b) => Node::And(self.intern(a, memo, atom_ix), self.intern(b, memo, atom_ix)),
            Formula::Or(a, b) => Node::Or(self.intern(a, memo, atom_ix), self.intern(b, memo, atom_ix)),
            Formula::Imp(a, b) => Node::Imp(self.intern(a, memo, atom_ix), self.intern(b, memo, atom_ix)),
            Formula::Sto(a, b) => Node::Sto(self.intern(a, memo, atom_ix), self.intern(b, memo, atom_ix)),
        };
        self.nodes.push(node);
        let i = self.nodes.len() - 1;
        memo.insert(f, i);
        i
    }

    /// Atoms in first-occurrence order; assignments are indexed the same way.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn root(&self, i: usize) -> usize {
        self.roots[i]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Evaluates every node; `out[i]` is the truth set of node `i`.
    pub fn eval_into(&self, frame: &FlatFrame, assignment: &[WorldSet], out: &mut Vec<WorldSet>) {
        out.clear();
        let n = frame.len();
        for node in &self.nodes {
            let s = match *node {
                Node::Atom(i) => assignment[i].clone(),
                Node::Top => WorldSet::full(n),
                Node::Bot => WorldSet::empty(n),
                Node::And(a, b) => out[a].intersection(&out[b]),
                Node::Or(a, b) => out[a].union(&out[b]),
                Node::Imp(a, b) => {
                    let good = out[a].complement(n).union(&out[b]);
                    frame.interior(&good)
                }
                Node::Sto(a, b) => {
                    let good = WorldSet::from_worlds(
                        n,
                        frame.worlds().filter(|&v| {
                            let rv = frame.succ(v);
                            !rv.is_subset(&out[a]) || rv.is_subset(&out[b])
                        }),
                    );
                    frame.interior(&good)
                }
            };
            out.push(s);
        }
    }

    pub fn eval(&self, frame: &FlatFrame, assignment: &[WorldSet]) -> Vec<WorldSet> {
        let mut out = Vec::with_capacity(self.nodes.len());
        self.eval_into(frame, assignment, &mut out);
        out
    }
}

/// Iterates over all assignments of upsets of `frame` to `k` atoms.
pub struct Assignments<'a> {
    upsets: &'a [WorldSet],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Assignments<'a> {
    pub fn new(frame: &'a FlatFrame, k: usize) -> Self {
        Assignments {
            upsets: frame.upsets(),
            digits: vec![0; k],
            done: false,
        }
    }

    pub fn count(frame: &FlatFrame, k: usize) -> usize {
        frame.upsets().len().saturating_pow(k as u32)
    }
}

impl Iterator for Assignments<'_> {
    type Item = Vec<WorldSet>;

    fn next(&mut self) -> Option<Vec<WorldSet>> {
        if self.done {
            return None;
        }
        let item = self.digits.iter().map(|&d| self.upsets[d].clone()).collect();
        // odometer, last atom fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.upsets.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

/// A valuation and world witnessing that a frame does not validate a consecution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub valuation: Valuation,
    pub world: usize,
}

impl Refutation {
    pub fn into_model(self, frame: FlatFrame) -> (FlatModel, usize) {
        let model = FlatModel::new(frame, self.valuation).expect("refutations assign upsets");
        (model, self.world)
    }
}

/// First valuation (over the atoms of `c`) and world at which all premises
/// hold and the conclusion fails.
pub fn find_refutation(frame: &FlatFrame, c: &Consecution) -> Option<Refutation> {
    let formulas: Vec<&Formula> = std::iter::once(&c.conclusion).chain(c.premises.iter()).collect();
    let compiled = Compiled::new(formulas);
    let k = compiled.atoms().len();
    let mut scratch = Vec::new();
    for assignment in Assignments::new(frame, k) {
        compiled.eval_into(frame, &assignment, &mut scratch);
        let mut bad = frame.full_set();
        for &r in &compiled.roots()[1..] {
            bad.intersect_with(&scratch[r]);
        }
        bad.subtract(&scratch[compiled.root(0)]);
        if let Some(world) = bad.first() {
            let valuation = compiled.atoms().iter().cloned().zip(assignment).collect();
            return Some(Refutation { valuation, world });
        }
    }
    None
}

pub fn validates_consecution(frame: &FlatFrame, c: &Consecution) -> bool {
    find_refutation(frame, c).is_none()
}

pub fn validates(frame: &FlatFrame, f: &Formula) -> bool {
    validates_consecution(frame, &Consecution::theorem(f.clone()))
}

/// Validity of every formula in `formulas` (as theorems).
pub fn validates_all<'a, I: IntoIterator<Item = &'a Formula>>(frame: &FlatFrame, formulas: I) -> bool {
    formulas.into_iter().all(|f| validates(frame, f))
}
