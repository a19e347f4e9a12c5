use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// A proposition letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// Formulas of the strict-implication language.
///
/// `□φ` and `¬φ` are not constructors: they are `Sto(Top, φ)` and
/// `Imp(φ, Bot)`. The derived ordering is lexicographic on the constructor
/// tag (in declaration order) and then on the children, which gives every
/// [`FormulaSet`] a deterministic iteration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// Strict implication `φ ⊐ ψ`.
    Sto(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Atom::new(name))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn sto(a: Formula, b: Formula) -> Self {
        Formula::Sto(Box::new(a), Box::new(b))
    }

    /// `□φ := ⊤ ⊐ φ`
    pub fn boxed(a: Formula) -> Self {
        Formula::sto(Formula::Top, a)
    }

    /// `¬φ := φ → ⊥`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a₁ ∧ … ∧ aₙ`, left-nested; `⊤` for the empty list.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// `a₁ ∨ … ∨ aₙ`, left-nested; `⊥` for the empty list.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// The body of a box, if this formula is `⊤ ⊐ ψ`.
    pub fn as_box(&self) -> Option<&Formula> {
        match self {
            Formula::Sto(a, b) if **a == Formula::Top => Some(b),
            _ => None,
        }
    }

    /// The body of a negation, if this formula is `ψ → ⊥`.
    pub fn as_neg(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Sto(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Top | Formula::Bot)
    }

    /// Nesting depth of binary connectives; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.depth().max(b.depth()),
            None => 0,
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.size() + b.size(),
            None => 1,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Top | Formula::Bot => {}
            _ => {
                let (a, b) = self.children().unwrap();
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        match self {
            Formula::Atom(a) => a == atom,
            Formula::Top | Formula::Bot => false,
            _ => {
                let (a, b) = self.children().unwrap();
                a.contains_atom(atom) || b.contains_atom(atom)
            }
        }
    }

    /// Every subformula, including the formula itself.
    pub fn subformulas(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut FormulaSet) {
        if out.insert(self.clone()) {
            if let Some((a, b)) = self.children() {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    /// Homomorphic replacement of atoms; atoms outside the map are fixed.
    pub fn substitute(&self, sigma: &Substitution) -> Formula {
        match self {
            Formula::Atom(a) => sigma.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(sigma), b.substitute(sigma)),
            Formula::Or(a, b) => Formula::or(a.substitute(sigma), b.substitute(sigma)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(sigma), b.substitute(sigma)),
            Formula::Sto(a, b) => Formula::sto(a.substitute(sigma), b.substitute(sigma)),
        }
    }

    /// Rebuilds a binary node of the same connective with new children.
    pub(crate) fn with_children(&self, a: Formula, b: Formula) -> Formula {
        match self {
            Formula::And(..) => Formula::and(a, b),
            Formula::Or(..) => Formula::or(a, b),
            Formula::Imp(..) => Formula::imp(a, b),
            Formula::Sto(..) => Formula::sto(a, b),
            _ => panic!("with_children on a leaf"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite set of formulas iterated in canonical order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FormulaSet(BTreeSet<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(BTreeSet::new())
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        self.0.insert(f)
    }

    pub fn remove(&mut self, f: &Formula) -> bool {
        self.0.remove(f)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        FormulaSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn with(&self, f: Formula) -> FormulaSet {
        let mut out = self.clone();
        out.insert(f);
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for f in &self.0 {
            f.collect_atoms(&mut out);
        }
        out
    }

    pub fn substitute(&self, sigma: &Substitution) -> FormulaSet {
        self.0.iter().map(|f| f.substitute(sigma)).collect()
    }

    pub fn to_vec(&self) -> Vec<Formula> {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FormulaSet {
    type Item = Formula;
    type IntoIter = std::collections::btree_set::IntoIter<Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite map from atoms to formulas.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Substitution(BTreeMap<Atom, Formula>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn insert(&mut self, atom: Atom, f: Formula) -> Option<Formula> {
        self.0.insert(atom, f)
    }

    pub fn get(&self, atom: &Atom) -> Option<&Formula> {
        self.0.get(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Formula)> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The substitution `x ↦ (self(x))^outer`, extended by `outer` on atoms
    /// that `self` leaves fixed. Applying the result equals applying `self`
    /// and then `outer`.
    pub fn then(&self, outer: &Substitution) -> Substitution {
        let mut out: BTreeMap<Atom, Formula> = self.0.iter().map(|(a, f)| (a.clone(), f.substitute(outer))).collect();
        for (a, f) in &outer.0 {
            out.entry(a.clone()).or_insert_with(|| f.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(Atom, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Atom, Formula)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (&'a str, Formula)>>(iter: I) -> Self {
        Substitution(iter.into_iter().map(|(a, f)| (Atom::new(a), f)).collect())
    }
}
