//! Formulas of the strict-implication language and their purely syntactic
//! transformations.
//!
//! Surface grammar, loosest binding first: `->` (right-associative), `~>`
//! (strict implication, right-associative), `|`, `&` (both left-associative),
//! then the prefix forms `!φ` (`φ -> false`) and `[]φ` (`true ~> φ`). Atoms
//! match `[a-z][a-zA-Z0-9_]*`; the constants are `true` and `false`, with
//! `top` and `bot` accepted as aliases.

mod formula;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use formula::{Atom, Formula, FormulaSet, Substitution};
pub use parse::{parse, parse_consecution, parse_list, ParseError};
pub use print::Pretty;

/// A judgement `Γ ⇒ φ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Consecution {
    pub premises: FormulaSet,
    pub conclusion: Formula,
}

impl Consecution {
    pub fn new(premises: FormulaSet, conclusion: Formula) -> Self {
        Consecution { premises, conclusion }
    }

    /// `∅ ⇒ φ`
    pub fn theorem(conclusion: Formula) -> Self {
        Consecution::new(FormulaSet::new(), conclusion)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.premises.atoms();
        self.conclusion.collect_atoms(&mut out);
        out
    }

    pub fn substitute(&self, sigma: &Substitution) -> Consecution {
        Consecution::new(self.premises.substitute(sigma), self.conclusion.substitute(sigma))
    }
}

impl fmt::Display for Consecution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.premises, self.conclusion)
    }
}

impl fmt::Debug for Consecution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("atom `{0}` occurs in the formula and cannot be used as the relativising atom")]
    NotFresh(Atom),
}

/// Smallest superset of `set ∪ {⊤}` closed under immediate subformulas.
pub fn subformula_closure(set: &FormulaSet) -> FormulaSet {
    let mut out = FormulaSet::new();
    out.insert(Formula::Top);
    for f in set {
        out = out.union(&f.subformulas());
    }
    out
}

pub fn is_subformula_closed(set: &FormulaSet) -> bool {
    set.iter().all(|f| match f.children() {
        Some((a, b)) => set.contains(a) && set.contains(b),
        None => true,
    })
}

/// `∼φ`: strips one negation if `φ = ¬ψ`, otherwise negates.
pub fn single_negation(f: &Formula) -> Formula {
    match f.as_neg() {
        Some(body) => body.clone(),
        None => Formula::neg(f.clone()),
    }
}

/// `⊠φ`: `φ` itself when it is already a box `⊤ ⊐ ψ`, otherwise `⊤ ⊐ φ`.
pub fn single_box(f: &Formula) -> Formula {
    if f.as_box().is_some() {
        f.clone()
    } else {
        Formula::boxed(f.clone())
    }
}

/// Closes `set` under subformulas (with `⊤`) and single negations.
pub fn close_under_single_negations(set: &FormulaSet) -> FormulaSet {
    close_with(set, single_negation)
}

/// Closes `set` under subformulas (with `⊤`) and single boxes.
pub fn close_under_single_boxes(set: &FormulaSet) -> FormulaSet {
    close_with(set, single_box)
}

fn close_with(set: &FormulaSet, op: fn(&Formula) -> Formula) -> FormulaSet {
    let mut out = subformula_closure(set);
    loop {
        let extra: FormulaSet = out.iter().map(op).filter(|g| !out.contains(g)).collect();
        if extra.is_empty() {
            return out;
        }
        out = subformula_closure(&out.union(&extra));
    }
}

/// Relativises `f` to the fresh atom `p`: commutes with atoms and the
/// intuitionistic connectives, and sends `ψ ⊐ χ` to
/// `(p → st(ψ)) ⊐ (p → st(χ))`.
pub fn stability_translation(f: &Formula, p: &Atom) -> Result<Formula, SyntaxError> {
    if f.contains_atom(p) {
        return Err(SyntaxError::NotFresh(p.clone()));
    }
    Ok(relativise(f, &Formula::Atom(p.clone())))
}

fn relativise(f: &Formula, p: &Formula) -> Formula {
    match f {
        Formula::Sto(a, b) => Formula::sto(
            Formula::imp(p.clone(), relativise(a, p)),
            Formula::imp(p.clone(), relativise(b, p)),
        ),
        _ => match f.children() {
            Some((a, b)) => f.with_children(relativise(a, p), relativise(b, p)),
            None => f.clone(),
        },
    }
}

pub fn atoms_of(f: &Formula) -> BTreeSet<Atom> {
    f.atoms()
}

/// Extends `sigma` so that `pattern` under it equals `target`, if possible.
/// Atoms already bound in `sigma` must agree.
pub fn match_pattern(pattern: &Formula, target: &Formula, sigma: &Substitution) -> Option<Substitution> {
    let mut out = sigma.clone();
    match_into(pattern, target, &mut out).then_some(out)
}

fn match_into(pattern: &Formula, target: &Formula, sigma: &mut Substitution) -> bool {
    match (pattern, target) {
        (Formula::Atom(a), _) => match sigma.get(a) {
            Some(bound) => bound == target,
            None => {
                sigma.insert(a.clone(), target.clone());
                true
            }
        },
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d))
        | (Formula::Sto(a, b), Formula::Sto(c, d)) => match_into(a, c, sigma) && match_into(b, d, sigma),
        _ => false,
    }
}

#[cfg(test)]
pub(crate) fn fs(items: &[&str]) -> FormulaSet {
    items.iter().map(|s| parse(s).expect("literal formula")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(subformula_closure(&fs(&["q ~> r"])), fs(&["q ~> r", "q", "r", "true"]));
        assert_eq!(subformula_closure(&fs(&["true", "q"])), fs(&["true", "q"]));
        assert_eq!(subformula_closure(&FormulaSet::new()), fs(&["true"]));
    }

    #[test]
    fn single_negation_cases() {
        assert_eq!(single_negation(&p("!p")), p("p"));
        assert_eq!(single_negation(&p("p")), p("!p"));
        assert_eq!(single_negation(&p("!!p")), p("!p"));
        assert_eq!(single_negation(&single_negation(&p("p & q"))), p("p & q"));
    }

    #[test]
    fn single_box_cases() {
        assert_eq!(single_box(&p("true ~> q")), p("true ~> q"));
        assert_eq!(single_box(&p("q")), p("[]q"));
        assert_eq!(single_box(&p("p ~> q")), p("[](p ~> q)"));
    }

    #[test]
    fn closures_under_single_operators() {
        let sigma = close_under_single_boxes(&fs(&["q"]));
        assert_eq!(sigma, fs(&["true", "q", "[]q", "[]true"]));
        let sigma = close_under_single_negations(&fs(&["p"]));
        assert_eq!(sigma, fs(&["true", "false", "p", "!p", "!true", "!false"]));
        assert!(is_subformula_closed(&sigma));
        for f in &sigma {
            assert!(sigma.contains(&single_negation(f)));
        }
    }

    #[test]
    fn substitution_examples() {
        let di = p("(p ~> r) & (q ~> r) -> (p | q) ~> r");
        let sigma: Substitution = [("p", p("s -> p")), ("q", p("s -> q")), ("r", p("s -> r"))]
            .into_iter()
            .collect();
        let inst = di.substitute(&sigma);
        assert_eq!(
            inst,
            p("((s -> p) ~> (s -> r)) & ((s -> q) ~> (s -> r)) -> ((s -> p) | (s -> q)) ~> (s -> r)")
        );
        assert_eq!(di.substitute(&Substitution::new()), di);
        let bot: Substitution = [("p", Formula::Bot)].into_iter().collect();
        assert_eq!(p("p").substitute(&bot), Formula::Bot);
    }

    #[test]
    fn composed_substitution() {
        let inner: Substitution = [("p", p("q & r"))].into_iter().collect();
        let outer: Substitution = [("q", p("s")), ("p", p("t"))].into_iter().collect();
        let f = p("p -> q");
        assert_eq!(
            f.substitute(&inner.then(&outer)),
            f.substitute(&inner).substitute(&outer)
        );
    }

    #[test]
    fn stability_examples() {
        let s = Atom::new("s");
        assert_eq!(
            stability_translation(&p("q ~> r"), &s).unwrap(),
            p("(s -> q) ~> (s -> r)")
        );
        assert_eq!(stability_translation(&p("q & r"), &s).unwrap(), p("q & r"));
        let di = p("(p ~> r) & (q ~> r) -> (p | q) ~> r");
        let st = stability_translation(&di, &s).unwrap();
        let shown = p("s -> (((s -> p) ~> (s -> r)) & ((s -> q) ~> (s -> r)) -> ((s -> (p | q)) ~> (s -> r)))");
        assert_eq!(Formula::imp(Formula::atom("s"), st), shown);
        let boxed = stability_translation(&p("[]q"), &s).unwrap();
        assert_eq!(boxed, p("(s -> true) ~> (s -> q)"));
        assert_eq!(
            stability_translation(&p("s ~> q"), &s),
            Err(SyntaxError::NotFresh(s.clone()))
        );
    }

    #[test]
    fn pattern_matching() {
        let tr = p("(p ~> q) & (q ~> r) -> p ~> r");
        let inst = p("([]a ~> b) & (b ~> c | d) -> []a ~> c | d");
        let sigma = match_pattern(&tr, &inst, &Substitution::new()).unwrap();
        assert_eq!(tr.substitute(&sigma), inst);
        assert!(match_pattern(&tr, &p("(a ~> b) & (c ~> d) -> a ~> d"), &Substitution::new()).is_none());
        let fixed: Substitution = [("p", p("x"))].into_iter().collect();
        assert!(match_pattern(&p("p -> q"), &p("y -> z"), &fixed).is_none());
    }

    #[test]
    fn atom_sets() {
        let di = p("(p ~> r) & (q ~> r) -> (p | q) ~> r");
        let names = |f: &Formula| f.atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>();
        assert_eq!(names(&di), ["p", "q", "r"]);
        assert!(p("true ~> false").atoms().is_empty());
        let st = stability_translation(&di, &Atom::new("s")).unwrap();
        assert_eq!(names(&st), ["p", "q", "r", "s"]);
    }

    #[test]
    fn canonical_order_is_by_constructor_tag() {
        let set = fs(&["p ~> q", "p -> q", "p & q", "false", "true", "p"]);
        let order: Vec<String> = set.iter().map(|f| f.to_string()).collect();
        assert_eq!(order, ["p", "true", "false", "p & q", "p -> q", "p ~> q"]);
    }
}
