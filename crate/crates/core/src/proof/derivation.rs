use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::AxiomBase;
use crate::syntax::{Consecution, Formula, FormulaSet, Substitution};

/// One inference step. `Ax`, `El`, `Mp` and `Na` are primitive; the rest are
/// admissible rules that [`super::elaborate`] expands away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Instance of a named schema under `subst`.
    Ax { name: String, subst: Substitution },
    /// The conclusion is the premise `member`.
    El { member: Formula },
    /// Children: `Γ ⇒ φ` then `Γ ⇒ φ → ψ`.
    Mp,
    /// Child `∅ ⇒ φ → ψ` gives `Γ ⇒ φ ⊐ ψ`.
    Na,
    /// Child `Γ' ⇒ φ` with `Γ' ⊆ Γ`.
    Weaken,
    /// Children `Γ ⇒ δ` for each `δ ∈ Δ`, then the main child `Δ ⇒ φ`.
    Cut,
    /// Child `Γ ⇒ φ` gives `Γ^σ ⇒ φ^σ`.
    Subst { subst: Substitution },
    /// Child `Γ, φ ⇒ ψ` gives `Γ ⇒ φ → ψ`.
    DedIntro,
    /// Child `Γ ⇒ φ → ψ` gives `Γ, φ ⇒ ψ`.
    DedElim,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Ax { .. } => "ax",
            Rule::El { .. } => "el",
            Rule::Mp => "mp",
            Rule::Na => "na",
            Rule::Weaken => "weaken",
            Rule::Cut => "cut",
            Rule::Subst { .. } => "subst",
            Rule::DedIntro => "ded-intro",
            Rule::DedElim => "ded-elim",
        }
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self, Rule::Ax { .. } | Rule::El { .. } | Rule::Mp | Rule::Na)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Consecution,
    pub premises: Vec<Derivation>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::sexpr::write_derivation(self))
    }
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::sexpr::write_derivation(self))
    }
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Consecution, premises: Vec<Derivation>) -> Self {
        Derivation {
            rule,
            conclusion,
            premises,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn is_primitive(&self) -> bool {
        self.rule.is_primitive() && self.premises.iter().all(Derivation::is_primitive)
    }

    /// Names of the schemas used at Ax leaves.
    pub fn axioms_used(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |d| {
            if let Rule::Ax { name, .. } = &d.rule {
                out.insert(name.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {} ({rule}, concluding `{conclusion}`): {reason}", path_string(.path))]
pub struct CheckError {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub conclusion: String,
    pub reason: String,
}

fn path_string(p: &[usize]) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Checks every node, accepting the admissible macro rules.
pub fn check(d: &Derivation, base: &AxiomBase) -> Result<(), CheckError> {
    walk(d, base, true, &mut Vec::new())
}

/// Like [`check`] but rejects macro nodes.
pub fn check_primitive(d: &Derivation, base: &AxiomBase) -> Result<(), CheckError> {
    walk(d, base, false, &mut Vec::new())
}

fn walk(d: &Derivation, base: &AxiomBase, macros: bool, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let fail = |reason: String, path: &[usize]| CheckError {
        path: path.to_vec(),
        rule: d.rule.tag(),
        conclusion: d.conclusion.to_string(),
        reason,
    };
    if !macros && !d.rule.is_primitive() {
        return Err(fail("macro rule in a primitive derivation".into(), path));
    }
    if let Rule::Ax { name, subst } = &d.rule {
        match base.schema(name) {
            None => return Err(fail(format!("`{name}` is not an axiom of the base"), path)),
            Some(schema) if schema.substitute(subst) != d.conclusion.conclusion => {
                return Err(fail(
                    format!("not an instance of `{name}`: expected `{}`", schema.substitute(subst)),
                    path,
                ))
            }
            Some(_) => {}
        }
    }
    local_shape(d).map_err(|r| fail(r, path))?;
    for (i, child) in d.premises.iter().enumerate() {
        path.push(i);
        walk(child, base, macros, path)?;
        path.pop();
    }
    Ok(())
}

fn arity(d: &Derivation, n: usize) -> Result<(), String> {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premise(s), found {}", d.premises.len()))
    }
}

/// Base-independent schema check of a single node against its children.
pub(crate) fn local_shape(d: &Derivation) -> Result<(), String> {
    let c = &d.conclusion;
    let kids = &d.premises;
    match &d.rule {
        Rule::Ax { .. } => arity(d, 0),
        Rule::El { member } => {
            arity(d, 0)?;
            if member != &c.conclusion {
                return Err(format!("member `{member}` differs from the conclusion"));
            }
            if !c.premises.contains(member) {
                return Err(format!("`{member}` is not among the premises"));
            }
            Ok(())
        }
        Rule::Mp => {
            arity(d, 2)?;
            let (minor, major) = (&kids[0].conclusion, &kids[1].conclusion);
            if minor.premises != c.premises || major.premises != c.premises {
                return Err("premise sets of the children differ from the conclusion's".into());
            }
            let expected = Formula::imp(minor.conclusion.clone(), c.conclusion.clone());
            if major.conclusion != expected {
                return Err(format!("major premise should conclude `{expected}`"));
            }
            Ok(())
        }
        Rule::Na => {
            arity(d, 1)?;
            let child = &kids[0].conclusion;
            if !child.premises.is_empty() {
                return Err("the premise must have an empty context".into());
            }
            match (&child.conclusion, &c.conclusion) {
                (Formula::Imp(a, b), Formula::Sto(x, y)) if a == x && b == y => Ok(()),
                _ => Err("expects `∅ ⇒ φ → ψ` above `Γ ⇒ φ ⊐ ψ`".into()),
            }
        }
        Rule::Weaken => {
            arity(d, 1)?;
            let child = &kids[0].conclusion;
            if child.conclusion != c.conclusion || !child.premises.is_subset(&c.premises) {
                return Err("child must have the same conclusion and fewer premises".into());
            }
            Ok(())
        }
        Rule::Cut => {
            let Some((main, side)) = kids.split_last() else {
                return Err("cut needs a main premise".into());
            };
            if main.conclusion.conclusion != c.conclusion {
                return Err("main premise must have the same conclusion".into());
            }
            let delta = &main.conclusion.premises;
            let provided: FormulaSet = side.iter().map(|s| s.conclusion.conclusion.clone()).collect();
            if side.iter().any(|s| s.conclusion.premises != c.premises) {
                return Err("side premises must share the conclusion's context".into());
            }
            if &provided != delta || side.len() != delta.len() {
                return Err(format!("side premises must prove exactly {delta}"));
            }
            Ok(())
        }
        Rule::Subst { subst } => {
            arity(d, 1)?;
            if kids[0].conclusion.substitute(subst) != *c {
                return Err(format!("expected `{}`", kids[0].conclusion.substitute(subst)));
            }
            Ok(())
        }
        Rule::DedIntro => {
            arity(d, 1)?;
            let Formula::Imp(a, b) = &c.conclusion else {
                return Err("conclusion is not an implication".into());
            };
            let child = &kids[0].conclusion;
            if child.conclusion != **b || child.premises != c.premises.with((**a).clone()) {
                return Err(format!(
                    "child should be `{}`",
                    Consecution::new(c.premises.with((**a).clone()), (**b).clone())
                ));
            }
            Ok(())
        }
        Rule::DedElim => {
            arity(d, 1)?;
            let child = &kids[0].conclusion;
            let Formula::Imp(a, b) = &child.conclusion else {
                return Err("child does not conclude an implication".into());
            };
            if c.conclusion != **b || c.premises != child.premises.with((**a).clone()) {
                return Err("conclusion should add the antecedent to the context".into());
            }
            Ok(())
        }
    }
}
