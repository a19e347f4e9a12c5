use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{parse, Formula};

/// Intuitionistic base, `⊤`, and the two strict-implication laws that every
/// extension contains.
const FIXED: &[(&str, &str)] = &[
    ("k1", "p -> q -> p"),
    ("k2", "(p -> q -> r) -> (p -> q) -> p -> r"),
    ("k3", "p & q -> p"),
    ("k4", "p & q -> q"),
    ("k5", "p -> q -> p & q"),
    ("k6", "p -> p | q"),
    ("k7", "q -> p | q"),
    ("k8", "(p -> r) -> (q -> r) -> p | q -> r"),
    ("k9", "false -> p"),
    ("k10", "p -> p"),
    ("top", "true"),
    ("ka", "(p ~> q) & (p ~> r) -> p ~> q & r"),
    ("tr", "(p ~> q) & (q ~> r) -> p ~> r"),
];

fn fixed_schemas() -> &'static [(&'static str, Formula)] {
    static CELL: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    CELL.get_or_init(|| {
        FIXED
            .iter()
            .map(|&(n, s)| (n, parse(s).expect("fixed schema")))
            .collect()
    })
}

/// A schema of the fixed base by name.
pub fn fixed_schema(name: &str) -> Option<&'static Formula> {
    fixed_schemas().iter().find(|(n, _)| *n == name).map(|(_, f)| f)
}

/// All fixed schemas with their names.
pub fn fixed_base() -> impl Iterator<Item = (&'static str, &'static Formula)> {
    fixed_schemas().iter().map(|(n, f)| (*n, f))
}

/// The optional axioms with known frame conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NamedAxiom {
    /// `p ∨ ¬p`
    Em,
    /// `□p → p`
    TBox,
    /// `p ⊐ □p`
    FourA,
    /// `(p → q) → (p ⊐ q)`
    Str,
    /// `(p ⊐ q) → □(p ⊐ q)`
    Pa,
    /// `(p ⊐ r) ∧ (q ⊐ r) → (p ∨ q) ⊐ r`
    Di,
}

impl NamedAxiom {
    pub const ALL: [NamedAxiom; 6] = [
        NamedAxiom::Em,
        NamedAxiom::TBox,
        NamedAxiom::FourA,
        NamedAxiom::Str,
        NamedAxiom::Pa,
        NamedAxiom::Di,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedAxiom::Em => "em",
            NamedAxiom::TBox => "tbox",
            NamedAxiom::FourA => "4a",
            NamedAxiom::Str => "str",
            NamedAxiom::Pa => "pa",
            NamedAxiom::Di => "di",
        }
    }

    fn source(self) -> &'static str {
        match self {
            NamedAxiom::Em => "p | !p",
            NamedAxiom::TBox => "[]p -> p",
            NamedAxiom::FourA => "p ~> []p",
            NamedAxiom::Str => "(p -> q) -> p ~> q",
            NamedAxiom::Pa => "(p ~> q) -> [](p ~> q)",
            NamedAxiom::Di => "(p ~> r) & (q ~> r) -> (p | q) ~> r",
        }
    }

    pub fn formula(self) -> Formula {
        parse(self.source()).expect("named axiom")
    }

    pub fn from_name(s: &str) -> Option<NamedAxiom> {
        Some(match s {
            "em" => NamedAxiom::Em,
            "tbox" | "t_box" | "t□" | "tb" => NamedAxiom::TBox,
            "4a" | "four_a" | "4_a" => NamedAxiom::FourA,
            "str" => NamedAxiom::Str,
            "pa" | "p_a" => NamedAxiom::Pa,
            "di" => NamedAxiom::Di,
            _ => return None,
        })
    }
}

impl fmt::Display for NamedAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("`{0}` is neither a named axiom (em, tbox, 4a, str, pa, di) nor a formula")]
    Unknown(String),
}

/// The extra axioms `Ax` of an extension. Written `∅` when empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxiomBase {
    named: BTreeSet<NamedAxiom>,
    user: Vec<(String, Formula)>,
}

impl AxiomBase {
    pub fn empty() -> Self {
        AxiomBase::default()
    }

    pub fn of(named: &[NamedAxiom]) -> Self {
        AxiomBase {
            named: named.iter().copied().collect(),
            user: Vec::new(),
        }
    }

    pub fn with(mut self, a: NamedAxiom) -> Self {
        self.named.insert(a);
        self
    }

    /// Adds a user formula; it is referenced in derivations by its printed form.
    pub fn with_formula(mut self, f: Formula) -> Self {
        let name = f.to_string();
        if !self.user.iter().any(|(n, _)| *n == name) {
            self.user.push((name, f));
            self.user.sort();
        }
        self
    }

    /// Comma-separated names and/or formulas; `none` or the empty string is ∅.
    pub fn parse_list(text: &str) -> Result<Self, AxiomError> {
        let mut base = AxiomBase::empty();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty() && *s != "none") {
            base = base.with_item(item)?;
        }
        Ok(base)
    }

    pub fn with_item(self, item: &str) -> Result<Self, AxiomError> {
        if let Some(a) = NamedAxiom::from_name(item) {
            return Ok(self.with(a));
        }
        let f = parse(item).map_err(|_| AxiomError::Unknown(item.to_string()))?;
        Ok(self.with_formula(f))
    }

    pub fn named(&self) -> impl Iterator<Item = NamedAxiom> + '_ {
        self.named.iter().copied()
    }

    pub fn contains(&self, a: NamedAxiom) -> bool {
        self.named.contains(&a)
    }

    pub fn is_empty(&self) -> bool {
        self.named.is_empty() && self.user.is_empty()
    }

    pub fn is_subset(&self, other: &AxiomBase) -> bool {
        self.named.is_subset(&other.named) && self.user.iter().all(|u| other.user.contains(u))
    }

    /// `(name, formula)` for every extra axiom.
    pub fn members(&self) -> Vec<(String, Formula)> {
        self.named
            .iter()
            .map(|a| (a.name().to_string(), a.formula()))
            .chain(self.user.iter().cloned())
            .collect()
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.members().into_iter().map(|(_, f)| f).collect()
    }

    /// Every schema usable at an Ax leaf: the fixed base and the extra axioms.
    pub fn schemas(&self) -> Vec<(String, Formula)> {
        fixed_base()
            .map(|(n, f)| (n.to_string(), f.clone()))
            .chain(self.members())
            .collect()
    }

    /// Looks up a schema by leaf name. Named axioms accept their aliases.
    pub fn schema(&self, name: &str) -> Option<Formula> {
        if let Some(f) = fixed_schema(name) {
            return Some(f.clone());
        }
        if let Some(a) = NamedAxiom::from_name(name) {
            return self.contains(a).then(|| a.formula());
        }
        self.user.iter().find(|(n, _)| n == name).map(|(_, f)| f.clone())
    }
}

impl fmt::Display for AxiomBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<String> = self.members().into_iter().map(|(n, _)| n).collect();
        f.write_str(&names.join(","))
    }
}

impl Serialize for AxiomBase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.members().into_iter().map(|(n, _)| n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_axioms_parse_to_their_formulas() {
        assert_eq!(NamedAxiom::TBox.formula(), parse("(true ~> p) -> p").unwrap());
        assert_eq!(NamedAxiom::FourA.formula(), parse("p ~> (true ~> p)").unwrap());
        assert_eq!(
            NamedAxiom::Pa.formula(),
            parse("(p ~> q) -> (true ~> (p ~> q))").unwrap()
        );
        assert_eq!(NamedAxiom::Em.formula(), parse("p | (p -> false)").unwrap());
        assert_eq!(
            NamedAxiom::Di.formula(),
            parse("(p ~> r) & (q ~> r) -> ((p | q) ~> r)").unwrap()
        );
    }

    #[test]
    fn base_lists() {
        let b = AxiomBase::parse_list("4a, t□,p_a").unwrap();
        assert!(b.contains(NamedAxiom::FourA) && b.contains(NamedAxiom::TBox) && b.contains(NamedAxiom::Pa));
        assert_eq!(b.to_string(), "tbox,4a,pa");
        assert!(AxiomBase::parse_list("").unwrap().is_empty());
        assert!(AxiomBase::parse_list("bogus axiom").is_err());
        let u = AxiomBase::parse_list("[]p -> [][]p").unwrap();
        assert!(u.schema("[]p -> [][]p").is_some());
        assert!(b.schema("k2").is_some());
        assert!(b.schema("di").is_none());
    }
}
