//! Lookup of shipped fixtures by instance matching.

use crate::proof::build::{subst, weaken};
use crate::proof::{fixture_library, AxiomBase, Derivation, Fixture};
use crate::syntax::{match_pattern, Consecution, Formula, Substitution};

fn match_premises(pattern: &[&Formula], targets: &[&Formula], sigma: Substitution) -> Option<Substitution> {
    let Some((first, rest)) = pattern.split_first() else {
        return Some(sigma);
    };
    targets
        .iter()
        .find_map(|t| match_pattern(first, t, &sigma).and_then(|s| match_premises(rest, targets, s)))
}

/// A fixture over a sub-base whose root has `c` as an instance, turned into
/// a derivation of `c` with substitution and weakening macro nodes.
pub fn lookup(c: &Consecution, base: &AxiomBase) -> Option<Derivation> {
    library()
        .iter()
        .filter(|fx| fx.base.is_subset(base))
        .find_map(|fx| instance_of(fx, c))
}

fn library() -> &'static [Fixture] {
    static CELL: std::sync::OnceLock<Vec<Fixture>> = std::sync::OnceLock::new();
    CELL.get_or_init(fixture_library)
}

fn instance_of(fx: &Fixture, c: &Consecution) -> Option<Derivation> {
    let root = &fx.derivation.conclusion;
    let sigma = match_pattern(&root.conclusion, &c.conclusion, &Substitution::new())?;
    let pattern: Vec<&Formula> = root.premises.iter().collect();
    let targets: Vec<&Formula> = c.premises.iter().collect();
    let sigma = match_premises(&pattern, &targets, sigma)?;
    let d = if sigma.iter().all(|(a, f)| *f == Formula::Atom(a.clone())) {
        fx.derivation.clone()
    } else {
        subst(fx.derivation.clone(), sigma)
    };
    Some(weaken(d, &c.premises))
}
