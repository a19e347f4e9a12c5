//! Bounded forward chaining.
//!
//! Schemas are used as forward rules: the antecedents of `A₁ → … → C`
//! (a conjunction `A ∧ B` counts as two) are matched against known facts and
//! `C` is kept when it lies in the pool; schemas with atoms the antecedents
//! do not bind only contribute their instances inside the pool. Non-implicational schemas are instantiated over the
//! pool and always kept. Modus ponens runs between facts, and necessitation
//! applies to implications derived from no premises.

use std::collections::BTreeMap;

use crate::proof::build::{ax_schema, conj, el, mp, na, weaken};
use crate::proof::{AxiomBase, Derivation};
use crate::syntax::{match_pattern, subformula_closure, Formula, FormulaSet, Substitution};

pub type Facts = BTreeMap<Formula, Derivation>;

#[derive(Clone, Debug)]
enum Ante {
    One(Formula),
    Both(Formula, Formula),
}

#[derive(Clone, Debug)]
struct ForwardRule {
    name: String,
    schema: Formula,
    antecedents: Vec<Ante>,
}

fn split(schema: &Formula) -> (Vec<Ante>, Formula) {
    let mut antes = Vec::new();
    let mut cur = schema.clone();
    while let Formula::Imp(a, b) = cur {
        antes.push(match *a {
            Formula::And(x, y) => Ante::Both(*x, *y),
            other => Ante::One(other),
        });
        cur = *b;
    }
    (antes, cur)
}

/// Instances of `pattern` under extensions of `sigma` whose free atoms range over `pool`.
pub(super) fn instantiate(pattern: &Formula, sigma: &Substitution, pool: &[Formula]) -> Vec<Substitution> {
    let mut out = vec![sigma.clone()];
    for a in pattern.atoms() {
        if sigma.get(&a).is_some() {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for s in &out {
            for f in pool {
                let mut t = s.clone();
                t.insert(a.clone(), f.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Implicational schemas kept as forward rules: those whose antecedents bind
/// every atom, apart from the two- and three-premise propositional schemas
/// `k2` and `k8`, which the goal-directed prover covers.
fn forward(name: &str, schema: &Formula, antecedents: &[Ante]) -> bool {
    if name == "k2" || name == "k8" {
        return false;
    }
    let mut bound = std::collections::BTreeSet::new();
    for a in antecedents {
        match a {
            Ante::One(f) => f.collect_atoms(&mut bound),
            Ante::Both(f, g) => {
                f.collect_atoms(&mut bound);
                g.collect_atoms(&mut bound);
            }
        }
    }
    schema.atoms().is_subset(&bound)
}

pub struct Saturation {
    pub facts: Facts,
    /// Rounds actually run.
    pub rounds: usize,
}

/// Forward closure of `ctx` over `base`, with derived formulas restricted to
/// the subformula closure of `ctx ∪ goals`.
pub fn saturate(ctx: &FormulaSet, base: &AxiomBase, depth: usize, goals: &[Formula]) -> Saturation {
    let pool_set = subformula_closure(&ctx.union(&goals.iter().cloned().collect()));
    let theorems = run(&FormulaSet::new(), base, depth, &pool_set, None);
    if ctx.is_empty() {
        return theorems;
    }
    run(ctx, base, depth, &pool_set, Some(&theorems.facts))
}

fn run(
    ctx: &FormulaSet,
    base: &AxiomBase,
    depth: usize,
    pool_set: &FormulaSet,
    theorems: Option<&Facts>,
) -> Saturation {
    let pool: Vec<Formula> = pool_set.iter().cloned().collect();
    let mut rules = Vec::new();
    let mut facts = Facts::new();
    let add = |facts: &mut Facts, d: Derivation| {
        facts.entry(d.conclusion.conclusion.clone()).or_insert(d);
    };
    for m in ctx {
        add(&mut facts, el(ctx, m));
    }
    if let Some(th) = theorems {
        for d in th.values() {
            add(&mut facts, weaken(d.clone(), ctx));
        }
    }
    for (name, schema) in base.schemas() {
        let (antecedents, _) = split(&schema);
        if antecedents.is_empty() {
            for s in instantiate(&schema, &Substitution::new(), &pool) {
                add(&mut facts, ax_schema(&name, &schema, s, ctx));
            }
        } else {
            for target in &pool {
                if let Some(s) = match_pattern(&schema, target, &Substitution::new()) {
                    add(&mut facts, ax_schema(&name, &schema, s, ctx));
                }
            }
            if forward(&name, &schema, &antecedents) {
                rules.push(ForwardRule {
                    name,
                    schema,
                    antecedents,
                });
            }
        }
    }
    let mut rounds = 0;
    while rounds < depth {
        rounds += 1;
        let mut fresh: Vec<Derivation> = Vec::new();
        let known: Vec<(&Formula, &Derivation)> = facts.iter().collect();
        for (f, d) in &known {
            if let Formula::Imp(a, b) = f {
                if pool_set.contains(b) && !facts.contains_key(&**b) {
                    if let Some(da) = facts.get(&**a) {
                        fresh.push(mp(da.clone(), (*d).clone()));
                    }
                }
                if ctx.is_empty() {
                    let s = Formula::sto((**a).clone(), (**b).clone());
                    if pool_set.contains(&s) && !facts.contains_key(&s) {
                        fresh.push(na(ctx, (*d).clone()));
                    }
                }
            }
        }
        if let Some(th) = theorems {
            for (f, d) in th {
                if let Formula::Imp(a, b) = f {
                    let s = Formula::sto((**a).clone(), (**b).clone());
                    if pool_set.contains(&s) && !facts.contains_key(&s) {
                        fresh.push(na(ctx, d.clone()));
                    }
                }
            }
        }
        for rule in &rules {
            fire(rule, ctx, &facts, pool_set, &mut fresh);
        }
        let before = facts.len();
        for d in fresh {
            add(&mut facts, d);
        }
        if facts.len() == before {
            break;
        }
    }
    Saturation { facts, rounds }
}

fn fire(rule: &ForwardRule, ctx: &FormulaSet, facts: &Facts, pool_set: &FormulaSet, out: &mut Vec<Derivation>) {
    let (_, head) = split(&rule.schema);
    for target in pool_set {
        if facts.contains_key(target) {
            continue;
        }
        let Some(sigma) = match_pattern(&head, target, &Substitution::new()) else {
            continue;
        };
        if let Some((s, proofs)) = discharge(&rule.antecedents, sigma, facts, Vec::new()) {
            let mut d = ax_schema(&rule.name, &rule.schema, s, ctx);
            for p in proofs {
                d = mp(p, d);
            }
            out.push(d);
        }
    }
}

/// Proofs of the antecedents from `facts`, extending `sigma`.
fn discharge(
    antes: &[Ante],
    sigma: Substitution,
    facts: &Facts,
    proofs: Vec<Derivation>,
) -> Option<(Substitution, Vec<Derivation>)> {
    let Some((first, rest)) = antes.split_first() else {
        return Some((sigma, proofs));
    };
    match first {
        Ante::One(a) => matches(a, &sigma, facts).into_iter().find_map(|(s, d)| {
            let mut p = proofs.clone();
            p.push(d);
            discharge(rest, s, facts, p)
        }),
        Ante::Both(a, b) => matches(a, &sigma, facts).into_iter().find_map(|(s1, da)| {
            matches(b, &s1, facts).into_iter().find_map(|(s2, db)| {
                let mut p = proofs.clone();
                p.push(conj(da.clone(), db));
                discharge(rest, s2, facts, p)
            })
        }),
    }
}

/// Facts matching `pattern` under extensions of `sigma`; a direct lookup
/// when `sigma` already binds every atom.
fn matches(pattern: &Formula, sigma: &Substitution, facts: &Facts) -> Vec<(Substitution, Derivation)> {
    if pattern.atoms().iter().all(|a| sigma.get(a).is_some()) {
        return facts
            .get(&pattern.substitute(sigma))
            .map(|d| vec![(sigma.clone(), d.clone())])
            .unwrap_or_default();
    }
    facts
        .iter()
        .filter_map(|(f, d)| match_pattern(pattern, f, sigma).map(|s| (s, d.clone())))
        .collect()
}
