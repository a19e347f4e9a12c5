//! Depth-bounded goal-directed proof search.
//!
//! Right rules follow the shape of the goal, left rules use disjunctions and
//! implications among the facts of the context, and the extra axioms of the
//! base are applied backwards by matching their consequent. Every result is
//! an ordinary derivation and is checked by the caller.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use crate::proof::build::{ax, ax_schema, conj, ded_intro, el, ex_falso, identity, imp_const, mp, na};
use crate::proof::{chain_4a, fixed_base, AxiomBase, Derivation, NamedAxiom};
use crate::syntax::{match_pattern, Atom, Formula, FormulaSet, Substitution};

use super::saturate::{instantiate, Facts};

type Goal = (FormulaSet, Formula);

struct Backward {
    /// Usable forwards without growing formulas, as `□p → p` or `(p → q) → (p ⊐ q)`.
    shrinking: bool,
    name: String,
    schema: Formula,
    antecedent: Formula,
    head: Formula,
}

pub struct Prover {
    schemas: Vec<(String, Formula)>,
    backward: Vec<Backward>,
    pool: Vec<Formula>,
    em: bool,
    four_a: bool,
    steps: usize,
    max_steps: usize,
    deadline: Option<Instant>,
    failed: HashMap<Goal, usize>,
    active: HashSet<Goal>,
    cuts: usize,
    local: HashMap<FormulaSet, Facts>,
}

impl Prover {
    /// `pool` supplies instances for atoms that a backward step leaves free
    /// and the formulas considered for excluded-middle splits.
    pub fn new(base: &AxiomBase, pool: Vec<Formula>, max_steps: usize, deadline: Option<Instant>) -> Self {
        let fixed: HashSet<&str> = fixed_base().map(|(n, _)| n).collect();
        let backward = base
            .schemas()
            .into_iter()
            .filter(|(n, _)| n == "ka" || !fixed.contains(n.as_str()))
            .filter_map(|(n, schema)| match &schema {
                Formula::Imp(a, b) => Some(Backward {
                    shrinking: n != "ka" && b.size() <= a.size() && b.atoms().is_subset(&a.atoms()),
                    antecedent: (**a).clone(),
                    head: (**b).clone(),
                    name: n.clone(),
                    schema: schema.clone(),
                }),
                _ => None,
            })
            .collect();
        Prover {
            schemas: base.schemas(),
            backward,
            pool,
            em: base.contains(NamedAxiom::Em),
            four_a: base.contains(NamedAxiom::FourA),
            steps: 0,
            max_steps,
            deadline,
            failed: HashMap::new(),
            active: HashSet::new(),
            cuts: 0,
            local: HashMap::new(),
        }
    }

    pub fn set_max_steps(&mut self, max_steps: usize) {
        self.max_steps = max_steps;
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// True once the step or time allowance has run out.
    pub fn exhausted(&self) -> bool {
        self.steps >= self.max_steps || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn prove(&mut self, ctx: &FormulaSet, goal: &Formula, depth: usize) -> Option<Derivation> {
        self.steps += 1;
        if self.steps.is_multiple_of(1024) && self.exhausted() {
            return None;
        }
        if self.steps > self.max_steps {
            return None;
        }
        let facts = self.facts(ctx);
        if let Some(d) = facts.get(goal) {
            return Some(d.clone());
        }
        if let Some(bot) = facts.get(&Formula::Bot) {
            return Some(ex_falso(bot.clone(), goal));
        }
        if let Some(d) = self.instance(ctx, goal) {
            return Some(d);
        }
        let key = (ctx.clone(), goal.clone());
        if self.failed.get(&key).is_some_and(|&d| d >= depth) {
            return None;
        }
        if !self.active.insert(key.clone()) {
            self.cuts += 1;
            return None;
        }
        let cuts = self.cuts;
        let found = self.search(ctx, goal, depth, &facts);
        self.active.remove(&key);
        if found.is_none() && self.cuts == cuts && !self.exhausted() {
            let slot = self.failed.entry(key).or_insert(depth);
            *slot = (*slot).max(depth);
        }
        found
    }

    fn search(&mut self, ctx: &FormulaSet, goal: &Formula, depth: usize, facts: &Facts) -> Option<Derivation> {
        if let Some(d) = self.right(ctx, goal, depth, facts) {
            return Some(d);
        }
        if depth == 0 {
            return None;
        }
        if let Some(d) = self.backward(ctx, goal, depth) {
            return Some(d);
        }
        self.left(ctx, goal, depth, facts)
    }

    fn right(&mut self, ctx: &FormulaSet, goal: &Formula, depth: usize, facts: &Facts) -> Option<Derivation> {
        match goal {
            Formula::And(a, b) => {
                let da = self.prove(ctx, a, depth)?;
                let db = self.prove(ctx, b, depth)?;
                Some(conj(da, db))
            }
            Formula::Imp(a, b) => {
                let inner = ctx.with((**a).clone());
                let d = self.prove(&inner, b, depth)?;
                Some(ded_intro(d, a, ctx))
            }
            Formula::Or(a, b) => {
                if let Some(d) = self.prove(ctx, a, depth) {
                    return Some(mp(d, ax("k6", &[("p", (**a).clone()), ("q", (**b).clone())], ctx)));
                }
                let d = self.prove(ctx, b, depth)?;
                Some(mp(d, ax("k7", &[("p", (**a).clone()), ("q", (**b).clone())], ctx)))
            }
            Formula::Sto(a, b) if depth > 0 => self.strict(ctx, a, b, depth, facts),
            _ => None,
        }
    }

    fn strict(
        &mut self,
        ctx: &FormulaSet,
        a: &Formula,
        b: &Formula,
        depth: usize,
        facts: &Facts,
    ) -> Option<Derivation> {
        let empty = FormulaSet::new();
        if let Some(d) = self.prove(&empty, &Formula::imp(a.clone(), b.clone()), depth - 1) {
            return Some(na(ctx, d));
        }
        if let Some(d) = self.pooled(ctx, a, b, depth, facts) {
            return Some(d);
        }
        // Middle formulas for a tr step: endpoints of strict facts and of
        // axiom instances ending in `b` or starting from `a`.
        let mut middles: Vec<Formula> = Vec::new();
        for f in facts.keys() {
            if let Formula::Sto(x, y) = f {
                if **x == *a && **y != *b {
                    middles.push((**y).clone());
                }
                if **y == *b && **x != *a {
                    middles.push((**x).clone());
                }
            }
        }
        for (_, schema) in &self.schemas {
            if let Formula::Sto(x, y) = schema {
                if let Some(s) = match_pattern(y, b, &Substitution::new()) {
                    if x.atoms().iter().all(|v| s.get(v).is_some()) {
                        middles.push(x.substitute(&s));
                    }
                }
                if let Some(s) = match_pattern(x, a, &Substitution::new()) {
                    if y.atoms().iter().all(|v| s.get(v).is_some()) {
                        middles.push(y.substitute(&s));
                    }
                }
            }
        }
        middles.sort();
        middles.dedup();
        for m in middles {
            if m == *a || m == *b {
                continue;
            }
            let Some(left) = self.prove(ctx, &Formula::sto(a.clone(), m.clone()), depth - 1) else {
                continue;
            };
            let Some(right) = self.prove(ctx, &Formula::sto(m.clone(), b.clone()), depth - 1) else {
                continue;
            };
            let tr = ax("tr", &[("p", a.clone()), ("q", m), ("r", b.clone())], ctx);
            return Some(mp(conj(left, right), tr));
        }
        None
    }

    /// `a ⊐ b` from the strict facts `x ⊐ c` of the context with `x` equal
    /// to `a` or `⊤` or provably implied by `a` (and their boxed forms under
    /// `4a`): prove `a ∧ c₁ ∧ … → b` outright,
    /// then combine with `ka` and `tr`.
    fn pooled(
        &mut self,
        ctx: &FormulaSet,
        a: &Formula,
        b: &Formula,
        depth: usize,
        facts: &Facts,
    ) -> Option<Derivation> {
        let mut parts: Vec<(Formula, Derivation)> = Vec::new();
        for (f, d) in facts {
            let Formula::Sto(x, y) = f else { continue };
            if **y == Formula::Top || parts.iter().any(|(c, _)| c == &**y) {
                continue;
            }
            if **x == *a {
                parts.push(((**y).clone(), d.clone()));
            } else if **x == Formula::Top {
                parts.push(((**y).clone(), from_top(ctx, a, d.clone())));
            } else if let Some(dx) = self.prove(&FormulaSet::new(), &Formula::imp(a.clone(), (**x).clone()), depth - 1)
            {
                let tr = ax(
                    "tr",
                    &[("p", a.clone()), ("q", (**x).clone()), ("r", (**y).clone())],
                    ctx,
                );
                parts.push(((**y).clone(), mp(conj(na(ctx, dx), d.clone()), tr)));
            }
        }
        if self.four_a {
            let boxed: Vec<(Formula, Derivation)> = parts
                .iter()
                .map(|(c, d)| (Formula::boxed(c.clone()), chain_4a(d.clone())))
                .filter(|(c, _)| parts.iter().all(|(e, _)| e != c))
                .collect();
            parts.extend(boxed);
        }
        if parts.is_empty() || parts.len() > 8 {
            return None;
        }
        let mut acc = a.clone();
        let empty = FormulaSet::new();
        let mut d_acc = na(ctx, identity(a, &empty));
        for (c, dc) in parts {
            let ka = ax("ka", &[("p", a.clone()), ("q", acc.clone()), ("r", c.clone())], ctx);
            d_acc = mp(conj(d_acc, dc), ka);
            acc = Formula::and(acc, c);
        }
        let inner = self.prove(&empty, &Formula::imp(acc.clone(), b.clone()), depth - 1)?;
        let tr = ax("tr", &[("p", a.clone()), ("q", acc), ("r", b.clone())], ctx);
        Some(mp(conj(d_acc, na(ctx, inner)), tr))
    }

    fn backward(&mut self, ctx: &FormulaSet, goal: &Formula, depth: usize) -> Option<Derivation> {
        for i in 0..self.backward.len() {
            let Some(sigma) = match_pattern(&self.backward[i].head, goal, &Substitution::new()) else {
                continue;
            };
            let ante = self.backward[i].antecedent.clone();
            let candidates = instantiate(&ante, &sigma, &self.pool);
            for s in candidates {
                let premise = ante.substitute(&s);
                if premise == *goal {
                    continue;
                }
                if let Some(d) = self.prove(ctx, &premise, depth - 1) {
                    let b = &self.backward[i];
                    return Some(mp(d, ax_schema(&b.name, &b.schema, s, ctx)));
                }
                if self.exhausted() {
                    return None;
                }
            }
        }
        None
    }

    fn left(&mut self, ctx: &FormulaSet, goal: &Formula, depth: usize, facts: &Facts) -> Option<Derivation> {
        for (f, d) in facts {
            match f {
                Formula::Or(a, b) if !ctx.contains(a) && !ctx.contains(b) => {
                    if let Some(out) = self.cases(ctx, a, b, d.clone(), goal, depth) {
                        return Some(out);
                    }
                }
                Formula::Imp(a, b) if !ctx.contains(b) && !facts.contains_key(&**a) && **a != Formula::Bot => {
                    let Some(da) = self.prove(ctx, a, depth - 1) else {
                        continue;
                    };
                    let db = mp(da, d.clone());
                    let inner = ctx.with((**b).clone());
                    if let Some(dg) = self.prove(&inner, goal, depth - 1) {
                        return Some(mp(db, ded_intro(dg, b, ctx)));
                    }
                }
                _ => {}
            }
            if self.exhausted() {
                return None;
            }
        }
        if self.em {
            let splits: Vec<Formula> = self
                .pool
                .iter()
                .filter(|x| matches!(x, Formula::Atom(_) | Formula::Sto(..)))
                .filter(|x| !facts.contains_key(x) && !facts.contains_key(&Formula::neg((*x).clone())))
                .cloned()
                .collect();
            for x in splits {
                let nx = Formula::neg(x.clone());
                let em = ax_schema(
                    "em",
                    &NamedAxiom::Em.formula(),
                    Substitution::from_iter([(Atom::new("p"), x.clone())]),
                    ctx,
                );
                if let Some(out) = self.cases(ctx, &x, &nx, em, goal, depth) {
                    return Some(out);
                }
            }
        }
        None
    }

    /// `goal` from a proof of `a ∨ b` and proofs of `goal` under each disjunct.
    fn cases(
        &mut self,
        ctx: &FormulaSet,
        a: &Formula,
        b: &Formula,
        or: Derivation,
        goal: &Formula,
        depth: usize,
    ) -> Option<Derivation> {
        let da = self.prove(&ctx.with(a.clone()), goal, depth - 1)?;
        let db = self.prove(&ctx.with(b.clone()), goal, depth - 1)?;
        let k8 = ax("k8", &[("p", a.clone()), ("q", b.clone()), ("r", goal.clone())], ctx);
        let step = mp(ded_intro(db, b, ctx), mp(ded_intro(da, a, ctx), k8));
        Some(mp(or, step))
    }

    fn instance(&self, ctx: &FormulaSet, goal: &Formula) -> Option<Derivation> {
        self.schemas.iter().find_map(|(name, schema)| {
            let s = match_pattern(schema, goal, &Substitution::new())?;
            Some(ax_schema(name, schema, s, ctx))
        })
    }

    /// Closure of the context under conjunction elimination, modus ponens,
    /// and extra axioms whose consequent is no larger than their antecedent.
    fn facts(&mut self, ctx: &FormulaSet) -> Facts {
        if let Some(f) = self.local.get(ctx) {
            return f.clone();
        }
        let mut facts: Facts = ctx.iter().map(|m| (m.clone(), el(ctx, m))).collect();
        loop {
            let mut fresh = Vec::new();
            for (f, d) in &facts {
                match f {
                    Formula::And(a, b) => {
                        let pair = [("p", (**a).clone()), ("q", (**b).clone())];
                        if !facts.contains_key(&**a) {
                            fresh.push(((**a).clone(), mp(d.clone(), ax("k3", &pair, ctx))));
                        }
                        if !facts.contains_key(&**b) {
                            fresh.push(((**b).clone(), mp(d.clone(), ax("k4", &pair, ctx))));
                        }
                    }
                    Formula::Imp(a, b) if !facts.contains_key(&**b) => {
                        if let Some(da) = facts.get(&**a) {
                            fresh.push(((**b).clone(), mp(da.clone(), d.clone())));
                        }
                    }
                    _ => {}
                }
                for bw in &self.backward {
                    if !bw.shrinking {
                        continue;
                    }
                    if let Some(sigma) = match_pattern(&bw.antecedent, f, &Substitution::new()) {
                        let c = bw.head.substitute(&sigma);
                        if !facts.contains_key(&c) {
                            fresh.push((c, mp(d.clone(), ax_schema(&bw.name, &bw.schema, sigma, ctx))));
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for (f, d) in fresh {
                facts.entry(f).or_insert(d);
            }
        }
        self.local.insert(ctx.clone(), facts.clone());
        facts
    }
}

/// `ctx ⊢ a ⊐ c` from `ctx ⊢ ⊤ ⊐ c`, through `a ⊐ ⊤` and `tr`.
fn from_top(ctx: &FormulaSet, a: &Formula, d: Derivation) -> Derivation {
    let Formula::Sto(_, c) = &d.conclusion.conclusion else {
        unreachable!("strict fact")
    };
    let c = (**c).clone();
    let empty = FormulaSet::new();
    let a_top = na(ctx, imp_const(ax("top", &[], &empty), a));
    let tr = ax("tr", &[("p", a.clone()), ("q", Formula::Top), ("r", c)], ctx);
    mp(conj(a_top, d), tr)
}
