//! Constructors that compute conclusions, for assembling derivations in code.

use super::axioms::fixed_schema;
use super::{Derivation, Rule};
use crate::syntax::{Consecution, Formula, FormulaSet, Substitution};

pub fn sub(pairs: &[(&str, Formula)]) -> Substitution {
    pairs.iter().cloned().collect()
}

/// Ax leaf for an arbitrary schema.
pub fn ax_schema(name: &str, schema: &Formula, subst: Substitution, ctx: &FormulaSet) -> Derivation {
    let conclusion = Consecution::new(ctx.clone(), schema.substitute(&subst));
    Derivation::new(
        Rule::Ax {
            name: name.to_string(),
            subst,
        },
        conclusion,
        vec![],
    )
}

/// Ax leaf for a fixed-base schema (`k1`..`k10`, `top`, `ka`, `tr`).
pub fn ax(name: &str, pairs: &[(&str, Formula)], ctx: &FormulaSet) -> Derivation {
    let schema = fixed_schema(name).unwrap_or_else(|| panic!("no fixed schema `{name}`"));
    ax_schema(name, schema, sub(pairs), ctx)
}

pub fn el(ctx: &FormulaSet, member: &Formula) -> Derivation {
    debug_assert!(ctx.contains(member));
    Derivation::new(
        Rule::El { member: member.clone() },
        Consecution::new(ctx.clone(), member.clone()),
        vec![],
    )
}

/// From `Γ ⇒ φ` and `Γ ⇒ φ → ψ`.
pub fn mp(minor: Derivation, major: Derivation) -> Derivation {
    let psi = match &major.conclusion.conclusion {
        Formula::Imp(a, b) if **a == minor.conclusion.conclusion => (**b).clone(),
        other => panic!("mp: `{other}` does not start with `{}`", minor.conclusion.conclusion),
    };
    let conclusion = Consecution::new(major.conclusion.premises.clone(), psi);
    Derivation::new(Rule::Mp, conclusion, vec![minor, major])
}

/// From `∅ ⇒ φ → ψ` to `ctx ⇒ φ ⊐ ψ`.
pub fn na(ctx: &FormulaSet, child: Derivation) -> Derivation {
    let Formula::Imp(a, b) = &child.conclusion.conclusion else {
        panic!("na: `{}` is not an implication", child.conclusion.conclusion);
    };
    let conclusion = Consecution::new(ctx.clone(), Formula::sto((**a).clone(), (**b).clone()));
    Derivation::new(Rule::Na, conclusion, vec![child])
}

pub fn weaken(child: Derivation, ctx: &FormulaSet) -> Derivation {
    if &child.conclusion.premises == ctx {
        return child;
    }
    let conclusion = Consecution::new(ctx.clone(), child.conclusion.conclusion.clone());
    Derivation::new(Rule::Weaken, conclusion, vec![child])
}

/// From `ctx, φ ⇒ ψ` to `ctx ⇒ φ → ψ`.
pub fn ded_intro(child: Derivation, phi: &Formula, ctx: &FormulaSet) -> Derivation {
    let conclusion = Consecution::new(
        ctx.clone(),
        Formula::imp(phi.clone(), child.conclusion.conclusion.clone()),
    );
    Derivation::new(Rule::DedIntro, conclusion, vec![child])
}

/// From `Γ ⇒ φ → ψ` to `Γ, φ ⇒ ψ`.
pub fn ded_elim(child: Derivation) -> Derivation {
    let Formula::Imp(a, b) = &child.conclusion.conclusion else {
        panic!("ded_elim: not an implication");
    };
    let conclusion = Consecution::new(child.conclusion.premises.with((**a).clone()), (**b).clone());
    Derivation::new(Rule::DedElim, conclusion, vec![child])
}

pub fn subst(child: Derivation, sigma: Substitution) -> Derivation {
    let conclusion = child.conclusion.substitute(&sigma);
    Derivation::new(Rule::Subst { subst: sigma }, conclusion, vec![child])
}

/// `ctx ⇒ φ ∧ ψ` from proofs of both conjuncts (same context).
pub fn conj(a: Derivation, b: Derivation) -> Derivation {
    let ctx = a.conclusion.premises.clone();
    let k5 = ax(
        "k5",
        &[
            ("p", a.conclusion.conclusion.clone()),
            ("q", b.conclusion.conclusion.clone()),
        ],
        &ctx,
    );
    mp(b, mp(a, k5))
}

/// Applies the theorem `φ₁ ∧ … → ψ`-shaped axiom `major` to proofs of its
/// antecedent conjuncts (left-nested as in the schema).
pub fn apply_conj(major: Derivation, a: Derivation, b: Derivation) -> Derivation {
    mp(conj(a, b), major)
}

/// `ctx ⇒ φ → ψ` from `ctx ⇒ ψ` (via `k1`).
pub fn imp_const(d: Derivation, phi: &Formula) -> Derivation {
    let ctx = d.conclusion.premises.clone();
    let k1 = ax(
        "k1",
        &[("p", d.conclusion.conclusion.clone()), ("q", phi.clone())],
        &ctx,
    );
    mp(d, k1)
}

/// `ctx ⇒ φ → φ`
pub fn identity(phi: &Formula, ctx: &FormulaSet) -> Derivation {
    ax("k10", &[("p", phi.clone())], ctx)
}

/// `ctx ⇒ φ` from `ctx ⇒ ⊥`.
pub fn ex_falso(bot: Derivation, phi: &Formula) -> Derivation {
    let ctx = bot.conclusion.premises.clone();
    mp(bot, ax("k9", &[("p", phi.clone())], &ctx))
}
