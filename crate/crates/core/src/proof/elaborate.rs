//! Expansion of admissible rules into primitive derivations.

use super::build::{ax, el, mp};
use super::derivation::local_shape;
use super::{CheckError, Derivation, Rule};
use crate::syntax::{Consecution, Formula, FormulaSet, Substitution};

/// Returns a derivation with the same root that uses only Ax, El, MP and Na.
///
/// Macro nodes are validated locally; the Ax leaves are not checked against
/// any base (use [`super::check_primitive`] on the result).
pub fn elaborate(d: &Derivation) -> Result<Derivation, CheckError> {
    go(d, &mut Vec::new())
}

fn go(d: &Derivation, path: &mut Vec<usize>) -> Result<Derivation, CheckError> {
    local_shape(d).map_err(|reason| CheckError {
        path: path.clone(),
        rule: d.rule.tag(),
        conclusion: d.conclusion.to_string(),
        reason,
    })?;
    let mut kids = Vec::with_capacity(d.premises.len());
    for (i, k) in d.premises.iter().enumerate() {
        path.push(i);
        kids.push(go(k, path)?);
        path.pop();
    }
    let premises = &d.conclusion.premises;
    Ok(match &d.rule {
        Rule::Ax { .. } | Rule::El { .. } | Rule::Mp | Rule::Na => {
            Derivation::new(d.rule.clone(), d.conclusion.clone(), kids)
        }
        Rule::Weaken => reroot(&kids[0], premises, &|_| None),
        Rule::Cut => {
            let (main, side) = kids.split_last().expect("checked arity");
            reroot(main, premises, &|member| {
                side.iter().find(|s| &s.conclusion.conclusion == member).cloned()
            })
        }
        Rule::Subst { subst } => substitute(&kids[0], subst),
        Rule::DedIntro => {
            let Formula::Imp(phi, _) = &d.conclusion.conclusion else {
                unreachable!("checked shape")
            };
            deduction(&kids[0], phi, premises)
        }
        Rule::DedElim => {
            let Formula::Imp(phi, _) = &kids[0].conclusion.conclusion else {
                unreachable!("checked shape")
            };
            let ctx = premises;
            mp(el(ctx, phi), reroot(&kids[0], ctx, &|_| None))
        }
    })
}

/// Moves the context region of `t` (every node above which no Na occurs) to
/// `ctx`. El leaves are replaced by `replace(member)` when it yields a proof.
fn reroot(t: &Derivation, ctx: &FormulaSet, replace: &dyn Fn(&Formula) -> Option<Derivation>) -> Derivation {
    let conclusion = Consecution::new(ctx.clone(), t.conclusion.conclusion.clone());
    match &t.rule {
        Rule::El { member } => match replace(member) {
            Some(proof) => proof,
            None => Derivation::new(t.rule.clone(), conclusion, vec![]),
        },
        Rule::Ax { .. } => Derivation::new(t.rule.clone(), conclusion, vec![]),
        Rule::Na => Derivation::new(Rule::Na, conclusion, t.premises.clone()),
        Rule::Mp => Derivation::new(
            Rule::Mp,
            conclusion,
            t.premises.iter().map(|k| reroot(k, ctx, replace)).collect(),
        ),
        _ => unreachable!("reroot runs on primitive derivations"),
    }
}

fn substitute(t: &Derivation, sigma: &Substitution) -> Derivation {
    let rule = match &t.rule {
        Rule::Ax { name, subst } => Rule::Ax {
            name: name.clone(),
            subst: subst.then(sigma),
        },
        Rule::El { member } => Rule::El {
            member: member.substitute(sigma),
        },
        other => other.clone(),
    };
    Derivation::new(
        rule,
        t.conclusion.substitute(sigma),
        t.premises.iter().map(|k| substitute(k, sigma)).collect(),
    )
}

/// From a primitive proof of `ctx, φ ⇒ χ`, a primitive proof of `ctx ⇒ φ → χ`.
fn deduction(t: &Derivation, phi: &Formula, ctx: &FormulaSet) -> Derivation {
    let chi = &t.conclusion.conclusion;
    let lift = |d: Derivation| {
        let k1 = ax("k1", &[("p", chi.clone()), ("q", phi.clone())], ctx);
        mp(d, k1)
    };
    match &t.rule {
        Rule::El { member } if member == phi => ax("k10", &[("p", phi.clone())], ctx),
        Rule::El { .. } | Rule::Ax { .. } | Rule::Na => lift(Derivation::new(
            t.rule.clone(),
            Consecution::new(ctx.clone(), chi.clone()),
            t.premises.clone(),
        )),
        Rule::Mp => {
            let alpha = &t.premises[0].conclusion.conclusion;
            let d_alpha = deduction(&t.premises[0], phi, ctx);
            let d_major = deduction(&t.premises[1], phi, ctx);
            let k2 = ax(
                "k2",
                &[("p", phi.clone()), ("q", alpha.clone()), ("r", chi.clone())],
                ctx,
            );
            mp(d_alpha, mp(d_major, k2))
        }
        _ => unreachable!("deduction runs on primitive derivations"),
    }
}
