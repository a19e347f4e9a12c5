//! Checked derivations shipped with the crate.
//!
//! Each fixture is stored as a derivation file under `fixtures/proofs/` and
//! is also assembled in code by [`build`]; a test keeps the two in sync.

use super::build::{apply_conj, ax, ax_schema, ded_intro, el, identity, mp, na, sub};
use super::{read_file, AxiomBase, Derivation, NamedAxiom};
use crate::syntax::{parse, Formula, FormulaSet};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub base: AxiomBase,
    pub derivation: Derivation,
}

/// `(file name, summary, text)` of every shipped derivation file.
pub const FILES: &[(&str, &str, &str)] = &[
    (
        "p-sto-p",
        "p ⊐ p by necessitation of an identity",
        include_str!("../../fixtures/proofs/p-sto-p.drv"),
    ),
    ("ka", "the ka axiom", include_str!("../../fixtures/proofs/ka.drv")),
    ("tr", "the tr axiom", include_str!("../../fixtures/proofs/tr.drv")),
    (
        "mp-example",
        "q from p and p → q",
        include_str!("../../fixtures/proofs/mp-example.drv"),
    ),
    ("bl", "□(p → q) → (p ⊐ q)", include_str!("../../fixtures/proofs/bl.drv")),
    (
        "lb",
        "(p ⊐ q) → (□p → □q)",
        include_str!("../../fixtures/proofs/lb.drv"),
    ),
    (
        "boxbox-to-box",
        "□□p → □p from tbox",
        include_str!("../../fixtures/proofs/boxbox-to-box.drv"),
    ),
    (
        "box-to-boxbox",
        "□p → □□p from 4a and tr",
        include_str!("../../fixtures/proofs/box-to-boxbox.drv"),
    ),
    (
        "chain-4a",
        "p ⊐ □q from p ⊐ q under 4a",
        include_str!("../../fixtures/proofs/chain-4a.drv"),
    ),
];

fn f(s: &str) -> Formula {
    parse(s).expect("fixture formula")
}

fn four_a(ctx: &FormulaSet, psi: &Formula) -> Derivation {
    ax_schema("4a", &NamedAxiom::FourA.formula(), sub(&[("p", psi.clone())]), ctx)
}

/// From `Γ ⇒ γ ⊐ ψ`, a proof of `Γ ⇒ γ ⊐ □ψ` using `4a` and `tr`.
pub fn chain_4a(d: Derivation) -> Derivation {
    let ctx = d.conclusion.premises.clone();
    let Formula::Sto(gamma, psi) = d.conclusion.conclusion.clone() else {
        panic!("chain_4a expects a strict implication");
    };
    let boxed = Formula::boxed((*psi).clone());
    let tr = ax(
        "tr",
        &[("p", (*gamma).clone()), ("q", (*psi).clone()), ("r", boxed)],
        &ctx,
    );
    apply_conj(tr, d, four_a(&ctx, &psi))
}

/// Assembles a fixture in code; `None` for unknown names.
pub fn build(name: &str) -> Option<(AxiomBase, Derivation)> {
    let empty = FormulaSet::new();
    let (p, q) = (f("p"), f("q"));
    Some(match name {
        "p-sto-p" => (AxiomBase::empty(), na(&empty, identity(&p, &empty))),
        "ka" => (AxiomBase::empty(), ax("ka", &[], &empty)),
        "tr" => (AxiomBase::empty(), ax("tr", &[], &empty)),
        "mp-example" => {
            let ctx: FormulaSet = [p.clone(), f("p -> q")].into_iter().collect();
            (AxiomBase::empty(), mp(el(&ctx, &p), el(&ctx, &f("p -> q"))))
        }
        "bl" => {
            let h = f("[](p -> q)");
            let ctx: FormulaSet = [h.clone()].into_iter().collect();
            let top = ax("top", &[], &empty);
            let p_top = mp(top, ax("k1", &[("p", Formula::Top), ("q", p.clone())], &empty));
            let p_sto_top = na(&ctx, p_top);
            let p_sto_imp = apply_conj(
                ax("tr", &[("p", p.clone()), ("q", Formula::Top), ("r", f("p -> q"))], &ctx),
                p_sto_top,
                el(&ctx, &h),
            );
            let p_sto_p = na(&ctx, identity(&p, &empty));
            let both = apply_conj(
                ax("ka", &[("p", p.clone()), ("q", p.clone()), ("r", f("p -> q"))], &ctx),
                p_sto_p,
                p_sto_imp,
            );
            let pair = f("p & (p -> q)");
            let inner: FormulaSet = [pair.clone()].into_iter().collect();
            let left = mp(
                el(&inner, &pair),
                ax("k3", &[("p", p.clone()), ("q", f("p -> q"))], &inner),
            );
            let right = mp(
                el(&inner, &pair),
                ax("k4", &[("p", p.clone()), ("q", f("p -> q"))], &inner),
            );
            let pair_q = ded_intro(mp(left, right), &pair, &empty);
            let pair_sto_q = na(&ctx, pair_q);
            let goal = apply_conj(
                ax("tr", &[("p", p.clone()), ("q", pair), ("r", q.clone())], &ctx),
                both,
                pair_sto_q,
            );
            (AxiomBase::empty(), ded_intro(goal, &h, &empty))
        }
        "lb" => {
            let (s, bp) = (f("p ~> q"), f("[]p"));
            let ctx: FormulaSet = [s.clone(), bp.clone()].into_iter().collect();
            let tr = ax("tr", &[("p", Formula::Top), ("q", p.clone()), ("r", q.clone())], &ctx);
            let boxed_q = apply_conj(tr, el(&ctx, &bp), el(&ctx, &s));
            let outer: FormulaSet = [s.clone()].into_iter().collect();
            (
                AxiomBase::empty(),
                ded_intro(ded_intro(boxed_q, &bp, &outer), &s, &empty),
            )
        }
        "boxbox-to-box" => {
            let d = ax_schema("tbox", &NamedAxiom::TBox.formula(), sub(&[("p", f("[]p"))]), &empty);
            (AxiomBase::of(&[NamedAxiom::TBox]), d)
        }
        "box-to-boxbox" => {
            let bp = f("[]p");
            let ctx: FormulaSet = [bp.clone()].into_iter().collect();
            let tr = ax("tr", &[("p", Formula::Top), ("q", p.clone()), ("r", bp.clone())], &ctx);
            let boxed = apply_conj(tr, el(&ctx, &bp), four_a(&ctx, &p));
            (AxiomBase::of(&[NamedAxiom::FourA]), ded_intro(boxed, &bp, &empty))
        }
        "chain-4a" => {
            let s = f("p ~> q");
            let ctx: FormulaSet = [s.clone()].into_iter().collect();
            (AxiomBase::of(&[NamedAxiom::FourA]), chain_4a(el(&ctx, &s)))
        }
        _ => return None,
    })
}

/// Every shipped fixture, read from its derivation file.
pub fn fixture_library() -> Vec<Fixture> {
    FILES
        .iter()
        .map(|&(name, summary, text)| {
            let file = read_file(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
            Fixture {
                name,
                summary,
                base: file.base.unwrap_or_default(),
                derivation: file.root,
            }
        })
        .collect()
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixture_library().into_iter().find(|fx| fx.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check, check_primitive, elaborate, write_file};

    /// Set `FLATLEWIS_BLESS=1` to rewrite the files from the builders.
    #[test]
    fn files_match_builders() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/proofs");
        for &(name, _, text) in FILES {
            let (base, d) = build(name).expect("every file has a builder");
            let expected = write_file(name, &base, &d);
            if std::env::var_os("FLATLEWIS_BLESS").is_some() {
                std::fs::write(format!("{dir}/{name}.drv"), &expected).unwrap();
            } else {
                assert_eq!(text, expected, "{name}.drv is stale");
            }
        }
    }

    #[test]
    fn every_fixture_checks_before_and_after_elaboration() {
        for fx in fixture_library() {
            check(&fx.derivation, &fx.base).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            let prim = elaborate(&fx.derivation).unwrap();
            assert_eq!(prim.conclusion, fx.derivation.conclusion);
            check_primitive(&prim, &fx.base).unwrap_or_else(|e| panic!("{} elaborated: {e}", fx.name));
        }
    }
}
