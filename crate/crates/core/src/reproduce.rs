//! Named pipelines that rebuild each worked example from the data files
//! under `fixtures/` and check every stated fact about it.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::complex_algebra;
use crate::canonical::{build_full_canonical, verify_truth_lemma, CanonicalConfig, CanonicalFrame, Segment, Sigma};
use crate::correspondence::{collapse_checks, correspondence_harness, Sweep, CONDITIONS};
use crate::decide::{decide, Budget, Decider, Verdict};
use crate::kripke::{enumerate_up_to, read_flat_model, validates, FlatFrame, FlatModel, FrameClass, WorldSet};
use crate::par::Exec;
use crate::proof::{AxiomBase, NamedAxiom};
use crate::syntax::{parse, parse_list, stability_translation, Atom, Consecution, Formula, FormulaSet};

pub const DI_COUNTERMODEL: &str = include_str!("../fixtures/di-countermodel/model.fm");
pub const REVERSE_LB_COUNTERMODEL: &str = include_str!("../fixtures/reverse-lb-countermodel/model.fm");
pub const DIRECTED_FRAME: &str = include_str!("../fixtures/directed-frame/frame.fm");
pub const EXTENSION_INSTABILITY: &str = include_str!("../fixtures/extension-instability/model.fm");

/// `(name, summary)` of every target, in the order `all` runs them.
pub const TARGETS: &[(&str, &str)] = &[
    (
        "di-countermodel",
        "three worlds where p ⊐ r and q ⊐ r hold but (p ∨ q) ⊐ r fails",
    ),
    (
        "reverse-lb-countermodel",
        "a cluster where □p → □q holds but p ⊐ q fails",
    ),
    (
        "full-canonical-nontransitive",
        "the full canonical frame over {⊤, q} with 4a has a non-transitive R",
    ),
    (
        "directed-frame",
        "a directed four-world frame validating di whose open subframe does not",
    ),
    ("extension-instability", "the directed frame refutes s → st^s(di)"),
    ("em-str-collapse", "with em and str, p ⊐ q is (p → q) ∨ □⊥"),
    ("tbox-str-collapse", "with tbox and str, p ⊐ q is p → q"),
    (
        "directedness-gives-di",
        "pointwise downward directed flat frames validate di",
    ),
    (
        "correspondence-table",
        "axiom validity matches its frame condition on enumerated frames",
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown reproduce target `{0}` (known: all, {list})", list = TARGETS.iter().map(|t| t.0).collect::<Vec<_>>().join(", "))]
pub struct UnknownTarget(pub String);

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub target: &'static str,
    pub summary: &'static str,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn claim(&mut self, claim: impl Into<String>, passed: bool) -> &mut Self {
        self.0.push(Check {
            claim: claim.into(),
            passed,
            detail: None,
        });
        self
    }

    fn detailed(&mut self, claim: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.0.push(Check {
            claim: claim.into(),
            passed,
            detail: Some(detail.into()),
        });
        self
    }
}

/// Runs one target, or every target for `"all"`.
pub fn reproduce(name: &str) -> Result<Vec<Report>, UnknownTarget> {
    if name == "all" {
        return Ok(TARGETS.iter().map(|&(n, s)| run_target(n, s)).collect());
    }
    let &(n, s) = TARGETS
        .iter()
        .find(|t| t.0 == name)
        .ok_or_else(|| UnknownTarget(name.into()))?;
    Ok(vec![run_target(n, s)])
}

fn run_target(name: &'static str, summary: &'static str) -> Report {
    let start = Instant::now();
    let mut c = Checks::default();
    match name {
        "di-countermodel" => di_countermodel(&mut c),
        "reverse-lb-countermodel" => reverse_lb_countermodel(&mut c),
        "full-canonical-nontransitive" => full_canonical_nontransitive(&mut c),
        "directed-frame" => directed_frame_facts(&mut c),
        "extension-instability" => extension_instability(&mut c),
        "em-str-collapse" => collapse(&mut c, "em+str"),
        "tbox-str-collapse" => collapse(&mut c, "str+tbox"),
        "directedness-gives-di" => directedness_gives_di(&mut c),
        "correspondence-table" => correspondence_table(&mut c),
        _ => unreachable!("target list and dispatch disagree"),
    }
    Report {
        target: name,
        summary,
        checks: c.0,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn f(s: &str) -> Formula {
    parse(s).expect("literal formula")
}

fn model(text: &str) -> FlatModel {
    read_flat_model(text, false).expect("shipped fixture parses")
}

fn forces(c: &mut Checks, m: &FlatModel, world: &str, formula: &str, expected: bool) {
    let got = m.forces_at(world, &f(formula)).expect("fixture world");
    let sign = if expected { "⊩" } else { "⊮" };
    c.claim(format!("{world} {sign} {formula}"), got == expected);
}

pub fn di_countermodel_model() -> FlatModel {
    model(DI_COUNTERMODEL)
}

pub fn reverse_lb_countermodel_model() -> FlatModel {
    model(REVERSE_LB_COUNTERMODEL)
}

pub fn extension_instability_model() -> FlatModel {
    model(EXTENSION_INSTABILITY)
}

pub fn directed_frame() -> FlatFrame {
    crate::kripke::parse_model(DIRECTED_FRAME)
        .and_then(|s| Ok(s.frame()?))
        .expect("shipped fixture parses")
}

fn di_countermodel(c: &mut Checks) {
    let m = di_countermodel_model();
    forces(c, &m, "w", "p ~> r", true);
    forces(c, &m, "w", "q ~> r", true);
    forces(c, &m, "w", "(p | q) ~> r", false);
    c.claim("the frame refutes di", !validates(m.frame(), &NamedAxiom::Di.formula()));
    c.claim(
        "its complex algebra refutes di",
        !complex_algebra(m.frame()).validates(&NamedAxiom::Di.formula()),
    );
}

fn reverse_lb_countermodel(c: &mut Checks) {
    let m = reverse_lb_countermodel_model();
    forces(c, &m, "w", "[]p", false);
    forces(c, &m, "v", "[]p", false);
    forces(c, &m, "w", "[]p -> []q", true);
    forces(c, &m, "w", "p ~> q", false);
    forces(c, &m, "w", "([]p -> []q) -> p ~> q", false);
}

fn set(items: &str) -> FormulaSet {
    parse_list(items).expect("literal list").into_iter().collect()
}

fn find_segment(frame: &CanonicalFrame, gamma: &str, family: &[&str]) -> Option<usize> {
    let gamma = frame.theory_index(&set(gamma))?;
    let family: BTreeSet<usize> = family
        .iter()
        .map(|d| frame.theory_index(&set(d)))
        .collect::<Option<_>>()?;
    frame.segment_index(&Segment { gamma, family })
}

fn full_canonical_nontransitive(c: &mut Checks) {
    let sigma = Sigma::new(&set("true, q")).expect("small sigma");
    let base = AxiomBase::of(&[NamedAxiom::FourA]);
    let oracle = Decider::default();
    let full = match build_full_canonical(&sigma, &base, &oracle, &CanonicalConfig::default()) {
        Ok(frame) => frame,
        Err(e) => {
            c.detailed("the full canonical frame can be built", false, e.to_string());
            return;
        }
    };
    let theories: Vec<String> = full.theories.iter().map(|t| t.to_string()).collect();
    c.detailed(
        "exactly two prime theories",
        full.theories.len() == 2,
        theories.join(" "),
    );
    c.claim(
        "⊬ ⊤ ⊐ q from either theory",
        (0..full.theories.len()).all(|g| full.derives_strict(g, &Formula::Top, &f("q")) == Some(false)),
    );
    let a = find_segment(&full, "true", &["true, q"]);
    let b = find_segment(&full, "true, q", &["true", "true, q"]);
    let z = find_segment(&full, "true", &[]);
    c.claim(
        "segments (Γ,{Δ}), (Δ,{Γ,Δ}) and (Γ,∅) exist",
        a.is_some() && b.is_some() && z.is_some(),
    );
    if let (Some(a), Some(b), Some(z)) = (a, b, z) {
        c.claim("(Γ,{Δ}) R (Δ,{Γ,Δ})", full.r(a, b));
        c.claim("(Δ,{Γ,Δ}) R (Γ,∅)", full.r(b, z));
        c.claim("not (Γ,{Δ}) R (Γ,∅)", !full.r(a, z));
    }
    c.claim("R is not transitive", !full.is_transitive());
    c.claim(
        "the frame refutes 4a",
        !validates(&full.frame(), &NamedAxiom::FourA.formula()),
    );
    let report = verify_truth_lemma(&full);
    c.detailed(
        "truth lemma holds",
        report.holds(),
        format!("{} violations", report.violations.len()),
    );
}

fn directed_frame_facts(c: &mut Checks) {
    let frame = directed_frame();
    let di = NamedAxiom::Di.formula();
    c.claim("the frame is upward-flat", frame.is_upward_flat());
    c.claim(
        "the frame is pointwise downward directed",
        frame.is_pointwise_downward_directed(),
    );
    c.claim("the frame validates di", validates(&frame, &di));
    c.claim(
        "its complex algebra validates di",
        complex_algebra(&frame).validates(&di),
    );
    let mut keep = frame.full_set();
    keep.remove(frame.index_of("z").expect("fixture world"));
    let open = frame.restrict(&keep);
    c.claim(
        "removing z leaves the di countermodel frame",
        open.isomorphic(di_countermodel_model().frame()),
    );
    c.claim("the open subframe refutes di", !validates(&open, &di));
}

fn extension_instability(c: &mut Checks) {
    let m = extension_instability_model();
    let s = Atom::new("s");
    let st = stability_translation(&NamedAxiom::Di.formula(), &s).expect("s is fresh in di");
    let target = Formula::imp(Formula::Atom(s.clone()), st);
    let shown = f("s -> ((s -> p) ~> (s -> r)) & ((s -> q) ~> (s -> r)) -> (s -> p | q) ~> (s -> r)");
    c.claim("the translation matches its displayed form", target == shown);
    c.claim("V(s) is the complement of z", {
        let z = m.frame().index_of("z").expect("fixture world");
        m.value(&s) == WorldSet::singleton(m.frame().len(), z).complement(m.frame().len())
    });
    c.claim(
        "the frame validates di",
        validates(m.frame(), &NamedAxiom::Di.formula()),
    );
    let refuted = !m.forces_at("w", &target).expect("fixture world");
    c.claim("w ⊮ s → st^s(di)", refuted);
    let q = Consecution::theorem(target);
    let verdict = decide(&q, &AxiomBase::of(&[NamedAxiom::Di]), &Budget::default());
    let detail = match &verdict {
        Verdict::Invalid { model, .. } => format!("countermodel with {} worlds", model.frame().len()),
        other => other.label().to_string(),
    };
    c.detailed("decide refutes s → st^s(di) over di", verdict.is_invalid(), detail);
}

fn collapse(c: &mut Checks, which: &str) {
    for r in collapse_checks(3, Exec::default())
        .into_iter()
        .filter(|r| r.name == which)
    {
        c.detailed(
            format!("{} on upward-flat frames up to 3 worlds", r.equivalence),
            r.discrepancies.is_empty() && r.applicable > 0,
            format!(
                "{} of {} frames applicable, {} discrepancies",
                r.applicable,
                r.frames,
                r.discrepancies.len()
            ),
        );
    }
}

fn directedness_gives_di(c: &mut Checks) {
    let di = NamedAxiom::Di.formula();
    let frames = enumerate_up_to(3, FrameClass::Flat);
    let rows = Exec::default().map(&frames, |fr| (fr.is_pointwise_downward_directed(), validates(fr, &di)));
    let directed = rows.iter().filter(|r| r.0).count();
    let bad = rows.iter().filter(|r| r.0 && !r.1).count();
    c.detailed(
        "every directed flat frame up to 3 worlds validates di",
        bad == 0 && directed > 0,
        format!("{directed} of {} frames directed, {bad} counterexamples", frames.len()),
    );
    c.claim(
        "the directed four-world frame validates di",
        validates(&directed_frame(), &di),
    );
}

fn correspondence_table(c: &mut Checks) {
    for &cond in CONDITIONS {
        let r = correspondence_harness(cond, &Sweep::new(cond.class, 4).with_samples(500));
        c.detailed(
            format!("{} ⟺ {} on {} frames", cond.axiom, cond.name, cond.class),
            r.passed(),
            format!(
                "{} exhaustive + {} sampled, {} discrepancies",
                r.exhaustive_frames,
                r.sampled_frames,
                r.discrepancies.len()
            ),
        );
    }
}
