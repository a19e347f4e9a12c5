use std::collections::BTreeSet;

use flatlewis::canonical::{
    build_full_canonical, build_pointed_canonical, u_gamma_phi, verify_truth_lemma, CanonicalConfig, CanonicalError,
    CanonicalFrame, Segment, Sigma,
};
use flatlewis::decide::{Decider, DerivabilityOracle, OracleAnswer};
use flatlewis::proof::{AxiomBase, NamedAxiom};
use flatlewis::syntax::{close_under_single_boxes, parse, parse_consecution, parse_list, subformula_closure};
use flatlewis::{Formula, FormulaSet};

fn set(items: &str) -> FormulaSet {
    parse_list(items).unwrap().into_iter().collect()
}

fn four_a() -> AxiomBase {
    AxiomBase::of(&[NamedAxiom::FourA])
}

fn segment(frame: &CanonicalFrame, gamma: &str, family: &[&str]) -> usize {
    let g = frame.theory_index(&set(gamma)).unwrap();
    let fam: BTreeSet<usize> = family.iter().map(|d| frame.theory_index(&set(d)).unwrap()).collect();
    frame
        .segment_index(&Segment { gamma: g, family: fam })
        .expect("segment present")
}

#[test]
fn full_frame_over_top_and_q_is_not_transitive() {
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let oracle = Decider::default();
    let full = build_full_canonical(&sigma, &four_a(), &oracle, &CanonicalConfig::default()).unwrap();
    assert_eq!(full.theories.len(), 2);
    // every up-closed family passes S2: ∅, {Δ}, {Γ, Δ} for each of the two theories
    assert_eq!(full.len(), 6);
    let a = segment(&full, "true", &["true, q"]);
    let b = segment(&full, "true, q", &["true", "true, q"]);
    let c = segment(&full, "true", &[]);
    assert!(full.r(a, b) && full.r(b, c) && !full.r(a, c));
    assert!(!full.is_transitive());
    assert!(full.frame().is_upward_flat());
    assert!(verify_truth_lemma(&full).holds());
    full.check_segments().unwrap();
}

#[test]
fn pointed_frame_over_unboxed_sigma_is_not_transitive() {
    // Σ lacks □q, so the 4a step of the transitivity argument has nothing to land on.
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let oracle = Decider::default();
    let pointed = build_pointed_canonical(&sigma, &four_a(), &oracle, &CanonicalConfig::default()).unwrap();
    assert_eq!(pointed.len(), 4);
    let a = segment(&pointed, "true", &["true, q"]);
    let b = segment(&pointed, "true, q", &["true", "true, q"]);
    let c = segment(&pointed, "true", &["true", "true, q"]);
    assert!(pointed.r(a, b) && pointed.r(b, c) && !pointed.r(a, c));
    assert!(verify_truth_lemma(&pointed).holds());
}

#[test]
fn pointed_frame_is_transitive_once_sigma_has_single_boxes() {
    let oracle = Decider::default();
    for base in [four_a(), four_a().with(NamedAxiom::TBox)] {
        for seed in ["q", "p ~> q", "q | r"] {
            let sigma = Sigma::new(&close_under_single_boxes(&set(seed))).unwrap();
            let pointed = build_pointed_canonical(&sigma, &base, &oracle, &CanonicalConfig::default()).unwrap();
            assert!(
                pointed.is_transitive(),
                "{seed} over {base}: {:?}",
                pointed.transitivity_witness()
            );
            assert!(verify_truth_lemma(&pointed).holds());
        }
    }
}

#[test]
fn tbox_segments_reach_themselves_from_above() {
    let oracle = Decider::default();
    let base = AxiomBase::of(&[NamedAxiom::TBox]);
    let sigma = Sigma::new(&close_under_single_boxes(&set("p ~> q"))).unwrap();
    let pointed = build_pointed_canonical(&sigma, &base, &oracle, &CanonicalConfig::default()).unwrap();
    for w in 0..pointed.len() {
        assert!(
            (0..pointed.len()).any(|v| pointed.leq(w, v) && pointed.r(v, w)),
            "{}",
            pointed.describe(w)
        );
    }
}

#[test]
fn pointed_segments_are_full_segments() {
    let oracle = Decider::default();
    let sigma = Sigma::new(&subformula_closure(&set("[]p -> q"))).unwrap();
    let cfg = CanonicalConfig::default();
    let full = build_full_canonical(&sigma, &AxiomBase::empty(), &oracle, &cfg).unwrap();
    let pointed = build_pointed_canonical(&sigma, &AxiomBase::empty(), &oracle, &cfg).unwrap();
    assert_eq!(full.theories, pointed.theories);
    for s in &pointed.segments {
        assert!(full.segments.contains(s));
    }
    assert!(verify_truth_lemma(&full).holds());
    assert!(verify_truth_lemma(&pointed).holds());
}

#[test]
fn u_gamma_top_contains_both_theories() {
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let oracle = Decider::default();
    let full = build_full_canonical(&sigma, &four_a(), &oracle, &CanonicalConfig::default()).unwrap();
    let gamma = full.theory_index(&set("true")).unwrap();
    assert_eq!(u_gamma_phi(&full, gamma, &Formula::Top).unwrap().len(), 2);
}

#[test]
fn u_gamma_bot_requires_everything() {
    // ⊢ ⊥ ⊐ ψ for every ψ, so U_{Γ,⊥} is the set of theories containing all of Σ.
    let sigma = Sigma::new(&set("true, false, p")).unwrap();
    let oracle = Decider::default();
    let full = build_full_canonical(&sigma, &AxiomBase::empty(), &oracle, &CanonicalConfig::default()).unwrap();
    for g in 0..full.theories.len() {
        let u = u_gamma_phi(&full, g, &Formula::Bot).unwrap();
        // ⊥ belongs to no consistent theory
        assert!(u.is_empty());
    }
}

#[test]
fn full_frame_refutes_underivable_consecutions() {
    let oracle = Decider::default();
    for text in [
        "=> p | !p",
        "[]p => p",
        "p ~> q => []p",
        "=> (p ~> q) -> p -> q",
        "=> !!p -> p",
    ] {
        let c = parse_consecution(text).unwrap();
        let sigma = Sigma::new(&subformula_closure(&c.premises.with(c.conclusion.clone()))).unwrap();
        assert!(matches!(
            oracle.query(&AxiomBase::empty(), &c.premises, &c.conclusion),
            OracleAnswer::NotDerivable(..)
        ));
        let full = build_full_canonical(&sigma, &AxiomBase::empty(), &oracle, &CanonicalConfig::default()).unwrap();
        let model = full.model();
        assert!(!model.refuting_worlds(&c.premises, &c.conclusion).is_empty(), "{text}");
        assert!(verify_truth_lemma(&full).holds());
    }
}

#[test]
fn oracle_limits_surface_as_errors() {
    // One primeness query over this Σ has no countermodel on four worlds.
    let c = parse_consecution("=> ([]p -> []q) -> p ~> q").unwrap();
    let sigma = Sigma::new(&subformula_closure(&c.premises.with(c.conclusion.clone()))).unwrap();
    let err = build_full_canonical(
        &sigma,
        &AxiomBase::empty(),
        &Decider::default(),
        &CanonicalConfig::default(),
    );
    assert!(matches!(err, Err(CanonicalError::OracleIncomplete(_))));
}

#[test]
fn canonical_frames_meet_the_conditions_of_their_base() {
    use flatlewis::correspondence::{cond_em, cond_str, cond_tbox};
    use flatlewis::syntax::close_under_single_negations;
    let oracle = Decider::default();
    let cfg = CanonicalConfig::default();
    type Case = (NamedAxiom, fn(&flatlewis::kripke::FlatFrame) -> bool, FormulaSet);
    let cases: [Case; 3] = [
        (NamedAxiom::Em, cond_em, close_under_single_negations(&set("p"))),
        (NamedAxiom::TBox, cond_tbox, subformula_closure(&set("[]p -> q"))),
        (NamedAxiom::Str, cond_str, subformula_closure(&set("p ~> q"))),
    ];
    for (axiom, cond, sigma) in cases {
        let sigma = Sigma::new(&sigma).unwrap();
        let base = AxiomBase::of(&[axiom]);
        let full = build_full_canonical(&sigma, &base, &oracle, &cfg).unwrap();
        let pointed = build_pointed_canonical(&sigma, &base, &oracle, &cfg).unwrap();
        assert!(cond(&full.frame()), "full frame for {axiom}");
        assert!(cond(&pointed.frame()), "pointed frame for {axiom}");
        assert!(verify_truth_lemma(&full).holds() && verify_truth_lemma(&pointed).holds());
    }
}

struct Shrug;

impl DerivabilityOracle for Shrug {
    fn query(&self, _: &AxiomBase, _: &FormulaSet, _: &Formula) -> OracleAnswer {
        OracleAnswer::Unknown
    }
}

#[test]
fn unknown_answers_abort() {
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let err = build_full_canonical(&sigma, &AxiomBase::empty(), &Shrug, &CanonicalConfig::default()).unwrap_err();
    assert!(matches!(err, CanonicalError::OracleIncomplete(_)));
}

#[test]
fn segment_cap_is_enforced() {
    let sigma = Sigma::new(&subformula_closure(&set("p | q"))).unwrap();
    let cfg = CanonicalConfig {
        segment_cap: 3,
        ..Default::default()
    };
    let err = build_full_canonical(&sigma, &AxiomBase::empty(), &Decider::default(), &cfg).unwrap_err();
    assert_eq!(err, CanonicalError::SegmentCap { cap: 3 });
}

#[test]
fn dot_mentions_every_segment() {
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let full = build_full_canonical(&sigma, &four_a(), &Decider::default(), &CanonicalConfig::default()).unwrap();
    let dot = full.to_dot();
    assert!(dot.starts_with("digraph"));
    for i in 0..full.len() {
        assert!(dot.contains(&format!("s{i} [label=")));
    }
    let _ = parse("q");
}
