//! One check per acceptance criterion. Runs without the libtest harness so
//! that every PASS/FAIL line reaches the output.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{battery, flat_frames_up_to_3, models, sharp_flat_mismatch, sharp_models};
use flatlewis::algebra::{algebra_validates, check_lhae_laws, complex_algebra};
use flatlewis::canonical::{build_full_canonical, build_pointed_canonical, verify_truth_lemma, CanonicalConfig, Sigma};
use flatlewis::correspondence::{collapse_checks, correspondence_harness, Sweep, CONDITIONS};
use flatlewis::decide::{base_frames, certificate, decide, Budget, Prover, Verdict};
use flatlewis::kripke::{find_refutation, validates, validates_consecution};
use flatlewis::proof::{check, fixture, fixture_library, AxiomBase, NamedAxiom};
use flatlewis::reproduce::{
    di_countermodel_model, directed_frame, extension_instability_model, reverse_lb_countermodel_model,
};
use flatlewis::syntax::{parse, parse_consecution, parse_list, stability_translation, subformula_closure};
use flatlewis::{Atom, Consecution, Exec, Formula, FormulaSet};

enum Outcome {
    Pass(String),
    Fail(String),
    /// Fails as specified; the accompanying analysis is still asserted.
    KnownFail(String),
}

struct Line {
    n: usize,
    title: &'static str,
    outcome: Outcome,
    elapsed: Duration,
}

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn set(s: &str) -> FormulaSet {
    parse_list(s).unwrap().into_iter().collect()
}

/// Collects failed sub-claims.
#[derive(Default)]
struct Claims(Vec<String>);

impl Claims {
    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        if self.0.is_empty() {
            Outcome::Pass(summary)
        } else {
            Outcome::Fail(self.0.join("; "))
        }
    }
}

fn within(c: &mut Claims, limit: Duration, start: Instant, what: &str) {
    let t = start.elapsed();
    c.that(t < limit, format!("{what} took {t:?}, limit {limit:?}"));
}

fn forcing(c: &mut Claims, m: &flatlewis::kripke::FlatModel, facts: &[(&str, bool)]) {
    for &(phi, expected) in facts {
        let got = m.forces_at("w", &f(phi)).unwrap();
        c.that(
            got == expected,
            format!("w forces {phi}: got {got}, expected {expected}"),
        );
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut c = Claims::default();
    let m = di_countermodel_model();
    forcing(
        &mut c,
        &m,
        &[("p ~> r", true), ("q ~> r", true), ("(p | q) ~> r", false)],
    );
    within(&mut c, Duration::from_secs(1), start, "evaluation");
    c.outcome(format!("{}-world fan refutes di at w", m.frame().len()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut c = Claims::default();
    let m = reverse_lb_countermodel_model();
    forcing(&mut c, &m, &[("[]p -> []q", true), ("p ~> q", false)]);
    within(&mut c, Duration::from_secs(1), start, "evaluation");
    c.outcome(format!("{}-world model refutes reverse lb at w", m.frame().len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut c = Claims::default();
    let mut total = 0;
    for &cond in CONDITIONS {
        let r = correspondence_harness(cond, &Sweep::new(cond.class, 4).with_samples(500));
        c.that(
            r.sampled_frames >= 500,
            format!("{}: only {} samples", cond.axiom, r.sampled_frames),
        );
        c.that(
            r.passed(),
            format!("{} on {}: {:?}", cond.axiom, cond.class, r.discrepancies.first()),
        );
        total += r.exhaustive_frames + r.sampled_frames;
    }
    let axioms: Vec<String> = CONDITIONS.iter().map(|k| format!("{}/{}", k.axiom, k.class)).collect();
    c.that(axioms.len() == 6, "expected six axiom/mode rows");
    within(&mut c, Duration::from_secs(300), start, "sweep");
    c.outcome(format!("{} rows, {total} frame checks, no discrepancies", axioms.len()))
}

fn criterion_4() -> Outcome {
    let mut c = Claims::default();
    let frames = flat_frames_up_to_3();
    let battery = battery();
    c.that(battery.len() >= 20, "battery too small");
    for a in NamedAxiom::ALL {
        c.that(battery.contains(&a.formula()), format!("battery misses {a}"));
    }
    let bad_laws = Exec::default().filter(&frames, |fr| !check_lhae_laws(&complex_algebra(fr)).flat_laws_hold());
    c.that(bad_laws.is_empty(), format!("(a) laws fail on {:?}", bad_laws.first()));
    let bad_validity = Exec::default().filter(&frames, |fr| {
        let a = complex_algebra(fr);
        battery
            .iter()
            .any(|phi| validates(fr, phi) != algebra_validates(&a, phi))
    });
    c.that(
        bad_validity.is_empty(),
        format!("(b) validity differs on {:?}", bad_validity.first()),
    );
    let bad_tables = Exec::default().filter(&frames, |fr| {
        complex_algebra(fr).tables() != complex_algebra(&fr.upward_close()).tables()
    });
    c.that(
        bad_tables.is_empty(),
        format!("(c) tables differ on {:?}", bad_tables.first()),
    );
    c.outcome(format!("{} frames, {} formulas", frames.len(), battery.len()))
}

fn criterion_5() -> Outcome {
    let mut c = Claims::default();
    let atoms = ["p", "q"];
    let all = sharp_models(3, &atoms);
    let rows = Exec::default().map(&all, |m| {
        let (image, _) = m.to_flat();
        let shape = image.frame().is_upward_flat() && image.frame().is_pointwise_downward_directed();
        let (bad, classes) = sharp_flat_mismatch(m, &atoms, 3);
        (shape, bad, classes)
    });
    let mut classes = 0;
    for ((shape, bad, k), m) in rows.iter().zip(&all) {
        c.that(*shape, format!("image of {:?} has the wrong shape", m.frame()));
        c.that(bad.is_none(), format!("{:?} differs on {:?}", bad, m.frame()));
        classes += k;
    }
    c.outcome(format!(
        "{} sharp models, {classes} formula classes up to depth 3",
        all.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut c = Claims::default();
    let sigma = Sigma::new(&set("true, q")).unwrap();
    let base = AxiomBase::of(&[NamedAxiom::FourA]);
    let oracle = flatlewis::decide::Decider::default();
    let config = CanonicalConfig::default();
    let full = build_full_canonical(&sigma, &base, &oracle, &config).unwrap();
    let pointed = build_pointed_canonical(&sigma, &base, &oracle, &config).unwrap();
    c.that(
        full.theories.len() == 2,
        format!("{} prime theories", full.theories.len()),
    );
    let gamma = full.theory_index(&set("true"));
    let delta = full.theory_index(&set("true, q"));
    let triple = match (gamma, delta) {
        (Some(g), Some(d)) => {
            let seg = |t, fam: &[usize]| {
                full.segment_index(&flatlewis::canonical::Segment {
                    gamma: t,
                    family: fam.iter().copied().collect(),
                })
            };
            match (seg(g, &[d]), seg(d, &[g, d]), seg(g, &[])) {
                (Some(a), Some(b), Some(z)) => full.r(a, b) && full.r(b, z) && !full.r(a, z),
                _ => false,
            }
        }
        _ => false,
    };
    c.that(triple, "the non-transitive segment triple is missing");
    c.that(!full.is_transitive(), "full R is transitive");
    c.that(verify_truth_lemma(&full).holds(), "truth lemma fails on the full frame");
    c.that(
        verify_truth_lemma(&pointed).holds(),
        "truth lemma fails on the pointed frame",
    );
    if !c.0.is_empty() {
        return c.outcome(String::new());
    }
    match pointed.transitivity_witness() {
        None => Outcome::Pass(format!("{} full and {} pointed segments", full.len(), pointed.len())),
        Some((a, b, z)) => {
            // Σ = {⊤, q} lacks □q, so a pointed segment can see one whose
            // family drops Δ. Closing Σ under single boxes restores transitivity.
            let boxed = Sigma::new(&flatlewis::syntax::close_under_single_boxes(&set("q"))).unwrap();
            let fixed = build_pointed_canonical(&boxed, &base, &oracle, &config).unwrap();
            assert!(fixed.is_transitive() && verify_truth_lemma(&fixed).holds());
            Outcome::KnownFail(format!(
                "pointed R over {{⊤, q}} is not transitive: {} R {} R {} but not {} R {}; transitive over the single-box closure",
                pointed.describe(a),
                pointed.describe(b),
                pointed.describe(z),
                pointed.describe(a),
                pointed.describe(z)
            ))
        }
    }
}

fn criterion_7() -> Outcome {
    let mut c = Claims::default();
    let frame = directed_frame();
    let di = NamedAxiom::Di.formula();
    let all = models(&frame, &["p", "q", "r"]);
    let refuted = all
        .iter()
        .filter(|m| (0..frame.len()).any(|w| !m.forces(w, &di).unwrap()))
        .count();
    c.that(refuted == 0, format!("{refuted} valuations refute di"));
    c.that(validates(&frame, &di), "validity check disagrees");
    let m = extension_instability_model();
    c.that(
        m.frame().isomorphic(&frame),
        "the countermodel sits on a different frame",
    );
    let s = Atom::new("s");
    let z = m.frame().index_of("z").unwrap();
    let vs = m.value(&s);
    c.that(
        (0..frame.len()).all(|w| vs.contains(w) == (w != z)),
        "V(s) is not W minus z",
    );
    let target = Formula::imp(Formula::Atom(s.clone()), stability_translation(&di, &s).unwrap());
    c.that(!m.forces_at("w", &target).unwrap(), "w forces s -> st(di)");
    c.outcome(format!(
        "di holds under all {} valuations; s -> st(di) fails at w",
        all.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut c = Claims::default();
    let results = collapse_checks(3, Exec::default());
    c.that(results.len() == 2, "expected two collapse sweeps");
    let mut parts = Vec::new();
    for r in &results {
        c.that(r.applicable > 0, format!("{}: no applicable frames", r.name));
        c.that(
            r.discrepancies.is_empty(),
            format!("{}: {:?}", r.name, r.discrepancies.first()),
        );
        parts.push(format!("{} on {}/{}", r.name, r.applicable, r.frames));
    }
    c.outcome(parts.join(", "))
}

fn criterion_9() -> Outcome {
    let mut c = Claims::default();
    for (name, root) in [
        ("bl", "=> [](p -> q) -> p ~> q"),
        ("lb", "=> (p ~> q) -> []p -> []q"),
        ("boxbox-to-box", "=> [][]p -> []p"),
        ("box-to-boxbox", "=> []p -> [][]p"),
    ] {
        match fixture(name) {
            Some(fx) => {
                c.that(
                    fx.derivation.conclusion == parse_consecution(root).unwrap(),
                    format!("{name}: wrong root"),
                );
                c.that(
                    check(&fx.derivation, &fx.base).is_ok(),
                    format!("{name}: does not check"),
                );
            }
            None => c.that(false, format!("{name}: missing")),
        }
    }
    let frames = flat_frames_up_to_3();
    let library = fixture_library();
    for fx in &library {
        let axioms = fx.base.formulas();
        let bad = Exec::default().filter(&frames, |fr| {
            axioms.iter().all(|a| validates(fr, a)) && !validates_consecution(fr, &fx.derivation.conclusion)
        });
        c.that(bad.is_empty(), format!("{} unsound on {:?}", fx.name, bad.first()));
    }
    c.outcome(format!("{} fixtures sound on {} frames", library.len(), frames.len()))
}

fn refutable(q: &Consecution, base: &AxiomBase) -> bool {
    (1..=3).any(|n| {
        base_frames(base, n, Exec::default())
            .iter()
            .any(|fr| find_refutation(fr, q).is_some())
    })
}

fn provable(q: &Consecution, base: &AxiomBase) -> bool {
    let pool = subformula_closure(&q.premises.with(q.conclusion.clone())).to_vec();
    let mut prover = Prover::new(base, pool, 5_000, None);
    (0..=3).any(|d| prover.prove(&q.premises, &q.conclusion, d).is_some())
}

fn criterion_10() -> Outcome {
    let mut c = Claims::default();
    let empty = AxiomBase::empty();

    let start = Instant::now();
    match decide(
        &Consecution::theorem(NamedAxiom::Di.formula()),
        &empty,
        &Budget::default(),
    ) {
        Verdict::Invalid { model, .. } => c.that(model.frame().len() <= 3, "di countermodel too large"),
        v => c.that(false, format!("di: {}", v.label())),
    }
    within(&mut c, Duration::from_secs(10), start, "di");

    let start = Instant::now();
    let reverse = Consecution::theorem(f("([]p -> []q) -> p ~> q"));
    c.that(
        decide(&reverse, &empty, &Budget::default()).is_invalid(),
        "reverse lb not refuted",
    );
    within(&mut c, Duration::from_secs(30), start, "reverse lb");

    for (base, text) in [
        (empty.clone(), "p ~> p"),
        (empty.clone(), "[]a ~> []a"),
        (empty.clone(), "(p ~> q) & (p ~> r) -> p ~> q & r"),
        (empty.clone(), "(a | b ~> c) & (a | b ~> !c) -> a | b ~> c & !c"),
        (empty.clone(), "(p ~> q) & (q ~> r) -> p ~> r"),
        (empty.clone(), "([]a ~> b) & (b ~> c | d) -> []a ~> c | d"),
    ] {
        let start = Instant::now();
        let q = Consecution::theorem(f(text));
        match certificate(&q, &base) {
            Some(d) => c.that(
                check(&d, &base).is_ok(),
                format!("certificate for {text} does not check"),
            ),
            None => c.that(false, format!("no certificate for {text}")),
        }
        c.that(
            decide(&q, &base, &Budget::default()).is_valid(),
            format!("{text} not valid over {base}"),
        );
        within(&mut c, Duration::from_secs(1), start, text);
    }

    let mut bases = vec![empty.clone()];
    bases.extend(NamedAxiom::ALL.iter().map(|a| AxiomBase::of(&[*a])));
    bases.push(AxiomBase::of(&[NamedAxiom::TBox, NamedAxiom::FourA]));
    let mut runs = 0;
    let budget = Budget {
        proof_steps: 5_000,
        wall_clock_ms: 5_000,
        ..Budget::default()
    };
    for base in &bases {
        for phi in battery() {
            let q = Consecution::theorem(phi);
            let v = decide(&q, base, &budget);
            let refuted = refutable(&q, base);
            let proved = provable(&q, base);
            c.that(
                !(v.is_valid() && refuted),
                format!("{q} over {base}: valid yet refutable"),
            );
            c.that(!(proved && refuted), format!("{q} over {base}: proof and countermodel"));
            c.that(
                !(v.is_invalid() && proved),
                format!("{q} over {base}: invalid yet provable"),
            );
            runs += 1;
        }
    }
    c.outcome(format!("{runs} battery queries without contradiction"))
}

fn main() -> ExitCode {
    type Run = fn() -> Outcome;
    let criteria: [(&str, Run); 10] = [
        ("di fan countermodel", criterion_1),
        ("reverse lb countermodel", criterion_2),
        ("correspondence sweep", criterion_3),
        ("complex algebras", criterion_4),
        ("sharp to flat", criterion_5),
        ("canonical frames over {⊤, q}", criterion_6),
        ("extension instability", criterion_7),
        ("collapse sweeps", criterion_8),
        ("proof fixtures", criterion_9),
        ("decision procedure", criterion_10),
    ];
    let mut lines = Vec::new();
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let line = Line {
            n: i + 1,
            title,
            outcome,
            elapsed: start.elapsed(),
        };
        let (tag, detail) = match &line.outcome {
            Outcome::Pass(d) => ("PASS", d.clone()),
            Outcome::Fail(d) => ("FAIL", d.clone()),
            Outcome::KnownFail(d) => ("FAIL", format!("known: {d}")),
        };
        println!(
            "criterion {:>2} {tag} {} ({:.2?}): {detail}",
            line.n, line.title, line.elapsed
        );
        lines.push(line);
    }
    let failed: Vec<usize> = lines
        .iter()
        .filter(|l| matches!(l.outcome, Outcome::Fail(_)))
        .map(|l| l.n)
        .collect();
    let known = lines
        .iter()
        .filter(|l| matches!(l.outcome, Outcome::KnownFail(_)))
        .count();
    println!(
        "acceptance: {} passed, {} failed, {known} known failures",
        lines.len() - failed.len() - known,
        failed.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
