mod common;

use common::{flat_frames_up_to_3, formula};
use flatlewis::kripke::validates_consecution;
use flatlewis::proof::build::subst;
use flatlewis::proof::{
    build_fixture, check, check_primitive, elaborate, fixture, fixture_library, read_file, write_file, AxiomBase,
    NamedAxiom,
};
use flatlewis::syntax::parse_consecution;
use flatlewis::{Exec, Substitution};
use proptest::prelude::*;

#[test]
fn required_fixtures_check() {
    for (name, base) in [
        ("bl", AxiomBase::empty()),
        ("lb", AxiomBase::empty()),
        ("boxbox-to-box", AxiomBase::of(&[NamedAxiom::TBox])),
        ("box-to-boxbox", AxiomBase::of(&[NamedAxiom::FourA])),
    ] {
        let fx = fixture(name).unwrap();
        assert!(fx.base.is_subset(&base));
        check(&fx.derivation, &base).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let root = |n: &str| fixture(n).unwrap().derivation.conclusion;
    assert_eq!(root("bl"), parse_consecution("=> [](p -> q) -> p ~> q").unwrap());
    assert_eq!(root("lb"), parse_consecution("=> (p ~> q) -> []p -> []q").unwrap());
    assert_eq!(root("boxbox-to-box"), parse_consecution("=> [][]p -> []p").unwrap());
    assert_eq!(root("box-to-boxbox"), parse_consecution("=> []p -> [][]p").unwrap());
}

#[test]
fn fixtures_are_sound_on_small_frames() {
    let frames = flat_frames_up_to_3();
    for fx in fixture_library() {
        let axioms = fx.base.formulas();
        let models = Exec::default().filter(&frames, |f| axioms.iter().all(|a| flatlewis::kripke::validates(f, a)));
        assert!(!models.is_empty());
        let c = &fx.derivation.conclusion;
        let bad = Exec::default().filter(&models, |f| !validates_consecution(f, c));
        assert!(bad.is_empty(), "{}: {:?}", fx.name, bad.first());
    }
}

#[test]
fn checking_commutes_with_elaboration() {
    for fx in fixture_library() {
        let e = elaborate(&fx.derivation).unwrap();
        assert!(e.is_primitive());
        assert_eq!(e.conclusion, fx.derivation.conclusion);
        assert_eq!(
            check(&fx.derivation, &fx.base).is_ok(),
            check_primitive(&e, &fx.base).is_ok()
        );
        // without the base the axiom steps are rejected both ways
        if !fx.base.is_empty() {
            assert!(check(&fx.derivation, &AxiomBase::empty()).is_err());
            assert!(check_primitive(&e, &AxiomBase::empty()).is_err());
        }
    }
}

#[test]
fn files_round_trip() {
    for fx in fixture_library() {
        let text = write_file(fx.name, &fx.base, &fx.derivation);
        let back = read_file(&text).unwrap();
        assert_eq!(back.root, fx.derivation);
        assert_eq!(back.base.unwrap_or_default(), fx.base);
        assert_eq!(build_fixture(fx.name).unwrap().1.conclusion, fx.derivation.conclusion);
    }
}

#[test]
fn wrong_declared_conclusion_is_rejected() {
    let fx = fixture("mp-example").unwrap();
    let text = write_file(fx.name, &fx.base, &fx.derivation).replace("=> q", "=> p & q");
    let tampered = read_file(&text).unwrap();
    assert!(check(&tampered.root, &fx.base).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn substitution_instances_of_fixtures_check(i in 0usize..16, a in formula(), b in formula()) {
        let lib = fixture_library();
        let fx = &lib[i % lib.len()];
        let sigma: Substitution = [("p", a), ("q", b)].into_iter().collect();
        let d = subst(fx.derivation.clone(), sigma.clone());
        prop_assert_eq!(&d.conclusion, &fx.derivation.conclusion.substitute(&sigma));
        prop_assert!(check(&d, &fx.base).is_ok());
        prop_assert!(check_primitive(&elaborate(&d).unwrap(), &fx.base).is_ok());
    }
}
