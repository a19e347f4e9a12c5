use flatlewis::correspondence::{collapse_checks, condition_for, correspondence_harness, Sweep, CONDITIONS};
use flatlewis::kripke::FrameClass;
use flatlewis::proof::NamedAxiom;
use flatlewis::Exec;

#[test]
fn every_condition_matches_validity_up_to_three_worlds() {
    for &cond in CONDITIONS {
        let report = correspondence_harness(cond, &Sweep::new(cond.class, 3));
        assert!(report.passed(), "{cond:?}: {:?}", report.discrepancies.first());
        assert!(report.condition_holds > 0 && report.condition_holds < report.exhaustive_frames);
    }
}

#[test]
fn four_world_samples() {
    for &cond in CONDITIONS {
        let report = correspondence_harness(cond, &Sweep::new(cond.class, 4).with_samples(200));
        assert_eq!(report.sampled_frames, 200);
        assert!(report.passed(), "{cond:?}: {:?}", report.discrepancies.first());
    }
}

#[test]
fn flat_and_upward_flat_4a_conditions_agree_on_upward_flat_frames() {
    let upward = condition_for(NamedAxiom::FourA, FrameClass::UpwardFlat).unwrap();
    let flat = condition_for(NamedAxiom::FourA, FrameClass::Flat).unwrap();
    let (_, _, frames) = Sweep::new(FrameClass::UpwardFlat, 3).frames();
    for f in &frames {
        assert_eq!((upward.holds)(f), (flat.holds)(f));
    }
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    let cond = condition_for(NamedAxiom::Pa, FrameClass::UpwardFlat).unwrap();
    let a = correspondence_harness(cond, &Sweep::new(cond.class, 3).with_exec(Exec::Sequential));
    let b = correspondence_harness(cond, &Sweep::new(cond.class, 3).with_exec(Exec::Parallel));
    assert_eq!(a.condition_holds, b.condition_holds);
    assert_eq!(a.exhaustive_frames, b.exhaustive_frames);
}

#[test]
fn collapse_sweeps() {
    for r in collapse_checks(3, Exec::default()) {
        assert!(r.discrepancies.is_empty(), "{}: {:?}", r.name, r.discrepancies.first());
        assert!(r.applicable > 0);
    }
}
