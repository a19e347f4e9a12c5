mod common;

use common::{battery, flat_frames_up_to_3, sharp_models};
use flatlewis::algebra::{algebra_validates, check_lhae_laws, complex_algebra};
use flatlewis::kripke::{validates, FlatFrame};
use flatlewis::proof::NamedAxiom;
use flatlewis::Exec;
use proptest::prelude::*;

#[test]
fn every_complex_algebra_passes_the_flat_laws() {
    let frames = flat_frames_up_to_3();
    let bad = Exec::default().filter(&frames, |f| !check_lhae_laws(&complex_algebra(f)).flat_laws_hold());
    assert!(bad.is_empty(), "{:?}", bad.first());
}

#[test]
fn frame_and_algebra_validate_the_same_battery() {
    let frames = flat_frames_up_to_3();
    let battery = battery();
    assert!(battery.len() >= 20);
    let bad = Exec::default().filter(&frames, |f| {
        let a = complex_algebra(f);
        battery
            .iter()
            .any(|phi| validates(f, phi) != algebra_validates(&a, phi))
    });
    assert!(bad.is_empty(), "{:?}", bad.first());
}

#[test]
fn upward_closure_leaves_the_algebra_unchanged() {
    let frames = flat_frames_up_to_3();
    let bad = Exec::default().filter(&frames, |f| {
        complex_algebra(f).tables() != complex_algebra(&f.upward_close()).tables()
    });
    assert!(bad.is_empty(), "{:?}", bad.first());
}

#[test]
fn cd_holds_on_flat_images_of_sharp_frames() {
    for m in sharp_models(3, &[]) {
        let (image, _) = m.to_flat();
        let report = complex_algebra(image.frame()).check_laws();
        assert!(report.law("CD").unwrap().holds, "{:?}", m.frame());
    }
}

#[test]
fn cd_and_di_fail_together_on_the_fan() {
    let fan = FlatFrame::from_named(&["w", "v", "u"], &[], &[("w", "v"), ("w", "u")]).unwrap();
    let a = complex_algebra(&fan);
    assert!(!a.check_laws().law("CD").unwrap().holds);
    assert!(!a.validates(&NamedAxiom::Di.formula()));
}

proptest! {
    #[test]
    fn strict_implication_is_antitone_then_monotone(i in 0usize..10_000, x in any::<u64>()) {
        let frames = flat_frames_up_to_3();
        let f = &frames[i % frames.len()];
        let a = complex_algebra(f);
        let c = a.carrier();
        let pick = |k: u32| &c[(x >> (16 * k)) as usize % c.len()];
        let (lo, b) = (pick(0), pick(1));
        let hi = a.join(lo, pick(2));
        prop_assert!(a.sto(&hi, b).is_subset(&a.sto(lo, b)));
        prop_assert!(a.sto(b, lo).is_subset(&a.sto(b, &hi)));
    }
}
