#![allow(dead_code)]

use flatlewis::kripke::{enumerate_up_to, FlatFrame, FlatModel, FrameClass, Valuation, WorldSet};
use flatlewis::proof::NamedAxiom;
use flatlewis::syntax::{parse, parse_consecution};
use flatlewis::{Atom, Consecution, Formula};
use proptest::prelude::*;

/// Formulas over `atoms` with at most `depth` nested binary connectives.
pub fn formula_over(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::sto(a, b)),
        ]
    })
}

pub fn formula() -> impl Strategy<Value = Formula> {
    formula_over(&["p", "q", "r"], 4)
}

/// Twenty-odd theorems, non-theorems and axiom-dependent formulas.
pub const BATTERY: &[&str] = &[
    "p ~> p",
    "(p ~> q) & (p ~> r) -> p ~> q & r",
    "(p ~> q) & (q ~> r) -> p ~> r",
    "[](p -> q) -> p ~> q",
    "(p ~> q) -> []p -> []q",
    "([]p -> []q) -> p ~> q",
    "(p ~> q) -> p -> q",
    "[]p -> [][]p",
    "[][]p -> []p",
    "!!p -> p",
    "[]false | ![]false",
    "(p ~> q) -> (p & r) ~> q",
    "(p | q ~> r) -> p ~> r",
    "[]p & []q -> [](p & q)",
    "false ~> p",
    "p ~> true",
    "!p ~> !q -> q ~> p",
    "(p -> q) | (q -> p)",
];

/// The named axioms followed by [`BATTERY`].
pub fn battery() -> Vec<Formula> {
    let mut out: Vec<Formula> = NamedAxiom::ALL.iter().map(|a| a.formula()).collect();
    out.extend(BATTERY.iter().map(|s| parse(s).unwrap()));
    out
}

pub fn battery_consecutions() -> Vec<Consecution> {
    let mut out: Vec<Consecution> = battery().into_iter().map(Consecution::theorem).collect();
    for s in [
        "p ~> q, q ~> r => p ~> r",
        "[]p => [][]p",
        "p, p ~> q => []q",
        "p ~> r, q ~> r => p | q ~> r",
    ] {
        out.push(parse_consecution(s).unwrap());
    }
    out
}

pub fn flat_frames_up_to_3() -> Vec<FlatFrame> {
    enumerate_up_to(3, FrameClass::Flat)
}

/// Every model on `frame` over `atoms`.
pub fn models(frame: &FlatFrame, atoms: &[&str]) -> Vec<FlatModel> {
    let ups = frame.upsets();
    let mut out = Vec::new();
    let k = atoms.len();
    let total = ups.len().pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = Valuation::new();
        for a in atoms {
            v.insert(Atom::new(a), ups[c % ups.len()].clone());
            c /= ups.len();
        }
        out.push(FlatModel::new(frame.clone(), v).unwrap());
    }
    out
}

pub fn set(n: usize, worlds: &[usize]) -> WorldSet {
    WorldSet::from_worlds(n, worlds.iter().copied())
}

/// Every sharp model with at most `max_n` worlds over `atoms`.
pub fn sharp_models(max_n: usize, atoms: &[&str]) -> Vec<flatlewis::kripke::SharpModel> {
    use flatlewis::kripke::{enumerate_frames, SharpFrame, SharpModel};
    let mut out = Vec::new();
    for n in 1..=max_n {
        for f in enumerate_frames(n, FrameClass::Sharp).iter() {
            let sharp = SharpFrame::new(f.names().to_vec(), &f.pre_pairs(), &f.r_pairs()).unwrap();
            for m in models(f, atoms) {
                out.push(SharpModel::new(sharp.clone(), m.valuation().clone()).unwrap());
            }
        }
    }
    out
}

/// Compares sharp truth with truth in the flat image for every formula of
/// depth at most `depth` over `atoms` and the constants.
///
/// Both evaluators are compositional, so formulas are enumerated up to the
/// pair of truth sets they induce: one representative per pair per depth
/// covers all formulas exactly. Returns the first formula whose sharp truth
/// at `w` differs from its flat truth at some `(w, v)`, and the number of
/// distinct truth-set pairs seen.
pub fn sharp_flat_mismatch(
    model: &flatlewis::kripke::SharpModel,
    atoms: &[&str],
    depth: usize,
) -> (Option<Formula>, usize) {
    use std::collections::BTreeMap;
    let (flat, points) = model.to_flat();
    let agrees = |s: &WorldSet, f: &WorldSet| (0..points.len()).all(|j| s.contains(points[j].0) == f.contains(j));
    let mut reps: BTreeMap<(WorldSet, WorldSet), Formula> = BTreeMap::new();
    let leaves = atoms
        .iter()
        .map(|a| Formula::atom(a))
        .chain([Formula::Top, Formula::Bot]);
    for f in leaves {
        reps.entry((model.truth_set(&f), flat.truth_set(&f))).or_insert(f);
    }
    for _ in 0..depth {
        let current: Vec<Formula> = reps.values().cloned().collect();
        let mut grew = false;
        for a in &current {
            for b in &current {
                for f in [
                    Formula::and(a.clone(), b.clone()),
                    Formula::or(a.clone(), b.clone()),
                    Formula::imp(a.clone(), b.clone()),
                    Formula::sto(a.clone(), b.clone()),
                ] {
                    let key = (model.truth_set(&f), flat.truth_set(&f));
                    if let std::collections::btree_map::Entry::Vacant(slot) = reps.entry(key) {
                        slot.insert(f);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    let bad = reps
        .iter()
        .find(|((s, f), _)| !agrees(s, f))
        .map(|(_, phi)| phi.clone());
    (bad, reps.len())
}
