//! First-order frame conditions for the named axioms and brute-force sweeps
//! comparing them with frame validity.

use serde::Serialize;

use crate::kripke::{enumerate_frames, sample_frames, validates, write_frame, FlatFrame, FrameClass};
use crate::proof::NamedAxiom;
use crate::syntax::parse;
use crate::Exec;

/// `⊑` is symmetric.
pub fn cond_em(f: &FlatFrame) -> bool {
    f.worlds().all(|w| f.up(w).iter().all(|v| f.leq(v, w)))
}

/// Every `w` has some `v ⊒ w` with `v R w`.
pub fn cond_tbox(f: &FlatFrame) -> bool {
    f.worlds().all(|w| f.up(w).iter().any(|v| f.r(v, w)))
}

/// `R` is transitive.
pub fn cond_4a_upward(f: &FlatFrame) -> bool {
    f.worlds()
        .all(|x| f.succ(x).iter().all(|y| f.succ(y).is_subset(f.succ(x))))
}

/// `x R y ⊑ z R w` implies `x R v ⊑ w` for some `v`.
pub fn cond_4a_flat(f: &FlatFrame) -> bool {
    f.worlds().all(|x| {
        let rx = f.succ(x);
        rx.iter().all(|y| {
            f.up(y)
                .iter()
                .all(|z| f.succ(z).iter().all(|w| f.down(w).intersects(rx)))
        })
    })
}

/// `w R v` implies `w ⊑ v`.
pub fn cond_str(f: &FlatFrame) -> bool {
    f.worlds().all(|w| f.succ(w).is_subset(f.up(w)))
}

/// `w R v R s` implies some `u ⊒ w` has `u R s` and `R[u] ⊆ R[v]`.
pub fn cond_pa(f: &FlatFrame) -> bool {
    f.worlds().all(|w| {
        f.succ(w).iter().all(|v| {
            f.succ(v)
                .iter()
                .all(|s| f.up(w).iter().any(|u| f.r(u, s) && f.succ(u).is_subset(f.succ(v))))
        })
    })
}

#[derive(Clone, Copy)]
pub struct FrameCondition {
    pub name: &'static str,
    pub axiom: NamedAxiom,
    /// The frames on which the condition characterises the axiom.
    pub class: FrameClass,
    pub holds: fn(&FlatFrame) -> bool,
}

impl std::fmt::Debug for FrameCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FrameCondition({}, {}, {})", self.name, self.axiom, self.class)
    }
}

pub const CONDITIONS: &[FrameCondition] = &[
    FrameCondition {
        name: "pre-symmetric",
        axiom: NamedAxiom::Em,
        class: FrameClass::UpwardFlat,
        holds: cond_em,
    },
    FrameCondition {
        name: "pre-R-reflexive",
        axiom: NamedAxiom::TBox,
        class: FrameClass::UpwardFlat,
        holds: cond_tbox,
    },
    FrameCondition {
        name: "R-transitive",
        axiom: NamedAxiom::FourA,
        class: FrameClass::UpwardFlat,
        holds: cond_4a_upward,
    },
    FrameCondition {
        name: "flat-4a",
        axiom: NamedAxiom::FourA,
        class: FrameClass::Flat,
        holds: cond_4a_flat,
    },
    FrameCondition {
        name: "R-within-pre",
        axiom: NamedAxiom::Str,
        class: FrameClass::UpwardFlat,
        holds: cond_str,
    },
    FrameCondition {
        name: "pa-condition",
        axiom: NamedAxiom::Pa,
        class: FrameClass::UpwardFlat,
        holds: cond_pa,
    },
];

/// The condition characterising `axiom` on `class` frames, if one is known.
pub fn condition_for(axiom: NamedAxiom, class: FrameClass) -> Option<FrameCondition> {
    CONDITIONS
        .iter()
        .copied()
        .find(|c| c.axiom == axiom && c.class == class)
}

/// Frames of a sweep: every class with up to three worlds, plus a seeded
/// sample of four-world classes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Sweep {
    pub class: FrameClass,
    pub max_worlds: usize,
    /// How many distinct four-world frames to sample when `max_worlds >= 4`.
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Sweep {
    pub fn new(class: FrameClass, max_worlds: usize) -> Self {
        Sweep {
            class,
            max_worlds,
            samples: 600,
            seed: 0x5eed,
            exec: Exec::default(),
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Number of exhaustively enumerated and of sampled frames, and the frames.
    pub fn frames(&self) -> (usize, usize, Vec<FlatFrame>) {
        let mut out = Vec::new();
        for n in 1..=self.max_worlds.min(3) {
            out.extend(enumerate_frames(n, self.class).iter().cloned());
        }
        let exhaustive = out.len();
        if self.max_worlds >= 4 {
            out.extend(sample_frames(4, self.class, self.samples, self.seed));
        }
        let sampled = out.len() - exhaustive;
        (exhaustive, sampled, out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub frame: String,
    pub validates: bool,
    pub condition: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub axiom: NamedAxiom,
    pub condition: &'static str,
    pub class: FrameClass,
    pub exhaustive_frames: usize,
    pub sampled_frames: usize,
    /// Frames satisfying the condition.
    pub condition_holds: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares validity of `axiom` with `cond` on every frame of `sweep`.
pub fn correspondence_harness(cond: FrameCondition, sweep: &Sweep) -> HarnessReport {
    let (exhaustive, sampled, frames) = sweep.frames();
    let axiom = cond.axiom.formula();
    let rows = sweep.exec.map(&frames, |f| {
        let v = validates(f, &axiom);
        let c = (cond.holds)(f);
        (
            c,
            (v != c).then(|| Discrepancy {
                frame: write_frame(f),
                validates: v,
                condition: c,
            }),
        )
    });
    HarnessReport {
        axiom: cond.axiom,
        condition: cond.name,
        class: sweep.class,
        exhaustive_frames: exhaustive,
        sampled_frames: sampled,
        condition_holds: rows.iter().filter(|(c, _)| *c).count(),
        discrepancies: rows.into_iter().filter_map(|(_, d)| d).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub name: &'static str,
    pub equivalence: String,
    pub frames: usize,
    /// Frames meeting the premise conditions.
    pub applicable: usize,
    pub discrepancies: Vec<String>,
}

/// On upward-flat frames with at most `max_worlds` worlds:
/// symmetric `⊑` with `R ⊆ ⊑` validates `(p ⊐ q) ↔ ((p → q) ∨ □⊥)`, and
/// `R ⊆ ⊑` with `⊑∘R` reflexive validates `(p ⊐ q) ↔ (p → q)`.
pub fn collapse_checks(max_worlds: usize, exec: Exec) -> Vec<CollapseReport> {
    let (_, _, frames) = Sweep::new(FrameClass::UpwardFlat, max_worlds).with_exec(exec).frames();
    type Case = (&'static str, &'static str, fn(&FlatFrame) -> bool);
    let cases: [Case; 2] = [
        ("em+str", "p ~> q <-> (p -> q) | []false", |f| cond_em(f) && cond_str(f)),
        ("str+tbox", "p ~> q <-> (p -> q)", |f| cond_str(f) && cond_tbox(f)),
    ];
    cases
        .iter()
        .map(|&(name, text, premise)| {
            let (lhs, rhs) = text.split_once(" <-> ").expect("literal");
            let eq = crate::Formula::iff(parse(lhs).expect("literal"), parse(rhs).expect("literal"));
            let applicable: Vec<FlatFrame> = frames.iter().filter(|f| premise(f)).cloned().collect();
            let bad = exec.map(&applicable, |f| (!validates(f, &eq)).then(|| write_frame(f)));
            CollapseReport {
                name,
                equivalence: eq.to_string(),
                frames: frames.len(),
                applicable: applicable.len(),
                discrepancies: bad.into_iter().flatten().collect(),
            }
        })
        .collect()
}
