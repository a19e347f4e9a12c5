//! Bounded decision procedure for derivability.
//!
//! A query `(Γ ⇒ φ, Ax)` is answered by trying, in order: a shipped
//! certificate whose root has the query as an instance, forward saturation,
//! countermodel search over small upward-flat frames, goal-directed proof
//! search, and countermodel search on the largest frames allowed. Positive
//! answers carry a derivation that has passed the checker; negative answers
//! carry a model validating `Ax` with a world refuting the query, re-checked
//! with the reference evaluator and the complex algebra.

mod certificates;
mod prover;
mod saturate;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::complex_algebra;
use crate::kripke::{
    enumerate_frames, find_refutation, validates_all, FlatFrame, FlatModel, FrameClass, MAX_CODED_WORLDS,
};
use crate::par::Exec;
use crate::proof::{check, AxiomBase, Derivation};
use crate::syntax::{subformula_closure, Consecution, Formula, FormulaSet};

pub use certificates::lookup as certificate;
pub use prover::Prover;
pub use saturate::{saturate, Facts, Saturation};

/// Resource limits for one query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest frame size tried by countermodel search (at most 4).
    pub max_worlds: usize,
    /// Rounds of forward saturation.
    pub max_saturation_depth: usize,
    /// Frames examined by countermodel search, summed over sizes.
    pub max_frames: usize,
    pub wall_clock_ms: u64,
    /// Nesting depth of non-invertible steps in goal-directed search.
    pub proof_depth: usize,
    /// Nodes expanded by goal-directed search.
    pub proof_steps: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_worlds: MAX_CODED_WORLDS,
            max_saturation_depth: 3,
            max_frames: 1_000_000,
            wall_clock_ms: 60_000,
            proof_depth: 4,
            proof_steps: 20_000,
            exec: Exec::default(),
        }
    }
}

/// Where an inconclusive search stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exhaustion {
    pub worlds_searched: usize,
    pub frames_searched: usize,
    pub saturation_rounds: usize,
    pub proof_steps: usize,
    pub elapsed_ms: u64,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Derivation),
    /// A model of the base and a world forcing the premises but not the conclusion.
    Invalid {
        model: FlatModel,
        world: usize,
    },
    Exhausted(Exhaustion),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Valid(_) => "valid",
            Verdict::Invalid { .. } => "invalid",
            Verdict::Exhausted(_) => "exhausted",
        }
    }
}

/// Answer of a [`DerivabilityOracle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    Derivable(Derivation),
    NotDerivable(FlatModel, usize),
    Unknown,
}

/// Decides `Γ ⊢_Ax φ`, possibly giving up.
pub trait DerivabilityOracle: Sync {
    fn query(&self, base: &AxiomBase, premises: &FormulaSet, goal: &Formula) -> OracleAnswer;
}

type BaseFrames = Mutex<HashMap<(AxiomBase, usize), Arc<Vec<FlatFrame>>>>;

/// Upward-flat frames on `n` worlds validating every axiom of `base`.
pub fn base_frames(base: &AxiomBase, n: usize, exec: Exec) -> Arc<Vec<FlatFrame>> {
    static CACHE: OnceLock<BaseFrames> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (base.clone(), n);
    if let Some(v) = cache.lock().expect("base frame cache").get(&key) {
        return v.clone();
    }
    let all = enumerate_frames(n, FrameClass::UpwardFlat);
    let axioms = base.formulas();
    let good = Arc::new(exec.filter(&all, |f| validates_all(f, &axioms)));
    cache
        .lock()
        .expect("base frame cache")
        .entry(key)
        .or_insert(good)
        .clone()
}

struct Search<'a> {
    c: &'a Consecution,
    base: &'a AxiomBase,
    budget: &'a Budget,
    start: Instant,
    frames_searched: usize,
    worlds_searched: usize,
    timed_out: bool,
}

impl Search<'_> {
    fn deadline(&self) -> Instant {
        self.start + Duration::from_millis(self.budget.wall_clock_ms)
    }

    fn countermodel(&mut self, sizes: std::ops::RangeInclusive<usize>) -> Option<(FlatModel, usize)> {
        for n in sizes {
            if n > self.budget.max_worlds.min(MAX_CODED_WORLDS) {
                break;
            }
            let frames = base_frames(self.base, n, self.budget.exec);
            let room = self.budget.max_frames.saturating_sub(self.frames_searched);
            let slice = &frames[..frames.len().min(room)];
            let deadline = self.deadline();
            let hit = self.budget.exec.find_map_first(slice, |f| {
                if Instant::now() >= deadline {
                    return None;
                }
                find_refutation(f, self.c).map(|r| r.into_model(f.clone()))
            });
            self.frames_searched += slice.len();
            self.worlds_searched = n;
            if Instant::now() >= deadline {
                self.timed_out = true;
            }
            if hit.is_some() || slice.len() < frames.len() || self.timed_out {
                return hit;
            }
        }
        None
    }
}

/// Decides one query within `budget`. Results are verified before return.
pub fn decide(c: &Consecution, base: &AxiomBase, budget: &Budget) -> Verdict {
    let verdict = decide_unchecked(c, base, budget);
    verify(c, base, &verdict).unwrap_or_else(|e| panic!("decide produced an unsound verdict for {c}: {e}"));
    verdict
}

fn decide_unchecked(c: &Consecution, base: &AxiomBase, budget: &Budget) -> Verdict {
    let mut s = Search {
        c,
        base,
        budget,
        start: Instant::now(),
        frames_searched: 0,
        worlds_searched: 0,
        timed_out: false,
    };
    if let Some(d) = certificate(c, base) {
        if check(&d, base).is_ok() {
            return Verdict::Valid(d);
        }
    }
    let goals = [c.conclusion.clone()];
    let sat = saturate(&c.premises, base, budget.max_saturation_depth, &goals);
    if let Some(d) = sat.facts.get(&c.conclusion) {
        return Verdict::Valid(d.clone());
    }
    // Cheap stages first: tiny frames, a short proof search, then larger
    // frames and the full proof allowance.
    if let Some((model, world)) = s.countermodel(1..=2) {
        return Verdict::Invalid { model, world };
    }
    let pool: Vec<Formula> = subformula_closure(&c.premises.with(c.conclusion.clone())).to_vec();
    let mut prover = Prover::new(base, pool, budget.proof_steps / 10, Some(s.deadline()));
    if let Some(d) = deepen(&mut prover, c, budget.proof_depth) {
        return Verdict::Valid(d);
    }
    if let Some((model, world)) = s.countermodel(3..=3) {
        return Verdict::Invalid { model, world };
    }
    prover.set_max_steps(budget.proof_steps);
    if let Some(d) = deepen(&mut prover, c, budget.proof_depth) {
        return Verdict::Valid(d);
    }
    if !s.timed_out {
        if let Some((model, world)) = s.countermodel(4..=4) {
            return Verdict::Invalid { model, world };
        }
    }
    Verdict::Exhausted(Exhaustion {
        worlds_searched: s.worlds_searched,
        frames_searched: s.frames_searched,
        saturation_rounds: sat.rounds,
        proof_steps: prover.steps(),
        elapsed_ms: s.start.elapsed().as_millis() as u64,
        timed_out: s.timed_out || Instant::now() >= s.deadline(),
    })
}

fn deepen(prover: &mut Prover, c: &Consecution, max_depth: usize) -> Option<Derivation> {
    for depth in 0..=max_depth {
        if let Some(d) = prover.prove(&c.premises, &c.conclusion, depth) {
            return Some(d);
        }
        if prover.exhausted() {
            break;
        }
    }
    None
}

/// Independent re-check of a verdict: derivations through the checker,
/// models through the reference evaluator and the complex algebra.
pub fn verify(c: &Consecution, base: &AxiomBase, verdict: &Verdict) -> Result<(), String> {
    match verdict {
        Verdict::Valid(d) => {
            if d.conclusion != *c {
                return Err(format!("derivation concludes {} instead", d.conclusion));
            }
            check(d, base).map_err(|e| e.to_string())
        }
        Verdict::Invalid { model, world } => {
            for p in &c.premises {
                if !model.truth_set(p).contains(*world) {
                    return Err(format!("premise {p} fails at the witness world"));
                }
            }
            if model.truth_set(&c.conclusion).contains(*world) {
                return Err("conclusion holds at the witness world".into());
            }
            let algebra = complex_algebra(model.frame());
            for ax in base.formulas() {
                if !algebra.validates(&ax) {
                    return Err(format!("the model's frame does not validate {ax}"));
                }
            }
            Ok(())
        }
        Verdict::Exhausted(_) => Ok(()),
    }
}

/// Caching [`DerivabilityOracle`] backed by [`decide`]. Countermodels found
/// for one query are tried first on later ones.
pub struct Decider {
    pub budget: Budget,
    cache: Mutex<HashMap<(AxiomBase, Consecution), Verdict>>,
    models: Mutex<HashMap<AxiomBase, Vec<FlatFrame>>>,
}

impl Decider {
    pub fn new(budget: Budget) -> Self {
        Decider {
            budget,
            cache: Mutex::default(),
            models: Mutex::default(),
        }
    }

    pub fn decide(&self, c: &Consecution, base: &AxiomBase) -> Verdict {
        let key = (base.clone(), c.clone());
        if let Some(v) = self.cache.lock().expect("verdict cache").get(&key) {
            return v.clone();
        }
        let known = self
            .models
            .lock()
            .expect("model cache")
            .get(base)
            .cloned()
            .unwrap_or_default();
        let quick = known
            .iter()
            .find_map(|f| find_refutation(f, c).map(|r| r.into_model(f.clone())));
        let verdict = match quick {
            Some((model, world)) => Verdict::Invalid { model, world },
            None => decide(c, base, &self.budget),
        };
        if let Verdict::Invalid { model, .. } = &verdict {
            let mut models = self.models.lock().expect("model cache");
            let list = models.entry(base.clone()).or_default();
            if !list.contains(model.frame()) {
                list.push(model.frame().clone());
            }
        }
        self.cache.lock().expect("verdict cache").insert(key, verdict.clone());
        verdict
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("verdict cache").len()
    }
}

impl Default for Decider {
    fn default() -> Self {
        Decider::new(Budget::default())
    }
}

impl DerivabilityOracle for Decider {
    fn query(&self, base: &AxiomBase, premises: &FormulaSet, goal: &Formula) -> OracleAnswer {
        match self.decide(&Consecution::new(premises.clone(), goal.clone()), base) {
            Verdict::Valid(d) => OracleAnswer::Derivable(d),
            Verdict::Invalid { model, world } => OracleAnswer::NotDerivable(model, world),
            Verdict::Exhausted(_) => OracleAnswer::Unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::NamedAxiom;
    use crate::syntax::parse_consecution;

    fn run(c: &str, base: &[NamedAxiom]) -> Verdict {
        decide(&parse_consecution(c).unwrap(), &AxiomBase::of(base), &Budget::default())
    }

    #[test]
    fn small_examples() {
        assert!(run("=> p ~> p", &[]).is_valid());
        assert!(run("p, p -> q => q", &[]).is_valid());
        assert!(run("=> p | !p", &[]).is_invalid());
        assert!(run("=> p | !p", &[NamedAxiom::Em]).is_valid());
        assert!(run("[]p => [][]p", &[NamedAxiom::FourA]).is_valid());
        assert!(run("[]p => [][]p", &[]).is_invalid());
        assert!(run("[][]p => []p", &[NamedAxiom::TBox]).is_valid());
        assert!(run("=> (p -> q) -> p ~> q", &[NamedAxiom::Str]).is_valid());
        assert!(run("=> (p ~> q) -> p -> q", &[]).is_invalid());
    }
}
