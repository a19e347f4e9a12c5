//! Finite canonical models built from segments.
//!
//! Everything is relative to a finite, subformula-closed `Σ ∋ ⊤`, an axiom
//! base, and a [`DerivabilityOracle`]. A prime theory is a subset of `Σ`
//! that the oracle certifies to be deductively closed, consistent and prime;
//! a segment pairs a theory with an inclusion-closed family of theories
//! satisfying the strict-implication transfer condition. Any `Unknown`
//! answer aborts the construction.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::decide::{DerivabilityOracle, OracleAnswer};
use crate::kripke::{FlatFrame, FlatModel, Valuation, WorldSet};
use crate::par::Exec;
use crate::proof::AxiomBase;
use crate::syntax::{is_subformula_closed, Consecution, Formula, FormulaSet};

pub const MAX_SIGMA: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("the oracle could not decide {0}")]
    OracleIncomplete(Consecution),
    #[error("Σ must contain ⊤ and be closed under subformulas (missing {0})")]
    NotClosed(Formula),
    #[error("Σ has {0} members; at most {MAX_SIGMA} are supported")]
    SigmaTooLarge(usize),
    #[error("more than {cap} segments (raise the cap or shrink Σ)")]
    SegmentCap { cap: usize },
    #[error("no prime theories: the base is inconsistent")]
    NoTheories,
    #[error("construction invariant failed: {0}")]
    Invariant(String),
}

/// Knobs for the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalConfig {
    /// Largest disjunction of `Σ`-members tested for primeness.
    pub prime_width: usize,
    pub segment_cap: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for CanonicalConfig {
    fn default() -> Self {
        CanonicalConfig {
            prime_width: 3,
            segment_cap: 20_000,
            exec: Exec::default(),
        }
    }
}

/// A finite `Σ` in canonical order, with members addressed by bit position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    members: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl Sigma {
    pub fn new(set: &FormulaSet) -> Result<Sigma, CanonicalError> {
        if !set.contains(&Formula::Top) {
            return Err(CanonicalError::NotClosed(Formula::Top));
        }
        if !is_subformula_closed(set) {
            let missing = set
                .iter()
                .flat_map(|f| f.children().map(|(a, b)| [a.clone(), b.clone()]).into_iter().flatten())
                .find(|g| !set.contains(g))
                .expect("a missing subformula");
            return Err(CanonicalError::NotClosed(missing));
        }
        if set.len() > MAX_SIGMA {
            return Err(CanonicalError::SigmaTooLarge(set.len()));
        }
        let members = set.to_vec();
        let index = members.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(Sigma { members, index })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn set_of(&self, mask: u64) -> FormulaSet {
        self.members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, f)| f.clone())
            .collect()
    }

    /// Members of `Σ` true at `w`.
    pub fn type_of(&self, model: &FlatModel, w: usize) -> u64 {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, f)| model.truth_set(f).contains(w))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn as_set(&self) -> FormulaSet {
        self.members.iter().cloned().collect()
    }
}

/// How a prime theory was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryWitness {
    /// A world of a model of the base whose `Σ`-type is exactly the theory,
    /// which refutes every query the definition requires.
    Realised { model: FlatModel, world: usize },
    /// Every closure, consistency and primeness query answered `No`.
    Queried { queries: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTheory {
    pub members: FormulaSet,
    pub mask: u64,
    pub witness: TheoryWitness,
}

impl fmt::Display for PrimeTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.members)
    }
}

/// `(Γ, U)` with theories referred to by their index in the theory list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub gamma: usize,
    pub family: BTreeSet<usize>,
}

/// Query helper that turns `Unknown` into an error and harvests the
/// `Σ`-types of every countermodel it sees.
struct Asker<'a> {
    sigma: &'a Sigma,
    base: &'a AxiomBase,
    oracle: &'a dyn DerivabilityOracle,
    realised: HashMap<u64, (FlatModel, usize)>,
    queries: usize,
}

impl Asker<'_> {
    fn derivable(&mut self, premises: &FormulaSet, goal: &Formula) -> Result<bool, CanonicalError> {
        self.queries += 1;
        match self.oracle.query(self.base, premises, goal) {
            OracleAnswer::Derivable(_) => Ok(true),
            OracleAnswer::NotDerivable(model, _) => {
                for w in model.frame().worlds() {
                    let t = self.sigma.type_of(&model, w);
                    self.realised.entry(t).or_insert_with(|| (model.clone(), w));
                }
                Ok(false)
            }
            OracleAnswer::Unknown => Err(CanonicalError::OracleIncomplete(Consecution::new(
                premises.clone(),
                goal.clone(),
            ))),
        }
    }
}

fn subsets_up_to(items: &[Formula], width: usize) -> Vec<Vec<Formula>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<Formula>)> = vec![(0, vec![])];
    while let Some((start, cur)) = stack.pop() {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if cur.len() == width {
            continue;
        }
        for (i, item) in items.iter().enumerate().skip(start) {
            let mut next = cur.clone();
            next.push(item.clone());
            stack.push((i + 1, next));
        }
    }
    out
}

/// All prime `(Ax, Σ)`-theories, ordered by size and then by mask.
pub fn enumerate_prime_theories(
    sigma: &Sigma,
    base: &AxiomBase,
    oracle: &dyn DerivabilityOracle,
    config: &CanonicalConfig,
) -> Result<Vec<PrimeTheory>, CanonicalError> {
    let mut ask = Asker {
        sigma,
        base,
        oracle,
        realised: HashMap::new(),
        queries: 0,
    };
    let top = 1u64 << sigma.position(&Formula::Top).expect("⊤ ∈ Σ");
    let mut candidates: Vec<u64> = (0..=sigma.full_mask()).filter(|m| m & top != 0).collect();
    if sigma.len() > 20 {
        return Err(CanonicalError::SigmaTooLarge(sigma.len()));
    }
    candidates.sort_by_key(|m| (m.count_ones(), *m));
    let mut out = Vec::new();
    'next: for mask in candidates {
        if let Some((model, world)) = ask.realised.get(&mask) {
            let witness = TheoryWitness::Realised {
                model: model.clone(),
                world: *world,
            };
            out.push(PrimeTheory {
                members: sigma.set_of(mask),
                mask,
                witness,
            });
            continue;
        }
        let gamma = sigma.set_of(mask);
        let before = ask.queries;
        let outside: Vec<Formula> = sigma.set_of(sigma.full_mask() & !mask).to_vec();
        if gamma.contains(&Formula::Bot) || ask.derivable(&gamma, &Formula::Bot)? {
            continue;
        }
        for psi in &outside {
            if ask.derivable(&gamma, psi)? {
                continue 'next;
            }
        }
        for d in subsets_up_to(&outside, config.prime_width) {
            if ask.derivable(&gamma, &Formula::disj(d))? {
                continue 'next;
            }
        }
        let witness = TheoryWitness::Queried {
            queries: ask.queries - before,
        };
        out.push(PrimeTheory {
            members: gamma,
            mask,
            witness,
        });
    }
    if out.is_empty() {
        return Err(CanonicalError::NoTheories);
    }
    Ok(out)
}

/// Canonical frame over a list of theories and segments, with `Σ` kept for
/// the truth lemma.
#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    pub sigma: Sigma,
    pub base: AxiomBase,
    pub theories: Vec<PrimeTheory>,
    pub segments: Vec<Segment>,
    pub pointed: bool,
    /// `Γ ⊢ φ ⊐ ψ` over `Σ`, indexed `[theory][φ]` as a mask of `ψ`.
    strict: Vec<Vec<u64>>,
}

/// Oracle answers needed for segments: for every theory `Γ` and `φ ∈ Σ`,
/// the mask of `ψ ∈ Σ` with `Γ ⊢ φ ⊐ ψ`.
fn strict_table(
    sigma: &Sigma,
    base: &AxiomBase,
    theories: &[PrimeTheory],
    oracle: &dyn DerivabilityOracle,
    exec: Exec,
) -> Result<Vec<Vec<u64>>, CanonicalError> {
    let jobs: Vec<(usize, usize, usize)> = (0..theories.len())
        .flat_map(|t| (0..sigma.len()).flat_map(move |a| (0..sigma.len()).map(move |b| (t, a, b))))
        .collect();
    let answers = exec.map(&jobs, |&(t, a, b)| {
        let goal = Formula::sto(sigma.members[a].clone(), sigma.members[b].clone());
        match oracle.query(base, &theories[t].members, &goal) {
            OracleAnswer::Derivable(_) => Ok(true),
            OracleAnswer::NotDerivable(..) => Ok(false),
            OracleAnswer::Unknown => Err(CanonicalError::OracleIncomplete(Consecution::new(
                theories[t].members.clone(),
                goal,
            ))),
        }
    });
    let mut table = vec![vec![0u64; sigma.len()]; theories.len()];
    for (&(t, a, b), ans) in jobs.iter().zip(answers) {
        if ans? {
            table[t][a] |= 1 << b;
        }
    }
    Ok(table)
}

/// Intersection of the members of `family` (all of `Σ` for the empty family).
fn meet(theories: &[PrimeTheory], family: &BTreeSet<usize>, full: u64) -> u64 {
    family.iter().fold(full, |m, &d| m & theories[d].mask)
}

fn satisfies_s2(strict: &[u64], common: u64) -> bool {
    strict
        .iter()
        .enumerate()
        .all(|(a, &targets)| common >> a & 1 == 0 || targets & !common == 0)
}

fn is_up_closed(theories: &[PrimeTheory], family: &BTreeSet<usize>) -> bool {
    family.iter().all(|&d| {
        theories
            .iter()
            .enumerate()
            .all(|(e, t)| t.mask & theories[d].mask != theories[d].mask || family.contains(&e))
    })
}

/// Families of theories closed upwards under inclusion, or an error past `cap`.
fn up_closed_families(theories: &[PrimeTheory], cap: usize) -> Result<Vec<BTreeSet<usize>>, CanonicalError> {
    let mut order: Vec<usize> = (0..theories.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(theories[i].mask.count_ones()));
    let supersets: Vec<Vec<usize>> = (0..theories.len())
        .map(|i| {
            (0..theories.len())
                .filter(|&j| j != i && theories[j].mask & theories[i].mask == theories[i].mask)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = BTreeSet::new();
    fn go(
        k: usize,
        order: &[usize],
        supersets: &[Vec<usize>],
        cur: &mut BTreeSet<usize>,
        out: &mut Vec<BTreeSet<usize>>,
        cap: usize,
    ) -> Result<(), CanonicalError> {
        if k == order.len() {
            if out.len() >= cap {
                return Err(CanonicalError::SegmentCap { cap });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let t = order[k];
        go(k + 1, order, supersets, cur, out, cap)?;
        if supersets[t].iter().all(|s| cur.contains(s)) {
            cur.insert(t);
            go(k + 1, order, supersets, cur, out, cap)?;
            cur.remove(&t);
        }
        Ok(())
    }
    go(0, &order, &supersets, &mut cur, &mut out, cap)?;
    Ok(out)
}

/// `U_{Γ,φ}`: theories containing every `ψ ∈ Σ` with `Γ ⊢ φ ⊐ ψ`.
pub fn u_gamma_phi(frame: &CanonicalFrame, gamma: usize, phi: &Formula) -> Result<BTreeSet<usize>, CanonicalError> {
    let a = frame
        .sigma
        .position(phi)
        .ok_or_else(|| CanonicalError::NotClosed(phi.clone()))?;
    let required = frame.strict[gamma][a];
    let family: BTreeSet<usize> = frame
        .theories
        .iter()
        .enumerate()
        .filter(|(_, t)| t.mask & required == required)
        .map(|(i, _)| i)
        .collect();
    check_u_gamma_phi(frame, gamma, a, &family)?;
    Ok(family)
}

fn check_u_gamma_phi(
    frame: &CanonicalFrame,
    gamma: usize,
    a: usize,
    family: &BTreeSet<usize>,
) -> Result<(), CanonicalError> {
    let full = frame.sigma.full_mask();
    let name = || format!("U({}, {})", frame.theories[gamma], frame.sigma.members[a]);
    if !is_up_closed(&frame.theories, family)
        || !satisfies_s2(&frame.strict[gamma], meet(&frame.theories, family, full))
    {
        return Err(CanonicalError::Invariant(format!("{} is not a segment family", name())));
    }
    if family.iter().any(|&d| frame.theories[d].mask >> a & 1 == 0) {
        return Err(CanonicalError::Invariant(format!(
            "{} has a member omitting the point",
            name()
        )));
    }
    for (b, theta) in frame.sigma.members.iter().enumerate() {
        if frame.strict[gamma][a] >> b & 1 == 0 && family.iter().all(|&d| frame.theories[d].mask >> b & 1 == 1) {
            return Err(CanonicalError::Invariant(format!(
                "every member of {} contains the underivable {theta}",
                name()
            )));
        }
    }
    Ok(())
}

fn prepare(
    sigma: &Sigma,
    base: &AxiomBase,
    oracle: &dyn DerivabilityOracle,
    config: &CanonicalConfig,
    pointed: bool,
) -> Result<CanonicalFrame, CanonicalError> {
    let theories = enumerate_prime_theories(sigma, base, oracle, config)?;
    let strict = strict_table(sigma, base, &theories, oracle, config.exec)?;
    Ok(CanonicalFrame {
        sigma: sigma.clone(),
        base: base.clone(),
        theories,
        segments: vec![],
        pointed,
        strict,
    })
}

/// Every `(Ax, Σ)`-segment.
pub fn build_full_canonical(
    sigma: &Sigma,
    base: &AxiomBase,
    oracle: &dyn DerivabilityOracle,
    config: &CanonicalConfig,
) -> Result<CanonicalFrame, CanonicalError> {
    let mut frame = prepare(sigma, base, oracle, config, false)?;
    let families = up_closed_families(&frame.theories, config.segment_cap)?;
    let full = sigma.full_mask();
    let commons: Vec<u64> = families.iter().map(|f| meet(&frame.theories, f, full)).collect();
    let indices: Vec<usize> = (0..families.len()).collect();
    for gamma in 0..frame.theories.len() {
        let strict = &frame.strict[gamma];
        let keep = config.exec.filter(&indices, |&i| satisfies_s2(strict, commons[i]));
        for i in keep {
            if frame.segments.len() >= config.segment_cap {
                return Err(CanonicalError::SegmentCap {
                    cap: config.segment_cap,
                });
            }
            frame.segments.push(Segment {
                gamma,
                family: families[i].clone(),
            });
        }
    }
    frame.segments.sort();
    Ok(frame)
}

/// Segments of the form `(Γ, U_{Γ,γ})` for `γ ∈ Σ`.
pub fn build_pointed_canonical(
    sigma: &Sigma,
    base: &AxiomBase,
    oracle: &dyn DerivabilityOracle,
    config: &CanonicalConfig,
) -> Result<CanonicalFrame, CanonicalError> {
    let mut frame = prepare(sigma, base, oracle, config, true)?;
    let mut segments = BTreeSet::new();
    for gamma in 0..frame.theories.len() {
        for phi in sigma.members() {
            let family = u_gamma_phi(&frame, gamma, phi)?;
            segments.insert(Segment { gamma, family });
            if segments.len() > config.segment_cap {
                return Err(CanonicalError::SegmentCap {
                    cap: config.segment_cap,
                });
            }
        }
    }
    frame.segments = segments.into_iter().collect();
    Ok(frame)
}

impl CanonicalFrame {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `Γ ⊢ φ ⊐ ψ` as recorded during construction.
    pub fn derives_strict(&self, gamma: usize, phi: &Formula, psi: &Formula) -> Option<bool> {
        let (a, b) = (self.sigma.position(phi)?, self.sigma.position(psi)?);
        Some(self.strict[gamma][a] >> b & 1 == 1)
    }

    pub fn theory_index(&self, members: &FormulaSet) -> Option<usize> {
        self.theories.iter().position(|t| &t.members == members)
    }

    pub fn segment_index(&self, seg: &Segment) -> Option<usize> {
        self.segments.iter().position(|s| s == seg)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        let (a, b) = (
            self.theories[self.segments[i].gamma].mask,
            self.theories[self.segments[j].gamma].mask,
        );
        a & b == a
    }

    pub fn r(&self, i: usize, j: usize) -> bool {
        self.segments[i].family.contains(&self.segments[j].gamma)
    }

    /// Human-readable `(Γ, {Δ, …})`.
    pub fn describe(&self, i: usize) -> String {
        let s = &self.segments[i];
        let fam: Vec<String> = s.family.iter().map(|&d| self.theories[d].to_string()).collect();
        format!("({}, {{{}}})", self.theories[s.gamma], fam.join(", "))
    }

    pub fn frame(&self) -> FlatFrame {
        let n = self.segments.len();
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let up = (0..n)
            .map(|i| WorldSet::from_worlds(n, (0..n).filter(|&j| self.leq(i, j))))
            .collect();
        let succ = (0..n)
            .map(|i| WorldSet::from_worlds(n, (0..n).filter(|&j| self.r(i, j))))
            .collect();
        FlatFrame::from_rows(names, up, succ).expect("inclusion is a preorder")
    }

    /// The canonical valuation over the atoms of `Σ`.
    pub fn model(&self) -> FlatModel {
        let frame = self.frame();
        let n = frame.len();
        let mut valuation = Valuation::new();
        for f in self.sigma.members() {
            if let Formula::Atom(a) = f {
                let worlds = (0..n).filter(|&i| self.theories[self.segments[i].gamma].members.contains(f));
                valuation.insert(a.clone(), WorldSet::from_worlds(n, worlds));
            }
        }
        FlatModel::new(frame, valuation).expect("theory membership is monotone in inclusion")
    }

    /// `(i, j, k)` with `i R j R k` but not `i R k`, if any.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.r(i, j))
            .find_map(|(i, j)| (0..n).find(|&k| self.r(j, k) && !self.r(i, k)).map(|k| (i, j, k)))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// S1 and S2 for every segment, re-checked from the stored answers.
    pub fn check_segments(&self) -> Result<(), CanonicalError> {
        let full = self.sigma.full_mask();
        for (i, s) in self.segments.iter().enumerate() {
            if !is_up_closed(&self.theories, &s.family) {
                return Err(CanonicalError::Invariant(format!("{} breaks S1", self.describe(i))));
            }
            if !satisfies_s2(&self.strict[s.gamma], meet(&self.theories, &s.family, full)) {
                return Err(CanonicalError::Invariant(format!("{} breaks S2", self.describe(i))));
            }
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph canonical {\n  node [shape=box];\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  s{i} [label=\"{}\"];", self.describe(i).replace('"', "\\\""));
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.leq(i, j) {
                    let _ = writeln!(out, "  s{i} -> s{j} [style=dashed, arrowhead=none];");
                }
                if self.r(i, j) {
                    let _ = writeln!(out, "  s{i} -> s{j};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthViolation {
    pub segment: String,
    pub formula: Formula,
    pub forced: bool,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthReport {
    pub segments: usize,
    pub formulas: usize,
    pub violations: Vec<TruthViolation>,
}

impl TruthReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares forcing in the canonical model with membership, for every
/// segment and every member of `Σ`.
pub fn verify_truth_lemma(frame: &CanonicalFrame) -> TruthReport {
    let model = frame.model();
    let mut violations = Vec::new();
    for f in frame.sigma.members() {
        let truth = model.truth_set(f);
        for (i, s) in frame.segments.iter().enumerate() {
            let member = frame.theories[s.gamma].members.contains(f);
            let forced = truth.contains(i);
            if member != forced {
                violations.push(TruthViolation {
                    segment: frame.describe(i),
                    formula: f.clone(),
                    forced,
                    member,
                });
            }
        }
    }
    TruthReport {
        segments: frame.len(),
        formulas: frame.sigma.len(),
        violations,
    }
}
