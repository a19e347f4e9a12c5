//! Complex algebras of finite flat frames.
//!
//! The carrier is the set of upsets of `(W, ⊑)`. Heyting implication and
//! strict implication are computed straight from their set comprehensions:
//!
//! * `a → b = {w | ∀v ⊒ w. v ∈ a ⇒ v ∈ b}`
//! * `a ⊐ b = {w | ∀v ⊒ w. R[v] ⊆ a ⇒ R[v] ⊆ b}`

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::kripke::{FlatFrame, WorldSet};
use crate::syntax::{Atom, Consecution, Formula};

pub type Assignment = BTreeMap<Atom, WorldSet>;

/// Upsets up to this many worlds are found by scanning all subsets.
const SCAN_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    n: usize,
    names: Vec<String>,
    carrier: Vec<WorldSet>,
    index: HashMap<WorldSet, usize>,
    up: Vec<WorldSet>,
    succ: Vec<WorldSet>,
}

/// Operation tables indexed by carrier position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTables {
    pub carrier: Vec<WorldSet>,
    pub meet: Vec<usize>,
    pub join: Vec<usize>,
    pub imp: Vec<usize>,
    pub sto: Vec<usize>,
}

pub fn complex_algebra(frame: &FlatFrame) -> UpsetAlgebra {
    let n = frame.len();
    let up: Vec<WorldSet> = frame.worlds().map(|w| frame.up(w).clone()).collect();
    let succ: Vec<WorldSet> = frame.worlds().map(|w| frame.succ(w).clone()).collect();
    let carrier: Vec<WorldSet> = if n <= SCAN_LIMIT {
        (0u64..(1 << n))
            .map(|m| WorldSet::from_mask(n, m))
            .filter(|s| s.iter().all(|w| up[w].is_subset(s)))
            .collect()
    } else {
        frame.upsets().to_vec()
    };
    let index = carrier.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    UpsetAlgebra {
        n,
        names: frame.names().to_vec(),
        carrier,
        index,
        up,
        succ,
    }
}

impl UpsetAlgebra {
    pub fn carrier(&self) -> &[WorldSet] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, a: &WorldSet) -> bool {
        self.index.contains_key(a)
    }

    pub fn top(&self) -> WorldSet {
        WorldSet::full(self.n)
    }

    pub fn bottom(&self) -> WorldSet {
        WorldSet::empty(self.n)
    }

    pub fn meet(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
        a.intersection(b)
    }

    pub fn join(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
        a.union(b)
    }

    pub fn imp(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
        let mut out = self.bottom();
        for w in 0..self.n {
            if self.up[w].iter().all(|v| !a.contains(v) || b.contains(v)) {
                out.insert(w);
            }
        }
        out
    }

    pub fn sto(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
        let mut out = self.bottom();
        for w in 0..self.n {
            if self.up[w]
                .iter()
                .all(|v| !self.succ[v].is_subset(a) || self.succ[v].is_subset(b))
            {
                out.insert(w);
            }
        }
        out
    }

    pub fn eval(&self, f: &Formula, v: &Assignment) -> WorldSet {
        match f {
            Formula::Atom(a) => v.get(a).cloned().unwrap_or_else(|| self.bottom()),
            Formula::Top => self.top(),
            Formula::Bot => self.bottom(),
            Formula::And(a, b) => self.meet(&self.eval(a, v), &self.eval(b, v)),
            Formula::Or(a, b) => self.join(&self.eval(a, v), &self.eval(b, v)),
            Formula::Imp(a, b) => self.imp(&self.eval(a, v), &self.eval(b, v)),
            Formula::Sto(a, b) => self.sto(&self.eval(a, v), &self.eval(b, v)),
        }
    }

    fn assignments(&self, atoms: &[Atom]) -> impl Iterator<Item = Assignment> + '_ {
        let k = atoms.len();
        let size = self.carrier.len();
        let total = size.pow(k as u32);
        let atoms = atoms.to_vec();
        (0..total).map(move |mut code| {
            let mut v = Assignment::new();
            for a in &atoms {
                v.insert(a.clone(), self.carrier[code % size].clone());
                code /= size;
            }
            v
        })
    }

    /// `A ⊩ φ`: every assignment sends `φ` to the top element.
    pub fn validates(&self, f: &Formula) -> bool {
        let atoms: Vec<Atom> = f.atoms().into_iter().collect();
        let top = self.top();
        self.assignments(&atoms).all(|v| self.eval(f, &v) == top)
    }

    /// `⋀Γ ≤ φ` under every assignment.
    pub fn validates_consecution(&self, c: &Consecution) -> bool {
        let atoms: Vec<Atom> = c.atoms().into_iter().collect();
        self.assignments(&atoms).all(|v| {
            let mut lhs = self.top();
            for p in &c.premises {
                lhs.intersect_with(&self.eval(p, &v));
            }
            lhs.is_subset(&self.eval(&c.conclusion, &v))
        })
    }

    pub fn tables(&self) -> OperationTables {
        let k = self.carrier.len();
        let mut t = OperationTables {
            carrier: self.carrier.clone(),
            meet: Vec::with_capacity(k * k),
            join: Vec::with_capacity(k * k),
            imp: Vec::with_capacity(k * k),
            sto: Vec::with_capacity(k * k),
        };
        let ix = |s: WorldSet| *self.index.get(&s).expect("carrier is closed under the operations");
        for a in &self.carrier {
            for b in &self.carrier {
                t.meet.push(ix(self.meet(a, b)));
                t.join.push(ix(self.join(a, b)));
                t.imp.push(ix(self.imp(a, b)));
                t.sto.push(ix(self.sto(a, b)));
            }
        }
        t
    }

    fn show(&self, s: &WorldSet) -> String {
        let ws: Vec<&str> = s.iter().map(|w| self.names[w].as_str()).collect();
        format!("{{{}}}", ws.join(","))
    }

    /// Exhaustive check of the strict-implication laws over all element tuples.
    pub fn check_laws(&self) -> LawReport {
        let c = &self.carrier;
        let mut laws: Vec<LawResult> = Vec::new();
        let mut record = |name: &'static str, holds_in_every_flat_algebra: bool, witness: Option<Vec<String>>| {
            laws.push(LawResult {
                name,
                required: holds_in_every_flat_algebra,
                holds: witness.is_none(),
                witness,
            });
        };
        let pairs = || c.iter().flat_map(|a| c.iter().map(move |b| (a, b)));
        let triples = || pairs().flat_map(|(a, b)| c.iter().map(move |x| (a, b, x)));
        let w2 = |a: &WorldSet, b: &WorldSet| Some(vec![self.show(a), self.show(b)]);
        let w3 = |a: &WorldSet, b: &WorldSet, x: &WorldSet| Some(vec![self.show(a), self.show(b), self.show(x)]);

        let closed = pairs()
            .find(|(a, b)| !self.contains(&self.imp(a, b)) || !self.contains(&self.sto(a, b)))
            .and_then(|(a, b)| w2(a, b));
        record("closure", true, closed);
        let resid = triples()
            .find(|(a, b, x)| x.intersection(a).is_subset(b) != x.is_subset(&self.imp(a, b)))
            .and_then(|(a, b, x)| w3(a, b, x));
        record("residuation", true, resid);
        let ck = triples()
            .find(|(a, b, x)| self.sto(a, b).intersection(&self.sto(a, x)) != self.sto(a, &b.intersection(x)))
            .and_then(|(a, b, x)| w3(a, b, x));
        record("CK", true, ck);
        let ct = triples()
            .find(|(a, b, x)| !self.sto(a, b).intersection(&self.sto(b, x)).is_subset(&self.sto(a, x)))
            .and_then(|(a, b, x)| w3(a, b, x));
        record("CT", true, ct);
        let top = self.top();
        let ci = c.iter().find(|a| self.sto(a, a) != top).map(|a| vec![self.show(a)]);
        record("CI", true, ci);
        let cd = triples()
            .find(|(a, b, x)| self.sto(a, x).intersection(&self.sto(b, x)) != self.sto(&a.union(b), x))
            .and_then(|(a, b, x)| w3(a, b, x));
        record("CD", false, cd);
        LawReport {
            carrier_size: c.len(),
            laws,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawResult {
    pub name: &'static str,
    /// Whether the law holds in every complex algebra of a flat frame.
    pub required: bool,
    pub holds: bool,
    /// First failing tuple, as sets of world names.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub carrier_size: usize,
    pub laws: Vec<LawResult>,
}

impl LawReport {
    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }

    /// All required laws hold.
    pub fn flat_laws_hold(&self) -> bool {
        self.laws.iter().filter(|l| l.required).all(|l| l.holds)
    }
}

pub fn check_lhae_laws(a: &UpsetAlgebra) -> LawReport {
    a.check_laws()
}

pub fn algebra_validates(a: &UpsetAlgebra, f: &Formula) -> bool {
    a.validates(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, ws: &[usize]) -> WorldSet {
        WorldSet::from_worlds(n, ws.iter().copied())
    }

    #[test]
    fn chain_without_modal_edges() {
        let f = FlatFrame::from_named(&["w", "v"], &[("w", "v")], &[]).unwrap();
        let a = complex_algebra(&f);
        assert_eq!(a.len(), 3);
        for x in a.carrier() {
            for y in a.carrier() {
                assert_eq!(a.sto(x, y), a.top());
            }
        }
    }

    #[test]
    fn three_point_fan() {
        let f = FlatFrame::from_named(&["w", "v", "u"], &[], &[("w", "v"), ("w", "u")]).unwrap();
        let a = complex_algebra(&f);
        assert_eq!(a.sto(&set(3, &[1]), &set(3, &[])), a.top());
        assert_eq!(a.sto(&set(3, &[1, 2]), &set(3, &[])), set(3, &[1, 2]));
        let report = a.check_laws();
        assert!(report.flat_laws_hold());
        let cd = report.law("CD").unwrap();
        assert!(!cd.holds);
    }
}
