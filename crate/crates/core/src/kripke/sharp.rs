use super::frame::{check_names, rt_closure};
use super::model::check_upset;
use super::{FlatFrame, FlatModel, FrameError, ModelError, Valuation, WorldSet};
use crate::syntax::{Atom, Formula};

/// A finite sharp frame `(W, ≤, R)`: `≤` a partial order and
/// `w ≤ v R u` implies `w R u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpFrame {
    names: Vec<String>,
    up: Vec<WorldSet>,
    succ: Vec<WorldSet>,
}

impl SharpFrame {
    pub fn new(
        names: Vec<String>,
        order_generators: &[(usize, usize)],
        r: &[(usize, usize)],
    ) -> Result<Self, FrameError> {
        check_names(&names)?;
        let n = names.len();
        let up = rt_closure(n, order_generators)?;
        let mut succ = vec![WorldSet::empty(n); n];
        for &(a, b) in r {
            if a >= n || b >= n {
                return Err(FrameError::IndexOutOfRange(a.max(b)));
            }
            succ[a].insert(b);
        }
        SharpFrame::from_rows(names, up, succ)
    }

    pub(crate) fn from_rows(names: Vec<String>, up: Vec<WorldSet>, succ: Vec<WorldSet>) -> Result<Self, FrameError> {
        let n = names.len();
        for w in 0..n {
            for v in up[w].iter() {
                if v != w && up[v].contains(w) {
                    return Err(FrameError::NotAntisymmetric(names[w].clone(), names[v].clone()));
                }
                if let Some(u) = succ[v].difference(&succ[w]).first() {
                    return Err(FrameError::NotSharp(
                        names[w].clone(),
                        names[v].clone(),
                        names[u].clone(),
                    ));
                }
            }
        }
        Ok(SharpFrame { names, up, succ })
    }

    pub fn from_named(names: &[&str], order: &[(&str, &str)], r: &[(&str, &str)]) -> Result<Self, FrameError> {
        let f = FlatFrame::from_named(names, order, r)?;
        SharpFrame::new(f.names().to_vec(), &f.pre_pairs(), &f.r_pairs())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w].contains(v)
    }

    pub fn succ(&self, w: usize) -> &WorldSet {
        &self.succ[w]
    }

    pub fn up(&self, w: usize) -> &WorldSet {
        &self.up[w]
    }

    /// The same relations read as a flat frame (no translation).
    pub fn as_flat_frame(&self) -> FlatFrame {
        FlatFrame::from_parts(self.names.clone(), self.up.clone(), self.succ.clone())
    }

    /// The flattened frame. Worlds are `(w, Some(v))` for `w R v` and
    /// `(w, None)` when `R[w]` is empty; `(w,v) ≼ (w',v')` iff `w ≤ w'`
    /// and `(w,v) R (w',v')` iff `v ≤ w'`, with `None` reaching nothing.
    pub fn to_flat(&self) -> (FlatFrame, Vec<(usize, Option<usize>)>) {
        let mut points = Vec::new();
        for w in 0..self.len() {
            if self.succ[w].is_empty() {
                points.push((w, None));
            }
            for v in self.succ[w].iter() {
                points.push((w, Some(v)));
            }
        }
        let m = points.len();
        let names = points
            .iter()
            .map(|&(w, v)| match v {
                Some(v) => format!("{}.{}", self.names[w], self.names[v]),
                None => format!("{}.*", self.names[w]),
            })
            .collect();
        let row = |pred: &dyn Fn(usize) -> bool| WorldSet::from_worlds(m, (0..m).filter(|&j| pred(j)));
        let up = points
            .iter()
            .map(|&(w, _)| row(&|j| self.leq(w, points[j].0)))
            .collect();
        let succ = points
            .iter()
            .map(|&(_, v)| match v {
                Some(v) => row(&|j| self.leq(v, points[j].0)),
                None => WorldSet::empty(m),
            })
            .collect();
        (FlatFrame::from_parts(names, up, succ), points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpModel {
    frame: SharpFrame,
    valuation: Valuation,
}

impl SharpModel {
    pub fn new(frame: SharpFrame, valuation: Valuation) -> Result<Self, ModelError> {
        let flat = frame.as_flat_frame();
        for (atom, set) in &valuation {
            check_upset(&flat, atom, set, |w| frame.up(w))?;
        }
        Ok(SharpModel { frame, valuation })
    }

    pub fn upclosed(frame: SharpFrame, valuation: Valuation) -> Result<Self, ModelError> {
        let flat = frame.as_flat_frame();
        let mut closed = Valuation::new();
        for (a, s) in valuation {
            if s.iter().any(|w| w >= flat.len()) {
                return Err(ModelError::OutOfRange(a));
            }
            closed.insert(a, flat.upclose(&s));
        }
        Ok(SharpModel {
            frame,
            valuation: closed,
        })
    }

    pub fn frame(&self) -> &SharpFrame {
        &self.frame
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    fn value(&self, a: &Atom) -> WorldSet {
        self.valuation
            .get(a)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.frame.len()))
    }

    /// Truth set under the sharp clauses: `⊐` is read pointwise along `R`.
    pub fn truth_set(&self, f: &Formula) -> WorldSet {
        let n = self.frame.len();
        let all = |pred: &dyn Fn(usize) -> bool| WorldSet::from_worlds(n, (0..n).filter(|&w| pred(w)));
        match f {
            Formula::Atom(a) => self.value(a),
            Formula::Top => WorldSet::full(n),
            Formula::Bot => WorldSet::empty(n),
            Formula::And(a, b) => self.truth_set(a).intersection(&self.truth_set(b)),
            Formula::Or(a, b) => self.truth_set(a).union(&self.truth_set(b)),
            Formula::Imp(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                all(&|w| self.frame.up(w).iter().all(|v| !ta.contains(v) || tb.contains(v)))
            }
            Formula::Sto(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                all(&|w| self.frame.succ(w).iter().all(|v| !ta.contains(v) || tb.contains(v)))
            }
        }
    }

    /// The flattened model with `V♭(p) = {(w,v) | w ∈ V(p)}`, plus the
    /// source world of each new world.
    pub fn to_flat(&self) -> (FlatModel, Vec<(usize, Option<usize>)>) {
        let (frame, points) = self.frame.to_flat();
        let m = points.len();
        let valuation = self
            .valuation
            .iter()
            .map(|(a, s)| {
                (
                    a.clone(),
                    WorldSet::from_worlds(m, (0..m).filter(|&j| s.contains(points[j].0))),
                )
            })
            .collect();
        (
            FlatModel::new(frame, valuation).expect("image of an upset is an upset"),
            points,
        )
    }
}
