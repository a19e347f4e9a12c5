use std::sync::OnceLock;

use thiserror::Error;

use super::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    Empty,
    #[error("duplicate world name `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("the intuitionistic relation is not a preorder")]
    NotPreorder,
    #[error("the order is not antisymmetric: {0} and {1} are distinct but mutually related")]
    NotAntisymmetric(String, String),
    #[error("sharp condition fails: {0} <= {1} R {2} but not {0} R {2}")]
    NotSharp(String, String, String),
}

/// A finite flat frame `(W, ⊑, R)`: a preorder `⊑` and an arbitrary relation `R`.
#[derive(Clone)]
pub struct FlatFrame {
    names: Vec<String>,
    up: Vec<WorldSet>,
    down: Vec<WorldSet>,
    succ: Vec<WorldSet>,
    upsets: OnceLock<Vec<WorldSet>>,
}

impl PartialEq for FlatFrame {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up && self.succ == other.succ
    }
}

impl Eq for FlatFrame {}

impl std::fmt::Debug for FlatFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FlatFrame")
            .field("worlds", &self.names)
            .field("pre", &self.pre_pairs_named())
            .field("R", &self.r_pairs_named())
            .finish()
    }
}

pub(crate) fn check_names(names: &[String]) -> Result<(), FrameError> {
    if names.is_empty() {
        return Err(FrameError::Empty);
    }
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(FrameError::DuplicateWorld(a.clone()));
        }
    }
    Ok(())
}

/// Reflexive-transitive closure of `pairs` on `n` points, as up-sets per point.
pub(crate) fn rt_closure(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<WorldSet>, FrameError> {
    let mut up: Vec<WorldSet> = (0..n).map(|w| WorldSet::singleton(n, w)).collect();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(FrameError::IndexOutOfRange(a.max(b)));
        }
        up[a].insert(b);
    }
    // Warshall
    for k in 0..n {
        let uk = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&uk);
            }
        }
    }
    Ok(up)
}

fn relation_rows(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<WorldSet>, FrameError> {
    let mut rows = vec![WorldSet::empty(n); n];
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(FrameError::IndexOutOfRange(a.max(b)));
        }
        rows[a].insert(b);
    }
    Ok(rows)
}

fn transpose(n: usize, rows: &[WorldSet]) -> Vec<WorldSet> {
    let mut cols = vec![WorldSet::empty(n); n];
    for (a, row) in rows.iter().enumerate() {
        for b in row.iter() {
            cols[b].insert(a);
        }
    }
    cols
}

fn is_preorder(up: &[WorldSet]) -> bool {
    up.iter()
        .enumerate()
        .all(|(w, row)| row.contains(w) && row.iter().all(|v| up[v].is_subset(row)))
}

impl FlatFrame {
    /// Builds a frame from generator pairs for `⊑` (closed reflexively and
    /// transitively) and the pairs of `R`, both given as world indices.
    pub fn new(
        names: Vec<String>,
        pre_generators: &[(usize, usize)],
        r: &[(usize, usize)],
    ) -> Result<Self, FrameError> {
        check_names(&names)?;
        let n = names.len();
        let up = rt_closure(n, pre_generators)?;
        let succ = relation_rows(n, r)?;
        Ok(FlatFrame::from_parts(names, up, succ))
    }

    /// Same as [`FlatFrame::new`] but with pairs of world names.
    pub fn from_named(names: &[&str], pre_generators: &[(&str, &str)], r: &[(&str, &str)]) -> Result<Self, FrameError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let index = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| FrameError::UnknownWorld(s.into()))
        };
        let pre = pre_generators
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        let r = r
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>, _>>()?;
        FlatFrame::new(names, &pre, &r)
    }

    /// Builds a frame from complete relation rows; `up[w]` must already be
    /// the set of `⊑`-successors of `w` in a preorder.
    pub fn from_rows(names: Vec<String>, up: Vec<WorldSet>, succ: Vec<WorldSet>) -> Result<Self, FrameError> {
        check_names(&names)?;
        if up.len() != names.len() || succ.len() != names.len() {
            return Err(FrameError::IndexOutOfRange(up.len().max(succ.len())));
        }
        if !is_preorder(&up) {
            return Err(FrameError::NotPreorder);
        }
        Ok(FlatFrame::from_parts(names, up, succ))
    }

    pub(crate) fn from_parts(names: Vec<String>, up: Vec<WorldSet>, succ: Vec<WorldSet>) -> Self {
        let n = names.len();
        let down = transpose(n, &up);
        FlatFrame {
            names,
            up,
            down,
            succ,
            upsets: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// `{v | w ⊑ v}`
    pub fn up(&self, w: usize) -> &WorldSet {
        &self.up[w]
    }

    /// `{v | v ⊑ w}`
    pub fn down(&self, w: usize) -> &WorldSet {
        &self.down[w]
    }

    /// `R[w]`
    pub fn succ(&self, w: usize) -> &WorldSet {
        &self.succ[w]
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w].contains(v)
    }

    pub fn r(&self, w: usize, v: usize) -> bool {
        self.succ[w].contains(v)
    }

    pub fn empty_set(&self) -> WorldSet {
        WorldSet::empty(self.len())
    }

    pub fn full_set(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn is_upset(&self, set: &WorldSet) -> bool {
        set.iter().all(|w| self.up[w].is_subset(set))
    }

    /// Smallest upset containing `set`.
    pub fn upclose(&self, set: &WorldSet) -> WorldSet {
        let mut out = self.empty_set();
        for w in set.iter() {
            out.union_with(&self.up[w]);
        }
        out
    }

    /// `{w | up(w) ⊆ set}`: the largest upset inside `set`.
    pub fn interior(&self, set: &WorldSet) -> WorldSet {
        WorldSet::from_worlds(self.len(), self.worlds().filter(|&w| self.up[w].is_subset(set)))
    }

    /// `R ∘ ⊑ ⊆ R`, i.e. every `R[w]` is an upset.
    pub fn is_upward_flat(&self) -> bool {
        self.succ.iter().all(|s| self.is_upset(s))
    }

    /// The frame `(W, ⊑, R ∘ ⊑)`.
    pub fn upward_close(&self) -> FlatFrame {
        let succ = self.succ.iter().map(|s| self.upclose(s)).collect();
        FlatFrame::from_parts(self.names.clone(), self.up.clone(), succ)
    }

    /// Every two members of each `R[w]` have a common `⊑`-lower bound inside `R[w]`.
    pub fn is_pointwise_downward_directed(&self) -> bool {
        self.succ.iter().all(|rw| {
            rw.iter().all(|v| {
                rw.iter().all(|u| {
                    let lower = self.down[v].intersection(&self.down[u]);
                    lower.intersects(rw)
                })
            })
        })
    }

    /// All upsets of `(W, ⊑)`, smallest first, computed once.
    pub fn upsets(&self) -> &[WorldSet] {
        self.upsets.get_or_init(|| {
            let mut out = Vec::new();
            self.collect_upsets(0, self.empty_set(), self.empty_set(), &mut out);
            out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            out
        })
    }

    fn collect_upsets(&self, w: usize, inside: WorldSet, outside: WorldSet, out: &mut Vec<WorldSet>) {
        if w == self.len() {
            out.push(inside);
            return;
        }
        if inside.contains(w) || outside.contains(w) {
            self.collect_upsets(w + 1, inside, outside, out);
            return;
        }
        // take w together with everything above it, unless something above is excluded
        if !self.up[w].intersects(&outside) {
            self.collect_upsets(w + 1, inside.union(&self.up[w]), outside.clone(), out);
        }
        if !self.down[w].intersects(&inside) {
            self.collect_upsets(w + 1, inside, outside.union(&self.down[w]), out);
        }
    }

    /// The subframe on `keep` with both relations restricted, renumbered in order.
    pub fn restrict(&self, keep: &WorldSet) -> FlatFrame {
        let idx: Vec<usize> = keep.iter().collect();
        let n = idx.len();
        let remap = |s: &WorldSet| {
            WorldSet::from_worlds(
                n,
                idx.iter().enumerate().filter(|(_, &w)| s.contains(w)).map(|(i, _)| i),
            )
        };
        let names = idx.iter().map(|&w| self.names[w].clone()).collect();
        let up = idx.iter().map(|&w| remap(&self.up[w])).collect();
        let succ = idx.iter().map(|&w| remap(&self.succ[w])).collect();
        FlatFrame::from_parts(names, up, succ)
    }

    /// Renames the worlds, keeping the relations.
    pub fn with_names(&self, names: Vec<String>) -> Result<FlatFrame, FrameError> {
        check_names(&names)?;
        if names.len() != self.len() {
            return Err(FrameError::IndexOutOfRange(names.len()));
        }
        Ok(FlatFrame::from_parts(names, self.up.clone(), self.succ.clone()))
    }

    /// `⊑` pairs including reflexive ones.
    pub fn pre_pairs(&self) -> Vec<(usize, usize)> {
        pairs(&self.up)
    }

    pub fn r_pairs(&self) -> Vec<(usize, usize)> {
        pairs(&self.succ)
    }

    fn pre_pairs_named(&self) -> Vec<String> {
        self.pre_pairs()
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{}<={}", self.names[a], self.names[b]))
            .collect()
    }

    fn r_pairs_named(&self) -> Vec<String> {
        self.r_pairs()
            .into_iter()
            .map(|(a, b)| format!("{}->{}", self.names[a], self.names[b]))
            .collect()
    }

    /// Brute-force isomorphism test (for small frames).
    pub fn isomorphic(&self, other: &FlatFrame) -> bool {
        let n = self.len();
        if n != other.len()
            || self.pre_pairs().len() != other.pre_pairs().len()
            || self.r_pairs().len() != other.r_pairs().len()
        {
            return false;
        }
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_iso(other, &mut perm, &mut used)
    }

    fn extend_iso(&self, other: &FlatFrame, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = perm.len();
        if k == self.len() {
            return true;
        }
        for cand in 0..self.len() {
            if used[cand] {
                continue;
            }
            let consistent = (0..k).chain(std::iter::once(k)).all(|i| {
                let pi = if i == k { cand } else { perm[i] };
                self.leq(k, i) == other.leq(cand, pi)
                    && self.leq(i, k) == other.leq(pi, cand)
                    && self.r(k, i) == other.r(cand, pi)
                    && self.r(i, k) == other.r(pi, cand)
            });
            if consistent {
                used[cand] = true;
                perm.push(cand);
                if self.extend_iso(other, perm, used) {
                    return true;
                }
                perm.pop();
                used[cand] = false;
            }
        }
        false
    }
}

fn pairs(rows: &[WorldSet]) -> Vec<(usize, usize)> {
    rows.iter()
        .enumerate()
        .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex32() -> FlatFrame {
        FlatFrame::from_named(&["w", "v", "u"], &[], &[("w", "v"), ("w", "u")]).unwrap()
    }

    #[test]
    fn closure_of_generators() {
        let f = FlatFrame::from_named(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[]).unwrap();
        assert!(f.leq(0, 2) && f.leq(1, 1) && !f.leq(2, 0));
        assert_eq!(f.upsets().len(), 4);
    }

    #[test]
    fn upward_flatness() {
        assert!(ex32().is_upward_flat());
        let f = FlatFrame::from_named(&["w", "v", "u"], &[("v", "u")], &[("w", "v")]).unwrap();
        assert!(!f.is_upward_flat());
        let g = f.upward_close();
        assert!(g.is_upward_flat());
        assert_eq!(g.r_pairs(), vec![(0, 1), (0, 2)]);
        assert_eq!(g.upward_close(), g);
    }

    #[test]
    fn directedness() {
        assert!(!ex32().is_pointwise_downward_directed());
        let f = FlatFrame::from_named(&["w", "v"], &[], &[("w", "v")]).unwrap();
        assert!(f.is_pointwise_downward_directed());
    }

    #[test]
    fn upsets_of_discrete_frame() {
        assert_eq!(ex32().upsets().len(), 8);
        for s in ex32().upsets() {
            assert!(ex32().is_upset(s));
        }
    }

    #[test]
    fn isomorphism() {
        let a = FlatFrame::from_named(&["x", "y"], &[("x", "y")], &[("x", "x")]).unwrap();
        let b = FlatFrame::from_named(&["x", "y"], &[("y", "x")], &[("y", "y")]).unwrap();
        let c = FlatFrame::from_named(&["x", "y"], &[("y", "x")], &[("x", "x")]).unwrap();
        assert!(a.isomorphic(&b));
        assert!(!a.isomorphic(&c));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FlatFrame::from_named(&[], &[], &[]).unwrap_err(), FrameError::Empty);
        assert!(matches!(
            FlatFrame::from_named(&["a"], &[("a", "b")], &[]),
            Err(FrameError::UnknownWorld(_))
        ));
        let bad = vec![WorldSet::from_worlds(2, [0]), WorldSet::from_worlds(2, [0])];
        assert_eq!(
            FlatFrame::from_rows(vec!["a".into(), "b".into()], bad, vec![WorldSet::empty(2); 2]).unwrap_err(),
            FrameError::NotPreorder
        );
    }
}
