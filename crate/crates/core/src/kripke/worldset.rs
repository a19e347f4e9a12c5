use std::fmt;

use smallvec::SmallVec;

/// A subset of the worlds `0..n` of a finite frame, stored as a bitset.
///
/// Every set belonging to one frame uses the same number of words, so
/// equality and ordering are structural. Frames up to 64 worlds stay inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet {
    words: SmallVec<[u64; 1]>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl WorldSet {
    pub fn empty(n: usize) -> Self {
        WorldSet {
            words: SmallVec::from_elem(0, word_count(n)),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = WorldSet::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(n);
            if hi > lo {
                *w = if hi - lo == 64 {
                    u64::MAX
                } else {
                    (1u64 << (hi - lo)) - 1
                };
            }
        }
        s
    }

    pub fn singleton(n: usize, w: usize) -> Self {
        let mut s = WorldSet::empty(n);
        s.insert(w);
        s
    }

    pub fn from_worlds<I: IntoIterator<Item = usize>>(n: usize, worlds: I) -> Self {
        let mut s = WorldSet::empty(n);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    /// Low `n` bits of `mask`; only valid for `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        let mut s = WorldSet::empty(n);
        s.words[0] = mask & WorldSet::full(n).words[0];
        s
    }

    /// First word of the bitset, i.e. the whole set when `n <= 64`.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    pub fn insert(&mut self, w: usize) -> bool {
        let (i, b) = (w / 64, 1u64 << (w % 64));
        let fresh = self.words[i] & b == 0;
        self.words[i] |= b;
        fresh
    }

    pub fn remove(&mut self, w: usize) {
        self.words[w / 64] &= !(1u64 << (w % 64));
    }

    pub fn contains(&self, w: usize) -> bool {
        self.words.get(w / 64).is_some_and(|x| x & (1u64 << (w % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    /// `{0..n} \ self`
    pub fn complement(&self, n: usize) -> WorldSet {
        WorldSet::full(n).difference(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = WorldSet::from_worlds(70, [0, 3, 65]);
        let b = WorldSet::from_worlds(70, [3, 69]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(65) && !a.contains(64));
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), [3]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), [0, 3, 65, 69]);
        assert_eq!(a.complement(70).len(), 67);
        assert!(WorldSet::from_worlds(70, [3]).is_subset(&a));
        assert_eq!(WorldSet::full(64).len(), 64);
        assert_eq!(WorldSet::full(3).mask(), 0b111);
        assert!(WorldSet::empty(0).is_empty());
    }
}
