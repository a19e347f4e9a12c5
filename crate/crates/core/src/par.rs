//! Execution strategy for sweeps over frames.
//!
//! With the `parallel` feature, [`Exec::Parallel`] fans work out over rayon's
//! global pool; without it, both variants run on the calling thread.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// The result for the earliest item (in slice order) for which `f` yields `Some`.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().find_map_first(f);
        }
        items.iter().find_map(f)
    }

    pub fn all<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        self.find_map_first(items, |x| (!f(x)).then_some(())).is_none()
    }

    pub fn filter<T, F>(self, items: &[T], f: F) -> Vec<T>
    where
        T: Sync + Send + Clone,
        F: Fn(&T) -> bool + Sync + Send,
    {
        self.map(items, |x| f(x).then(|| x.clone()))
            .into_iter()
            .flatten()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_agree() {
        let xs: Vec<u32> = (0..1000).collect();
        for e in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(e.map(&xs, |x| x * 2)[999], 1998);
            assert_eq!(e.find_map_first(&xs, |&x| (x % 7 == 6).then_some(x)), Some(6));
            assert!(e.all(&xs, |&x| x < 1000));
            assert_eq!(e.filter(&xs, |&x| x % 100 == 0).len(), 10);
        }
    }
}
