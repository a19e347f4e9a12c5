//! Frames with at most four worlds, up to isomorphism.
//!
//! A frame on `n` worlds is encoded by two `n × n` adjacency matrices packed
//! into `u16`s (bit `i*n + j` means `i` is related to `j`). The canonical
//! representative of an isomorphism class is the permutation image with the
//! lexicographically least `(⊑, R)` code pair.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FlatFrame, WorldSet};

pub const MAX_CODED_WORLDS: usize = 4;

/// Which frames an enumeration produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameClass {
    /// Any preorder and any relation.
    Flat,
    /// `R ∘ ⊑ ⊆ R`.
    UpwardFlat,
    /// Partial order with `w ≤ v R u ⇒ w R u`, viewed as a flat frame.
    Sharp,
}

impl std::str::FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "flat" => Ok(FrameClass::Flat),
            "upward-flat" | "upward_flat" => Ok(FrameClass::UpwardFlat),
            "sharp" => Ok(FrameClass::Sharp),
            _ => Err(format!(
                "unknown frame class `{s}` (expected flat, upward-flat or sharp)"
            )),
        }
    }
}

impl std::fmt::Display for FrameClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrameClass::Flat => "flat",
            FrameClass::UpwardFlat => "upward-flat",
            FrameClass::Sharp => "sharp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameCode {
    pub n: usize,
    pub pre: u16,
    pub r: u16,
}

fn bit(n: usize, i: usize, j: usize) -> u16 {
    1 << (i * n + j)
}

fn row(code: u16, n: usize, i: usize) -> u16 {
    (code >> (i * n)) & ((1 << n) - 1)
}

fn identity(n: usize) -> u16 {
    (0..n).fold(0, |c, i| c | bit(n, i, i))
}

fn is_transitive(code: u16, n: usize) -> bool {
    (0..n).all(|i| {
        (0..n)
            .filter(|&j| row(code, n, i) >> j & 1 == 1)
            .all(|j| row(code, n, j) & !row(code, n, i) == 0)
    })
}

fn is_antisymmetric(code: u16, n: usize) -> bool {
    (0..n).all(|i| (0..n).all(|j| i == j || code & bit(n, i, j) == 0 || code & bit(n, j, i) == 0))
}

fn admits(class: FrameClass, n: usize, pre: u16, r: u16) -> bool {
    match class {
        FrameClass::Flat => true,
        FrameClass::UpwardFlat => (0..n).all(|i| {
            let ri = row(r, n, i);
            (0..n).filter(|&j| ri >> j & 1 == 1).all(|j| row(pre, n, j) & !ri == 0)
        }),
        FrameClass::Sharp => {
            is_antisymmetric(pre, n)
                && (0..n).all(|w| {
                    (0..n)
                        .filter(|&v| pre & bit(n, w, v) != 0)
                        .all(|v| row(r, n, v) & !row(r, n, w) == 0)
                })
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// `perm[i]` is the new index of world `i`.
fn apply(code: u16, n: usize, perm: &[usize]) -> u16 {
    let mut out = 0;
    let mut rest = code;
    while rest != 0 {
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= bit(n, perm[b / n], perm[b % n]);
    }
    out
}

/// The canonical code of a frame with at most four worlds.
pub fn canonical_code(frame: &FlatFrame) -> FrameCode {
    let n = frame.len();
    assert!(
        n <= MAX_CODED_WORLDS,
        "canonical codes only cover frames with at most four worlds"
    );
    let (pre, r) = encode(frame);
    canonicalise(n, pre, r)
}

fn encode(frame: &FlatFrame) -> (u16, u16) {
    let n = frame.len();
    let pack = |pairs: Vec<(usize, usize)>| pairs.into_iter().fold(0u16, |c, (i, j)| c | bit(n, i, j));
    (pack(frame.pre_pairs()), pack(frame.r_pairs()))
}

fn canonicalise(n: usize, pre: u16, r: u16) -> FrameCode {
    let (pre, r) = permutations(n)
        .iter()
        .map(|p| (apply(pre, n, p), apply(r, n, p)))
        .min()
        .expect("at least one permutation");
    FrameCode { n, pre, r }
}

pub fn decode(code: FrameCode) -> FlatFrame {
    let n = code.n;
    let names = (0..n).map(|i| format!("w{i}")).collect();
    let rows = |c: u16| -> Vec<WorldSet> {
        (0..n)
            .map(|i| WorldSet::from_worlds(n, (0..n).filter(|&j| c & bit(n, i, j) != 0)))
            .collect()
    };
    FlatFrame::from_parts(names, rows(code.pre), rows(code.r))
}

/// Canonical preorders (or partial orders) on `n` points with their automorphisms.
fn canonical_preorders(n: usize, antisymmetric: bool) -> Vec<(u16, Vec<Vec<usize>>)> {
    let perms = permutations(n);
    let id = identity(n);
    let off_diagonal: Vec<u16> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| bit(n, i, j)))
        .collect();
    let mut out = Vec::new();
    for choice in 0u32..(1 << off_diagonal.len()) {
        let code = off_diagonal
            .iter()
            .enumerate()
            .filter(|(k, _)| choice >> k & 1 == 1)
            .fold(id, |c, (_, b)| c | b);
        if !is_transitive(code, n) || (antisymmetric && !is_antisymmetric(code, n)) {
            continue;
        }
        if perms.iter().any(|p| apply(code, n, p) < code) {
            continue;
        }
        let aut = perms.iter().filter(|p| apply(code, n, p) == code).cloned().collect();
        out.push((code, aut));
    }
    out
}

/// Canonical codes of every isomorphism class of `class` frames on exactly `n` worlds.
pub fn enumerate_codes(n: usize, class: FrameClass) -> Vec<FrameCode> {
    assert!(
        (1..=MAX_CODED_WORLDS).contains(&n),
        "exhaustive enumeration covers 1 to 4 worlds"
    );
    let mut out = Vec::new();
    for (pre, aut) in canonical_preorders(n, class == FrameClass::Sharp) {
        for r in 0u32..(1 << (n * n)) {
            let r = r as u16;
            if admits(class, n, pre, r) && aut.iter().all(|p| apply(r, n, p) >= r) {
                out.push(FrameCode { n, pre, r });
            }
        }
    }
    out.sort_by_key(|c| (c.n, c.r.count_ones(), c.pre.count_ones(), c.pre, c.r));
    out
}

type FrameCache = Mutex<HashMap<(usize, FrameClass), Arc<Vec<FlatFrame>>>>;

/// Every isomorphism class of `class` frames on exactly `n` worlds, ordered
/// by number of `R` edges, then number of `⊑` pairs. Results are cached.
pub fn enumerate_frames(n: usize, class: FrameClass) -> Arc<Vec<FlatFrame>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("frame cache").get(&(n, class)) {
        return v.clone();
    }
    let frames: Arc<Vec<FlatFrame>> = Arc::new(enumerate_codes(n, class).into_iter().map(decode).collect());
    cache
        .lock()
        .expect("frame cache")
        .entry((n, class))
        .or_insert(frames)
        .clone()
}

/// All classes with `1..=max_n` worlds, smallest frames first.
pub fn enumerate_up_to(max_n: usize, class: FrameClass) -> Vec<FlatFrame> {
    (1..=max_n)
        .flat_map(|n| enumerate_frames(n, class).iter().cloned().collect::<Vec<_>>())
        .collect()
}

/// Up to `count` pairwise non-isomorphic random `class` frames on `n` worlds,
/// deterministic in `seed`. Fewer are returned when the class is smaller.
pub fn sample_frames(n: usize, class: FrameClass, count: usize, seed: u64) -> Vec<FlatFrame> {
    assert!((1..=MAX_CODED_WORLDS).contains(&n), "sampling covers 1 to 4 worlds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count.saturating_mul(200).max(1000) {
        attempts += 1;
        let (pre, r) = random_frame(n, class, &mut rng);
        let code = canonicalise(n, pre, r);
        if seen.insert(code) {
            out.push(decode(code));
        }
    }
    out
}

fn closure(code: u16, n: usize) -> u16 {
    let mut c = code | identity(n);
    for k in 0..n {
        for i in 0..n {
            if c & bit(n, i, k) != 0 {
                c |= row(c, n, k) << (i * n);
            }
        }
    }
    c
}

fn random_frame(n: usize, class: FrameClass, rng: &mut ChaCha8Rng) -> (u16, u16) {
    let full: u16 = ((1u32 << (n * n)) - 1) as u16;
    match class {
        FrameClass::Flat => (closure(rng.gen::<u16>() & full, n), rng.gen::<u16>() & full),
        FrameClass::UpwardFlat => {
            let pre = closure(rng.gen::<u16>() & full, n);
            let mut r = 0;
            for i in 0..n {
                let seeds = rng.gen::<u16>() & ((1 << n) - 1);
                let upset = (0..n)
                    .filter(|&j| seeds >> j & 1 == 1)
                    .fold(0, |acc, j| acc | row(pre, n, j));
                r |= upset << (i * n);
            }
            (pre, r)
        }
        FrameClass::Sharp => {
            // edges only go forward in a random linear order, so the closure is antisymmetric
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut gens = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.4) {
                        gens |= bit(n, order[a], order[b]);
                    }
                }
            }
            let pre = closure(gens, n);
            let raw = rng.gen::<u16>() & full;
            let mut r = 0;
            for w in 0..n {
                let mut rw = 0;
                for v in 0..n {
                    if pre & bit(n, w, v) != 0 {
                        rw |= row(raw, n, v);
                    }
                }
                r |= rw << (w * n);
            }
            (pre, r)
        }
    }
}
