//! Line-oriented model files.
//!
//! ```text
//! # comments run to end of line
//! worlds: w v u
//! pre: w<=v, z<=u        # generators, closed reflexively and transitively
//! R: w->v, w->u
//! val p: v u
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{FlatFrame, FlatModel, FrameError, ModelError, SharpFrame, SharpModel, Valuation, WorldSet};
use crate::syntax::Atom;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed model file, not yet checked against frame invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelSpec {
    pub worlds: Vec<String>,
    pub pre: Vec<(String, String)>,
    pub r: Vec<(String, String)>,
    pub val: BTreeMap<Atom, Vec<String>>,
}

fn items(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

fn pairs(s: &str, sep: &str, line: usize) -> Result<Vec<(String, String)>, ModelFileError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t.split_once(sep).ok_or_else(|| ModelFileError::Syntax {
                line,
                message: format!("expected `a{sep}b`, found `{t}`"),
            })?;
            Ok((a.trim().to_string(), b.trim().to_string()))
        })
        .collect()
}

pub fn parse_model(text: &str) -> Result<ModelSpec, ModelFileError> {
    let mut spec = ModelSpec::default();
    let mut saw_worlds = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| ModelFileError::Syntax {
            line,
            message: "expected `key: ...`".into(),
        })?;
        let key = key.trim();
        match key {
            "worlds" => {
                spec.worlds.extend(items(rest).map(String::from));
                saw_worlds = true;
            }
            "pre" => spec.pre.extend(pairs(rest, "<=", line)?),
            "R" => spec.r.extend(pairs(rest, "->", line)?),
            _ => {
                let atom = key
                    .strip_prefix("val")
                    .map(str::trim)
                    .filter(|a| is_atom_name(a))
                    .ok_or_else(|| ModelFileError::Syntax {
                        line,
                        message: format!("unknown key `{key}`"),
                    })?;
                spec.val
                    .entry(Atom::new(atom))
                    .or_default()
                    .extend(items(rest).map(String::from));
            }
        }
    }
    if !saw_worlds {
        return Err(ModelFileError::Syntax {
            line: 0,
            message: "missing `worlds:` line".into(),
        });
    }
    Ok(spec)
}

fn is_atom_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ModelSpec {
    fn index(&self, name: &str) -> Result<usize, FrameError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| FrameError::UnknownWorld(name.into()))
    }

    fn indexed(&self, pairs: &[(String, String)]) -> Result<Vec<(usize, usize)>, FrameError> {
        pairs
            .iter()
            .map(|(a, b)| Ok((self.index(a)?, self.index(b)?)))
            .collect()
    }

    fn valuation(&self) -> Result<Valuation, FrameError> {
        let n = self.worlds.len();
        self.val
            .iter()
            .map(|(a, ws)| {
                let idx = ws.iter().map(|w| self.index(w)).collect::<Result<Vec<_>, _>>()?;
                Ok((a.clone(), WorldSet::from_worlds(n, idx)))
            })
            .collect()
    }

    pub fn frame(&self) -> Result<FlatFrame, FrameError> {
        FlatFrame::new(self.worlds.clone(), &self.indexed(&self.pre)?, &self.indexed(&self.r)?)
    }

    /// Flat model; with `upclose` the valuation is repaired instead of rejected.
    pub fn flat_model(&self, upclose: bool) -> Result<FlatModel, ModelFileError> {
        let frame = self.frame()?;
        let val = self.valuation()?;
        Ok(if upclose {
            FlatModel::upclosed(frame, val)?
        } else {
            FlatModel::new(frame, val)?
        })
    }

    pub fn sharp_model(&self, upclose: bool) -> Result<SharpModel, ModelFileError> {
        let frame = SharpFrame::new(self.worlds.clone(), &self.indexed(&self.pre)?, &self.indexed(&self.r)?)?;
        let val = self.valuation()?;
        Ok(if upclose {
            SharpModel::upclosed(frame, val)?
        } else {
            SharpModel::new(frame, val)?
        })
    }
}

pub fn read_flat_model(text: &str, upclose: bool) -> Result<FlatModel, ModelFileError> {
    parse_model(text)?.flat_model(upclose)
}

/// Renders a model; `⊑` is written as all its non-reflexive pairs.
pub fn write_model(model: &FlatModel) -> String {
    let f = model.frame();
    write_parts(
        f.names(),
        &f.pre_pairs(),
        &f.r_pairs(),
        model.valuation().iter().map(|(a, s)| (a.as_str(), s)),
    )
}

pub fn write_sharp_model(model: &SharpModel) -> String {
    let f = model.frame().as_flat_frame();
    write_parts(
        f.names(),
        &f.pre_pairs(),
        &f.r_pairs(),
        model.valuation().iter().map(|(a, s)| (a.as_str(), s)),
    )
}

pub fn write_frame(frame: &FlatFrame) -> String {
    write_parts(frame.names(), &frame.pre_pairs(), &frame.r_pairs(), std::iter::empty())
}

fn write_parts<'a>(
    names: &[String],
    pre: &[(usize, usize)],
    r: &[(usize, usize)],
    val: impl Iterator<Item = (&'a str, &'a WorldSet)>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "worlds: {}", names.join(" "));
    let pre: Vec<String> = pre
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| format!("{}<={}", names[a], names[b]))
        .collect();
    let _ = writeln!(out, "pre: {}", pre.join(", "));
    let r: Vec<String> = r.iter().map(|&(a, b)| format!("{}->{}", names[a], names[b])).collect();
    let _ = writeln!(out, "R: {}", r.join(", "));
    for (atom, set) in val {
        let ws: Vec<&str> = set.iter().map(|w| names[w].as_str()).collect();
        let _ = writeln!(out, "val {atom}: {}", ws.join(" "));
    }
    out
}
