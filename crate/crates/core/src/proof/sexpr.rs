//! Derivation files: one s-expression per node.
//!
//! ```text
//! (mp (el "p" :concl "{p, p -> q} => p")
//!     (el "p -> q" :concl "{p, p -> q} => p -> q")
//!     :concl "{p, p -> q} => q")
//! ```
//!
//! Node forms, each ending in a mandatory `:concl "Γ => φ"`:
//! `(ax NAME SUBST)`, `(el FORMULA)`, `(mp MINOR MAJOR)`, `(na CHILD)`,
//! `(weaken CHILD)`, `(cut SIDE... MAIN)`, `(subst SUBST CHILD)`,
//! `(ded-intro CHILD)`, `(ded-elim CHILD)`. A substitution is a list of
//! pairs `((p . "formula") ...)`, `()` when empty. A file may wrap its root as
//! `(derivation :name "..." :base ("4a" ...) ROOT)`.

use std::fmt::Write as _;

use lexpr::parse::{KeywordSyntax, Options};
use lexpr::Value;
use thiserror::Error;

use super::{AxiomBase, Derivation, Rule};
use crate::syntax::{parse, parse_consecution, Atom, Formula, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation file: {0}")]
pub struct ReadError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ReadError> {
    Err(ReadError(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationFile {
    pub name: Option<String>,
    pub base: Option<AxiomBase>,
    pub root: Derivation,
}

pub fn read_file(text: &str) -> Result<DerivationFile, ReadError> {
    let options = Options::new().with_keyword_syntax(KeywordSyntax::ColonPrefix);
    let value = lexpr::from_str_custom(text, options).map_err(|e| ReadError(e.to_string()))?;
    let items = list(&value)?;
    if items.first().and_then(|v| v.as_symbol()) == Some("derivation") {
        let (positional, keys) = split_args(&items[1..])?;
        let [root] = positional.as_slice() else {
            return err("`derivation` wraps exactly one node");
        };
        let mut name = None;
        let mut base = None;
        for (k, v) in keys {
            match k {
                "name" => name = Some(string(v)?.to_string()),
                "base" => {
                    let mut b = AxiomBase::empty();
                    for item in list(v)? {
                        b = b.with_item(string(item)?).map_err(|e| ReadError(e.to_string()))?;
                    }
                    base = Some(b);
                }
                other => return err(format!("unknown field `:{other}`")),
            }
        }
        return Ok(DerivationFile {
            name,
            base,
            root: node(root)?,
        });
    }
    Ok(DerivationFile {
        name: None,
        base: None,
        root: node(&value)?,
    })
}

pub fn read_derivation(text: &str) -> Result<Derivation, ReadError> {
    Ok(read_file(text)?.root)
}

fn list(v: &Value) -> Result<Vec<&Value>, ReadError> {
    match v.list_iter() {
        Some(it) => Ok(it.collect()),
        None => err(format!("expected a list, found `{v}`")),
    }
}

fn string(v: &Value) -> Result<&str, ReadError> {
    v.as_str()
        .ok_or_else(|| ReadError(format!("expected a string, found `{v}`")))
}

fn formula(v: &Value) -> Result<Formula, ReadError> {
    let s = string(v)?;
    parse(s).map_err(|e| ReadError(format!("in `{s}`: {e}")))
}

type Args<'a> = (Vec<&'a Value>, Vec<(&'a str, &'a Value)>);

fn split_args<'a>(items: &[&'a Value]) -> Result<Args<'a>, ReadError> {
    let mut positional = Vec::new();
    let mut keys = Vec::new();
    let mut it = items.iter();
    while let Some(v) = it.next() {
        if let Some(k) = v.as_keyword() {
            let Some(val) = it.next() else {
                return err(format!("`:{k}` has no value"));
            };
            keys.push((k, *val));
        } else {
            positional.push(*v);
        }
    }
    Ok((positional, keys))
}

fn substitution(v: &Value) -> Result<Substitution, ReadError> {
    let mut s = Substitution::new();
    for pair in list(v)? {
        let Some((k, f)) = pair.as_pair() else {
            return err(format!(
                "substitution entries are `(atom . \"formula\")`, found `{pair}`"
            ));
        };
        let name = k
            .as_symbol()
            .or_else(|| k.as_str())
            .ok_or_else(|| ReadError(format!("bad atom `{k}`")))?;
        s.insert(Atom::new(name), formula(f)?);
    }
    Ok(s)
}

fn node(v: &Value) -> Result<Derivation, ReadError> {
    let items = list(v)?;
    let Some(tag) = items.first().and_then(|h| h.as_symbol()) else {
        return err(format!("a node starts with its rule name, found `{v}`"));
    };
    let (args, keys) = split_args(&items[1..])?;
    let mut concl = None;
    for (k, val) in keys {
        match k {
            "concl" => {
                let s = string(val)?;
                concl = Some(parse_consecution(s).map_err(|e| ReadError(format!("in `{s}`: {e}")))?);
            }
            other => return err(format!("unknown field `:{other}` in `{tag}`")),
        }
    }
    let Some(conclusion) = concl else {
        return err(format!("`{tag}` node lacks `:concl`"));
    };
    let children = |from: usize| args[from..].iter().map(|a| node(a)).collect::<Result<Vec<_>, _>>();
    let need = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            err(format!("`{tag}` takes {n} argument(s), found {}", args.len()))
        }
    };
    let (rule, premises) = match tag {
        "ax" => {
            if args.len() != 1 && args.len() != 2 {
                return err("`ax` takes a schema name and an optional substitution");
            }
            let name = string(args[0])?.to_string();
            let subst = match args.get(1) {
                Some(s) => substitution(s)?,
                None => Substitution::new(),
            };
            (Rule::Ax { name, subst }, vec![])
        }
        "el" => {
            need(1)?;
            (
                Rule::El {
                    member: formula(args[0])?,
                },
                vec![],
            )
        }
        "mp" => {
            need(2)?;
            (Rule::Mp, children(0)?)
        }
        "na" | "weaken" | "ded-intro" | "ded-elim" => {
            need(1)?;
            let rule = match tag {
                "na" => Rule::Na,
                "weaken" => Rule::Weaken,
                "ded-intro" => Rule::DedIntro,
                _ => Rule::DedElim,
            };
            (rule, children(0)?)
        }
        "cut" => {
            if args.is_empty() {
                return err("`cut` needs at least its main premise");
            }
            (Rule::Cut, children(0)?)
        }
        "subst" => {
            need(2)?;
            (
                Rule::Subst {
                    subst: substitution(args[0])?,
                },
                children(1)?,
            )
        }
        other => return err(format!("unknown rule `{other}`")),
    };
    Ok(Derivation::new(rule, conclusion, premises))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_subst(s: &Substitution) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|(a, f)| format!("({a} . {})", quote(&f.to_string())))
        .collect();
    format!("({})", parts.join(" "))
}

pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, 0, &mut out);
    out
}

/// A complete file with a `(derivation ...)` header.
pub fn write_file(name: &str, base: &AxiomBase, d: &Derivation) -> String {
    let names: Vec<String> = base.members().into_iter().map(|(n, _)| quote(&n)).collect();
    let mut out = format!("(derivation :name {} :base ({})\n  ", quote(name), names.join(" "));
    write_node(d, 2, &mut out);
    out.push_str(")\n");
    out
}

fn write_node(d: &Derivation, indent: usize, out: &mut String) {
    let concl = quote(&d.conclusion.to_string());
    match &d.rule {
        Rule::Ax { name, subst } => {
            let _ = write!(out, "(ax {} {} :concl {concl})", quote(name), write_subst(subst));
        }
        Rule::El { member } => {
            let _ = write!(out, "(el {} :concl {concl})", quote(&member.to_string()));
        }
        rule => {
            let _ = write!(out, "({}", rule.tag());
            if let Rule::Subst { subst } = rule {
                let _ = write!(out, " {}", write_subst(subst));
            }
            let pad = " ".repeat(indent + 2);
            for child in &d.premises {
                let _ = write!(out, "\n{pad}");
                write_node(child, indent + 2, out);
            }
            let _ = write!(out, "\n{pad}:concl {concl})");
        }
    }
}
