use std::fmt;

use super::Formula;

// Binding strength, loosest first.
const IMP: u8 = 1;
const STO: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;
const ATOMIC: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => ATOMIC,
        _ if f.as_neg().is_some() || f.as_box().is_some() => PREFIX,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Sto(..) => STO,
        Formula::Imp(..) => IMP,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_at(f, IMP, out)?;
        return out.write_str(")");
    }
    if let Some(body) = f.as_neg() {
        out.write_str("!")?;
        return write_at(body, PREFIX, out);
    }
    if let Some(body) = f.as_box() {
        out.write_str("[]")?;
        return write_at(body, PREFIX, out);
    }
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Top => out.write_str("true"),
        Formula::Bot => out.write_str("false"),
        Formula::And(a, b) => {
            write_at(a, AND, out)?;
            out.write_str(" & ")?;
            write_at(b, PREFIX, out)
        }
        Formula::Or(a, b) => {
            write_at(a, OR, out)?;
            out.write_str(" | ")?;
            write_at(b, AND, out)
        }
        Formula::Sto(a, b) => {
            write_at(a, OR, out)?;
            out.write_str(" ~> ")?;
            write_at(b, STO, out)
        }
        Formula::Imp(a, b) => {
            write_at(a, STO, out)?;
            out.write_str(" -> ")?;
            write_at(b, IMP, out)
        }
    }
}

/// Prints with the fewest parentheses the grammar allows, using `!φ` for
/// `φ -> false` and `[]φ` for `true ~> φ`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, IMP, f)
    }
}

/// Unicode rendering (`⊤ ⊥ ∧ ∨ → ⊐ □ ¬`), for reports.
pub struct Pretty<'a>(pub &'a Formula);

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ascii = self.0.to_string();
        let s = ascii
            .replace("[]", "□")
            .replace('!', "¬")
            .replace(" ~> ", " ⊐ ")
            .replace(" -> ", " → ")
            .replace(" & ", " ∧ ")
            .replace(" | ", " ∨ ");
        // Constants only occur as whole tokens.
        let mut out = String::with_capacity(s.len());
        let mut word = String::new();
        for c in s.chars().chain(std::iter::once(' ')) {
            if c.is_ascii_alphanumeric() || c == '_' {
                word.push(c);
                continue;
            }
            match word.as_str() {
                "true" => out.push('⊤'),
                "false" => out.push('⊥'),
                _ => out.push_str(&word),
            }
            word.clear();
            out.push(c);
        }
        out.pop();
        f.write_str(&out)
    }
}
