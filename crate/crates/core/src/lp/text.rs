//! The common LP text format (`Maximize` / `Subject To` / `Bounds` / `End`).
//!
//! Coefficients are written as integers when they are integral and as decimals
//! otherwise. A parsed program numbers its variables in order of first appearance.

use std::io::Write;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::{Bounds, Coef, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};

const TERMS_PER_LINE: usize = 8;

pub fn format_number(c: &Coef) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}", super::to_f64(c))
    }
}

fn write_expr<W: Write>(w: &mut W, lp: &LinearProgram, terms: &[(usize, Coef)]) -> std::io::Result<()> {
    for (k, (j, a)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            write!(w, "\n   ")?;
        }
        let sign = if a.is_negative() { "-" } else { "+" };
        if k > 0 || a.is_negative() {
            write!(w, " {sign}")?;
        }
        let mag = a.abs();
        if mag.is_one() {
            write!(w, " {}", lp.var_name(*j))?;
        } else {
            write!(w, " {} {}", format_number(&mag), lp.var_name(*j))?;
        }
    }
    Ok(())
}

/// Writes `lp` in LP text format.
pub fn write_lp<W: Write>(lp: &LinearProgram, w: &mut W) -> Result<()> {
    writeln!(w, "\\ variables: {}, constraints: {}", lp.num_variables(), lp.constraints.len())?;
    writeln!(w, "{}", if lp.sense == Sense::Maximize { "Maximize" } else { "Minimize" })?;
    write!(w, " {}:", lp.objective_name)?;
    write_expr(w, lp, &lp.objective)?;
    writeln!(w)?;
    writeln!(w, "Subject To")?;
    let mut referenced = vec![false; lp.num_variables()];
    for &(j, _) in &lp.objective {
        referenced[j] = true;
    }
    for c in &lp.constraints {
        write!(w, " {}:", c.name)?;
        if c.terms.is_empty() {
            write!(w, " 0 {}", lp.var_name(0))?;
        }
        write_expr(w, lp, &c.terms)?;
        writeln!(w, " {} {}", c.relation.as_str(), format_number(&c.rhs))?;
        for &(j, _) in &c.terms {
            referenced[j] = true;
        }
    }
    writeln!(w, "Bounds")?;
    for (j, &used) in referenced.iter().enumerate() {
        let b = lp.bounds(j);
        let name = lp.var_name(j);
        match (b.lower, b.upper) {
            (Some(l), None) if l.is_zero() => {
                if !used {
                    writeln!(w, " {name} >= 0")?;
                }
            }
            (None, None) => writeln!(w, " {name} free")?,
            (Some(l), Some(u)) if l == u => writeln!(w, " {name} = {}", format_number(&l))?,
            (l, u) => {
                let lo = l.map_or("-inf".to_string(), |l| format_number(&l));
                match u {
                    Some(u) => writeln!(w, " {lo} <= {name} <= {}", format_number(&u))?,
                    None => writeln!(w, " {name} >= {lo}")?,
                }
            }
        }
    }
    writeln!(w, "End")?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Colon,
    Rel(Relation),
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_.[]{}!\"#$%&()/,;?@'`|~".contains(c)
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1
            }
            '<' | '>' | '=' => {
                let next = chars.get(i + 1).copied();
                let (rel, len) = match (c, next) {
                    ('<', Some('=')) | ('=', Some('<')) => (Relation::Le, 2),
                    ('>', Some('=')) | ('=', Some('>')) => (Relation::Ge, 2),
                    ('<', _) => (Relation::Le, 1),
                    ('>', _) => (Relation::Ge, 1),
                    _ => (Relation::Eq, 1),
                };
                out.push(Tok::Rel(rel));
                i += len;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            }
            _ if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(parse_err(lineno, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a decimal literal exactly when it fits, otherwise via the nearest float.
pub(crate) fn parse_number(s: &str) -> Option<Coef> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let scale = exp - frac.len() as i32;
    let exact = digits.parse::<i128>().ok().and_then(|d| {
        let p = 10i128.checked_pow(scale.unsigned_abs())?;
        let (num, den) = if scale >= 0 { (d.checked_mul(p)?, 1) } else { (d, p) };
        let r = Ratio::new(num, den);
        Some(Coef::new(i64::try_from(*r.numer()).ok()?, i64::try_from(*r.denom()).ok()?))
    });
    exact.or_else(|| Coef::approximate_float(s.parse::<f64>().ok()?))
}

struct Stream {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Stream {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(0, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn label(&mut self) -> Option<String> {
        if let (Some(Tok::Ident(name)), Some(Tok::Colon)) = (self.peek(), self.peek_at(1)) {
            let name = name.clone();
            self.pos += 2;
            Some(name)
        } else {
            None
        }
    }

    fn signed_number(&mut self) -> Result<Option<Coef>> {
        let line = self.line();
        let mut neg = false;
        loop {
            match self.next() {
                Some(Tok::Plus) => {}
                Some(Tok::Minus) => neg = !neg,
                Some(Tok::Num(s)) => {
                    let v = parse_number(&s).ok_or_else(|| parse_err(line, format!("bad number `{s}`")))?;
                    return Ok(Some(if neg { -v } else { v }));
                }
                // Which infinity is meant follows from the bound's position.
                Some(Tok::Ident(s)) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
                    return Ok(None)
                }
                other => return Err(parse_err(line, format!("expected a number, found {other:?}"))),
            }
        }
    }

    /// Linear expression up to (not including) a relation or the end.
    fn expression(&mut self, lp: &mut LinearProgram) -> Result<Vec<(usize, Coef)>> {
        let mut terms = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Rel(_)) {
                break;
            }
            if let (Tok::Ident(_), Some(Tok::Colon)) = (t, self.peek_at(1)) {
                break;
            }
            let line = self.line();
            let mut coef = Coef::one();
            while let Some(Tok::Plus | Tok::Minus) = self.peek() {
                if self.next() == Some(Tok::Minus) {
                    coef = -coef;
                }
            }
            if let Some(Tok::Num(s)) = self.peek() {
                let v = parse_number(s).ok_or_else(|| parse_err(line, format!("bad number `{s}`")))?;
                coef *= v;
                self.pos += 1;
            }
            match self.next() {
                Some(Tok::Ident(name)) => terms.push((lp.variable(&name), coef)),
                other => return Err(parse_err(line, format!("expected a variable, found {other:?}"))),
            }
        }
        Ok(terms)
    }
}

enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    End,
}

fn section_keyword(line: &str) -> Option<(Section, Option<Sense>)> {
    let l = line.trim().to_ascii_lowercase();
    match l.as_str() {
        "maximize" | "maximise" | "maximum" | "max" => Some((Section::Objective, Some(Sense::Maximize))),
        "minimize" | "minimise" | "minimum" | "min" => Some((Section::Objective, Some(Sense::Minimize))),
        "subject to" | "such that" | "st" | "s.t." => Some((Section::Constraints, None)),
        "bounds" | "bound" => Some((Section::Bounds, None)),
        "end" => Some((Section::End, None)),
        _ => None,
    }
}

/// Parses LP text into a program.
pub fn parse_lp(text: &str) -> Result<LinearProgram> {
    let mut sense = None;
    let mut sections: [Vec<(Tok, usize)>; 3] = Default::default();
    let mut current = Section::None;
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some((s, sn)) = section_keyword(line) {
            if sn.is_some() {
                if sense.is_some() {
                    return Err(parse_err(lineno, "second objective section"));
                }
                sense = sn;
            }
            current = s;
            continue;
        }
        let slot = match current {
            Section::Objective => 0,
            Section::Constraints => 1,
            Section::Bounds => 2,
            Section::None => return Err(parse_err(lineno, "content before the objective section")),
            Section::End => return Err(parse_err(lineno, "content after End")),
        };
        sections[slot].extend(tokenize(line, lineno)?.into_iter().map(|t| (t, lineno)));
    }
    if !matches!(current, Section::End) {
        return Err(parse_err(text.lines().count(), "missing End"));
    }
    let sense = sense.ok_or_else(|| parse_err(1, "missing Maximize/Minimize"))?;
    let mut lp = LinearProgram::new(sense);
    let [obj, cons, bounds] = sections;

    let mut s = Stream { toks: obj, pos: 0 };
    if let Some(name) = s.label() {
        lp.objective_name = name;
    }
    lp.objective = s.expression(&mut lp)?;
    if s.peek().is_some() {
        return Err(parse_err(s.line(), "unexpected tokens in the objective"));
    }

    let mut s = Stream { toks: cons, pos: 0 };
    while s.peek().is_some() {
        let line = s.line();
        let name = s.label().unwrap_or_else(|| format!("c{}", lp.constraints.len() + 1));
        let terms = s.expression(&mut lp)?;
        let relation = match s.next() {
            Some(Tok::Rel(r)) => r,
            other => return Err(parse_err(line, format!("expected a relation, found {other:?}"))),
        };
        let rhs = s.signed_number()?.ok_or_else(|| parse_err(line, "infinite right-hand side"))?;
        lp.add_constraint(name, terms, relation, rhs);
    }

    let mut s = Stream { toks: bounds, pos: 0 };
    while s.peek().is_some() {
        let line = s.line();
        match s.peek() {
            Some(Tok::Ident(name)) if !name.eq_ignore_ascii_case("inf") && !name.eq_ignore_ascii_case("infinity") => {
                let name = name.clone();
                s.pos += 1;
                let j = lp.variable(&name);
                let mut b = lp.bounds(j);
                match s.next() {
                    Some(Tok::Ident(f)) if f.eq_ignore_ascii_case("free") => b = Bounds { lower: None, upper: None },
                    Some(Tok::Rel(r)) => {
                        let v = s.signed_number()?;
                        match r {
                            Relation::Ge => b.lower = v,
                            Relation::Le => b.upper = v,
                            Relation::Eq => {
                                b.lower = v;
                                b.upper = v;
                            }
                        }
                    }
                    other => return Err(parse_err(line, format!("bad bound for `{name}`: {other:?}"))),
                }
                lp.set_bounds(j, b);
            }
            _ => {
                let lower = s.signed_number()?;
                if s.next() != Some(Tok::Rel(Relation::Le)) {
                    return Err(parse_err(line, "expected `<=` after a lower bound"));
                }
                let name = match s.next() {
                    Some(Tok::Ident(n)) => n,
                    other => return Err(parse_err(line, format!("expected a variable, found {other:?}"))),
                };
                let j = lp.variable(&name);
                let mut b = Bounds { lower, upper: lp.bounds(j).upper };
                if s.peek() == Some(&Tok::Rel(Relation::Le)) {
                    s.pos += 1;
                    b.upper = s.signed_number()?;
                }
                lp.set_bounds(j, b);
            }
        }
    }
    Ok(lp)
}

/// Reads `name value` lines into a vector indexed like `lp`'s variables; unlisted
/// variables are 0. Lines starting with `\` or `#` are ignored.
pub fn parse_solution(text: &str, lp: &LinearProgram) -> Result<Vec<f64>> {
    let mut x = vec![0.0; lp.num_variables()];
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('\\') || t.starts_with('#') {
            continue;
        }
        let mut parts = t.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(k + 1, "expected `variable value`"));
        };
        let j = lp.var_index(name).ok_or_else(|| parse_err(k + 1, format!("unknown variable `{name}`")))?;
        x[j] = value.parse().map_err(|_| parse_err(k + 1, format!("bad value `{value}`")))?;
    }
    Ok(x)
}
