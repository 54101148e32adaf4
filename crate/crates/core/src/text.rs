//! Line-oriented text forms for rows and models.
//!
//! A row is written as `<kind> <key>=<value>... : <terms> <sense> <rhs>`,
//! for example
//!
//! ```text
//! clique q={1,2,3} j=1 : +1 x1_1 +1 x2_1 +1 x3_1 -1 w1 <= 0
//! ```
//!
//! Sets are `{a,b,c}` without spaces, `{}` when empty. Terms use the
//! variable names `x<v>_<j>` and `w<j>` and always carry an explicit sign.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::formulation::Model;
use crate::graph::{Vertex, VertexSet};
use crate::row::{CutRow, Family, Sense, VarId, Vars};
use crate::{Error, Result};

struct Set<'a>(&'a VertexSet);

impl fmt::Display for Set<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// `kind key=value ...` for a family.
pub struct FamilyText<'a>(pub &'a Family);

impl fmt::Display for FamilyText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.kind())?;
        match self.0 {
            Family::Assignment { v } => write!(f, " v={v}"),
            Family::Conflict { u, v, j } => write!(f, " u={u} v={v} j={j}"),
            Family::ColorOrder { j } | Family::EquityLower { j } | Family::EquityUpper { j } => write!(f, " j={j}"),
            Family::Isolated { v, j } | Family::Block { v, j } | Family::Symmetry { v, j } => {
                write!(f, " v={v} j={j}")
            }
            Family::Clique { q, j } => write!(f, " q={} j={j}", Set(q)),
            Family::TwoRank { s, q, j } => write!(f, " s={} q={} j={j}", Set(s), Set(q)),
            Family::TwoRankEmpty { s, j } => write!(f, " s={} j={j}", Set(s)),
            Family::TwoRankSingleton { s, q, j } => write!(f, " s={} q={q} j={j}", Set(s)),
            Family::Subneighborhood { u, j, s } => write!(f, " u={u} j={j} s={}", Set(s)),
            Family::SColor { colors } => {
                let set: VertexSet = colors.iter().copied().collect();
                write!(f, " colors={}", Set(&set))
            }
            Family::OutsideNeighborhood { u, j } => write!(f, " u={u} j={j}"),
            Family::CliqueNeighborhood { u, j, k, q } => write!(f, " u={u} j={j} k={k} q={}", Set(q)),
            Family::Custom { name } => write!(f, " name={name}"),
        }
    }
}

/// The one-line text form of `row`.
pub fn row_to_text(row: &CutRow, vars: Vars) -> String {
    format!("{} : {}", FamilyText(&row.family), row.display(vars))
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| err(line, format!("`{s}` is not a non-negative integer")))
}

fn parse_set(s: &str, line: usize) -> Result<VertexSet> {
    let inner = s
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| err(line, format!("expected a set like {{1,2}}, found `{s}`")))?;
    if inner.is_empty() {
        return Ok(VertexSet::new());
    }
    inner.split(',').map(|t| parse_usize(t, line)).collect()
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
    line: usize,
}

impl<'a> Params<'a> {
    fn raw(&self, key: &str) -> Result<&'a str> {
        self.pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|&(_, v)| v)
            .ok_or_else(|| err(self.line, format!("missing parameter `{key}`")))
    }

    fn num(&self, key: &str) -> Result<usize> {
        parse_usize(self.raw(key)?, self.line)
    }

    fn set(&self, key: &str) -> Result<VertexSet> {
        parse_set(self.raw(key)?, self.line)
    }
}

/// Parses `kind key=value ...`. `line` is only used in error messages.
pub fn parse_family(text: &str, line: usize) -> Result<Family> {
    let mut toks = text.split_whitespace();
    let kind = toks.next().ok_or_else(|| err(line, "missing row family"))?;
    let mut pairs = Vec::new();
    for t in toks {
        let (k, v) = t.split_once('=').ok_or_else(|| err(line, format!("expected key=value, found `{t}`")))?;
        pairs.push((k, v));
    }
    let p = Params { pairs, line };
    let vertex = |key: &str| -> Result<Vertex> { p.num(key) };
    Ok(match kind {
        "assignment" => Family::Assignment { v: vertex("v")? },
        "conflict" => Family::Conflict { u: vertex("u")?, v: vertex("v")?, j: p.num("j")? },
        "color-order" => Family::ColorOrder { j: p.num("j")? },
        "isolated" => Family::Isolated { v: vertex("v")?, j: p.num("j")? },
        "equity-lower" => Family::EquityLower { j: p.num("j")? },
        "equity-upper" => Family::EquityUpper { j: p.num("j")? },
        "clique" => Family::Clique { q: p.set("q")?, j: p.num("j")? },
        "block" => Family::Block { v: vertex("v")?, j: p.num("j")? },
        "two-rank" => Family::TwoRank { s: p.set("s")?, q: p.set("q")?, j: p.num("j")? },
        "two-rank-empty" => Family::TwoRankEmpty { s: p.set("s")?, j: p.num("j")? },
        "two-rank-singleton" => Family::TwoRankSingleton { s: p.set("s")?, q: vertex("q")?, j: p.num("j")? },
        "subneighborhood" => Family::Subneighborhood { u: vertex("u")?, j: p.num("j")?, s: p.set("s")? },
        "s-color" => Family::SColor { colors: p.set("colors")?.to_vec() },
        "outside-neighborhood" => Family::OutsideNeighborhood { u: vertex("u")?, j: p.num("j")? },
        "clique-neighborhood" => {
            Family::CliqueNeighborhood { u: vertex("u")?, j: p.num("j")?, k: p.num("k")?, q: p.set("q")? }
        }
        "symmetry" => Family::Symmetry { v: vertex("v")?, j: p.num("j")? },
        "custom" => Family::Custom { name: p.raw("name")?.to_string() },
        other => return Err(err(line, format!("unknown row family `{other}`"))),
    })
}

fn parse_var(name: &str, vars: Vars, line: usize) -> Result<VarId> {
    let bad = || err(line, format!("unknown variable `{name}` for n = {}", vars.n));
    let in_range = |i: usize| (1..=vars.n).contains(&i);
    if let Some(rest) = name.strip_prefix('x') {
        let (v, j) = rest.split_once('_').ok_or_else(bad)?;
        let (v, j) = (v.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
        if in_range(v) && in_range(j) {
            return Ok(vars.x(v, j));
        }
    } else if let Some(rest) = name.strip_prefix('w') {
        let j = rest.parse().map_err(|_| bad())?;
        if in_range(j) {
            return Ok(vars.w(j));
        }
    }
    Err(bad())
}

/// Parses one row in the text form for an `n`-vertex instance.
pub fn parse_row(text: &str, n: usize, line: usize) -> Result<CutRow> {
    let vars = Vars::new(n);
    let (head, body) = text.split_once(':').ok_or_else(|| err(line, "missing `:` between family and terms"))?;
    let family = parse_family(head, line)?;
    let toks: Vec<&str> = body.split_whitespace().collect();
    let sense_at = toks
        .iter()
        .position(|t| matches!(*t, "<=" | ">=" | "="))
        .ok_or_else(|| err(line, "missing `<=`, `>=` or `=`"))?;
    let sense = match toks[sense_at] {
        "<=" => Sense::Le,
        ">=" => Sense::Ge,
        _ => Sense::Eq,
    };
    let rhs = match &toks[sense_at + 1..] {
        [r] => r.parse::<i64>().map_err(|_| err(line, format!("right-hand side `{r}` is not an integer")))?,
        _ => return Err(err(line, "expected exactly one token after the sense")),
    };
    let lhs = &toks[..sense_at];
    let mut terms = Vec::new();
    if lhs != ["0"] {
        if !lhs.len().is_multiple_of(2) {
            return Err(err(line, "terms must come in `<coef> <var>` pairs"));
        }
        for pair in lhs.chunks(2) {
            let c: i64 = pair[0].parse().map_err(|_| err(line, format!("coefficient `{}` is not an integer", pair[0])))?;
            terms.push((parse_var(pair[1], vars, line)?, c));
        }
    }
    Ok(CutRow::new(terms, sense, rhs, family))
}

/// Parses a file of rows, one per line. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_rows(text: &str, n: usize) -> Result<Vec<CutRow>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_row(l, n, i + 1))
        .collect()
}

/// LP-text rendering of a model: `min`, then `st` with one row per line,
/// then the fixed variables under `bounds`.
pub fn model_to_lp_text(model: &Model) -> String {
    let vars = model.vars();
    let mut out = String::from("min\n ");
    for &(v, c) in &model.objective {
        let _ = write!(out, " {c:+} {}", vars.name(v));
    }
    out.push_str("\nst\n");
    for r in &model.rows {
        let _ = writeln!(out, "  {}", r.display(vars));
    }
    if !model.fixings.is_empty() {
        out.push_str("bounds\n");
        for &v in &model.fixings {
            let _ = writeln!(out, "  {} = 0", vars.name(v));
        }
    }
    out.push_str("end\n");
    out
}
