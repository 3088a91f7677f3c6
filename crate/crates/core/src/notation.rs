//! The `--rep` mini-language: `P(x)`, `I(x)`, `S(x)`, `M(a,b)`, `M[a,b]`,
//! `M(p_{4,3})`, `M(p_inf)`, `M(ε_5)`, `N(i,j)`, `N(i,inf)`, `K(poly)` on
//! the Kronecker quiver, and sums joined by `+` or `⊕`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quiver::{Quiver, Vertex};
use crate::rep::{kronecker_regular, End, Rep, StringSpec};
use crate::strings::{Line, PathSide};

/// How far past the core the named-member search looks.
const MEMBER_RADIUS: i64 = 64;

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("{s:?}: {why}"))
}

pub fn parse_rep(q: &Quiver, s: &str) -> Result<Rep> {
    let parts = split_top(s);
    if parts.len() > 1 {
        return Ok(Rep::Sum(parts.iter().map(|p| parse_term(q, p)).collect::<Result<_>>()?));
    }
    parse_term(q, s)
}

/// Splits at `+`/`⊕` outside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = vec![];
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '+' | '⊕' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_term(q: &Quiver, s: &str) -> Result<Rep> {
    let s = s.trim();
    let mut chars = s.chars();
    let head = chars.next().ok_or_else(|| parse_err(s, "empty"))?;
    let rest = chars.as_str().trim();
    if head == 'M' && rest.starts_with('[') && rest.ends_with(']') {
        return interval(q, s, &rest[1..rest.len() - 1]);
    }
    let inner =
        rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| parse_err(s, "expected X(...)"))?.trim();
    match head {
        'P' => Ok(Rep::Proj(q.parse_vertex(inner)?)),
        'I' => Ok(Rep::Inj(q.parse_vertex(inner)?)),
        'S' => Ok(Rep::Simple(q.parse_vertex(inner)?)),
        'N' => {
            let (i, j) = inner.split_once(',').ok_or_else(|| parse_err(s, "expected N(i,j)"))?;
            let i: u64 = i.trim().parse().map_err(|_| parse_err(s, "bad i"))?;
            let j = match j.trim() {
                "inf" | "∞" => None,
                j => Some(j.parse::<u64>().map_err(|_| parse_err(s, "bad j"))?),
            };
            Ok(Rep::DInf { i, j })
        }
        'K' => Ok(kronecker_regular(q, &Poly::parse(q.field(), inner)?)?.0),
        'M' if inner.contains(',') && !inner.starts_with('p') => interval(q, s, inner),
        'M' => named_member(q, s, inner),
        _ => Err(parse_err(s, "unknown constructor")),
    }
}

fn end(s: &str, tok: &str) -> Result<End> {
    match tok.trim() {
        "inf" | "-inf" | "+inf" | "∞" | "-∞" => Ok(End::Infinite),
        t => t.parse().map(End::At).map_err(|_| parse_err(s, "bad label")),
    }
}

/// `a,b` (or a consecutive walk `a,b,c,…`) of line labels.
fn interval(q: &Quiver, s: &str, body: &str) -> Result<Rep> {
    let toks: Vec<&str> = body.split(',').map(str::trim).collect();
    if toks.len() < 2 {
        return Err(parse_err(s, "expected at least two labels"));
    }
    if toks.len() > 2 {
        let ls: Vec<i64> =
            toks.iter().map(|t| t.parse().map_err(|_| parse_err(s, "bad label"))).collect::<Result<_>>()?;
        if ls.windows(2).any(|w| (w[0] - w[1]).abs() != 1) || ls.windows(3).any(|w| w[0] == w[2]) {
            return Err(parse_err(s, "walk must be reduced and consecutive"));
        }
        return Ok(Rep::String(StringSpec::interval(ls[0], *ls.last().unwrap())));
    }
    let spec = match (end(s, toks[0])?, end(s, toks[1])?) {
        (End::At(a), End::At(b)) => StringSpec::interval(a, b),
        (End::Infinite, End::At(b)) => StringSpec::ray_down(b),
        (End::At(a), End::Infinite) => StringSpec::ray_up(a),
        _ => return Err(parse_err(s, "at most one infinite end")),
    };
    if q.labels().is_none() {
        return Err(Error::WrongType("strings need a line-labelled quiver".into()));
    }
    Ok(Rep::String(spec))
}

fn normalize(name: &str) -> String {
    name.replace("inf", "∞").replace("e_", "ε_").chars().filter(|c| !matches!(c, '{' | '}' | ' ')).collect()
}

/// A member of `Q_R`/`Q_L` by its printed name.
fn named_member(q: &Quiver, s: &str, name: &str) -> Result<Rep> {
    let line = Line::new(q)?;
    let want = normalize(name);
    let core: Vec<i64> = (0..q.core_len()).filter_map(|c| q.label_of(Vertex::Core(c))).collect();
    let lo = core.iter().min().copied().unwrap_or(0) - MEMBER_RADIUS;
    let hi = core.iter().max().copied().unwrap_or(0) + MEMBER_RADIUS;
    for side in [PathSide::R, PathSide::L] {
        for x in lo..=hi {
            if let Some(m) = line.member_at(side, x) {
                if normalize(&line.name(&m)) == want {
                    return Ok(m.rep());
                }
            }
        }
    }
    Err(parse_err(s, "no such maximal path"))
}
