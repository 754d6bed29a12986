use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::lp::{is_valid_name, LpProblem, SparseMatrix};

/// A located parse failure. Lines and columns are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnknownSection(String),
    OutsideSection,
    MalformedTerm(String),
    MalformedConstraint(String),
    MalformedBound(String),
    DuplicateVariable(String),
    DuplicateRow(String),
    InconsistentBounds { var: String, lower: f64, upper: f64 },
    MissingEnd,
    Invalid(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownSection(s) => write!(f, "unknown section {s:?}"),
            Self::OutsideSection => f.write_str("content outside of any section"),
            Self::MalformedTerm(t) => write!(f, "malformed term {t:?}"),
            Self::MalformedConstraint(s) => write!(f, "malformed constraint: {s}"),
            Self::MalformedBound(s) => write!(f, "malformed bound: {s}"),
            Self::DuplicateVariable(v) => write!(f, "variable {v} appears twice in one row"),
            Self::DuplicateRow(r) => write!(f, "duplicate row name {r}"),
            Self::InconsistentBounds { var, lower, upper } => {
                write!(
                    f,
                    "inconsistent bounds on {var}: lower {lower} > upper {upper}"
                )
            }
            Self::MissingEnd => f.write_str("missing End section"),
            Self::Invalid(s) => write!(f, "invalid problem: {s}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    End,
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Op {
    Le,
    Ge,
    Eq,
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

struct RawRow {
    name: Option<String>,
    terms: Vec<(String, f64)>,
    op: Op,
    rhs: f64,
    line: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &line[s..],
            col: line[..s].chars().count() + 1,
        });
    }
    out
}

fn number(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    (!v.is_nan()).then_some(v)
}

fn op(s: &str) -> Option<Op> {
    match s {
        "<=" | "<" | "=<" => Some(Op::Le),
        ">=" | ">" | "=>" => Some(Op::Ge),
        "=" => Some(Op::Eq),
        _ => None,
    }
}

fn section(header: &str) -> Option<Section> {
    let norm = header
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_ascii_lowercase();
    match norm.as_str() {
        "minimize" | "minimise" | "minimum" | "min" | "maximize" | "maximise" | "maximum"
        | "max" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." | "st." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "end" => Some(Section::End),
        _ => None,
    }
}

struct Ctx {
    line: usize,
}

impl Ctx {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }
}

/// Splits off a leading `name:` label.
fn label<'a, 'b>(
    toks: &'b [Tok<'a>],
    ctx: &Ctx,
) -> Result<(Option<String>, &'b [Tok<'a>]), ParseError> {
    if let Some(first) = toks.first() {
        if let Some(name) = first.text.strip_suffix(':') {
            if !is_valid_name(name) {
                return Err(ctx.err(first.col, ParseErrorKind::MalformedTerm(first.text.into())));
            }
            return Ok((Some(name.to_string()), &toks[1..]));
        }
    }
    Ok((None, toks))
}

/// Parses `[±] [coef] name [± [coef] name ...]` plus bare numeric constants.
fn expression(
    toks: &[Tok<'_>],
    ctx: &Ctx,
    terms: &mut Vec<(String, f64)>,
    constant: &mut f64,
) -> Result<(), ParseError> {
    enum St {
        Start,
        Sign(f64),
        Coef(f64),
        Term,
    }
    let malformed = |t: &Tok<'_>| ctx.err(t.col, ParseErrorKind::MalformedTerm(t.text.into()));
    let mut st = St::Start;
    let mut seen = HashSet::new();
    for t in toks {
        let s = t.text;
        st = match (st, s) {
            (St::Sign(_), "+" | "-") => return Err(malformed(t)),
            (prev, "+" | "-") => {
                if let St::Coef(c) = prev {
                    *constant += c;
                }
                St::Sign(if s == "-" { -1.0 } else { 1.0 })
            }
            (prev, _) => {
                if let Some(v) = number(s) {
                    let signed_token = s.starts_with(['+', '-']);
                    match prev {
                        _ if !v.is_finite() => return Err(malformed(t)),
                        St::Start => St::Coef(v),
                        St::Sign(sg) if !signed_token => St::Coef(sg * v),
                        _ => return Err(malformed(t)),
                    }
                } else if is_valid_name(s) {
                    let c = match prev {
                        St::Start => 1.0,
                        St::Sign(sg) => sg,
                        St::Coef(c) => c,
                        St::Term => return Err(malformed(t)),
                    };
                    if !seen.insert(s) {
                        return Err(ctx.err(t.col, ParseErrorKind::DuplicateVariable(s.into())));
                    }
                    terms.push((s.to_string(), c));
                    St::Term
                } else {
                    return Err(malformed(t));
                }
            }
        };
    }
    match st {
        St::Sign(_) => Err(malformed(toks.last().expect("a sign was read"))),
        St::Coef(c) => {
            *constant += c;
            Ok(())
        }
        St::Start | St::Term => Ok(()),
    }
}

fn constraint(toks: &[Tok<'_>], ctx: &Ctx, end_col: usize) -> Result<RawRow, ParseError> {
    let (name, rest) = label(toks, ctx)?;
    let pos = rest
        .iter()
        .position(|t| op(t.text).is_some())
        .ok_or_else(|| {
            ctx.err(
                rest.first().map_or(end_col, |t| t.col),
                ParseErrorKind::MalformedConstraint("missing comparison operator".into()),
            )
        })?;
    let rel = op(rest[pos].text).expect("position found an operator");
    let rhs_toks = &rest[pos + 1..];
    let rhs = match rhs_toks {
        [t] => number(t.text),
        [s, t] if s.text == "-" || s.text == "+" => {
            number(t.text).map(|v| if s.text == "-" { -v } else { v })
        }
        _ => None,
    }
    .ok_or_else(|| {
        ctx.err(
            rhs_toks.first().map_or(rest[pos].col, |t| t.col),
            ParseErrorKind::MalformedConstraint("right-hand side must be one number".into()),
        )
    })?;
    let mut terms = Vec::new();
    let mut constant = 0.0;
    expression(&rest[..pos], ctx, &mut terms, &mut constant)?;
    if constant != 0.0 {
        return Err(ctx.err(
            rest[0].col,
            ParseErrorKind::MalformedConstraint("constants belong on the right-hand side".into()),
        ));
    }
    Ok(RawRow {
        name,
        terms,
        op: rel,
        rhs,
        line: ctx.line,
    })
}

#[derive(Clone, Copy)]
struct Bound {
    lower: f64,
    upper: f64,
}

fn bound_line(
    toks: &[Tok<'_>],
    ctx: &Ctx,
    bounds: &mut HashMap<String, Bound>,
    order: &mut Vec<String>,
) -> Result<(), ParseError> {
    let col0 = toks[0].col;
    let bad = |msg: &str| ctx.err(col0, ParseErrorKind::MalformedBound(msg.into()));
    let name_at = |t: &Tok<'_>| -> Result<String, ParseError> {
        if is_valid_name(t.text) {
            Ok(t.text.to_string())
        } else {
            Err(ctx.err(t.col, ParseErrorKind::MalformedTerm(t.text.into())))
        }
    };
    let num_at = |t: &Tok<'_>| {
        number(t.text).ok_or_else(|| ctx.err(t.col, ParseErrorKind::MalformedTerm(t.text.into())))
    };
    let texts: Vec<&str> = toks.iter().map(|t| t.text).collect();
    // (name, new lower, new upper); None keeps the current value
    let (name, lo, hi): (String, Option<f64>, Option<f64>) = match texts.as_slice() {
        [_, kw] if kw.eq_ignore_ascii_case("free") => (
            name_at(&toks[0])?,
            Some(f64::NEG_INFINITY),
            Some(f64::INFINITY),
        ),
        [_, o, _] if number(texts[0]).is_none() => {
            let name = name_at(&toks[0])?;
            let v = num_at(&toks[2])?;
            match op(o) {
                Some(Op::Le) => (name, None, Some(v)),
                Some(Op::Ge) => (name, Some(v), None),
                Some(Op::Eq) => (name, Some(v), Some(v)),
                None => return Err(bad("expected <=, >= or =")),
            }
        }
        [_, o, _] => {
            let v = num_at(&toks[0])?;
            let name = name_at(&toks[2])?;
            match op(o) {
                Some(Op::Le) => (name, Some(v), None),
                Some(Op::Ge) => (name, None, Some(v)),
                Some(Op::Eq) => (name, Some(v), Some(v)),
                None => return Err(bad("expected <=, >= or =")),
            }
        }
        [_, o1, _, o2, _] => {
            let a = num_at(&toks[0])?;
            let name = name_at(&toks[2])?;
            let b = num_at(&toks[4])?;
            match (op(o1), op(o2)) {
                (Some(Op::Le), Some(Op::Le)) => (name, Some(a), Some(b)),
                (Some(Op::Ge), Some(Op::Ge)) => (name, Some(b), Some(a)),
                _ => return Err(bad("double bounds need matching <= or >=")),
            }
        }
        _ => return Err(bad("unrecognized bound form")),
    };
    let entry = bounds.entry(name.clone()).or_insert_with(|| {
        order.push(name.clone());
        Bound {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    });
    if let Some(l) = lo {
        entry.lower = l;
    }
    if let Some(u) = hi {
        entry.upper = u;
    }
    if entry.lower > entry.upper || entry.lower == f64::INFINITY || entry.upper == f64::NEG_INFINITY
    {
        return Err(ctx.err(
            col0,
            ParseErrorKind::InconsistentBounds {
                var: name,
                lower: entry.lower,
                upper: entry.upper,
            },
        ));
    }
    Ok(())
}

/// Parses a document in the dialect produced by [`write_lp`](crate::lpfile::write_lp).
pub fn parse_lp(text: &str) -> Result<LpProblem, ParseError> {
    let mut sec = Section::None;
    let mut maximize = false;
    let mut obj_terms: Vec<(String, f64)> = Vec::new();
    let mut obj_const = 0.0;
    let mut rows: Vec<RawRow> = Vec::new();
    let mut bounds: HashMap<String, Bound> = HashMap::new();
    let mut bound_order: Vec<String> = Vec::new();
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let ctx = Ctx { line: k + 1 };
        last_line = k + 1;
        let line = match raw.find('\\') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        if !line.starts_with(char::is_whitespace) {
            let Some(s) = section(line) else {
                return Err(ctx.err(1, ParseErrorKind::UnknownSection(line.trim().into())));
            };
            if s == Section::Objective {
                maximize = line.trim().to_ascii_lowercase().starts_with("max");
            }
            sec = s;
            continue;
        }
        let toks = tokens(line);
        match sec {
            Section::None | Section::End => {
                return Err(ctx.err(toks[0].col, ParseErrorKind::OutsideSection));
            }
            Section::Objective => {
                let (_, rest) = label(&toks, &ctx)?;
                // a continuation line must start with a sign
                if !obj_terms.is_empty() || obj_const != 0.0 {
                    if let Some(t) = rest.first() {
                        if t.text != "+" && t.text != "-" {
                            return Err(
                                ctx.err(t.col, ParseErrorKind::MalformedTerm(t.text.into()))
                            );
                        }
                    }
                }
                let before = obj_terms.len();
                expression(rest, &ctx, &mut obj_terms, &mut obj_const)?;
                let mut seen: HashSet<&str> = HashSet::new();
                for (n, _) in &obj_terms[..before] {
                    seen.insert(n);
                }
                if let Some((n, _)) = obj_terms[before..]
                    .iter()
                    .find(|(n, _)| seen.contains(n.as_str()))
                {
                    return Err(ctx.err(1, ParseErrorKind::DuplicateVariable(n.clone())));
                }
            }
            Section::Constraints => {
                rows.push(constraint(&toks, &ctx, line.chars().count())?);
            }
            Section::Bounds => bound_line(&toks, &ctx, &mut bounds, &mut bound_order)?,
        }
    }
    if sec != Section::End {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::MissingEnd,
        });
    }
    build(
        maximize,
        obj_terms,
        obj_const,
        rows,
        bounds,
        bound_order,
        last_line,
    )
}

#[allow(clippy::too_many_arguments)]
fn build(
    maximize: bool,
    obj_terms: Vec<(String, f64)>,
    obj_const: f64,
    rows: Vec<RawRow>,
    bounds: HashMap<String, Bound>,
    bound_order: Vec<String>,
    last_line: usize,
) -> Result<LpProblem, ParseError> {
    let mut col_of: HashMap<String, usize> = HashMap::new();
    let mut col_names: Vec<String> = Vec::new();
    let mut intern = |name: &str, col_of: &mut HashMap<String, usize>| -> usize {
        if let Some(&j) = col_of.get(name) {
            return j;
        }
        col_names.push(name.to_string());
        col_of.insert(name.to_string(), col_names.len() - 1);
        col_names.len() - 1
    };
    for n in &bound_order {
        intern(n, &mut col_of);
    }
    for (n, _) in &obj_terms {
        intern(n, &mut col_of);
    }
    for r in &rows {
        for (n, _) in &r.terms {
            intern(n, &mut col_of);
        }
    }
    let n = col_names.len();

    // merge `<name>_lo` / `<name>_hi` pairs back into range rows
    struct Row {
        name: String,
        terms: Vec<(usize, f64)>,
        lower: f64,
        upper: f64,
        line: usize,
    }
    let mut merged: Vec<Row> = Vec::with_capacity(rows.len());
    let mut i = 0;
    while i < rows.len() {
        let r = &rows[i];
        let name = r
            .name
            .clone()
            .unwrap_or_else(|| format!("r{}", merged.len()));
        let terms: Vec<(usize, f64)> = r.terms.iter().map(|(v, c)| (col_of[v], *c)).collect();
        if let (Some(stem), Some(next)) = (name.strip_suffix("_lo"), rows.get(i + 1)) {
            let pair = r.op == Op::Ge
                && next.op == Op::Le
                && next.name.as_deref() == Some(&format!("{stem}_hi"))
                && next.terms == r.terms;
            if pair {
                merged.push(Row {
                    name: stem.to_string(),
                    terms,
                    lower: r.rhs,
                    upper: next.rhs,
                    line: r.line,
                });
                i += 2;
                continue;
            }
        }
        let (lower, upper) = match r.op {
            Op::Le => (f64::NEG_INFINITY, r.rhs),
            Op::Ge => (r.rhs, f64::INFINITY),
            Op::Eq => (r.rhs, r.rhs),
        };
        merged.push(Row {
            name,
            terms,
            lower,
            upper,
            line: r.line,
        });
        i += 1;
    }
    let mut seen = HashSet::new();
    for r in &merged {
        if !seen.insert(r.name.as_str()) {
            return Err(ParseError {
                line: r.line,
                column: 2,
                kind: ParseErrorKind::DuplicateRow(r.name.clone()),
            });
        }
    }

    let invalid = |e: crate::lp::LpError| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Invalid(e.to_string()),
    };
    let row_terms: Vec<Vec<(usize, f64)>> = merged.iter().map(|r| r.terms.clone()).collect();
    let matrix = SparseMatrix::from_rows(n, &row_terms).map_err(invalid)?;
    let sign = if maximize { -1.0 } else { 1.0 };
    let mut objective = vec![0.0; n];
    for (name, c) in &obj_terms {
        objective[col_of[name]] = sign * c;
    }
    let (mut var_lower, mut var_upper) = (vec![0.0; n], vec![f64::INFINITY; n]);
    for (name, b) in &bounds {
        let j = col_of[name];
        var_lower[j] = b.lower;
        var_upper[j] = b.upper;
    }
    let default_rows = merged
        .iter()
        .enumerate()
        .all(|(i, r)| r.name == format!("r{i}"));
    let default_cols = col_names
        .iter()
        .enumerate()
        .all(|(j, c)| *c == format!("x{j}"));
    let row_names = (!default_rows).then(|| merged.iter().map(|r| r.name.clone()).collect());
    let col_names = (!default_cols).then_some(col_names);
    LpProblem::new(
        objective,
        matrix,
        merged.iter().map(|r| r.lower).collect(),
        merged.iter().map(|r| r.upper).collect(),
        var_lower,
        var_upper,
    )
    .and_then(|p| p.with_objective_offset(sign * obj_const))
    .and_then(|p| p.with_names(row_names, col_names))
    .map_err(invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpfile::write_lp;

    fn err(text: &str) -> ParseError {
        parse_lp(text).unwrap_err()
    }

    #[test]
    fn parses_minimal_document() {
        let p = parse_lp("Minimize\n obj: 1 x0\nSubject To\nBounds\n x0 >= 1\nEnd\n").unwrap();
        assert_eq!(p.n_cols(), 1);
        assert_eq!(p.var_lower(), &[1.0]);
        assert!(p.col_names().is_none());
    }

    #[test]
    fn section_typo_names_line_two() {
        let e = err("Minimize\nSubjecto To\n r0: 1 x0 >= 1\nEnd\n");
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 1);
        assert!(matches!(e.kind, ParseErrorKind::UnknownSection(_)));
    }

    #[test]
    fn later_bound_conflicting_with_earlier_one() {
        let e = err("Minimize\n obj: 1 x\nSubject To\nBounds\n x >= 1\n x <= 0\nEnd\n");
        assert_eq!(e.line, 6);
        assert!(matches!(e.kind, ParseErrorKind::InconsistentBounds { .. }));
    }

    #[test]
    fn malformed_and_duplicate_terms() {
        let e = err("Minimize\n obj: 1 x\nSubject To\n c: 1 x + 2 x <= 3\nEnd\n");
        assert_eq!((e.line, e.column), (4, 13));
        assert!(matches!(e.kind, ParseErrorKind::DuplicateVariable(_)));
        let e = err("Minimize\n obj: 1 x\nSubject To\n c: 1 x 2 y <= 3\nEnd\n");
        assert_eq!((e.line, e.column), (4, 9));
        assert!(matches!(e.kind, ParseErrorKind::MalformedTerm(_)));
        let e = err("Minimize\n obj: 1 x +\nSubject To\nEnd\n");
        assert!(matches!(e.kind, ParseErrorKind::MalformedTerm(_)));
        assert!(matches!(
            err("Minimize\n obj: 1 x\n").kind,
            ParseErrorKind::MissingEnd
        ));
    }

    #[test]
    fn accepts_common_dialect_variants() {
        let p = parse_lp(
            "Maximize\n obj: x + 2 y - 3\nSubject To\n x + y <= 4\n c2: - y >= -3\nBounds\n y free\nEnd\n",
        )
        .unwrap();
        // columns listed in Bounds come first
        assert_eq!(p.col_names().unwrap(), &["y".to_string(), "x".to_string()]);
        assert_eq!(p.objective(), &[-2.0, -1.0]);
        assert_eq!(p.objective_offset(), 3.0);
        assert_eq!(
            p.row_names().unwrap(),
            &["r0".to_string(), "c2".to_string()]
        );
        assert_eq!(p.var_lower(), &[f64::NEG_INFINITY, 0.0]);
    }

    #[test]
    fn range_pairs_merge_and_round_trip() {
        let text = "Minimize\n obj: 0 - 2\nSubject To\n r0_lo: 1 x0 - 2 x1 >= -1\n r0_hi: 1 x0 - 2 x1 <= 3\n r1: 0 <= 4\nBounds\n -inf <= x0 <= +inf\n -inf <= x1 <= 5\nEnd\n";
        let p = parse_lp(text).unwrap();
        assert_eq!(p.n_rows(), 2);
        assert_eq!((p.row_lower()[0], p.row_upper()[0]), (-1.0, 3.0));
        assert_eq!(write_lp(&p, None), text);
    }
}
