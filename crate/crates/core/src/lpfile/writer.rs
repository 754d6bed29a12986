use std::fmt::Write as _;

use crate::lp::LpProblem;
use crate::lpfile::LpFileName;

/// Shortest decimal that parses back to exactly `v`. Plain notation for
/// magnitudes in `[1e-5, 1e16)`, scientific otherwise; infinities are
/// `+inf` / `-inf` and negative zero prints as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "+inf" } else { "-inf" }.to_string();
    }
    if (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn col_name(p: &LpProblem, j: usize) -> String {
    match p.col_names() {
        Some(n) => n[j].clone(),
        None => format!("x{j}"),
    }
}

fn row_name(p: &LpProblem, i: usize) -> String {
    match p.row_names() {
        Some(n) => n[i].clone(),
        None => format!("r{i}"),
    }
}

fn push_terms(out: &mut String, terms: impl Iterator<Item = (f64, String)>) {
    let mut first = true;
    for (v, name) in terms {
        if first {
            if v < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if v < 0.0 { " - " } else { " + " });
        }
        out.push_str(&format_number(v.abs()));
        out.push(' ');
        out.push_str(&name);
        first = false;
    }
    if first {
        out.push('0');
    }
}

/// Renders `p` in the canonical dialect. The file name, when given, goes
/// into a leading comment.
pub fn write_lp(p: &LpProblem, name: Option<&LpFileName>) -> String {
    let cols: Vec<String> = (0..p.n_cols()).map(|j| col_name(p, j)).collect();
    let mut out = String::with_capacity(32 * p.nnz() + 64 * p.n_rows() + 32 * p.n_cols());
    if let Some(n) = name {
        let _ = writeln!(out, "\\ {n}");
    }
    out.push_str("Minimize\n obj: ");
    push_terms(
        &mut out,
        p.objective()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, &c)| (c, cols[j].clone())),
    );
    let off = p.objective_offset();
    if off != 0.0 {
        out.push_str(if off < 0.0 { " - " } else { " + " });
        out.push_str(&format_number(off.abs()));
    }
    out.push_str("\nSubject To\n");
    let a = p.matrix();
    let mut body = String::new();
    for i in 0..p.n_rows() {
        let (idx, vals) = a.row(i);
        body.clear();
        push_terms(
            &mut body,
            idx.iter().zip(vals).map(|(&j, &v)| (v, cols[j].clone())),
        );
        let (lo, hi) = (p.row_lower()[i], p.row_upper()[i]);
        let name = row_name(p, i);
        if lo == hi {
            let _ = writeln!(out, " {name}: {body} = {}", format_number(lo));
        } else if lo.is_finite() && hi.is_finite() {
            let _ = writeln!(out, " {name}_lo: {body} >= {}", format_number(lo));
            let _ = writeln!(out, " {name}_hi: {body} <= {}", format_number(hi));
        } else if hi.is_finite() {
            let _ = writeln!(out, " {name}: {body} <= {}", format_number(hi));
        } else {
            // lower bound only, or a free row written as `>= -inf`
            let _ = writeln!(out, " {name}: {body} >= {}", format_number(lo));
        }
    }
    out.push_str("Bounds\n");
    for (j, name) in cols.iter().enumerate() {
        let (lo, hi) = (p.var_lower()[j], p.var_upper()[j]);
        let _ = if lo == hi {
            writeln!(out, " {name} = {}", format_number(lo))
        } else if hi == f64::INFINITY && lo.is_finite() {
            writeln!(out, " {name} >= {}", format_number(lo))
        } else {
            writeln!(
                out,
                " {} <= {name} <= {}",
                format_number(lo),
                format_number(hi)
            )
        };
    }
    out.push_str("End\n");
    out
}
