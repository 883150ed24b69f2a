//! LP file format export and (re-)import.
//!
//! The writer emits standard LP text (Minimize / Subject To / Bounds /
//! Generals / Binaries / End) with variable names that encode the (group,
//! PON, location) of every assignment. The parser accepts the subset of the
//! format the writer produces, enough to round-trip our own exports and to
//! feed external reference solvers.

use super::model::{CmpOp, Constraint, MilpModel, VarKind, Variable};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

fn push_coef(out: &mut String, first: bool, coef: f64, name: &str) {
    if coef >= 0.0 {
        if !first {
            out.push_str(" + ");
        }
    } else {
        out.push_str(if first { "- " } else { " - " });
    }
    let mag = coef.abs();
    let _ = write!(out, "{mag} {name}");
}

/// Render `model` as LP-format text.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("\\ placement model export\n");
    let _ = writeln!(out, "\\ constant term (added to objective): {}", model.objective_constant);
    out.push_str("Minimize\n obj:");
    let mut first = true;
    for v in &model.variables {
        if v.objective != 0.0 {
            out.push(' ');
            push_coef(&mut out, first, v.objective, &v.name);
            first = false;
            // keep some line discipline for very wide objectives
            if out.len() - out.rfind('\n').unwrap_or(0) > 240 {
                out.push('\n');
                out.push_str("    ");
            }
        }
    }
    if first {
        out.push_str(" 0 zero_obj");
    }
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        let mut first = true;
        for &(var, coef) in &c.terms {
            out.push(' ');
            push_coef(&mut out, first, coef, &model.variables[var].name);
            first = false;
            if out.len() - out.rfind('\n').unwrap_or(0) > 240 {
                out.push('\n');
                out.push_str("    ");
            }
        }
        let op = match c.op {
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        };
        let _ = writeln!(out, " {} {}", op, c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
    }
    let generals: Vec<&Variable> =
        model.variables.iter().filter(|v| v.kind == VarKind::Integer).collect();
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for v in generals {
            let _ = writeln!(out, " {}", v.name);
        }
    }
    let binaries: Vec<&Variable> =
        model.variables.iter().filter(|v| v.kind == VarKind::Binary).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for v in binaries {
            let _ = writeln!(out, " {}", v.name);
        }
    }
    out.push_str("End\n");
    out
}

/// A model re-imported from LP text. Variable roles are not recovered; the
/// structure is sufficient for solving and for structural comparison.
pub struct GenericLp {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective_constant: f64,
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    Done,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

/// Parse LP text produced by [`export_lp`].
pub fn import_lp(text: &str) -> Result<GenericLp> {
    let mut variables: Vec<Variable> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut objective_constant = 0.0;

    let mut section = Section::Preamble;
    // Terms accumulate across continuation lines until an operator appears.
    let mut pending_name: Option<String> = None;
    let mut pending_terms: Vec<(usize, f64)> = Vec::new();

    let intern = |variables: &mut Vec<Variable>,
                      index: &mut HashMap<String, usize>,
                      name: &str| -> usize {
        if let Some(&i) = index.get(name) {
            return i;
        }
        variables.push(Variable {
            name: name.to_string(),
            objective: 0.0,
            lower: 0.0,
            upper: f64::INFINITY,
            kind: VarKind::Continuous,
        });
        index.insert(name.to_string(), variables.len() - 1);
        variables.len() - 1
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            if let Some(rest) = comment.trim().strip_prefix("constant term (added to objective):")
            {
                objective_constant = rest.trim().parse().map_err(|_| Error::LpParse {
                    line: lineno,
                    msg: "bad constant term".into(),
                })?;
            }
            continue;
        }
        let lower = line.to_ascii_lowercase();
        match lower.as_str() {
            "minimize" | "maximize" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "st" | "s.t." => {
                flush_objective(&mut pending_terms, &mut variables)?;
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                finish_constraint_if_any(&pending_name, lineno)?;
                section = Section::Bounds;
                continue;
            }
            "generals" | "general" => {
                section = Section::Generals;
                continue;
            }
            "binaries" | "binary" => {
                section = Section::Binaries;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => {
                return Err(Error::LpParse { line: lineno, msg: format!("unexpected `{line}`") });
            }
            Section::Objective => {
                let body = match line.split_once(':') {
                    Some((_, rest)) => rest,
                    None => line,
                };
                parse_terms(body, lineno, &mut |coef, name| {
                    let i = intern(&mut variables, &mut index, name);
                    pending_terms.push((i, coef));
                })?;
            }
            Section::Constraints => {
                let mut body = line;
                if pending_name.is_none() {
                    let (label, rest) = line.split_once(':').ok_or(Error::LpParse {
                        line: lineno,
                        msg: "constraint without label".into(),
                    })?;
                    pending_name = Some(label.trim().to_string());
                    body = rest;
                }
                // Operator present => constraint complete on this line.
                if let Some((op, lhs, rhs_text)) = split_operator(body) {
                    parse_terms(lhs, lineno, &mut |coef, name| {
                        let i = intern(&mut variables, &mut index, name);
                        pending_terms.push((i, coef));
                    })?;
                    let rhs: f64 = rhs_text.trim().parse().map_err(|_| Error::LpParse {
                        line: lineno,
                        msg: format!("bad rhs `{rhs_text}`"),
                    })?;
                    constraints.push(Constraint {
                        name: pending_name.take().unwrap(),
                        terms: std::mem::take(&mut pending_terms),
                        op,
                        rhs,
                    });
                } else {
                    parse_terms(body, lineno, &mut |coef, name| {
                        let i = intern(&mut variables, &mut index, name);
                        pending_terms.push((i, coef));
                    })?;
                }
            }
            Section::Bounds => {
                // "lo <= name <= hi"
                let parts: Vec<&str> = line.split("<=").map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(Error::LpParse {
                        line: lineno,
                        msg: format!("unsupported bound `{line}`"),
                    });
                }
                let lo: f64 = parts[0].parse().map_err(|_| Error::LpParse {
                    line: lineno,
                    msg: "bad lower bound".into(),
                })?;
                let hi: f64 = parts[2].parse().map_err(|_| Error::LpParse {
                    line: lineno,
                    msg: "bad upper bound".into(),
                })?;
                let i = intern(&mut variables, &mut index, parts[1]);
                variables[i].lower = lo;
                variables[i].upper = hi;
            }
            Section::Generals => {
                let i = intern(&mut variables, &mut index, line);
                variables[i].kind = VarKind::Integer;
            }
            Section::Binaries => {
                let i = intern(&mut variables, &mut index, line);
                variables[i].kind = VarKind::Binary;
            }
        }
    }

    // Objective coefficients were accumulated in pending order only if the
    // file had no Subject To section; normally they were flushed there.
    flush_objective(&mut pending_terms, &mut variables)?;

    Ok(GenericLp { variables, constraints, objective_constant })
}

fn finish_constraint_if_any(pending_name: &Option<String>, lineno: usize) -> Result<()> {
    if pending_name.is_some() {
        return Err(Error::LpParse { line: lineno, msg: "constraint missing operator".into() });
    }
    Ok(())
}

fn flush_objective(
    pending_terms: &mut Vec<(usize, f64)>,
    variables: &mut [Variable],
) -> Result<()> {
    for (i, coef) in pending_terms.drain(..) {
        variables[i].objective += coef;
    }
    Ok(())
}

fn split_operator(body: &str) -> Option<(CmpOp, &str, &str)> {
    for (tok, op) in [("<=", CmpOp::Le), (">=", CmpOp::Ge)] {
        if let Some(pos) = body.find(tok) {
            return Some((op, &body[..pos], &body[pos + tok.len()..]));
        }
    }
    // Bare '=' only if not part of <= / >=.
    if let Some(pos) = body.find('=') {
        let prev = body[..pos].chars().last();
        if prev != Some('<') && prev != Some('>') {
            return Some((CmpOp::Eq, &body[..pos], &body[pos + 1..]));
        }
    }
    None
}

/// Parse "± coef name ± coef name ..." (coefficient optional, defaults 1).
fn parse_terms(body: &str, lineno: usize, sink: &mut dyn FnMut(f64, &str)) -> Result<()> {
    let mut tokens = body.split_whitespace().peekable();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    while let Some(tok) = tokens.next() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Ok(v) = tok.parse::<f64>() {
                    if coef.is_some() {
                        return Err(Error::LpParse {
                            line: lineno,
                            msg: format!("two numbers in a row near `{tok}`"),
                        });
                    }
                    coef = Some(v);
                } else if is_name_start(tok.chars().next().unwrap_or(' ')) {
                    let c = sign * coef.take().unwrap_or(1.0);
                    sink(c, tok);
                    sign = 1.0;
                } else {
                    return Err(Error::LpParse {
                        line: lineno,
                        msg: format!("unexpected token `{tok}`"),
                    });
                }
            }
        }
    }
    if coef.is_some() {
        return Err(Error::LpParse { line: lineno, msg: "dangling coefficient".into() });
    }
    Ok(())
}
