use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::milp::{ColId, ColumnKind, Milp};
use crate::model::{ObjectiveSense, Sense};

use super::{fmt_num, mangled_names};

fn write_expr(out: &mut String, terms: &[(ColId, f64)], cols: &[String]) {
    let mut any = false;
    for &(c, a) in terms {
        if a != 0.0 {
            let sign = if a < 0.0 { '-' } else { '+' };
            write!(out, " {sign} {} {}", fmt_num(a.abs()), cols[c.0]).unwrap();
            any = true;
        }
    }
    if !any {
        out.push_str(" 0");
    }
}

/// CPLEX LP text. Every non-binary column gets an explicit bounds line.
pub fn export_lp_format(milp: &Milp) -> String {
    let (cols, rows) = mangled_names(milp, "obj");
    let mut out = String::new();
    writeln!(out, "\\ {}", milp.name).unwrap();
    out.push_str(match milp.objective.sense {
        ObjectiveSense::Maximize => "Maximize\n",
        ObjectiveSense::Minimize => "Minimize\n",
    });
    out.push_str(" obj:");
    write_expr(&mut out, &milp.objective.terms, &cols);
    out.push_str("\nSubject To\n");
    for (row, name) in milp.rows.iter().zip(&rows) {
        write!(out, " {name}:").unwrap();
        write_expr(&mut out, &row.terms, &cols);
        let op = match row.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        writeln!(out, " {op} {}", fmt_num(row.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    let is_binary = |k: usize| {
        let c = &milp.columns[k];
        c.kind == ColumnKind::Binary && c.lower == 0.0 && c.upper == 1.0
    };
    for (k, (col, name)) in milp.columns.iter().zip(&cols).enumerate() {
        if is_binary(k) {
            continue;
        }
        let (lo, hi) = (col.lower, col.upper);
        if lo == hi {
            writeln!(out, " {name} = {}", fmt_num(lo)).unwrap();
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            writeln!(out, " {name} free").unwrap();
        } else if hi == f64::INFINITY {
            writeln!(out, " {name} >= {}", fmt_num(lo)).unwrap();
        } else if lo == f64::NEG_INFINITY {
            writeln!(out, " -infinity <= {name} <= {}", fmt_num(hi)).unwrap();
        } else {
            writeln!(out, " {} <= {name} <= {}", fmt_num(lo), fmt_num(hi)).unwrap();
        }
    }
    let general: Vec<&str> = (0..cols.len())
        .filter(|&k| milp.columns[k].kind.is_discrete() && !is_binary(k))
        .map(|k| cols[k].as_str())
        .collect();
    if !general.is_empty() {
        writeln!(out, "General\n {}", general.join(" ")).unwrap();
    }
    let binary: Vec<&str> = (0..cols.len()).filter(|&k| is_binary(k)).map(|k| cols[k].as_str()).collect();
    if !binary.is_empty() {
        writeln!(out, "Binary\n {}", binary.join(" ")).unwrap();
    }
    out.push_str("End\n");
    out
}

fn parse_value(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        _ => tok.parse().ok(),
    }
}

struct Reader {
    milp: Milp,
    index: HashMap<String, usize>,
}

impl Reader {
    fn column(&mut self, name: &str) -> ColId {
        let next = self.milp.columns.len();
        let j = *self.index.entry(name.to_string()).or_insert(next);
        if j == next {
            self.milp.add_column(name, 0.0, f64::INFINITY, ColumnKind::Continuous);
        }
        ColId(j)
    }

    /// Parses `[+|-] coef name ...`, returning the terms.
    fn expr(&mut self, tokens: &[&str], line: usize) -> Result<Vec<(ColId, f64)>> {
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut terms = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let mut sign = 1.0;
            if tokens[i] == "+" || tokens[i] == "-" {
                sign = if tokens[i] == "-" { -1.0 } else { 1.0 };
                i += 1;
            }
            let tok = tokens.get(i).ok_or_else(|| err("dangling sign"))?;
            let mut coef = 1.0;
            if tok.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                coef = tok.parse().map_err(|_| err("bad coefficient"))?;
                i += 1;
            }
            match tokens.get(i) {
                Some(name) => {
                    let c = self.column(name);
                    terms.push((c, sign * coef));
                    i += 1;
                }
                None if coef == 0.0 => {}
                None => return Err(err("constant terms are not supported")),
            }
        }
        Ok(terms)
    }
}

/// Reads the LP subset written by [`export_lp_format`]. Columns are numbered
/// in order of first appearance.
pub fn parse_lp_format(text: &str) -> Result<Milp> {
    #[derive(PartialEq)]
    enum Section {
        Head,
        Objective,
        Rows,
        Bounds,
        General,
        Binary,
        End,
    }
    let mut r = Reader { milp: Milp::new("model"), index: HashMap::new() };
    let mut section = Section::Head;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        let trimmed = raw.trim();
        if let Some(name) = trimmed.strip_prefix('\\') {
            if section == Section::Head && !name.trim().is_empty() {
                r.milp.name = name.trim().to_string();
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let keyword = trimmed.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "maximize" | "maximum" | "max" => {
                r.milp.objective.sense = ObjectiveSense::Maximize;
                Some(Section::Objective)
            }
            "minimize" | "minimum" | "min" => {
                r.milp.objective.sense = ObjectiveSense::Minimize;
                Some(Section::Objective)
            }
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "general" | "generals" | "gen" => Some(Section::General),
            "binary" | "binaries" | "bin" => Some(Section::Binary),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match section {
            Section::Objective => {
                let body = match tokens.first() {
                    Some(t) if t.ends_with(':') => &tokens[1..],
                    _ => &tokens[..],
                };
                let terms = r.expr(body, line)?;
                r.milp.objective.terms.extend(terms);
            }
            Section::Rows => {
                let (name, body) = match tokens.first() {
                    Some(t) if t.ends_with(':') => (t.trim_end_matches(':'), &tokens[1..]),
                    _ => return Err(err("rows must be named")),
                };
                let [expr @ .., op, rhs] = body else { return Err(err("incomplete row")) };
                let sense = match *op {
                    "<=" | "=<" | "<" => Sense::Le,
                    "=" => Sense::Eq,
                    ">=" | "=>" | ">" => Sense::Ge,
                    _ => return Err(err("bad sense")),
                };
                let rhs = parse_value(rhs).ok_or_else(|| err("bad right-hand side"))?;
                let terms = r.expr(expr, line)?;
                let i = r.milp.add_row(terms, sense, rhs);
                r.milp.rows[i].name = name.to_string();
            }
            Section::Bounds => match tokens[..] {
                [name, "free"] => {
                    let c = r.column(name).0;
                    r.milp.columns[c].lower = f64::NEG_INFINITY;
                    r.milp.columns[c].upper = f64::INFINITY;
                }
                [name, op, v] => {
                    let v = parse_value(v).ok_or_else(|| err("bad bound"))?;
                    let c = r.column(name).0;
                    let col = &mut r.milp.columns[c];
                    match op {
                        "=" => {
                            col.lower = v;
                            col.upper = v;
                        }
                        ">=" => col.lower = v,
                        "<=" => col.upper = v,
                        _ => return Err(err("bad bound operator")),
                    }
                }
                [lo, "<=", name, "<=", hi] => {
                    let lo = parse_value(lo).ok_or_else(|| err("bad bound"))?;
                    let hi = parse_value(hi).ok_or_else(|| err("bad bound"))?;
                    let c = r.column(name).0;
                    r.milp.columns[c].lower = lo;
                    r.milp.columns[c].upper = hi;
                }
                _ => return Err(err("unsupported bound line")),
            },
            Section::General | Section::Binary => {
                for name in tokens {
                    let c = r.column(name).0;
                    let col = &mut r.milp.columns[c];
                    if section == Section::Binary {
                        col.kind = ColumnKind::Binary;
                        col.lower = 0.0;
                        col.upper = 1.0;
                    } else {
                        col.kind = ColumnKind::Integer;
                    }
                }
            }
            Section::Head | Section::End => return Err(err("text outside a section")),
        }
    }
    if section != Section::End {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing End".into() });
    }
    Ok(r.milp)
}
