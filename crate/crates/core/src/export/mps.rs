use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::milp::{ColId, ColumnKind, Milp};
use crate::model::{ObjectiveSense, Sense};

use super::{fmt_num, mangled_names};

const OBJ: &str = "obj";

/// Free-format MPS. Names are mangled to `[A-Za-z0-9_]`; discrete columns sit
/// between `INTORG`/`INTEND` markers, binaries carry a `BV` bound.
pub fn export_mps(milp: &Milp) -> String {
    let (cols, rows) = mangled_names(milp, OBJ);
    let name = super::mangle_name(&milp.name, &mut Default::default());
    let mut out = String::new();
    writeln!(out, "NAME {name}").unwrap();
    writeln!(out, "OBJSENSE").unwrap();
    let sense = match milp.objective.sense {
        ObjectiveSense::Maximize => "MAX",
        ObjectiveSense::Minimize => "MIN",
    };
    writeln!(out, "    {sense}").unwrap();

    writeln!(out, "ROWS").unwrap();
    writeln!(out, " N  {OBJ}").unwrap();
    for (row, name) in milp.rows.iter().zip(&rows) {
        let t = match row.sense {
            Sense::Le => 'L',
            Sense::Eq => 'E',
            Sense::Ge => 'G',
        };
        writeln!(out, " {t}  {name}").unwrap();
    }

    // column-major entries, rows in order, duplicates summed
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); milp.columns.len()];
    let mut obj = vec![0.0; milp.columns.len()];
    for (c, a) in &milp.objective.terms {
        obj[c.0] += a;
    }
    for (i, row) in milp.rows.iter().enumerate() {
        for &(c, a) in &row.terms {
            match entries[c.0].last_mut() {
                Some((r, v)) if *r == i => *v += a,
                _ => entries[c.0].push((i, a)),
            }
        }
    }

    writeln!(out, "COLUMNS").unwrap();
    let mut marker = 0;
    let mut in_int = false;
    for (j, col) in milp.columns.iter().enumerate() {
        if col.kind.is_discrete() != in_int {
            in_int = !in_int;
            let tag = if in_int { "INTORG" } else { "INTEND" };
            writeln!(out, "    MARKER{marker:04} 'MARKER' '{tag}'").unwrap();
            marker += 1;
        }
        let mut any = false;
        if obj[j] != 0.0 {
            writeln!(out, "    {} {OBJ} {}", cols[j], fmt_num(obj[j])).unwrap();
            any = true;
        }
        for &(i, a) in &entries[j] {
            if a != 0.0 {
                writeln!(out, "    {} {} {}", cols[j], rows[i], fmt_num(a)).unwrap();
                any = true;
            }
        }
        if !any {
            writeln!(out, "    {} {OBJ} 0", cols[j]).unwrap();
        }
    }
    if in_int {
        writeln!(out, "    MARKER{marker:04} 'MARKER' 'INTEND'").unwrap();
    }

    writeln!(out, "RHS").unwrap();
    for (row, name) in milp.rows.iter().zip(&rows) {
        if row.rhs != 0.0 {
            writeln!(out, "    RHS {name} {}", fmt_num(row.rhs)).unwrap();
        }
    }

    writeln!(out, "BOUNDS").unwrap();
    for (col, name) in milp.columns.iter().zip(&cols) {
        let (lo, hi) = (col.lower, col.upper);
        if col.kind == ColumnKind::Binary && lo == 0.0 && hi == 1.0 {
            writeln!(out, " BV BND {name}").unwrap();
        } else if lo == hi {
            writeln!(out, " FX BND {name} {}", fmt_num(lo)).unwrap();
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            writeln!(out, " FR BND {name}").unwrap();
        } else {
            if lo == f64::NEG_INFINITY {
                writeln!(out, " MI BND {name}").unwrap();
            } else if lo != 0.0 || hi < 0.0 {
                writeln!(out, " LO BND {name} {}", fmt_num(lo)).unwrap();
            }
            if hi == f64::INFINITY {
                if col.kind.is_discrete() {
                    writeln!(out, " PL BND {name}").unwrap();
                }
            } else {
                writeln!(out, " UP BND {name} {}", fmt_num(hi)).unwrap();
            }
        }
    }
    writeln!(out, "ENDATA").unwrap();
    out
}

fn parse_num(tok: &str, line: usize) -> Result<f64> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad number `{tok}`") })
}

/// Reads the free-format MPS subset written by [`export_mps`]: a single
/// objective row, no RANGES, bound set named arbitrarily.
pub fn parse_mps(text: &str) -> Result<Milp> {
    #[derive(PartialEq)]
    enum Section {
        None,
        ObjSense,
        Rows,
        Columns,
        Rhs,
        Bounds,
        End,
    }
    let mut milp = Milp::new("model");
    milp.objective.sense = ObjectiveSense::Minimize;
    let mut section = Section::None;
    let mut objective_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut in_int = false;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tok: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(char::is_whitespace) {
            section = match tok[0] {
                "NAME" => {
                    milp.name = tok.get(1).unwrap_or(&"model").to_string();
                    Section::None
                }
                "OBJSENSE" => match tok.get(1) {
                    Some(s) => {
                        milp.objective.sense = parse_sense(s).ok_or_else(|| err("bad OBJSENSE"))?;
                        Section::None
                    }
                    None => Section::ObjSense,
                },
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(err(&format!("unsupported section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::ObjSense => {
                milp.objective.sense = parse_sense(tok[0]).ok_or_else(|| err("bad OBJSENSE"))?;
            }
            Section::Rows => {
                let [t, name] = tok[..] else { return Err(err("expected `type name`")) };
                let sense = match t {
                    "N" => {
                        if objective_row.is_some() {
                            return Err(err("more than one objective row"));
                        }
                        objective_row = Some(name.to_string());
                        continue;
                    }
                    "L" => Sense::Le,
                    "E" => Sense::Eq,
                    "G" => Sense::Ge,
                    _ => return Err(err("bad row type")),
                };
                if row_index.insert(name.to_string(), milp.rows.len()).is_some() {
                    return Err(Error::NameCollision(name.to_string()));
                }
                let i = milp.add_row(Vec::new(), sense, 0.0);
                milp.rows[i].name = name.to_string();
            }
            Section::Columns => {
                if tok.len() == 3 && tok[1] == "'MARKER'" {
                    in_int = match tok[2] {
                        "'INTORG'" => true,
                        "'INTEND'" => false,
                        _ => return Err(err("bad marker")),
                    };
                    continue;
                }
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err("expected `column row value [row value]`"));
                }
                let j = match col_index.get(tok[0]) {
                    Some(&j) => j,
                    None => {
                        let kind = if in_int { ColumnKind::Integer } else { ColumnKind::Continuous };
                        let j = milp.add_column(tok[0], 0.0, f64::INFINITY, kind).0;
                        col_index.insert(tok[0].to_string(), j);
                        j
                    }
                };
                for pair in tok[1..].chunks(2) {
                    let a = parse_num(pair[1], line)?;
                    if a == 0.0 {
                        continue;
                    }
                    if Some(pair[0]) == objective_row.as_deref() {
                        milp.objective.terms.push((ColId(j), a));
                    } else {
                        let &i = row_index.get(pair[0]).ok_or_else(|| err("unknown row"))?;
                        milp.rows[i].terms.push((ColId(j), a));
                    }
                }
            }
            Section::Rhs => {
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err("expected `set row value [row value]`"));
                }
                for pair in tok[1..].chunks(2) {
                    let v = parse_num(pair[1], line)?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        continue;
                    }
                    let &i = row_index.get(pair[0]).ok_or_else(|| err("unknown row"))?;
                    milp.rows[i].rhs = v;
                }
            }
            Section::Bounds => {
                if tok.len() < 3 {
                    return Err(err("expected `type set column [value]`"));
                }
                let &j = col_index.get(tok[2]).ok_or_else(|| err("unknown column"))?;
                let value = || tok.get(3).ok_or_else(|| err("missing bound value")).and_then(|t| parse_num(t, line));
                let col = &mut milp.columns[j];
                match tok[0] {
                    "UP" => col.upper = value()?,
                    "LO" => col.lower = value()?,
                    "FX" => {
                        col.lower = value()?;
                        col.upper = col.lower;
                    }
                    "FR" => {
                        col.lower = f64::NEG_INFINITY;
                        col.upper = f64::INFINITY;
                    }
                    "MI" => col.lower = f64::NEG_INFINITY,
                    "PL" => col.upper = f64::INFINITY,
                    "BV" => {
                        col.lower = 0.0;
                        col.upper = 1.0;
                        col.kind = ColumnKind::Binary;
                    }
                    _ => return Err(err("unsupported bound type")),
                }
            }
            Section::None | Section::End => return Err(err("data outside a section")),
        }
    }
    if section != Section::End {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing ENDATA".into() });
    }
    Ok(milp)
}

fn parse_sense(s: &str) -> Option<ObjectiveSense> {
    match s {
        "MAX" | "MAXIMIZE" => Some(ObjectiveSense::Maximize),
        "MIN" | "MINIMIZE" => Some(ObjectiveSense::Minimize),
        _ => None,
    }
}
