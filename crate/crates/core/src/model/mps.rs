//! Free-format MPS reading and writing.
//!
//! Supported sections: `NAME`, `OBJSENSE`, `ROWS`, `COLUMNS` (with
//! `MARKER` / `INTORG` / `INTEND` blocks), `RHS`, `BOUNDS` and `ENDATA`.
//! Integer columns must end up with bounds `[0, 1]` (or be fixed to an
//! integral value); anything wider is rejected.

use super::{Instance, ModelError, Relation, Row, Sense, VarKind};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

/// Magnitudes at or above this are read as infinite bounds.
const MPS_INFINITY: f64 = 1e30;

pub fn load_mps(path: impl AsRef<Path>) -> Result<Instance, ModelError> {
    let text = std::fs::read_to_string(path)?;
    parse_mps(&text)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Start,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

#[derive(Clone, Copy)]
enum RowKind {
    Objective,
    Free,
    Constraint(usize),
}

struct Column {
    name: String,
    objective: f64,
    entries: Vec<(usize, f64)>,
    integer: bool,
    lower: f64,
    upper: f64,
}

fn perr(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse { line, msg: msg.into() }
}

fn number(tok: &str, line: usize) -> Result<f64, ModelError> {
    let v: f64 = tok.parse().map_err(|_| perr(line, format!("invalid number '{tok}'")))?;
    if v.is_nan() {
        return Err(perr(line, "NaN is not a valid value"));
    }
    Ok(v)
}

fn bound_value(tok: &str, line: usize) -> Result<f64, ModelError> {
    let v = number(tok, line)?;
    Ok(if v >= MPS_INFINITY {
        f64::INFINITY
    } else if v <= -MPS_INFINITY {
        f64::NEG_INFINITY
    } else {
        v
    })
}

fn finite(tok: &str, line: usize) -> Result<f64, ModelError> {
    let v = number(tok, line)?;
    if !v.is_finite() {
        return Err(perr(line, format!("value '{tok}' must be finite")));
    }
    Ok(v)
}

fn header(line: &str) -> Option<(Section, Vec<&str>)> {
    if line.starts_with(char::is_whitespace) {
        return None;
    }
    let mut toks = line.split_whitespace();
    let sec = match toks.next()? {
        "NAME" => Section::Name,
        "OBJSENSE" => Section::ObjSense,
        "ROWS" => Section::Rows,
        "COLUMNS" => Section::Columns,
        "RHS" => Section::Rhs,
        "BOUNDS" => Section::Bounds,
        "ENDATA" => Section::End,
        "RANGES" | "SOS" | "QUADOBJ" | "QMATRIX" | "INDICATORS" => {
            return Some((Section::Start, vec![line.split_whitespace().next().unwrap_or("")]));
        }
        _ => return None,
    };
    Some((sec, toks.collect()))
}

fn parse_sense(tok: &str, line: usize) -> Result<Sense, ModelError> {
    match tok.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(Sense::Maximize),
        "MIN" | "MINIMIZE" => Ok(Sense::Minimize),
        other => Err(perr(line, format!("unknown OBJSENSE '{other}'"))),
    }
}

/// Parses free-format MPS text into a validated [`Instance`].
pub fn parse_mps(text: &str) -> Result<Instance, ModelError> {
    let mut section = Section::Start;
    let mut name = String::new();
    let mut sense = Sense::Minimize;
    let mut row_index: HashMap<String, RowKind> = HashMap::new();
    let mut rows: Vec<(Relation, f64, Vec<(usize, f64)>)> = Vec::new();
    let mut have_objective = false;
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut cols: Vec<Column> = Vec::new();
    let mut in_integer_block = false;
    let mut seen_rows = false;
    let mut seen_columns = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        if let Some((sec, rest)) = header(line) {
            if sec == Section::Start {
                return Err(perr(line_no, format!("section {} unsupported", rest[0])));
            }
            if section == Section::End {
                return Err(perr(line_no, "content after ENDATA"));
            }
            match sec {
                Section::Name => name = rest.join(" "),
                Section::ObjSense => {
                    if let Some(tok) = rest.first() {
                        sense = parse_sense(tok, line_no)?;
                    }
                }
                Section::Rows => seen_rows = true,
                Section::Columns => {
                    if !seen_rows {
                        return Err(ModelError::MissingSection("ROWS"));
                    }
                    seen_columns = true;
                }
                Section::Rhs | Section::Bounds | Section::End => {
                    if !seen_columns {
                        return Err(ModelError::MissingSection("COLUMNS"));
                    }
                }
                Section::Start => unreachable!(),
            }
            section = sec;
            continue;
        }

        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Start | Section::Name => {
                return Err(perr(line_no, "data line outside of any section"));
            }
            Section::End => return Err(perr(line_no, "content after ENDATA")),
            Section::ObjSense => {
                if toks.len() != 1 {
                    return Err(perr(line_no, "OBJSENSE expects a single keyword"));
                }
                sense = parse_sense(toks[0], line_no)?;
            }
            Section::Rows => {
                if toks.len() != 2 {
                    return Err(perr(line_no, "ROWS entry expects '<type> <name>'"));
                }
                let kind = match toks[0].to_ascii_uppercase().as_str() {
                    "N" => {
                        if have_objective {
                            RowKind::Free
                        } else {
                            have_objective = true;
                            RowKind::Objective
                        }
                    }
                    "L" => RowKind::Constraint(rows.len()),
                    "G" => RowKind::Constraint(rows.len()),
                    "E" => RowKind::Constraint(rows.len()),
                    other => return Err(perr(line_no, format!("unknown row type '{other}'"))),
                };
                if let RowKind::Constraint(_) = kind {
                    let rel = match toks[0].to_ascii_uppercase().as_str() {
                        "L" => Relation::Le,
                        "G" => Relation::Ge,
                        _ => Relation::Eq,
                    };
                    rows.push((rel, 0.0, Vec::new()));
                }
                if row_index.insert(toks[1].to_string(), kind).is_some() {
                    return Err(perr(line_no, format!("duplicate row '{}'", toks[1])));
                }
            }
            Section::Columns => {
                if toks.len() >= 3 && toks[1].trim_matches('\'') == "MARKER" {
                    match toks[2].trim_matches('\'') {
                        "INTORG" => in_integer_block = true,
                        "INTEND" => in_integer_block = false,
                        other => return Err(perr(line_no, format!("unknown marker '{other}'"))),
                    }
                    continue;
                }
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(perr(line_no, "COLUMNS entry expects '<col> <row> <value> [<row> <value>]'"));
                }
                let j = match col_index.get(toks[0]) {
                    Some(&j) => j,
                    None => {
                        let j = cols.len();
                        col_index.insert(toks[0].to_string(), j);
                        cols.push(Column {
                            name: toks[0].to_string(),
                            objective: 0.0,
                            entries: Vec::new(),
                            integer: in_integer_block,
                            lower: 0.0,
                            upper: f64::INFINITY,
                        });
                        j
                    }
                };
                for pair in toks[1..].chunks(2) {
                    let value = finite(pair[1], line_no)?;
                    match row_index.get(pair[0]) {
                        None => return Err(perr(line_no, format!("unknown row '{}'", pair[0]))),
                        Some(RowKind::Objective) => cols[j].objective += value,
                        Some(RowKind::Free) => {}
                        Some(RowKind::Constraint(i)) => {
                            if value != 0.0 {
                                cols[j].entries.push((*i, value));
                            }
                        }
                    }
                }
            }
            Section::Rhs => {
                let pairs = match toks.len() {
                    2 | 4 => &toks[..],
                    3 | 5 => &toks[1..],
                    _ => return Err(perr(line_no, "RHS entry expects '[<set>] <row> <value> [<row> <value>]'")),
                };
                for pair in pairs.chunks(2) {
                    let value = finite(pair[1], line_no)?;
                    match row_index.get(pair[0]) {
                        None => return Err(perr(line_no, format!("unknown row '{}'", pair[0]))),
                        Some(RowKind::Objective) => {
                            if value != 0.0 {
                                log::warn!("line {line_no}: objective constant {value} ignored");
                            }
                        }
                        Some(RowKind::Free) => {}
                        Some(RowKind::Constraint(i)) => rows[*i].1 = value,
                    }
                }
            }
            Section::Bounds => {
                let kind = toks[0].to_ascii_uppercase();
                let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX" | "LI" | "UI");
                let valueless = matches!(kind.as_str(), "FR" | "MI" | "PL" | "BV");
                if !needs_value && !valueless {
                    return Err(perr(line_no, format!("unknown bound type '{}'", toks[0])));
                }
                // Bound-set names are optional in free format.
                let (col_tok, val_tok) = match (needs_value, toks.len()) {
                    (true, 4) => (toks[2], Some(toks[3])),
                    (true, 3) => (toks[1], Some(toks[2])),
                    (false, 3) => (toks[2], None),
                    (false, 2) => (toks[1], None),
                    (false, 4) if kind == "BV" => (toks[2], None),
                    _ => return Err(perr(line_no, "malformed BOUNDS entry")),
                };
                let &j = col_index.get(col_tok).ok_or_else(|| perr(line_no, format!("unknown column '{col_tok}'")))?;
                let v = match val_tok {
                    Some(t) => bound_value(t, line_no)?,
                    None => 0.0,
                };
                let col = &mut cols[j];
                match kind.as_str() {
                    "UP" => col.upper = v,
                    "LO" => col.lower = v,
                    "FX" => {
                        if !v.is_finite() {
                            return Err(perr(line_no, "FX bound must be finite"));
                        }
                        col.lower = v;
                        col.upper = v;
                    }
                    "FR" => {
                        col.lower = f64::NEG_INFINITY;
                        col.upper = f64::INFINITY;
                    }
                    "MI" => col.lower = f64::NEG_INFINITY,
                    "PL" => col.upper = f64::INFINITY,
                    "BV" => {
                        col.integer = true;
                        col.lower = 0.0;
                        col.upper = 1.0;
                    }
                    "LI" => {
                        col.integer = true;
                        col.lower = v;
                    }
                    "UI" => {
                        col.integer = true;
                        col.upper = v;
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    if !seen_rows {
        return Err(ModelError::MissingSection("ROWS"));
    }
    if !seen_columns {
        return Err(ModelError::MissingSection("COLUMNS"));
    }
    if section != Section::End {
        return Err(ModelError::MissingSection("ENDATA"));
    }
    if !have_objective {
        return Err(ModelError::Invalid("no objective (N) row".into()));
    }

    let n = cols.len();
    let mut objective = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut kind = Vec::with_capacity(n);
    for col in &cols {
        objective.push(col.objective);
        if col.lower.is_nan() || col.upper.is_nan() || col.lower > col.upper {
            return Err(ModelError::Invalid(format!(
                "column '{}' has empty bound range [{}, {}]",
                col.name, col.lower, col.upper
            )));
        }
        if col.integer {
            if col.lower == 0.0 && col.upper == 1.0 {
                kind.push(VarKind::Binary);
            } else if col.lower == col.upper && col.lower.fract() == 0.0 {
                kind.push(VarKind::Continuous);
            } else {
                return Err(ModelError::GeneralInteger(col.name.clone()));
            }
        } else {
            kind.push(VarKind::Continuous);
        }
        lower.push(col.lower);
        upper.push(col.upper);
    }
    let mut built: Vec<Row> = rows.into_iter().map(|(rel, rhs, coeffs)| Row::new(coeffs, rel, rhs)).collect();
    for (j, col) in cols.iter().enumerate() {
        for &(i, a) in &col.entries {
            built[i].coeffs.push((j, a));
        }
    }
    Instance::new(name, sense, objective, lower, upper, kind, built)
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Serializes an instance as free-format MPS. Columns are named `C<j>` and
/// rows `R<i>`.
pub fn write_mps(inst: &Instance) -> String {
    let mut out = String::new();
    let name = if inst.name.trim().is_empty() {
        "UNNAMED".to_string()
    } else {
        inst.name.split_whitespace().collect::<Vec<_>>().join("_")
    };
    let _ = writeln!(out, "NAME {name}");
    if inst.sense == Sense::Maximize {
        let _ = writeln!(out, "OBJSENSE\n    MAX");
    }
    let _ = writeln!(out, "ROWS\n N  OBJ");
    for (i, row) in inst.rows.iter().enumerate() {
        let t = match row.relation {
            Relation::Le => "L",
            Relation::Ge => "G",
            Relation::Eq => "E",
        };
        let _ = writeln!(out, " {t}  R{i}");
    }

    let n = inst.num_vars();
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, row) in inst.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            by_col[j].push((i, a));
        }
    }
    let _ = writeln!(out, "COLUMNS");
    let mut in_block = false;
    let mut marker = 0;
    for j in 0..n {
        let is_bin = inst.is_binary(j);
        if is_bin != in_block {
            let tag = if is_bin { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, "    MARKER{marker} 'MARKER' '{tag}'");
            marker += 1;
            in_block = is_bin;
        }
        let c = inst.objective[j];
        if c != 0.0 || by_col[j].is_empty() {
            let _ = writeln!(out, "    C{j} OBJ {}", fmt_num(c));
        }
        for &(i, a) in &by_col[j] {
            let _ = writeln!(out, "    C{j} R{i} {}", fmt_num(a));
        }
    }
    if in_block {
        let _ = writeln!(out, "    MARKER{marker} 'MARKER' 'INTEND'");
    }

    let _ = writeln!(out, "RHS");
    for (i, row) in inst.rows.iter().enumerate() {
        if row.rhs != 0.0 {
            let _ = writeln!(out, "    RHS R{i} {}", fmt_num(row.rhs));
        }
    }

    let _ = writeln!(out, "BOUNDS");
    for j in 0..n {
        let (lo, hi) = (inst.var_lower[j], inst.var_upper[j]);
        if inst.is_binary(j) {
            let _ = writeln!(out, " UP BND C{j} 1");
            continue;
        }
        if lo == hi {
            let _ = writeln!(out, " FX BND C{j} {}", fmt_num(lo));
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR BND C{j}");
            }
            (false, true) => {
                let _ = writeln!(out, " MI BND C{j}");
                let _ = writeln!(out, " UP BND C{j} {}", fmt_num(hi));
            }
            (true, fin_hi) => {
                if lo != 0.0 {
                    let _ = writeln!(out, " LO BND C{j} {}", fmt_num(lo));
                }
                if fin_hi {
                    let _ = writeln!(out, " UP BND C{j} {}", fmt_num(hi));
                }
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    out
}
