//! MPS reader, fixed and free format.
//!
//! Lines are split on whitespace when that yields a sensible field count for
//! the section, and by the classic fixed columns (2-3, 5-12, 15-22, 25-36,
//! 40-47, 50-61) otherwise, so names containing spaces still work in
//! fixed-format files.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{GeneralLp, LpBuilder, ModelError, Names};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown row {label:?}")]
    UnknownRowLabel { line: usize, label: String },
    #[error("line {line}: unknown section {name:?}")]
    UnknownSection { line: usize, name: String },
    #[error("column {column:?}: lower bound {lower} above upper bound {upper}")]
    ConflictingBounds { column: String, lower: f64, upper: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowType {
    N,
    E,
    L,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundType {
    Up,
    Lo,
    Fx,
    Fr,
    Mi,
    Pl,
    Bv,
    /// Integer lower/upper bounds, read as `Lo`/`Up`.
    Li,
    Ui,
}

impl BoundType {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "UP" => BoundType::Up,
            "LO" => BoundType::Lo,
            "FX" => BoundType::Fx,
            "FR" => BoundType::Fr,
            "MI" => BoundType::Mi,
            "PL" => BoundType::Pl,
            "BV" => BoundType::Bv,
            "LI" => BoundType::Li,
            "UI" => BoundType::Ui,
            _ => return None,
        })
    }

    fn takes_value(self) -> bool {
        !matches!(self, BoundType::Fr | BoundType::Mi | BoundType::Pl | BoundType::Bv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub kind: BoundType,
    pub column: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MpsDocument {
    pub name: String,
    pub rows: Vec<(RowType, String)>,
    /// Index into `rows` of the first `N` row.
    pub objective: Option<usize>,
    pub columns: Vec<String>,
    /// `(column, row, value)`, duplicates already summed.
    pub entries: Vec<(usize, usize, f64)>,
    pub rhs: Vec<(usize, f64)>,
    pub ranges: Vec<(usize, f64)>,
    pub bounds: Vec<BoundEntry>,
    pub maximize: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    ObjSense,
    Skip,
}

const FIXED_FIELDS: [(usize, usize); 6] = [(1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61)];

fn fixed_fields(line: &str) -> Vec<String> {
    let mut out: Vec<String> = FIXED_FIELDS
        .iter()
        .map(|&(a, b)| line.get(a.min(line.len())..b.min(line.len())).unwrap_or("").trim().to_string())
        .collect();
    while out.last().is_some_and(String::is_empty) {
        out.pop();
    }
    // Only ROWS and BOUNDS use field 1.
    if out.first().is_some_and(String::is_empty) {
        out.remove(0);
    }
    out
}

fn fields(line: &str, ok: impl Fn(&[String]) -> bool) -> Vec<String> {
    let free: Vec<String> = line.split_whitespace().map(str::to_string).collect();
    if ok(&free) || !line.is_ascii() {
        return free;
    }
    let fixed = fixed_fields(line);
    if ok(&fixed) && fixed.iter().all(|f| !f.is_empty()) {
        fixed
    } else {
        free
    }
}

fn numeric(f: &[String], at: &[usize]) -> bool {
    at.iter().all(|&k| f.get(k).is_some_and(|s| s.parse::<f64>().is_ok()))
}

/// Name/value pairs, optionally preceded by a set name (RHS and RANGES).
fn vector_shape(f: &[String]) -> bool {
    match f.len() {
        2 => numeric(f, &[1]),
        3 => numeric(f, &[2]),
        4 => numeric(f, &[1, 3]),
        5 => numeric(f, &[2, 4]),
        _ => false,
    }
}

fn number(line: usize, s: &str) -> Result<f64, MpsError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| MpsError::Syntax { line, msg: format!("expected a number, found {s:?}") })
}

struct Parser {
    doc: MpsDocument,
    row_index: HashMap<String, usize>,
    col_index: HashMap<String, usize>,
    entry_index: HashMap<(usize, usize), usize>,
    rhs_set: Option<String>,
    range_set: Option<String>,
    bound_set: Option<String>,
    in_marker: bool,
}

impl Parser {
    fn row(&self, line: usize, label: &str) -> Result<usize, MpsError> {
        self.row_index.get(label).copied().ok_or_else(|| MpsError::UnknownRowLabel { line, label: label.to_string() })
    }

    /// Returns false when a second vector set is seen; its entries are skipped.
    fn same_set(slot: &mut Option<String>, name: &str, what: &str, warnings: &mut Vec<String>) -> bool {
        match slot {
            None => {
                *slot = Some(name.to_string());
                true
            }
            Some(s) if s == name => true,
            Some(s) => {
                let msg = format!("ignoring {what} set {name:?}; using {s:?}");
                if !warnings.contains(&msg) {
                    warnings.push(msg);
                }
                false
            }
        }
    }

    fn data(&mut self, section: Section, line: usize, text: &str) -> Result<(), MpsError> {
        match section {
            Section::Skip => {}
            Section::ObjSense => match text.trim() {
                "MAX" | "MAXIMIZE" => self.doc.maximize = true,
                "MIN" | "MINIMIZE" => self.doc.maximize = false,
                other => return Err(MpsError::Syntax { line, msg: format!("unknown objective sense {other:?}") }),
            },
            Section::Rows => {
                let f = fields(text, |f| f.len() == 2);
                if f.len() != 2 {
                    return Err(MpsError::Syntax { line, msg: "ROWS entries need a type and a name".into() });
                }
                let kind = match f[0].as_str() {
                    "N" => RowType::N,
                    "E" => RowType::E,
                    "L" => RowType::L,
                    "G" => RowType::G,
                    t => return Err(MpsError::Syntax { line, msg: format!("unknown row type {t:?}") }),
                };
                if self.row_index.contains_key(&f[1]) {
                    return Err(MpsError::Syntax { line, msg: format!("row {:?} declared twice", f[1]) });
                }
                let idx = self.doc.rows.len();
                if kind == RowType::N {
                    if self.doc.objective.is_none() {
                        self.doc.objective = Some(idx);
                    } else {
                        self.doc.warnings.push(format!("ignoring extra objective row {:?}", f[1]));
                    }
                }
                self.row_index.insert(f[1].clone(), idx);
                self.doc.rows.push((kind, f[1].clone()));
            }
            Section::Columns => {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.get(1).is_some_and(|t| t.trim_matches('\'') == "MARKER") {
                    let marker = tokens.get(2).map(|t| t.trim_matches('\''));
                    self.in_marker = marker == Some("INTORG");
                    if self.in_marker {
                        self.doc.warnings.push("integer markers ignored; solving the LP relaxation".into());
                    }
                    return Ok(());
                }
                let f = fields(text, |f| (f.len() == 3 && numeric(f, &[2])) || (f.len() == 5 && numeric(f, &[2, 4])));
                if f.len() != 3 && f.len() != 5 {
                    return Err(MpsError::Syntax { line, msg: "COLUMNS entries need 3 or 5 fields".into() });
                }
                let col = match self.col_index.get(&f[0]) {
                    Some(&c) => c,
                    None => {
                        let c = self.doc.columns.len();
                        self.col_index.insert(f[0].clone(), c);
                        self.doc.columns.push(f[0].clone());
                        c
                    }
                };
                for pair in f[1..].chunks(2) {
                    let row = self.row(line, &pair[0])?;
                    let value = number(line, &pair[1])?;
                    match self.entry_index.get(&(col, row)) {
                        Some(&k) => {
                            self.doc.entries[k].2 += value;
                            self.doc.warnings.push(format!(
                                "line {line}: duplicate entry for column {:?} row {:?} summed",
                                f[0], pair[0]
                            ));
                        }
                        None => {
                            self.entry_index.insert((col, row), self.doc.entries.len());
                            self.doc.entries.push((col, row, value));
                        }
                    }
                }
            }
            Section::Rhs | Section::Ranges => {
                let f = fields(text, vector_shape);
                let (set, pairs) = match f.len() {
                    2 | 4 => ("", &f[..]),
                    3 | 5 => (f[0].as_str(), &f[1..]),
                    _ => return Err(MpsError::Syntax { line, msg: "expected name/value pairs".into() }),
                };
                let (slot, what) =
                    if section == Section::Rhs { (&mut self.rhs_set, "RHS") } else { (&mut self.range_set, "RANGES") };
                if !Self::same_set(slot, set, what, &mut self.doc.warnings) {
                    return Ok(());
                }
                for pair in pairs.chunks(2) {
                    let row = self.row(line, &pair[0])?;
                    let value = number(line, &pair[1])?;
                    if section == Section::Rhs {
                        self.doc.rhs.push((row, value));
                    } else {
                        self.doc.ranges.push((row, value));
                    }
                }
            }
            Section::Bounds => {
                let f = fields(text, |f| {
                    let kind = f.first().and_then(|t| BoundType::parse(t));
                    match (kind, f.len()) {
                        (Some(k), 3) if k.takes_value() => numeric(f, &[2]),
                        (Some(_), 4) => numeric(f, &[3]),
                        (Some(_), 2 | 3) => true,
                        _ => false,
                    }
                });
                let kind = f.first().and_then(|t| BoundType::parse(t)).ok_or_else(|| MpsError::Syntax {
                    line,
                    msg: format!("unknown bound type {:?}", f.first().map(String::as_str).unwrap_or("")),
                })?;
                // With a set name: type set col [value]. Without: type col [value].
                let with_value = kind.takes_value() || f.len() == 4;
                let named = f.len() == if with_value { 4 } else { 3 };
                let col_pos = if named { 2 } else { 1 };
                let set = if named { f[1].as_str() } else { "" };
                let Some(col_name) = f.get(col_pos) else {
                    return Err(MpsError::Syntax { line, msg: "bound without a column".into() });
                };
                if !Self::same_set(&mut self.bound_set, set, "BOUNDS", &mut self.doc.warnings) {
                    return Ok(());
                }
                let column = *self
                    .col_index
                    .get(col_name)
                    .ok_or_else(|| MpsError::Syntax { line, msg: format!("bound on unknown column {col_name:?}") })?;
                let value = match f.get(col_pos + 1) {
                    Some(v) => number(line, v)?,
                    None if kind.takes_value() => {
                        return Err(MpsError::Syntax { line, msg: "bound needs a value".into() })
                    }
                    None => 0.0,
                };
                self.doc.bounds.push(BoundEntry { kind, column, value });
            }
        }
        Ok(())
    }
}

pub fn parse_mps(text: &str) -> Result<MpsDocument, MpsError> {
    let mut p = Parser {
        doc: MpsDocument::default(),
        row_index: HashMap::new(),
        col_index: HashMap::new(),
        entry_index: HashMap::new(),
        rhs_set: None,
        range_set: None,
        bound_set: None,
        in_marker: false,
    };
    let mut section: Option<Section> = None;
    let mut ended = false;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let text = raw.trim_end();
        if text.trim().is_empty() || text.starts_with('*') {
            continue;
        }
        if ended {
            return Err(MpsError::Syntax { line, msg: "content after ENDATA".into() });
        }
        if !text.starts_with(char::is_whitespace) {
            let mut words = text.split_whitespace();
            let head = words.next().unwrap_or("");
            section = Some(match head {
                "NAME" => {
                    p.doc.name = words.collect::<Vec<_>>().join(" ");
                    Section::Skip
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "OBJSENSE" => match words.next() {
                    Some(sense) => {
                        p.data(Section::ObjSense, line, sense)?;
                        Section::Skip
                    }
                    None => Section::ObjSense,
                },
                "ENDATA" => {
                    ended = true;
                    Section::Skip
                }
                _ => return Err(MpsError::UnknownSection { line, name: head.to_string() }),
            });
            continue;
        }
        let Some(s) = section else {
            return Err(MpsError::Syntax { line, msg: "data before any section header".into() });
        };
        p.data(s, line, text)?;
    }
    if p.doc.objective.is_none() {
        return Err(MpsError::Syntax { line: 0, msg: "no objective (N) row".into() });
    }
    Ok(p.doc)
}

/// Converts to `min c·x + offset` with the classic MPS bound conventions.
///
/// `L` rows are negated into `>=` rows; ranged rows become two inequality
/// rows. A right-hand side on the objective row `v` gives the offset `-v`.
/// `MI` sets the upper bound to 0 unless an explicit `UP` is present.
pub fn to_general_lp<T: Scalar>(doc: &MpsDocument) -> Result<(GeneralLp<T>, Vec<String>), MpsError> {
    let mut warnings = doc.warnings.clone();
    let d = doc.columns.len();
    let obj = doc.objective.expect("parse_mps guarantees an objective row");

    let mut dense: Vec<Vec<f64>> = vec![vec![0.0; d]; doc.rows.len()];
    for &(col, row, v) in &doc.entries {
        dense[row][col] = v;
    }
    let mut rhs = vec![0.0; doc.rows.len()];
    for &(row, v) in &doc.rhs {
        rhs[row] = v;
    }
    let mut range: Vec<Option<f64>> = vec![None; doc.rows.len()];
    for &(row, v) in &doc.ranges {
        range[row] = Some(v);
    }

    let sign = if doc.maximize { -1.0 } else { 1.0 };
    if doc.maximize {
        warnings.push("maximization converted to minimization of the negated objective".into());
    }
    let c: Vec<f64> = dense[obj].iter().map(|v| sign * v).collect();
    let mut b = LpBuilder::<f64>::new(d).objective(c);
    let mut eq_names = vec![];
    let mut ineq_names = vec![];
    for (r, (kind, label)) in doc.rows.iter().enumerate() {
        let a = dense[r].clone();
        let v = rhs[r];
        let neg = |a: &[f64]| a.iter().map(|x| -x).collect::<Vec<f64>>();
        // Interval [lo, hi] for ranged rows.
        let interval = range[r].map(|rg| match kind {
            RowType::L => (v - rg.abs(), v),
            RowType::G => (v, v + rg.abs()),
            _ if rg >= 0.0 => (v, v + rg),
            _ => (v + rg, v),
        });
        match (kind, interval) {
            (RowType::N, _) => {
                if range[r].is_some() {
                    warnings.push(format!("range on objective row {label:?} ignored"));
                }
            }
            (_, Some((lo, hi))) => {
                b = b.ge(a.clone(), lo).ge(neg(&a), -hi);
                ineq_names.push(format!("{label}_lo"));
                ineq_names.push(format!("{label}_hi"));
            }
            (RowType::E, None) => {
                b = b.eq(a, v);
                eq_names.push(label.clone());
            }
            (RowType::G, None) => {
                b = b.ge(a, v);
                ineq_names.push(label.clone());
            }
            (RowType::L, None) => {
                b = b.le(a, v);
                ineq_names.push(label.clone());
            }
        }
    }

    let mut lower = vec![0.0; d];
    let mut upper = vec![f64::INFINITY; d];
    let explicit_up: Vec<bool> = (0..d)
        .map(|j| doc.bounds.iter().any(|e| e.column == j && matches!(e.kind, BoundType::Up | BoundType::Ui)))
        .collect();
    let mut lower_set = vec![false; d];
    for e in &doc.bounds {
        let j = e.column;
        match e.kind {
            BoundType::Up | BoundType::Ui => {
                if e.value < 0.0 && lower[j] == 0.0 && !lower_set[j] {
                    warnings.push(format!(
                        "negative upper bound on {:?} with default lower bound; lower bound set to -inf",
                        doc.columns[j]
                    ));
                    lower[j] = f64::NEG_INFINITY;
                }
                upper[j] = e.value;
            }
            BoundType::Lo | BoundType::Li => {
                lower[j] = e.value;
                lower_set[j] = true;
            }
            BoundType::Fx => {
                lower[j] = e.value;
                upper[j] = e.value;
                lower_set[j] = true;
            }
            BoundType::Fr => {
                lower[j] = f64::NEG_INFINITY;
                upper[j] = f64::INFINITY;
                lower_set[j] = true;
            }
            BoundType::Mi => {
                lower[j] = f64::NEG_INFINITY;
                lower_set[j] = true;
                if !explicit_up[j] {
                    upper[j] = 0.0;
                }
            }
            BoundType::Pl => upper[j] = f64::INFINITY,
            BoundType::Bv => {
                lower[j] = 0.0;
                upper[j] = 1.0;
                lower_set[j] = true;
                warnings.push(format!("binary column {:?} relaxed to [0, 1]", doc.columns[j]));
            }
        }
        if matches!(e.kind, BoundType::Li | BoundType::Ui) {
            warnings.push(format!("integer bound on {:?} read as continuous", doc.columns[j]));
        }
    }
    for j in 0..d {
        if lower[j] > upper[j] {
            return Err(MpsError::ConflictingBounds {
                column: doc.columns[j].clone(),
                lower: lower[j],
                upper: upper[j],
            });
        }
        b = b.bounds(j, lower[j], upper[j]);
    }

    let mut lp = b.build()?;
    lp.offset = -sign * rhs[obj];
    lp.names = Some(Names { columns: doc.columns.clone(), eq_rows: eq_names, ineq_rows: ineq_names });
    Ok((lp.cast(), warnings))
}

/// `parse_mps` followed by `to_general_lp`.
pub fn read_mps<T: Scalar>(text: &str) -> Result<(GeneralLp<T>, Vec<String>), MpsError> {
    to_general_lp(&parse_mps(text)?)
}
