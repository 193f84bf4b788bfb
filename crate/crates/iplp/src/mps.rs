//! MPS format reader (fixed and free layout, Netlib style).
//!
//! Fields are whitespace-delimited; names must not contain whitespace.
//! Sections NAME, OBJSENSE, ROWS, COLUMNS, RHS, RANGES, BOUNDS and ENDATA
//! are honored. Gzip-compressed files are accepted by the `.gz` extension.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::dense::DenseVector;
use crate::error::Error;
use crate::sparse::CsrMatrix;
use crate::Result;

/// Relation of a constraint row to its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    LessEq,
    Eq,
    GreaterEq,
}

/// A parsed linear program, prior to standardization:
/// `min c^T x + const` subject to the row relations and variable bounds.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub name: String,
    pub a: CsrMatrix,
    pub b: DenseVector,
    pub c: DenseVector,
    pub row_kinds: Vec<RowKind>,
    /// RANGES entries, turning a row into a two-sided constraint.
    pub ranges: Vec<Option<f64>>,
    pub lower: DenseVector,
    pub upper: DenseVector,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
    pub objective_constant: f64,
    pub maximize: bool,
}

impl LpProblem {
    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    /// Objective value of a point in original variables, in the problem's
    /// own sense (a maximization problem reports the value it maximizes).
    pub fn objective_value(&self, x: &DenseVector) -> f64 {
        self.c.dot(x) + self.objective_constant
    }

    /// Two-sided row interval `[lo, hi]` implied by kind, rhs and range.
    pub fn row_interval(&self, i: usize) -> (f64, f64) {
        let b = self.b[i];
        match (self.row_kinds[i], self.ranges[i]) {
            (RowKind::LessEq, None) => (f64::NEG_INFINITY, b),
            (RowKind::LessEq, Some(r)) => (b - r.abs(), b),
            (RowKind::GreaterEq, None) => (b, f64::INFINITY),
            (RowKind::GreaterEq, Some(r)) => (b, b + r.abs()),
            (RowKind::Eq, None) => (b, b),
            (RowKind::Eq, Some(r)) => {
                if r >= 0.0 {
                    (b, b + r)
                } else {
                    (b + r, b)
                }
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
}

/// Parses MPS text into an [`LpProblem`].
pub fn parse_mps(text: &str) -> Result<LpProblem> {
    let mut name = String::new();
    let mut maximize = false;
    let mut section = Section::Start;

    let mut row_names: Vec<String> = Vec::new();
    let mut row_kinds: Vec<RowKind> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut objective_row: Option<String> = None;
    // Extra free rows beyond the first N row carry no constraint.
    let mut ignored_rows: HashMap<String, ()> = HashMap::new();

    let mut col_names: Vec<String> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();

    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut c_entries: HashMap<usize, f64> = HashMap::new();
    let mut b = Vec::new();
    let mut ranges: Vec<Option<f64>> = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut objective_constant = 0.0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let is_header = !raw.starts_with(' ') && !raw.starts_with('\t');
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }

        if is_header {
            match fields[0] {
                "NAME" => {
                    name = fields.get(1).unwrap_or(&"").to_string();
                    continue;
                }
                "OBJSENSE" => {
                    section = Section::ObjSense;
                    if let Some(&word) = fields.get(1) {
                        maximize = parse_objsense(word, line)?;
                        section = Section::Start;
                    }
                    continue;
                }
                "ROWS" => {
                    section = Section::Rows;
                    continue;
                }
                "COLUMNS" => {
                    if row_names.is_empty() && objective_row.is_none() {
                        return Err(Error::parse(line, "COLUMNS before ROWS"));
                    }
                    section = Section::Columns;
                    continue;
                }
                "RHS" => {
                    section = Section::Rhs;
                    continue;
                }
                "RANGES" => {
                    section = Section::Ranges;
                    continue;
                }
                "BOUNDS" => {
                    section = Section::Bounds;
                    continue;
                }
                "ENDATA" => {
                    break;
                }
                other => {
                    return Err(Error::parse(line, format!("unknown section '{other}'")));
                }
            }
        }

        match section {
            Section::Start => {
                return Err(Error::parse(line, "data before any section header"));
            }
            Section::ObjSense => {
                maximize = parse_objsense(fields[0], line)?;
                section = Section::Start;
            }
            Section::Rows => {
                if fields.len() != 2 {
                    return Err(Error::parse(line, "ROWS line needs a type and a name"));
                }
                let row_name = fields[1].to_string();
                let kind = match fields[0].to_ascii_uppercase().as_str() {
                    "N" => {
                        if objective_row.is_none() {
                            objective_row = Some(row_name);
                        } else {
                            ignored_rows.insert(row_name, ());
                        }
                        continue;
                    }
                    "L" => RowKind::LessEq,
                    "G" => RowKind::GreaterEq,
                    "E" => RowKind::Eq,
                    other => {
                        return Err(Error::parse(line, format!("unknown row type '{other}'")));
                    }
                };
                match row_index.entry(row_name.clone()) {
                    Entry::Occupied(_) => {
                        return Err(Error::parse(line, format!("duplicate row '{row_name}'")));
                    }
                    Entry::Vacant(e) => {
                        e.insert(row_names.len());
                    }
                }
                row_names.push(row_name);
                row_kinds.push(kind);
                b.push(0.0);
                ranges.push(None);
            }
            Section::Columns => {
                if fields.len() >= 3 && fields[1].contains("MARKER") {
                    return Err(Error::parse(line, "integer markers are not supported"));
                }
                if fields.len() < 3 || fields.len() % 2 == 0 {
                    return Err(Error::parse(
                        line,
                        "COLUMNS line needs a column name and row/value pairs",
                    ));
                }
                let col = *col_index
                    .entry(fields[0].to_string())
                    .or_insert_with(|| {
                        col_names.push(fields[0].to_string());
                        lower.push(0.0);
                        upper.push(f64::INFINITY);
                        col_names.len() - 1
                    });
                for pair in fields[1..].chunks(2) {
                    let value = parse_number(pair[1], line)?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        *c_entries.entry(col).or_insert(0.0) += value;
                    } else if let Some(&r) = row_index.get(pair[0]) {
                        triplets.push((r, col, value));
                    } else if ignored_rows.contains_key(pair[0]) {
                        // coefficient on a non-binding free row
                    } else {
                        return Err(Error::parse(
                            line,
                            format!("unknown row '{}' in COLUMNS", pair[0]),
                        ));
                    }
                }
            }
            Section::Rhs => {
                let pairs = rhs_style_pairs(&fields, line, "RHS")?;
                for (row, value) in pairs {
                    let value = parse_number(value, line)?;
                    if Some(row) == objective_row.as_deref() {
                        // An rhs on the objective row is minus the constant.
                        objective_constant = -value;
                    } else if let Some(&r) = row_index.get(row) {
                        b[r] = value;
                    } else if ignored_rows.contains_key(row) {
                        // ignored free row
                    } else {
                        return Err(Error::parse(line, format!("unknown row '{row}' in RHS")));
                    }
                }
            }
            Section::Ranges => {
                let pairs = rhs_style_pairs(&fields, line, "RANGES")?;
                for (row, value) in pairs {
                    let value = parse_number(value, line)?;
                    if Some(row) == objective_row.as_deref() {
                        return Err(Error::parse(line, "RANGES entry on the objective row"));
                    }
                    let Some(&r) = row_index.get(row) else {
                        return Err(Error::parse(line, format!("unknown row '{row}' in RANGES")));
                    };
                    ranges[r] = Some(value);
                }
            }
            Section::Bounds => {
                if fields.len() < 3 {
                    return Err(Error::parse(line, "BOUNDS line too short"));
                }
                let kind = fields[0].to_ascii_uppercase();
                let col_name = fields[2];
                let Some(&j) = col_index.get(col_name) else {
                    return Err(Error::parse(
                        line,
                        format!("unknown column '{col_name}' in BOUNDS"),
                    ));
                };
                let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX");
                let value = if needs_value {
                    let Some(v) = fields.get(3) else {
                        return Err(Error::parse(line, format!("{kind} bound needs a value")));
                    };
                    parse_number(v, line)?
                } else {
                    0.0
                };
                match kind.as_str() {
                    "UP" => {
                        upper[j] = value;
                        if value < 0.0 && lower[j] == 0.0 {
                            // Classic convention: a negative upper bound on a
                            // default-bounded column frees the lower bound.
                            lower[j] = f64::NEG_INFINITY;
                        }
                    }
                    "LO" => lower[j] = value,
                    "FX" => {
                        lower[j] = value;
                        upper[j] = value;
                    }
                    "FR" => {
                        lower[j] = f64::NEG_INFINITY;
                        upper[j] = f64::INFINITY;
                    }
                    "MI" => lower[j] = f64::NEG_INFINITY,
                    "PL" => upper[j] = f64::INFINITY,
                    other => {
                        return Err(Error::parse(
                            line,
                            format!("unsupported bound type '{other}'"),
                        ));
                    }
                }
            }
        }
    }

    if objective_row.is_none() {
        return Err(Error::parse(0, "no objective (N) row"));
    }

    let ncols = col_names.len();
    let nrows = row_names.len();
    for j in 0..ncols {
        if lower[j] > upper[j] {
            return Err(Error::Infeasible(format!(
                "column '{}' has lower bound {} above upper bound {}",
                col_names[j], lower[j], upper[j]
            )));
        }
    }

    let a = CsrMatrix::from_triplets(nrows, ncols, &triplets)?;
    let mut c = DenseVector::zeros(ncols);
    for (j, v) in c_entries {
        c[j] = v;
    }

    Ok(LpProblem {
        name,
        a,
        b: DenseVector::from_vec(b),
        c,
        row_kinds,
        ranges,
        lower: DenseVector::from_vec(lower),
        upper: DenseVector::from_vec(upper),
        row_names,
        col_names,
        objective_constant,
        maximize,
    })
}

/// Reads an MPS file; `.gz` paths are decompressed on the fly.
pub fn read_mps_path<P: AsRef<Path>>(path: P) -> Result<LpProblem> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let text = if path.extension().is_some_and(|e| e == "gz") {
        let mut decoder = flate2::read::GzDecoder::new(&bytes[..]);
        let mut out = String::new();
        decoder.read_to_string(&mut out)?;
        out
    } else {
        String::from_utf8(bytes)
            .map_err(|e| Error::parse(0, format!("file is not valid UTF-8: {e}")))?
    };
    parse_mps(&text)
}

fn parse_objsense(word: &str, line: usize) -> Result<bool> {
    match word.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(true),
        "MIN" | "MINIMIZE" => Ok(false),
        other => Err(Error::parse(line, format!("unknown OBJSENSE '{other}'"))),
    }
}

fn parse_number(text: &str, line: usize) -> Result<f64> {
    // MPS allows Fortran-style exponents like 1.0D+2.
    let norm = text.replace(['D', 'd'], "E");
    norm.parse::<f64>()
        .map_err(|_| Error::parse(line, format!("bad number '{text}'")))
}

/// RHS-style data lines carry an optional set name followed by
/// (row, value) pairs. A set name plus pairs gives an odd field count;
/// free-format writers that omit the set name give an even one.
fn rhs_style_pairs<'a>(
    fields: &[&'a str],
    line: usize,
    section: &str,
) -> Result<Vec<(&'a str, &'a str)>> {
    let data = if fields.len() % 2 == 1 {
        &fields[1..]
    } else {
        &fields[..]
    };
    if data.is_empty() || data.len() % 2 != 0 {
        return Err(Error::parse(line, format!("malformed {section} line")));
    }
    Ok(data.chunks(2).map(|p| (p[0], p[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "NAME          TINY
ROWS
 N  COST
 E  R1
COLUMNS
    X1        COST           2.0   R1             1.0
RHS
    RHS       R1             1.0
ENDATA
";

    #[test]
    fn minimal_problem() {
        let p = parse_mps(TINY).unwrap();
        assert_eq!(p.name, "TINY");
        assert_eq!(p.nrows(), 1);
        assert_eq!(p.ncols(), 1);
        assert_eq!(p.b.as_slice(), &[1.0]);
        assert_eq!(p.c.as_slice(), &[2.0]);
        assert_eq!(p.row_kinds, vec![RowKind::Eq]);
        assert_eq!(p.a.row(0), (&[0usize][..], &[1.0][..]));
        assert!(!p.maximize);
    }

    #[test]
    fn bounds_and_types() {
        let text = "NAME B
ROWS
 N  obj
 L  r1
COLUMNS
    x1   obj   1.0   r1   1.0
    x2   obj   1.0   r1   2.0
    x3   obj   1.0   r1   3.0
RHS
    rhs  r1   10.0
BOUNDS
 UP BND x1 5.0
 LO BND x2 -2.0
 FR BND x3
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert_eq!(p.upper[0], 5.0);
        assert_eq!(p.lower[0], 0.0);
        assert_eq!(p.lower[1], -2.0);
        assert_eq!(p.lower[2], f64::NEG_INFINITY);
        assert_eq!(p.upper[2], f64::INFINITY);
    }

    #[test]
    fn ranges_expand_to_intervals() {
        let text = "NAME R
ROWS
 N  obj
 L  r1
 G  r2
 E  r3
COLUMNS
    x1  obj 1.0 r1 1.0
    x2  r2  1.0 r3 1.0
RHS
    rhs r1 4.0 r2 1.0
    rhs r3 2.0
RANGES
    rng r1 2.0 r2 3.0
    rng r3 -1.5
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert_eq!(p.row_interval(0), (2.0, 4.0));
        assert_eq!(p.row_interval(1), (1.0, 4.0));
        assert_eq!(p.row_interval(2), (0.5, 2.0));
    }

    #[test]
    fn objective_rhs_becomes_negated_constant() {
        let text = "NAME C
ROWS
 N  obj
 E  r1
COLUMNS
    x1  obj 1.0 r1 1.0
RHS
    rhs r1 1.0 obj 3.5
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert_eq!(p.objective_constant, -3.5);
    }

    #[test]
    fn objsense_max() {
        let text = "NAME M
OBJSENSE
    MAX
ROWS
 N  obj
 E  r1
COLUMNS
    x1  obj 1.0 r1 1.0
RHS
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert!(p.maximize);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "NAME E
ROWS
 N  obj
 E  r1
COLUMNS
    x1  bogus 1.0
ENDATA
";
        match parse_mps(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 6);
                assert!(message.contains("bogus"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_row_rejected() {
        let text = "NAME D
ROWS
 N  obj
 E  r1
 L  r1
COLUMNS
    x1  r1 1.0
ENDATA
";
        assert!(parse_mps(text).is_err());
    }

    #[test]
    fn conflicting_bounds_rejected() {
        let text = "NAME F
ROWS
 N  obj
 E  r1
COLUMNS
    x1  obj 1.0 r1 1.0
BOUNDS
 LO BND x1 5.0
 UP BND x1 1.0
ENDATA
";
        assert!(matches!(parse_mps(text), Err(Error::Infeasible(_))));
    }

    #[test]
    fn fortran_exponents_accepted() {
        let text = "NAME G
ROWS
 N  obj
 E  r1
COLUMNS
    x1  obj 1.0D+1 r1 2.5d-1
RHS
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert_eq!(p.c[0], 10.0);
        assert_eq!(p.a.row(0).1, &[0.25]);
    }

    #[test]
    fn duplicate_coefficients_summed() {
        let text = "NAME H
ROWS
 N  obj
 E  r1
COLUMNS
    x1  r1 1.0 r1 2.0
RHS
ENDATA
";
        let p = parse_mps(text).unwrap();
        assert_eq!(p.a.row(0).1, &[3.0]);
    }

    #[test]
    fn gzip_roundtrip() {
        use flate2::write::GzEncoder;
        use flate2::Compression;
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.mps.gz");
        let mut enc = GzEncoder::new(std::fs::File::create(&path).unwrap(), Compression::fast());
        enc.write_all(TINY.as_bytes()).unwrap();
        enc.finish().unwrap();
        let p = read_mps_path(&path).unwrap();
        assert_eq!(p.ncols(), 1);
    }
}
