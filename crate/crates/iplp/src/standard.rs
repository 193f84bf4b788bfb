//! Transformation of a bounded-variable LP into the standard primal form
//! `min c^T x, A x = b, x >= 0`, with a reversible record.
//!
//! The scheme: fixed variables are substituted out; finite lower bounds are
//! shifted to zero; variables unbounded below with a finite upper bound are
//! reflected; free variables split into differences of nonnegatives;
//! inequality rows get slack columns; remaining finite upper bounds become
//! appended rows `x_j + t_j = cap` with a fresh slack. The record replays
//! backwards to recover original-space solutions.

use crate::dense::DenseVector;
use crate::error::Error;
use crate::mps::{LpProblem, RowKind};
use crate::sparse::CsrMatrix;
use crate::Result;

/// One atomic transform, in application order. Column indices refer to the
/// reduced problem (after fixed-variable substitution) except for
/// `FixVariable`, which records the original index.
#[derive(Clone, Debug, PartialEq)]
pub enum TransformStep {
    /// `x_orig[col] = value`; the column was substituted out.
    FixVariable { col: usize, value: f64 },
    /// `x = offset - x'` (variable unbounded below, finite upper bound).
    ReflectVariable { col: usize, offset: f64 },
    /// `x = x' + by` (finite lower bound shifted to zero).
    ShiftLower { col: usize, by: f64 },
    /// Slack column appended to turn an inequality row into an equality.
    AddRowSlack { row: usize, col: usize },
    /// Free variable split: `x[col] = x'[col] - x'[neg_col]`.
    SplitFree { col: usize, neg_col: usize },
    /// Appended row `x[col] + x[slack_col] = cap` enforcing an upper bound.
    AddUpperBoundRow {
        col: usize,
        slack_col: usize,
        row: usize,
        cap: f64,
    },
}

/// Reversible record of the standardization.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformRecord {
    pub original_n: usize,
    /// Original columns minus the fixed ones.
    pub reduced_n: usize,
    pub standard_n: usize,
    pub standard_m: usize,
    pub steps: Vec<TransformStep>,
    pub maximize: bool,
    /// Constant folded into the standard-form (minimization) objective.
    pub objective_constant: f64,
}

impl TransformRecord {
    pub fn identity(n: usize, m: usize) -> Self {
        TransformRecord {
            original_n: n,
            reduced_n: n,
            standard_n: n,
            standard_m: m,
            steps: Vec::new(),
            maximize: false,
            objective_constant: 0.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty() && !self.maximize && self.objective_constant == 0.0
    }
}

/// An LP in standard primal form with the record of how it got there.
#[derive(Clone, Debug)]
pub struct StandardFormLp {
    pub name: String,
    pub a: CsrMatrix,
    pub b: DenseVector,
    /// Minimization objective.
    pub c: DenseVector,
    pub transform: TransformRecord,
}

impl StandardFormLp {
    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    /// Standard-form objective (minimization sense), constant included.
    pub fn objective_value(&self, x_std: &DenseVector) -> f64 {
        self.c.dot(x_std) + self.transform.objective_constant
    }
}

/// Applies the bound scheme above. The result has implicit bounds
/// `x >= 0` only.
pub fn to_standard_form(p: &LpProblem) -> Result<StandardFormLp> {
    let n0 = p.ncols();
    let m0 = p.nrows();
    let mut steps = Vec::new();
    let mut objective_constant = if p.maximize {
        -p.objective_constant
    } else {
        p.objective_constant
    };
    let sign = if p.maximize { -1.0 } else { 1.0 };

    for j in 0..n0 {
        if p.lower[j] > p.upper[j] {
            return Err(Error::Infeasible(format!(
                "column {j} has empty bound interval [{}, {}]",
                p.lower[j], p.upper[j]
            )));
        }
    }

    // Pass A: substitute fixed variables out, in original indices.
    let mut fixed = vec![None; n0];
    for j in 0..n0 {
        if p.lower[j] == p.upper[j] {
            let v = p.lower[j];
            fixed[j] = Some(v);
            steps.push(TransformStep::FixVariable { col: j, value: v });
            objective_constant += sign * p.c[j] * v;
        }
    }
    let keep: Vec<usize> = (0..n0).filter(|&j| fixed[j].is_none()).collect();
    let reduced_n = keep.len();
    let mut col_of_orig = vec![usize::MAX; n0];
    for (new, &old) in keep.iter().enumerate() {
        col_of_orig[old] = new;
    }

    // Dense-ish working copies in reduced indexing.
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); reduced_n];
    let mut b: Vec<f64> = p.b.as_slice().to_vec();
    for i in 0..m0 {
        let (cidx, vals) = p.a.row(i);
        for (&j, &v) in cidx.iter().zip(vals) {
            match fixed[j] {
                Some(val) => b[i] -= v * val,
                None => cols[col_of_orig[j]].push((i, v)),
            }
        }
    }
    let mut c: Vec<f64> = keep.iter().map(|&j| sign * p.c[j]).collect();
    let mut lower: Vec<f64> = keep.iter().map(|&j| p.lower[j]).collect();
    let mut upper: Vec<f64> = keep.iter().map(|&j| p.upper[j]).collect();

    // Pass B: reflect variables unbounded below with finite upper bound,
    // then shift finite lower bounds to zero.
    for j in 0..reduced_n {
        if lower[j] == f64::NEG_INFINITY && upper[j].is_finite() {
            let offset = upper[j];
            steps.push(TransformStep::ReflectVariable { col: j, offset });
            for &(i, v) in &cols[j].clone() {
                b[i] -= v * offset;
            }
            for entry in cols[j].iter_mut() {
                entry.1 = -entry.1;
            }
            objective_constant += c[j] * offset;
            c[j] = -c[j];
            lower[j] = 0.0;
            upper[j] = f64::INFINITY;
        } else if lower[j].is_finite() && lower[j] != 0.0 {
            let by = lower[j];
            steps.push(TransformStep::ShiftLower { col: j, by });
            for &(i, v) in &cols[j] {
                b[i] -= v * by;
            }
            objective_constant += c[j] * by;
            if upper[j].is_finite() {
                upper[j] -= by;
            }
            lower[j] = 0.0;
        }
    }

    // Pass C: slack columns for inequality and ranged rows.
    let mut next_col = reduced_n;
    for i in 0..m0 {
        let (lo, hi) = row_interval(p, i);
        match p.row_kinds[i] {
            RowKind::Eq if p.ranges[i].is_none() => {
                // b[i] already adjusted by the bound passes
            }
            _ => {
                // a_i x + sign * t = anchor with t in [0, cap].
                let (slack_sign, anchor, cap) = match p.row_kinds[i] {
                    RowKind::LessEq => (1.0, hi, hi - lo),
                    RowKind::GreaterEq => (-1.0, lo, hi - lo),
                    RowKind::Eq => {
                        let r = p.ranges[i].expect("plain equality handled above");
                        if r >= 0.0 {
                            (-1.0, lo, hi - lo)
                        } else {
                            (1.0, hi, hi - lo)
                        }
                    }
                };
                // Bound passes shifted b[i] by the same amount for every
                // anchor choice; adjust from the original rhs to the anchor.
                b[i] += anchor - p.b[i];
                if cap == 0.0 {
                    // Zero-width range: the row is an equality at its anchor.
                    continue;
                }
                let col = next_col;
                next_col += 1;
                cols.push(vec![(i, slack_sign)]);
                c.push(0.0);
                lower.push(0.0);
                upper.push(if cap.is_finite() { cap } else { f64::INFINITY });
                steps.push(TransformStep::AddRowSlack { row: i, col });
            }
        }
    }

    // Pass D: split free variables.
    for j in 0..reduced_n {
        if lower[j] == f64::NEG_INFINITY {
            debug_assert_eq!(upper[j], f64::INFINITY, "reflection pass missed a column");
            let neg_col = next_col;
            next_col += 1;
            let negated: Vec<(usize, f64)> = cols[j].iter().map(|&(i, v)| (i, -v)).collect();
            cols.push(negated);
            c.push(-c[j]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            lower[j] = 0.0;
            steps.push(TransformStep::SplitFree { col: j, neg_col });
        }
    }

    // Pass E: appended rows for remaining finite upper bounds.
    let mut next_row = m0;
    let ncols_before_upper = next_col;
    for j in 0..ncols_before_upper {
        if upper[j].is_finite() {
            let cap = upper[j];
            let slack_col = next_col;
            next_col += 1;
            let row = next_row;
            next_row += 1;
            cols[j].push((row, 1.0));
            cols.push(vec![(row, 1.0)]);
            c.push(0.0);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            upper[j] = f64::INFINITY;
            b.push(cap);
            steps.push(TransformStep::AddUpperBoundRow {
                col: j,
                slack_col,
                row,
                cap,
            });
        }
    }

    let standard_n = next_col;
    let standard_m = next_row;
    let mut triplets = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            triplets.push((i, j, v));
        }
    }
    let a = CsrMatrix::from_triplets(standard_m, standard_n, &triplets)?;

    Ok(StandardFormLp {
        name: p.name.clone(),
        a,
        b: DenseVector::from_vec(b),
        c: DenseVector::from_vec(c),
        transform: TransformRecord {
            original_n: n0,
            reduced_n,
            standard_n,
            standard_m,
            steps,
            maximize: p.maximize,
            objective_constant,
        },
    })
}

fn row_interval(p: &LpProblem, i: usize) -> (f64, f64) {
    p.row_interval(i)
}

/// Maps a standard-form point back to original variables by replaying the
/// record backwards.
pub fn recover_solution(x_std: &DenseVector, rec: &TransformRecord) -> Result<DenseVector> {
    if x_std.len() != rec.standard_n {
        return Err(Error::DimensionMismatch {
            context: "recover_solution input",
            expected: rec.standard_n,
            found: x_std.len(),
        });
    }
    let mut x = x_std.as_slice().to_vec();
    let mut fixes: Vec<(usize, f64)> = Vec::new();
    for step in rec.steps.iter().rev() {
        match *step {
            TransformStep::AddUpperBoundRow { .. } => {}
            TransformStep::SplitFree { col, neg_col } => {
                x[col] -= x[neg_col];
            }
            TransformStep::AddRowSlack { .. } => {}
            TransformStep::ShiftLower { col, by } => {
                x[col] += by;
            }
            TransformStep::ReflectVariable { col, offset } => {
                x[col] = offset - x[col];
            }
            TransformStep::FixVariable { col, value } => {
                fixes.push((col, value));
            }
        }
    }
    x.truncate(rec.reduced_n);
    // Fixed columns were removed in ascending order; reinsert the same way.
    fixes.sort_unstable_by_key(|&(col, _)| col);
    let mut out = Vec::with_capacity(rec.original_n);
    let mut fix_iter = fixes.iter().peekable();
    let mut reduced = x.into_iter();
    for j in 0..rec.original_n {
        if let Some(&&(col, value)) = fix_iter.peek() {
            if col == j {
                out.push(value);
                fix_iter.next();
                continue;
            }
        }
        out.push(reduced.next().ok_or(Error::DimensionMismatch {
            context: "recover_solution reduced columns",
            expected: rec.original_n,
            found: j,
        })?);
    }
    Ok(DenseVector::from_vec(out))
}

/// Largest violation of the original constraints and bounds at `x_orig`.
pub fn original_infeasibility(p: &LpProblem, x_orig: &DenseVector) -> f64 {
    let ax = p.a.matvec(x_orig).expect("dimension checked by caller");
    let mut worst: f64 = 0.0;
    for i in 0..p.nrows() {
        let (lo, hi) = p.row_interval(i);
        if ax[i] < lo {
            worst = worst.max(lo - ax[i]);
        }
        if ax[i] > hi {
            worst = worst.max(ax[i] - hi);
        }
    }
    for j in 0..p.ncols() {
        if x_orig[j] < p.lower[j] {
            worst = worst.max(p.lower[j] - x_orig[j]);
        }
        if x_orig[j] > p.upper[j] {
            worst = worst.max(x_orig[j] - p.upper[j]);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::parse_mps;

    fn std_of(text: &str) -> (LpProblem, StandardFormLp) {
        let p = parse_mps(text).unwrap();
        let s = to_standard_form(&p).unwrap();
        (p, s)
    }

    #[test]
    fn already_standard_is_identity() {
        let (_, s) = std_of(
            "NAME S
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 1.0 r1 1.0
    x2 obj 2.0 r1 1.0
RHS
    rhs r1 2.0
ENDATA
",
        );
        assert!(s.transform.is_identity());
        assert_eq!(s.ncols(), 2);
        assert_eq!(s.nrows(), 1);
        let x = DenseVector::from_vec(vec![1.5, 0.5]);
        let rec = recover_solution(&x, &s.transform).unwrap();
        assert_eq!(rec.as_slice(), x.as_slice());
    }

    #[test]
    fn shifted_and_capped_variable() {
        // 1 <= x <= 3, row x = 2: shift makes b = 1 and adds the cap row
        // x' + t = 2.
        let (p, s) = std_of(
            "NAME S2
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 2.0
BOUNDS
 LO bnd x1 1.0
 UP bnd x1 3.0
ENDATA
",
        );
        assert_eq!(s.nrows(), 2);
        assert_eq!(s.ncols(), 2);
        assert_eq!(s.b.as_slice(), &[1.0, 2.0]);

        // x' = 1, t = 1 solves the standard system; recovery gives x = 2.
        let x_std = DenseVector::from_vec(vec![1.0, 1.0]);
        let ax = s.a.matvec(&x_std).unwrap();
        assert_eq!(ax.as_slice(), s.b.as_slice());
        let x = recover_solution(&x_std, &s.transform).unwrap();
        assert_eq!(x.as_slice(), &[2.0]);
        assert_eq!(original_infeasibility(&p, &x), 0.0);
    }

    #[test]
    fn slack_signs_for_inequalities() {
        let (p, s) = std_of(
            "NAME S3
ROWS
 N obj
 L r1
 G r2
COLUMNS
    x1 obj 1.0 r1 1.0 r2 1.0
RHS
    rhs r1 4.0 r2 1.0
ENDATA
",
        );
        assert_eq!(s.ncols(), 3);
        // x = 2 with slacks 2 and 1 satisfies both equalities.
        let x_std = DenseVector::from_vec(vec![2.0, 2.0, 1.0]);
        let ax = s.a.matvec(&x_std).unwrap();
        assert_eq!(ax.as_slice(), s.b.as_slice());
        let x = recover_solution(&x_std, &s.transform).unwrap();
        assert_eq!(original_infeasibility(&p, &x), 0.0);
    }

    #[test]
    fn free_variable_split() {
        let (_, s) = std_of(
            "NAME S4
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 -5.0
BOUNDS
 FR bnd x1
ENDATA
",
        );
        assert_eq!(s.ncols(), 2);
        let x_std = DenseVector::from_vec(vec![3.0, 8.0]);
        let x = recover_solution(&x_std, &s.transform).unwrap();
        assert_eq!(x.as_slice(), &[-5.0]);
    }

    #[test]
    fn fixed_variable_substituted() {
        let (p, s) = std_of(
            "NAME S5
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 3.0 r1 2.0
    x2 obj 1.0 r1 1.0
RHS
    rhs r1 7.0
BOUNDS
 FX bnd x1 2.0
ENDATA
",
        );
        assert_eq!(s.ncols(), 1);
        assert_eq!(s.b.as_slice(), &[3.0]);
        assert_eq!(s.transform.objective_constant, 6.0);
        let x_std = DenseVector::from_vec(vec![3.0]);
        let x = recover_solution(&x_std, &s.transform).unwrap();
        assert_eq!(x.as_slice(), &[2.0, 3.0]);
        assert_eq!(original_infeasibility(&p, &x), 0.0);
        assert_eq!(
            p.objective_value(&x),
            s.objective_value(&x_std)
        );
    }

    #[test]
    fn reflected_variable() {
        // x <= 4 unbounded below, row x = 1.
        let (p, s) = std_of(
            "NAME S6
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 1.0
BOUNDS
 MI bnd x1
 UP bnd x1 4.0
ENDATA
",
        );
        assert_eq!(s.ncols(), 1);
        assert_eq!(s.b.as_slice(), &[-3.0]);
        let x_std = DenseVector::from_vec(vec![3.0]);
        let x = recover_solution(&x_std, &s.transform).unwrap();
        assert_eq!(x.as_slice(), &[1.0]);
        assert_eq!(original_infeasibility(&p, &x), 0.0);
        assert!(
            (p.objective_value(&x) - s.objective_value(&x_std)).abs() < 1e-12
        );
    }

    #[test]
    fn maximize_flips_objective() {
        let (p, s) = std_of(
            "NAME S7
OBJSENSE
    MAX
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 2.0 r1 1.0
RHS
    rhs r1 3.0
ENDATA
",
        );
        let x_std = DenseVector::from_vec(vec![3.0]);
        let x = recover_solution(&x_std, &s.transform).unwrap();
        // Standard form minimizes the negated objective.
        assert_eq!(s.objective_value(&x_std), -6.0);
        assert_eq!(p.objective_value(&x), 6.0);
    }

    #[test]
    fn ranged_row_becomes_capped_slack() {
        let (p, s) = std_of(
            "NAME S8
ROWS
 N obj
 L r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 4.0
RANGES
    rng r1 2.0
ENDATA
",
        );
        // Interval [2, 4]: slack in [0, 2] needs its own cap row.
        assert_eq!(s.nrows(), 2);
        assert_eq!(s.ncols(), 3);
        for x1 in [2.0, 3.0, 4.0] {
            let t = 4.0 - x1;
            let x_std = DenseVector::from_vec(vec![x1, t, 2.0 - t]);
            let ax = s.a.matvec(&x_std).unwrap();
            assert_eq!(ax.as_slice(), s.b.as_slice());
            let x = recover_solution(&x_std, &s.transform).unwrap();
            assert_eq!(original_infeasibility(&p, &x), 0.0);
        }
    }
}
