//! End-to-end pipeline: load, standardize, compact, solve, recover.

use std::path::Path;

use crate::dense::DenseVector;
use crate::error::Error;
use crate::ipm::{self, ConvergenceTrace, IpmConfig, IpmStatus};
use crate::mps::{read_mps_path, LpProblem};
use crate::sparse::Compaction;
use crate::standard::{recover_solution, to_standard_form, StandardFormLp};
use crate::Result;

/// Full solver outcome in original-problem terms.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: IpmStatus,
    /// Objective in the original problem's own sense, constant included.
    pub objective: f64,
    pub gamma: f64,
    pub ipm_iterations: usize,
    pub krylov_iterations: usize,
    /// Original-space primal solution (when a parsed problem was supplied).
    pub x_original: Option<DenseVector>,
    /// Standard-form primal solution.
    pub x_standard: DenseVector,
    pub trace: ConvergenceTrace,
    pub standard_m: usize,
    pub standard_n: usize,
    pub failure: Option<String>,
}

/// Drops structurally zero rows and columns before the interior-point run.
/// A removed column with negative cost makes the problem unbounded.
pub fn compact_standard_form(p: &StandardFormLp) -> Result<(StandardFormLp, Compaction)> {
    let (a, b, c, map) = p.a.remove_zero_rows_cols(&p.b, &p.c)?;
    if !map.is_identity() {
        let kept: std::collections::HashSet<usize> = map.kept_cols.iter().cloned().collect();
        for j in 0..p.ncols() {
            if !kept.contains(&j) && p.c[j] < 0.0 {
                return Err(Error::Unbounded(format!(
                    "zero column {j} has negative cost {}",
                    p.c[j]
                )));
            }
        }
    }
    Ok((
        StandardFormLp {
            name: p.name.clone(),
            a,
            b,
            c,
            transform: p.transform.clone(),
        },
        map,
    ))
}

/// Solves a standard-form problem, handling zero-row/column compaction and
/// re-embedding internally.
pub fn solve_standard_form(p: &StandardFormLp, cfg: &IpmConfig) -> Result<SolveOutcome> {
    let (compacted, map) = compact_standard_form(p)?;
    let sol = ipm::solve(&compacted, cfg)?;
    let x_std = if map.is_identity() {
        sol.iterate.x.clone()
    } else {
        map.embed_primal(&sol.iterate.x)
    };
    let objective_std = p.objective_value(&x_std);
    let objective = if p.transform.maximize {
        -objective_std
    } else {
        objective_std
    };
    Ok(SolveOutcome {
        status: sol.status,
        objective,
        gamma: sol.iterate.gamma,
        ipm_iterations: sol.ipm_iterations,
        krylov_iterations: sol.trace.total_krylov_iterations(),
        x_original: None,
        x_standard: x_std,
        trace: sol.trace,
        standard_m: p.nrows(),
        standard_n: p.ncols(),
        failure: sol.failure,
    })
}

/// Solves a parsed problem: standardize, compact, run, recover.
pub fn solve_problem(p: &LpProblem, cfg: &IpmConfig) -> Result<SolveOutcome> {
    let std_form = to_standard_form(p)?;
    let mut outcome = solve_standard_form(&std_form, cfg)?;
    let x_orig = recover_solution(&outcome.x_standard, &std_form.transform)?;
    outcome.objective = p.objective_value(&x_orig);
    outcome.x_original = Some(x_orig);
    Ok(outcome)
}

/// Reads an MPS file and solves it.
pub fn solve_mps_file<P: AsRef<Path>>(path: P, cfg: &IpmConfig) -> Result<SolveOutcome> {
    let problem = read_mps_path(path)?;
    solve_problem(&problem, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;
    use crate::standard::TransformRecord;

    #[test]
    fn zero_column_with_negative_cost_is_unbounded() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0]]);
        let p = StandardFormLp {
            name: "u".into(),
            a,
            b: DenseVector::from_vec(vec![1.0]),
            c: DenseVector::from_vec(vec![1.0, -1.0]),
            transform: TransformRecord::identity(2, 1),
        };
        assert!(matches!(
            solve_standard_form(&p, &IpmConfig::default()),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn zero_column_with_positive_cost_is_dropped() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0]]);
        let p = StandardFormLp {
            name: "d".into(),
            a,
            b: DenseVector::from_vec(vec![1.0]),
            c: DenseVector::from_vec(vec![1.0, 2.0]),
            transform: TransformRecord::identity(2, 1),
        };
        let out = solve_standard_form(&p, &IpmConfig::default()).unwrap();
        assert_eq!(out.status, IpmStatus::Optimal);
        assert_eq!(out.x_standard.len(), 2);
        assert_eq!(out.x_standard[1], 0.0);
        assert!((out.objective - 1.0).abs() <= 1e-6);
    }
}
