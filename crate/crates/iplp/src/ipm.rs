//! Infeasible primal-dual predictor-corrector interior-point loop.
//!
//! Each step builds the implicit scaled operator from the current iterate,
//! solves the condensed normal equations twice (affine probe, then
//! corrector) with the configured least-squares engine, recovers the full
//! direction by back-substitution, and takes damped step lengths guarded by
//! a centrality backtrack. The inner solve tolerance follows the outer
//! error measure: loose early, tight late.

use std::time::Instant;

use crate::dense::DenseVector;
use crate::error::Error;
use crate::krylov::{self, KrylovConfig, KrylovOutput, SolveReport};
use crate::ldlt::{ldlt_drop_factor, ldlt_drop_solve, SymmetricDense};
use crate::normal::{build_scaled_system, ScaledSystem};
use crate::operator::{RowOperator, RowScaled};
use crate::inner::RowWorkspace;

use crate::standard::StandardFormLp;
use crate::Result;

/// Strictly interior primal-dual point.
#[derive(Clone, Debug)]
pub struct Iterate {
    pub x: DenseVector,
    pub y: DenseVector,
    pub s: DenseVector,
    /// Duality measure `x^T s / n`.
    pub mu: f64,
    /// Outer error measure at this point.
    pub gamma: f64,
}

impl Iterate {
    fn measure(x: &DenseVector, y: &DenseVector, s: &DenseVector, p: &StandardFormLp) -> (f64, f64) {
        let n = x.len() as f64;
        let mu = x.dot(s) / n;
        let gamma = error_measure_parts(x, y, s, p).3;
        (mu, gamma)
    }

    pub fn new(x: DenseVector, y: DenseVector, s: DenseVector, p: &StandardFormLp) -> Self {
        let (mu, gamma) = Iterate::measure(&x, &y, &s, p);
        Iterate { x, y, s, mu, gamma }
    }

    pub fn is_interior(&self) -> bool {
        self.x.iter().all(|&v| v > 0.0) && self.s.iter().all(|&v| v > 0.0)
    }
}

/// How the Newton step systems are solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepSolverKind {
    Krylov,
    /// Dense modified-LDLT baseline; forms the normal-equations matrix
    /// explicitly. Desk scale only.
    DirectLdlt,
}

#[derive(Clone, Debug)]
pub struct IpmConfig {
    /// Outer stopping tolerance on the error measure.
    pub eps_out: f64,
    pub max_ipm_iter: usize,
    /// Step-length damping factor, in [0.9, 1).
    pub eta: f64,
    /// Centrality floor multiplier.
    pub phi: f64,
    /// Cap on the centering parameter.
    pub sigma_cap: f64,
    pub eps_in_init: f64,
    pub eps_in_min: f64,
    pub eps_in_max: f64,
    pub eps_in_shrink_early: f64,
    pub eps_in_shrink_late: f64,
    pub eps_in_relax: f64,
    /// Error-measure threshold separating the early and late phases.
    pub late_phase_gamma: f64,
    /// Inner solver settings; `max_iter == 0` means the row count.
    pub krylov: KrylovConfig,
    pub step_solver: StepSolverKind,
    /// Pivot dropping tolerance for the direct baseline.
    pub ldlt_drop_tol: f64,
    /// Per-solve iteration cap as a multiple of the row count, used when
    /// `krylov.max_iter == 0`. The symmetric short-recurrence methods need
    /// headroom beyond one sweep of the space on hard problems.
    pub krylov_max_iter_factor: f64,
    /// Balance-guard ratio: steps are cut while they would drive the
    /// duality measure below this fraction of the residual error. Zero
    /// disables the guard.
    pub balance_ratio: f64,
    /// When false, the inner tolerance stays pinned at `eps_in_init`.
    pub adaptive_eps_in: bool,
    /// Record relative Newton block residuals of each accepted direction
    /// in the trace (costs a few extra products per step).
    pub record_newton_residuals: bool,
}

impl Default for IpmConfig {
    fn default() -> Self {
        IpmConfig {
            eps_out: 1e-8,
            max_ipm_iter: 99,
            eta: 0.9995,
            phi: 1e-5,
            sigma_cap: 0.208,
            eps_in_init: 1e-6,
            eps_in_min: 1e-14,
            eps_in_max: 1e-4,
            eps_in_shrink_early: 0.75,
            eps_in_shrink_late: 0.375,
            eps_in_relax: 1.5,
            late_phase_gamma: 1e-3,
            krylov: KrylovConfig::default(),
            step_solver: StepSolverKind::Krylov,
            ldlt_drop_tol: 1e-16,
            krylov_max_iter_factor: 1.0,
            balance_ratio: 1e-2,
            adaptive_eps_in: true,
            record_newton_residuals: false,
        }
    }
}

impl IpmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.9 && self.eta < 1.0) {
            return Err(Error::Config(format!(
                "step damping must lie in [0.9, 1), got {}",
                self.eta
            )));
        }
        if !(self.sigma_cap >= 0.0 && self.sigma_cap < 1.0) {
            return Err(Error::Config(format!(
                "centering cap must lie in [0, 1), got {}",
                self.sigma_cap
            )));
        }
        if self.eps_out <= 0.0 {
            return Err(Error::Config("outer tolerance must be positive".into()));
        }
        if self.step_solver == StepSolverKind::Krylov {
            let mut k = self.krylov;
            k.tol = self.eps_in_init;
            k.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpmStatus {
    Optimal,
    IterationLimit,
    NumericalFailure,
}

impl IpmStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            IpmStatus::Optimal => "Optimal",
            IpmStatus::IterationLimit => "IterationLimit",
            IpmStatus::NumericalFailure => "NumericalFailure",
        }
    }
}

/// One row of the convergence trace.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub step: usize,
    pub mu: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub alpha_p: f64,
    pub alpha_d: f64,
    pub eps_in: f64,
    pub predictor: SolveReport,
    pub corrector: Option<SolveReport>,
    pub wall_ms: f64,
    /// Largest relative Newton block residual of the accepted direction,
    /// when recording is enabled.
    pub newton_residual: Option<f64>,
    /// Set when the centrality backtrack exhausted its trials.
    pub centrality_fallback: bool,
}

/// Append-only per-step diagnostics.
#[derive(Clone, Debug, Default)]
pub struct ConvergenceTrace {
    pub steps: Vec<TraceStep>,
}

impl ConvergenceTrace {
    pub fn total_krylov_iterations(&self) -> usize {
        self.steps
            .iter()
            .map(|s| {
                s.predictor.iterations + s.corrector.as_ref().map_or(0, |c| c.iterations)
            })
            .sum()
    }

    /// Numerical content equality, ignoring wall-clock fields.
    pub fn same_numbers(&self, other: &ConvergenceTrace) -> bool {
        self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|(a, b)| {
                a.step == b.step
                    && a.mu.to_bits() == b.mu.to_bits()
                    && a.gamma.to_bits() == b.gamma.to_bits()
                    && a.sigma.to_bits() == b.sigma.to_bits()
                    && a.alpha_p.to_bits() == b.alpha_p.to_bits()
                    && a.alpha_d.to_bits() == b.alpha_d.to_bits()
                    && a.eps_in.to_bits() == b.eps_in.to_bits()
                    && a.predictor.iterations == b.predictor.iterations
                    && a.corrector.as_ref().map(|c| c.iterations)
                        == b.corrector.as_ref().map(|c| c.iterations)
            })
    }
}

/// Outcome of [`solve`].
#[derive(Clone, Debug)]
pub struct IpmSolution {
    pub status: IpmStatus,
    pub iterate: Iterate,
    pub trace: ConvergenceTrace,
    pub ipm_iterations: usize,
    /// Message attached to a numerical failure.
    pub failure: Option<String>,
}

/// Error measure pieces: primal residual norm, dual residual norm, and the
/// max-based measure itself (scaled by the data norms).
fn error_measure_parts(
    x: &DenseVector,
    y: &DenseVector,
    s: &DenseVector,
    p: &StandardFormLp,
) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mu = x.dot(s) / n;
    let ax = p.a.matvec(x).expect("dims");
    let rp: f64 = p
        .b
        .iter()
        .zip(ax.iter())
        .map(|(b, a)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let aty = p.a.matvec_transpose(y).expect("dims");
    let rd: f64 = p
        .c
        .iter()
        .zip(s.iter())
        .zip(aty.iter())
        .map(|((c, s), a)| {
            let v = c - s - a;
            v * v
        })
        .sum::<f64>()
        .sqrt();
    let gamma = mu
        .max(rp / p.b.norm2().max(1.0))
        .max(rd / p.c.norm2().max(1.0));
    (mu, rp, rd, gamma)
}

/// The outer error measure: the max of the duality measure and the scaled
/// primal and dual residual norms.
pub fn error_measure(it: &Iterate, p: &StandardFormLp) -> f64 {
    error_measure_parts(&it.x, &it.y, &it.s, p).3
}

/// Damped ratio test: the largest fraction of the full step that keeps
/// every component strictly positive, times `eta`, capped at `eta`.
pub fn step_lengths(
    x: &DenseVector,
    dx: &DenseVector,
    s: &DenseVector,
    ds: &DenseVector,
    eta: f64,
) -> (f64, f64) {
    let ratio = |v: &DenseVector, dv: &DenseVector| -> f64 {
        let mut m = 1.0f64;
        for (vi, di) in v.iter().zip(dv.iter()) {
            if *di < 0.0 {
                m = m.min(-vi / di);
            }
        }
        m
    };
    (eta * ratio(x, dx), eta * ratio(s, ds))
}

/// Centering parameter: the affine progress rule early, roughly ten times
/// the error measure late, both capped.
pub fn choose_sigma(mu: f64, mu_af: f64, gamma: f64, cfg: &IpmConfig) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    if gamma > cfg.late_phase_gamma {
        let r = mu_af / mu;
        cfg.sigma_cap.min(r * r)
    } else {
        cfg.sigma_cap.min(10.0 * gamma)
    }
}

/// Geometric backtracking on both step lengths jointly until the smallest
/// pairwise product clears the centrality floor. Returns the accepted pair
/// and whether a satisfying pair was found.
pub fn centrality_backtrack(
    x: &DenseVector,
    s: &DenseVector,
    dx: &DenseVector,
    ds: &DenseVector,
    alpha_p: f64,
    alpha_d: f64,
    phi: f64,
) -> (f64, f64, bool) {
    const SHRINK: f64 = 0.95;
    const MAX_TRIALS: usize = 40;
    let n = x.len() as f64;
    let mut ap = alpha_p;
    let mut ad = alpha_d;
    for _ in 0..MAX_TRIALS {
        let mut min_prod = f64::INFINITY;
        let mut total = 0.0;
        for j in 0..x.len() {
            let prod = (x[j] + ap * dx[j]) * (s[j] + ad * ds[j]);
            min_prod = min_prod.min(prod);
            total += prod;
        }
        if min_prod >= phi * total / n {
            return (ap, ad, true);
        }
        ap *= SHRINK;
        ad *= SHRINK;
    }
    (ap, ad, false)
}

/// Inner-tolerance schedule: relax after a failed solve, shrink by the
/// phase factor, clamp into the configured window.
pub fn adapt_inner_tolerance(
    eps_in: f64,
    gamma: f64,
    last_solve_converged: bool,
    cfg: &IpmConfig,
) -> f64 {
    let mut e = eps_in;
    if !last_solve_converged {
        e *= cfg.eps_in_relax;
    }
    let lg = gamma.log10();
    if lg <= -3.0 {
        e *= cfg.eps_in_shrink_late;
    } else if lg <= 1.0 {
        e *= cfg.eps_in_shrink_early;
    }
    e.clamp(cfg.eps_in_min, cfg.eps_in_max)
}

/// Starting point: damped least-squares estimates of the primal and dual
/// variables, shifted into the strict interior.
pub fn initial_point(p: &StandardFormLp, cfg: &IpmConfig) -> Result<Iterate> {
    let m = p.nrows();
    let n = p.ncols();

    // Least-squares targets computed on the row-norm scaled matrix with the
    // general-purpose engine; modest accuracy is plenty here.
    let scaled = RowScaled::by_row_norms(&p.a);
    let ws = RowWorkspace::for_operator(&scaled);
    let kcfg = KrylovConfig {
        method: crate::krylov::KrylovMethod::AbGmres,
        tol: 1e-8,
        max_iter: m,
        inner: cfg.krylov.inner,
    };

    // Min-norm solution of A x = b.
    let fb = scaled.scale_rhs(&p.b);
    let x_hat = krylov::ab_gmres_solve(&scaled, &fb, &kcfg, &ws).w;

    // Dual estimate: least-squares y for A^T y ~ c through the consistent
    // system on A c; the matching s is c minus the row-space part of c.
    let ac = p.a.matvec(&p.c)?;
    let fc = scaled.scale_rhs(&ac);
    let out = krylov::ab_gmres_solve(&scaled, &fc, &kcfg, &ws);
    let proj_c = out.w; // projection of c onto the row space
    let y_hat: DenseVector = out
        .y
        .iter()
        .zip(scaled.dinv())
        .map(|(v, d)| v * d)
        .collect();
    let s_hat: DenseVector = p
        .c
        .iter()
        .zip(proj_c.iter())
        .map(|(c, w)| c - w)
        .collect();

    // Shift into the interior.
    let dx0 = (-1.5 * x_hat.min()).max(0.0);
    let ds0 = (-1.5 * s_hat.min()).max(0.0);
    let xt: DenseVector = x_hat.iter().map(|v| v + dx0).collect();
    let st: DenseVector = s_hat.iter().map(|v| v + ds0).collect();
    let cross = xt.dot(&st);
    let sum_s = st.sum();
    let sum_x = xt.sum();
    let dx = (dx0 + if sum_s > 0.0 { 0.5 * cross / sum_s } else { 0.0 }).max(1.0);
    let ds = (ds0 + if sum_x > 0.0 { 0.5 * cross / sum_x } else { 0.0 }).max(1.0);

    let x0: DenseVector = x_hat.iter().map(|v| v + dx).collect();
    let s0: DenseVector = s_hat.iter().map(|v| v + ds).collect();
    debug_assert!(x0.iter().all(|&v| v > 0.0));
    debug_assert!(s0.iter().all(|&v| v > 0.0));
    debug_assert_eq!(x0.len(), n);
    Ok(Iterate::new(x0, y_hat, s0, p))
}

struct StepSolve {
    w: DenseVector,
    dy: DenseVector,
    report: SolveReport,
}

fn solve_step(
    sys: &ScaledSystem<'_>,
    ws: &RowWorkspace,
    f: &DenseVector,
    cfg: &IpmConfig,
    eps_in: f64,
    dense_sys: Option<&SymmetricDense>,
) -> Result<StepSolve> {
    match cfg.step_solver {
        StepSolverKind::Krylov => {
            let m = sys.nrows();
            let kcfg = KrylovConfig {
                tol: eps_in,
                max_iter: if cfg.krylov.max_iter == 0 {
                    ((m as f64) * cfg.krylov_max_iter_factor).ceil().max(1.0) as usize
                } else {
                    cfg.krylov.max_iter
                },
                ..cfg.krylov
            };
            let KrylovOutput { w, y, report } = krylov::solve(sys, f, &kcfg, ws)?;
            let dy = sys.unscale_dual(&y);
            Ok(StepSolve { w, dy, report })
        }
        StepSolverKind::DirectLdlt => {
            let dense = dense_sys.expect("dense system assembled for direct solves");
            let fac = ldlt_drop_factor(dense, cfg.ldlt_drop_tol)?;
            let y_scaled = ldlt_drop_solve(&fac, f)?;
            let w = sys.apply_transpose(&y_scaled);
            let aw = sys.apply(&w);
            let res: f64 = f
                .iter()
                .zip(aw.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let norm_f = f.norm2();
            let rel = if norm_f > 0.0 { res / norm_f } else { 0.0 };
            let dy = sys.unscale_dual(&y_scaled);
            Ok(StepSolve {
                w,
                dy,
                report: SolveReport {
                    iterations: 0,
                    relative_residual: rel,
                    converged: true,
                    breakdown: false,
                    mv_count: 3,
                    residual_history: vec![rel],
                },
            })
        }
    }
}

/// Assembles the scaled normal-equations matrix densely for the direct
/// baseline. The only place the product is ever materialized.
fn assemble_dense_normal(sys: &ScaledSystem<'_>) -> SymmetricDense {
    let m = sys.nrows();
    let n = sys.ncols();
    let mut rows: Vec<DenseVector> = Vec::with_capacity(m);
    for i in 0..m {
        let mut r = DenseVector::zeros(n);
        sys.row_axpy(i, 1.0, &mut r);
        rows.push(r);
    }
    let mut out = SymmetricDense::zeros(m);
    for i in 0..m {
        for k in 0..=i {
            let v = rows[i].dot(&rows[k]);
            out.set(i, k, v);
            out.set(k, i, v);
        }
    }
    out
}

/// Largest relative residual of the Newton block equations at the given
/// direction, against the stacked right-hand side norm.
#[allow(clippy::too_many_arguments)]
fn newton_block_residual(
    p: &StandardFormLp,
    x: &DenseVector,
    s: &DenseVector,
    r_d: &DenseVector,
    r_p: &DenseVector,
    rc: &DenseVector,
    dx: &DenseVector,
    dy: &DenseVector,
    ds: &DenseVector,
) -> f64 {
    let aty = p.a.matvec_transpose(dy).expect("dims");
    let block1: f64 = aty
        .iter()
        .zip(ds.iter())
        .zip(r_d.iter())
        .map(|((a, d), r)| {
            let v = a + d - r;
            v * v
        })
        .sum::<f64>()
        .sqrt();
    let adx = p.a.matvec(dx).expect("dims");
    let block2: f64 = adx
        .iter()
        .zip(r_p.iter())
        .map(|(a, r)| (a - r) * (a - r))
        .sum::<f64>()
        .sqrt();
    let block3: f64 = (0..x.len())
        .map(|j| {
            let v = s[j] * dx[j] + x[j] * ds[j] - rc[j];
            v * v
        })
        .sum::<f64>()
        .sqrt();
    let rhs_norm = (r_d.dot(r_d) + r_p.dot(r_p) + rc.dot(rc)).sqrt();
    block1.max(block2).max(block3) / rhs_norm.max(1e-300)
}

/// Runs the interior-point loop on a standard-form problem. The problem
/// must be free of structurally zero rows and columns (run the zero
/// compaction first).
pub fn solve(p: &StandardFormLp, cfg: &IpmConfig) -> Result<IpmSolution> {
    cfg.validate()?;
    let m = p.nrows();
    let n = p.ncols();
    if p.b.len() != m || p.c.len() != n {
        return Err(Error::DimensionMismatch {
            context: "ipm problem data",
            expected: m,
            found: p.b.len(),
        });
    }
    for i in 0..m {
        if p.a.row_nnz(i) == 0 {
            return Err(Error::Config(format!(
                "row {i} is structurally zero; compact the problem first"
            )));
        }
    }

    let mut it = initial_point(p, cfg)?;
    let mut eps_in = cfg.eps_in_init.clamp(cfg.eps_in_min, cfg.eps_in_max);
    let mut prev_converged = true;
    let mut trace = ConvergenceTrace::default();

    let fail = |message: String, it: Iterate, trace: ConvergenceTrace, k: usize| IpmSolution {
        status: IpmStatus::NumericalFailure,
        iterate: it,
        trace,
        ipm_iterations: k,
        failure: Some(message),
    };

    for k in 0..=cfg.max_ipm_iter {
        if it.gamma <= cfg.eps_out {
            return Ok(IpmSolution {
                status: IpmStatus::Optimal,
                iterate: it,
                trace,
                ipm_iterations: k,
                failure: None,
            });
        }
        if k == cfg.max_ipm_iter {
            break;
        }
        let t0 = Instant::now();

        if cfg.adaptive_eps_in && k > 0 {
            eps_in = adapt_inner_tolerance(eps_in, it.gamma, prev_converged, cfg);
        }

        let sys = match build_scaled_system(&p.a, &it.x, &it.s) {
            Ok(s) => s,
            Err(e) => return Ok(fail(e.to_string(), it, trace, k)),
        };
        let ws = RowWorkspace::for_operator(&sys);
        let dense_sys = (cfg.step_solver == StepSolverKind::DirectLdlt)
            .then(|| assemble_dense_normal(&sys));

        // Residuals of the current iterate.
        let ax = p.a.matvec(&it.x)?;
        let r_p: DenseVector = p.b.iter().zip(ax.iter()).map(|(b, a)| b - a).collect();
        let aty = p.a.matvec_transpose(&it.y)?;
        let r_d: DenseVector = p
            .c
            .iter()
            .zip(it.s.iter())
            .zip(aty.iter())
            .map(|((c, s), a)| c - s - a)
            .collect();

        // Predictor stage.
        let f_af = sys.predictor_rhs(&p.b, &r_d)?;
        let af = match solve_step(&sys, &ws, &f_af, cfg, eps_in, dense_sys.as_ref()) {
            Ok(s) => s,
            Err(e) => return Ok(fail(format!("predictor solve: {e}"), it, trace, k)),
        };
        let (dx_af, ds_af) = sys.recover_predictor(&af.w, &r_d, &it.x)?;
        let (ap_af, ad_af) = step_lengths(&it.x, &dx_af, &it.s, &ds_af, cfg.eta);

        let mu = it.mu;
        let mut sigma = 0.0;
        let mut dx = dx_af;
        let mut ds = ds_af;
        let mut dy = af.dy;
        let mut corrector_report = None;
        let mut rc_combined: DenseVector = (0..n).map(|j| -it.x[j] * it.s[j]).collect();

        if ap_af.min(ad_af) < 1.0 {
            // Corrector stage with adaptive centering.
            let mu_af = (0..n)
                .map(|j| (it.x[j] + ap_af * dx[j]) * (it.s[j] + ad_af * ds[j]))
                .sum::<f64>()
                / n as f64;
            sigma = choose_sigma(mu, mu_af, it.gamma, cfg);
            let f_cc = sys.corrector_rhs(&dx, &ds, sigma, mu, &it.s)?;
            let cc = match solve_step(&sys, &ws, &f_cc, cfg, eps_in, dense_sys.as_ref()) {
                Ok(s) => s,
                Err(e) => return Ok(fail(format!("corrector solve: {e}"), it, trace, k)),
            };
            let (dx_cc, ds_cc) = sys.recover_corrector(&cc.w, &dx, &ds, sigma, mu, &it.s)?;
            for j in 0..n {
                rc_combined[j] += -dx[j] * ds[j] + sigma * mu;
            }
            dx.axpy(1.0, &dx_cc);
            ds.axpy(1.0, &ds_cc);
            dy.axpy(1.0, &cc.dy);
            corrector_report = Some(cc.report);
        }

        if !(dx.is_finite() && dy.is_finite() && ds.is_finite()) {
            return Ok(fail("non-finite direction".into(), it, trace, k));
        }

        let newton_residual = cfg.record_newton_residuals.then(|| {
            newton_block_residual(p, &it.x, &it.s, &r_d, &r_p, &rc_combined, &dx, &dy, &ds)
        });

        // Step lengths on the combined direction, then the centrality guard.
        let (tp, td) = step_lengths(&it.x, &dx, &it.s, &ds, cfg.eta);
        let (mut ahp, mut ahd, cent_ok) =
            centrality_backtrack(&it.x, &it.s, &dx, &ds, tp, td, cfg.phi);

        // Balance guard: with inexact step solves the feasibility residuals
        // bottom out at a noise floor tied to the inner tolerance, while
        // the diagonal spread grows like 1/sqrt(mu). A duality measure
        // running far below the residual scale amplifies that noise back
        // into the iterate, so steps that would land there are cut — but
        // never below a floor that keeps the residuals contracting.
        const BALANCE_ALPHA_FLOOR: f64 = 0.1;
        let gamma_res =
            (r_p.norm2() / p.b.norm2().max(1.0)).max(r_d.norm2() / p.c.norm2().max(1.0));
        if cfg.balance_ratio > 0.0 && gamma_res > 0.5 * cfg.eps_out {
            let target = cfg.balance_ratio * gamma_res;
            let mu_of = |ap: f64, ad: f64| {
                (0..n)
                    .map(|j| (it.x[j] + ap * dx[j]) * (it.s[j] + ad * ds[j]))
                    .sum::<f64>()
                    / n as f64
            };
            for _ in 0..60 {
                if mu_of(ahp, ahd) >= target || ahp.max(ahd) <= BALANCE_ALPHA_FLOOR {
                    break;
                }
                ahp *= 0.9;
                ahd *= 0.9;
            }
        }

        let mut x_next = it.x.clone();
        x_next.axpy(ahp, &dx);
        let mut y_next = it.y.clone();
        y_next.axpy(ahd, &dy);
        let mut s_next = it.s.clone();
        s_next.axpy(ahd, &ds);

        if x_next.iter().any(|&v| v <= 0.0) || s_next.iter().any(|&v| v <= 0.0) {
            return Ok(fail("iterate left the strict interior".into(), it, trace, k));
        }
        if !(x_next.is_finite() && y_next.is_finite() && s_next.is_finite()) {
            return Ok(fail("non-finite iterate".into(), it, trace, k));
        }

        prev_converged = af.report.converged
            && corrector_report.as_ref().is_none_or(|r| r.converged);

        trace.steps.push(TraceStep {
            step: k,
            mu,
            gamma: it.gamma,
            sigma,
            alpha_p: ahp,
            alpha_d: ahd,
            eps_in,
            predictor: af.report,
            corrector: corrector_report,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
            newton_residual,
            centrality_fallback: !cent_ok,
        });

        it = Iterate::new(x_next, y_next, s_next, p);
    }

    Ok(IpmSolution {
        status: IpmStatus::IterationLimit,
        iterate: it,
        trace,
        ipm_iterations: cfg.max_ipm_iter,
        failure: None,
    })
}
