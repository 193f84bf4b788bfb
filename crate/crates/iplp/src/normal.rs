//! Per-step assembly of the implicit scaled operator for the condensed
//! normal equations, right-hand sides for the predictor and corrector
//! stages, and the back-substitutions recovering the full step.
//!
//! With `D = diag(sqrt(x_j/s_j))` the step operator is `A D` left-scaled by
//! its own row norms, giving unit row norms so the inner sweeps never
//! divide by a freshly computed norm. Nothing is materialized: applications
//! stream over the rows of `A`.

use crate::dense::DenseVector;
use crate::error::Error;
use crate::operator::RowOperator;
use crate::sparse::CsrMatrix;
use crate::Result;

/// Clamp for the diagonal ratios x/s before the square root, guarding
/// against overflow near convergence.
const DIAG_CLAMP_MIN: f64 = 1e-128;
const DIAG_CLAMP_MAX: f64 = 1e128;

/// The implicit row-scaled step operator, stored as the constraint matrix
/// plus two diagonals.
pub struct ScaledSystem<'a> {
    a: &'a CsrMatrix,
    /// Column scaling `d_j = sqrt(x_j / s_j)` (clamped).
    d: DenseVector,
    /// Row norms of `A D`; the row scaling diagonal.
    rho: DenseVector,
    /// `1 / rho`, with zero flagging structurally zero rows.
    rho_inv: Vec<f64>,
    /// Number of ratio clamps that fired while building `d`.
    clamp_count: usize,
}

/// Builds the scaled operator for the current strictly interior iterate.
pub fn build_scaled_system<'a>(
    a: &'a CsrMatrix,
    x: &DenseVector,
    s: &DenseVector,
) -> Result<ScaledSystem<'a>> {
    if x.len() != a.ncols() || s.len() != a.ncols() {
        return Err(Error::DimensionMismatch {
            context: "scaled system build",
            expected: a.ncols(),
            found: x.len().min(s.len()),
        });
    }
    let mut clamp_count = 0usize;
    let mut d = DenseVector::zeros(a.ncols());
    for j in 0..a.ncols() {
        if !(x[j] > 0.0) || !(s[j] > 0.0) {
            return Err(Error::LeftInterior(format!(
                "nonpositive entry at column {j}: x = {}, s = {}",
                x[j], s[j]
            )));
        }
        let mut ratio = x[j] / s[j];
        if ratio < DIAG_CLAMP_MIN {
            ratio = DIAG_CLAMP_MIN;
            clamp_count += 1;
        } else if ratio > DIAG_CLAMP_MAX {
            ratio = DIAG_CLAMP_MAX;
            clamp_count += 1;
        }
        d[j] = ratio.sqrt();
    }

    let mut rho = DenseVector::zeros(a.nrows());
    let mut rho_inv = vec![0.0; a.nrows()];
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        let mut acc = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            let t = v * d[j];
            acc += t * t;
        }
        rho[i] = acc.sqrt();
        if rho[i] > 0.0 {
            rho_inv[i] = 1.0 / rho[i];
        }
    }

    Ok(ScaledSystem {
        a,
        d,
        rho,
        rho_inv,
        clamp_count,
    })
}

impl<'a> ScaledSystem<'a> {
    pub fn matrix(&self) -> &'a CsrMatrix {
        self.a
    }

    pub fn column_scaling(&self) -> &DenseVector {
        &self.d
    }

    pub fn row_scaling(&self) -> &DenseVector {
        &self.rho
    }

    pub fn clamp_count(&self) -> usize {
        self.clamp_count
    }

    pub fn has_zero_rows(&self) -> bool {
        self.rho_inv.iter().any(|&v| v == 0.0)
    }

    /// Maps the m-space iterate of the scaled system back to the dual step.
    pub fn unscale_dual(&self, y_scaled: &DenseVector) -> DenseVector {
        assert_eq!(y_scaled.len(), self.a.nrows());
        y_scaled
            .iter()
            .zip(&self.rho_inv)
            .map(|(v, r)| v * r)
            .collect()
    }

    /// Right-hand side of the predictor stage: the primal target plus the
    /// dual-residual feedthrough, row-scaled.
    pub fn predictor_rhs(&self, b: &DenseVector, r_d: &DenseVector) -> Result<DenseVector> {
        if b.len() != self.a.nrows() {
            return Err(Error::DimensionMismatch {
                context: "predictor rhs b",
                expected: self.a.nrows(),
                found: b.len(),
            });
        }
        if r_d.len() != self.a.ncols() {
            return Err(Error::DimensionMismatch {
                context: "predictor rhs r_d",
                expected: self.a.ncols(),
                found: r_d.len(),
            });
        }
        let t: DenseVector = self
            .d
            .iter()
            .zip(r_d.iter())
            .map(|(dj, rj)| dj * dj * rj)
            .collect();
        let at = self.a.matvec(&t)?;
        Ok(b
            .iter()
            .zip(at.iter())
            .zip(&self.rho_inv)
            .map(|((bi, ati), ri)| (bi + ati) * ri)
            .collect())
    }

    /// Right-hand side of the corrector stage from the affine step and the
    /// centering term, row-scaled.
    pub fn corrector_rhs(
        &self,
        dx_af: &DenseVector,
        ds_af: &DenseVector,
        sigma: f64,
        mu: f64,
        s: &DenseVector,
    ) -> Result<DenseVector> {
        let n = self.a.ncols();
        if dx_af.len() != n || ds_af.len() != n || s.len() != n {
            return Err(Error::DimensionMismatch {
                context: "corrector rhs",
                expected: n,
                found: dx_af.len().min(ds_af.len()).min(s.len()),
            });
        }
        let t: DenseVector = (0..n)
            .map(|j| (dx_af[j] * ds_af[j] - sigma * mu) / s[j])
            .collect();
        let at = self.a.matvec(&t)?;
        Ok(at
            .iter()
            .zip(&self.rho_inv)
            .map(|(v, r)| v * r)
            .collect())
    }

    /// Back-substitution for the affine direction, saving a transpose
    /// product relative to recomputing from the dual step.
    pub fn recover_predictor(
        &self,
        w_af: &DenseVector,
        r_d: &DenseVector,
        x: &DenseVector,
    ) -> Result<(DenseVector, DenseVector)> {
        let n = self.a.ncols();
        if w_af.len() != n || r_d.len() != n || x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "recover predictor",
                expected: n,
                found: w_af.len().min(r_d.len()).min(x.len()),
            });
        }
        let mut ds = DenseVector::zeros(n);
        let mut dx = DenseVector::zeros(n);
        for j in 0..n {
            ds[j] = r_d[j] - w_af[j] / self.d[j];
            dx[j] = -self.d[j] * self.d[j] * ds[j] - x[j];
        }
        Ok((dx, ds))
    }

    /// Back-substitution for the corrector direction.
    pub fn recover_corrector(
        &self,
        w_cc: &DenseVector,
        dx_af: &DenseVector,
        ds_af: &DenseVector,
        sigma: f64,
        mu: f64,
        s: &DenseVector,
    ) -> Result<(DenseVector, DenseVector)> {
        let n = self.a.ncols();
        if w_cc.len() != n || dx_af.len() != n || ds_af.len() != n || s.len() != n {
            return Err(Error::DimensionMismatch {
                context: "recover corrector",
                expected: n,
                found: w_cc.len().min(dx_af.len()).min(ds_af.len()).min(s.len()),
            });
        }
        let mut ds = DenseVector::zeros(n);
        let mut dx = DenseVector::zeros(n);
        for j in 0..n {
            ds[j] = -w_cc[j] / self.d[j];
            dx[j] =
                -self.d[j] * self.d[j] * ds[j] - dx_af[j] * ds_af[j] / s[j] + sigma * mu / s[j];
        }
        Ok((dx, ds))
    }
}

impl RowOperator for ScaledSystem<'_> {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }

    fn ncols(&self) -> usize {
        self.a.ncols()
    }

    fn apply(&self, v: &DenseVector) -> DenseVector {
        assert_eq!(v.len(), self.a.ncols());
        let t: DenseVector = self.d.iter().zip(v.iter()).map(|(d, x)| d * x).collect();
        let mut y = self.a.matvec(&t).expect("dims checked");
        for (yi, ri) in y.iter_mut().zip(&self.rho_inv) {
            *yi *= ri;
        }
        y
    }

    fn apply_transpose(&self, y: &DenseVector) -> DenseVector {
        assert_eq!(y.len(), self.a.nrows());
        let t: DenseVector = y.iter().zip(&self.rho_inv).map(|(v, r)| v * r).collect();
        let mut u = self.a.matvec_transpose(&t).expect("dims checked");
        for (uj, dj) in u.iter_mut().zip(self.d.iter()) {
            *uj *= dj;
        }
        u
    }

    fn row_dot(&self, i: usize, v: &DenseVector) -> f64 {
        let (cols, vals) = self.a.row(i);
        let vs = v.as_slice();
        let ds = self.d.as_slice();
        let mut acc = 0.0;
        for (&j, &a) in cols.iter().zip(vals) {
            acc += a * ds[j] * vs[j];
        }
        acc * self.rho_inv[i]
    }

    fn row_axpy(&self, i: usize, coeff: f64, v: &mut DenseVector) {
        let (cols, vals) = self.a.row(i);
        let c = coeff * self.rho_inv[i];
        let vs = v.as_mut_slice();
        let ds = self.d.as_slice();
        for (&j, &a) in cols.iter().zip(vals) {
            vs[j] += c * a * ds[j];
        }
    }

    fn row_norm_sq(&self, i: usize) -> f64 {
        // Rows are scaled by their own norms; unit by construction.
        if self.rho_inv[i] > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}
