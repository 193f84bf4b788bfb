//! Matrix-free operator abstraction shared by the Krylov solvers and the
//! row-action inner iterations.

use crate::dense::DenseVector;
use crate::sparse::CsrMatrix;

/// A linear operator exposing both whole-matrix products and per-row
/// access. Row access is what the NE-SOR/NE-SSOR sweeps consume; the whole
/// products drive the Krylov recurrences.
///
/// Implementations must keep `row_dot`/`row_axpy` consistent with `apply`
/// and `apply_transpose`: applying row by row has to reproduce the full
/// products.
pub trait RowOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `y = A x`. Panics on dimension mismatch.
    fn apply(&self, x: &DenseVector) -> DenseVector;

    /// `x = A^T y`. Panics on dimension mismatch.
    fn apply_transpose(&self, y: &DenseVector) -> DenseVector;

    /// Inner product of row `i` with `x`.
    fn row_dot(&self, i: usize, x: &DenseVector) -> f64;

    /// `x += coeff * row_i`.
    fn row_axpy(&self, i: usize, coeff: f64, x: &mut DenseVector);

    /// Squared Euclidean norm of row `i`; zero flags a row the sweeps skip.
    fn row_norm_sq(&self, i: usize) -> f64;
}

impl RowOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        CsrMatrix::nrows(self)
    }

    fn ncols(&self) -> usize {
        CsrMatrix::ncols(self)
    }

    fn apply(&self, x: &DenseVector) -> DenseVector {
        assert_eq!(x.len(), CsrMatrix::ncols(self), "apply length mismatch");
        let mut y = DenseVector::zeros(CsrMatrix::nrows(self));
        self.matvec_into(x, &mut y);
        y
    }

    fn apply_transpose(&self, y: &DenseVector) -> DenseVector {
        assert_eq!(
            y.len(),
            CsrMatrix::nrows(self),
            "apply_transpose length mismatch"
        );
        let mut x = DenseVector::zeros(CsrMatrix::ncols(self));
        self.matvec_transpose_into(y, &mut x);
        x
    }

    fn row_dot(&self, i: usize, x: &DenseVector) -> f64 {
        self.row_dot_unchecked(i, x)
    }

    fn row_axpy(&self, i: usize, coeff: f64, x: &mut DenseVector) {
        self.row_axpy_unchecked(i, coeff, x)
    }

    fn row_norm_sq(&self, i: usize) -> f64 {
        CsrMatrix::row_norm_sq(self, i)
    }
}

/// Left diagonal scaling `D^{-1} A` of another operator, stored as the
/// inverse diagonal. Rows with `dinv == 0` act as zero rows.
pub struct RowScaled<'a, O: RowOperator> {
    inner: &'a O,
    dinv: Vec<f64>,
}

impl<'a, O: RowOperator> RowScaled<'a, O> {
    /// Scale by the inverse of the given positive diagonal `d`.
    pub fn new(inner: &'a O, d: &[f64]) -> Self {
        assert_eq!(d.len(), inner.nrows(), "diagonal length mismatch");
        let dinv = d
            .iter()
            .map(|&v| {
                assert!(v > 0.0, "scaling diagonal must be positive");
                1.0 / v
            })
            .collect();
        RowScaled { inner, dinv }
    }

    /// Scale rows to unit norm; zero rows keep `dinv = 0` and stay zero.
    pub fn by_row_norms(inner: &'a O) -> Self {
        let dinv = (0..inner.nrows())
            .map(|i| {
                let ns = inner.row_norm_sq(i);
                if ns > 0.0 {
                    1.0 / ns.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        RowScaled { inner, dinv }
    }

    pub fn dinv(&self) -> &[f64] {
        &self.dinv
    }

    /// Applies the row scaling to an m-vector: `out_i = dinv_i * v_i`.
    pub fn scale_rhs(&self, v: &DenseVector) -> DenseVector {
        assert_eq!(v.len(), self.dinv.len());
        v.iter().zip(&self.dinv).map(|(a, b)| a * b).collect()
    }
}

impl<O: RowOperator> RowOperator for RowScaled<'_, O> {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    fn apply(&self, x: &DenseVector) -> DenseVector {
        let mut y = self.inner.apply(x);
        for (v, d) in y.iter_mut().zip(&self.dinv) {
            *v *= d;
        }
        y
    }

    fn apply_transpose(&self, y: &DenseVector) -> DenseVector {
        let scaled = self.scale_rhs(y);
        self.inner.apply_transpose(&scaled)
    }

    fn row_dot(&self, i: usize, x: &DenseVector) -> f64 {
        self.dinv[i] * self.inner.row_dot(i, x)
    }

    fn row_axpy(&self, i: usize, coeff: f64, x: &mut DenseVector) {
        self.inner.row_axpy(i, coeff * self.dinv[i], x);
    }

    fn row_norm_sq(&self, i: usize) -> f64 {
        self.dinv[i] * self.dinv[i] * self.inner.row_norm_sq(i)
    }
}
