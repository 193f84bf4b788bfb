//! Row-major sparse matrices and the kernels every solver layer consumes.
//!
//! Storage is CSR only: the NE-SOR/NE-SSOR sweeps walk rows, and column
//! access is realized by `matvec_transpose` over the same row storage,
//! never via a second transposed copy.

use std::io::Write;

use crate::dense::DenseVector;
use crate::error::Error;
use crate::Result;

/// Nonzero count below which the parallel kernels fall back to the
/// sequential path; the overhead is not worth it for desk-size rows.
#[cfg(feature = "parallel")]
const PAR_NNZ_THRESHOLD: usize = 1 << 15;
/// Fixed row chunking for the parallel kernels. Chunk boundaries depend on
/// the matrix only, so reductions run in a reproducible order regardless of
/// thread count.
#[cfg(feature = "parallel")]
const PAR_ROW_CHUNK: usize = 512;

/// Compressed sparse row matrix in canonical form: within each row the
/// column indices are strictly increasing and no stored value is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_starts: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from (row, col, value) triplets.
    ///
    /// Duplicate entries are summed and entries that cancel to exactly zero
    /// are dropped, so the result is always canonical.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= nrows {
                return Err(Error::RowIndexOutOfRange { index: r, nrows });
            }
            if c >= ncols {
                return Err(Error::ColIndexOutOfRange { index: c, ncols });
            }
        }

        // Bucket by row, then sort each row by column and merge duplicates.
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for &(r, c, v) in triplets {
            per_row[r].push((c, v));
        }

        let mut row_starts = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_starts.push(0);
        for row in &mut per_row {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let col = row[i].0;
                let mut sum = 0.0;
                while i < row.len() && row[i].0 == col {
                    sum += row[i].1;
                    i += 1;
                }
                if sum != 0.0 {
                    col_indices.push(col);
                    values.push(sum);
                }
            }
            row_starts.push(col_indices.len());
        }

        Ok(CsrMatrix {
            nrows,
            ncols,
            row_starts,
            col_indices,
            values,
        })
    }

    /// Dense test helper; zeros are dropped.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense input");
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        CsrMatrix::from_triplets(nrows, ncols, &triplets).expect("indices in range")
    }

    pub fn identity(n: usize) -> Self {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        CsrMatrix::from_triplets(n, n, &triplets).expect("indices in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_starts[i];
        let hi = self.row_starts[i + 1];
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_starts[i + 1] - self.row_starts[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out[i][j] = v;
            }
        }
        out
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "matvec input",
                expected: self.ncols,
                found: x.len(),
            });
        }
        let mut y = DenseVector::zeros(self.nrows);
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `x = A^T y`, computed from row-major storage without forming the
    /// transpose.
    pub fn matvec_transpose(&self, y: &DenseVector) -> Result<DenseVector> {
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                context: "matvec_transpose input",
                expected: self.nrows,
                found: y.len(),
            });
        }
        let mut x = DenseVector::zeros(self.ncols);
        self.matvec_transpose_into(y, &mut x);
        Ok(x)
    }

    pub(crate) fn matvec_into(&self, x: &DenseVector, y: &mut DenseVector) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        #[cfg(feature = "parallel")]
        {
            if self.nnz() > PAR_NNZ_THRESHOLD {
                kernels::matvec_par(self, x, y);
                return;
            }
        }
        kernels::matvec_seq(self, x, y);
    }

    pub(crate) fn matvec_transpose_into(&self, y: &DenseVector, x: &mut DenseVector) {
        debug_assert_eq!(y.len(), self.nrows);
        debug_assert_eq!(x.len(), self.ncols);
        #[cfg(feature = "parallel")]
        {
            if self.nnz() > PAR_NNZ_THRESHOLD {
                kernels::matvec_transpose_par(self, y, x);
                return;
            }
        }
        kernels::matvec_transpose_seq(self, y, x);
    }

    /// Inner product of row `i` with `x`, touching only the row's nonzeros.
    pub fn row_dot(&self, i: usize, x: &DenseVector) -> Result<f64> {
        if i >= self.nrows {
            return Err(Error::RowIndexOutOfRange {
                index: i,
                nrows: self.nrows,
            });
        }
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "row_dot input",
                expected: self.ncols,
                found: x.len(),
            });
        }
        Ok(self.row_dot_unchecked(i, x))
    }

    #[inline]
    pub(crate) fn row_dot_unchecked(&self, i: usize, x: &DenseVector) -> f64 {
        let (cols, vals) = self.row(i);
        let xs = x.as_slice();
        cols.iter().zip(vals).map(|(&j, &v)| v * xs[j]).sum()
    }

    /// `x += d * row_i`, touching only the row's nonzeros.
    pub fn row_axpy(&self, i: usize, d: f64, x: &mut DenseVector) -> Result<()> {
        if i >= self.nrows {
            return Err(Error::RowIndexOutOfRange {
                index: i,
                nrows: self.nrows,
            });
        }
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "row_axpy input",
                expected: self.ncols,
                found: x.len(),
            });
        }
        self.row_axpy_unchecked(i, d, x);
        Ok(())
    }

    #[inline]
    pub(crate) fn row_axpy_unchecked(&self, i: usize, d: f64, x: &mut DenseVector) {
        let (cols, vals) = self.row(i);
        let xs = x.as_mut_slice();
        for (&j, &v) in cols.iter().zip(vals) {
            xs[j] += d * v;
        }
    }

    /// Euclidean norm of each row.
    pub fn row_norms(&self) -> DenseVector {
        (0..self.nrows)
            .map(|i| {
                let (_, vals) = self.row(i);
                vals.iter().map(|v| v * v).sum::<f64>().sqrt()
            })
            .collect()
    }

    /// Squared Euclidean norm of row `i`.
    pub fn row_norm_sq(&self, i: usize) -> f64 {
        let (_, vals) = self.row(i);
        vals.iter().map(|v| v * v).sum()
    }

    /// Drops structurally zero rows and columns, returning the compacted
    /// problem data and a mapping that re-embeds solutions.
    ///
    /// A zero row with a nonzero right-hand side makes the system trivially
    /// infeasible and is reported as an error.
    pub fn remove_zero_rows_cols(
        &self,
        b: &DenseVector,
        c: &DenseVector,
    ) -> Result<(CsrMatrix, DenseVector, DenseVector, Compaction)> {
        if b.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                context: "remove_zero_rows_cols rhs",
                expected: self.nrows,
                found: b.len(),
            });
        }
        if c.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "remove_zero_rows_cols cost",
                expected: self.ncols,
                found: c.len(),
            });
        }

        let mut col_used = vec![false; self.ncols];
        for &j in &self.col_indices {
            col_used[j] = true;
        }

        let mut kept_rows = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            if self.row_nnz(i) > 0 {
                kept_rows.push(i);
            } else if b[i] != 0.0 {
                return Err(Error::Infeasible(format!(
                    "zero row {} has nonzero rhs {}",
                    i, b[i]
                )));
            }
        }
        let kept_cols: Vec<usize> = (0..self.ncols).filter(|&j| col_used[j]).collect();

        let map = Compaction {
            orig_nrows: self.nrows,
            orig_ncols: self.ncols,
            kept_rows,
            kept_cols,
        };

        if map.is_identity() {
            return Ok((self.clone(), b.clone(), c.clone(), map));
        }

        let mut col_new = vec![usize::MAX; self.ncols];
        for (new, &old) in map.kept_cols.iter().enumerate() {
            col_new[old] = new;
        }
        let mut triplets = Vec::with_capacity(self.nnz());
        for (new_i, &old_i) in map.kept_rows.iter().enumerate() {
            let (cols, vals) = self.row(old_i);
            for (&j, &v) in cols.iter().zip(vals) {
                triplets.push((new_i, col_new[j], v));
            }
        }
        let a = CsrMatrix::from_triplets(map.kept_rows.len(), map.kept_cols.len(), &triplets)?;
        let b2 = map.kept_rows.iter().map(|&i| b[i]).collect();
        let c2 = map.kept_cols.iter().map(|&j| c[j]).collect();
        Ok((a, b2, c2, map))
    }

    /// Debug dump in Matrix Market coordinate format.
    pub fn write_matrix_market<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
            }
        }
        Ok(())
    }
}

/// Index bookkeeping from [`CsrMatrix::remove_zero_rows_cols`].
#[derive(Clone, Debug, PartialEq)]
pub struct Compaction {
    pub orig_nrows: usize,
    pub orig_ncols: usize,
    pub kept_rows: Vec<usize>,
    pub kept_cols: Vec<usize>,
}

impl Compaction {
    pub fn is_identity(&self) -> bool {
        self.kept_rows.len() == self.orig_nrows && self.kept_cols.len() == self.orig_ncols
    }

    /// Re-embeds a compacted primal vector; removed columns get zero.
    pub fn embed_primal(&self, x: &DenseVector) -> DenseVector {
        assert_eq!(x.len(), self.kept_cols.len());
        let mut out = DenseVector::zeros(self.orig_ncols);
        for (k, &j) in self.kept_cols.iter().enumerate() {
            out[j] = x[k];
        }
        out
    }

    /// Re-embeds a compacted dual vector; removed rows get zero.
    pub fn embed_dual(&self, y: &DenseVector) -> DenseVector {
        assert_eq!(y.len(), self.kept_rows.len());
        let mut out = DenseVector::zeros(self.orig_nrows);
        for (k, &i) in self.kept_rows.iter().enumerate() {
            out[i] = y[k];
        }
        out
    }
}

/// Raw kernels. Exposed for the criterion benches that compare the
/// sequential and data-parallel paths; not part of the stable API.
#[doc(hidden)]
pub mod kernels {
    use super::*;

    pub fn matvec_seq(a: &CsrMatrix, x: &DenseVector, y: &mut DenseVector) {
        let xs = x.as_slice();
        for i in 0..a.nrows {
            let (cols, vals) = a.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * xs[j];
            }
            y[i] = acc;
        }
    }

    pub fn matvec_transpose_seq(a: &CsrMatrix, y: &DenseVector, x: &mut DenseVector) {
        x.fill(0.0);
        for i in 0..a.nrows {
            let yi = y[i];
            if yi != 0.0 {
                a.row_axpy_unchecked(i, yi, x);
            }
        }
    }

    #[cfg(feature = "parallel")]
    pub fn matvec_par(a: &CsrMatrix, x: &DenseVector, y: &mut DenseVector) {
        use rayon::prelude::*;
        let xs = x.as_slice();
        y.as_mut_slice()
            .par_chunks_mut(PAR_ROW_CHUNK)
            .enumerate()
            .for_each(|(chunk, ys)| {
                let base = chunk * PAR_ROW_CHUNK;
                for (k, out) in ys.iter_mut().enumerate() {
                    let (cols, vals) = a.row(base + k);
                    let mut acc = 0.0;
                    for (&j, &v) in cols.iter().zip(vals) {
                        acc += v * xs[j];
                    }
                    *out = acc;
                }
            });
    }

    /// Chunked scatter: each fixed row chunk accumulates into its own
    /// buffer and the buffers are summed in chunk order, so the result does
    /// not depend on scheduling.
    #[cfg(feature = "parallel")]
    pub fn matvec_transpose_par(a: &CsrMatrix, y: &DenseVector, x: &mut DenseVector) {
        use rayon::prelude::*;
        let nchunks = a.nrows.div_ceil(PAR_ROW_CHUNK);
        let partials: Vec<Vec<f64>> = (0..nchunks)
            .into_par_iter()
            .map(|chunk| {
                let lo = chunk * PAR_ROW_CHUNK;
                let hi = (lo + PAR_ROW_CHUNK).min(a.nrows);
                let mut buf = vec![0.0; a.ncols];
                for i in lo..hi {
                    let yi = y[i];
                    if yi != 0.0 {
                        let (cols, vals) = a.row(i);
                        for (&j, &v) in cols.iter().zip(vals) {
                            buf[j] += yi * v;
                        }
                    }
                }
                buf
            })
            .collect();
        x.fill(0.0);
        let xs = x.as_mut_slice();
        for buf in &partials {
            for (out, v) in xs.iter_mut().zip(buf) {
                *out += v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matvec(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn dense_matvec_t(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let ncols = rows[0].len();
        let mut out = vec![0.0; ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[j] += v * y[i];
            }
        }
        out
    }

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
        num / den
    }

    // Small deterministic pseudo-random stream for test matrices.
    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn random_dense(m: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut s = seed;
        (0..m)
            .map(|_| (0..n).map(|_| lcg(&mut s)).collect())
            .collect()
    }

    #[test]
    fn matvec_identity() {
        let a = CsrMatrix::identity(2);
        let x = DenseVector::from_vec(vec![3.0, -1.0]);
        assert_eq!(a.matvec(&x).unwrap().as_slice(), &[3.0, -1.0]);
    }

    #[test]
    fn matvec_small() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 3.0]]);
        let x = DenseVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(a.matvec(&x).unwrap().as_slice(), &[3.0, 3.0]);
    }

    #[test]
    fn matvec_matches_dense_oracle() {
        let rows = random_dense(5, 7, 42);
        let a = CsrMatrix::from_dense(&rows);
        let x: DenseVector = {
            let mut s = 7u64;
            (0..7).map(|_| lcg(&mut s)).collect()
        };
        let want = dense_matvec(&rows, &x);
        let got = a.matvec(&x).unwrap();
        assert!(rel_err(got.as_slice(), &want) < 1e-14);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let a = CsrMatrix::identity(2);
        let x = DenseVector::zeros(3);
        assert!(a.matvec(&x).is_err());
    }

    #[test]
    fn matvec_transpose_zero_matrix() {
        let a = CsrMatrix::from_triplets(2, 3, &[]).unwrap();
        let y = DenseVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(a.matvec_transpose(&y).unwrap().as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn matvec_transpose_small() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 3.0]]);
        let y = DenseVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(a.matvec_transpose(&y).unwrap().as_slice(), &[1.0, 5.0]);
    }

    #[test]
    fn matvec_transpose_matches_dense_oracle() {
        let rows = random_dense(6, 4, 11);
        let a = CsrMatrix::from_dense(&rows);
        let y: DenseVector = {
            let mut s = 13u64;
            (0..6).map(|_| lcg(&mut s)).collect()
        };
        let want = dense_matvec_t(&rows, &y);
        let got = a.matvec_transpose(&y).unwrap();
        assert!(rel_err(got.as_slice(), &want) < 1e-14);
    }

    #[test]
    fn row_dot_cases() {
        let a = CsrMatrix::from_dense(&[vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 0.0]]);
        let x = DenseVector::from_vec(vec![1.0, 1.0, 5.0]);
        assert_eq!(a.row_dot(0, &x).unwrap(), 0.0);
        assert_eq!(a.row_dot(1, &x).unwrap(), 3.0);
        assert!(a.row_dot(2, &x).is_err());
    }

    #[test]
    fn row_dot_matches_dense_oracle() {
        let rows = random_dense(3, 9, 5);
        let a = CsrMatrix::from_dense(&rows);
        let x: DenseVector = {
            let mut s = 99u64;
            (0..9).map(|_| lcg(&mut s)).collect()
        };
        for i in 0..3 {
            let want: f64 = rows[i].iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            let got = a.row_dot(i, &x).unwrap();
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1.0));
        }
    }

    #[test]
    fn row_axpy_cases() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0, 2.0]]);
        let mut x = DenseVector::zeros(3);
        a.row_axpy(0, 3.0, &mut x).unwrap();
        assert_eq!(x.as_slice(), &[3.0, 0.0, 6.0]);

        let before = x.clone();
        a.row_axpy(0, 0.0, &mut x).unwrap();
        assert_eq!(x, before);
    }

    #[test]
    fn row_axpy_accumulates_transpose_product() {
        // m sequential row_axpy calls must equal x + A^T d.
        let rows = random_dense(5, 6, 21);
        let a = CsrMatrix::from_dense(&rows);
        let d: Vec<f64> = {
            let mut s = 3u64;
            (0..5).map(|_| lcg(&mut s)).collect()
        };
        let mut x = DenseVector::constant(6, 0.5);
        for i in 0..5 {
            a.row_axpy(i, d[i], &mut x).unwrap();
        }
        let mut want = dense_matvec_t(&rows, &d);
        for w in want.iter_mut() {
            *w += 0.5;
        }
        assert!(rel_err(x.as_slice(), &want) < 1e-13);
    }

    #[test]
    fn row_norms_cases() {
        assert_eq!(
            CsrMatrix::identity(3).row_norms().as_slice(),
            &[1.0, 1.0, 1.0]
        );
        let a = CsrMatrix::from_dense(&[vec![3.0, 4.0], vec![0.0, 0.0]]);
        assert_eq!(a.row_norms().as_slice(), &[5.0, 0.0]);
    }

    #[test]
    fn row_norms_match_dense_oracle() {
        let rows = random_dense(7, 5, 77);
        let a = CsrMatrix::from_dense(&rows);
        let norms = a.row_norms();
        for i in 0..7 {
            let want = rows[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norms[i] - want).abs() <= 1e-14 * want.max(1.0));
        }
    }

    #[test]
    fn duplicates_summed_zeros_dropped() {
        let a =
            CsrMatrix::from_triplets(1, 2, &[(0, 1, 2.0), (0, 1, 3.0), (0, 0, 1.0), (0, 0, -1.0)])
                .unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.row(0), (&[1usize][..], &[5.0][..]));
    }

    #[test]
    fn remove_zero_rows_cols_noop() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = DenseVector::from_vec(vec![1.0, 1.0]);
        let c = DenseVector::from_vec(vec![1.0, 1.0]);
        let (a2, b2, c2, map) = a.remove_zero_rows_cols(&b, &c).unwrap();
        assert!(map.is_identity());
        assert_eq!(a2, a);
        assert_eq!(b2, b);
        assert_eq!(c2, c);
    }

    #[test]
    fn remove_zero_column() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0, 2.0]]);
        let b = DenseVector::from_vec(vec![1.0]);
        let c = DenseVector::from_vec(vec![5.0, 6.0, 7.0]);
        let (a2, _, c2, map) = a.remove_zero_rows_cols(&b, &c).unwrap();
        assert_eq!(a2.ncols(), 2);
        assert_eq!(c2.as_slice(), &[5.0, 7.0]);
        assert_eq!(map.kept_cols, vec![0, 2]);
        let x = DenseVector::from_vec(vec![1.5, 2.5]);
        assert_eq!(map.embed_primal(&x).as_slice(), &[1.5, 0.0, 2.5]);
    }

    #[test]
    fn remove_zero_row_ok_and_infeasible() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![0.0, 0.0]]);
        let c = DenseVector::from_vec(vec![1.0, 1.0]);
        let b_ok = DenseVector::from_vec(vec![1.0, 0.0]);
        let (a2, b2, _, map) = a.remove_zero_rows_cols(&b_ok, &c).unwrap();
        assert_eq!(a2.nrows(), 1);
        assert_eq!(b2.as_slice(), &[1.0]);
        assert_eq!(map.kept_rows, vec![0]);

        let b_bad = DenseVector::from_vec(vec![1.0, 2.0]);
        assert!(matches!(
            a.remove_zero_rows_cols(&b_bad, &c),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn matrix_market_dump() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, -2.5]]);
        let mut buf = Vec::new();
        a.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n2 2 2\n"));
        assert!(text.contains("1 1 1\n"));
        assert!(text.contains("2 2 -2.5\n"));
    }
}
