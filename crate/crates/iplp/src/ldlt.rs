//! Dense modified LDLT factorization with pivot dropping: the desk-scale
//! direct baseline for the normal equations.
//!
//! Pivots that fall below the drop tolerance are removed outright rather
//! than penalized; the reduced system is solved and the dropped coordinates
//! of the solution are exactly zero. Pivots are processed in natural order,
//! without reordering.

use crate::dense::DenseVector;
use crate::error::Error;
use crate::Result;

/// Dense symmetric matrix, full row-major storage.
#[derive(Clone, Debug)]
pub struct SymmetricDense {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricDense {
    pub fn zeros(n: usize) -> Self {
        SymmetricDense {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = SymmetricDense::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "not square");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * n + j] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }
}

/// Unit lower-triangular factor with dropped pivots.
#[derive(Clone, Debug)]
pub struct LdltFactor {
    n: usize,
    /// Strictly lower triangle of L, row-major over the full index set;
    /// columns of dropped pivots are zero.
    l: Vec<f64>,
    /// Pivot values; zero where dropped.
    pivots: Vec<f64>,
    kept: Vec<bool>,
    pub drop_tol: f64,
}

impl LdltFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kept(&self) -> &[bool] {
        &self.kept
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    pub fn l_entry(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.l[i * self.n + j],
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => 0.0,
        }
    }
}

/// Factors a symmetric positive semidefinite matrix, dropping pivots with
/// `g <= drop_tol`. A pivot below `-drop_tol` means the matrix is
/// indefinite and is reported as an error.
pub fn ldlt_drop_factor(m: &SymmetricDense, drop_tol: f64) -> Result<LdltFactor> {
    let n = m.n();
    let mut a = m.clone();
    let mut l = vec![0.0; n * n];
    let mut pivots = vec![0.0; n];
    let mut kept = vec![false; n];

    // Right-looking elimination confined to the lower triangle; column j of
    // the work array stays intact while its eliminations run, so symmetric
    // reads are never needed.
    for j in 0..n {
        let g = a.get(j, j);
        if g <= drop_tol {
            if g < -drop_tol {
                return Err(Error::Indefinite { index: j, pivot: g });
            }
            // Near-zero pivot: remove the row and column from the system.
            continue;
        }
        kept[j] = true;
        pivots[j] = g;
        for i in (j + 1)..n {
            let lij = a.get(i, j) / g;
            l[i * n + j] = lij;
            if lij != 0.0 {
                for k in (j + 1)..=i {
                    let delta = lij * a.get(k, j);
                    a.add(i, k, -delta);
                }
            }
        }
    }

    Ok(LdltFactor {
        n,
        l,
        pivots,
        kept,
        drop_tol,
    })
}

/// Solves with the dropped-pivot factor; dropped coordinates of the result
/// are exactly zero.
pub fn ldlt_drop_solve(fac: &LdltFactor, f: &DenseVector) -> Result<DenseVector> {
    let n = fac.n;
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            context: "ldlt solve rhs",
            expected: n,
            found: f.len(),
        });
    }
    let mut y = DenseVector::zeros(n);
    // Forward substitution L y = f over kept indices.
    for i in 0..n {
        if !fac.kept[i] {
            continue;
        }
        let mut acc = f[i];
        for j in 0..i {
            if fac.kept[j] {
                acc -= fac.l[i * n + j] * y[j];
            }
        }
        y[i] = acc;
    }
    // Diagonal solve.
    for i in 0..n {
        if fac.kept[i] {
            y[i] /= fac.pivots[i];
        }
    }
    // Backward substitution L^T x = y over kept indices.
    for i in (0..n).rev() {
        if !fac.kept[i] {
            y[i] = 0.0;
            continue;
        }
        let mut acc = y[i];
        for j in (i + 1)..n {
            if fac.kept[j] {
                acc -= fac.l[j * n + i] * y[j];
            }
        }
        y[i] = acc;
    }
    Ok(y)
}
