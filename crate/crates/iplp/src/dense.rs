//! Dense vectors and the handful of level-1 operations the solvers need.

use std::ops::{Deref, DerefMut, Index, IndexMut};

/// A dense real vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    /// Zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        DenseVector(vec![0.0; len])
    }

    /// Vector with every entry equal to `value`.
    pub fn constant(len: usize, value: f64) -> Self {
        DenseVector(vec![value; len])
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        DenseVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn fill(&mut self, value: f64) {
        self.0.iter_mut().for_each(|v| *v = value);
    }

    /// Euclidean inner product. Lengths must agree.
    pub fn dot(&self, other: &DenseVector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot of mismatched lengths");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `self += alpha * x`.
    pub fn axpy(&mut self, alpha: f64, x: &DenseVector) {
        assert_eq!(self.len(), x.len(), "axpy of mismatched lengths");
        for (s, v) in self.0.iter_mut().zip(x.0.iter()) {
            *s += alpha * v;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        self.0.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `alpha * self + beta * other`, allocating the result.
    pub fn lin_comb(&self, alpha: f64, beta: f64, other: &DenseVector) -> DenseVector {
        assert_eq!(self.len(), other.len(), "lin_comb of mismatched lengths");
        DenseVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn min(&self) -> f64 {
        self.0.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        DenseVector(v)
    }
}

impl FromIterator<f64> for DenseVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        DenseVector(iter.into_iter().collect())
    }
}
