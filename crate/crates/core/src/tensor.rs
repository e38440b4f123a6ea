//! Dense row-major f32 matrices and the numeric primitives shared by every
//! module: stable softmax, L2 norms, elementwise updates.
//!
//! Reductions accumulate in f64 and run strictly left to right, so results
//! are identical across runs and across the `parallel` feature settings.

use crate::error::{KsError, Result};

/// A `rows x cols` matrix of f32 stored row-major.
///
/// Public constructors reject non-finite entries; operations that can
/// re-introduce them (steering updates) re-validate explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Tensor2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(KsError::ShapeMismatch {
                expected: format!("{rows}x{cols} = {} values", rows * cols),
                got: format!("{} values", data.len()),
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(KsError::InvalidInput("non-finite tensor entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(KsError::ShapeMismatch {
                    expected: format!("{cols} cols"),
                    got: format!("{} cols in row {i}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[f32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [f32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Frobenius norm, accumulated in f64.
    pub fn frobenius_norm(&self) -> f32 {
        l2_norm(&self.data)
    }

    /// Rebuild from per-row slices produced by a map over `self.rows()`.
    pub(crate) fn from_row_vecs(cols: usize, rows: Vec<Vec<f32>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(&r);
        }
        Self { rows: n, cols, data }
    }
}

/// Numerically stable softmax: max-subtracted exponentials normalized by a
/// left-to-right f64 sum. Empty input is rejected.
pub fn softmax(v: &[f32]) -> Result<Vec<f32>> {
    if v.is_empty() {
        return Err(KsError::InvalidInput("softmax of empty vector".into()));
    }
    if !v.iter().all(|x| x.is_finite()) {
        return Err(KsError::InvalidInput("softmax of non-finite vector".into()));
    }
    let max = v.iter().copied().fold(f32::NEG_INFINITY, f32::max);
    let exps: Vec<f64> = v.iter().map(|&x| ((x - max) as f64).exp()).collect();
    let mut sum = 0.0f64;
    for &e in &exps {
        sum += e;
    }
    Ok(exps.iter().map(|&e| (e / sum) as f32).collect())
}

/// Euclidean norm with an f64 accumulator; 0 iff the input is all zero.
pub fn l2_norm(v: &[f32]) -> f32 {
    let mut acc = 0.0f64;
    for &x in v {
        acc += x as f64 * x as f64;
    }
    acc.sqrt() as f32
}

/// Dot product with sequential f32 accumulation (runtime width).
pub(crate) fn dot_f32(a: &[f32], b: &[f32]) -> f32 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f32;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// Dot product accumulated in f64, for norms and projections.
pub(crate) fn dot_f64(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f64;
    for i in 0..a.len() {
        acc += a[i] as f64 * b[i] as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn softmax_oracle_f64(v: &[f32]) -> Vec<f64> {
        // Independent high-precision evaluation: e^v / sum(e^v) in f64.
        let exps: Vec<f64> = v.iter().map(|&x| (x as f64).exp()).collect();
        let sum: f64 = exps.iter().sum();
        exps.iter().map(|&e| e / sum).collect()
    }

    #[test]
    fn softmax_uniform_logits() {
        let p = softmax(&[0.0, 0.0, 0.0]).unwrap();
        for &x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn softmax_singleton() {
        assert_eq!(softmax(&[5.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn softmax_matches_oracle() {
        let v = [2.0f32, 1.0, 0.0];
        let got = softmax(&v).unwrap();
        let want = softmax_oracle_f64(&v);
        for (g, w) in got.iter().zip(&want) {
            assert!((*g as f64 - w).abs() < 1e-6);
        }
    }

    #[test]
    fn softmax_empty_rejected() {
        assert!(matches!(softmax(&[]), Err(KsError::InvalidInput(_))));
    }

    #[test]
    fn softmax_sums_to_one_at_10k_components() {
        let mut rng = crate::rng::SeededRng::new(11);
        let v: Vec<f32> = (0..10_000).map(|_| rng.next_f32() * 20.0 - 10.0).collect();
        let p = softmax(&v).unwrap();
        let sum: f64 = p.iter().map(|&x| x as f64).sum();
        assert!((sum - 1.0).abs() < 1e-6, "sum {sum}");
    }

    #[test]
    fn softmax_shift_invariance() {
        let mut rng = crate::rng::SeededRng::new(5);
        for _ in 0..20 {
            let v: Vec<f32> = (0..16).map(|_| rng.next_f32() * 6.0 - 3.0).collect();
            let c = rng.next_f32() * 100.0 - 50.0;
            let shifted: Vec<f32> = v.iter().map(|&x| x + c).collect();
            let a = softmax(&v).unwrap();
            let b = softmax(&shifted).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn l2_norm_examples() {
        assert_eq!(l2_norm(&[3.0, 4.0]), 5.0);
        assert_eq!(l2_norm(&[0.0; 8]), 0.0);
    }

    #[test]
    fn l2_norm_matches_f64_oracle() {
        let mut rng = crate::rng::SeededRng::new(17);
        let v: Vec<f32> = (0..1000).map(|_| rng.next_f32() * 2.0 - 1.0).collect();
        let oracle: f64 = v.iter().map(|&x| x as f64 * x as f64).sum::<f64>().sqrt();
        let got = l2_norm(&v) as f64;
        assert!((got - oracle).abs() / oracle < 1e-5);
    }

    #[test]
    fn l2_norm_absolutely_homogeneous() {
        let mut rng = crate::rng::SeededRng::new(23);
        let v: Vec<f32> = (0..64).map(|_| rng.next_f32() * 2.0 - 1.0).collect();
        for &c in &[-3.5f32, -1.0, 0.25, 2.0, 10.0] {
            let scaled: Vec<f32> = v.iter().map(|&x| c * x).collect();
            let lhs = l2_norm(&scaled);
            let rhs = c.abs() * l2_norm(&v);
            assert!((lhs - rhs).abs() / rhs.max(1e-20) < 1e-5);
        }
    }

    #[test]
    fn from_vec_rejects_bad_length_and_nan() {
        assert!(Tensor2::from_vec(2, 2, vec![1.0; 3]).is_err());
        assert!(Tensor2::from_vec(1, 2, vec![1.0, f32::NAN]).is_err());
    }
}
