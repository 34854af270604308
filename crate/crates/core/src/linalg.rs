//! Dense complex linear algebra helpers built on `nalgebra`.
//!
//! Everything here works on small matrices (dimension ≲ 100), so all
//! decompositions go through a full SVD for robustness.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Largest condition number accepted by [`solve_guarded`].
pub const MAX_CONDITION: f64 = 1e12;

/// Relative norm below which a constraint row counts as identically zero.
pub const NEGLIGIBLE_ROW: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `max(1, ‖m‖_max)`, the scale every reported residual is divided by.
pub fn residual_scale(m: &CMatrix) -> f64 {
    max_abs(m).max(1.0)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    s
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn condition_estimate(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Solve `a x = b`, refusing systems whose condition estimate exceeds
/// [`MAX_CONDITION`].
pub fn solve_guarded(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let condition = condition_estimate(a);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditionedGram { condition });
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or(Error::IllConditionedGram { condition })
}

/// Numerical null space of a matrix.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis of the null space, one column per vector.
    pub basis: CMatrix,
    /// All singular values, descending (zero-padded to the column count).
    pub singular_values: Vec<f64>,
    /// Number of singular values above the threshold.
    pub rank: usize,
}

impl NullSpace {
    pub fn dimension(&self) -> usize {
        self.basis.ncols()
    }

    /// Smallest singular value counted as nonzero and largest counted as
    /// zero, the two sides of the rank gap.
    pub fn gap(&self) -> (Option<f64>, Option<f64>) {
        let kept = self.rank.checked_sub(1).map(|i| self.singular_values[i]);
        let dropped = self.singular_values.get(self.rank).copied();
        (kept, dropped)
    }
}

/// Null space of `m`: right singular vectors whose singular value is at most
/// `threshold`. Short-wide inputs are padded with zero rows so that the SVD
/// returns a full set of right singular vectors.
pub fn null_space(m: &CMatrix, threshold: f64) -> NullSpace {
    let cols = m.ncols();
    let rows = m.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let rank = singular_values.iter().filter(|&&s| s > threshold).count();
    let null_rows: Vec<usize> = order[rank..].to_vec();
    let mut basis = CMatrix::zeros(cols, null_rows.len());
    for (k, &r) in null_rows.iter().enumerate() {
        for c in 0..cols {
            basis[(c, k)] = v_t[(r, c)].conj();
        }
    }
    NullSpace {
        basis,
        singular_values,
        rank,
    }
}

/// Number of singular values strictly above `threshold`.
pub fn numerical_rank(m: &CMatrix, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold).count()
}

/// Stack of complex-linear homogeneous constraints on `n_unknowns` values.
#[derive(Debug, Clone)]
pub struct ConstraintStack {
    n_unknowns: usize,
    rows: Vec<Vec<C64>>,
}

impl ConstraintStack {
    pub fn new(n_unknowns: usize) -> Self {
        Self {
            n_unknowns,
            rows: Vec::new(),
        }
    }

    /// Add the constraints `f(x) = 0` for a complex-linear map `f`, probing it
    /// on the standard basis vectors.
    pub fn push_linear_map<F>(&mut self, f: F)
    where
        F: Fn(&[C64]) -> Vec<C64>,
    {
        let mut unit = alloc::vec![ZERO; self.n_unknowns];
        let mut columns = Vec::with_capacity(self.n_unknowns);
        for k in 0..self.n_unknowns {
            unit[k] = ONE;
            columns.push(f(&unit));
            unit[k] = ZERO;
        }
        let n_out = columns.first().map_or(0, Vec::len);
        for r in 0..n_out {
            self.rows.push(columns.iter().map(|col| col[r]).collect());
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Constraint matrix with each row scaled to unit Euclidean norm. Rows
    /// below [`NEGLIGIBLE_ROW`] times the largest row norm are rounding noise
    /// of identically vanishing constraints and are zeroed instead.
    pub fn normalized_matrix(&self) -> CMatrix {
        let norms: Vec<f64> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let largest = norms.iter().copied().fold(0.0, f64::max);
        let mut m = CMatrix::zeros(self.rows.len(), self.n_unknowns);
        for (i, row) in self.rows.iter().enumerate() {
            let norm = norms[i];
            let scale = if norm > NEGLIGIBLE_ROW * largest { 1.0 / norm } else { 0.0 };
            for (j, z) in row.iter().enumerate() {
                m[(i, j)] = z * scale;
            }
        }
        m
    }

    pub fn null_space(&self, threshold: f64) -> NullSpace {
        null_space(&self.normalized_matrix(), threshold)
    }
}

/// Reshape a column-major vector of length `n*n` into a square matrix.
pub fn square_from_vec(n: usize, values: &[C64]) -> CMatrix {
    CMatrix::from_column_slice(n, n, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        // x + y + z = 0 has a two-dimensional solution set.
        let m = CMatrix::from_row_slice(1, 3, &[ONE, ONE, ONE]);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.rank, 1);
        assert_eq!(ns.dimension(), 2);
        let product = &m * &ns.basis;
        assert!(max_abs(&product) < 1e-14);
    }

    #[test]
    fn guarded_solve_rejects_singular() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, ONE]);
        let rhs = CMatrix::from_column_slice(2, 1, &[ONE, ZERO]);
        assert!(matches!(
            solve_guarded(&m, &rhs),
            Err(Error::IllConditionedGram { .. })
        ));
    }

    #[test]
    fn constraint_stack_probes_linear_map() {
        let mut stack = ConstraintStack::new(2);
        stack.push_linear_map(|x| alloc::vec![x[0] - x[1]]);
        let ns = stack.null_space(1e-12);
        assert_eq!(ns.dimension(), 1);
        let v = ns.basis.column(0);
        assert!((v[0] - v[1]).norm() < 1e-14);
    }
}
