//! Independent reference computations used to cross-check the closed forms.
//! Compiled for tests and behind the `oracle` feature.

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::{solve_guarded, CMatrix, C64};
use crate::model_space::KernelBasis;

/// Central difference `(f(z + h) − f(z − h))/(2h)` along the real axis.
pub fn central_difference<F: Fn(C64) -> C64>(f: F, z: C64, h: f64) -> C64 {
    let step = C64::new(h, 0.0);
    (f(z + step) - f(z - step)) / (2.0 * h)
}

/// Matrix of `P_n A|K²_{B_n}` in `{k_1, …, k_n}` by orthogonal projection:
/// each `k_m`, `m ≥ n`, is replaced by the solution of the normal equations
/// `G_n d = (⟨k_m, k_i⟩)_{i<n}`.
pub fn projection_compression(basis: &KernelBasis, m: &CMatrix, n: usize) -> Result<CMatrix> {
    let big = basis.degree();
    let g = basis.gram();
    let gn = g.view((0, 0), (n, n)).into_owned();
    let cross = g.view((0, n), (n, big - n)).into_owned();
    let d = solve_guarded(&gn, &cross)?;
    let mut out = m.view((0, 0), (n, n)).into_owned();
    out += d * m.view((n, 0), (big - n, n));
    Ok(out)
}

/// `max |a_{i,j} − a_{i+1,j+1}|` without normalization.
pub fn diagonal_spread(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 1..n {
        for j in 1..n {
            worst = worst.max((m[(i, j)] - m[(i - 1, j - 1)]).norm());
        }
    }
    worst
}

/// `⟨C_B k_j, k_i⟩` by direct evaluation of `(C_B k_j)(a_i) = B(a_i)/(a_i − a_j)`
/// for `i ≠ j`, and the limit `B'(a_j)` at `i = j`, using `B` itself.
pub fn conj_kernel_gram(basis: &KernelBasis) -> Result<CMatrix> {
    let b = basis.blaschke();
    let z = basis.zeros();
    let n = z.len();
    let values: Vec<(C64, C64)> = z.iter().map(|&a| b.eval_with_derivative(a)).collect::<Result<_>>()?;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            values[j].1
        } else {
            values[i].0 / (z[i] - z[j])
        }
    }))
}
