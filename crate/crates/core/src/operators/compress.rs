use alloc::vec::Vec;

use super::symmetry::is_c_symmetric;
use super::{CheckOutcome, OperatorMatrix, Space};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::model_space::KernelBasis;

/// Degree-`n` compression of a full kernel-basis matrix by the tail sum
/// `b^{(n)}_{i,j} = b_{i,j} + Σ_{m ≥ n} conj(B_n(a_m)) b_{m,j} / (conj(B_n'(a_i)) (ā_m − ā_i))`.
/// Linear in `m`.
pub(crate) fn kernel_tail_compression(basis: &KernelBasis, m: &CMatrix, n: usize) -> CMatrix {
    let big = basis.degree();
    let z = basis.zeros();
    let weights: Vec<C64> = (n..big).map(|k| basis.prefix_value(n, k).conj()).collect();
    CMatrix::from_fn(n, n, |i, j| {
        let di = basis.prefix_derivative(n, i).conj();
        let tail: C64 = (n..big)
            .map(|k| weights[k - n] * m[(k, j)] / (z[k].conj() - z[i].conj()))
            .sum();
        m[(i, j)] + tail / di
    })
}

fn check_level(n: usize, dim: usize) -> Result<()> {
    if n == 0 || n > dim {
        return Err(Error::IndexOutOfRange { index: n, limit: dim });
    }
    Ok(())
}

/// One compression step: the matrix of `P_{n−1} A|K²_{B_{n−1}}` from that of
/// `A` on `K²_{B_n}`:
/// `b'_{i,j} = b_{i,j} + conj(B_{n−1}(a_n)) b_{n,j} / (conj(B'_{n−1}(a_i)) (ā_n − ā_i))`.
///
/// In the monomial basis, and for `K²_{z²} ⊂ K²_{z²(w−z)/(1−w̄z)}`, this is
/// the leading block.
pub fn compress(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let dim = m.dim();
    if dim < 2 {
        return Err(Error::IndexOutOfRange { index: dim, limit: 2 });
    }
    let n = dim - 1;
    match m.space() {
        Space::Kernel(basis) => {
            let last = n;
            let z = basis.zeros();
            let w = basis.prefix_value(n, last).conj();
            let entries = CMatrix::from_fn(n, n, |i, j| {
                let den = basis.prefix_derivative(n, i).conj() * (z[last].conj() - z[i].conj());
                m.entries()[(i, j)] + w * m.entries()[(last, j)] / den
            });
            OperatorMatrix::new(entries, Space::Kernel(basis.sub_basis(n)?))
        }
        Space::Monomial(_) | Space::Example3(_) => {
            OperatorMatrix::new(m.entries().view((0, 0), (n, n)).into_owned(), Space::Monomial(n))
        }
    }
}

/// One-shot compression to degree `n` using the tail-sum formula. `n = N`
/// returns the matrix unchanged.
pub fn compress_from_tail(m: &OperatorMatrix, n: usize) -> Result<OperatorMatrix> {
    let dim = m.dim();
    check_level(n, dim)?;
    if n == dim {
        return Ok(m.clone());
    }
    match m.space() {
        Space::Kernel(basis) => OperatorMatrix::new(
            kernel_tail_compression(basis, m.entries(), n),
            Space::Kernel(basis.sub_basis(n)?),
        ),
        Space::Monomial(_) => {
            OperatorMatrix::new(m.entries().view((0, 0), (n, n)).into_owned(), Space::Monomial(n))
        }
        Space::Example3(_) => {
            if n == 1 {
                return OperatorMatrix::new(m.entries().view((0, 0), (1, 1)).into_owned(), Space::Monomial(1));
            }
            compress(m)
        }
    }
}

/// `[A_1, A_2, …, A_N]`, where `A_n` is the compression to the `n`-th
/// prefix space; the last element is `m` itself.
pub fn compress_chain(m: &OperatorMatrix) -> Result<Vec<OperatorMatrix>> {
    let mut chain = alloc::vec![m.clone()];
    while chain.last().map_or(0, OperatorMatrix::dim) > 1 {
        let next = compress(chain.last().expect("non-empty"))?;
        chain.push(next);
    }
    chain.reverse();
    Ok(chain)
}

/// C-symmetry outcome of every compression, indexed by degree − 1.
pub fn chain_c_symmetry(m: &OperatorMatrix, tol: f64) -> Result<Vec<CheckOutcome>> {
    compress_chain(m)?
        .iter()
        .map(|a| is_c_symmetric(a, tol))
        .collect()
}
