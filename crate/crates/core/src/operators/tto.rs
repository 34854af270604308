use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use super::{OperatorMatrix, Space, SymbolSpec};
use crate::error::{Error, Result};
use crate::linalg::{solve_guarded, CMatrix, C64, ONE};
use crate::model_space::{quadrature_inner, FunctionSamples, KernelBasis, OrthonormalBasis, DEFAULT_GRID};

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Point values `(ψ(a_l), conj(χ(a_l)))` at the zeros.
fn symbol_values(basis: &KernelBasis, symbol: &SymbolSpec) -> Result<(Vec<C64>, Vec<C64>)> {
    let n = basis.degree();
    match symbol {
        SymbolSpec::Kernel { psi, chi } => {
            check_len(n, psi.len())?;
            check_len(n, chi.len())?;
            let u = basis.values_at_zeros(psi)?;
            let v = basis.values_at_zeros(chi)?.into_iter().map(|z| z.conj()).collect();
            Ok((u, v))
        }
        SymbolSpec::KernelValues { psi, chi } => {
            check_len(n, psi.len())?;
            check_len(n, chi.len())?;
            Ok((psi.clone(), chi.iter().map(|z| z.conj()).collect()))
        }
        _ => Err(Error::BasisMismatch("kernel")),
    }
}

/// Kernel-basis entries from the residue evaluation of
/// `b_{i,j} = ⟨φ k_j, C_B k_i⟩ / conj(B'(a_i))`:
///
/// `⟨ψ k_j, C_B k_i⟩ = Σ_l ψ(a_l) k_j(a_l) k_i(a_l) / B'(a_l)` and
/// `⟨conj(χ) k_j, C_B k_i⟩ = δ_{ij} conj(χ(a_i) B'(a_i))`.
pub(crate) fn kernel_tto_entries(basis: &KernelBasis, psi_vals: &[C64], chi_bar: &[C64]) -> CMatrix {
    let n = basis.degree();
    let g = basis.gram();
    let bp = basis.bprime();
    let weights: Vec<C64> = (0..n).map(|l| psi_vals[l] / bp[l]).collect();
    CMatrix::from_fn(n, n, |i, j| {
        let s: C64 = (0..n).map(|l| weights[l] * g[(l, j)] * g[(l, i)]).sum();
        let diag = if i == j { chi_bar[i] } else { C64::new(0.0, 0.0) };
        s / bp[i].conj() + diag
    })
}

/// Matrix of the truncated Toeplitz operator `A_φ f = P(φ f)` in the basis of
/// `space`.
///
/// Kernel-basis entries are exact (residue calculus). Monomial entries are
/// the Fourier coefficients `c_{i−j}`. The degree-three example uses grid
/// quadrature of `⟨φ e_j, e_i⟩` with the default grid.
pub fn tto_matrix(space: &Space, symbol: &SymbolSpec) -> Result<OperatorMatrix> {
    let entries = match (space, symbol) {
        (Space::Kernel(basis), _) => {
            let (u, v) = symbol_values(basis, symbol)?;
            kernel_tto_entries(basis, &u, &v)
        }
        (Space::Monomial(n), SymbolSpec::Trig(c)) => {
            let n = *n;
            if n == 0 {
                return Err(Error::DimensionMismatch { expected: 1, got: 0 });
            }
            check_len(2 * n - 1, c.len())?;
            CMatrix::from_fn(n, n, |i, j| c[i + n - 1 - j])
        }
        (Space::Example3(w), SymbolSpec::Example3(c)) => {
            let basis = OrthonormalBasis::example3(*w, DEFAULT_GRID)?;
            let wv = w.value();
            let kw_norm = 1.0 / (1.0 - wv.norm_sqr()).sqrt();
            let phi = FunctionSamples::from_fn(DEFAULT_GRID, |z| {
                let tail = z * z / (ONE - wv.conj() * z) / kw_norm;
                c[0] * tail.conj() + c[1] * z.conj() + c[2] + c[3] * z + c[4] * tail
            })?;
            basis.matrix_of(|f| phi.pointwise_mul(f))?
        }
        (Space::Monomial(_), _) => return Err(Error::BasisMismatch("monomial")),
        (Space::Example3(_), _) => return Err(Error::BasisMismatch("example3")),
    };
    OperatorMatrix::new(entries, space.clone())
}

/// Kernel-basis TTO matrix computed entirely by grid quadrature:
/// `b_{i,j} = ⟨φ k_j, C_B k_i⟩ / conj(B'(a_i))` with `φ` sampled on `size`
/// points. Accurate when `max|a_j|^{size/2}` is negligible.
pub fn tto_matrix_quadrature(basis: &KernelBasis, symbol: &SymbolSpec, size: usize) -> Result<OperatorMatrix> {
    let n = basis.degree();
    let (psi, chi) = match symbol {
        SymbolSpec::Kernel { psi, chi } => (psi.clone(), chi.clone()),
        SymbolSpec::KernelValues { psi, chi } => {
            let rhs_psi = CMatrix::from_column_slice(n, 1, psi);
            let rhs_chi = CMatrix::from_column_slice(n, 1, chi);
            let p = solve_guarded(basis.gram(), &rhs_psi)?;
            let q = solve_guarded(basis.gram(), &rhs_chi)?;
            (p.iter().copied().collect(), q.iter().copied().collect())
        }
        _ => return Err(Error::BasisMismatch("kernel")),
    };
    check_len(n, psi.len())?;
    check_len(n, chi.len())?;
    let psi_s = basis.synthesize(&psi, size)?;
    let chi_s = basis.synthesize(&chi, size)?;
    let mut phi = psi_s;
    phi.add_scaled(&chi_s.conj(), ONE)?;
    let kernels = (0..n)
        .map(|j| basis.kernel_samples(j, size))
        .collect::<Result<Vec<_>>>()?;
    let conj_kernels = (0..n)
        .map(|i| basis.conj_kernel_samples(n, i, size))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = CMatrix::zeros(n, n);
    for j in 0..n {
        let image = phi.pointwise_mul(&kernels[j])?;
        for i in 0..n {
            entries[(i, j)] = quadrature_inner(&image, &conj_kernels[i])? / basis.bprime()[i].conj();
        }
    }
    OperatorMatrix::new(entries, Space::Kernel(basis.clone()))
}
