use super::{CheckOutcome, OperatorMatrix, Space};
use crate::error::Result;
use crate::linalg::{max_abs, residual_scale, solve_guarded, CMatrix, C64};
use crate::model_space::{KernelBasis, OrthonormalBasis, DEFAULT_GRID};

/// Matrix of `A*` in the same basis. For the kernel basis this solves
/// `G X = Mᴴ G`; orthonormal bases use the conjugate transpose.
pub fn adjoint(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let entries = match m.space() {
        Space::Kernel(basis) => {
            let g = basis.gram();
            solve_guarded(g, &(m.entries().adjoint() * g))?
        }
        _ => m.entries().adjoint(),
    };
    m.with_entries(entries)
}

/// `D_{i,j} = conj(B'(a_j)) b_{j,i} − conj(B'(a_i)) b_{i,j}`.
pub(crate) fn kernel_defect(basis: &KernelBasis, m: &CMatrix) -> CMatrix {
    let bp = basis.bprime();
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| bp[j].conj() * m[(j, i)] - bp[i].conj() * m[(i, j)])
}

/// Weighted scale `max(1, max |conj(B'(a_i)) b_{i,j}|)` of a kernel matrix.
pub(crate) fn kernel_weighted_scale(basis: &KernelBasis, m: &CMatrix) -> f64 {
    let bp = basis.bprime();
    let mut scale = 1.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            scale = scale.max((bp[i].conj() * m[(i, j)]).norm());
        }
    }
    scale
}

/// `a_{i,j} − a_{N−1−j, N−1−i}`, zero iff the matrix is symmetric about
/// its antidiagonal.
pub(crate) fn persymmetry_defect(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| m[(i, j)] - m[(n - 1 - j, n - 1 - i)])
}

/// Scale-free persymmetry residual of a plain matrix.
pub fn persymmetry_residual(m: &CMatrix) -> f64 {
    max_abs(&persymmetry_defect(m)) / residual_scale(m)
}

/// Complex-linear defect that vanishes iff `M` is `C_B`-symmetric.
pub fn c_symmetry_defect(m: &OperatorMatrix) -> Result<CMatrix> {
    Ok(match m.space() {
        Space::Kernel(basis) => kernel_defect(basis, m.entries()),
        Space::Monomial(_) => persymmetry_defect(m.entries()),
        Space::Example3(w) => {
            let j = OrthonormalBasis::example3(*w, DEFAULT_GRID)?.conjugation_matrix()?;
            j.map(|z| z.conj()) * m.entries() * &j - m.entries().transpose()
        }
    })
}

/// `C_B A C_B = A*`, tested through the matrix identity appropriate to the
/// basis: `conj(B'(a_j)) b_{j,i} = conj(B'(a_i)) b_{i,j}` for kernels,
/// persymmetry for monomials.
pub fn is_c_symmetric(m: &OperatorMatrix, tol: f64) -> Result<CheckOutcome> {
    let defect = c_symmetry_defect(m)?;
    let scale = match m.space() {
        Space::Kernel(basis) => kernel_weighted_scale(basis, m.entries()),
        _ => residual_scale(m.entries()),
    };
    Ok(CheckOutcome::from_residual(max_abs(&defect) / scale, tol))
}

/// `tr(A (u ⊗ v)) = ⟨A u, v⟩ = vᴴ M u` for coordinates in an orthonormal
/// basis, where `(u ⊗ v) x = ⟨x, v⟩ u`.
pub fn trace_rank_one(m: &CMatrix, u: &[C64], v: &[C64]) -> C64 {
    let n = m.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += m[(i, j)] * u[j];
        }
        acc += v[i].conj() * row;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE, ZERO};
    use crate::model_space::quadrature_inner;
    use crate::operators::{tto_matrix, SymbolSpec};

    fn diag121() -> OperatorMatrix {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![ONE, 2.0 * ONE, ONE]));
        OperatorMatrix::new(m, Space::Monomial(3)).unwrap()
    }

    #[test]
    fn persymmetric_diagonal() {
        let out = is_c_symmetric(&diag121(), 1e-12).unwrap();
        assert!(out.holds && out.residual == 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[ONE, 2.0 * ONE, ZERO, ONE]);
        assert!(persymmetry_residual(&m) == 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, 2.0 * ONE]);
        assert!(persymmetry_residual(&m) > 0.4);
    }

    #[test]
    fn tto_is_c_symmetric() {
        let basis = KernelBasis::from_zeros(&[C64::new(0.1, 0.4), C64::new(-0.5, 0.0), C64::new(0.6, -0.2)]).unwrap();
        let m = tto_matrix(
            &Space::Kernel(basis),
            &SymbolSpec::Kernel {
                psi: alloc::vec![C64::new(1.0, 2.0), C64::new(-0.3, 0.0), C64::new(0.0, 0.5)],
                chi: alloc::vec![C64::new(0.2, 0.1), C64::new(0.4, -1.0), C64::new(0.7, 0.0)],
            },
        )
        .unwrap();
        let out = is_c_symmetric(&m, 1e-12).unwrap();
        assert!(out.holds, "{}", out.residual);
    }

    #[test]
    fn identity_adjoint_and_monomial_adjoint() {
        let basis = KernelBasis::from_zeros(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let id = OperatorMatrix::identity(Space::Kernel(basis));
        assert!(max_abs_diff(adjoint(&id).unwrap().entries(), &CMatrix::identity(2, 2)) < 1e-14);
        let m = CMatrix::from_row_slice(2, 2, &[ONE, C64::new(0.0, 2.0), C64::new(3.0, 1.0), ZERO]);
        let op = OperatorMatrix::new(m.clone(), Space::Monomial(2)).unwrap();
        assert_eq!(adjoint(&op).unwrap().entries(), &m.adjoint());
    }

    #[test]
    fn kernel_adjoint_satisfies_pairing() {
        let basis = KernelBasis::from_zeros(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.3, 1.0), C64::new(-2.0, 0.5), C64::new(0.7, -0.1), C64::new(1.5, 0.0)],
        );
        let op = OperatorMatrix::new(m.clone(), Space::Kernel(basis.clone())).unwrap();
        let adj = adjoint(&op).unwrap();
        let size = DEFAULT_GRID;
        let k: alloc::vec::Vec<_> = (0..2).map(|j| basis.kernel_samples(j, size).unwrap()).collect();
        let apply = |mat: &CMatrix, j: usize| basis.synthesize(&[mat[(0, j)], mat[(1, j)]], size).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let lhs = quadrature_inner(&apply(&m, j), &k[i]).unwrap();
                let rhs = quadrature_inner(&k[j], &apply(adj.entries(), i)).unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
        let back = adjoint(&adj).unwrap();
        assert!(max_abs_diff(back.entries(), &m) < 1e-10);
    }

    #[test]
    fn trace_convention() {
        // tr(A(1 ⊗ z)) = ⟨A 1, z⟩ = a_{1,0}.
        let m = CMatrix::from_row_slice(2, 2, &[ONE, 2.0 * ONE, 3.0 * ONE, 4.0 * ONE]);
        let t = trace_rank_one(&m, &[ONE, ZERO], &[ZERO, ONE]);
        assert_eq!(t, 3.0 * ONE);
    }
}
