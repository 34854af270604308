use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use super::symmetry::kernel_weighted_scale;
use super::tto::kernel_tto_entries;
use super::{tto_matrix, CheckOutcome, OperatorMatrix, Space, SymbolSpec};
use crate::blaschke::UnitDiskPoint;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff, residual_scale, solve_guarded, CMatrix, C64, ZERO};
use crate::model_space::KernelBasis;

/// Round-trip tolerance of [`recover_symbol`].
pub const RECOVERY_TOLERANCE: f64 = 1e-8;

/// Weighted CRW defect with anchor `p`:
/// `conj(B'(a_i)) b_{i,j} − conj(B'(a_p)) (b_{p,i}(ā_p − ā_i) + b_{p,j}(ā_j − ā_p))/(ā_j − ā_i)`
/// for `i ≠ j`, zero on the diagonal.
pub(crate) fn crw_defect(basis: &KernelBasis, m: &CMatrix, p: usize) -> CMatrix {
    let n = m.nrows();
    let a: Vec<C64> = basis.zeros().iter().map(|z| z.conj()).collect();
    let bp = basis.bprime();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return ZERO;
        }
        let pred = bp[p].conj() * (m[(p, i)] * (a[p] - a[i]) + m[(p, j)] * (a[j] - a[p])) / (a[j] - a[i]);
        bp[i].conj() * m[(i, j)] - pred
    })
}

/// `a_{i,j} − a_{i+1,j+1}` over all admissible pairs, as a flat list.
fn diagonal_steps(m: &CMatrix) -> Vec<C64> {
    let n = m.nrows();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for j in 0..n - 1 {
            out.push(m[(i, j)] - m[(i + 1, j + 1)]);
        }
    }
    out
}

/// Scale-free distance from constant diagonals.
pub fn toeplitz_residual(m: &CMatrix) -> f64 {
    diagonal_steps(m).iter().fold(0.0f64, |acc, z| acc.max(z.norm())) / residual_scale(m)
}

/// Left-hand minus right-hand sides of the four linear equations cutting
/// the TTOs out of all 3×3 matrices in the basis `{1, z, z² k_w/‖k_w‖}`.
pub(crate) fn example3_equation_defects(m: &CMatrix, w: C64) -> [C64; 4] {
    let k = 1.0 / (1.0 - w.norm_sqr()).sqrt();
    let wb = w.conj();
    [
        m[(1, 1)] - m[(0, 0)],
        m[(1, 2)] - (wb * m[(0, 2)] + m[(0, 1)] / k),
        m[(2, 1)] - (m[(1, 0)] / k + w * m[(2, 0)]),
        m[(2, 2)] - (m[(0, 0)] + wb * k * m[(1, 2)] + w * k * m[(2, 1)]),
    ]
}

/// Absolute residuals of those four equations.
pub fn example3_equation_residuals(m: &CMatrix, w: UnitDiskPoint) -> Result<[f64; 4]> {
    if m.nrows() != 3 || m.ncols() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: m.nrows() });
    }
    Ok(example3_equation_defects(m, w.value()).map(|z| z.norm()))
}

/// TTO membership with the first basis element as anchor.
pub fn is_tto(m: &OperatorMatrix, tol: f64) -> Result<CheckOutcome> {
    is_tto_with_anchor(m, 0, tol)
}

/// TTO membership. Kernel basis: the CRW relations anchored at row `anchor`,
/// weighted by `conj(B'(a_i))` and relative to the weighted scale. Monomial
/// basis: constant diagonals. Degree-three example: its four equations.
pub fn is_tto_with_anchor(m: &OperatorMatrix, anchor: usize, tol: f64) -> Result<CheckOutcome> {
    if anchor >= m.dim() {
        return Err(Error::IndexOutOfRange { index: anchor, limit: m.dim() });
    }
    let residual = match m.space() {
        Space::Kernel(basis) => {
            max_abs(&crw_defect(basis, m.entries(), anchor)) / kernel_weighted_scale(basis, m.entries())
        }
        Space::Monomial(_) => toeplitz_residual(m.entries()),
        Space::Example3(w) => {
            let r = example3_equation_residuals(m.entries(), *w)?;
            r.iter().fold(0.0f64, |acc, &x| acc.max(x)) / residual_scale(m.entries())
        }
    };
    Ok(CheckOutcome::from_residual(residual, tol))
}

/// Which side of the trace pairing a Brown–Halmos residual comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSide {
    /// `|tr(A(1 ⊗ z^k − z^l ⊗ z^{k+l}))| = |a_{k,0} − a_{k+l,l}|`.
    Column,
    /// `|tr(A(z^k ⊗ 1 − z^{k+l} ⊗ z^l))| = |a_{0,k} − a_{l,k+l}|`.
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownHalmosResidual {
    pub k: usize,
    pub l: usize,
    pub side: TraceSide,
    pub value: f64,
}

/// Rank-two trace residuals on `K²_{z^n}` for all `k, l ≥ 0`, `k + l + 1 ≤ n`.
/// Absolute values; a Toeplitz matrix annihilates all of them.
pub fn brown_halmos_residuals(m: &OperatorMatrix) -> Result<Vec<BrownHalmosResidual>> {
    if !matches!(m.space(), Space::Monomial(_)) {
        return Err(Error::BasisMismatch("brown-halmos residuals need the monomial basis"));
    }
    let a = m.entries();
    let n = m.dim();
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n - k {
            out.push(BrownHalmosResidual {
                k,
                l,
                side: TraceSide::Column,
                value: (a[(k, 0)] - a[(k + l, l)]).norm(),
            });
            out.push(BrownHalmosResidual {
                k,
                l,
                side: TraceSide::Row,
                value: (a[(0, k)] - a[(l, k + l)]).norm(),
            });
        }
    }
    Ok(out)
}

/// Least-squares symbol recovery in the kernel basis.
///
/// Unknowns are the point values `u_l = ψ(a_l)` and `v_l = conj(χ(a_l))`;
/// each entry equation is weighted by `conj(B'(a_i))`. The one-dimensional
/// ambiguity `(u, v) ↦ (u + c, v − c)` is removed by the extra row
/// `χ(0) = Σ_l (G⁻¹ χ(a))_l = 0`.
fn recover_kernel(basis: &KernelBasis, m: &CMatrix) -> Result<SymbolSpec> {
    let n = basis.degree();
    let bp = basis.bprime();
    let ginv = solve_guarded(basis.gram(), &CMatrix::identity(n, n))?;
    let rows = n * n + 1;
    let mut sys = CMatrix::zeros(rows, 2 * n);
    let mut rhs = CMatrix::zeros(rows, 1);
    let unit = |l: usize| {
        let mut e = alloc::vec![ZERO; n];
        e[l] = C64::new(1.0, 0.0);
        e
    };
    let zeros_n = alloc::vec![ZERO; n];
    for l in 0..n {
        let from_u = kernel_tto_entries(basis, &unit(l), &zeros_n);
        let from_v = kernel_tto_entries(basis, &zeros_n, &unit(l));
        for i in 0..n {
            for j in 0..n {
                let w = bp[i].conj();
                sys[(i * n + j, l)] = w * from_u[(i, j)];
                sys[(i * n + j, n + l)] = w * from_v[(i, j)];
            }
        }
        sys[(n * n, n + l)] = (0..n).map(|r| ginv[(r, l)].conj()).sum();
    }
    for i in 0..n {
        for j in 0..n {
            rhs[(i * n + j, 0)] = bp[i].conj() * m[(i, j)];
        }
    }
    let x = sys
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(Error::DegenerateConstraints)?;
    let u: Vec<C64> = (0..n).map(|l| x[(l, 0)]).collect();
    let chi_vals: Vec<C64> = (0..n).map(|l| x[(n + l, 0)].conj()).collect();
    let p = ginv.clone() * CMatrix::from_column_slice(n, 1, &u);
    let q = ginv * CMatrix::from_column_slice(n, 1, &chi_vals);
    Ok(SymbolSpec::Kernel {
        psi: p.iter().copied().collect(),
        chi: q.iter().copied().collect(),
    })
}

/// A symbol `φ = ψ + conj(χ)` whose TTO reproduces `m` to
/// [`RECOVERY_TOLERANCE`] (relative to `max(1, ‖M‖_max)`), with `χ(0) = 0`
/// in the kernel case. Fails with [`Error::NotTto`] otherwise.
pub fn recover_symbol(m: &OperatorMatrix) -> Result<SymbolSpec> {
    let a = m.entries();
    let n = m.dim();
    let symbol = match m.space() {
        Space::Kernel(basis) => recover_kernel(basis, a)?,
        Space::Monomial(_) => {
            let mut c = alloc::vec![ZERO; 2 * n - 1];
            for (d, slot) in c.iter_mut().enumerate() {
                // d − (n − 1) = i − j
                let offset = d as isize - (n as isize - 1);
                let cells: Vec<C64> = (0..n)
                    .filter_map(|j| {
                        let i = j as isize + offset;
                        (0..n as isize).contains(&i).then(|| a[(i as usize, j)])
                    })
                    .collect();
                *slot = cells.iter().sum::<C64>() / cells.len() as f64;
            }
            SymbolSpec::Trig(c)
        }
        Space::Example3(_) => SymbolSpec::Example3([a[(0, 2)], a[(0, 1)], a[(0, 0)], a[(1, 0)], a[(2, 0)]]),
    };
    let rebuilt = tto_matrix(m.space(), &symbol)?;
    let residual = max_abs_diff(rebuilt.entries(), a) / residual_scale(a);
    if !(residual <= RECOVERY_TOLERANCE) {
        return Err(Error::NotTto { residual });
    }
    Ok(symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag121() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![ONE, c(2.0), ONE]))
    }

    fn basis4() -> KernelBasis {
        KernelBasis::from_zeros(&[C64::new(0.1, 0.2), c(-0.5), C64::new(0.3, -0.6), c(0.7)]).unwrap()
    }

    fn tto4() -> OperatorMatrix {
        tto_matrix(
            &Space::Kernel(basis4()),
            &SymbolSpec::Kernel {
                psi: alloc::vec![C64::new(1.0, 0.5), c(-0.2), C64::new(0.0, 0.8), c(0.3)],
                chi: alloc::vec![c(0.6), C64::new(-0.4, 0.1), c(0.9), C64::new(0.2, 0.2)],
            },
        )
        .unwrap()
    }

    #[test]
    fn identity_and_tto_pass() {
        let id = OperatorMatrix::identity(Space::Kernel(basis4()));
        assert_eq!(is_tto(&id, 1e-12).unwrap().residual, 0.0);
        let m = tto4();
        for p in 0..4 {
            let out = is_tto_with_anchor(&m, p, 1e-9).unwrap();
            assert!(out.holds, "anchor {p}: {}", out.residual);
        }
        assert!(is_tto_with_anchor(&m, 4, 1e-9).is_err());
    }

    #[test]
    fn perturbed_tto_fails() {
        let m = tto4();
        let mut e = m.entries().clone();
        e[(2, 3)] += c(0.1);
        let out = is_tto(&m.with_entries(e).unwrap(), 1e-9).unwrap();
        assert!(!out.holds && out.residual > 1e-4);
    }

    #[test]
    fn persymmetric_non_toeplitz_witness() {
        let op = OperatorMatrix::new(diag121(), Space::Monomial(3)).unwrap();
        assert!(!is_tto(&op, 1e-9).unwrap().holds);
        assert!(toeplitz_residual(&diag121()) >= 0.5);
        let bh = brown_halmos_residuals(&op).unwrap();
        let hit = bh.iter().find(|r| r.k == 0 && r.l == 1 && r.side == TraceSide::Column).unwrap();
        assert_eq!(hit.value, 1.0);
    }

    #[test]
    fn brown_halmos_on_toeplitz() {
        let coeffs: Vec<C64> = (0..7).map(|d| C64::new(d as f64 * 0.3 - 1.0, 0.1 * d as f64)).collect();
        let op = tto_matrix(&Space::Monomial(4), &SymbolSpec::Trig(coeffs)).unwrap();
        let bh = brown_halmos_residuals(&op).unwrap();
        assert_eq!(bh.len(), 2 * 10);
        assert!(bh.iter().all(|r| r.value <= 1e-12));
        let shift = tto_matrix(
            &Space::Monomial(3),
            &SymbolSpec::Trig(alloc::vec![ZERO, ZERO, ZERO, ONE, ZERO]),
        )
        .unwrap();
        assert!(brown_halmos_residuals(&shift).unwrap().iter().all(|r| r.value == 0.0));
        let kern = OperatorMatrix::identity(Space::Kernel(basis4()));
        assert!(matches!(brown_halmos_residuals(&kern), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn recover_identity_and_round_trip() {
        let id = OperatorMatrix::identity(Space::Kernel(basis4()));
        match recover_symbol(&id).unwrap() {
            SymbolSpec::Kernel { psi, chi } => {
                let basis = basis4();
                let psi_vals = basis.values_at_zeros(&psi).unwrap();
                assert!(psi_vals.iter().all(|v| (v - ONE).norm() < 1e-9));
                assert!(chi.iter().all(|v| v.norm() < 1e-9));
            }
            other => panic!("unexpected {other:?}"),
        }
        let m = tto4();
        let symbol = recover_symbol(&m).unwrap();
        if let SymbolSpec::Kernel { chi, .. } = &symbol {
            let chi0: C64 = chi.iter().sum();
            assert!(chi0.norm() < 1e-9);
        }
        let rebuilt = tto_matrix(m.space(), &symbol).unwrap();
        assert!(max_abs_diff(rebuilt.entries(), m.entries()) < 1e-8);
    }

    #[test]
    fn recover_rejects_non_tto() {
        let op = OperatorMatrix::new(diag121(), Space::Monomial(3)).unwrap();
        assert!(matches!(recover_symbol(&op), Err(Error::NotTto { .. })));
        let mut e = tto4().into_entries();
        e[(0, 3)] += c(0.5);
        let bad = OperatorMatrix::new(e, Space::Kernel(basis4())).unwrap();
        assert!(matches!(recover_symbol(&bad), Err(Error::NotTto { .. })));
    }

    #[test]
    fn example3_equations_on_displayed_matrix() {
        let w = UnitDiskPoint::new(C64::new(0.3, 0.2)).unwrap();
        let cs = [C64::new(0.2, -0.1), c(0.7), C64::new(-0.3, 0.4), c(1.1), C64::new(0.0, -0.9)];
        let op = tto_matrix(&Space::Example3(w), &SymbolSpec::Example3(cs)).unwrap();
        let r = example3_equation_residuals(op.entries(), w).unwrap();
        assert!(r.iter().all(|&x| x < 1e-10), "{r:?}");
        assert!(is_tto(&op, 1e-10).unwrap().holds);
        let back = recover_symbol(&op).unwrap();
        if let SymbolSpec::Example3(got) = back {
            for (g, e) in got.iter().zip(cs.iter()) {
                assert!((g - e).norm() < 1e-10);
            }
        }
    }
}
