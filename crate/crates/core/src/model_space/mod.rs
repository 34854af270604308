//! Model spaces `K²_B = H² ⊖ B H²` of finite Blaschke products.
//!
//! The main coordinate system is the reproducing-kernel basis
//! `k_j(z) = 1/(1 − ā_j z)` at the (distinct) zeros of `B`. It is not
//! orthonormal, so inner products go through the Gram matrix
//! `⟨k_j, k_i⟩ = 1/(1 − ā_j a_i)`, and coefficient extraction goes through
//! the biorthogonality `⟨C_B k_j, k_i⟩ = δ_{ij} B'(a_j)`.
//!
//! Prefix products `B_n` (first `n` zeros) carry the same unimodular constant
//! as `B`, so `B_N = B`. None of the matrix formulas depend on that constant.

mod orthonormal;
mod samples;

use alloc::vec::Vec;


pub use orthonormal::{example3_blaschke, OrthonormalBasis, Subspace};
pub use samples::{conj_apply, grid_point, quadrature_inner, FunctionSamples, DEFAULT_GRID, MIN_GRID};

use crate::blaschke::{FiniteBlaschke, UnitDiskPoint};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};

/// Relative re-synthesis residual accepted by [`KernelBasis::expand`].
pub const EXPANSION_TOLERANCE: f64 = 1e-8;

/// Kernel basis `{k_1, …, k_N}` of `K²_B` with cached Gram matrix,
/// derivative values and prefix-product tables.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    blaschke: FiniteBlaschke,
    zeros: Vec<C64>,
    gram: CMatrix,
    bprime: Vec<C64>,
    /// `prefix_values[(n − 1) N + m] = B_n(a_m)`.
    prefix_values: Vec<C64>,
    /// `prefix_derivs[(n − 1) N + m] = B_n'(a_m)`.
    prefix_derivs: Vec<C64>,
}

impl KernelBasis {
    pub fn new(blaschke: FiniteBlaschke) -> Result<Self> {
        if blaschke.degree() == 0 {
            return Err(Error::InvalidConfig("kernel basis needs at least one zero"));
        }
        if let Some((first, second)) = blaschke.first_duplicate() {
            return Err(Error::DuplicateZeros { first, second });
        }
        let zeros = blaschke.zero_values();
        let n = zeros.len();
        let gram = CMatrix::from_fn(n, n, |i, j| ONE / (ONE - zeros[j].conj() * zeros[i]));

        let c = blaschke.overall_constant();
        let mut prefix_values = alloc::vec![ZERO; n * n];
        let mut prefix_derivs = alloc::vec![ZERO; n * n];
        for (m, &z) in zeros.iter().enumerate() {
            let mut value = ONE;
            let mut deriv = ZERO;
            for (k, &a) in zeros.iter().enumerate() {
                let den = ONE - a.conj() * z;
                let f = (z - a) / den;
                deriv = deriv * f + value * (1.0 - a.norm_sqr()) / (den * den);
                value *= f;
                prefix_values[k * n + m] = c * value;
                prefix_derivs[k * n + m] = c * deriv;
            }
        }
        let bprime = prefix_derivs[(n - 1) * n..].to_vec();
        Ok(Self {
            blaschke,
            zeros,
            gram,
            bprime,
            prefix_values,
            prefix_derivs,
        })
    }

    pub fn from_zeros(zeros: &[C64]) -> Result<Self> {
        Self::new(FiniteBlaschke::from_values(zeros)?)
    }

    pub fn blaschke(&self) -> &FiniteBlaschke {
        &self.blaschke
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    /// `G[i][j] = ⟨k_j, k_i⟩`.
    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// `B'(a_j)` for every zero.
    pub fn bprime(&self) -> &[C64] {
        &self.bprime
    }

    fn check_sub_degree(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.degree() {
            return Err(Error::IndexOutOfRange {
                index: n,
                limit: self.degree(),
            });
        }
        Ok(())
    }

    fn check_index(&self, m: usize, limit: usize) -> Result<()> {
        if m >= limit {
            return Err(Error::IndexOutOfRange { index: m, limit });
        }
        Ok(())
    }

    /// `B_n(a_m)` for `1 ≤ n ≤ N`.
    pub fn prefix_value(&self, n: usize, m: usize) -> C64 {
        self.prefix_values[(n - 1) * self.degree() + m]
    }

    /// `B_n'(a_m)` for `1 ≤ n ≤ N`.
    pub fn prefix_derivative(&self, n: usize, m: usize) -> C64 {
        self.prefix_derivs[(n - 1) * self.degree() + m]
    }

    /// Basis of `K²_{B_n}` given by the first `n` kernels.
    pub fn sub_basis(&self, n: usize) -> Result<KernelBasis> {
        self.check_sub_degree(n)?;
        let (prefix, _) = self.blaschke.partial_product(n)?;
        KernelBasis::new(prefix.with_front_constant(self.blaschke.overall_constant())?)
    }

    /// The same space with the kernels reordered.
    pub fn permuted(&self, order: &[usize]) -> Result<KernelBasis> {
        KernelBasis::new(self.blaschke.permuted(order)?)
    }

    /// `k_j(z)`.
    pub fn kernel(&self, j: usize, z: C64) -> C64 {
        ONE / (ONE - self.zeros[j].conj() * z)
    }

    pub fn kernel_samples(&self, j: usize, size: usize) -> Result<FunctionSamples> {
        self.check_index(j, self.degree())?;
        FunctionSamples::from_fn(size, |z| self.kernel(j, z))
    }

    /// Samples of `C_n k_j = B_n(z)/(z − a_j)`.
    pub fn conj_kernel_samples(&self, n: usize, j: usize, size: usize) -> Result<FunctionSamples> {
        self.check_sub_degree(n)?;
        self.check_index(j, n)?;
        let (prefix, _) = self.blaschke.partial_product(n)?;
        let c = self.blaschke.overall_constant();
        let a = self.zeros[j];
        let values = (0..size)
            .map(|t| {
                let z = grid_point(t, size);
                prefix.eval(z).map(|b| c * b / (z - a))
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionSamples::new(values)
    }

    /// Samples of `Σ c_j k_j`.
    pub fn synthesize(&self, coeffs: &[C64], size: usize) -> Result<FunctionSamples> {
        if coeffs.len() > self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: coeffs.len(),
            });
        }
        FunctionSamples::from_fn(size, |z| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * self.kernel(j, z))
                .sum()
        })
    }

    /// Values `f(a_m)` of `f = Σ c_j k_j` at every zero.
    pub fn values_at_zeros(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        if coeffs.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: coeffs.len(),
            });
        }
        Ok((0..self.degree())
            .map(|m| (0..self.degree()).map(|j| self.gram[(m, j)] * coeffs[j]).sum())
            .collect())
    }

    /// `⟨C_n k_j, k_m⟩` for `j < n ≤ N`, `m < N` (0-based indices):
    /// `0` when `m < n`, `m ≠ j`; `B_n'(a_j)` when `m = j`; and
    /// `B_n(a_m)/(a_m − a_j)` when `m ≥ n`.
    pub fn conj_pairing(&self, n: usize, j: usize, m: usize) -> Result<C64> {
        self.check_sub_degree(n)?;
        self.check_index(j, n)?;
        self.check_index(m, self.degree())?;
        Ok(if m < n {
            if m == j {
                self.prefix_derivative(n, j)
            } else {
                ZERO
            }
        } else {
            self.prefix_value(n, m) / (self.zeros[m] - self.zeros[j])
        })
    }

    /// Coefficients of `P_n k_m` in `{k_1, …, k_n}` for `m ≥ n`:
    /// `d_j = conj(B_n(a_m)) / (conj(B_n'(a_j)) (ā_m − ā_j))`.
    pub fn project_kernel(&self, n: usize, m: usize) -> Result<Vec<C64>> {
        self.check_sub_degree(n)?;
        self.check_index(m, self.degree())?;
        if m < n {
            return Err(Error::IndexOutOfRange { index: m, limit: n });
        }
        let bm = self.prefix_value(n, m).conj();
        let am = self.zeros[m].conj();
        Ok((0..n)
            .map(|j| bm / (self.prefix_derivative(n, j).conj() * (am - self.zeros[j].conj())))
            .collect())
    }

    /// Kernel coefficients `c_j = ⟨f, C_B k_j⟩ / conj(B'(a_j))` of `f`,
    /// with inner products computed by quadrature.
    pub fn expand(&self, f: &FunctionSamples) -> Result<Vec<C64>> {
        let n = self.degree();
        let coeffs = (0..n)
            .map(|j| {
                let ck = self.conj_kernel_samples(n, j, f.len())?;
                Ok(quadrature_inner(f, &ck)? / self.bprime[j].conj())
            })
            .collect::<Result<Vec<_>>>()?;
        let rebuilt = self.synthesize(&coeffs, f.len())?;
        let mut diff = f.clone();
        diff.add_scaled(&rebuilt, -ONE)?;
        let residual = diff.norm() / f.norm().max(f64::MIN_POSITIVE);
        if residual > EXPANSION_TOLERANCE {
            return Err(Error::NotInModelSpace { residual });
        }
        Ok(coeffs)
    }

    /// Residuals of `B_{n−1}(a_n)/B_n'(a_n) = 1 − |a_n|²` and of
    /// `B'_{n−1}(a_j)/B_n'(a_j) = (1 − ā_n a_j)/(a_j − a_n)` for `j < n − 1`
    /// (0-based), for `2 ≤ n ≤ N`. The second is relative to `max(1, |rhs|)`.
    pub fn ratio_identities(&self, n: usize) -> Result<(f64, f64)> {
        self.check_sub_degree(n)?;
        if n < 2 {
            return Err(Error::IndexOutOfRange { index: n, limit: 2 });
        }
        let last = n - 1;
        let an = self.zeros[last];
        let lhs = self.prefix_value(n - 1, last) / self.prefix_derivative(n, last);
        let first = (lhs - C64::new(1.0 - an.norm_sqr(), 0.0)).norm();
        let second = (0..last).fold(0.0f64, |acc, j| {
            let aj = self.zeros[j];
            let lhs = self.prefix_derivative(n - 1, j) / self.prefix_derivative(n, j);
            let rhs = (ONE - an.conj() * aj) / (aj - an);
            acc.max((lhs - rhs).norm() / rhs.norm().max(1.0))
        });
        Ok((first, second))
    }
}

/// `k^B_w(z) = (1 − conj(B(w)) B(z))/(1 − w̄ z)` for an arbitrary point `w`.
#[derive(Debug, Clone)]
pub struct GeneralKernel {
    w: UnitDiskPoint,
    blaschke: FiniteBlaschke,
    b_at_w: C64,
}

impl GeneralKernel {
    pub fn new(w: UnitDiskPoint, blaschke: FiniteBlaschke) -> Result<Self> {
        let b_at_w = blaschke.eval(w.value())?;
        Ok(Self { w, blaschke, b_at_w })
    }

    pub fn point(&self) -> UnitDiskPoint {
        self.w
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let bz = self.blaschke.eval(z)?;
        Ok((ONE - self.b_at_w.conj() * bz) / (ONE - self.w.value().conj() * z))
    }

    /// `‖k^B_w‖² = (1 − |B(w)|²)/(1 − |w|²)`.
    pub fn norm_sqr(&self) -> f64 {
        (1.0 - self.b_at_w.norm_sqr()) / (1.0 - self.w.value().norm_sqr())
    }

    pub fn samples(&self, size: usize) -> Result<FunctionSamples> {
        let values = (0..size)
            .map(|t| self.eval(grid_point(t, size)))
            .collect::<Result<Vec<_>>>()?;
        FunctionSamples::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn two_point() -> KernelBasis {
        KernelBasis::from_zeros(&[c(0.0), c(0.5)]).unwrap()
    }

    #[test]
    fn gram_examples() {
        let one = KernelBasis::from_zeros(&[c(0.0)]).unwrap();
        assert_eq!(one.gram()[(0, 0)], ONE);
        let g = two_point().gram().clone();
        let expected = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(4.0 / 3.0)]);
        assert!(max_abs_diff(&g, &expected) < 1e-15);
        let size = DEFAULT_GRID;
        let basis = two_point();
        for i in 0..2 {
            for j in 0..2 {
                let q = quadrature_inner(
                    &basis.kernel_samples(j, size).unwrap(),
                    &basis.kernel_samples(i, size).unwrap(),
                )
                .unwrap();
                assert!((q - g[(i, j)]).norm() < 1e-10);
            }
        }
        assert!(matches!(
            KernelBasis::from_zeros(&[c(0.2), c(0.2)]),
            Err(Error::DuplicateZeros { .. })
        ));
    }

    #[test]
    fn conj_pairing_examples() {
        let basis = two_point();
        assert_eq!(basis.conj_pairing(2, 0, 1).unwrap(), ZERO);
        assert!((basis.conj_pairing(2, 1, 1).unwrap() - basis.bprime()[1]).norm() < 1e-15);
        assert!((basis.conj_pairing(1, 0, 1).unwrap() - c(1.0)).norm() < 1e-15);
        let q = quadrature_inner(
            &basis.conj_kernel_samples(1, 0, DEFAULT_GRID).unwrap(),
            &basis.kernel_samples(1, DEFAULT_GRID).unwrap(),
        )
        .unwrap();
        assert!((q - c(1.0)).norm() < 1e-10);
        assert!(basis.conj_pairing(1, 1, 0).is_err());
        assert!(basis.conj_pairing(3, 0, 0).is_err());
    }

    #[test]
    fn project_kernel_examples() {
        let basis = two_point();
        let d = basis.project_kernel(1, 1).unwrap();
        assert!((d[0] - c(1.0)).norm() < 1e-15);
        assert!(basis.project_kernel(2, 1).is_err());
        assert!(basis.project_kernel(1, 0).is_err());
    }

    #[test]
    fn ratio_identity_examples() {
        let basis = two_point();
        // B_1(a_2)/B_2'(a_2) = 0.5/(2/3) = 0.75 = 1 − 0.25.
        assert!((basis.prefix_value(1, 1) - c(0.5)).norm() < 1e-15);
        assert!((basis.prefix_derivative(2, 1) - c(2.0 / 3.0)).norm() < 1e-15);
        // B_1'(0)/B_2'(0) = 1/(−0.5) = (1 − 0)/(0 − 0.5).
        assert!((basis.prefix_derivative(1, 0) / basis.prefix_derivative(2, 0) - c(-2.0)).norm() < 1e-15);
        let (r3, r4) = basis.ratio_identities(2).unwrap();
        assert!(r3 < 1e-15 && r4 < 1e-15);
        assert!(basis.ratio_identities(1).is_err());
    }

    #[test]
    fn expand_examples() {
        let basis = two_point();
        let size = DEFAULT_GRID;
        let e2 = basis.expand(&basis.kernel_samples(1, size).unwrap()).unwrap();
        assert!((e2[0]).norm() < 1e-12 && (e2[1] - ONE).norm() < 1e-12);

        // C_B k_1 = B/(z − a_1), compared with the Gram solve of its pairings.
        let f = basis.conj_kernel_samples(2, 0, size).unwrap();
        let coeffs = basis.expand(&f).unwrap();
        let rhs = CMatrix::from_fn(2, 1, |i, _| {
            quadrature_inner(&f, &basis.kernel_samples(i, size).unwrap()).unwrap()
        });
        let oracle = crate::linalg::solve_guarded(basis.gram(), &rhs).unwrap();
        for j in 0..2 {
            assert!((coeffs[j] - oracle[(j, 0)]).norm() < 1e-10);
        }

        // θ·h lies in the orthogonal complement.
        let bl = basis.blaschke().clone();
        let outside = FunctionSamples::from_fn(size, |z| bl.eval(z).unwrap() * (ONE + z)).unwrap();
        assert!(matches!(
            basis.expand(&outside),
            Err(Error::NotInModelSpace { .. })
        ));
    }

    #[test]
    fn general_kernel_norm() {
        let bl = FiniteBlaschke::from_values(&[c(0.0), C64::new(0.3, 0.4)]).unwrap();
        let k = GeneralKernel::new(UnitDiskPoint::new(C64::new(-0.2, 0.5)).unwrap(), bl).unwrap();
        let s = k.samples(DEFAULT_GRID).unwrap();
        let q = quadrature_inner(&s, &s).unwrap();
        assert!((q.re - k.norm_sqr()).abs() < 1e-10 && q.im.abs() < 1e-12);
    }

    fn separated_zeros(n: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((0.0..0.8f64, 0.0..2.0 * PI), n).prop_filter_map("separated", |pts| {
            let z: Vec<C64> = pts.iter().map(|&(r, t)| C64::from_polar(r, t)).collect();
            let ok = (0..z.len()).all(|i| (i + 1..z.len()).all(|j| (z[i] - z[j]).norm() > 0.05));
            ok.then_some(z)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn gram_is_hermitian_positive_definite(zeros in (1usize..8).prop_flat_map(separated_zeros)) {
            let basis = KernelBasis::from_zeros(&zeros).unwrap();
            let g = basis.gram();
            prop_assert!(max_abs_diff(g, &g.adjoint()) < 1e-15);
            let eig = g.clone().symmetric_eigenvalues();
            prop_assert!(eig.iter().all(|&l| l > 0.0));
        }

        #[test]
        fn ratio_identities_hold(zeros in (2usize..8).prop_flat_map(separated_zeros)) {
            let basis = KernelBasis::from_zeros(&zeros).unwrap();
            for n in 2..=zeros.len() {
                let (r3, r4) = basis.ratio_identities(n).unwrap();
                prop_assert!(r3 <= 1e-12 && r4 <= 1e-12, "{} {}", r3, r4);
            }
        }

        #[test]
        fn projection_matches_normal_equations(zeros in separated_zeros(5)) {
            let basis = KernelBasis::from_zeros(&zeros).unwrap();
            let (n, m) = (3, 4);
            let d = basis.project_kernel(n, m).unwrap();
            let g = basis.gram();
            let gn = g.view((0, 0), (n, n)).into_owned();
            let rhs = CMatrix::from_fn(n, 1, |i, _| g[(i, m)]);
            let oracle = crate::linalg::solve_guarded(&gn, &rhs).unwrap();
            for j in 0..n {
                prop_assert!((d[j] - oracle[(j, 0)]).norm() <= 1e-10 * oracle[(j, 0)].norm().max(1.0));
            }
        }
    }
}
