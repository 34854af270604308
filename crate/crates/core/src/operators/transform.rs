use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::blaschke::{FiniteBlaschke, UnitDiskPoint};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, CMatrix, C64, ONE, ZERO};
use crate::model_space::{conj_apply, FunctionSamples, OrthonormalBasis, Subspace};

/// The unitary `U f(z) = √(1 − |a|²)/(1 − ā z) · f(b_a(z))` from
/// `K²_{z^n}` onto `K²_{b_a^n}`, `b_a(z) = (z − a)/(1 − ā z)`.
///
/// `matrix[(i, j)] = ⟨U z^j, e_i⟩` where `{e_i}` is the Gram–Schmidt
/// orthonormalization of `z^i/(1 − ā z)^{i+1}` (nested, so leading blocks
/// are the compressions to `K²_{b_a^m}`).
#[derive(Debug, Clone)]
pub struct SingleZeroTransform {
    pub a: UnitDiskPoint,
    pub n: usize,
    pub target: OrthonormalBasis,
    pub matrix: CMatrix,
}

/// Builds [`SingleZeroTransform`] on a grid of `size` points.
pub fn crespo_transform(a: UnitDiskPoint, n: usize, size: usize) -> Result<SingleZeroTransform> {
    if n == 0 {
        return Err(Error::InvalidConfig("transform degree must be positive"));
    }
    let target = OrthonormalBasis::single_zero(a, n, size)?;
    let mut matrix = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut coeffs = alloc::vec![ZERO; n];
        coeffs[j] = ONE;
        let image = apply_polynomial(a, &coeffs, size)?;
        for (i, c) in target.coordinates(&image)?.into_iter().enumerate() {
            matrix[(i, j)] = c;
        }
    }
    Ok(SingleZeroTransform { a, n, target, matrix })
}

/// Samples of `U(Σ c_k z^k)`.
fn apply_polynomial(a: UnitDiskPoint, coeffs: &[C64], size: usize) -> Result<FunctionSamples> {
    let av = a.value();
    let s = (1.0 - av.norm_sqr()).sqrt();
    FunctionSamples::from_fn(size, |z| {
        let den = ONE - av.conj() * z;
        let b = (z - av) / den;
        let p = coeffs.iter().rev().fold(ZERO, |acc, &c| acc * b + c);
        s * p / den
    })
}

impl SingleZeroTransform {
    /// Samples of `U f` for `f = Σ c_k z^k ∈ K²_{z^n}`.
    pub fn apply(&self, coeffs: &[C64]) -> Result<FunctionSamples> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: coeffs.len() });
        }
        apply_polynomial(self.a, coeffs, self.target.grid_size())
    }

    /// `max |UᴴU − I|`.
    pub fn unitarity_deficit(&self) -> f64 {
        max_abs_diff(&(self.matrix.adjoint() * &self.matrix), &CMatrix::identity(self.n, self.n))
    }

    /// `‖U C_{z^n} f − C_{b_a^n} U f‖` in L² of the circle.
    pub fn intertwining_residual(&self, coeffs: &[C64]) -> Result<f64> {
        // C_{z^n} Σ c_k z^k = Σ conj(c_k) z^{n−1−k}
        let reflected: Vec<C64> = coeffs.iter().rev().map(|c| c.conj()).collect();
        let lhs = self.apply(&reflected)?;
        let rhs = conj_apply(&FiniteBlaschke::single_zero_power(self.a, self.n), &self.apply(coeffs)?)?;
        let mut diff = lhs;
        diff.add_scaled(&rhs, -ONE)?;
        Ok(diff.norm())
    }

    /// `U M Uᴴ`: a monomial-basis matrix on `K²_{z^n}` carried to the target
    /// orthonormal basis of `K²_{b_a^n}`.
    pub fn transport(&self, m: &CMatrix) -> Result<CMatrix> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: m.nrows() });
        }
        Ok(&self.matrix * m * self.matrix.adjoint())
    }

    /// `K²_{b_a^m}` as the span of the first `m` target vectors.
    pub fn level(&self, m: usize) -> Result<Subspace> {
        if m == 0 || m > self.n {
            return Err(Error::IndexOutOfRange { index: m, limit: self.n });
        }
        self.target.leading(FiniteBlaschke::single_zero_power(self.a, m), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_space::{quadrature_inner, DEFAULT_GRID};

    #[test]
    fn degree_one_maps_one_to_normalized_kernel() {
        let a = UnitDiskPoint::new(C64::new(0.3, -0.4)).unwrap();
        let t = crespo_transform(a, 1, DEFAULT_GRID).unwrap();
        let u1 = t.apply(&[ONE]).unwrap();
        let norm = quadrature_inner(&u1, &u1).unwrap();
        assert!((norm.re - 1.0).abs() < 1e-12);
        assert!(t.unitarity_deficit() < 1e-12);
    }

    #[test]
    fn origin_is_identity() {
        let t = crespo_transform(UnitDiskPoint::origin(), 4, 256).unwrap();
        assert!(max_abs_diff(&t.matrix, &CMatrix::identity(4, 4)) < 1e-13);
    }

    #[test]
    fn unitary_and_intertwining() {
        let a = UnitDiskPoint::real(0.5).unwrap();
        let t = crespo_transform(a, 3, DEFAULT_GRID).unwrap();
        assert!(t.unitarity_deficit() < 1e-10);
        let f = [C64::new(0.3, 1.0), C64::new(-0.7, 0.2), C64::new(0.5, -0.5)];
        assert!(t.intertwining_residual(&f).unwrap() < 1e-9);
        assert!(t.apply(&f[..2]).is_err());
        assert!(t.level(0).is_err() && t.level(4).is_err());
    }

    #[test]
    fn transported_toeplitz_is_chain_symmetric() {
        let a = UnitDiskPoint::new(C64::new(0.0, 0.5)).unwrap();
        let t = crespo_transform(a, 3, DEFAULT_GRID).unwrap();
        let toeplitz = CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 - j as f64, 0.5));
        let moved = t.transport(&toeplitz).unwrap();
        for m in 1..=3 {
            let level = t.level(m).unwrap();
            let block = moved.view((0, 0), (m, m)).into_owned();
            let defect = level.symmetry_defect(&block);
            assert!(crate::linalg::max_abs(&defect) < 1e-9);
        }
    }
}
