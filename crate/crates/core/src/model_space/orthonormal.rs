use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use super::samples::{conj_apply, quadrature_inner, FunctionSamples};
use crate::blaschke::{FiniteBlaschke, UnitDiskPoint};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE};

/// `z²(w − z)/(1 − w̄ z)`: zeros `{0, 0, w}` with front constant `−1`.
pub fn example3_blaschke(w: UnitDiskPoint) -> FiniteBlaschke {
    FiniteBlaschke::new(alloc::vec![UnitDiskPoint::origin(), UnitDiskPoint::origin(), w])
        .with_front_constant(-ONE)
        .expect("unimodular")
}

/// An orthonormal basis of a model space `K²_θ`, held as grid samples.
///
/// Used wherever kernel bases are unavailable (repeated zeros) and for
/// compressions to divisors that are not prefixes of the zero list.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    inner: FiniteBlaschke,
    vectors: Vec<FunctionSamples>,
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
fn orthonormalize(spanning: Vec<FunctionSamples>) -> Result<Vec<FunctionSamples>> {
    let mut out: Vec<FunctionSamples> = Vec::with_capacity(spanning.len());
    for mut v in spanning {
        let original = v.norm();
        for _ in 0..2 {
            for e in &out {
                let c = quadrature_inner(&v, e)?;
                v.add_scaled(e, -c)?;
            }
        }
        let norm = v.norm();
        if !(norm > 1e-10 * original.max(1e-300)) {
            return Err(Error::DegenerateConstraints("spanning set is linearly dependent"));
        }
        out.push(v.scaled(C64::new(1.0 / norm, 0.0)));
    }
    Ok(out)
}

impl OrthonormalBasis {
    /// Gram–Schmidt of `spanning`, which must lie in `K²_inner`.
    pub fn from_spanning(inner: FiniteBlaschke, spanning: Vec<FunctionSamples>) -> Result<Self> {
        Ok(Self {
            inner,
            vectors: orthonormalize(spanning)?,
        })
    }

    /// `{1, z, …, z^{n−1}}` for `K²_{z^n}`.
    pub fn monomial(n: usize, size: usize) -> Result<Self> {
        let vectors = (0..n)
            .map(|k| FunctionSamples::from_fn(size, |z| z.powu(k as u32)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            inner: FiniteBlaschke::monomial(n),
            vectors,
        })
    }

    /// `{1, z, z² k_w/‖k_w‖}` for `K²_B`, `B = z²(w − z)/(1 − w̄ z)`.
    pub fn example3(w: UnitDiskPoint, size: usize) -> Result<Self> {
        let wv = w.value();
        let kw_norm = 1.0 / (1.0 - wv.norm_sqr()).sqrt();
        let vectors = alloc::vec![
            FunctionSamples::from_fn(size, |_| ONE)?,
            FunctionSamples::from_fn(size, |z| z)?,
            FunctionSamples::from_fn(size, |z| z * z / (ONE - wv.conj() * z) / kw_norm)?,
        ];
        Ok(Self {
            inner: example3_blaschke(w),
            vectors,
        })
    }

    /// Orthonormalization of the nested spanning set `z^j/(1 − ā z)^{j+1}`,
    /// `j < n`, of `K²_{b_a^n}`. The first `m` vectors span `K²_{b_a^m}`.
    pub fn single_zero(a: UnitDiskPoint, n: usize, size: usize) -> Result<Self> {
        let av = a.value();
        let spanning = (0..n)
            .map(|j| {
                FunctionSamples::from_fn(size, |z| {
                    z.powu(j as u32) / (ONE - av.conj() * z).powu(j as u32 + 1)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_spanning(FiniteBlaschke::single_zero_power(a, n), spanning)
    }

    pub fn inner(&self) -> &FiniteBlaschke {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[FunctionSamples] {
        &self.vectors
    }

    pub fn grid_size(&self) -> usize {
        self.vectors.first().map_or(0, FunctionSamples::len)
    }

    /// `(⟨f, e_i⟩)_i`.
    pub fn coordinates(&self, f: &FunctionSamples) -> Result<Vec<C64>> {
        self.vectors.iter().map(|e| quadrature_inner(f, e)).collect()
    }

    pub fn synthesize(&self, coords: &[C64]) -> Result<FunctionSamples> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let mut acc = FunctionSamples::zeros(self.grid_size())?;
        for (c, e) in coords.iter().zip(&self.vectors) {
            acc.add_scaled(e, *c)?;
        }
        Ok(acc)
    }

    /// Matrix `M[i][j] = ⟨op(e_j), e_i⟩` of an operator given on samples.
    pub fn matrix_of<F>(&self, op: F) -> Result<CMatrix>
    where
        F: Fn(&FunctionSamples) -> Result<FunctionSamples>,
    {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            let image = op(&self.vectors[j])?;
            for i in 0..d {
                m[(i, j)] = quadrature_inner(&image, &self.vectors[i])?;
            }
        }
        Ok(m)
    }

    /// `J[i][j] = ⟨C_θ e_j, e_i⟩`, so that `C_θ x = J conj(x)` in coordinates.
    pub fn conjugation_matrix(&self) -> Result<CMatrix> {
        self.matrix_of(|f| conj_apply(&self.inner, f))
    }

    /// The model space of a divisor `inner_sub`, spanned by `spanning`,
    /// written in the coordinates of this basis.
    pub fn subspace(&self, inner_sub: FiniteBlaschke, spanning: Vec<FunctionSamples>) -> Result<Subspace> {
        let sub = OrthonormalBasis::from_spanning(inner_sub, spanning)?;
        let d = self.dim();
        let k = sub.dim();
        let mut embedding = CMatrix::zeros(d, k);
        for (col, v) in sub.vectors.iter().enumerate() {
            for (row, c) in self.coordinates(v)?.into_iter().enumerate() {
                embedding[(row, col)] = c;
            }
        }
        let conjugation = sub.conjugation_matrix()?;
        Ok(Subspace {
            embedding,
            conjugation,
        })
    }

    /// The span of the first `n` basis vectors, as a subspace.
    pub fn leading(&self, inner_sub: FiniteBlaschke, n: usize) -> Result<Subspace> {
        self.subspace(inner_sub, self.vectors[..n].to_vec())
    }
}

/// A model subspace `K²_σ ⊂ K²_θ` given by an isometric embedding of its
/// own orthonormal coordinates into the ambient ones, plus its conjugation.
#[derive(Debug, Clone)]
pub struct Subspace {
    /// Ambient coordinates of the subspace's orthonormal basis (columns).
    pub embedding: CMatrix,
    /// `J_σ` in the subspace's own basis.
    pub conjugation: CMatrix,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.embedding.ncols()
    }

    /// `P_σ A|K²_σ` in the subspace's basis.
    pub fn compress(&self, ambient: &CMatrix) -> CMatrix {
        self.embedding.adjoint() * ambient * &self.embedding
    }

    /// `conj(J) A J − Aᵀ`, which vanishes iff `A` is `C_σ`-symmetric.
    /// Complex-linear in `A`.
    pub fn symmetry_defect(&self, compressed: &CMatrix) -> CMatrix {
        let j = &self.conjugation;
        j.map(|z| z.conj()) * compressed * j - compressed.transpose()
    }

    /// Defect of the compression of `ambient`.
    pub fn compressed_defect(&self, ambient: &CMatrix) -> CMatrix {
        self.symmetry_defect(&self.compress(ambient))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ZERO};

    #[test]
    fn example3_basis_is_orthonormal_and_in_space() {
        let w = UnitDiskPoint::new(C64::new(0.3, 0.2)).unwrap();
        let basis = OrthonormalBasis::example3(w, 4096).unwrap();
        let gram = basis.matrix_of(|f| Ok(f.clone())).unwrap();
        assert!(max_abs_diff(&gram, &CMatrix::identity(3, 3)) < 1e-12);
        // C_B maps the basis into the space: J is unitary.
        let j = basis.conjugation_matrix().unwrap();
        assert!(max_abs_diff(&(j.adjoint() * &j), &CMatrix::identity(3, 3)) < 1e-10);
    }

    #[test]
    fn monomial_conjugation_is_antidiagonal() {
        let basis = OrthonormalBasis::monomial(4, 256).unwrap();
        let j = basis.conjugation_matrix().unwrap();
        let expected = CMatrix::from_fn(4, 4, |i, k| if i + k == 3 { ONE } else { ZERO });
        assert!(max_abs_diff(&j, &expected) < 1e-14);
    }

    #[test]
    fn single_zero_basis_is_nested() {
        let a = UnitDiskPoint::new(C64::new(0.0, 0.5)).unwrap();
        let basis = OrthonormalBasis::single_zero(a, 4, 4096).unwrap();
        for n in 1..=4 {
            let sub = basis
                .leading(FiniteBlaschke::single_zero_power(a, n), n)
                .unwrap();
            let j = &sub.conjugation;
            assert!(max_abs_diff(&(j.adjoint() * j), &CMatrix::identity(n, n)) < 1e-10);
        }
    }

    #[test]
    fn dependent_span_is_rejected() {
        let f = FunctionSamples::from_fn(256, |z| z).unwrap();
        let r = OrthonormalBasis::from_spanning(FiniteBlaschke::monomial(2), alloc::vec![f.clone(), f]);
        assert!(matches!(r, Err(Error::DegenerateConstraints(_))));
    }
}
