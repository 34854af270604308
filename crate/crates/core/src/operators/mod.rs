//! Operator matrices on model spaces.
//!
//! Matrices follow the column convention `A e_j = Σ_i b_{i,j} e_i`, where
//! `e_j` is the active basis: reproducing kernels `k_j` at distinct zeros,
//! monomials `z^j` for `K²_{z^N}`, or `{1, z, z² k_w/‖k_w‖}` for the
//! degree-three product `z²(w − z)/(1 − w̄ z)`.

pub(crate) mod compress;
pub(crate) mod membership;
pub(crate) mod symmetry;
mod transform;
mod tto;

use alloc::vec::Vec;


pub use compress::{chain_c_symmetry, compress, compress_chain, compress_from_tail};
pub use membership::{
    brown_halmos_residuals, example3_equation_residuals, is_tto, is_tto_with_anchor, recover_symbol,
    toeplitz_residual, BrownHalmosResidual, TraceSide, RECOVERY_TOLERANCE,
};
pub use symmetry::{adjoint, c_symmetry_defect, is_c_symmetric, persymmetry_residual, trace_rank_one};
pub use transform::{crespo_transform, SingleZeroTransform};
pub use tto::{tto_matrix, tto_matrix_quadrature};

use crate::blaschke::{FiniteBlaschke, UnitDiskPoint};
use crate::error::{Error, Result};
use crate::linalg::{is_finite, CMatrix, C64};
use crate::model_space::{example3_blaschke, KernelBasis};

/// Which basis an [`OperatorMatrix`] is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Kernel,
    Monomial,
    Example3,
}

impl BasisTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisTag::Kernel => "kernel",
            BasisTag::Monomial => "monomial",
            BasisTag::Example3 => "example3",
        }
    }
}

/// A model space together with its coordinate basis.
#[derive(Debug, Clone)]
pub enum Space {
    /// `K²_B` for distinct zeros, kernel basis.
    Kernel(KernelBasis),
    /// `K²_{z^N}`, monomial basis.
    Monomial(usize),
    /// `K²_B` for `B = z²(w − z)/(1 − w̄ z)`, basis `{1, z, z² k_w/‖k_w‖}`.
    Example3(UnitDiskPoint),
}

impl Space {
    /// Choose the space matching `tag` for `blaschke`, validating that the
    /// zeros fit the basis.
    pub fn from_parts(blaschke: &FiniteBlaschke, tag: BasisTag) -> Result<Self> {
        match tag {
            BasisTag::Kernel => Ok(Space::Kernel(KernelBasis::new(blaschke.clone())?)),
            BasisTag::Monomial => {
                if blaschke.zeros().iter().any(|a| a.value().norm() != 0.0) {
                    return Err(Error::BasisMismatch("monomial basis needs all zeros at the origin"));
                }
                Ok(Space::Monomial(blaschke.degree()))
            }
            BasisTag::Example3 => {
                let z = blaschke.zero_values();
                let shape_ok = z.len() == 3 && z[0].norm() == 0.0 && z[1].norm() == 0.0 && z[2].norm() > 0.0;
                if !shape_ok {
                    return Err(Error::BasisMismatch("example3 basis needs zeros {0, 0, w} with w ≠ 0"));
                }
                Ok(Space::Example3(blaschke.zeros()[2]))
            }
        }
    }

    pub fn tag(&self) -> BasisTag {
        match self {
            Space::Kernel(_) => BasisTag::Kernel,
            Space::Monomial(_) => BasisTag::Monomial,
            Space::Example3(_) => BasisTag::Example3,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Kernel(b) => b.degree(),
            Space::Monomial(n) => *n,
            Space::Example3(_) => 3,
        }
    }

    pub fn blaschke(&self) -> FiniteBlaschke {
        match self {
            Space::Kernel(b) => b.blaschke().clone(),
            Space::Monomial(n) => FiniteBlaschke::monomial(*n),
            Space::Example3(w) => example3_blaschke(*w),
        }
    }

    pub fn kernel_basis(&self) -> Result<&KernelBasis> {
        match self {
            Space::Kernel(b) => Ok(b),
            other => Err(Error::BasisMismatch(other.tag().as_str())),
        }
    }
}

/// A square matrix tagged with the model space and basis it acts on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: CMatrix,
    space: Space,
}

impl OperatorMatrix {
    pub fn new(entries: CMatrix, space: Space) -> Result<Self> {
        if !entries.is_square() || !is_finite(&entries) {
            return Err(Error::MalformedMatrix);
        }
        if entries.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: entries.nrows(),
            });
        }
        Ok(Self { entries, space })
    }

    pub fn identity(space: Space) -> Self {
        let n = space.dim();
        Self {
            entries: CMatrix::identity(n, n),
            space,
        }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn basis(&self) -> BasisTag {
        self.space.tag()
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn blaschke(&self) -> FiniteBlaschke {
        self.space.blaschke()
    }

    /// Same space, new entries.
    pub fn with_entries(&self, entries: CMatrix) -> Result<Self> {
        Self::new(entries, self.space.clone())
    }
}

/// Symbol `φ = ψ + conj(χ)` of a truncated Toeplitz operator.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec {
    /// `ψ = Σ psi_j k_j`, `χ = Σ chi_j k_j` in the kernel basis.
    Kernel { psi: Vec<C64>, chi: Vec<C64> },
    /// The same data given as point values `ψ(a_j)`, `χ(a_j)` at the zeros.
    /// The operator only depends on these values, and no Gram solve is needed
    /// to pass from an analytic symbol to its matrix.
    KernelValues { psi: Vec<C64>, chi: Vec<C64> },
    /// Fourier coefficients `c_{−(N−1)}, …, c_{N−1}` for `K²_{z^N}`.
    Trig(Vec<C64>),
    /// `(c_{−2}, c_{−1}, c_0, c_1, c_2)` for the degree-three example, i.e.
    /// `φ = c_{−2} conj(z² k_w)/‖k_w‖ + c_{−1} z̄ + c_0 + c_1 z + c_2 z² k_w/‖k_w‖`.
    Example3([C64; 5]),
}

/// Outcome of a yes/no structural test with its scale-free residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub residual: f64,
}

impl CheckOutcome {
    pub(crate) fn from_residual(residual: f64, tol: f64) -> Self {
        Self {
            holds: residual <= tol,
            residual,
        }
    }
}
