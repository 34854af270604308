//! Model spaces of Blaschke products, truncated Toeplitz operators (TTOs)
//! and executable checks of their characterization by conjugations.
//!
//! An operator on the model space `K²_B` of a Blaschke product `B` is a
//! truncated Toeplitz operator exactly when each of its compressions to the
//! nested spaces `K²_{B_n}` is symmetric with respect to the canonical
//! conjugation `C_{B_n}`. This crate builds every object needed to test that
//! statement numerically:
//!
//! * [`blaschke`]: finite Blaschke products, partial products, divisors and
//!   the uniform-separation constant.
//! * [`model_space`]: reproducing-kernel bases, Gram matrices, conjugations
//!   and a unit-circle quadrature oracle.
//! * [`operators`]: TTO matrices, adjoints, C-symmetry and TTO membership
//!   tests, compressions, Brown–Halmos residuals and the `U_{b_a}` transform.
//! * [`harness`]: seeded generators and verifiers producing [`harness::Report`]s.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blaschke;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod model_space;
pub mod operators;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use blaschke::{FiniteBlaschke, InfiniteBlaschkeSpec, NormalizationMode, UnitDiskPoint, ZeroSequence};
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use model_space::{FunctionSamples, KernelBasis};
pub use operators::{BasisTag, OperatorMatrix, SymbolSpec};
