use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::blaschke::FiniteBlaschke;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Default number of grid points on the unit circle.
pub const DEFAULT_GRID: usize = 4096;
/// Smallest grid accepted for oracle use.
pub const MIN_GRID: usize = 256;

/// Values of a function at the `M` points `exp(2πi t/M)`, `M` a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSamples {
    values: Vec<C64>,
}

/// The `t`-th of `size` equispaced points on the unit circle.
pub fn grid_point(t: usize, size: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * t as f64 / size as f64)
}

fn check_size(size: usize) -> Result<()> {
    if size < MIN_GRID || !size.is_power_of_two() {
        return Err(Error::InvalidGrid {
            size,
            min: MIN_GRID,
        });
    }
    Ok(())
}

impl FunctionSamples {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        check_size(values.len())?;
        Ok(Self { values })
    }

    /// Sample `f` on a grid of `size` points.
    pub fn from_fn<F: FnMut(C64) -> C64>(size: usize, mut f: F) -> Result<Self> {
        check_size(size)?;
        Ok(Self {
            values: (0..size).map(|t| f(grid_point(t, size))).collect(),
        })
    }

    pub fn zeros(size: usize) -> Result<Self> {
        Self::from_fn(size, |_| C64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn point(&self, t: usize) -> C64 {
        grid_point(t, self.values.len())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// `L²(m)` norm through [`quadrature_inner`].
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        (sum / self.len() as f64).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: C64) -> Result<()> {
        self.check_same(other)?;
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += w * c;
        }
        Ok(())
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Multiply by a function of the grid point.
    pub fn multiply_by<F: FnMut(C64) -> C64>(&self, mut f: F) -> Self {
        let size = self.len();
        Self {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(t, v)| v * f(grid_point(t, size)))
                .collect(),
        }
    }

    /// Linear combination `Σ c_k f_k` of equally sized samples.
    pub fn combination(terms: &[(C64, &FunctionSamples)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptySubset)?;
        let mut acc = first.1.scaled(first.0);
        for (c, f) in &terms[1..] {
            acc.add_scaled(f, *c)?;
        }
        Ok(acc)
    }
}

/// `⟨f, g⟩ = (1/M) Σ f(z_t) conj(g(z_t))`, exact for trigonometric
/// polynomials of degree below `M/2`.
pub fn quadrature_inner(f: &FunctionSamples, g: &FunctionSamples) -> Result<C64> {
    f.check_same(g)?;
    let sum: C64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(sum / f.len() as f64)
}

/// `(C_θ f)(z) = θ(z) conj(z f(z))` on the grid.
pub fn conj_apply(inner: &FiniteBlaschke, f: &FunctionSamples) -> Result<FunctionSamples> {
    let size = f.len();
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let z = grid_point(t, size);
            inner.eval(z).map(|theta| theta * (z * v).conj())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctionSamples { values })
}
