//! Finite Blaschke products and truncations of infinite ones.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};

/// Zeros closer than this to the unit circle are rejected.
pub const DISK_MARGIN: f64 = 1e-12;
/// Two zeros closer than this are treated as coinciding.
pub const DISTINCT_ZERO_GAP: f64 = 1e-10;
const POLE_GUARD: f64 = 1e-13;

/// A point of the open unit disk, kept at least [`DISK_MARGIN`] away from
/// the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDiskPoint(C64);

impl UnitDiskPoint {
    pub fn new(value: C64) -> Result<Self> {
        if !(value.norm() < 1.0 - DISK_MARGIN) {
            return Err(Error::OutsideDisk {
                re: value.re,
                im: value.im,
            });
        }
        Ok(Self(value))
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(C64::new(x, 0.0))
    }

    pub const fn origin() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

/// How the elementary factors of the product are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    /// Factors `(z − a)/(1 − ā z)`.
    #[default]
    Plain,
    /// Factors `(ā/|a|)(a − z)/(1 − ā z)`, with the factor for `a = 0`
    /// taken as `z`. This is the form that converges for infinite products.
    Normalized,
}

/// `e^{iγ} ∏ (z − a_j)/(1 − ā_j z)` (or its normalized variant).
///
/// Repeated zeros are allowed here; kernel bases reject them separately.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBlaschke {
    zeros: Vec<UnitDiskPoint>,
    front_constant: C64,
    mode: NormalizationMode,
}

/// `(z − a)/(1 − ā z)` together with the modulus of the denominator.
#[inline]
fn factor(a: C64, z: C64) -> (C64, C64, f64) {
    let den = ONE - a.conj() * z;
    ((z - a) / den, den, den.norm())
}

/// `−ā/|a|`, with the value at the origin fixed to 1 so that the normalized
/// factor for a zero at the origin is `z`.
fn normalizing_unit(a: C64) -> C64 {
    let r = a.norm();
    if r == 0.0 {
        ONE
    } else {
        -a.conj() / r
    }
}

impl FiniteBlaschke {
    /// Plain product with front constant 1.
    pub fn new(zeros: Vec<UnitDiskPoint>) -> Self {
        Self {
            zeros,
            front_constant: ONE,
            mode: NormalizationMode::Plain,
        }
    }

    pub fn from_values(zeros: &[C64]) -> Result<Self> {
        zeros
            .iter()
            .map(|&z| UnitDiskPoint::new(z))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// `z^n`, the inner function of the monomial model space.
    pub fn monomial(n: usize) -> Self {
        Self::new(alloc::vec![UnitDiskPoint::origin(); n])
    }

    /// `b_a^n` with `b_a(z) = (z − a)/(1 − ā z)`.
    pub fn single_zero_power(a: UnitDiskPoint, n: usize) -> Self {
        Self::new(alloc::vec![a; n])
    }

    pub fn with_front_constant(mut self, c: C64) -> Result<Self> {
        let modulus = c.norm();
        if (modulus - 1.0).abs() > 1e-14 {
            return Err(Error::NonUnimodular { modulus });
        }
        self.front_constant = c;
        Ok(self)
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        let c = C64::new(gamma.cos(), gamma.sin());
        Self {
            front_constant: c,
            ..self
        }
    }

    pub fn with_mode(mut self, mode: NormalizationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn zeros(&self) -> &[UnitDiskPoint] {
        &self.zeros
    }

    pub fn zero_values(&self) -> Vec<C64> {
        self.zeros.iter().map(|a| a.value()).collect()
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn front_constant(&self) -> C64 {
        self.front_constant
    }

    /// Argument of the front constant.
    pub fn gamma(&self) -> f64 {
        self.front_constant.arg()
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    /// The unimodular constant multiplying the plain factor product: the
    /// front constant, times `λ_N` in normalized mode.
    pub fn overall_constant(&self) -> C64 {
        match self.mode {
            NormalizationMode::Plain => self.front_constant,
            NormalizationMode::Normalized => {
                self.front_constant * normalization_constant(&self.zeros)
            }
        }
    }

    /// True when the zeros are pairwise more than [`DISTINCT_ZERO_GAP`] apart.
    pub fn has_distinct_zeros(&self) -> bool {
        self.first_duplicate().is_none()
    }

    pub(crate) fn first_duplicate(&self) -> Option<(usize, usize)> {
        first_duplicate(&self.zeros)
    }

    fn check_point(&self, z: C64) -> Result<()> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideClosedDisk { re: z.re, im: z.im });
        }
        Ok(())
    }

    /// `B(z)`.
    pub fn eval(&self, z: C64) -> Result<C64> {
        self.check_point(z)?;
        let mut value = self.overall_constant();
        for (index, a) in self.zeros.iter().enumerate() {
            let (f, _, distance) = factor(a.value(), z);
            if distance < POLE_GUARD {
                return Err(Error::PoleProximity { index, distance });
            }
            value *= f;
        }
        Ok(value)
    }

    /// `B'(z)` through the product rule
    /// `B_n' = B_{n−1}' b_n + B_{n−1} (1 − |a_n|²)/(1 − ā_n z)²`.
    pub fn derivative(&self, z: C64) -> Result<C64> {
        self.eval_with_derivative(z).map(|(_, d)| d)
    }

    /// `(B(z), B'(z))` in one pass.
    pub fn eval_with_derivative(&self, z: C64) -> Result<(C64, C64)> {
        self.check_point(z)?;
        let mut value = ONE;
        let mut deriv = C64::new(0.0, 0.0);
        for (index, a) in self.zeros.iter().enumerate() {
            let a = a.value();
            let (f, den, distance) = factor(a, z);
            if distance < POLE_GUARD {
                return Err(Error::PoleProximity { index, distance });
            }
            let df = (1.0 - a.norm_sqr()) / (den * den);
            deriv = deriv * f + value * df;
            value *= f;
        }
        let c = self.overall_constant();
        Ok((c * value, c * deriv))
    }

    /// `B_n` built from the first `n` zeros in plain form, together with
    /// `λ_n = (−1)^n ∏ ā_j/|a_j|` such that `λ_n B_n` is the normalized
    /// partial product.
    pub fn partial_product(&self, n: usize) -> Result<(FiniteBlaschke, C64)> {
        partial_product_of(&self.zeros, n)
    }

    /// Product over the zeros whose indices are listed in `subset`, in the
    /// given order, with front constant 1.
    pub fn divisor(&self, subset: &[usize]) -> Result<FiniteBlaschke> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let limit = self.zeros.len();
        let zeros = subset
            .iter()
            .map(|&i| {
                self.zeros
                    .get(i)
                    .copied()
                    .ok_or(Error::IndexOutOfRange { index: i, limit })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteBlaschke::new(zeros))
    }

    /// The same product with its zeros reordered by `order` (a permutation).
    pub fn permuted(&self, order: &[usize]) -> Result<FiniteBlaschke> {
        let mut p = self.divisor(order)?;
        if order.len() != self.zeros.len() {
            return Err(Error::DimensionMismatch {
                expected: self.zeros.len(),
                got: order.len(),
            });
        }
        p.front_constant = self.front_constant;
        p.mode = self.mode;
        Ok(p)
    }
}

fn first_duplicate(zeros: &[UnitDiskPoint]) -> Option<(usize, usize)> {
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            if (zeros[i].value() - zeros[j].value()).norm() <= DISTINCT_ZERO_GAP {
                return Some((i, j));
            }
        }
    }
    None
}

fn normalization_constant(zeros: &[UnitDiskPoint]) -> C64 {
    zeros
        .iter()
        .fold(ONE, |acc, a| acc * normalizing_unit(a.value()))
}

fn partial_product_of(zeros: &[UnitDiskPoint], n: usize) -> Result<(FiniteBlaschke, C64)> {
    if n == 0 || n > zeros.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: zeros.len(),
        });
    }
    let prefix = zeros[..n].to_vec();
    let lambda = normalization_constant(&prefix);
    Ok((FiniteBlaschke::new(prefix), lambda))
}

/// `inf_n ∏_{j≠n} |(a_j − a_n)/(1 − ā_j a_n)|` over a finite zero list.
pub fn separation_delta(zeros: &[UnitDiskPoint]) -> Result<f64> {
    if zeros.len() < 2 {
        return Err(Error::InvalidConfig("separation needs at least two zeros"));
    }
    if let Some((first, second)) = first_duplicate(zeros) {
        return Err(Error::DuplicateZeros { first, second });
    }
    let mut delta = f64::INFINITY;
    for (n, an) in zeros.iter().enumerate() {
        let an = an.value();
        let product = zeros
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != n)
            .map(|(_, aj)| {
                let aj = aj.value();
                ((aj - an) / (ONE - aj.conj() * an)).norm()
            })
            .product::<f64>();
        delta = delta.min(product);
    }
    Ok(delta)
}

/// Source of zeros for an infinite Blaschke product.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSequence {
    /// An explicit list; the truncation order may not exceed its length.
    Explicit(Vec<UnitDiskPoint>),
    /// `a_j = 1 − ratio^j` for `j = 1, 2, …`.
    Geometric { ratio: f64 },
}

/// An infinite Blaschke product represented by a finite prefix of its zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteBlaschkeSpec {
    sequence: ZeroSequence,
    truncation_order: usize,
    prefix: Vec<UnitDiskPoint>,
}

impl InfiniteBlaschkeSpec {
    /// Materialize the prefix and check that it is uniformly separated.
    pub fn new(sequence: ZeroSequence, truncation_order: usize) -> Result<Self> {
        if truncation_order == 0 {
            return Err(Error::InvalidConfig("truncation order must be positive"));
        }
        let prefix = match &sequence {
            ZeroSequence::Explicit(zeros) => {
                if truncation_order > zeros.len() {
                    return Err(Error::IndexOutOfRange {
                        index: truncation_order,
                        limit: zeros.len(),
                    });
                }
                zeros[..truncation_order].to_vec()
            }
            ZeroSequence::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::InvalidConfig("geometric ratio must lie in (0, 1)"));
                }
                (1..=truncation_order)
                    .map(|j| UnitDiskPoint::real(1.0 - ratio.powi(j as i32)))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if prefix.len() >= 2 {
            separation_delta(&prefix)?;
        }
        Ok(Self {
            sequence,
            truncation_order,
            prefix,
        })
    }

    pub fn sequence(&self) -> &ZeroSequence {
        &self.sequence
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn prefix(&self) -> &[UnitDiskPoint] {
        &self.prefix
    }

    /// `Σ (1 − |a_j|)` over the prefix.
    pub fn blaschke_sum(&self) -> f64 {
        self.prefix.iter().map(|a| 1.0 - a.value().norm()).sum()
    }

    pub fn separation_delta(&self) -> Result<f64> {
        separation_delta(&self.prefix)
    }

    /// Plain product over the whole prefix.
    pub fn truncation(&self) -> FiniteBlaschke {
        FiniteBlaschke::new(self.prefix.clone())
    }

    pub fn partial_product(&self, n: usize) -> Result<(FiniteBlaschke, C64)> {
        partial_product_of(&self.prefix, n)
    }
}
