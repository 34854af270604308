use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::TrialConfig;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, square_from_vec, CMatrix, ConstraintStack, NullSpace, C64, ZERO};
use crate::model_space::KernelBasis;
use crate::operators::compress::kernel_tail_compression;
use crate::operators::symmetry::{kernel_defect, persymmetry_defect};
use crate::operators::{is_c_symmetric, tto_matrix, OperatorMatrix, Space, SymbolSpec};

/// Minimum pairwise distance between generated zeros.
pub const MIN_ZERO_GAP: f64 = 0.05;
/// Singular values at or below this count as zero in constraint null spaces.
pub const NULL_THRESHOLD: f64 = 1e-8;
/// Rejection-sampling budget of the generators.
pub const MAX_ATTEMPTS: usize = 1000;

/// Kinds of generated operator matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// TTO of a random symbol on random distinct zeros.
    Tto,
    /// Random matrix whose compressions are all C-symmetric.
    ChainCsym,
    /// C-symmetric at the top level only; some compression is not.
    TopCsymOnly,
    /// Random Toeplitz matrix in the monomial basis.
    Toeplitz,
    /// Toeplitz matrix with an off-Toeplitz perturbation of size ≥ 1e-2.
    Perturbed,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 5] = [
        InstanceKind::Tto,
        InstanceKind::ChainCsym,
        InstanceKind::TopCsymOnly,
        InstanceKind::Toeplitz,
        InstanceKind::Perturbed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Tto => "tto",
            InstanceKind::ChainCsym => "chain_csym",
            InstanceKind::TopCsymOnly => "top_csym_only",
            InstanceKind::Toeplitz => "toeplitz",
            InstanceKind::Perturbed => "perturbed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

pub(crate) fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub(crate) fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub(crate) fn random_disk_point(rng: &mut ChaCha8Rng, cap: f64) -> C64 {
    let r = cap * rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..core::f64::consts::TAU);
    C64::from_polar(r, t)
}

pub(crate) fn random_degree(rng: &mut ChaCha8Rng, cfg: &TrialConfig, min: usize) -> usize {
    let (lo, hi) = cfg.degree_range;
    rng.random_range(lo.max(min)..=hi.max(min))
}

/// `n` points of modulus at most `cap`, pairwise at least [`MIN_ZERO_GAP`]
/// apart.
pub(crate) fn random_zeros(rng: &mut ChaCha8Rng, n: usize, cap: f64) -> Result<Vec<C64>> {
    let mut zeros: Vec<C64> = Vec::with_capacity(n);
    let mut attempts = 0;
    while zeros.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * n {
            return Err(Error::GenerationExhausted { attempts });
        }
        let z = random_disk_point(rng, cap);
        if zeros.iter().all(|w| (w - z).norm() >= MIN_ZERO_GAP) {
            zeros.push(z);
        }
    }
    Ok(zeros)
}

pub(crate) fn random_kernel_basis(rng: &mut ChaCha8Rng, n: usize, cap: f64) -> Result<KernelBasis> {
    KernelBasis::from_zeros(&random_zeros(rng, n, cap)?)
}

pub(crate) fn random_tto(rng: &mut ChaCha8Rng, basis: &KernelBasis) -> Result<OperatorMatrix> {
    let n = basis.degree();
    let symbol = SymbolSpec::KernelValues {
        psi: random_vec(rng, n),
        chi: random_vec(rng, n),
    };
    tto_matrix(&Space::Kernel(basis.clone()), &symbol)
}

/// Toeplitz matrix with diagonals `|i − j| ≤ band` drawn at random.
pub(crate) fn random_toeplitz(rng: &mut ChaCha8Rng, n: usize, band: usize) -> CMatrix {
    let coeffs: Vec<C64> = (0..2 * n - 1)
        .map(|d| {
            let offset = (d as isize - (n as isize - 1)).unsigned_abs();
            if offset <= band {
                random_complex(rng)
            } else {
                ZERO
            }
        })
        .collect();
    CMatrix::from_fn(n, n, |i, j| coeffs[i + n - 1 - j])
}

/// Adds `δ`, `0.05 ≤ |δ| ≤ 0.5`, to one entry that lies on a diagonal of
/// length at least two, so that the result is off-Toeplitz by `|δ|`.
pub(crate) fn perturb(rng: &mut ChaCha8Rng, m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut out = m.clone();
    loop {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        let corner = (i == n - 1 && j == 0) || (i == 0 && j == n - 1);
        if corner && n > 1 {
            continue;
        }
        let r = rng.random_range(0.05..0.5);
        let t = rng.random_range(0.0..core::f64::consts::TAU);
        out[(i, j)] += C64::from_polar(r, t);
        return out;
    }
}

/// Constraints `C_{B_n}`-symmetry of every compression `A_n`, `2 ≤ n ≤ N`,
/// on the `N²` column-major entries.
pub(crate) fn kernel_chain_stack(basis: &KernelBasis) -> Result<ConstraintStack> {
    let big = basis.degree();
    let mut stack = ConstraintStack::new(big * big);
    for n in 2..=big {
        push_kernel_level(&mut stack, basis, n)?;
    }
    Ok(stack)
}

/// Constraints of the top level only.
pub(crate) fn kernel_top_stack(basis: &KernelBasis) -> Result<ConstraintStack> {
    let big = basis.degree();
    let mut stack = ConstraintStack::new(big * big);
    push_kernel_level(&mut stack, basis, big)?;
    Ok(stack)
}

fn push_kernel_level(stack: &mut ConstraintStack, basis: &KernelBasis, n: usize) -> Result<()> {
    let big = basis.degree();
    let sub = basis.sub_basis(n)?;
    stack.push_linear_map(|x| {
        let m = square_from_vec(big, x);
        let d = kernel_defect(&sub, &kernel_tail_compression(basis, &m, n));
        upper_entries(&d)
    });
    Ok(())
}

fn upper_entries(d: &CMatrix) -> Vec<C64> {
    let n = d.nrows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d[(i, j)]).collect()
}

/// Persymmetry of every leading block of an `N×N` monomial-basis matrix.
pub(crate) fn monomial_chain_stack(big: usize) -> ConstraintStack {
    let mut stack = ConstraintStack::new(big * big);
    for n in 2..=big {
        stack.push_linear_map(|x| {
            let m = square_from_vec(big, x);
            let block = m.view((0, 0), (n, n)).into_owned();
            persymmetry_defect(&block).iter().copied().collect()
        });
    }
    stack
}

/// Persymmetry of the full matrix only.
pub(crate) fn monomial_top_stack(big: usize) -> ConstraintStack {
    let mut stack = ConstraintStack::new(big * big);
    stack.push_linear_map(|x| persymmetry_defect(&square_from_vec(big, x)).iter().copied().collect());
    stack
}

/// A random element of a null space, reshaped to `n×n` and scaled to unit
/// max-entry.
pub(crate) fn sample_null(rng: &mut ChaCha8Rng, ns: &NullSpace, n: usize) -> Result<CMatrix> {
    if ns.dimension() == 0 {
        return Err(Error::DegenerateConstraints("constraint null space is trivial"));
    }
    let coeffs = CMatrix::from_column_slice(ns.dimension(), 1, &random_vec(rng, ns.dimension()));
    let x = &ns.basis * coeffs;
    let m = square_from_vec(n, x.as_slice());
    let scale = max_abs(&m);
    Ok(m.map(|z| z / scale))
}

/// Largest C-symmetry residual over the proper compressions `A_1 … A_{N−1}`.
pub(crate) fn lower_chain_residual(m: &OperatorMatrix) -> Result<f64> {
    let chain = crate::operators::compress_chain(m)?;
    let mut worst = 0.0f64;
    for a in &chain[..chain.len() - 1] {
        worst = worst.max(is_c_symmetric(a, 0.0)?.residual);
    }
    Ok(worst)
}

pub(crate) fn top_csym_only(rng: &mut ChaCha8Rng, basis: &KernelBasis, cfg: &TrialConfig) -> Result<OperatorMatrix> {
    let n = basis.degree();
    if n < 3 {
        return Err(Error::InvalidConfig("top_csym_only needs degree at least 3"));
    }
    let ns = kernel_top_stack(basis)?.null_space(NULL_THRESHOLD);
    for _ in 0..MAX_ATTEMPTS {
        let m = OperatorMatrix::new(sample_null(rng, &ns, n)?, Space::Kernel(basis.clone()))?;
        let top = is_c_symmetric(&m, 0.0)?.residual;
        if top <= 1e-12 && lower_chain_residual(&m)? >= cfg.tolerance_fail {
            return Ok(m);
        }
    }
    Err(Error::GenerationExhausted { attempts: MAX_ATTEMPTS })
}

/// A seeded instance of the requested kind, drawn from the RNG stream of
/// trial `index`.
pub fn gen_instance(kind: InstanceKind, cfg: &TrialConfig, index: usize) -> Result<OperatorMatrix> {
    cfg.validate()?;
    let mut rng = cfg.trial_rng(index);
    let rng = &mut rng;
    match kind {
        InstanceKind::Tto => {
            let n = random_degree(rng, cfg, 1);
            let basis = random_kernel_basis(rng, n, cfg.zero_modulus_cap)?;
            random_tto(rng, &basis)
        }
        InstanceKind::ChainCsym => {
            let n = random_degree(rng, cfg, 1);
            let basis = random_kernel_basis(rng, n, cfg.zero_modulus_cap)?;
            let ns = kernel_chain_stack(&basis)?.null_space(NULL_THRESHOLD);
            OperatorMatrix::new(sample_null(rng, &ns, n)?, Space::Kernel(basis))
        }
        InstanceKind::TopCsymOnly => {
            if cfg.degree_range.1 < 3 {
                return Err(Error::InvalidConfig("top_csym_only needs degree at least 3"));
            }
            let n = random_degree(rng, cfg, 3);
            let basis = random_kernel_basis(rng, n, cfg.zero_modulus_cap)?;
            top_csym_only(rng, &basis, cfg)
        }
        InstanceKind::Toeplitz => {
            let n = random_degree(rng, cfg, 1);
            OperatorMatrix::new(random_toeplitz(rng, n, n - 1), Space::Monomial(n))
        }
        InstanceKind::Perturbed => {
            let n = random_degree(rng, cfg, 2);
            let t = random_toeplitz(rng, n, n - 1);
            OperatorMatrix::new(perturb(rng, &t), Space::Monomial(n))
        }
    }
}
