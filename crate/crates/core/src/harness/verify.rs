use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::generate::{
    kernel_chain_stack, lower_chain_residual, monomial_chain_stack, monomial_top_stack, perturb, random_complex,
    random_degree, random_disk_point, random_kernel_basis, random_toeplitz, random_tto, random_vec, sample_null,
    top_csym_only, NULL_THRESHOLD,
};
use super::{Instance, Report, Trial, TrialBuilder, TrialConfig, Witness};
use crate::blaschke::{FiniteBlaschke, InfiniteBlaschkeSpec, UnitDiskPoint, ZeroSequence};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff, numerical_rank, residual_scale, CMatrix, ConstraintStack, C64, ONE, ZERO};
use crate::model_space::{FunctionSamples, KernelBasis, OrthonormalBasis, Subspace, DEFAULT_GRID};
use crate::operators::membership::example3_equation_defects;
use crate::operators::{
    brown_halmos_residuals, compress_chain, compress_from_tail, crespo_transform, example3_equation_residuals,
    is_c_symmetric, is_tto, is_tto_with_anchor, persymmetry_residual, recover_symbol, toeplitz_residual, tto_matrix,
    BasisTag, OperatorMatrix, SingleZeroTransform, Space, SymbolSpec,
};

/// Minimum separation constant accepted by [`verify_infinite_blaschke`].
pub const MIN_SEPARATION: f64 = 0.01;

fn monomial_instance(n: usize) -> Instance {
    Instance {
        label: "z^N".into(),
        dim: n,
        zeros: alloc::vec![ZERO; n],
    }
}

fn kernel_instance(label: &str, basis: &KernelBasis) -> Instance {
    Instance {
        label: label.into(),
        dim: basis.degree(),
        zeros: basis.zeros().to_vec(),
    }
}

fn diag121() -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![ONE, C64::new(2.0, 0.0), ONE]))
}

/// `max_n` persymmetry residual of the leading `n×n` blocks.
fn chain_persymmetry(m: &CMatrix) -> f64 {
    (1..=m.nrows())
        .map(|n| persymmetry_residual(&m.view((0, 0), (n, n)).into_owned()))
        .fold(0.0, f64::max)
}

/// Largest C-symmetry residual along the compression chain.
fn chain_residual(m: &OperatorMatrix) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in compress_chain(m)? {
        worst = worst.max(is_c_symmetric(&a, 0.0)?.residual);
    }
    Ok(worst)
}

fn max_brown_halmos(m: &CMatrix) -> Result<f64> {
    let op = OperatorMatrix::new(m.clone(), Space::Monomial(m.nrows()))?;
    Ok(brown_halmos_residuals(&op)?.iter().map(|r| r.value).fold(0.0, f64::max))
}

/// Whether two residuals expected on the same side of the band land there.
fn same_side(cfg: &TrialConfig, x: f64, y: f64) -> usize {
    let side = |v: f64| {
        if v <= cfg.tolerance_pass {
            0
        } else if v >= cfg.tolerance_fail {
            2
        } else {
            1
        }
    };
    usize::from(side(x) == side(y) && side(x) != 1)
}

/// A random persymmetric matrix (C-symmetric at the top level only).
fn random_persymmetric(rng: &mut ChaCha8Rng, n: usize) -> Result<CMatrix> {
    sample_null(rng, &monomial_top_stack(n).null_space(NULL_THRESHOLD), n)
}

/// `K²_{z^N}`: persymmetry of every leading block is equivalent to constant
/// diagonals; persymmetry of the full matrix alone is not once `N ≥ 3`.
pub fn verify_zn(cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let n = random_degree(&mut rng, cfg, 1);
        let mut tb = TrialBuilder::new(cfg);
        let toeplitz = random_toeplitz(&mut rng, n, n - 1);
        tb.zero("toeplitz_chain_persymmetry", chain_persymmetry(&toeplitz));
        let ns = monomial_chain_stack(n).null_space(NULL_THRESHOLD);
        tb.count("chain_space_dimension", ns.dimension(), 2 * n - 1);
        let chain = sample_null(&mut rng, &ns, n)?;
        tb.zero("chain_sample_chain_persymmetry", chain_persymmetry(&chain));
        tb.zero("chain_sample_toeplitz", toeplitz_residual(&chain));
        let top = random_persymmetric(&mut rng, n)?;
        tb.zero("top_only_persymmetry", persymmetry_residual(&top));
        if n <= 2 {
            tb.zero("top_only_toeplitz", toeplitz_residual(&top));
            tb.zero("top_only_chain_persymmetry", chain_persymmetry(&top));
        } else {
            tb.positive("top_only_toeplitz", toeplitz_residual(&top));
            tb.positive("top_only_chain_persymmetry", chain_persymmetry(&top));
        }
        trials.push(tb.finish(t, monomial_instance(n), Some((BasisTag::Monomial, top))));
    }
    let w = diag121();
    let mut wb = TrialBuilder::new(cfg);
    wb.zero("persymmetry", persymmetry_residual(&w));
    wb.positive("chain_persymmetry", chain_persymmetry(&w));
    wb.positive("toeplitz", toeplitz_residual(&w));
    let witness = Witness {
        description: "diag(1,2,1): persymmetric, not Toeplitz".into(),
        instance: monomial_instance(3),
        matrix: Some((BasisTag::Monomial, w)),
        residuals: wb.into_residuals(),
    };
    let summary = witness.residuals.iter().cloned().map(|mut r| {
        r.name = alloc::format!("witness_{}", r.name);
        r
    });
    Ok(Report::assemble("zn", cfg, trials, summary.collect(), Some(witness)))
}

/// Toeplitz matrices on the truncation `K²_{z^M}`, `M = degree_range.1`:
/// banded Toeplitz matrices and chain-persymmetric samples annihilate every
/// rank-two trace test; perturbed ones do not.
pub fn verify_toeplitz_h2(cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    let m = cfg.degree_range.1;
    if m < 2 {
        return Err(Error::InvalidConfig("truncation size must be at least 2"));
    }
    let ns = monomial_chain_stack(m).null_space(NULL_THRESHOLD);
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let band = rng.random_range(0..m);
        let mut tb = TrialBuilder::new(cfg);
        let toeplitz = random_toeplitz(&mut rng, m, band);
        tb.zero("banded_chain_persymmetry", chain_persymmetry(&toeplitz));
        tb.zero("banded_brown_halmos", max_brown_halmos(&toeplitz)?);
        let chain = sample_null(&mut rng, &ns, m)?;
        tb.zero("chain_sample_brown_halmos", max_brown_halmos(&chain)?);
        let perturbed = perturb(&mut rng, &toeplitz);
        tb.info("perturbation_size", max_abs_diff(&perturbed, &toeplitz));
        tb.positive("perturbed_chain_persymmetry", chain_persymmetry(&perturbed));
        tb.positive("perturbed_brown_halmos", max_brown_halmos(&perturbed)?);
        trials.push(tb.finish(t, monomial_instance(m), Some((BasisTag::Monomial, perturbed))));
    }
    let shift = CMatrix::from_fn(m, m, |i, j| if i == j + 1 { ONE } else { ZERO });
    let mut sb = TrialBuilder::new(cfg);
    sb.zero("shift_chain_persymmetry", chain_persymmetry(&shift));
    sb.zero("shift_brown_halmos", max_brown_halmos(&shift)?);
    sb.count("chain_space_dimension", ns.dimension(), 2 * m - 1);
    Ok(Report::assemble("toeplitz_h2", cfg, trials, sb.into_residuals(), None))
}

/// Chain C-symmetry on `K²_{b_a^n}` through the nested orthonormal basis.
fn transported_chain(transform: &SingleZeroTransform, levels: &[Subspace], m: &CMatrix) -> Result<f64> {
    let moved = transform.transport(m)?;
    let mut worst = 0.0f64;
    for (k, level) in levels.iter().enumerate() {
        let block = moved.view((0, 0), (k + 1, k + 1)).into_owned();
        worst = worst.max(max_abs(&level.symmetry_defect(&block)) / residual_scale(&block));
    }
    Ok(worst)
}

fn single_zero_trial(rng: &mut ChaCha8Rng, a: UnitDiskPoint, t: usize, cfg: &TrialConfig) -> Result<Trial> {
    let n = random_degree(rng, cfg, 1);
    let transform = crespo_transform(a, n, DEFAULT_GRID)?;
    let levels = (1..=n).map(|k| transform.level(k)).collect::<Result<Vec<_>>>()?;
    let mut tb = TrialBuilder::new(cfg);
    tb.zero("unitarity", transform.unitarity_deficit());
    tb.zero("intertwining", transform.intertwining_residual(&random_vec(rng, n))?);
    let toeplitz = random_toeplitz(rng, n, n - 1);
    let direct = chain_persymmetry(&toeplitz);
    let moved = transported_chain(&transform, &levels, &toeplitz)?;
    tb.zero("toeplitz_chain_persymmetry", direct);
    tb.zero("toeplitz_transported_chain_csym", moved);
    tb.count("toeplitz_verdict_agreement", same_side(cfg, direct, moved), 1);
    let top = random_persymmetric(rng, n)?;
    let direct = chain_persymmetry(&top);
    let moved = transported_chain(&transform, &levels, &top)?;
    if n <= 2 {
        tb.zero("top_only_chain_persymmetry", direct);
        tb.zero("top_only_transported_chain_csym", moved);
    } else {
        tb.positive("top_only_chain_persymmetry", direct);
        tb.positive("top_only_transported_chain_csym", moved);
    }
    tb.count("top_only_verdict_agreement", same_side(cfg, direct, moved), 1);
    let instance = Instance {
        label: "b_a^N".into(),
        dim: n,
        zeros: alloc::vec![a.value(); n],
    };
    let moved_top = transform.transport(&top)?;
    Ok(tb.finish(t, instance, Some((BasisTag::Monomial, moved_top))))
}

fn single_zero_witness(a: UnitDiskPoint, cfg: &TrialConfig) -> Result<Witness> {
    let transform = crespo_transform(a, 3, DEFAULT_GRID)?;
    let levels = (1..=3).map(|k| transform.level(k)).collect::<Result<Vec<_>>>()?;
    let mut wb = TrialBuilder::new(cfg);
    wb.positive("transported_chain_csym", transported_chain(&transform, &levels, &diag121())?);
    Ok(Witness {
        description: "diag(1,2,1) carried to K²_{b_a^3}".into(),
        instance: Instance {
            label: "b_a^N".into(),
            dim: 3,
            zeros: alloc::vec![a.value(); 3],
        },
        matrix: Some((BasisTag::Monomial, transform.transport(&diag121())?)),
        residuals: wb.into_residuals(),
    })
}

/// `K²_{b_a^N}` with a fixed `a`: verdicts on `K²_{z^N}` carried by `U_{b_a}`
/// agree with the chain condition checked directly on `K²_{b_a^n}`.
pub fn verify_single_zero_at(a: UnitDiskPoint, cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    if a.value().norm() > cfg.zero_modulus_cap {
        return Err(Error::InvalidConfig("|a| exceeds the zero modulus cap"));
    }
    let trials = (0..cfg.trials)
        .map(|t| single_zero_trial(&mut cfg.trial_rng(t), a, t, cfg))
        .collect::<Result<Vec<_>>>()?;
    let witness = single_zero_witness(a, cfg)?;
    let summary = witness.residuals.clone();
    Ok(Report::assemble("single_zero", cfg, trials, summary, Some(witness)))
}

/// As [`verify_single_zero_at`], with `a` drawn per trial (`|a| ≤ cap`).
pub fn verify_single_zero(cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let a = UnitDiskPoint::new(random_disk_point(&mut rng, cfg.zero_modulus_cap))?;
        trials.push(single_zero_trial(&mut rng, a, t, cfg)?);
    }
    let witness = single_zero_witness(UnitDiskPoint::real(0.5)?, cfg)?;
    let summary = witness.residuals.clone();
    Ok(Report::assemble("single_zero", cfg, trials, summary, Some(witness)))
}

fn recovery_residual(m: &OperatorMatrix) -> Result<f64> {
    match recover_symbol(m) {
        Ok(symbol) => {
            let rebuilt = tto_matrix(m.space(), &symbol)?;
            Ok(max_abs_diff(rebuilt.entries(), m.entries()) / residual_scale(m.entries()))
        }
        Err(Error::NotTto { residual }) => Ok(residual),
        Err(e) => Err(e),
    }
}

/// The same operator in the kernel basis reordered by `order`.
fn reorder(m: &OperatorMatrix, order: &[usize]) -> Result<OperatorMatrix> {
    let basis = m.space().kernel_basis()?.permuted(order)?;
    let n = order.len();
    let entries = CMatrix::from_fn(n, n, |r, s| m.entries()[(order[r], order[s])]);
    OperatorMatrix::new(entries, Space::Kernel(basis))
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    order
}

fn crw_checks(tb: &mut TrialBuilder<'_>, rng: &mut ChaCha8Rng, prefix: &str, m: &OperatorMatrix, cfg: &TrialConfig) -> Result<(f64, f64)> {
    let first = is_tto(m, cfg.tolerance_pass)?;
    let anchor = rng.random_range(0..m.dim());
    let other = is_tto_with_anchor(m, anchor, cfg.tolerance_pass)?;
    let agree = usize::from(same_side(cfg, first.residual, other.residual) == 1 || first.holds == other.holds);
    tb.count(&alloc::format!("{prefix}_anchor_agreement"), agree, 1);
    Ok((first.residual, recovery_residual(m)?))
}

/// Distinct zeros: TTOs are chain C-symmetric (also along reordered divisor
/// chains), chain C-symmetric matrices are TTOs, and the chain constraints
/// cut out a space of dimension `2N − 1`.
pub fn verify_finite_blaschke(cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.degree_range.1 < 2 {
        return Err(Error::InvalidConfig("finite Blaschke verification needs degree at least 2"));
    }
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let rng = &mut rng;
        let n = random_degree(rng, cfg, 2);
        let basis = random_kernel_basis(rng, n, cfg.zero_modulus_cap)?;
        let mut tb = TrialBuilder::new(cfg);

        let tto = random_tto(rng, &basis)?;
        tb.zero("tto_chain_csym", chain_residual(&tto)?);
        let order = random_permutation(rng, n);
        tb.zero("tto_divisor_chain_csym", chain_residual(&reorder(&tto, &order)?)?);
        let (crw, rec) = crw_checks(&mut tb, rng, "tto", &tto, cfg)?;
        tb.zero("tto_crw", crw);
        tb.zero("tto_recovery", rec);

        let ns = kernel_chain_stack(&basis)?.null_space(NULL_THRESHOLD);
        tb.count("chain_space_dimension", ns.dimension(), 2 * n - 1);
        let sample = OperatorMatrix::new(sample_null(rng, &ns, n)?, Space::Kernel(basis.clone()))?;
        tb.zero("chain_sample_chain_csym", chain_residual(&sample)?);
        let (crw, rec) = crw_checks(&mut tb, rng, "chain_sample", &sample, cfg)?;
        tb.zero("chain_sample_crw", crw);
        tb.zero("chain_sample_recovery", rec);

        if n >= 3 {
            let top = top_csym_only(rng, &basis, cfg)?;
            tb.zero("top_only_csym", is_c_symmetric(&top, 0.0)?.residual);
            tb.positive("top_only_lower_chain_csym", lower_chain_residual(&top)?);
            let (crw, rec) = crw_checks(&mut tb, rng, "top_only", &top, cfg)?;
            tb.positive("top_only_crw", crw);
            tb.positive("top_only_recovery", rec);
        }
        trials.push(tb.finish(t, kernel_instance("kernel", &basis), Some((BasisTag::Kernel, sample.into_entries()))));
    }

    // Base case of the induction: zeros {0, 0.5}.
    let mut sb = TrialBuilder::new(cfg);
    let base = KernelBasis::from_zeros(&[ZERO, C64::new(0.5, 0.0)])?;
    let ns = kernel_chain_stack(&base)?.null_space(NULL_THRESHOLD);
    sb.count("base_case_dimension", ns.dimension(), 3);
    let mut rng = cfg.trial_rng(cfg.trials);
    let sample = OperatorMatrix::new(sample_null(&mut rng, &ns, 2)?, Space::Kernel(base))?;
    sb.zero("base_case_crw", is_tto(&sample, 0.0)?.residual);
    Ok(Report::assemble("finite_blaschke", cfg, trials, sb.into_residuals(), None))
}

/// Kernel matrix of `A_φ` for `φ = ψ + conj(χ)` given by values at the zeros.
fn tto_from_values(basis: &KernelBasis, psi: Vec<C64>, chi: Vec<C64>) -> Result<OperatorMatrix> {
    tto_matrix(&Space::Kernel(basis.clone()), &SymbolSpec::KernelValues { psi, chi })
}

/// Infinite Blaschke product through the truncation `N* = truncation`:
/// chain C-symmetry of TTOs on the prefix, decay of
/// `|b^{(n)}_{1,2} − b^{(N*)}_{1,2}|` for the compressed shift, and
/// stabilization of `λ_n B_n'(a_1)`.
pub fn verify_infinite_blaschke(sequence: ZeroSequence, truncation: usize, cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    if truncation < 4 {
        return Err(Error::InvalidConfig("truncation order must be at least 4"));
    }
    let spec = match InfiniteBlaschkeSpec::new(sequence, truncation) {
        Err(Error::DuplicateZeros { .. }) => {
            return Err(Error::SeparationTooSmall { delta: 0.0, required: MIN_SEPARATION })
        }
        other => other?,
    };
    let delta = spec.separation_delta()?;
    if delta < MIN_SEPARATION {
        return Err(Error::SeparationTooSmall { delta, required: MIN_SEPARATION });
    }
    let basis = KernelBasis::new(spec.truncation())?;
    let n_star = truncation;
    let instance = kernel_instance("infinite_prefix", &basis);

    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let tto = random_tto(&mut rng, &basis)?;
        let mut tb = TrialBuilder::new(cfg);
        tb.zero("tto_chain_csym", chain_residual(&tto)?);
        trials.push(tb.finish(t, instance.clone(), None));
    }

    let mut sb = TrialBuilder::new(cfg);
    sb.info("separation_delta", delta);
    sb.info("blaschke_sum", spec.blaschke_sum());
    let mut unit = alloc::vec![ZERO; n_star];
    unit[0] = ONE;
    let k1 = tto_matrix(
        &Space::Kernel(basis.clone()),
        &SymbolSpec::Kernel { psi: unit, chi: alloc::vec![ZERO; n_star] },
    )?;
    sb.zero("k1_chain_csym", chain_residual(&k1)?);

    let shift = tto_from_values(&basis, basis.zeros().to_vec(), alloc::vec![ZERO; n_star])?;
    sb.zero("shift_chain_csym", chain_residual(&shift)?);
    let target = shift.entries()[(0, 1)];
    let mut gaps = alloc::vec![0.0; n_star + 1];
    for n in 2..=n_star {
        gaps[n] = (compress_from_tail(&shift, n)?.entries()[(0, 1)] - target).norm();
        sb.info(&alloc::format!("gap_n{n}"), gaps[n]);
    }
    let (lo, hi, last) = (n_star / 2 - 1, n_star - 2, n_star - 1);
    sb.zero("gap_trend", (gaps[hi] - gaps[lo]).max(0.0));
    sb.zero_within("gap_last", gaps[last], 1e-5);

    let a1 = basis.zeros()[0];
    let mut values: Vec<C64> = Vec::with_capacity(n_star);
    for n in 1..=n_star {
        let (bn, lambda) = spec.partial_product(n)?;
        values.push(lambda * bn.derivative(a1)?);
    }
    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    for (k, s) in steps.iter().enumerate() {
        sb.info(&alloc::format!("lambda_derivative_step_n{}", k + 2), *s);
    }
    let mid = steps.len() / 2;
    sb.zero("lambda_derivative_trend", (steps[steps.len() - 1] - steps[mid]).max(0.0));
    Ok(Report::assemble("infinite_blaschke", cfg, trials, sb.into_residuals(), None))
}

/// The 3×3 matrix of `A_φ` for the degree-three example written out entry
/// by entry, with `c = (c_{−2}, c_{−1}, c_0, c_1, c_2)`.
pub fn example3_displayed_matrix(w: UnitDiskPoint, c: &[C64; 5]) -> CMatrix {
    let w = w.value();
    let k = 1.0 / (1.0 - w.norm_sqr()).sqrt();
    let wb = w.conj();
    let [cm2, cm1, c0, c1, c2] = *c;
    CMatrix::from_row_slice(
        3,
        3,
        &[
            c0,
            cm1,
            cm2,
            c1,
            c0,
            cm2 * wb + cm1 / k,
            c2,
            c1 / k + c2 * w,
            cm2 * wb * wb * k + cm1 * wb + c0 + c1 * w + c2 * w * w * k,
        ],
    )
}

/// Divisors `z, z², b_w, z b_w, B` of `B = z²(w − z)/(1 − w̄ z)` as
/// subspaces of `K²_B` in the basis `{1, z, z² k_w/‖k_w‖}`.
fn example3_divisors(basis: &OrthonormalBasis, w: UnitDiskPoint) -> Result<Vec<(String, Subspace)>> {
    let size = basis.grid_size();
    let wv = w.value();
    let one = FunctionSamples::from_fn(size, |_| ONE)?;
    let z = FunctionSamples::from_fn(size, |z| z)?;
    let kw = FunctionSamples::from_fn(size, |z| ONE / (ONE - wv.conj() * z))?;
    let origin = UnitDiskPoint::origin();
    let specs: [(&str, FiniteBlaschke, Vec<FunctionSamples>); 5] = [
        ("z", FiniteBlaschke::monomial(1), alloc::vec![one.clone()]),
        ("z^2", FiniteBlaschke::monomial(2), alloc::vec![one.clone(), z.clone()]),
        ("b_w", FiniteBlaschke::new(alloc::vec![w]), alloc::vec![kw.clone()]),
        ("z*b_w", FiniteBlaschke::new(alloc::vec![origin, w]), alloc::vec![one, kw]),
        ("B", basis.inner().clone(), basis.vectors().to_vec()),
    ];
    specs
        .into_iter()
        .map(|(name, inner, spanning)| Ok((String::from(name), basis.subspace(inner, spanning)?)))
        .collect()
}

/// `B = z²(w − z)/(1 − w̄ z)`: TTO matrices match the displayed formula and
/// its four equations, those equations leave 5 dimensions, and matrices
/// whose compressions to all the listed divisors are C-symmetric satisfy
/// them.
pub fn verify_example_degree3(w: UnitDiskPoint, cfg: &TrialConfig) -> Result<Report> {
    cfg.validate()?;
    if w.value().norm() == 0.0 || w.value().norm() > 0.9 {
        return Err(Error::InvalidConfig("need 0 < |w| <= 0.9"));
    }
    let basis = OrthonormalBasis::example3(w, DEFAULT_GRID)?;
    let divisors = example3_divisors(&basis, w)?;
    let mut stack = ConstraintStack::new(9);
    for (_, sub) in &divisors {
        stack.push_linear_map(|x| sub.compressed_defect(&CMatrix::from_column_slice(3, 3, x)).iter().copied().collect());
    }
    let ns = stack.null_space(NULL_THRESHOLD);
    let mut equations = ConstraintStack::new(9);
    equations.push_linear_map(|x| example3_equation_defects(&CMatrix::from_column_slice(3, 3, x), w.value()).to_vec());
    let equation_rank = numerical_rank(&equations.normalized_matrix(), NULL_THRESHOLD);

    let space = Space::Example3(w);
    let instance = Instance {
        label: "example3".into(),
        dim: 3,
        zeros: alloc::vec![ZERO, ZERO, w.value()],
    };
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = cfg.trial_rng(t);
        let c: [C64; 5] = core::array::from_fn(|_| random_complex(&mut rng));
        let tto = tto_matrix(&space, &SymbolSpec::Example3(c))?;
        let mut tb = TrialBuilder::new(cfg);
        tb.zero_within("displayed_matrix", max_abs_diff(tto.entries(), &example3_displayed_matrix(w, &c)), 1e-10);
        let r = example3_equation_residuals(tto.entries(), w)?;
        tb.zero_within("tto_equations", r.iter().copied().fold(0.0, f64::max), 1e-10);
        let sym = divisors
            .iter()
            .map(|(_, sub)| max_abs(&sub.compressed_defect(tto.entries())))
            .fold(0.0, f64::max);
        tb.zero("tto_divisor_csym", sym / residual_scale(tto.entries()));
        let sample = sample_null(&mut rng, &ns, 3)?;
        let r = example3_equation_residuals(&sample, w)?;
        tb.zero_within("divisor_sample_equations", r.iter().copied().fold(0.0, f64::max), 1e-9);
        trials.push(tb.finish(t, instance.clone(), Some((BasisTag::Example3, sample))));
    }
    let mut sb = TrialBuilder::new(cfg);
    sb.count("equation_space_dimension", 9 - equation_rank, 5);
    sb.count("divisor_space_dimension", ns.dimension(), 5);
    let shift = tto_matrix(&space, &SymbolSpec::Example3([ZERO, ZERO, ZERO, ONE, ZERO]))?;
    let expected = example3_displayed_matrix(w, &[ZERO, ZERO, ZERO, ONE, ZERO]);
    sb.zero_within("shift_displayed_matrix", max_abs_diff(shift.entries(), &expected), 1e-10);
    Ok(Report::assemble("example_degree3", cfg, trials, sb.into_residuals(), None))
}
