//! Seeded verification of the characterization theorems.
//!
//! Every verifier takes a [`TrialConfig`], runs `trials` independent trials
//! (trial `t` draws from its own ChaCha stream `t` of the configured seed)
//! and returns a [`Report`]. Residuals are classified with a hysteresis
//! band: a residual expected to vanish passes at or below its pass
//! tolerance, fails at or above its fail tolerance, and is inconclusive in
//! between. Residuals expected to be large (detected negatives) use the same
//! band the other way round.

mod generate;
mod verify;

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use generate::{gen_instance, InstanceKind};
pub use verify::{
    example3_displayed_matrix, verify_example_degree3, verify_finite_blaschke, verify_infinite_blaschke,
    verify_single_zero, verify_single_zero_at, verify_toeplitz_h2, verify_zn,
};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::operators::BasisTag;

/// Trial parameters shared by all verifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive degree range `[min, max]`.
    pub degree_range: (usize, usize),
    pub zero_modulus_cap: f64,
    pub tolerance_pass: f64,
    pub tolerance_fail: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 20,
            degree_range: (2, 6),
            zero_modulus_cap: 0.8,
            tolerance_pass: 1e-8,
            tolerance_fail: 1e-4,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        let (lo, hi) = self.degree_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidConfig("degree range must satisfy 1 <= min <= max"));
        }
        if !(self.zero_modulus_cap > 0.0 && self.zero_modulus_cap <= 0.9) {
            return Err(Error::InvalidConfig("zero modulus cap must lie in (0, 0.9]"));
        }
        if !(self.tolerance_pass > 0.0 && self.tolerance_pass < self.tolerance_fail) {
            return Err(Error::InvalidConfig("need 0 < tolerance_pass < tolerance_fail"));
        }
        Ok(())
    }

    /// The RNG of trial `index`.
    pub fn trial_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// Which way a residual is expected to fall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    /// An identity that should hold: small is a pass.
    Zero,
    /// A negative that should be detected: large is a pass.
    Positive,
    /// Recorded only, never classified.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        items.into_iter().fold(Verdict::Pass, Verdict::combine)
    }
}

/// One named residual with its classification band.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub expect: Expect,
    pub tolerance_pass: f64,
    pub tolerance_fail: f64,
}

impl Residual {
    pub fn verdict(&self) -> Verdict {
        let v = self.value;
        if v.is_nan() {
            return if self.expect == Expect::Info { Verdict::Pass } else { Verdict::Fail };
        }
        match self.expect {
            Expect::Info => Verdict::Pass,
            Expect::Zero if v <= self.tolerance_pass => Verdict::Pass,
            Expect::Zero if v >= self.tolerance_fail => Verdict::Fail,
            Expect::Positive if v >= self.tolerance_fail => Verdict::Pass,
            Expect::Positive if v <= self.tolerance_pass => Verdict::Fail,
            _ => Verdict::Inconclusive,
        }
    }
}

/// What a trial was run on.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub label: String,
    pub dim: usize,
    /// Zeros of the Blaschke product (empty for `z^N`).
    pub zeros: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub index: usize,
    pub instance: Instance,
    pub residuals: Vec<Residual>,
    pub verdict: Verdict,
    /// Matrix kept for the report witness; not part of the trial record.
    pub matrix: Option<(BasisTag, CMatrix)>,
}

/// A concrete instance attached to a report: the first failing trial, or
/// else the verifier's designated counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub description: String,
    pub instance: Instance,
    pub matrix: Option<(BasisTag, CMatrix)>,
    pub residuals: Vec<Residual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub config: TrialConfig,
    pub trials: Vec<Trial>,
    /// Checks that belong to the whole run rather than one trial.
    pub summary: Vec<Residual>,
    pub witness: Option<Witness>,
    pub verdict: Verdict,
}

impl Report {
    fn assemble(
        name: &str,
        config: &TrialConfig,
        trials: Vec<Trial>,
        summary: Vec<Residual>,
        designated: Option<Witness>,
    ) -> Self {
        let verdict = Verdict::all(
            trials
                .iter()
                .map(|t| t.verdict)
                .chain(summary.iter().map(Residual::verdict)),
        );
        let failing = trials.iter().find(|t| t.verdict != Verdict::Pass).map(|t| Witness {
            description: alloc::format!("trial {} ({})", t.index, t.verdict.as_str()),
            instance: t.instance.clone(),
            matrix: t.matrix.clone(),
            residuals: t.residuals.clone(),
        });
        Self {
            name: name.into(),
            config: config.clone(),
            trials,
            summary,
            witness: failing.or(designated),
            verdict,
        }
    }

    /// Largest value of the named residual across trials.
    pub fn max_residual(&self, name: &str) -> Option<f64> {
        self.trials
            .iter()
            .flat_map(|t| t.residuals.iter())
            .chain(self.summary.iter())
            .filter(|r| r.name == name)
            .map(|r| r.value)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }

    /// Smallest value of the named residual across trials.
    pub fn min_residual(&self, name: &str) -> Option<f64> {
        self.trials
            .iter()
            .flat_map(|t| t.residuals.iter())
            .chain(self.summary.iter())
            .filter(|r| r.name == name)
            .map(|r| r.value)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
    }

    /// Number of trials with each verdict, `(pass, fail, inconclusive)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.trials.iter().fold((0, 0, 0), |(p, f, i), t| match t.verdict {
            Verdict::Pass => (p + 1, f, i),
            Verdict::Fail => (p, f + 1, i),
            Verdict::Inconclusive => (p, f, i + 1),
        })
    }
}

/// Accumulates residuals for one trial.
pub(crate) struct TrialBuilder<'a> {
    cfg: &'a TrialConfig,
    residuals: Vec<Residual>,
}

impl<'a> TrialBuilder<'a> {
    pub(crate) fn new(cfg: &'a TrialConfig) -> Self {
        Self { cfg, residuals: Vec::new() }
    }

    pub(crate) fn zero(&mut self, name: &str, value: f64) -> &mut Self {
        self.push(name, value, Expect::Zero, self.cfg.tolerance_pass, self.cfg.tolerance_fail)
    }

    pub(crate) fn positive(&mut self, name: &str, value: f64) -> &mut Self {
        self.push(name, value, Expect::Positive, self.cfg.tolerance_pass, self.cfg.tolerance_fail)
    }

    pub(crate) fn info(&mut self, name: &str, value: f64) -> &mut Self {
        self.push(name, value, Expect::Info, self.cfg.tolerance_pass, self.cfg.tolerance_fail)
    }

    /// A residual with its own band; the fail tolerance is widened to stay
    /// above the pass tolerance.
    pub(crate) fn zero_within(&mut self, name: &str, value: f64, pass: f64) -> &mut Self {
        let fail = self.cfg.tolerance_fail.max(10.0 * pass);
        self.push(name, value, Expect::Zero, pass, fail)
    }

    /// An exact integer count compared with its expected value.
    pub(crate) fn count(&mut self, name: &str, got: usize, expected: usize) -> &mut Self {
        let diff = (got as f64 - expected as f64).abs();
        self.push(name, diff, Expect::Zero, 0.5, 0.5 + f64::EPSILON)
    }

    fn push(&mut self, name: &str, value: f64, expect: Expect, pass: f64, fail: f64) -> &mut Self {
        self.residuals.push(Residual {
            name: name.into(),
            value,
            expect,
            tolerance_pass: pass,
            tolerance_fail: fail,
        });
        self
    }

    pub(crate) fn finish(self, index: usize, instance: Instance, matrix: Option<(BasisTag, CMatrix)>) -> Trial {
        let verdict = Verdict::all(self.residuals.iter().map(Residual::verdict));
        Trial {
            index,
            instance,
            residuals: self.residuals,
            verdict,
            matrix,
        }
    }

    pub(crate) fn into_residuals(self) -> Vec<Residual> {
        self.residuals
    }
}
