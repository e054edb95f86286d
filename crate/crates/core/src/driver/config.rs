use serde::Serialize;

use crate::embed::BOURGAIN_REPETITIONS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    /// Target relative error.
    pub epsilon: f64,
    pub seed: u64,
    /// Lattice depth `T`; chosen from the embedded point spacing if unset.
    pub levels: Option<u32>,
    /// Projection dimension `k`; [`default_dim`] if unset.
    pub dim: Option<usize>,
    /// Assumed condition number of the preconditioned system. Defaults to
    /// the measured embedding distortion times `2k(T+1)`.
    pub kappa: Option<f64>,
    /// Keep all Bourgain coordinates.
    pub skip_jl: bool,
    /// Independent projections drawn; the one with the smallest measured
    /// distortion is kept.
    pub jl_trials: usize,
    pub bourgain_repetitions: f64,
    /// Residual target of the first MW stage as a fraction of `‖Pb‖₁`;
    /// `ε/5` if unset. A loose first stage leaves a residual that is cheap in
    /// the preconditioned norm but expensive to route.
    pub first_stage_accuracy: Option<f64>,
    /// Refinement stages after the first, at most.
    pub max_refine_stages: usize,
    /// Stop refining once the tree repair would cost at most this fraction
    /// of `ε` times the current flow cost.
    pub repair_fraction: f64,
    pub check_every: usize,
    /// MW learning-rate multiplier. The worst-case rate is far too timid on
    /// these systems; the certificates keep any rate honest.
    pub step_scale: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: 0.1,
            seed: 0,
            levels: None,
            dim: None,
            kappa: None,
            skip_jl: false,
            jl_trials: 8,
            bourgain_repetitions: BOURGAIN_REPETITIONS,
            first_stage_accuracy: None,
            max_refine_stages: 24,
            repair_fraction: 0.25,
            check_every: 16,
            step_scale: 48.0,
        }
    }
}

impl PipelineConfig {
    pub fn first_stage_target(&self) -> f64 {
        self.first_stage_accuracy.unwrap_or(self.epsilon / 5.0)
    }

    pub fn with_epsilon(epsilon: f64) -> Self {
        PipelineConfig {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if let Some(k) = self.kappa {
            if !(k >= 1.0) {
                return Err(Error::Config(format!("kappa must be >= 1, got {k}")));
            }
        }
        if self.jl_trials == 0 {
            return Err(Error::Config("at least one projection trial is needed".into()));
        }
        if self.dim == Some(0) {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if let Some(t) = self.levels {
            if t == 0 || t > crate::embed::MAX_LEVELS {
                return Err(Error::Config(format!(
                    "levels must lie in 1..={}, got {t}",
                    crate::embed::MAX_LEVELS
                )));
            }
        }
        if !self.first_stage_accuracy.map_or(true, |g| g > 0.0 && g <= 1.0)
            || !(self.repair_fraction > 0.0)
            || !(self.bourgain_repetitions > 0.0)
            || !(self.step_scale > 0.0)
        {
            return Err(Error::Config("solver knobs out of range".into()));
        }
        Ok(())
    }
}

/// `⌈√log₂ n⌉ + 1`, at least 2. The extra dimension buys a several-fold
/// drop in projected distortion for a 2× denser `P`.
pub fn default_dim(n: usize) -> usize {
    ((n.max(2) as f64).log2().sqrt().ceil() as usize + 1).max(2)
}
