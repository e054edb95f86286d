use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{reduce_level, LatticeDemands, LevelSummary};
use crate::scalar::Scalar;

/// The demands `b_T, …, b_0` produced by repeated reduction, with level
/// weights `k·2^{-t}`.
#[derive(Debug, Clone)]
pub struct ReductionChain<F> {
    dim: usize,
    /// `levels[t]` is `b_t`.
    levels: Vec<LatticeDemands<F>>,
}

impl<F: Scalar> ReductionChain<F> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn level(&self, t: u32) -> &LatticeDemands<F> {
        &self.levels[t as usize]
    }

    pub fn levels(&self) -> &[LatticeDemands<F>] {
        &self.levels
    }

    /// `k·2^{-t}`
    pub fn weight(&self, t: u32) -> F {
        F::of_usize(self.dim) * F::pow2(-(t as i32))
    }

    pub fn mass(&self, t: u32) -> F {
        self.level(t).l1()
    }

    pub fn level_cost(&self, t: u32) -> F {
        self.weight(t) * self.mass(t)
    }

    /// `Σ_t k·2^{-t}‖b_t‖₁`, which equals `‖P b_T‖₁`.
    pub fn weighted_total(&self) -> F {
        (0..=self.top()).map(|t| self.level_cost(t)).sum()
    }

    pub fn summary(&self) -> Vec<LevelSummary> {
        (0..=self.top())
            .rev()
            .map(|t| LevelSummary {
                t,
                support_size: self.level(t).support_len(),
                l1_mass: self.mass(t).to_f64_lossy(),
                weight: self.weight(t).to_f64_lossy(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "k": self.dim, "T": self.top(), "levels": self.summary() })
    }
}

/// Reduces `b_T` down to level 0.
pub fn build_chain<F: Scalar>(b_top: &LatticeDemands<F>) -> Result<ReductionChain<F>> {
    let top = b_top.level();
    let mut levels = Vec::with_capacity(top as usize + 1);
    levels.push(b_top.clone());
    for _ in 0..top {
        let next = reduce_level(levels.last().expect("nonempty"))?;
        levels.push(next);
    }
    levels.reverse();
    Ok(ReductionChain {
        dim: b_top.dim(),
        levels,
    })
}

/// Cost bound `½k‖b_0‖₁` for routing corner-supported demand to a random
/// corner.
pub fn corner_route_bound<F: Scalar>(b0: &LatticeDemands<F>) -> Result<F> {
    let hi = b0.extent();
    if let Some((p, _)) = b0.iter().find(|(p, _)| p.iter().any(|&c| c != 0 && c != hi)) {
        return Err(Error::OffCorner(p.clone()));
    }
    Ok(F::half() * F::of_usize(b0.dim()) * b0.l1())
}

/// Outcome of checking a chain against an exact transport oracle.
#[derive(Debug, Clone, Serialize)]
pub struct ChainBoundsReport {
    /// Set when the oracle refused a level; the checks below are then
    /// incomplete.
    pub skipped: Option<String>,
    /// `emd[t]` for every level the oracle handled.
    pub emd: Vec<Option<f64>>,
    /// Levels `t ≥ 1` with `EMD(b_{t-1}) > EMD(b_t) + tol`.
    pub monotonicity_violations: Vec<u32>,
    pub precond_norm: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `‖Pb‖₁ / EMD(b_T)`, absent when `EMD(b_T)` is zero or unknown.
    pub ratio: Option<f64>,
}

impl ChainBoundsReport {
    pub fn all_ok(&self) -> bool {
        self.skipped.is_none()
            && self.monotonicity_violations.is_empty()
            && self.lower_ok
            && self.upper_ok
    }
}

/// Checks `EMD(b_{t-1}) ≤ EMD(b_t)` at every level and
/// `EMD(b_T) ≤ ‖Pb_T‖₁ ≤ 2k(T+1)·EMD(b_T)`, with absolute slack `1e-9`.
/// `emd` returns `None` when the level is beyond its budget.
pub fn chain_bounds_check<F: Scalar>(
    chain: &ReductionChain<F>,
    emd: impl Fn(&LatticeDemands<F>) -> Result<Option<f64>>,
) -> Result<ChainBoundsReport> {
    const TOL: f64 = 1e-9;
    let top = chain.top();
    let mut values = Vec::with_capacity(top as usize + 1);
    let mut skipped = None;
    if chain.dim() > 3 {
        skipped = Some(format!("dimension {} exceeds 3", chain.dim()));
    }
    for t in 0..=top {
        let v = if skipped.is_some() {
            None
        } else {
            emd(chain.level(t))?
        };
        if v.is_none() && skipped.is_none() {
            skipped = Some(format!(
                "level {t} support {} beyond oracle budget",
                chain.level(t).support_len()
            ));
        }
        values.push(v);
    }
    let monotonicity_violations = (1..=top)
        .filter(|&t| match (values[t as usize - 1], values[t as usize]) {
            (Some(lo), Some(hi)) => lo > hi + TOL,
            _ => false,
        })
        .collect();
    let norm = chain.weighted_total().to_f64_lossy();
    let bound = 2.0 * chain.dim() as f64 * (top as f64 + 1.0);
    let (lower_ok, upper_ok, ratio) = match values[top as usize] {
        Some(e) => (
            e <= norm + TOL,
            norm <= bound * e + TOL,
            (e > 0.0).then(|| norm / e),
        ),
        None => (false, false, None),
    };
    Ok(ChainBoundsReport {
        skipped,
        emd: values,
        monotonicity_violations,
        precond_norm: norm,
        lower_ok,
        upper_ok,
        ratio,
    })
}
