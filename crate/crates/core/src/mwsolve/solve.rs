use serde::Serialize;

use crate::error::{Error, Result};
use crate::minnorm::{ApproxSolver, CostModel, NormTag, NormedOperator};
use crate::mwsolve::{
    mu_search, mw_run, L1Saddle, LinfSaddle, MuSearch, MwOptions, Probe, ProbeStatus,
    SaddleProblem,
};
use crate::scalar::{dot, l1_norm, linf_norm, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinNormKind {
    /// `min ‖x‖₁ : Ax = b` with `A: ℓ1 → ℓ1`.
    L1,
    /// `min ‖x‖∞ : Ax = b` with `A: ℓ∞ → ℓ∞`.
    LInf,
}

/// Primal candidate with a dual vector `y`, rescaled so `‖A*y‖_* ≤ 1`.
#[derive(Debug, Clone)]
pub struct PrimalDualPair<F> {
    pub x: Vec<F>,
    pub y: Vec<F>,
    /// `‖x‖`
    pub primal_value: F,
    /// `y·b`, a lower bound on the optimum.
    pub dual_bound: F,
    /// `y·b − ‖y‖_*·‖Ax − b‖`, a lower bound on both the optimum and
    /// `primal_value`.
    pub dual_value: F,
    /// `primal_value − dual_value`
    pub gap: F,
}

#[derive(Debug, Clone)]
pub struct MinNormOptions {
    /// Relative residual target `γ₀` of the first stage, as a fraction of
    /// `‖A‖·(certified lower bound)`. Defaults to `ε/(4κ̃)`.
    pub first_stage_accuracy: Option<f64>,
    /// Each later stage shrinks the residual by this factor.
    pub refine_factor: f64,
    pub max_stages: usize,
    pub check_every: usize,
    pub max_iterations_per_probe: Option<usize>,
    /// Learning-rate multiplier handed to the MW engine.
    pub step_scale: f64,
}

impl Default for MinNormOptions {
    fn default() -> Self {
        MinNormOptions {
            first_stage_accuracy: None,
            refine_factor: 0.5,
            max_stages: 64,
            check_every: 16,
            max_iterations_per_probe: None,
            step_scale: 1.0,
        }
    }
}

/// Residual target of a stage.
#[derive(Debug, Clone, Copy)]
pub enum Target<F> {
    /// `γ·‖A‖·L` with `L` the best certified lower bound so far.
    Relative(F),
    Absolute(F),
}

#[derive(Debug, Clone)]
pub struct ProbeOutcome<F> {
    pub radius: F,
    pub status: ProbeStatus,
    pub x: Vec<F>,
    pub residual: F,
    pub dual: Option<DualCandidate<F>>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct DualCandidate<F> {
    /// Scaled so that `‖A*y‖_* = 1`.
    pub y: Vec<F>,
    pub bound: F,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub radius: f64,
    pub certified_lower: f64,
    pub residual_in: f64,
    pub residual_out: f64,
    pub probes: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct StageOutcome<F> {
    pub x: Vec<F>,
    pub residual: F,
    pub search: MuSearch<F>,
    pub dual: Option<DualCandidate<F>>,
    pub iterations: usize,
    pub report: StageReport,
}

#[derive(Debug, Clone)]
pub struct MinNormSolution<F> {
    pub pair: PrimalDualPair<F>,
    pub stages: Vec<StageReport>,
    pub iterations: usize,
    pub probes: usize,
}

fn mix_seed(seed: u64, stage: usize, probe: usize) -> u64 {
    let mut z = seed
        ^ (stage as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (probe as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A minimum-norm problem family over a fixed operator; demands vary.
pub struct MinNormProblem<'a, F: Real> {
    kind: MinNormKind,
    a: &'a NormedOperator<F>,
    norm_a: F,
    seed: u64,
    opts: MinNormOptions,
}

impl<'a, F: Real> MinNormProblem<'a, F> {
    pub fn new(
        kind: MinNormKind,
        a: &'a NormedOperator<F>,
        seed: u64,
        opts: MinNormOptions,
    ) -> Result<Self> {
        let ok = match kind {
            MinNormKind::L1 => {
                matches!(a.domain_norm(), NormTag::L1) && matches!(a.codomain_norm(), NormTag::L1)
            }
            MinNormKind::LInf => {
                matches!(a.domain_norm(), NormTag::LInf)
                    && matches!(a.codomain_norm(), NormTag::LInf)
            }
        };
        if !ok {
            return Err(Error::Config(format!(
                "{kind:?} solver needs matching norms, got {:?} -> {:?}",
                a.domain_norm(),
                a.codomain_norm()
            )));
        }
        let norm_a = a.opnorm()?;
        if !(norm_a > F::zero()) {
            return Err(Error::Config("operator is zero".into()));
        }
        Ok(MinNormProblem {
            kind,
            a,
            norm_a,
            seed,
            opts,
        })
    }

    pub fn norm_a(&self) -> F {
        self.norm_a
    }

    pub fn kind(&self) -> MinNormKind {
        self.kind
    }

    /// Codomain norm of a demand or residual.
    pub fn residual_norm(&self, r: &[F]) -> F {
        match self.kind {
            MinNormKind::L1 => l1_norm(r),
            MinNormKind::LInf => linf_norm(r),
        }
    }

    fn domain_norm(&self, x: &[F]) -> F {
        match self.kind {
            MinNormKind::L1 => l1_norm(x),
            MinNormKind::LInf => linf_norm(x),
        }
    }

    /// Dual norm on the domain side, used to rescale `A*y`.
    fn dual_domain_norm(&self, g: &[F]) -> F {
        match self.kind {
            MinNormKind::L1 => linf_norm(g),
            MinNormKind::LInf => l1_norm(g),
        }
    }

    fn dual_codomain_norm(&self, y: &[F]) -> F {
        match self.kind {
            MinNormKind::L1 => linf_norm(y),
            MinNormKind::LInf => l1_norm(y),
        }
    }

    /// Rescales `y` so `‖A*y‖_* = 1`; `None` if it certifies nothing.
    pub fn dual_candidate(&self, y: Vec<F>, b: &[F]) -> Result<Option<DualCandidate<F>>> {
        let g = self.a.apply_adjoint(&y)?;
        let s = self.dual_domain_norm(&g);
        if !(s > F::zero()) {
            return Ok(None);
        }
        let y: Vec<F> = y.into_iter().map(|v| v / s).collect();
        let bound = dot(&y, b);
        Ok((bound > F::zero()).then_some(DualCandidate { y, bound }))
    }

    /// The trivial certificate `‖b‖/‖A‖`.
    pub fn trivial_dual(&self, b: &[F]) -> Result<Option<DualCandidate<F>>> {
        let y: Vec<F> = match self.kind {
                        MinNormKind::L1 => b.iter().map(|&v| if v == F::zero() { v } else { v.signum() }).collect(),
            MinNormKind::LInf => {
                let mut y = vec![F::zero(); b.len()];
                if let Some((i, _)) = b
                    .iter()
                    .enumerate()
                    .max_by(|p, q| p.1.abs().partial_cmp(&q.1.abs()).expect("finite"))
                {
                    y[i] = b[i].signum();
                }
                y
            }
        };
        self.dual_candidate(y, b)
    }

    /// One MW run at `radius` with residual target `theta`. A run at an
    /// enlarged step that ends undecided is repeated with the step cut by 8
    /// until it reaches the worst-case rate, whose iteration bound
    /// guarantees a decision.
    pub fn probe(&self, b: &[F], radius: F, theta: F, seed: u64) -> Result<ProbeOutcome<F>> {
        let mut scale = self.opts.step_scale;
        let mut spent = 0;
        loop {
            let mut out = self.probe_at(b, radius, theta, seed, scale)?;
            out.iterations += spent;
            if out.status != ProbeStatus::Undecided || scale <= 1.0 {
                return Ok(out);
            }
            spent = out.iterations;
            scale = (scale / 8.0).max(1.0);
        }
    }

    fn probe_at(&self, b: &[F], radius: F, theta: F, seed: u64, step_scale: f64) -> Result<ProbeOutcome<F>> {
        let map = self.a.map();
        let kind = self.kind;
        // early exit as soon as the average point meets the target or the
        // bounds certify infeasibility
        let stop = move |cp: &crate::mwsolve::Checkpoint<'_, F>| match kind {
            MinNormKind::L1 => -cp.lower <= theta || cp.upper < F::zero(),
            MinNormKind::LInf => cp.upper <= theta || cp.lower > F::zero(),
        };
        let opts = MwOptions {
            check_every: self.opts.check_every,
            max_iterations: self.opts.max_iterations_per_probe,
            stop: Some(Box::new(stop)),
            step_scale,
            ..MwOptions::default()
        };
        let (x, y_raw, lower, upper, iterations) = match self.kind {
            MinNormKind::L1 => {
                let p = L1Saddle::new(map, b, radius, self.norm_a);
                let out = mw_run(&p as &dyn SaddleProblem<F>, theta, seed, opts)?;
                let x = p.primal(out.w_avg.weights());
                (x, out.z_avg, out.lower, out.upper, out.iterations)
            }
            MinNormKind::LInf => {
                let p = LinfSaddle::new(map, b, radius, self.norm_a);
                let out = mw_run(&p as &dyn SaddleProblem<F>, theta, seed, opts)?;
                let y: Vec<F> = out.w_avg.signed().into_iter().map(|v| -v).collect();
                (out.z_avg, y, out.lower, out.upper, out.iterations)
            }
        };
        let ax = self.a.apply(&x)?;
        let r: Vec<F> = b.iter().zip(&ax).map(|(bi, ai)| *bi - *ai).collect();
        let residual = self.residual_norm(&r);
        let infeasible = match self.kind {
            MinNormKind::L1 => upper < F::zero(),
            MinNormKind::LInf => lower > F::zero(),
        };
        let status = if residual <= theta {
            ProbeStatus::Feasible
        } else if infeasible {
            ProbeStatus::Infeasible
        } else {
            ProbeStatus::Undecided
        };
        let dual = self.dual_candidate(y_raw, b)?;
        Ok(ProbeOutcome {
            radius,
            status,
            x,
            residual,
            dual,
            iterations,
        })
    }

    /// Radius search on `[‖b‖/‖A‖, κ̃‖b‖/‖A‖]` plus the solution at the
    /// smallest feasible radius.
    pub fn stage(
        &self,
        b: &[F],
        eps: F,
        kappa: F,
        target: Target<F>,
        stage: usize,
    ) -> Result<StageOutcome<F>> {
        let lower = self.residual_norm(b) / self.norm_a;
        self.stage_bracketed(b, lower, kappa.max(F::one()) * lower, eps, target, stage)
    }

    /// As [`Self::stage`] with an explicit radius bracket; `lower` must not
    /// exceed the optimum.
    pub fn stage_bracketed(
        &self,
        b: &[F],
        lower: F,
        upper: F,
        eps: F,
        target: Target<F>,
        stage: usize,
    ) -> Result<StageOutcome<F>> {
        let bn = self.residual_norm(b);
        let mut best_dual = self.trivial_dual(b)?;
        let mut best_feasible: Option<ProbeOutcome<F>> = None;
        let mut iterations = 0;
        let mut count = 0;
        let mut certified = lower;
        let mut core = |radius: F| -> Result<Probe<F>> {
            let theta = match target {
                Target::Relative(g) => g * self.norm_a * certified,
                Target::Absolute(t) => t,
            };
            let out = self.probe(b, radius, theta, mix_seed(self.seed, stage, count))?;
            count += 1;
            iterations += out.iterations;
            let mut cert = None;
            if let Some(d) = &out.dual {
                if best_dual.as_ref().map_or(true, |bd| d.bound > bd.bound) {
                    best_dual = Some(d.clone());
                }
                if out.status == ProbeStatus::Infeasible {
                    cert = Some(d.bound);
                }
                certified = certified.max(d.bound);
            }
            let status = out.status;
            if status == ProbeStatus::Feasible
                && best_feasible.as_ref().map_or(true, |f| out.radius < f.radius)
            {
                best_feasible = Some(out);
            }
            Ok(Probe {
                status,
                certified_lower: cert,
            })
        };
        let search = mu_search(&mut core, lower, upper.max(lower), eps)?;
        let chosen = best_feasible.expect("search ends on a feasible probe");
        let report = StageReport {
            stage,
            radius: chosen.radius.to_f64_lossy(),
            certified_lower: certified.to_f64_lossy(),
            residual_in: bn.to_f64_lossy(),
            residual_out: chosen.residual.to_f64_lossy(),
            probes: search.probes(),
            iterations,
        };
        Ok(StageOutcome {
            x: chosen.x,
            residual: chosen.residual,
            search,
            dual: best_dual,
            iterations,
            report,
        })
    }

    /// Builds the primal-dual pair for `x` against `b`.
    pub fn pair(&self, b: &[F], x: Vec<F>, dual: Option<DualCandidate<F>>) -> Result<PrimalDualPair<F>> {
        let ax = self.a.apply(&x)?;
        let r: Vec<F> = b.iter().zip(&ax).map(|(bi, ai)| *bi - *ai).collect();
        let (y, dual_bound) = match dual {
            Some(d) => (d.y, d.bound),
            None => (vec![F::zero(); b.len()], F::zero()),
        };
        let dual_value = dual_bound - self.dual_codomain_norm(&y) * self.residual_norm(&r);
        let primal_value = self.domain_norm(&x);
        Ok(PrimalDualPair {
            x,
            y,
            primal_value,
            dual_bound,
            dual_value,
            gap: primal_value - dual_value,
        })
    }
}

fn check_params<F: Real>(eps: F, delta: F, kappa: F) -> Result<()> {
    let unit = |v: F| v > F::zero() && v <= F::one();
    if !unit(eps) || !unit(delta) {
        return Err(Error::Config(format!(
            "eps and delta must lie in (0, 1], got {eps:?}, {delta:?}"
        )));
    }
    if !(kappa >= F::one()) {
        return Err(Error::Config(format!("kappa must be >= 1, got {kappa:?}")));
    }
    Ok(())
}

/// Residual recursion: a first stage at relative accuracy `ε/(4κ̃)`, then
/// stages halving the residual until `‖Ax − b‖ ≤ δ·‖A‖·L` for the best
/// certified lower bound `L ≤ opt`.
pub fn solve_min_norm<F: Real>(
    kind: MinNormKind,
    a: &NormedOperator<F>,
    b: &[F],
    eps: F,
    delta: F,
    kappa: F,
    seed: u64,
    opts: &MinNormOptions,
) -> Result<MinNormSolution<F>> {
    check_params(eps, delta, kappa)?;
    crate::error::check_dim("min-norm demand", a.codomain_dim(), b.len())?;
    let problem = MinNormProblem::new(kind, a, seed, opts.clone())?;
    if crate::scalar::is_zero_vec(b) {
        let pair = problem.pair(b, vec![F::zero(); a.domain_dim()], None)?;
        return Ok(MinNormSolution {
            pair,
            stages: Vec::new(),
            iterations: 0,
            probes: 0,
        });
    }
    let gamma0 = opts
        .first_stage_accuracy
        .map(F::of_f64)
        .unwrap_or(eps / (F::of_f64(4.0) * kappa));
    let first = problem.stage(b, eps, kappa, Target::Relative(gamma0), 0)?;
    let mut lower = first.search.certified_lower;
    if let Some(d) = &first.dual {
        lower = lower.max(d.bound);
    }
    let mut x = first.x;
    let dual = first.dual;
    let mut stages = vec![first.report];
    let mut iterations = first.iterations;
    let goal = delta * problem.norm_a() * lower;
    loop {
        let r = crate::minnorm::residual(a, b, &x)?;
        let rn = problem.residual_norm(&r);
        if rn <= goal {
            break;
        }
        if stages.len() > opts.max_stages {
            return Err(Error::Contract(format!(
                "residual {rn:?} above target {goal:?} after {} stages",
                stages.len()
            )));
        }
        let target = Target::Absolute(rn * F::of_f64(opts.refine_factor));
        let st = problem.stage(&r, eps, kappa, target, stages.len())?;
        for (xi, di) in x.iter_mut().zip(&st.x) {
            *xi += *di;
        }
        iterations += st.iterations;
        stages.push(st.report);
    }
    let probes = stages.iter().map(|s| s.probes).sum();
    let pair = problem.pair(b, x, dual)?;
    Ok(MinNormSolution {
        pair,
        stages,
        iterations,
        probes,
    })
}

/// `(1+ε, δ)`-solver for `min ‖x‖₁ : Ax = b` with `A: ℓ1 → ℓ1`.
pub fn solve_l1<F: Real>(
    a: &NormedOperator<F>,
    b: &[F],
    eps: F,
    delta: F,
    kappa: F,
    seed: u64,
) -> Result<MinNormSolution<F>> {
    solve_min_norm(MinNormKind::L1, a, b, eps, delta, kappa, seed, &MinNormOptions::default())
}

/// `(1+ε, δ)`-solver for `min ‖x‖∞ : Ax = b` with `A: ℓ∞ → ℓ∞`.
pub fn solve_linf<F: Real>(
    a: &NormedOperator<F>,
    b: &[F],
    eps: F,
    delta: F,
    kappa: F,
    seed: u64,
) -> Result<MinNormSolution<F>> {
    solve_min_norm(MinNormKind::LInf, a, b, eps, delta, kappa, seed, &MinNormOptions::default())
}

/// Wraps the MW solver as an [`ApproxSolver`] declared `(1+ε, δ)`.
pub fn min_norm_solver<F: Real>(
    kind: MinNormKind,
    a: &NormedOperator<F>,
    eps: F,
    delta: F,
    kappa: F,
    seed: u64,
    opts: MinNormOptions,
) -> Result<ApproxSolver<F>> {
    check_params(eps, delta, kappa)?;
    let op = a.clone();
    let w = a.domain_dim().max(1) as f64;
    let estimate = 64.0 * kappa.to_f64_lossy().powi(2) * (2.0 * w).ln() / eps.to_f64_lossy().powi(2);
    Ok(ApproxSolver::new(
        format!("mw-{kind:?}"),
        a.clone(),
        F::one() + eps,
        delta,
        move |b| Ok(solve_min_norm(kind, &op, b, eps, delta, kappa, seed, &opts)?.pair.x),
    )?
    .with_cost_model(CostModel {
        iterations: estimate,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InducedNorm {
    One,
    Inf,
}

/// Induced `p → p` norm: max absolute column sum for `p = 1`, max absolute
/// row sum for `p = ∞`.
pub fn opnorm<F: crate::scalar::Scalar>(a: &dyn crate::minnorm::LinearMap<F>, p: InducedNorm) -> F {
    match p {
        InducedNorm::One => a.max_abs_column_sum(),
        InducedNorm::Inf => a.max_abs_row_sum(),
    }
}
