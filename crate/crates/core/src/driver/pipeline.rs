use std::time::Instant;

use serde::Serialize;

use crate::driver::{default_dim, extract_dual, normalize_potential, PipelineConfig};
use crate::embed::{
    bourgain_embed, choose_levels, jl_project, measure_distortion, snap_to_lattice,
    DistortionReport, PointCloud, SnapReport,
};
use crate::error::Result;
use crate::graph::{all_pairs, cost, divergence, DemandVector, DualPotential, Flow, LengthGraph, MstRouter};
use crate::lattice::{build_chain, PreconditionerP};
use crate::minnorm::{LinearMap, NormTag, NormedOperator};
use crate::mwsolve::{MinNormKind, MinNormOptions, MinNormProblem, StageReport, Target};
use crate::scalar::{is_zero_vec, l1_norm, Real};
use crate::sparse::CscMatrix;

/// `A′ = P·S·𝒟·ℒ⁻¹` kept in factored form. Assembling the product would
/// copy a column of `P` into every incident edge, which costs a factor of
/// the average degree in every matrix-vector product.
pub struct EdgeLatticeMap<F> {
    tail_col: Vec<usize>,
    head_col: Vec<usize>,
    inv_len: Vec<F>,
    p: CscMatrix<F>,
}

impl<F: Real> EdgeLatticeMap<F> {
    /// Nonzeros touched by one product.
    pub fn work(&self) -> usize {
        self.p.nnz() + 2 * self.inv_len.len()
    }
}

impl<F: Real> LinearMap<F> for EdgeLatticeMap<F> {
    fn rows(&self) -> usize {
        self.p.rows()
    }
    fn cols(&self) -> usize {
        self.inv_len.len()
    }
    fn apply_into(&self, x: &[F], y: &mut [F]) {
        let mut z = vec![F::zero(); self.p.cols()];
        for (e, &xe) in x.iter().enumerate() {
            let f = xe * self.inv_len[e];
            z[self.head_col[e]] += f;
            z[self.tail_col[e]] -= f;
        }
        self.p.mul_vec_into(&z, y);
    }
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]) {
        let mut z = vec![F::zero(); self.p.cols()];
        self.p.mul_t_vec_into(y, &mut z);
        for (e, xe) in x.iter_mut().enumerate() {
            *xe = (z[self.head_col[e]] - z[self.tail_col[e]]) * self.inv_len[e];
        }
    }
    fn max_abs_column_sum(&self) -> F {
        let mut scratch = vec![F::zero(); self.p.rows()];
        let mut touched = Vec::new();
        let mut best = F::zero();
        for e in 0..self.inv_len.len() {
            for (sign, c) in [(F::one(), self.head_col[e]), (-F::one(), self.tail_col[e])] {
                for (r, w) in self.p.column(c) {
                    touched.push(r);
                    scratch[r] += sign * w;
                }
            }
            let mut sum = F::zero();
            for &r in &touched {
                sum += scratch[r].abs();
                scratch[r] = F::zero();
            }
            touched.clear();
            best = best.max_of(sum * self.inv_len[e]);
        }
        best
    }
}

/// The preconditioned system over edge variables `x = ℒj`, where `S` sends
/// each vertex to the column of its lattice point, and `b′ = P·S·b`.
pub struct PreconditionedSystem<F: Real> {
    pub precond: PreconditionerP<F>,
    pub column_of_vertex: Vec<usize>,
    pub operator: NormedOperator<F>,
    pub rhs: Vec<F>,
    pub nnz: usize,
}

impl<F: Real> PreconditionedSystem<F> {
    pub fn assemble(g: &LengthGraph<F>, b: &[F], dim: usize, snap: &SnapReport) -> Result<Self> {
        crate::error::check_dim("snapped vertices", g.num_vertices(), snap.points.len())?;
        crate::error::check_dim("demands", g.num_vertices(), b.len())?;
        let precond = PreconditionerP::<F>::new(dim, snap.levels, &snap.points)?;
        let column_of_vertex: Vec<usize> = snap
            .points
            .iter()
            .map(|p| precond.column_of(p).expect("registered above"))
            .collect();
        let map = EdgeLatticeMap {
            tail_col: g.tails().iter().map(|&u| column_of_vertex[u]).collect(),
            head_col: g.heads().iter().map(|&v| column_of_vertex[v]).collect(),
            inv_len: g.lengths().iter().map(|&l| F::one() / l).collect(),
            p: precond.matrix().clone(),
        };
        let nnz = map.work();
        let mut gathered = vec![F::zero(); precond.cols()];
        for (v, &c) in column_of_vertex.iter().enumerate() {
            gathered[c] += b[v];
        }
        let rhs = precond.apply(&gathered)?;
        Ok(PreconditionedSystem {
            precond,
            column_of_vertex,
            operator: NormedOperator::new(map, NormTag::L1, NormTag::L1),
            rhs,
            nnz,
        })
    }

    /// `P*y` on the vertex columns.
    pub fn adjoint_columns(&self, y: &[F]) -> Result<Vec<F>> {
        self.precond.apply_adjoint(y)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingStats {
    pub bourgain_dim: usize,
    pub dim: usize,
    pub levels: u32,
    pub distortion_bourgain: f64,
    pub distortion_projected: f64,
    pub snap_max_displacement: f64,
    pub snap_bound: f64,
    pub snap_merged: usize,
    /// Snap perturbation of the routing cost, converted to graph units.
    pub snap_cost_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreconditionStats {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub max_column_nnz: usize,
    pub column_bound: usize,
    pub opnorm: f64,
    pub kappa_assumed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveStats {
    pub stages: Vec<StageReport>,
    pub iterations: usize,
    pub probes: usize,
    /// Stage whose iterate was kept.
    pub selected_stage: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TerminalStats {
    pub flow_cost: f64,
    pub residual_l1: f64,
    pub repair_cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub opt: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport<F> {
    pub flow: Flow<F>,
    pub cost: F,
    pub dual: DualPotential<F>,
    pub dual_value: F,
    pub gap_ratio: f64,
    pub embedding: Option<EmbeddingStats>,
    pub precondition: Option<PreconditionStats>,
    pub solve: Option<SolveStats>,
    pub terminal: Option<TerminalStats>,
    pub oracle: Option<OracleCheck>,
    /// Reduction chain of the snapped demand, `{k, T, levels}`.
    pub chain: Option<serde_json::Value>,
    /// Wall time per stage in seconds; kept out of the JSON report so that
    /// reports are reproducible byte for byte.
    pub timings: Vec<(&'static str, f64)>,
}

fn gap_ratio(cost: f64, dual: f64) -> f64 {
    if dual > 0.0 {
        cost / dual
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn tagged<T>(stage: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(stage))
}

fn finite_or(v: f64, fallback: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        fallback
    }
}

/// Embed, snap, precondition, solve the `ℓ1` problem by MW with residual
/// refinement, repair the remaining residual along the minimum spanning tree
/// and certify the result with the extracted potential.
pub fn solve_min_cost<F: Real>(
    g: &LengthGraph<F>,
    b: &DemandVector<F>,
    cfg: &PipelineConfig,
) -> Result<SolveReport<F>> {
    tagged("config", cfg.validate())?;
    let n = g.num_vertices();
    let bv = b.values();
    tagged("input", crate::error::check_dim("demand", n, bv.len()))?;
    let eps = F::of_f64(cfg.epsilon);
    let mut timings = Vec::new();
    let router = MstRouter::new(g);

    if is_zero_vec(bv) || n == 1 {
        let flow = Flow::zeros(g.num_edges());
        let dual = DualPotential::measured(g, vec![F::zero(); n]);
        return Ok(SolveReport {
            flow,
            cost: F::zero(),
            dual,
            dual_value: F::zero(),
            gap_ratio: 1.0,
            embedding: None,
            precondition: None,
            solve: None,
            terminal: None,
            oracle: None,
            chain: None,
            timings,
        });
    }

    // embedding
    let clock = Instant::now();
    let cloud = tagged("embed", bourgain_embed(g, cfg.bourgain_repetitions, cfg.seed))?;
    let k = cfg.dim.unwrap_or_else(|| default_dim(n)).min(cloud.dim()).max(1);
    let metric = all_pairs(g);
    let d_bourgain = tagged("embed", measure_distortion(&metric, &cloud))?;
    let (projected, d_proj) = if cfg.skip_jl {
        (cloud.clone(), d_bourgain.clone())
    } else {
        let mut best: Option<(PointCloud<F>, DistortionReport)> = None;
        for trial in 0..cfg.jl_trials as u64 {
            let seed = cfg.seed ^ 0x6a09_e667_f3bc_c908 ^ trial.wrapping_mul(0x9e37_79b9);
            let p = tagged("embed", jl_project(&cloud, k, seed, true))?;
            let d = tagged("embed", measure_distortion(&metric, &p))?;
            // NaN-free: distortion is finite or +inf
            if best.as_ref().map_or(true, |(_, bd)| d.distortion < bd.distortion) {
                best = Some((p, d));
            }
        }
        best.expect("at least one trial")
    };
    let normalized = projected.normalize();
    let levels = cfg.levels.unwrap_or_else(|| choose_levels(&normalized));
    let snap = tagged("snap", snap_to_lattice(&normalized, levels))?;
    let chain = tagged("snap", snap.transfer(bv).and_then(|d| build_chain(&d)))?.to_json();
    let factor = normalized.scale().map_or(1.0, |s| s.factor);
    let bf: Vec<f64> = bv.iter().map(|v| v.to_f64_lossy()).collect();
    let embedding = EmbeddingStats {
        bourgain_dim: cloud.dim(),
        dim: projected.dim(),
        levels,
        distortion_bourgain: d_bourgain.distortion,
        distortion_projected: d_proj.distortion,
        snap_max_displacement: snap.max_displacement,
        snap_bound: snap.bound,
        snap_merged: snap.merged,
        snap_cost_bound: snap.cost_bound(&bf) * d_proj.mu / factor,
    };
    timings.push(("embed", clock.elapsed().as_secs_f64()));

    // preconditioner
    let clock = Instant::now();
    let dim = projected.dim();
    let sys = tagged("precondition", PreconditionedSystem::assemble(g, bv, dim, &snap))?;
    let opnorm = tagged("precondition", sys.operator.opnorm())?;
    let distortion = finite_or(
        d_proj.distortion,
        finite_or(d_bourgain.distortion, n as f64),
    );
    let kappa = cfg
        .kappa
        .unwrap_or(distortion * 2.0 * dim as f64 * (levels as f64 + 1.0))
        .max(1.0);
    let precondition = PreconditionStats {
        rows: sys.precond.rows(),
        cols: g.num_edges(),
        nnz: sys.nnz,
        max_column_nnz: sys.precond.max_column_nnz(),
        column_bound: (levels as usize + 1) << dim.min(60),
        opnorm: opnorm.to_f64_lossy(),
        kappa_assumed: kappa,
    };
    timings.push(("precondition", clock.elapsed().as_secs_f64()));

    // MW stages
    let clock = Instant::now();
    let opts = MinNormOptions {
        check_every: cfg.check_every,
        step_scale: cfg.step_scale,
        ..MinNormOptions::default()
    };
    let problem = tagged(
        "solve",
        MinNormProblem::new(MinNormKind::L1, &sys.operator, cfg.seed, opts),
    )?;
    let kappa_f = F::of_f64(kappa);
    let lengths = g.lengths();
    let to_flow = |x: &[F]| -> Vec<F> { x.iter().zip(lengths).map(|(xi, l)| *xi / *l).collect() };
    let repair_of = |j: &[F]| -> (Vec<F>, Flow<F>) {
        let dj = divergence(g, j);
        let r: Vec<F> = bv.iter().zip(&dj).map(|(bi, di)| *bi - *di).collect();
        let fix = router.route_unchecked(g, &r);
        (r, fix)
    };
    let norm_a = problem.norm_a();
    // The tree flow of a residual is feasible for the preconditioned system
    // (`A′ℒj = P·S·𝒟j`), so its cost caps every radius bracket.
    let bracket = |r: &[F], tree_cost: F| -> (F, F) {
        let lower = l1_norm(r) / norm_a;
        (lower, (kappa_f * lower).min(tree_cost).max(lower))
    };
    let tree0 = router.route_unchecked(g, bv).cost(g);
    let (lo0, hi0) = bracket(&sys.rhs, tree0);
    let target0 = l1_norm(&sys.rhs) * F::of_f64(cfg.first_stage_target());
    let first = tagged(
        "solve",
        problem.stage_bracketed(&sys.rhs, lo0, hi0, eps, Target::Absolute(target0), 0),
    )?;
    let mut x = first.x;
    let dual_y = first.dual;
    let mut stages = vec![first.report];
    let mut iterations = first.iterations;

    let mut best: Option<(F, Vec<F>, Flow<F>, Vec<F>, usize)> = None;
    loop {
        let j = to_flow(&x);
        let (r, fix) = repair_of(&j);
        let flow_cost = cost(g, &j);
        let repair_cost = fix.cost(g);
        let total = flow_cost + repair_cost;
        if best.as_ref().map_or(true, |b| total < b.0) {
            best = Some((total, j, fix, r, stages.len() - 1));
        }
        let done = repair_cost <= F::of_f64(cfg.repair_fraction) * eps * flow_cost;
        if done || stages.len() > cfg.max_refine_stages {
            break;
        }
        let residual = tagged("solve", crate::minnorm::residual(&sys.operator, &sys.rhs, &x))?;
        let rn = l1_norm(&residual);
        if rn == F::zero() {
            break;
        }
        let (lo, hi) = bracket(&residual, repair_cost);
        let st = tagged(
            "solve",
            problem.stage_bracketed(&residual, lo, hi, eps, Target::Absolute(rn * F::half()), stages.len()),
        )?;
        for (xi, di) in x.iter_mut().zip(&st.x) {
            *xi += *di;
        }
        iterations += st.iterations;
        stages.push(st.report);
    }
    timings.push(("solve", clock.elapsed().as_secs_f64()));

    // terminal repair
    let clock = Instant::now();
    let (_, j, fix, r, selected) = best.expect("at least one candidate");
    let terminal = TerminalStats {
        flow_cost: cost(g, &j).to_f64_lossy(),
        residual_l1: l1_norm(&r).to_f64_lossy(),
        repair_cost: fix.cost(g).to_f64_lossy(),
    };
    let mut flow = Flow(j);
    flow.add_assign(&fix);
    timings.push(("terminal", clock.elapsed().as_secs_f64()));

    // dual
    let clock = Instant::now();
    let dual = match &dual_y {
        Some(d) => {
            let cols = tagged("dual", sys.adjoint_columns(&d.y))?;
            tagged("dual", extract_dual(g, &cols, &sys.column_of_vertex))?
        }
        None => normalize_potential(g, vec![F::zero(); n]),
    };
    let gap = tagged("certify", crate::driver::certify(g, bv, &flow, &dual))?;
    timings.push(("dual", clock.elapsed().as_secs_f64()));

    let probes = stages.iter().map(|s| s.probes).sum();
    let cost_value = flow.cost(g);
    let dual_value = dual.value(bv);
    Ok(SolveReport {
        flow,
        cost: cost_value,
        dual,
        dual_value,
        gap_ratio: gap_ratio(gap.cost, gap.dual_value),
        embedding: Some(embedding),
        precondition: Some(precondition),
        solve: Some(SolveStats {
            stages,
            iterations,
            probes,
            selected_stage: selected,
        }),
        terminal: Some(terminal),
        oracle: None,
        chain: Some(chain),
        timings,
    })
}

impl<F: Real> SolveReport<F> {
    /// Deterministic JSON: vertex and edge ids are 1-based, in input order.
    pub fn to_json(&self) -> serde_json::Value {
        let flow: Vec<_> = self
            .flow
            .values()
            .iter()
            .enumerate()
            .map(|(e, v)| serde_json::json!({"edge": e + 1, "value": v.to_f64_lossy()}))
            .collect();
        let potential: Vec<_> = self
            .dual
            .phi
            .iter()
            .enumerate()
            .map(|(v, p)| serde_json::json!({"vertex": v + 1, "value": p.to_f64_lossy()}))
            .collect();
        let mut stages = serde_json::json!({
            "embedding": self.embedding,
            "precondition": self.precondition,
            "solve": self.solve,
            "terminal": self.terminal,
        });
        if let Some(o) = &self.oracle {
            stages["oracle"] = serde_json::to_value(o).expect("plain data");
        }
        serde_json::json!({
            "cost": self.cost.to_f64_lossy(),
            "dual_value": self.dual_value.to_f64_lossy(),
            "gap_ratio": json_ratio(self.gap_ratio),
            "flow": flow,
            "potential": potential,
            "stages": stages,
        })
    }

    /// Adds the exact optimum for comparison.
    pub fn attach_oracle(&mut self, opt: f64) {
        let cost = self.cost.to_f64_lossy();
        self.oracle = Some(OracleCheck {
            opt,
            ratio: gap_ratio(cost, opt),
        });
    }
}

/// JSON has no infinity; an unbounded ratio is written as `null`.
fn json_ratio(r: f64) -> serde_json::Value {
    if r.is_finite() {
        r.into()
    } else {
        serde_json::Value::Null
    }
}
