use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// `max_{w ∈ △} min_{z ∈ C} w·p(z)` with `p` affine in `z`.
pub trait SaddleProblem<F: Real> {
    /// Number of simplex coordinates of the maximizing player.
    fn w_dim(&self) -> usize;
    fn z_dim(&self) -> usize;
    /// Declared bound on `|p_i(z)|` over `C`.
    fn width(&self) -> F;
    /// Writes `p(z)` into `out` (length `w_dim`).
    fn payoffs(&self, z: &[F], out: &mut [F]);
    /// Writes a minimizer of `w·p(z)` over `C` into `z`; exact ties may be
    /// broken with `rng`.
    fn best_response(&self, w: &[F], z: &mut [F], rng: &mut ChaCha8Rng);
    /// Norm of `z` for the containment check, and the radius of `C`.
    fn z_norm(&self, z: &[F]) -> F;
    fn z_radius(&self) -> F;
}

/// A point of the simplex `△_{2n}` read as `w₊ − w₋ ∈ B₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint<F> {
    weights: Vec<F>,
}

impl<F: Real> SimplexPoint<F> {
    /// Checks nonnegativity and unit sum within `1e-12`.
    pub fn new(weights: Vec<F>) -> Result<Self> {
        let total: F = weights.iter().copied().sum();
        if weights.iter().any(|&w| w < F::zero())
            || (total - F::one()).abs() > F::of_f64(1e-12)
        {
            return Err(Error::Contract(format!(
                "not a simplex point (sum {total:?})"
            )));
        }
        Ok(SimplexPoint { weights })
    }

    pub fn uniform(dim: usize) -> Self {
        SimplexPoint {
            weights: vec![F::one() / F::of_usize(dim); dim],
        }
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// `w₊ − w₋`, where the first half of the coordinates is `w₊`.
    pub fn signed(&self) -> Vec<F> {
        let n = self.weights.len() / 2;
        (0..n)
            .map(|i| self.weights[i] - self.weights[n + i])
            .collect()
    }
}

/// What a run's stop rule sees at a checkpoint.
#[derive(Debug)]
pub struct Checkpoint<'a, F> {
    pub iteration: usize,
    pub w_avg: &'a [F],
    pub z_avg: &'a [F],
    /// `min_z w̄·p(z)`, a lower bound on the saddle value.
    pub lower: F,
    /// `max_i p_i(z̄)`, an upper bound on the saddle value.
    pub upper: F,
}

pub type StopRule<'a, F> = dyn FnMut(&Checkpoint<'_, F>) -> bool + 'a;

pub struct MwOptions<'a, F> {
    /// Constant `C` in the bound `⌈C·ρ²·ln(w_dim)/ε²⌉`.
    pub bound_constant: f64,
    /// Hard cap below the a-priori bound, if any.
    pub max_iterations: Option<usize>,
    /// Stop-rule cadence; `0` disables early exit.
    pub check_every: usize,
    pub stop: Option<Box<StopRule<'a, F>>>,
    pub trace: bool,
    /// Multiplies the learning rate. Values above 1 move faster but only the
    /// measured checkpoints certify anything then.
    pub step_scale: f64,
}

impl<F> Default for MwOptions<'_, F> {
    fn default() -> Self {
        MwOptions {
            bound_constant: 4.0,
            max_iterations: None,
            check_every: 0,
            stop: None,
            trace: false,
            step_scale: 1.0,
        }
    }
}

/// One trace line: running average payoff of the weights player and of the
/// best fixed coordinate in hindsight; their difference is the regret.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub value: f64,
    pub best_fixed: f64,
}

#[derive(Debug, Clone)]
pub struct MwOutcome<F> {
    pub w_avg: SimplexPoint<F>,
    pub z_avg: Vec<F>,
    pub lower: F,
    pub upper: F,
    pub iterations: usize,
    pub bound: usize,
    pub stopped_early: bool,
    pub trace: Vec<TraceRecord>,
}

impl<F: Real> MwOutcome<F> {
    pub fn value(&self) -> F {
        (self.lower + self.upper) * F::half()
    }

    pub fn gap(&self) -> F {
        self.upper - self.lower
    }
}

/// `⌈C·ρ²·ln(dim)/ε²⌉`, at least 1.
pub fn iteration_bound(constant: f64, width: f64, dim: usize, eps: f64) -> usize {
    let raw = constant * width * width * (dim.max(1) as f64).ln() / (eps * eps);
    if raw.is_finite() {
        (raw.ceil() as usize).max(1)
    } else {
        usize::MAX
    }
}

fn softmax_into<F: Real>(logits: &[F], out: &mut [F]) {
    let m = logits.iter().copied().fold(F::neg_infinity(), F::max);
    for (o, &l) in out.iter_mut().zip(logits) {
        *o = (l - m).exp();
    }
    let s: F = crate::scalar::pairwise_sum(out);
    for o in out.iter_mut() {
        *o /= s;
    }
}

/// Multiplicative weights against best responses. The update is
/// `w ← w·exp(ε·p/(2ρ²))`, renormalized; this gives average regret at most
/// `3ε/4` after the a-priori bound, so `upper − lower ≤ ε` there.
pub fn mw_run<F: Real>(
    p: &dyn SaddleProblem<F>,
    eps_additive: F,
    seed: u64,
    mut opts: MwOptions<'_, F>,
) -> Result<MwOutcome<F>> {
    if !(eps_additive > F::zero()) {
        return Err(Error::Config(format!(
            "additive accuracy must be positive, got {eps_additive:?}"
        )));
    }
    let (wd, zd) = (p.w_dim(), p.z_dim());
    if wd == 0 {
        return Err(Error::Config("empty weights space".into()));
    }
    let rho = p.width();
    let bound = iteration_bound(
        opts.bound_constant,
        rho.to_f64_lossy(),
        wd,
        eps_additive.to_f64_lossy(),
    );
    let limit = opts.max_iterations.map_or(bound, |m| m.min(bound)).max(1);
    let eta = if rho > F::zero() {
        eps_additive / (F::two() * rho * rho) * F::of_f64(opts.step_scale)
    } else {
        F::zero()
    };
    let slack = rho * F::of_f64(1e-9) + F::of_f64(1e-300);
    let radius_slack = p.z_radius() * F::of_f64(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut logits = vec![F::zero(); wd];
    let mut w = vec![F::zero(); wd];
    let mut w_sum = vec![F::zero(); wd];
    let mut pay = vec![F::zero(); wd];
    let mut pay_sum = vec![F::zero(); wd];
    let mut z = vec![F::zero(); zd];
    let mut z_sum = vec![F::zero(); zd];
    let mut gained = F::zero();
    let mut trace = Vec::new();
    let mut w_avg = vec![F::zero(); wd];
    let mut z_avg = vec![F::zero(); zd];
    let mut iterations = 0;
    let mut stopped_early = false;

    let summarize = |t: usize,
                     w_sum: &[F],
                     z_sum: &[F],
                     pay_sum: &[F],
                     w_avg: &mut [F],
                     z_avg: &mut [F],
                     rng: &mut ChaCha8Rng|
     -> Result<(F, F)> {
        let inv = F::one() / F::of_usize(t);
        for (a, s) in w_avg.iter_mut().zip(w_sum) {
            *a = *s * inv;
        }
        for (a, s) in z_avg.iter_mut().zip(z_sum) {
            *a = *s * inv;
        }
        let upper = pay_sum
            .iter()
            .fold(F::neg_infinity(), |m, s| m.max(*s * inv));
        let mut zr = vec![F::zero(); z_avg.len()];
        p.best_response(w_avg, &mut zr, rng);
        let mut pr = vec![F::zero(); w_avg.len()];
        p.payoffs(&zr, &mut pr);
        Ok((dot(w_avg, &pr), upper))
    };

    for t in 1..=limit {
        softmax_into(&logits, &mut w);
        p.best_response(&w, &mut z, &mut rng);
        let zn = p.z_norm(&z);
        if zn > p.z_radius() + radius_slack {
            return Err(Error::OracleOutsideBall {
                norm: zn.to_f64_lossy(),
                radius: p.z_radius().to_f64_lossy(),
            });
        }
        p.payoffs(&z, &mut pay);
        for (i, &pi) in pay.iter().enumerate() {
            if pi.abs() > rho + slack || !pi.is_finite() {
                return Err(Error::WidthViolated {
                    payoff: pi.to_f64_lossy(),
                    width: rho.to_f64_lossy(),
                    iteration: t,
                });
            }
            logits[i] += eta * pi;
            pay_sum[i] += pi;
            w_sum[i] += w[i];
        }
        for (s, v) in z_sum.iter_mut().zip(&z) {
            *s += *v;
        }
        gained += dot(&w, &pay);
        iterations = t;
        if opts.trace {
            let tf = F::of_usize(t);
            let best = pay_sum.iter().fold(F::neg_infinity(), |m, s| m.max(*s));
            trace.push(TraceRecord {
                iteration: t,
                value: (gained / tf).to_f64_lossy(),
                best_fixed: (best / tf).to_f64_lossy(),
            });
        }
        if opts.check_every > 0 && t % opts.check_every == 0 && t < limit {
            if let Some(stop) = opts.stop.as_mut() {
                let (lower, upper) =
                    summarize(t, &w_sum, &z_sum, &pay_sum, &mut w_avg, &mut z_avg, &mut rng)?;
                let cp = Checkpoint {
                    iteration: t,
                    w_avg: &w_avg,
                    z_avg: &z_avg,
                    lower,
                    upper,
                };
                if stop(&cp) {
                    stopped_early = true;
                    break;
                }
            }
        }
    }
    let (lower, upper) = summarize(
        iterations,
        &w_sum,
        &z_sum,
        &pay_sum,
        &mut w_avg,
        &mut z_avg,
        &mut rng,
    )?;
    // renormalize against rounding in the running sums
    let total: F = crate::scalar::pairwise_sum(&w_avg);
    for a in w_avg.iter_mut() {
        *a /= total;
    }
    Ok(MwOutcome {
        w_avg: SimplexPoint::new(w_avg)?,
        z_avg,
        lower,
        upper,
        iterations,
        bound,
        stopped_early,
        trace,
    })
}

/// Zero-sum matrix game: `w` mixes rows, `z` mixes columns (the ℓ1 ball's
/// nonnegative face, i.e. the simplex), payoff `w·(Mz + c)`.
#[derive(Debug, Clone)]
pub struct MatrixGame<F> {
    pub matrix: Vec<Vec<F>>,
    pub offset: Vec<F>,
}

impl<F: Real> SaddleProblem<F> for MatrixGame<F> {
    fn w_dim(&self) -> usize {
        self.matrix.len()
    }
    fn z_dim(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }
    fn width(&self) -> F {
        self.matrix
            .iter()
            .zip(&self.offset)
            .flat_map(|(row, c)| row.iter().map(move |m| (*m + *c).abs()))
            .fold(F::zero(), F::max)
    }
    fn payoffs(&self, z: &[F], out: &mut [F]) {
        for ((o, row), c) in out.iter_mut().zip(&self.matrix).zip(&self.offset) {
            *o = dot(row, z) + *c;
        }
    }
    fn best_response(&self, w: &[F], z: &mut [F], _rng: &mut ChaCha8Rng) {
        let cols = self.z_dim();
        let mut best = 0;
        let mut best_val = F::infinity();
        for j in 0..cols {
            let v: F = self.matrix.iter().zip(w).map(|(r, wi)| r[j] * *wi).sum();
            if v < best_val {
                best_val = v;
                best = j;
            }
        }
        z.iter_mut().for_each(|x| *x = F::zero());
        z[best] = F::one();
    }
    fn z_norm(&self, z: &[F]) -> F {
        crate::scalar::l1_norm(z)
    }
    fn z_radius(&self) -> F {
        F::one()
    }
}
