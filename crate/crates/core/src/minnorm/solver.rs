use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::minnorm::NormedOperator;
use crate::scalar::{is_zero_vec, Real};

pub type SolveFn<F> = dyn Fn(&[F]) -> Result<Vec<F>> + Send + Sync;

/// Informational work estimate carried alongside a solver.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostModel {
    pub iterations: f64,
}

/// A callable `b ↦ x` for a fixed operator, with declared guarantees:
/// `‖x‖ ≤ alpha·‖x_opt‖` and `‖Ax − b‖ ≤ beta·‖A‖·‖x_opt‖`.
///
/// `beta` is stored as an absolute number, i.e. already divided by the
/// condition number the solver was declared against.
#[derive(Clone)]
pub struct ApproxSolver<F: Real> {
    operator: NormedOperator<F>,
    solve: Arc<SolveFn<F>>,
    alpha: F,
    beta: F,
    cost_model: CostModel,
    label: String,
}

impl<F: Real> fmt::Debug for ApproxSolver<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxSolver")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("cost_model", &self.cost_model)
            .finish()
    }
}

impl<F: Real> ApproxSolver<F> {
    pub fn new(
        label: impl Into<String>,
        operator: NormedOperator<F>,
        alpha: F,
        beta: F,
        solve: impl Fn(&[F]) -> Result<Vec<F>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(alpha >= F::one()) || !(beta >= F::zero()) {
            return Err(Error::Config(format!(
                "solver parameters must satisfy alpha >= 1, beta >= 0 (got {alpha:?}, {beta:?})"
            )));
        }
        Ok(ApproxSolver {
            operator,
            solve: Arc::new(solve),
            alpha,
            beta,
            cost_model: CostModel::default(),
            label: label.into(),
        })
    }

    pub fn with_cost_model(mut self, cost_model: CostModel) -> Self {
        self.cost_model = cost_model;
        self
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn beta(&self) -> F {
        self.beta
    }

    /// `beta` multiplied back by the condition number, the form used by the
    /// composition rules.
    pub fn relative_beta(&self, kappa: F) -> F {
        self.beta * kappa
    }

    pub fn cost_model(&self) -> CostModel {
        self.cost_model
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn operator(&self) -> &NormedOperator<F> {
        &self.operator
    }

    /// Runs the solver. A zero demand short-circuits to the zero vector.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        check_dim("solver input", self.operator.codomain_dim(), b.len())?;
        if is_zero_vec(b) {
            return Ok(vec![F::zero(); self.operator.domain_dim()]);
        }
        let x = (self.solve)(b)?;
        check_dim("solver output", self.operator.domain_dim(), x.len())?;
        Ok(x)
    }

    fn redeclare(mut self, label: String, alpha: F, beta: F) -> Self {
        self.label = label;
        self.alpha = alpha;
        self.beta = beta;
        self
    }
}

/// `b − A x`.
pub fn residual<F: Real>(a: &NormedOperator<F>, b: &[F], x: &[F]) -> Result<Vec<F>> {
    check_dim("residual demand", a.codomain_dim(), b.len())?;
    let ax = a.apply(x)?;
    Ok(b.iter().zip(&ax).map(|(bi, ai)| *bi - *ai).collect())
}

fn check_kappa<F: Real>(kappa: F) -> Result<()> {
    if !(kappa >= F::one()) {
        return Err(Error::Config(format!(
            "condition number must be >= 1, got {kappa:?}"
        )));
    }
    Ok(())
}

/// `F2 ∘ F1`: run `f1`, then `f2` on the residual, and sum the outputs.
///
/// Declared `(α₁ + α₂β₁, β₁β₂/κ̃)` where `β_i` are relative to `kappa`.
pub fn compose<F: Real>(
    f1: &ApproxSolver<F>,
    f2: &ApproxSolver<F>,
    a: &NormedOperator<F>,
    kappa: F,
) -> Result<ApproxSolver<F>> {
    check_kappa(kappa)?;
    if !f1.operator.same_as(a) || !f2.operator.same_as(a) {
        return Err(Error::Config(format!(
            "cannot compose '{}' and '{}': solvers target different operators",
            f1.label, f2.label
        )));
    }
    let b1 = f1.relative_beta(kappa);
    let b2 = f2.relative_beta(kappa);
    let alpha = f1.alpha + f2.alpha * b1;
    let beta = b1 * b2 / kappa;
    let (s1, s2, op) = (f1.clone(), f2.clone(), a.clone());
    let label = format!("{} ∘ {}", f2.label, f1.label);
    let cost = CostModel {
        iterations: f1.cost_model.iterations + f2.cost_model.iterations,
    };
    Ok(ApproxSolver::new(label, a.clone(), alpha, beta, move |b| {
        let mut x = s1.solve(b)?;
        let rem = residual(&op, b, &x)?;
        if is_zero_vec(&rem) {
            return Ok(x);
        }
        let dx = s2.solve(&rem)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += *di;
        }
        Ok(x)
    })?
    .with_cost_model(cost))
}

/// `F^t`, the `t`-fold residual recursion of `f` with itself.
///
/// Declared `(α/(1−β), βᵗ/κ̃)`; refuses `β ≥ 1`.
pub fn iterate<F: Real>(
    f: &ApproxSolver<F>,
    t: usize,
    a: &NormedOperator<F>,
    kappa: F,
) -> Result<ApproxSolver<F>> {
    check_kappa(kappa)?;
    if t == 0 {
        return Err(Error::Config("iterate needs t >= 1".into()));
    }
    let beta = f.relative_beta(kappa);
    if !(beta < F::one()) {
        return Err(Error::DivergentSchedule(beta.to_f64_lossy()));
    }
    let mut g = f.clone();
    for _ in 1..t {
        g = compose(&g, f, a, kappa)?;
    }
    let alpha = f.alpha / (F::one() - beta);
    let beta_t = beta.powi(t as i32) / kappa;
    Ok(g.redeclare(format!("({})^{t}", f.label), alpha, beta_t))
}

/// `Gᵗ ∘ F` for a `(1+ε, ε/2κ̃)` first stage and a `(2, 1/2κ̃)` refiner,
/// declared `(1+5ε, ε·2^{−t−1}/κ̃)`.
pub fn refine<F: Real>(
    f: &ApproxSolver<F>,
    g: &ApproxSolver<F>,
    t: usize,
    eps: F,
    a: &NormedOperator<F>,
    kappa: F,
) -> Result<ApproxSolver<F>> {
    let tol = F::of_f64(1e-12);
    let two = F::two();
    if f.alpha > F::one() + eps + tol || f.relative_beta(kappa) > eps / two + tol {
        return Err(Error::Config(format!(
            "first stage '{}' must be a (1+eps, eps/2κ̃)-solver",
            f.label
        )));
    }
    if g.alpha > two + tol || g.relative_beta(kappa) > F::half() + tol {
        return Err(Error::Config(format!(
            "refiner '{}' must be a (2, 1/2κ̃)-solver",
            g.label
        )));
    }
    let gt = iterate(g, t, a, kappa)?;
    let composed = compose(f, &gt, a, kappa)?;
    let alpha = F::one() + F::of_f64(5.0) * eps;
    let beta = eps * F::pow2(-(t as i32) - 1) / kappa;
    Ok(composed.redeclare(
        format!("{}^{t} ∘ {}", g.label, f.label),
        alpha,
        beta,
    ))
}

/// Terminates a chain with an exact-feasibility `(M, 0)` solver; for a
/// `(1+ε, εδ/κ̃)` first stage the result is declared `(1+ε(1+δM), 0)`.
pub fn chain_terminate<F: Real>(
    f: &ApproxSolver<F>,
    terminal: &ApproxSolver<F>,
    a: &NormedOperator<F>,
    kappa: F,
) -> Result<ApproxSolver<F>> {
    if !terminal.beta.is_zero() {
        return Err(Error::Config(format!(
            "terminal solver '{}' must have beta = 0",
            terminal.label
        )));
    }
    compose(f, terminal, a, kappa)
}

/// Observed `(‖x‖/opt, ‖Ax − b‖/(‖A‖·opt))` against an oracle optimum.
pub fn measure_quality<F: Real>(
    a: &NormedOperator<F>,
    b: &[F],
    x: &[F],
    opt_norm: F,
) -> Result<(F, F)> {
    if is_zero_vec(b) {
        return Ok((F::zero(), F::zero()));
    }
    if !(opt_norm > F::zero()) {
        return Err(Error::OracleInconsistency(format!(
            "optimum norm {opt_norm:?} for a nonzero demand"
        )));
    }
    let r = residual(a, b, x)?;
    let alpha = a.domain_norm_of(x) / opt_norm;
    let beta = a.codomain_norm_of(&r) / (a.opnorm()? * opt_norm);
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minnorm::NormTag;

    fn exact(a: &NormedOperator<f64>) -> ApproxSolver<f64> {
        ApproxSolver::new("exact", a.clone(), 1.0, 0.0, |b| Ok(b.to_vec())).unwrap()
    }

    fn shrink(a: &NormedOperator<f64>, alpha: f64, beta: f64) -> ApproxSolver<f64> {
        ApproxSolver::new("shrink", a.clone(), alpha, beta, move |b| {
            Ok(b.iter().map(|v| v * (1.0 - beta)).collect())
        })
        .unwrap()
    }

    #[test]
    fn residual_examples() {
        let id = NormedOperator::<f64>::identity(2, NormTag::L1);
        assert_eq!(residual(&id, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(residual(&id, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let row = NormedOperator::dense(&[vec![1.0, 1.0]], NormTag::L1, NormTag::L1);
        assert_eq!(residual(&row, &[3.0], &[1.0, 1.0]).unwrap(), vec![1.0]);
        assert!(residual(&row, &[3.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn exact_first_stage_short_circuits() {
        let id = NormedOperator::identity(3, NormTag::L1);
        let f2 = ApproxSolver::new("boom", id.clone(), 3.0, 0.1, |_| {
            Err(Error::Contract("second stage must not run".into()))
        })
        .unwrap();
        let c = compose(&exact(&id), &f2, &id, 1.0).unwrap();
        assert_eq!((c.alpha(), c.beta()), (1.0, 0.0));
        assert_eq!(c.solve(&[1.0, -2.0, 0.5]).unwrap(), vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn compose_rejects_foreign_operator() {
        let a = NormedOperator::<f64>::identity(2, NormTag::L1);
        let b = NormedOperator::<f64>::identity(2, NormTag::L1);
        assert!(matches!(
            compose(&exact(&a), &exact(&b), &a, 1.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn iterate_declarations() {
        let id = NormedOperator::identity(2, NormTag::L1);
        let f = shrink(&id, 2.0, 0.5);
        let f3 = iterate(&f, 3, &id, 1.0).unwrap();
        assert_eq!((f3.alpha(), f3.beta()), (4.0, 0.125));
        let f1 = iterate(&f, 1, &id, 1.0).unwrap();
        assert_eq!((f1.alpha(), f1.beta()), (4.0, 0.5));
        let bad = shrink(&id, 2.0, 1.0);
        assert!(matches!(
            iterate(&bad, 2, &id, 1.0),
            Err(Error::DivergentSchedule(_))
        ));
        // beta is declared against kappa: 0.2 absolute with kappa 10 is 2 relative
        let f = shrink(&id, 1.0, 0.2);
        assert!(iterate(&f, 2, &id, 10.0).is_err());
    }

    #[test]
    fn refine_and_terminate_declarations() {
        let id = NormedOperator::identity(2, NormTag::L1);
        let (eps, kappa, t) = (0.1, 4.0, 3);
        let f = shrink(&id, 1.0 + eps, eps / (2.0 * kappa));
        let g = shrink(&id, 2.0, 1.0 / (2.0 * kappa));
        let r = refine(&f, &g, t, eps, &id, kappa).unwrap();
        assert!((r.alpha() - (1.0 + 5.0 * eps)).abs() < 1e-15);
        assert!((r.beta() - eps * 2f64.powi(-(t as i32) - 1) / kappa).abs() < 1e-15);

        let delta = 0.05;
        let m = 7.0;
        let f = shrink(&id, 1.0 + eps, eps * delta / kappa);
        let terminal = exact(&id).redeclare("mst".into(), m, 0.0);
        let c = chain_terminate(&f, &terminal, &id, kappa).unwrap();
        assert!((c.alpha() - (1.0 + eps * (1.0 + delta * m))).abs() < 1e-12);
        assert_eq!(c.beta(), 0.0);
        assert!(chain_terminate(&f, &g, &id, kappa).is_err());
    }

    #[test]
    fn measure_quality_conventions() {
        let id = NormedOperator::identity(2, NormTag::L1);
        let b = [1.0, -1.0];
        assert_eq!(measure_quality(&id, &b, &b, 2.0).unwrap(), (1.0, 0.0));
        assert_eq!(measure_quality(&id, &b, &[0.0, 0.0], 2.0).unwrap(), (0.0, 1.0));
        assert_eq!(measure_quality(&id, &[0.0, 0.0], &[5.0, 0.0], 0.0).unwrap(), (0.0, 0.0));
        assert!(matches!(
            measure_quality(&id, &b, &b, 0.0),
            Err(Error::OracleInconsistency(_))
        ));
    }
}
