use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{divergence, lipschitz_constant, DualPotential, Flow, LengthGraph};
use crate::scalar::{dot, l1_norm, Real};

/// `φ = P*y` read off at each vertex's column, divided by its measured
/// Lipschitz constant. A zero `y` (or one constant on the graph) gives the
/// zero potential.
pub fn extract_dual<F: Real>(
    g: &LengthGraph<F>,
    adjoint: &[F],
    column_of_vertex: &[usize],
) -> Result<DualPotential<F>> {
    crate::error::check_dim("vertex columns", g.num_vertices(), column_of_vertex.len())?;
    let phi: Vec<F> = column_of_vertex.iter().map(|&c| adjoint[c]).collect();
    Ok(normalize_potential(g, phi))
}

/// Scales `phi` to Lipschitz constant at most 1, exactly as measured, and
/// shifts it so its minimum is 0 (demands sum to zero, so the value is
/// unchanged).
pub fn normalize_potential<F: Real>(g: &LengthGraph<F>, phi: Vec<F>) -> DualPotential<F> {
    let lip = lipschitz_constant(g, &phi);
    if !(lip > F::zero()) {
        let n = phi.len();
        return DualPotential::measured(g, vec![F::zero(); n]);
    }
    let low = phi.iter().copied().fold(phi[0], |m, v| m.min_of(v));
    let mut phi: Vec<F> = phi.into_iter().map(|v| (v - low) / lip).collect();
    // rounding can leave the quotient a few ulps above one
    let mut out = DualPotential::measured(g, phi.clone());
    // cancellation in φ(u) − φ(v) can exceed an ulp by far, so the step doubles
    let mut step = F::epsilon() * F::of_f64(4.0);
    while out.lipschitz > F::one() {
        let shrink = F::one() - step;
        phi.iter_mut().for_each(|v| *v *= shrink);
        out = DualPotential::measured(g, phi.clone());
        step = step * F::two();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub cost: f64,
    pub dual_value: f64,
    /// `cost / dual_value`; infinite when the dual is not positive.
    pub ratio: f64,
    pub lipschitz: f64,
    /// `max_v |(𝒟j − b)(v)|`
    pub conservation: f64,
}

/// Checks conservation, Lipschitz feasibility and weak duality; a violation
/// is a bug, not an approximation issue.
pub fn certify<F: Real>(
    g: &LengthGraph<F>,
    b: &[F],
    flow: &Flow<F>,
    dual: &DualPotential<F>,
) -> Result<GapReport> {
    let dj = divergence(g, flow.values());
    let conservation = dj
        .iter()
        .zip(b)
        .map(|(a, c)| (*a - *c).abs())
        .fold(F::zero(), |m, v| if v > m { v } else { m })
        .to_f64_lossy();
    let bl1 = l1_norm(b).to_f64_lossy();
    if conservation > 1e-9 * bl1.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract(format!(
            "flow misses the demand by {conservation:e} (‖b‖₁ = {bl1})"
        )));
    }
    let lipschitz = lipschitz_constant(g, &dual.phi).to_f64_lossy();
    if lipschitz > 1.0 + 1e-9 {
        return Err(Error::Contract(format!("potential has Lipschitz constant {lipschitz}")));
    }
    let cost = flow.cost(g).to_f64_lossy();
    let dual_value = dot(&dual.phi, b).to_f64_lossy();
    if dual_value > cost + 1e-9 * cost.max(1.0) {
        return Err(Error::Contract(format!(
            "weak duality violated: dual {dual_value} exceeds cost {cost}"
        )));
    }
    let ratio = if dual_value > 0.0 {
        cost / dual_value
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Ok(GapReport {
        cost,
        dual_value,
        ratio,
        lipschitz,
        conservation,
    })
}
