use crate::graph::{DualPotential, Flow, LengthGraph};
use crate::scalar::{pairwise_sum, Scalar};

/// Discrete derivative `(𝒟*φ)(e) = φ(head) − φ(tail)`.
pub fn derivative<F: Scalar>(g: &LengthGraph<F>, phi: &[F]) -> Vec<F> {
    assert_eq!(phi.len(), g.num_vertices());
    g.edges().map(|(u, v, _)| phi[v] - phi[u]).collect()
}

/// Divergence `(𝒟j)(x) = inflow(x) − outflow(x)`; sources carry negative
/// demand. With this sign `𝒟` is exactly the transpose of [`derivative`],
/// i.e. `⟨𝒟j, φ⟩ = ⟨j, 𝒟*φ⟩` (see [`adjoint_defect`]).
pub fn divergence<F: Scalar>(g: &LengthGraph<F>, j: &[F]) -> Vec<F> {
    assert_eq!(j.len(), g.num_edges());
    let mut b = vec![F::zero(); g.num_vertices()];
    for (e, (u, v, _)) in g.edges().enumerate() {
        b[u] -= j[e];
        b[v] += j[e];
    }
    b
}

/// `⟨𝒟j, φ⟩ − ⟨j, 𝒟*φ⟩`, identically zero for the inflow-minus-outflow
/// divergence.
pub fn adjoint_defect<F: Scalar>(g: &LengthGraph<F>, j: &[F], phi: &[F]) -> F {
    let dj = divergence(g, j);
    let dphi = derivative(g, phi);
    crate::scalar::dot(&dj, phi) - crate::scalar::dot(j, &dphi)
}

/// Cost norm `Σ |j(e)| ℓ(e)`.
pub fn cost<F: Scalar>(g: &LengthGraph<F>, j: &[F]) -> F {
    assert_eq!(j.len(), g.num_edges());
    let terms: Vec<F> = j.iter().zip(g.lengths()).map(|(f, l)| f.abs() * *l).collect();
    pairwise_sum(&terms)
}

/// Stretch norm `max |f(e)| / ℓ(e)`.
pub fn stretch<F: Scalar>(g: &LengthGraph<F>, f: &[F]) -> F {
    assert_eq!(f.len(), g.num_edges());
    f.iter()
        .zip(g.lengths())
        .map(|(v, l)| v.abs() / *l)
        .fold(F::zero(), F::max_of)
}

/// Lipschitz constant of `φ` with respect to the edge lengths.
pub fn lipschitz_constant<F: Scalar>(g: &LengthGraph<F>, phi: &[F]) -> F {
    stretch(g, &derivative(g, phi))
}

impl<F: Scalar> DualPotential<F> {
    /// Measures the Lipschitz constant of `phi` on `g`.
    pub fn measured(g: &LengthGraph<F>, phi: Vec<F>) -> Self {
        let lipschitz = lipschitz_constant(g, &phi);
        DualPotential { phi, lipschitz }
    }

    pub fn value(&self, b: &[F]) -> F {
        crate::scalar::dot(&self.phi, b)
    }
}

impl<F: Scalar> Flow<F> {
    pub fn cost(&self, g: &LengthGraph<F>) -> F {
        cost(g, &self.0)
    }

    pub fn divergence(&self, g: &LengthGraph<F>) -> Vec<F> {
        divergence(g, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> LengthGraph<f64> {
        LengthGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let g = triangle();
        assert_eq!(derivative(&g, &[4.0, 4.0, 4.0]), vec![0.0; 3]);
        assert_eq!(derivative(&g, &[0.0, 1.0, 2.0]), vec![1.0, 1.0, 2.0]);
        let single = LengthGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(derivative(&single, &[0.0, 3.0]), vec![3.0]);
    }

    #[test]
    fn divergence_examples() {
        let single = LengthGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(divergence(&single, &[1.0]), vec![-1.0, 1.0]);
        assert_eq!(divergence(&single, &[0.0]), vec![0.0, 0.0]);
        // directed cycle 0→1→2→0: edge (0,2) carries −1
        assert_eq!(divergence(&triangle(), &[1.0, 1.0, -1.0]), vec![0.0; 3]);
    }

    #[test]
    fn cost_and_stretch_examples() {
        let g = LengthGraph::new(2, &[(0, 1, 2.5)]).unwrap();
        assert_eq!(cost(&g, &[0.0]), 0.0);
        assert_eq!(cost(&g, &[1.0]), 2.5);
        assert_eq!(cost(&g, &[-1.0]), 2.5);
        assert_eq!(stretch(&g, &[5.0]), 2.0);
    }
}
