use crate::error::{Error, Result};
use crate::graph::LengthGraph;
use crate::minnorm::CutFamily;
use crate::scalar::Scalar;

/// Builds the cut family for `sets`, computing each boundary capacity
/// `c(∂S)` from per-edge `capacities`.
pub fn cut_family<F: Scalar>(
    g: &LengthGraph<F>,
    capacities: &[F],
    sets: Vec<Vec<usize>>,
) -> Result<CutFamily<F>> {
    crate::error::check_dim("cut capacities", g.num_edges(), capacities.len())?;
    if sets.is_empty() {
        return Err(Error::Config("cut family is empty".into()));
    }
    let n = g.num_vertices();
    let mut boundary = Vec::with_capacity(sets.len());
    let mut inside = vec![false; n];
    for (i, s) in sets.iter().enumerate() {
        inside.iter_mut().for_each(|x| *x = false);
        for &v in s {
            if v >= n {
                return Err(Error::Config(format!("set {i} names vertex {v} >= n = {n}")));
            }
            inside[v] = true;
        }
        let c: F = g
            .edges()
            .enumerate()
            .filter(|(_, (u, v, _))| inside[*u] != inside[*v])
            .map(|(e, _)| capacities[e])
            .sum();
        if !(c > F::zero()) {
            return Err(Error::Config(format!("set {i} has zero boundary capacity")));
        }
        boundary.push(c);
    }
    Ok(CutFamily::new(n, sets, boundary))
}

/// `max_{S ∈ family} |1_S·b| / c(∂S)`.
pub fn cut_family_norm<F: Scalar>(
    g: &LengthGraph<F>,
    capacities: &[F],
    sets: Vec<Vec<usize>>,
    b: &[F],
) -> Result<F> {
    crate::error::check_dim("cut demand", g.num_vertices(), b.len())?;
    Ok(cut_family(g, capacities, sets)?.evaluate(b))
}

/// Every proper nonempty vertex subset; refuses `n > 12`.
pub fn power_set_family(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > 12 {
        return Err(Error::BudgetExceeded {
            what: "power-set cut family",
            size: n,
            limit: 12,
        });
    }
    Ok((1..(1usize << n) - 1)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
        .collect())
}

/// Aligned dyadic sub-squares of a `side × side` grid (vertex `r·side + c`),
/// excluding the full grid. `side` must be a power of two.
pub fn dyadic_grid_family(side: usize) -> Result<Vec<Vec<usize>>> {
    if side == 0 || !side.is_power_of_two() {
        return Err(Error::Config(format!("grid side {side} is not a power of two")));
    }
    let mut sets = Vec::new();
    let mut block = side / 2;
    while block >= 1 {
        for r0 in (0..side).step_by(block) {
            for c0 in (0..side).step_by(block) {
                sets.push(
                    (r0..r0 + block)
                        .flat_map(|r| (c0..c0 + block).map(move |c| r * side + c))
                        .collect(),
                );
            }
        }
        block /= 2;
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(side: usize) -> LengthGraph<f64> {
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let v = r * side + c;
                if c + 1 < side {
                    edges.push((v, v + 1, 1.0));
                }
                if r + 1 < side {
                    edges.push((v, v + side, 1.0));
                }
            }
        }
        LengthGraph::new(side * side, &edges).unwrap()
    }

    #[test]
    fn zero_demand_is_zero() {
        let g = grid(2);
        let caps = vec![1.0; g.num_edges()];
        let v = cut_family_norm(&g, &caps, vec![vec![0], vec![1, 2]], &[0.0; 4]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn singleton_divides_by_degree() {
        let g = grid(4);
        let caps = vec![1.0; g.num_edges()];
        let mut b = vec![0.0; 16];
        b[5] = 3.0;
        b[0] = -3.0;
        assert_eq!(cut_family_norm(&g, &caps, vec![vec![5]], &b).unwrap(), 0.75);
        assert_eq!(cut_family_norm(&g, &caps, vec![vec![0]], &b).unwrap(), 1.5);
    }

    #[test]
    fn empty_family_rejected() {
        let g = grid(2);
        let caps = vec![1.0; g.num_edges()];
        assert!(cut_family_norm(&g, &caps, vec![], &[0.0; 4]).is_err());
    }

    #[test]
    fn dyadic_family_below_power_set() {
        let g = grid(2);
        let caps = vec![1.0; g.num_edges()];
        let b = [1.0, -0.5, 2.0, -2.5];
        let fam = cut_family_norm(&g, &caps, dyadic_grid_family(2).unwrap(), &b).unwrap();
        let all = cut_family_norm(&g, &caps, power_set_family(4).unwrap(), &b).unwrap();
        assert!(fam <= all);
        assert_eq!(dyadic_grid_family(4).unwrap().len(), 4 + 16);
    }
}
