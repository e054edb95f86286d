//! Independent LP formulations solved with a general-purpose simplex code;
//! used only to cross-check the combinatorial oracles and the MW solvers.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::error::{Error, Result};
use crate::graph::LengthGraph;
use crate::oracle::TransportationInstance;
use crate::sparse::DenseMatrix;

fn lp_error(e: minilp::Error) -> Error {
    Error::OracleInconsistency(format!("LP oracle: {e}"))
}

/// Minimum of `Σ ℓ(e)|j(e)|` subject to `𝒟j = b`.
pub fn lp_min_cost(g: &LengthGraph<f64>, b: &[f64]) -> Result<f64> {
    crate::error::check_dim("lp demand", g.num_vertices(), b.len())?;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<(Variable, Variable)> = g
        .lengths()
        .iter()
        .map(|&l| (lp.add_var(l, (0.0, f64::INFINITY)), lp.add_var(l, (0.0, f64::INFINITY))))
        .collect();
    let mut rows: Vec<Vec<(Variable, f64)>> = vec![Vec::new(); g.num_vertices()];
    for (e, &(plus, minus)) in vars.iter().enumerate() {
        let (t, h, _) = g.edge(e);
        rows[h].push((plus, 1.0));
        rows[h].push((minus, -1.0));
        rows[t].push((plus, -1.0));
        rows[t].push((minus, 1.0));
    }
    for (v, row) in rows.into_iter().enumerate() {
        lp.add_constraint(row, ComparisonOp::Eq, b[v]);
    }
    Ok(lp.solve().map_err(lp_error)?.objective())
}

/// `min ‖x‖₁` subject to `Ax = b`; `None` when `b` is not in the image.
pub fn lp_min_l1(a: &DenseMatrix<f64>, b: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    crate::error::check_dim("lp rhs", a.rows(), b.len())?;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<(Variable, Variable)> = (0..a.cols())
        .map(|_| (lp.add_var(1.0, (0.0, f64::INFINITY)), lp.add_var(1.0, (0.0, f64::INFINITY))))
        .collect();
    for r in 0..a.rows() {
        let row: Vec<(Variable, f64)> = vars
            .iter()
            .enumerate()
            .flat_map(|(c, &(p, m))| [(p, a.get(r, c)), (m, -a.get(r, c))])
            .filter(|(_, v)| *v != 0.0)
            .collect();
        lp.add_constraint(row, ComparisonOp::Eq, b[r]);
    }
    match lp.solve() {
        Ok(sol) => {
            let x = vars
                .iter()
                .map(|&(p, m)| *sol.var_value(p) - *sol.var_value(m))
                .collect();
            Ok(Some((sol.objective(), x)))
        }
        Err(minilp::Error::Infeasible) => Ok(None),
        Err(e) => Err(lp_error(e)),
    }
}

/// `min ‖x‖_∞` subject to `Ax = b`; `None` when `b` is not in the image.
pub fn lp_min_linf(a: &DenseMatrix<f64>, b: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    crate::error::check_dim("lp rhs", a.rows(), b.len())?;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let xs: Vec<Variable> = (0..a.cols())
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for &x in &xs {
        lp.add_constraint([(x, 1.0), (t, -1.0)], ComparisonOp::Le, 0.0);
        lp.add_constraint([(x, 1.0), (t, 1.0)], ComparisonOp::Ge, 0.0);
    }
    for r in 0..a.rows() {
        let row: Vec<(Variable, f64)> = xs
            .iter()
            .enumerate()
            .map(|(c, &x)| (x, a.get(r, c)))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        lp.add_constraint(row, ComparisonOp::Eq, b[r]);
    }
    match lp.solve() {
        Ok(sol) => Ok(Some((
            sol.objective(),
            xs.iter().map(|&x| *sol.var_value(x)).collect(),
        ))),
        Err(minilp::Error::Infeasible) => Ok(None),
        Err(e) => Err(lp_error(e)),
    }
}

pub fn transport_lp(inst: &TransportationInstance<f64>) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<Variable>> = inst
        .cost
        .iter()
        .map(|row| row.iter().map(|&c| lp.add_var(c, (0.0, f64::INFINITY))).collect())
        .collect();
    for (i, row) in vars.iter().enumerate() {
        let expr: Vec<(Variable, f64)> = row.iter().map(|&v| (v, 1.0)).collect();
        lp.add_constraint(expr, ComparisonOp::Eq, inst.supply[i]);
    }
    for j in 0..inst.demand.len() {
        let expr: Vec<(Variable, f64)> = vars.iter().map(|row| (row[j], 1.0)).collect();
        lp.add_constraint(expr, ComparisonOp::Eq, inst.demand[j]);
    }
    Ok(lp.solve().map_err(lp_error)?.objective())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_lp() {
        let g = LengthGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        assert!((lp_min_cost(&g, &[-1.0, 0.0, 1.0]).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn parallel_columns() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]);
        let (opt, x) = lp_min_l1(&a, &[1.0]).unwrap().unwrap();
        assert!((opt - 1.0).abs() < 1e-9);
        assert!((x[0] + x[1] - 1.0).abs() < 1e-9);
        let col = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]);
        assert!((lp_min_linf(&col, &[1.0, 1.0]).unwrap().unwrap().0 - 1.0).abs() < 1e-9);
        assert!(lp_min_linf(&col, &[1.0, 2.0]).unwrap().is_none());
    }
}
