use crate::error::{Error, Result};
use crate::graph::{DemandVector, Flow, LengthGraph};
use crate::scalar::Scalar;

/// A minimum-total-length spanning tree, rooted at vertex 0, prepared for
/// routing demands along tree paths.
#[derive(Debug, Clone)]
pub struct MstRouter {
    tree_edges: Vec<usize>,
    /// Vertices in BFS order from the root.
    order: Vec<usize>,
    /// `(parent, edge)` for every non-root vertex.
    parent: Vec<Option<(usize, usize)>>,
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal; ties broken by `(length, edge index)`.
pub fn minimum_spanning_tree<F: Scalar>(g: &LengthGraph<F>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    let len = g.lengths();
    order.sort_by(|&a, &b| {
        len[a]
            .partial_cmp(&len[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut sets = DisjointSets::new(g.num_vertices());
    let mut tree = Vec::with_capacity(g.num_vertices().saturating_sub(1));
    for e in order {
        let (u, v, _) = g.edge(e);
        if sets.union(u, v) {
            tree.push(e);
        }
    }
    tree.sort_unstable();
    tree
}

impl MstRouter {
    pub fn new<F: Scalar>(g: &LengthGraph<F>) -> Self {
        let tree_edges = minimum_spanning_tree(g);
        let n = g.num_vertices();
        let mut in_tree = vec![false; g.num_edges()];
        for &e in &tree_edges {
            in_tree[e] = true;
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[0] = true;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(v, e) in g.neighbors(u) {
                if in_tree[e] && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    order.push(v);
                }
            }
        }
        MstRouter {
            tree_edges,
            order,
            parent,
        }
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    /// The unique flow supported on the tree with divergence `b`. The total
    /// of `b` is not checked here; any imbalance lands on the root.
    pub fn route_unchecked<F: Scalar>(&self, g: &LengthGraph<F>, b: &[F]) -> Flow<F> {
        let mut subtree = b.to_vec();
        let mut flow = Flow::zeros(g.num_edges());
        for &v in self.order.iter().rev() {
            if let Some((p, e)) = self.parent[v] {
                // the subtree below v needs `subtree[v]` units of inflow from p
                let s = subtree[v];
                flow.0[e] = if g.tails()[e] == p { s } else { -s };
                subtree[p] += s;
            }
        }
        flow
    }

    pub fn route<F: Scalar>(&self, g: &LengthGraph<F>, b: &DemandVector<F>) -> Result<Flow<F>> {
        if b.len() != g.num_vertices() {
            return Err(Error::DimensionMismatch {
                context: "mst route demand",
                expected: g.num_vertices(),
                got: b.len(),
            });
        }
        Ok(self.route_unchecked(g, b.values()))
    }
}

/// Routes `b` along a minimum spanning tree: exact feasibility with cost at
/// most `n` times optimal.
pub fn mst_route<F: Scalar>(g: &LengthGraph<F>, b: &[F]) -> Result<Flow<F>> {
    let demand = DemandVector::new(b.to_vec())?;
    MstRouter::new(g).route(g, &demand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cost, divergence};

    #[test]
    fn four_cycle_drops_heavy_edge() {
        let g = LengthGraph::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 10.0)])
            .unwrap();
        let router = MstRouter::new(&g);
        assert_eq!(router.tree_edges(), &[0, 1, 2]);
        let b = DemandVector::dipole(4, 3, 0);
        let j = router.route(&g, &b).unwrap();
        assert_eq!(divergence(&g, j.values()), b.values());
        assert_eq!(j.values()[3], 0.0);
        assert_eq!(cost(&g, j.values()), 3.0);
    }

    #[test]
    fn tree_input_routes_uniquely() {
        let g = LengthGraph::new(4, &[(1, 0, 2.0), (1, 2, 1.0), (3, 1, 0.5)]).unwrap();
        let b = [1.0, -2.0, 0.5, 0.5];
        let j = mst_route(&g, &b).unwrap();
        assert_eq!(divergence(&g, j.values()), b.to_vec());
        assert_eq!(j.values(), &[1.0, 0.5, -0.5]);
    }

    #[test]
    fn rejects_unbalanced_demand() {
        let g = LengthGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            mst_route(&g, &[1.0, 1.0]),
            Err(Error::InfeasibleDemand { .. })
        ));
    }

    #[test]
    fn ties_break_by_index() {
        let g = LengthGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g), vec![0, 1]);
    }
}
