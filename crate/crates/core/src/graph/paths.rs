use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::LengthGraph;
use crate::scalar::Scalar;

/// Heap entry ordered so that `BinaryHeap` pops the smallest distance first.
struct Entry<F> {
    dist: F,
    vertex: usize,
}

impl<F: PartialOrd> PartialEq for Entry<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: PartialOrd> Eq for Entry<F> {}

impl<F: PartialOrd> PartialOrd for Entry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: PartialOrd> Ord for Entry<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Distances `d(x, S) = min_{s ∈ S} d(x, s)` from every vertex to the source
/// set (Dijkstra; lengths are positive).
pub fn shortest_paths<F: Scalar>(g: &LengthGraph<F>, sources: &[usize]) -> Vec<F> {
    let n = g.num_vertices();
    let mut dist: Vec<Option<F>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = Some(F::zero());
        heap.push(Entry {
            dist: F::zero(),
            vertex: s,
        });
    }
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, e) in g.neighbors(u) {
            let cand = d + g.lengths()[e];
            if dist[v].map_or(true, |cur| cand < cur) {
                dist[v] = Some(cand);
                heap.push(Entry {
                    dist: cand,
                    vertex: v,
                });
            }
        }
    }
    dist.into_iter()
        .map(|d| d.expect("graph is connected"))
        .collect()
}

/// All-pairs distance matrix by repeated single-source runs.
pub fn all_pairs<F: Scalar>(g: &LengthGraph<F>) -> Vec<Vec<F>> {
    (0..g.num_vertices())
        .map(|s| shortest_paths(g, &[s]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_distances() {
        let g = LengthGraph::new(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let d = shortest_paths(&g, &[0]);
        assert_eq!(d, vec![0.0, 1.0, 3.0]);
        assert_eq!(shortest_paths(&g, &[1])[1], 0.0);
    }

    #[test]
    fn multi_source_is_pointwise_min() {
        let g = LengthGraph::new(
            5,
            &[(0, 1, 1.0), (1, 2, 4.0), (2, 3, 1.5), (3, 4, 0.5), (0, 4, 7.0)],
        )
        .unwrap();
        let a: Vec<f64> = shortest_paths(&g, &[0]);
        let b = shortest_paths(&g, &[3]);
        let both = shortest_paths(&g, &[0, 3]);
        for v in 0..5 {
            assert_eq!(both[v], a[v].min(b[v]));
        }
    }
}
