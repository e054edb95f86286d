use precondflow::embed::*;
use precondflow::graph::{all_pairs, LengthGraph};
use precondflow::oracle::{emd_l1, exact_mcf};
use precondflow::graph::DemandVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus `extra` random chords, unit lengths.
fn unit_graph(n: usize, extra: usize, seed: u64) -> LengthGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, 1.0));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v, 1.0));
        }
    }
    LengthGraph::new(n, &edges).unwrap()
}

#[test]
fn single_vertex_sits_at_origin() {
    let g = LengthGraph::<f64>::new(1, &[]).unwrap();
    let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, 0).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c.point(0).iter().all(|&x| x == 0.0));
}

#[test]
fn two_points_are_isometric_after_scaling() {
    let g = LengthGraph::new(2, &[(0, 1, 2.5)]).unwrap();
    for seed in 0..5 {
        let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, seed).unwrap();
        let r = measure_distortion(&all_pairs(&g), &c).unwrap();
        assert_eq!(r.distortion, 1.0);
    }
}

#[test]
fn bourgain_distortion_on_random_unit_graphs() {
    for &n in &[16usize, 64, 256] {
        for seed in 0..10 {
            let g = unit_graph(n, n / 2, seed);
            let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, seed).unwrap();
            let r = measure_distortion(&all_pairs(&g), &c).unwrap();
            let cap = 20.0 * (n as f64).log2();
            assert!(r.distortion >= 1.0 && r.distortion <= cap, "n={n} seed={seed}: {}", r.distortion);
        }
    }
}

#[test]
fn bourgain_is_lipschitz_per_coordinate() {
    let g = unit_graph(40, 30, 3);
    let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, 3).unwrap();
    let d = c.dim() as f64;
    for (u, v, len) in g.edges() {
        for k in 0..c.dim() {
            // undo the 1/D scaling
            assert!((c.point(u)[k] - c.point(v)[k]).abs() * d <= len + 1e-12);
        }
        assert!(c.distance(u, v) <= len + 1e-12);
    }
}

#[test]
fn path_graph_distortion_is_finite() {
    let g = LengthGraph::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
    let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, 1).unwrap();
    let r = measure_distortion(&all_pairs(&g), &c).unwrap();
    assert!(r.distortion.is_finite() && r.distortion >= 1.0);
}

#[test]
fn distortion_of_isometry_and_scaling() {
    let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
    let d = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]];
    let c = PointCloud::new(1, pts.clone()).unwrap();
    assert_eq!(measure_distortion(&d, &c).unwrap().distortion, 1.0);
    let c7 = PointCloud::new(1, pts.iter().map(|p| vec![p[0] * 7.0]).collect()).unwrap();
    let r = measure_distortion(&d, &c7).unwrap();
    assert_eq!(r.distortion, 1.0);
    assert!((r.mu - 1.0 / 7.0).abs() < 1e-15);
}

#[test]
fn coincident_true_metric_is_rejected() {
    let c = PointCloud::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
    assert!(measure_distortion(&[vec![0.0, 0.0], vec![0.0, 0.0]], &c).is_err());
}

#[test]
fn jl_identity_fallback_and_identical_points() {
    let c = PointCloud::new(3, vec![vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0], vec![0.0, 0.5, 1.0]]).unwrap();
    assert_eq!(jl_project(&c, 3, 9, true).unwrap(), c);
    let p = jl_project(&c, 2, 9, false).unwrap();
    assert_eq!(p.point(0), p.point(1));
    assert_eq!(p, jl_project(&c, 2, 9, false).unwrap());
    assert!(jl_project(&c, 4, 9, false).is_err());
}

#[test]
fn jl_median_ratio_report() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 128;
    let src: Vec<Vec<f64>> = (0..n).map(|_| (0..40).map(|_| rng.gen::<f64>()).collect()).collect();
    let c = PointCloud::new(40, src).unwrap();
    let k = 2 * ((n as f64).log2().sqrt().ceil() as usize);
    let p = jl_project(&c, k, 1, false).unwrap();
    let mut ratios = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            ratios.push(p.distance(i, j) / c.distance(i, j));
        }
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[ratios.len() / 2];
    println!("jl median ratio {median:.4} (k = {k})");
    assert!(median > 0.0 && median.is_finite());
}

#[test]
fn jl_target_dim_follows_formula() {
    assert_eq!(jl_target_dim(2, 100), 2);
    assert_eq!(jl_target_dim(256, 100), 6);
    assert_eq!(jl_target_dim(256, 3), 3);
}

#[test]
fn snapping_examples() {
    let c = PointCloud::new(1, vec![vec![0.3], vec![0.25], vec![0.375]]).unwrap();
    let s = snap_to_lattice(&c, 2).unwrap();
    assert_eq!(s.points, vec![vec![1], vec![1], vec![1]]);
    assert_eq!(s.displacement[1], 0.0);
    assert_eq!(s.merged, 2);
    // 0.375 is a tie between 0.25 and 0.5: rounds down
    assert_eq!(snap_coordinate(0.375, 2), 1);
    assert!(s.max_displacement <= s.bound);
    assert!(snap_to_lattice(&PointCloud::new(1, vec![vec![1.5]]).unwrap(), 2).is_err());
}

#[test]
fn snapping_cost_against_emd() {
    for seed in 0..6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 12;
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..2).map(|_| rng.gen::<f64>()).collect()).collect();
        let mut b: Vec<f64> = (0..n).map(|_| rng.gen_range(-4..=4) as f64 / 8.0).collect();
        let s: f64 = b.iter().sum();
        b[0] -= s;
        let c = PointCloud::new(2, pts.clone()).unwrap();
        let levels = 3;
        let snap = snap_to_lattice(&c, levels).unwrap();
        let unit = 2f64.powi(-(levels as i32));
        let snapped: Vec<Vec<f64>> = snap.points.iter().map(|q| q.iter().map(|&z| z as f64 * unit).collect()).collect();
        let before = emd_l1(&pts, &b).unwrap();
        let after = emd_l1(&snapped, &b).unwrap();
        assert!((after - before).abs() <= snap.cost_bound(&b) + 1e-12);
    }
}

#[test]
fn levels_keep_snap_below_quarter_distance() {
    let c = PointCloud::new(2, vec![vec![0.0, 0.0], vec![0.01, 0.0], vec![1.0, 1.0]]).unwrap();
    let t = choose_levels(&c);
    assert!(2f64.powi(-(t as i32)) <= 0.01 / 8.0);
    assert!(2f64.powi(-(t as i32) + 1) > 0.01 / 8.0);
}

#[test]
fn embedded_cost_within_total_distortion() {
    // min-cost in the embedded ℓ1 metric vs graph metric, n ≤ 20
    for seed in 0..4 {
        let g = unit_graph(16, 10, seed);
        let n = g.num_vertices();
        let c = bourgain_embed(&g, BOURGAIN_REPETITIONS, seed).unwrap();
        let k = jl_target_dim(n, c.dim());
        let p = jl_project(&c, k, seed, true).unwrap();
        let metric = all_pairs(&g);
        let r1 = measure_distortion(&metric, &c).unwrap();
        let r2 = measure_distortion(&metric, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let mut b: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64 / 4.0).collect();
        let s: f64 = b.iter().sum();
        b[n - 1] -= s;
        let opt = exact_mcf(&g, &DemandVector::new(b.clone()).unwrap()).unwrap().cost;
        let emb = emd_l1(p.points(), &b).unwrap();
        // μ·d̃ ≥ d and μ·d̃ ≤ L·d transfer to transport costs
        assert!(r2.mu * emb >= opt - 1e-9);
        assert!(r2.mu * emb <= r2.distortion * opt + 1e-9);
        println!("seed {seed}: bourgain L {:.2}, projected L {:.2}", r1.distortion, r2.distortion);
    }
}

proptest! {
    #[test]
    fn jl_is_linear(a in prop::collection::vec(-10.0f64..10.0, 6), b in prop::collection::vec(-10.0f64..10.0, 6), seed in 0u64..50) {
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let c = PointCloud::new(6, vec![a, b, sum]).unwrap();
        let p = jl_project(&c, 3, seed, false).unwrap();
        for i in 0..3 {
            prop_assert!((p.point(0)[i] + p.point(1)[i] - p.point(2)[i]).abs() <= 1e-12 * (1.0 + p.point(2)[i].abs()) * 10.0);
        }
    }

    #[test]
    fn snap_displacement_bound_holds(pts in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 3), 1..20), levels in 1u32..20) {
        let c = PointCloud::new(3, pts).unwrap();
        let s = snap_to_lattice(&c, levels).unwrap();
        for d in &s.displacement {
            prop_assert!(*d <= s.bound);
        }
    }
}
