use precondflow::driver::{certify, extract_dual, normalize_potential, solve_min_cost, PipelineConfig};
use precondflow::error::Error;
use precondflow::graph::{lipschitz_constant, mst_route, DemandVector, DualPotential, Flow, LengthGraph};
use precondflow::oracle::{exact_mcf, gen_instance, InstanceKind};
use proptest::prelude::*;

fn cfg(eps: f64, seed: u64) -> PipelineConfig {
    PipelineConfig {
        seed,
        ..PipelineConfig::with_epsilon(eps)
    }
}

fn conservation(g: &LengthGraph<f64>, b: &[f64], j: &[f64]) -> f64 {
    precondflow::graph::divergence(g, j)
        .iter()
        .zip(b)
        .map(|(a, c)| (a - c).abs())
        .fold(0.0, f64::max)
}

#[test]
fn single_edge() {
    let g = LengthGraph::<f64>::new(2, &[(0, 1, 1.0)]).unwrap();
    let b = DemandVector::new(vec![-1.0, 1.0]).unwrap();
    let r = solve_min_cost(&g, &b, &cfg(0.1, 0)).unwrap();
    assert!((r.flow.values()[0] - 1.0).abs() < 1e-9);
    assert!((r.cost - 1.0).abs() < 1e-9);
    assert!(r.dual.phi[0].abs() < 1e-9 && (r.dual.phi[1] - 1.0).abs() < 1e-9, "{:?}", r.dual.phi);
    assert!((r.dual_value - 1.0).abs() < 1e-9);
    assert!((r.gap_ratio - 1.0).abs() < 1e-9);
}

#[test]
fn star_two_leaves_into_one() {
    let inst = gen_instance(InstanceKind::Star { leaves: 5 }, 0).unwrap();
    let mut b = vec![0.0; 6];
    b[1] = 1.0;
    b[2] = 1.0;
    b[3] = -2.0;
    let b = DemandVector::new(b).unwrap();
    let opt = exact_mcf(&inst.graph, &b).unwrap().cost;
    assert_eq!(opt, 4.0);
    let eps = 0.1;
    let r = solve_min_cost(&inst.graph, &b, &cfg(eps, 3)).unwrap();
    assert!(r.cost <= (1.0 + eps) * opt + 1e-9, "cost {}", r.cost);
    assert!(r.dual_value >= r.cost / (1.0 + 5.0 * eps));
    assert!(conservation(&inst.graph, b.values(), r.flow.values()) <= 1e-9 * 4.0);
}

#[test]
fn zero_demand_is_free() {
    let inst = gen_instance(InstanceKind::Grid { side: 3 }, 0).unwrap();
    let b = DemandVector::new(vec![0.0; 9]).unwrap();
    let r = solve_min_cost(&inst.graph, &b, &cfg(0.1, 0)).unwrap();
    assert_eq!(r.cost, 0.0);
    assert!(r.flow.values().iter().all(|v| *v == 0.0));
    assert_eq!(r.gap_ratio, 1.0);
}

#[test]
fn zero_dual_gives_zero_potential() {
    let inst = gen_instance(InstanceKind::Path { n: 5 }, 1).unwrap();
    let d = extract_dual(&inst.graph, &[0.0; 3], &[0, 1, 2, 1, 0]).unwrap();
    assert!(d.phi.iter().all(|v| *v == 0.0));
    assert_eq!(d.value(inst.demand.values()), 0.0);
}

#[test]
fn normalized_potential_is_exactly_feasible() {
    let inst = gen_instance(InstanceKind::RandomGeometric { n: 30, max_edges: 200 }, 5).unwrap();
    let phi: Vec<f64> = (0..30).map(|v| ((v * 7919) % 31) as f64 * 0.37).collect();
    let d = normalize_potential(&inst.graph, phi);
    let lip = lipschitz_constant(&inst.graph, &d.phi);
    assert!(lip <= 1.0 && lip > 1.0 - 1e-12, "{lip}");
}

#[test]
fn certify_exact_pair_has_ratio_one() {
    let inst = gen_instance(InstanceKind::Grid { side: 4 }, 2).unwrap();
    let b = DemandVector::dipole(16, 0, 15);
    let sol = exact_mcf(&inst.graph, &b).unwrap();
    let dual = normalize_potential(&inst.graph, sol.potential.clone());
    let rep = certify(&inst.graph, b.values(), &sol.flow, &dual).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-9, "{}", rep.ratio);
}

#[test]
fn certify_tree_flow_within_n() {
    for seed in 0..10 {
        let inst = gen_instance(InstanceKind::RandomGeometric { n: 20, max_edges: 120 }, seed).unwrap();
        let sol = exact_mcf(&inst.graph, &inst.demand).unwrap();
        let tree = mst_route(&inst.graph, inst.demand.values()).unwrap();
        let dual = normalize_potential(&inst.graph, sol.potential.clone());
        let rep = certify(&inst.graph, inst.demand.values(), &tree, &dual).unwrap();
        assert!(rep.ratio <= 20.0 + 1e-9);
    }
}

#[test]
fn certify_rejects_violations() {
    let g = LengthGraph::new(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
    let b = [-1.0, 0.0, 1.0];
    let good = Flow(vec![1.0, 1.0]);
    let short = Flow(vec![1.0, 0.5]);
    let phi = DualPotential::measured(&g, vec![0.0, 1.0, 3.0]);
    assert!(certify(&g, &b, &good, &phi).is_ok());
    assert!(matches!(certify(&g, &b, &short, &phi), Err(Error::Contract(_))));
    let steep = DualPotential::measured(&g, vec![0.0, 2.0, 4.0]);
    assert!(matches!(certify(&g, &b, &good, &steep), Err(Error::Contract(_))));
}

#[test]
fn length_scaling_scales_everything() {
    let inst = gen_instance(InstanceKind::RandomGeometric { n: 24, max_edges: 150 }, 4).unwrap();
    let g = &inst.graph;
    let scaled_edges: Vec<_> = g.edges().map(|(u, v, l)| (u, v, l * 8.0)).collect();
    let g8 = LengthGraph::new(g.num_vertices(), &scaled_edges).unwrap();
    let a = solve_min_cost(g, &inst.demand, &cfg(0.1, 9)).unwrap();
    let b = solve_min_cost(&g8, &inst.demand, &cfg(0.1, 9)).unwrap();
    // power-of-two scaling is exact in floating point up to normalization
    assert!((b.cost / a.cost - 8.0).abs() < 1e-6, "{} vs {}", a.cost, b.cost);
}

#[test]
fn json_layout_and_determinism() {
    let inst = gen_instance(InstanceKind::RandomGeometric { n: 20, max_edges: 120 }, 8).unwrap();
    let c = cfg(0.1, 17);
    let one = solve_min_cost(&inst.graph, &inst.demand, &c).unwrap().to_json();
    let two = solve_min_cost(&inst.graph, &inst.demand, &c).unwrap().to_json();
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
    for key in ["cost", "dual_value", "gap_ratio", "flow", "potential", "stages"] {
        assert!(one.get(key).is_some(), "missing {key}");
    }
    assert_eq!(one["flow"][0]["edge"], 1);
    assert_eq!(one["potential"].as_array().unwrap().len(), 20);
}

#[test]
fn bad_config_is_rejected() {
    let inst = gen_instance(InstanceKind::Path { n: 4 }, 0).unwrap();
    for c in [
        cfg(0.0, 0),
        cfg(1.5, 0),
        PipelineConfig {
            kappa: Some(0.5),
            ..cfg(0.1, 0)
        },
    ] {
        let err = solve_min_cost(&inst.graph, &inst.demand, &c).unwrap_err();
        assert!(err.is_input_error(), "{err}");
    }
}

#[test]
fn structured_fixtures_within_epsilon() {
    let eps = 0.1;
    for (kind, seed) in [
        (InstanceKind::Grid { side: 5 }, 1),
        (InstanceKind::Star { leaves: 12 }, 2),
        (InstanceKind::Path { n: 15 }, 3),
    ] {
        let inst = gen_instance(kind, seed).unwrap();
        let opt = exact_mcf(&inst.graph, &inst.demand).unwrap().cost;
        let r = solve_min_cost(&inst.graph, &inst.demand, &cfg(eps, seed)).unwrap();
        assert!(r.cost <= (1.0 + eps) * opt + 1e-9, "{kind:?}: {} vs {opt}", r.cost);
        assert!(r.gap_ratio <= 1.0 + 5.0 * eps + 1e-6, "{kind:?}: gap {}", r.gap_ratio);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pipeline_invariants(seed in 0u64..1000, n in 4usize..24) {
        let inst = gen_instance(InstanceKind::RandomGeometric { n, max_edges: 6 * n }, seed).unwrap();
        let b = inst.demand.values();
        let r = solve_min_cost(&inst.graph, &inst.demand, &cfg(0.2, seed)).unwrap();
        let bl1: f64 = b.iter().map(|v| v.abs()).sum();
        prop_assert!(conservation(&inst.graph, b, r.flow.values()) <= 1e-9 * bl1);
        prop_assert!(lipschitz_constant(&inst.graph, &r.dual.phi) <= 1.0);
        prop_assert!(r.dual_value <= r.cost + 1e-9 * r.cost);
        let opt = exact_mcf(&inst.graph, &inst.demand).unwrap().cost;
        prop_assert!(r.dual_value <= opt * (1.0 + 1e-9) && r.cost >= opt * (1.0 - 1e-9));
    }
}
