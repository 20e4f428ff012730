//! Property tests for the geometric and analytic invariants.

use proptest::prelude::*;

use pednet::centrality::{analyze, AnalysisRequest};
use pednet::geom::{turn_angle_3d, Polyline3, Vec3};
use pednet::metric::{link_costs, Metric, Radius};
use pednet::network::{LinkRecord, Network, TagFilter};
use pednet::routing::{geodesic_tree, Router};
use pednet_testkit::fixtures;

fn vec3_strategy(limit: f64) -> impl Strategy<Value = Vec3> {
    (
        -limit..limit,
        -limit..limit,
        -limit / 4.0..limit / 4.0,
    )
        .prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn polyline_strategy() -> impl Strategy<Value = Polyline3> {
    proptest::collection::vec(vec3_strategy(100.0), 2..8).prop_filter_map(
        "vertices well separated",
        |v| Polyline3::new(v, 0.5).ok(),
    )
}

fn rotate_z(v: &Vec3, angle_rad: f64) -> Vec3 {
    let (s, c) = angle_rad.sin_cos();
    Vec3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
}

proptest! {
    #[test]
    fn turn_angle_symmetry_and_scale(
        a in vec3_strategy(10.0),
        b in vec3_strategy(10.0),
        k in 0.001..1000.0f64,
    ) {
        prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
        let ab = turn_angle_3d(&a, &b).unwrap();
        let ba = turn_angle_3d(&b, &a).unwrap();
        let scaled = turn_angle_3d(&a.scale(k), &b).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!((ab - scaled).abs() < 1e-7);
    }

    #[test]
    fn cumulative_angle_rigid_motion_and_reversal(
        p in polyline_strategy(),
        angle in 0.0..std::f64::consts::TAU,
        shift in vec3_strategy(500.0),
    ) {
        let base = p.cumulative_angular_change(0.0);
        let moved = Polyline3::new(
            p.vertices().iter().map(|v| rotate_z(v, angle).add(&shift)).collect(),
            0.0,
        ).unwrap();
        prop_assert!((moved.cumulative_angular_change(0.0) - base).abs() < 1e-7);
        prop_assert!((p.reversed().cumulative_angular_change(0.0) - base).abs() < 1e-9);
        prop_assert!((p.reversed().length() - p.length()).abs() < 1e-9);
    }

    #[test]
    fn collinear_vertex_insertion_changes_nothing(
        p in polyline_strategy(),
        segment in 0usize..6,
        t in 0.05..0.95f64,
    ) {
        let vertices = p.vertices();
        let segment = segment % (vertices.len() - 1);
        let inserted = vertices[segment]
            .add(&vertices[segment + 1].sub(&vertices[segment]).scale(t));
        let mut with_vertex = vertices.to_vec();
        with_vertex.insert(segment + 1, inserted);
        let q = Polyline3::new(with_vertex, 0.0).unwrap();
        prop_assert!((q.length() - p.length()).abs() < 1e-9 * p.length().max(1.0));
        prop_assert!(
            (q.cumulative_angular_change(0.0) - p.cumulative_angular_change(0.0)).abs() < 1e-9
        );
    }

    #[test]
    fn hybrid_cost_linear_in_a(p in polyline_strategy(), a in 0.0..1.0f64) {
        let net = Network::build(vec![LinkRecord::new("x", p)], 0.4).unwrap();
        let costs = link_costs(&net.links()[0], 0.0);
        let hybrid = Metric::hybrid(a).unwrap().link_cost(&costs);
        let pure_ang = Metric::hybrid(1.0).unwrap().link_cost(&costs);
        let pure_euc = Metric::hybrid(0.0).unwrap().link_cost(&costs);
        // Exact identity, not approximate: the formula is the definition.
        prop_assert_eq!(hybrid, a * pure_ang + (1.0 - a) * pure_euc);
        prop_assert_eq!(pure_ang, costs.ang_deg);
        prop_assert_eq!(pure_euc, costs.euc_m);
    }

    #[test]
    fn half_costs_sum_to_whole(p in polyline_strategy()) {
        let net = Network::build(vec![LinkRecord::new("x", p)], 0.4).unwrap();
        let costs = link_costs(&net.links()[0], 0.0);
        let euc = costs.to_start.euc_m + costs.to_end.euc_m;
        let ang = costs.to_start.ang_deg + costs.to_end.ang_deg;
        prop_assert!((euc - costs.euc_m).abs() <= 1e-9 * costs.euc_m.max(1.0));
        prop_assert!((ang - costs.ang_deg).abs() <= 1e-9 * costs.ang_deg.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn geodesic_costs_are_symmetric(seed in 0u64..200) {
        let net = fixtures::random_network(seed);
        let router = Router::new(&net, 0.0);
        let ids: Vec<String> = net
            .links()
            .iter()
            .filter(|l| !l.is_self_loop())
            .map(|l| l.id.clone())
            .take(4)
            .collect();
        for metric in [Metric::Angular, Metric::Hybrid { a: 0.5 }, Metric::Topological] {
            for a in &ids {
                let from_a = geodesic_tree(&router, a, metric, Radius::Infinite).unwrap();
                for b in &ids {
                    if a == b {
                        continue;
                    }
                    let from_b = geodesic_tree(&router, b, metric, Radius::Infinite).unwrap();
                    let ab = from_a.entry(net.link_index(b).unwrap()).map(|e| e.cost);
                    let ba = from_b.entry(net.link_index(a).unwrap()).map(|e| e.cost);
                    match (ab, ba) {
                        (None, None) => {}
                        (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
                        other => prop_assert!(false, "asymmetric reachability {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn hybrid_endpoints_equal_pure_metrics(seed in 0u64..200) {
        let net = fixtures::random_network(seed);
        let mut req = AnalysisRequest::new(
            vec![
                Metric::Angular,
                Metric::Hybrid { a: 1.0 },
                Metric::Euclidean,
                Metric::Hybrid { a: 0.0 },
            ],
            vec![Radius::Infinite],
        );
        req.noise_floor_deg = 0.0;
        let tables = analyze(&net, &req).unwrap();
        for (pure, hybrid) in [(0usize, 1usize), (2, 3)] {
            for (a, b) in tables[pure].rows.iter().zip(&tables[hybrid].rows) {
                // Bit-exact value equality, hence rank equality.
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn radius_monotonicity_on_random_networks(seed in 200u64..260) {
        let net = fixtures::random_network(seed);
        let router = Router::new(&net, 0.0);
        for link in net.links().iter().filter(|l| !l.is_self_loop()).take(3) {
            let mut previous: Option<std::collections::BTreeSet<String>> = None;
            for r in [5.0, 15.0, 30.0, 60.0] {
                let reach =
                    pednet::routing::reachable_set(&router, &link.id, Radius::Finite(r)).unwrap();
                if let Some(prev) = &previous {
                    prop_assert!(prev.is_subset(&reach));
                }
                previous = Some(reach);
            }
        }
    }

    #[test]
    fn filter_partition_recovers_links(seed in 0u64..60) {
        let net = fixtures::random_network(seed);
        // Tag half the links and split on the tag.
        let mut records = net.to_records();
        for (i, r) in records.iter_mut().enumerate() {
            if i % 2 == 0 {
                r.tags.insert("even".to_string());
            }
        }
        let tagged = Network::build(records, net.snap_tolerance_m()).unwrap();
        let with = tagged.filter(&TagFilter::include(["even"]));
        let without = tagged.filter(&TagFilter::exclude(["even"]));
        let mut ids = std::collections::BTreeSet::new();
        if let Ok(net) = &with {
            ids.extend(net.links().iter().map(|l| l.id.clone()));
        }
        if let Ok(net) = &without {
            ids.extend(net.links().iter().map(|l| l.id.clone()));
        }
        let all: std::collections::BTreeSet<String> =
            tagged.links().iter().map(|l| l.id.clone()).collect();
        prop_assert_eq!(ids, all);
    }
}

#[test]
fn isometry_leaves_centrality_unchanged() {
    // Rotation about an arbitrary axis plus translation, applied to every
    // vertex; every centrality value must survive within 1e-9.
    let net = fixtures::two_floor();
    let axis = Vec3::new(1.0, 2.0, 3.0);
    let angle = 37f64.to_radians();
    let rotate = |v: &Vec3| -> Vec3 {
        // Rodrigues rotation.
        let k = axis.scale(1.0 / axis.norm());
        let cos = angle.cos();
        let sin = angle.sin();
        let cross = Vec3::new(
            k.y * v.z - k.z * v.y,
            k.z * v.x - k.x * v.z,
            k.x * v.y - k.y * v.x,
        );
        v.scale(cos)
            .add(&cross.scale(sin))
            .add(&k.scale(k.dot(v) * (1.0 - cos)))
            .add(&Vec3::new(12.3, -45.6, 7.8))
    };
    let records = net
        .to_records()
        .into_iter()
        .map(|mut r| {
            let vertices = r.geometry.vertices().iter().map(|v| rotate(v)).collect();
            r.geometry = Polyline3::new(vertices, 0.0).unwrap();
            r
        })
        .collect();
    let moved = Network::build(records, net.snap_tolerance_m()).unwrap();

    let mut req = AnalysisRequest::new(
        vec![Metric::Angular, Metric::Euclidean, Metric::Hybrid { a: 0.5 }],
        vec![Radius::Finite(25.0), Radius::Infinite],
    );
    req.noise_floor_deg = 0.0;
    let before = analyze(&net, &req).unwrap();
    let after = analyze(&moved, &req).unwrap();
    for (ta, tb) in before.iter().zip(&after) {
        for (ra, rb) in ta.rows.iter().zip(&tb.rows) {
            assert_eq!(ra.id, rb.id);
            assert_eq!(ra.reach_count, rb.reach_count, "{} reach", ra.id);
            assert!((ra.closeness_total - rb.closeness_total).abs() < 1e-9);
            assert!((ra.betweenness - rb.betweenness).abs() < 1e-9);
        }
    }
}
