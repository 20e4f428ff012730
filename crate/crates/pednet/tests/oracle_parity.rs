//! Spot checks of the search engine against the exhaustive enumeration
//! oracle on structured fixtures. The broad randomized comparison lives in
//! the acceptance suite.

use pednet::metric::{CostTable, Metric, Radius};
use pednet::network::LinkIdx;
use pednet::routing::{geodesic_tree, Router};
use pednet_testkit::{fixtures, oracle};

const METRICS: [Metric; 6] = [
    Metric::Topological,
    Metric::Angular,
    Metric::Euclidean,
    Metric::Hybrid { a: 1.0 / 3.0 },
    Metric::Hybrid { a: 0.5 },
    Metric::Hybrid { a: 2.0 / 3.0 },
];

fn assert_tree_matches_oracle(net: &pednet::Network, noise_floor: f64) {
    let router = Router::new(net, noise_floor);
    let costs = CostTable::compute(net, noise_floor);
    for metric in METRICS {
        for origin in 0..net.links().len() as LinkIdx {
            if net.link(origin).is_self_loop() {
                continue;
            }
            let tree =
                geodesic_tree(&router, &net.link(origin).id, metric, Radius::Infinite).unwrap();
            let reference = oracle::oracle_tree(net, &costs, metric, origin);
            for dest in 0..net.links().len() as LinkIdx {
                if dest == origin || net.link(dest).is_self_loop() {
                    continue;
                }
                match (tree.entry(dest), &reference.dests[dest as usize]) {
                    (None, None) => {}
                    (Some(entry), Some(path)) => {
                        assert!(
                            (entry.cost - path.cost).abs() <= 1e-9,
                            "{metric} {}->{}: engine {} oracle {}",
                            net.link(origin).id,
                            net.link(dest).id,
                            entry.cost,
                            path.cost
                        );
                        assert_eq!(
                            tree.path_links(dest).unwrap(),
                            path.links,
                            "{metric} {}->{}: path disagrees",
                            net.link(origin).id,
                            net.link(dest).id,
                        );
                    }
                    (engine, oracle) => panic!(
                        "{metric} {}->{}: reachability disagrees (engine {:?}, oracle {:?})",
                        net.link(origin).id,
                        net.link(dest).id,
                        engine.map(|e| e.cost),
                        oracle.as_ref().map(|p| p.cost),
                    ),
                }
            }
        }
    }
}

#[test]
fn chain_matches_oracle() {
    assert_tree_matches_oracle(&fixtures::chain(5, 7.5), 0.0);
}

#[test]
fn small_grid_matches_oracle() {
    // 3x2 node grid: 7 links, plenty of equal-cost ties for the tie rules.
    assert_tree_matches_oracle(&fixtures::flat_grid(3, 2, 10.0), 0.0);
}

#[test]
fn two_floor_fixture_matches_oracle() {
    assert_tree_matches_oracle(&fixtures::two_floor(), 0.0);
}

#[test]
fn route_choice_angular_takes_the_bow_euclidean_the_detour() {
    let net = fixtures::route_choice();
    let router = Router::new(&net, 0.5);
    let costs = CostTable::compute(&net, 0.5);

    let angular = geodesic_tree(&router, "o_arm", Metric::Angular, Radius::Infinite).unwrap();
    let euclid = geodesic_tree(&router, "o_arm", Metric::Euclidean, Radius::Infinite).unwrap();
    let dest = net.link_index("d_arm").unwrap();
    let names = |links: Vec<LinkIdx>| -> Vec<String> {
        links.iter().map(|&l| net.link(l).id.clone()).collect()
    };

    // The bow is angularly free (every turn under the noise floor) while the
    // rectangular detour racks up four right angles; lengths go the other way.
    assert!(angular.entry(dest).unwrap().cost < 1e-9);
    assert_eq!(names(angular.path_links(dest).unwrap()), ["o_arm", "bow", "d_arm"]);
    let e = euclid.entry(dest).unwrap();
    assert!((e.cost - 15.0).abs() < 1e-9, "euclid cost {}", e.cost);
    assert_eq!(names(euclid.path_links(dest).unwrap()), ["o_arm", "detour", "d_arm"]);

    // And the oracle agrees on both selections.
    let origin = net.link_index("o_arm").unwrap();
    let oracle_ang = oracle::oracle_tree(&net, &costs, Metric::Angular, origin);
    let oracle_euc = oracle::oracle_tree(&net, &costs, Metric::Euclidean, origin);
    assert_eq!(
        oracle_ang.dests[dest as usize].as_ref().unwrap().links,
        angular.path_links(dest).unwrap()
    );
    assert_eq!(
        oracle_euc.dests[dest as usize].as_ref().unwrap().links,
        euclid.path_links(dest).unwrap()
    );
}

#[test]
fn reachable_sets_match_oracle_on_grid() {
    let net = fixtures::flat_grid(4, 3, 10.0);
    let router = Router::new(&net, 0.0);
    let costs = CostTable::compute(&net, 0.0);
    for origin in 0..net.links().len() as LinkIdx {
        for radius in [Radius::Finite(12.0), Radius::Finite(25.0), Radius::Infinite] {
            let engine =
                pednet::routing::reachable_set(&router, &net.link(origin).id, radius).unwrap();
            let reference = oracle::oracle_reachable(&net, &costs, origin, radius);
            assert_eq!(engine, reference, "origin {} radius {radius}", net.link(origin).id);
        }
    }
}
