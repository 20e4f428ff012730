//! Manual performance probe for the large multi-level fixture; the timed
//! acceptance check lives in the CLI crate. Run with --ignored --release.

use pednet::centrality::{analyze, AnalysisRequest};
use pednet::metric::{Metric, Radius};
use pednet_testkit::fixtures;

#[test]
#[ignore]
fn probe_big_multilevel() {
    let start = std::time::Instant::now();
    let net = fixtures::big_multilevel(50, 200, 7);
    eprintln!("build: {} links in {:?}", net.links().len(), start.elapsed());

    for (label, metric, measures) in [
        ("euclid both", Metric::Euclidean, (true, true)),
        ("euclid closeness-only", Metric::Euclidean, (true, false)),
        ("hybrid both", Metric::Hybrid { a: 0.5 }, (true, true)),
    ] {
        let mut req = AnalysisRequest::new(vec![metric], vec![Radius::Finite(500.0)]);
        req.threads = 2;
        req.measures = pednet::Measures {
            closeness: measures.0,
            betweenness: measures.1,
        };
        let start = std::time::Instant::now();
        let tables = analyze(&net, &req).unwrap();
        eprintln!(
            "{label}: {:?} (rows {})",
            start.elapsed(),
            tables[0].rows.len()
        );
    }
}
