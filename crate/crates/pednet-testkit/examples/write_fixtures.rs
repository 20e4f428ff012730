//! Writes the demo fixture files used by the README walkthrough.

use pednet::io::network_to_geojson;
use pednet_testkit::fixtures;

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "data".to_string());
    std::fs::create_dir_all(&out).unwrap();

    let net = fixtures::two_floor();
    std::fs::write(format!("{out}/two_floor.geojson"), network_to_geojson(&net)).unwrap();

    // Synthetic observations loosely tracking the corridor structure.
    let mut obs = String::from("link_id,flow,period\n");
    for (i, link) in net.links().iter().enumerate() {
        let base = 40.0 + 17.0 * ((i as f64 * 0.7).sin().abs() + 0.2);
        obs.push_str(&format!("{},{:.1},am\n", link.id, base));
        obs.push_str(&format!("{},{:.1},pm\n", link.id, base * 1.25));
    }
    std::fs::write(format!("{out}/two_floor_obs.csv"), obs).unwrap();

    eprintln!("wrote fixtures to {out}/");
}
