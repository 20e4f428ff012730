//! Shared fixture networks.

use pednet::geom::{Polyline3, Vec3};
use pednet::network::{LinkRecord, Network};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn polyline(points: &[(f64, f64, f64)]) -> Polyline3 {
    let v = points.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect();
    Polyline3::new(v, 0.0).unwrap()
}

/// Straight chain of `n` collinear links of length `len` along x.
pub fn chain(n: usize, len: f64) -> Network {
    let records = (0..n)
        .map(|i| {
            LinkRecord::new(
                format!("L{i:03}"),
                polyline(&[
                    (i as f64 * len, 0.0, 0.0),
                    ((i + 1) as f64 * len, 0.0, 0.0),
                ]),
            )
        })
        .collect();
    Network::build(records, 0.001).unwrap()
}

/// Flat grid with `nx` by `ny` nodes at `spacing` meters, all at height `z`.
/// Ids carry the prefix so two floors can coexist.
pub fn grid_records(nx: usize, ny: usize, spacing: f64, z: f64, prefix: &str) -> Vec<LinkRecord> {
    let mut records = Vec::new();
    let at = |i: usize, j: usize| (i as f64 * spacing, j as f64 * spacing, z);
    for j in 0..ny {
        for i in 0..nx - 1 {
            records.push(LinkRecord::new(
                format!("{prefix}h{i}_{j}"),
                polyline(&[at(i, j), at(i + 1, j)]),
            ));
        }
    }
    for j in 0..ny - 1 {
        for i in 0..nx {
            records.push(LinkRecord::new(
                format!("{prefix}v{i}_{j}"),
                polyline(&[at(i, j), at(i, j + 1)]),
            ));
        }
    }
    records
}

pub fn flat_grid(nx: usize, ny: usize, spacing: f64) -> Network {
    Network::build(grid_records(nx, ny, spacing, 0.0, "g"), 0.01).unwrap()
}

/// Two-floor fixture: a flat 3x3 grid (10 m spacing) per floor at z = 0 and
/// z = 5, one straight stair with two 45 degree transitions running along
/// the y = 10 corridor from floor-0 node (0,10,0) to floor-1 node
/// (20,10,5), and one vertical lift at (20,10) with angular override 0.
/// The stair passes over the floor-0 corridor without touching it.
pub fn two_floor_records() -> Vec<LinkRecord> {
    let mut records = grid_records(3, 3, 10.0, 0.0, "f0_");
    records.extend(grid_records(3, 3, 10.0, 5.0, "f1_"));
    for r in &mut records {
        let tag = if r.id.starts_with("f0_") { "ground" } else { "upper" };
        r.tags.insert(tag.to_string());
    }
    records.push(
        LinkRecord::new(
            "stair",
            polyline(&[
                (0.0, 10.0, 0.0),
                (7.5, 10.0, 0.0),
                (12.5, 10.0, 5.0),
                (20.0, 10.0, 5.0),
            ]),
        )
        .with_tags(["stair"]),
    );
    records.push(
        LinkRecord::new("lift", polyline(&[(20.0, 10.0, 0.0), (20.0, 10.0, 5.0)]))
            .with_tags(["lift"])
            .with_angular_override(0.0),
    );
    records
}

pub fn two_floor() -> Network {
    Network::build(two_floor_records(), 0.01).unwrap()
}

/// Route-choice fixture: origin and destination arms on one axis, joined by
/// a short rectangular detour (10 m, four right angles) and a long smooth
/// bow (about 14 m) whose per-vertex turns sit below a 0.5 degree noise
/// floor, so the bow is angularly free while the detour is short.
///
/// ```text
///            _______bow________
///           /                  \
///   O ====N1 ==== (detour) ==== N2 ==== D
/// ```
pub fn route_choice() -> Network {
    let mut records = vec![
        LinkRecord::new("o_arm", polyline(&[(-5.0, 0.0, 0.0), (0.0, 0.0, 0.0)])),
        LinkRecord::new("d_arm", polyline(&[(8.0, 0.0, 0.0), (13.0, 0.0, 0.0)])),
        LinkRecord::new(
            "detour",
            polyline(&[
                (0.0, 0.0, 0.0),
                (1.0, 0.0, 0.0),
                (1.0, 1.0, 0.0),
                (7.0, 1.0, 0.0),
                (7.0, 0.0, 0.0),
                (8.0, 0.0, 0.0),
            ]),
        ),
    ];
    // Smooth S-bow: per-segment headings a*sin(2*pi*k/(n-1)) keep the first
    // and last segments exactly on-axis and close the y displacement.
    let amplitude = 1.4f64;
    let segments = 1010usize;
    let headings: Vec<f64> = (0..segments)
        .map(|k| amplitude * (2.0 * std::f64::consts::PI * k as f64 / (segments - 1) as f64).sin())
        .collect();
    let sum_cos: f64 = headings.iter().map(|h| h.cos()).sum();
    let step = 8.0 / sum_cos;
    let mut vertices = vec![Vec3::new(0.0, 0.0, 0.0)];
    let mut p = Vec3::new(0.0, 0.0, 0.0);
    for h in &headings {
        p = p.add(&Vec3::new(step * h.cos(), step * h.sin(), 0.0));
        vertices.push(p);
    }
    let bow = Polyline3::new(vertices, 0.0).unwrap();
    records.push(LinkRecord::new("bow", bow));
    Network::build(records, 0.005).unwrap()
}

/// Synthetic multi-level performance fixture: two jittered grid floors plus
/// slanted connectors, `2 * 2 * n * (n - 1) + connectors` links in total.
/// Jitter keeps link costs irregular so tie-breaking stays off hot paths.
pub fn big_multilevel(n: usize, connectors: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spacing = 30.0;
    let mut floors: Vec<Vec<Vec<Vec3>>> = Vec::new();
    for floor in 0..2usize {
        let z = floor as f64 * 5.0;
        let mut nodes = vec![vec![Vec3::new(0.0, 0.0, 0.0); n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                nodes[i][j] = Vec3::new(
                    i as f64 * spacing + rng.random_range(-0.8..0.8),
                    j as f64 * spacing + rng.random_range(-0.8..0.8),
                    z + rng.random_range(-0.2..0.2),
                );
            }
        }
        floors.push(nodes);
    }
    let mut records = Vec::new();
    for (f, nodes) in floors.iter().enumerate() {
        for j in 0..n {
            for i in 0..n - 1 {
                records.push(LinkRecord::new(
                    format!("f{f}h{i:03}_{j:03}"),
                    Polyline3::new(vec![nodes[i][j], nodes[i + 1][j]], 0.0).unwrap(),
                ));
            }
        }
        for j in 0..n - 1 {
            for i in 0..n {
                records.push(LinkRecord::new(
                    format!("f{f}v{i:03}_{j:03}"),
                    Polyline3::new(vec![nodes[i][j], nodes[i][j + 1]], 0.0).unwrap(),
                ));
            }
        }
    }
    // Deterministic connector spread across the footprint.
    let mut positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    positions.shuffle(&mut rng);
    for (k, (i, j)) in positions.into_iter().take(connectors).enumerate() {
        records.push(
            LinkRecord::new(
                format!("stair{k:03}"),
                Polyline3::new(vec![floors[0][i][j], floors[1][i][j]], 0.0).unwrap(),
            )
            .with_tags(["stair"]),
        );
    }
    Network::build(records, 0.01).unwrap()
}

/// Random small network for oracle comparisons: 3D node cloud, straight or
/// gently bent links, random weights, occasional overrides and self-loops.
pub fn random_network(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(net) = try_random_network(&mut rng) {
            return net;
        }
    }
}

fn try_random_network(rng: &mut ChaCha8Rng) -> Option<Network> {
    let n_nodes = rng.random_range(3..=8usize);
    let mut nodes: Vec<Vec3> = Vec::new();
    let mut guard = 0;
    while nodes.len() < n_nodes {
        guard += 1;
        if guard > 1000 {
            return None;
        }
        let p = Vec3::new(
            rng.random_range(0.0..50.0),
            rng.random_range(0.0..50.0),
            rng.random_range(0.0..15.0),
        );
        if nodes.iter().all(|q| q.distance(&p) > 3.0) {
            nodes.push(p);
        }
    }

    let n_links = rng.random_range(4..=12usize);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n_nodes {
        for b in a + 1..n_nodes {
            pairs.push((a, b));
        }
    }
    pairs.shuffle(rng);

    let mut records = Vec::new();
    for k in 0..n_links {
        let id = format!("r{k:02}");
        if k < pairs.len() {
            let (a, b) = pairs[k];
            let pa = nodes[a];
            let pb = nodes[b];
            let mut vertices = vec![pa];
            // Sometimes bend the link through one or two interior vertices.
            let bends = rng.random_range(0..=2usize);
            for t in 0..bends {
                let f = (t + 1) as f64 / (bends + 1) as f64;
                let base = pa.add(&pb.sub(&pa).scale(f));
                vertices.push(Vec3::new(
                    base.x + rng.random_range(-2.0..2.0),
                    base.y + rng.random_range(-2.0..2.0),
                    base.z + rng.random_range(-1.0..1.0),
                ));
            }
            vertices.push(pb);
            let geometry = Polyline3::new(vertices, 0.05).ok()?;
            let mut record = LinkRecord::new(id, geometry)
                .with_weight((rng.random_range(0.5..2.0f64) * 8.0).round() / 8.0);
            if rng.random_bool(0.1) {
                record = record.with_angular_override(if rng.random_bool(0.5) {
                    0.0
                } else {
                    rng.random_range(0.0..45.0)
                });
            }
            records.push(record);
        } else {
            // More links than node pairs: hang a self-loop somewhere.
            let a = rng.random_range(0..n_nodes);
            let pa = nodes[a];
            let out = Vec3::new(
                pa.x + rng.random_range(3.0..6.0),
                pa.y + rng.random_range(3.0..6.0),
                pa.z,
            );
            let geometry = Polyline3::new(vec![pa, out, pa], 0.05).ok()?;
            records.push(LinkRecord::new(id, geometry));
        }
    }
    if records.len() < 2 {
        return None;
    }
    Network::build(records, 0.01).ok()
}
