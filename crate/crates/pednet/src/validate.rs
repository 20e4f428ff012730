//! Report-only network diagnostics: components, dangling links, duplicate
//! geometries, suspicious vertical jumps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::Vec3;
use crate::network::Network;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationConfig {
    /// |dz| above this, with near-zero horizontal step, is flagged.
    pub vertical_jump_m: f64,
    /// Links carrying any of these tags never get a vertical-jump note.
    pub vertical_jump_exempt_tags: BTreeSet<String>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            vertical_jump_m: 3.0,
            vertical_jump_exempt_tags: ["lift", "elevator"]
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub link_count: usize,
    pub node_count: usize,
    pub component_count: usize,
    /// Component sizes in links, largest first.
    pub component_sizes: Vec<usize>,
    /// Links with an endpoint at a degree-1 node.
    pub dangling_links: Vec<String>,
    /// Pairs of links with identical vertex chains (forward or reversed).
    pub duplicate_geometries: Vec<(String, String)>,
    /// Links with a near-vertical step larger than the configured jump.
    pub vertical_jumps: Vec<String>,
    /// Nodes whose endpoint cluster spread exceeds the snap tolerance
    /// (possible over-merging through chained endpoints).
    pub oversized_clusters: Vec<u32>,
}

impl ValidationReport {
    pub fn has_warnings(&self) -> bool {
        self.component_count > 1
            || !self.duplicate_geometries.is_empty()
            || !self.vertical_jumps.is_empty()
            || !self.oversized_clusters.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "network: {} links, {} nodes, {} component(s)",
            self.link_count, self.node_count, self.component_count
        )?;
        if self.component_count > 1 {
            writeln!(f, "  component sizes: {:?}", self.component_sizes)?;
        }
        if !self.dangling_links.is_empty() {
            writeln!(f, "  dangling links: {}", preview(&self.dangling_links))?;
        }
        for (a, b) in &self.duplicate_geometries {
            writeln!(f, "  duplicate geometry: {a} / {b}")?;
        }
        if !self.vertical_jumps.is_empty() {
            writeln!(f, "  vertical jumps: {}", preview(&self.vertical_jumps))?;
        }
        if !self.oversized_clusters.is_empty() {
            writeln!(
                f,
                "  snap clusters wider than tolerance at nodes: {:?}",
                self.oversized_clusters
            )?;
        }
        Ok(())
    }
}

fn preview(items: &[String]) -> String {
    const MAX: usize = 8;
    if items.len() <= MAX {
        format!("{} ({})", items.join(", "), items.len())
    } else {
        format!("{}, ... ({})", items[..MAX].join(", "), items.len())
    }
}

/// Inspects a built network. Never fails; everything is reported.
pub fn validate_network(net: &Network, config: &ValidationConfig) -> ValidationReport {
    let components = net.components();
    let component_sizes: Vec<usize> = components.iter().map(|c| c.len()).collect();

    let mut dangling_links = Vec::new();
    for link in net.links() {
        if net.node(link.start_node).degree == 1 || net.node(link.end_node).degree == 1 {
            dangling_links.push(link.id.clone());
        }
    }

    // Canonical orientation (lexicographically smaller end first) catches
    // duplicates digitized in either direction.
    let mut canon: Vec<(Vec<[u64; 3]>, &str)> = net
        .links()
        .iter()
        .map(|l| (canonical_bits(l.geometry.vertices()), l.id.as_str()))
        .collect();
    canon.sort();
    let mut duplicate_geometries = Vec::new();
    for pair in canon.windows(2) {
        if pair[0].0 == pair[1].0 {
            duplicate_geometries.push((pair[0].1.to_string(), pair[1].1.to_string()));
        }
    }

    let mut vertical_jumps = Vec::new();
    for link in net.links() {
        if link
            .tags
            .intersection(&config.vertical_jump_exempt_tags)
            .next()
            .is_some()
        {
            continue;
        }
        let horizontal_floor = net.snap_tolerance_m();
        let jump = link.geometry.vertices().windows(2).any(|w| {
            let d = w[1].sub(&w[0]);
            d.z.abs() > config.vertical_jump_m && d.horizontal_norm() <= horizontal_floor
        });
        if jump {
            vertical_jumps.push(link.id.clone());
        }
    }

    let oversized_clusters = net
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.spread > net.snap_tolerance_m())
        .map(|(i, _)| i as u32)
        .collect();

    ValidationReport {
        link_count: net.links().len(),
        node_count: net.nodes().len(),
        component_count: components.len(),
        component_sizes,
        dangling_links,
        duplicate_geometries,
        vertical_jumps,
        oversized_clusters,
    }
}

fn canonical_bits(vertices: &[Vec3]) -> Vec<[u64; 3]> {
    let fwd: Vec<[u64; 3]> = vertices
        .iter()
        .map(|v| [v.x.to_bits(), v.y.to_bits(), v.z.to_bits()])
        .collect();
    let mut rev = fwd.clone();
    rev.reverse();
    if rev < fwd {
        rev
    } else {
        fwd
    }
}
