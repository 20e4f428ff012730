//! The 3D link-node network: links are the units of analysis, nodes are
//! junctions created by snapping link endpoints together.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeometryError, Polyline3, Vec3};

pub const DEFAULT_SNAP_TOLERANCE_M: f64 = 0.05;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("duplicate link id `{0}`")]
    DuplicateLinkId(String),
    #[error("link `{id}`: invalid geometry: {source}")]
    BadGeometry {
        id: String,
        source: GeometryError,
    },
    #[error("snap tolerance must be > 0, got {0}")]
    BadTolerance(f64),
    #[error("link `{id}`: angular override must be >= 0, got {value}")]
    BadAngularOverride { id: String, value: f64 },
    #[error("link `{id}`: weight must be >= 0, got {value}")]
    BadWeight { id: String, value: f64 },
    #[error("filter matched no links")]
    EmptyFilterResult,
    #[error("unknown link id `{0}`")]
    UnknownLink(String),
}

/// Raw link description before it is bound into a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub id: String,
    pub geometry: Polyline3,
    #[serde(default)]
    pub tags: BTreeSet<String>,
    /// Fixed angular cost in degrees replacing the geometric cumulative
    /// angle, e.g. 0 for a lift cabin that imposes no body rotation.
    #[serde(default)]
    pub angular_override_deg: Option<f64>,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

impl LinkRecord {
    pub fn new(id: impl Into<String>, geometry: Polyline3) -> Self {
        LinkRecord {
            id: id.into(),
            geometry,
            tags: BTreeSet::new(),
            angular_override_deg: None,
            weight: 1.0,
        }
    }

    pub fn with_tags<I: IntoIterator<Item = S>, S: Into<String>>(mut self, tags: I) -> Self {
        self.tags = tags.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_angular_override(mut self, deg: f64) -> Self {
        self.angular_override_deg = Some(deg);
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }
}

/// Dense index of a link within its network; rows are ordered by link id.
pub type LinkIdx = u32;
/// Dense index of a node within its network.
pub type NodeIdx = u32;

/// A link bound into a network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub geometry: Polyline3,
    pub tags: BTreeSet<String>,
    pub angular_override_deg: Option<f64>,
    pub weight: f64,
    /// Node at the first vertex.
    pub start_node: NodeIdx,
    /// Node at the last vertex.
    pub end_node: NodeIdx,
    /// Point at half arc length; the center used by geodesic accounting.
    pub center: Vec3,
}

impl Link {
    pub fn is_self_loop(&self) -> bool {
        self.start_node == self.end_node
    }
}

/// A junction: a cluster of link endpoints within snap tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub position: Vec3,
    /// Distinct links with an endpoint here.
    pub incident_links: BTreeSet<LinkIdx>,
    /// Endpoint incidences (a self-loop counts twice); the degree used by
    /// the routing U-turn rule.
    pub degree: u32,
    /// Largest distance from `position` to a member endpoint.
    pub spread: f64,
}

/// Immutable link-node network; safe to share across analysis workers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Network {
    links: Vec<Link>,
    nodes: Vec<Node>,
    snap_tolerance_m: f64,
    #[serde(skip)]
    id_index: HashMap<String, LinkIdx>,
}

impl Network {
    /// Builds a network from raw link records.
    ///
    /// Endpoints are clustered by union-find over pairs closer than
    /// `snap_tolerance_m`; no connectivity is ever inferred from geometric
    /// crossings, so grade-separated crossings stay disconnected. Links are
    /// reordered by id so link indices follow id order.
    pub fn build(
        mut records: Vec<LinkRecord>,
        snap_tolerance_m: f64,
    ) -> Result<Network, NetworkError> {
        if !(snap_tolerance_m > 0.0) {
            return Err(NetworkError::BadTolerance(snap_tolerance_m));
        }
        records.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in records.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(NetworkError::DuplicateLinkId(pair[0].id.clone()));
            }
        }
        for rec in &records {
            // Re-validate against the build tolerance; records may have been
            // constructed with a smaller minimum separation.
            Polyline3::new(rec.geometry.vertices().to_vec(), snap_tolerance_m).map_err(|e| {
                NetworkError::BadGeometry {
                    id: rec.id.clone(),
                    source: e,
                }
            })?;
            if let Some(a) = rec.angular_override_deg {
                if !(a >= 0.0) {
                    return Err(NetworkError::BadAngularOverride {
                        id: rec.id.clone(),
                        value: a,
                    });
                }
            }
            if !(rec.weight >= 0.0) {
                return Err(NetworkError::BadWeight {
                    id: rec.id.clone(),
                    value: rec.weight,
                });
            }
        }

        // Endpoint list: 2 per link, in link order.
        let endpoints: Vec<Vec3> = records
            .iter()
            .flat_map(|r| [*r.geometry.first(), *r.geometry.last()])
            .collect();
        let cluster_of = cluster_endpoints(&endpoints, snap_tolerance_m);

        // Canonical node order: sort clusters by their minimal member
        // position so the node partition is independent of input order.
        let n_clusters = 1 + cluster_of.iter().copied().max().unwrap_or(0);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
        for (ep, &c) in cluster_of.iter().enumerate() {
            members[c].push(ep);
        }
        let mut order: Vec<usize> = (0..n_clusters).collect();
        let min_pos = |c: usize| -> Vec3 {
            let mut best = endpoints[members[c][0]];
            for &ep in &members[c][1..] {
                if cmp_vec3(&endpoints[ep], &best) == std::cmp::Ordering::Less {
                    best = endpoints[ep];
                }
            }
            best
        };
        order.sort_by(|&a, &b| cmp_vec3(&min_pos(a), &min_pos(b)));
        let mut node_of_cluster = vec![0 as NodeIdx; n_clusters];
        for (node_idx, &c) in order.iter().enumerate() {
            node_of_cluster[c] = node_idx as NodeIdx;
        }

        let mut nodes: Vec<Node> = order
            .iter()
            .map(|&c| {
                // Deterministic centroid: sum members in canonical order.
                let mut pts: Vec<Vec3> = members[c].iter().map(|&ep| endpoints[ep]).collect();
                pts.sort_by(cmp_vec3);
                let mut sum = Vec3::new(0.0, 0.0, 0.0);
                for p in &pts {
                    sum = sum.add(p);
                }
                let position = sum.scale(1.0 / pts.len() as f64);
                let spread = pts
                    .iter()
                    .map(|p| p.distance(&position))
                    .fold(0.0, f64::max);
                Node {
                    position,
                    incident_links: BTreeSet::new(),
                    degree: 0,
                    spread,
                }
            })
            .collect();

        let links: Vec<Link> = records
            .into_iter()
            .enumerate()
            .map(|(i, rec)| {
                let start_node = node_of_cluster[cluster_of[2 * i]];
                let end_node = node_of_cluster[cluster_of[2 * i + 1]];
                let center = rec.geometry.midpoint();
                for node in [start_node, end_node] {
                    let n = &mut nodes[node as usize];
                    n.incident_links.insert(i as LinkIdx);
                    n.degree += 1;
                }
                Link {
                    id: rec.id,
                    geometry: rec.geometry,
                    tags: rec.tags,
                    angular_override_deg: rec.angular_override_deg,
                    weight: rec.weight,
                    start_node,
                    end_node,
                    center,
                }
            })
            .collect();

        let id_index = links
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), i as LinkIdx))
            .collect();

        Ok(Network {
            links,
            nodes,
            snap_tolerance_m,
            id_index,
        })
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn link(&self, idx: LinkIdx) -> &Link {
        &self.links[idx as usize]
    }

    pub fn node(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn snap_tolerance_m(&self) -> f64 {
        self.snap_tolerance_m
    }

    pub fn link_index(&self, id: &str) -> Option<LinkIdx> {
        self.id_index.get(id).copied()
    }

    pub fn require_link(&self, id: &str) -> Result<LinkIdx, NetworkError> {
        self.link_index(id)
            .ok_or_else(|| NetworkError::UnknownLink(id.to_string()))
    }

    /// Number of distinct other links sharing at least one node with `idx`.
    pub fn connectivity(&self, idx: LinkIdx) -> u32 {
        let link = self.link(idx);
        let mut neighbors: BTreeSet<LinkIdx> = BTreeSet::new();
        for node in [link.start_node, link.end_node] {
            neighbors.extend(self.node(node).incident_links.iter().copied());
        }
        neighbors.remove(&idx);
        neighbors.len() as u32
    }

    /// New network with only the links matching `filter`; ids are preserved
    /// and nodes are rebuilt at the same snap tolerance.
    pub fn filter(&self, filter: &TagFilter) -> Result<Network, NetworkError> {
        let records: Vec<LinkRecord> = self
            .links
            .iter()
            .filter(|l| filter.matches(&l.tags))
            .map(|l| LinkRecord {
                id: l.id.clone(),
                geometry: l.geometry.clone(),
                tags: l.tags.clone(),
                angular_override_deg: l.angular_override_deg,
                weight: l.weight,
            })
            .collect();
        if records.is_empty() {
            return Err(NetworkError::EmptyFilterResult);
        }
        Network::build(records, self.snap_tolerance_m)
    }

    /// Raw records equivalent to this network's links.
    pub fn to_records(&self) -> Vec<LinkRecord> {
        self.links
            .iter()
            .map(|l| LinkRecord {
                id: l.id.clone(),
                geometry: l.geometry.clone(),
                tags: l.tags.clone(),
                angular_override_deg: l.angular_override_deg,
                weight: l.weight,
            })
            .collect()
    }

    /// Connected components over links; each component lists link indices.
    pub fn components(&self) -> Vec<Vec<LinkIdx>> {
        let n = self.links.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start as LinkIdx];
            seen[start] = true;
            while let Some(l) = stack.pop() {
                comp.push(l);
                let link = self.link(l);
                for node in [link.start_node, link.end_node] {
                    for &other in &self.node(node).incident_links {
                        if !seen[other as usize] {
                            seen[other as usize] = true;
                            stack.push(other);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        // Largest first, then by first link for a stable report order.
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        out
    }
}

fn cmp_vec3(a: &Vec3, b: &Vec3) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x)
        .then(a.y.total_cmp(&b.y))
        .then(a.z.total_cmp(&b.z))
}

/// Union-find clustering of endpoints: any two endpoints within tolerance
/// share a cluster (transitively). Returns a cluster id per endpoint,
/// densely numbered in first-appearance order.
fn cluster_endpoints(endpoints: &[Vec3], tolerance: f64) -> Vec<usize> {
    let mut uf = UnionFind::new(endpoints.len());
    // Spatial hash with cell size = tolerance: all pairs within tolerance
    // live in the same or adjacent cells.
    let key = |p: &Vec3| -> (i64, i64, i64) {
        (
            (p.x / tolerance).floor() as i64,
            (p.y / tolerance).floor() as i64,
            (p.z / tolerance).floor() as i64,
        )
    };
    let mut grid: BTreeMap<(i64, i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, p) in endpoints.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }
    for (i, p) in endpoints.iter().enumerate() {
        let (kx, ky, kz) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(cell) = grid.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &j in cell {
                            if j > i && endpoints[i].distance(&endpoints[j]) <= tolerance {
                                uf.union(i, j);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut dense: HashMap<usize, usize> = HashMap::new();
    endpoints
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let root = uf.find(i);
            let next = dense.len();
            *dense.entry(root).or_insert(next)
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Smaller root wins to keep the partition order-independent.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Include/exclude sets over link tags. A link matches when it carries at
/// least one include tag (or the include set is empty) and none of the
/// exclude tags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TagFilter {
    #[serde(default)]
    pub include: BTreeSet<String>,
    #[serde(default)]
    pub exclude: BTreeSet<String>,
}

impl TagFilter {
    pub fn exclude<I: IntoIterator<Item = S>, S: Into<String>>(tags: I) -> Self {
        TagFilter {
            include: BTreeSet::new(),
            exclude: tags.into_iter().map(Into::into).collect(),
        }
    }

    pub fn include<I: IntoIterator<Item = S>, S: Into<String>>(tags: I) -> Self {
        TagFilter {
            include: tags.into_iter().map(Into::into).collect(),
            exclude: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.include.is_empty() && self.exclude.is_empty()
    }

    pub fn matches(&self, tags: &BTreeSet<String>) -> bool {
        if !self.include.is_empty() && self.include.intersection(tags).next().is_none() {
            return false;
        }
        self.exclude.intersection(tags).next().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(pts: &[(f64, f64, f64)]) -> Polyline3 {
        let v = pts.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect();
        Polyline3::new(v, 0.0).unwrap()
    }

    fn rec(id: &str, pts: &[(f64, f64, f64)]) -> LinkRecord {
        LinkRecord::new(id, pl(pts))
    }

    #[test]
    fn shared_endpoint_becomes_one_node() {
        let net = Network::build(
            vec![
                rec("a", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
                rec("b", &[(0.0, 0.0, 0.0), (0.0, 10.0, 0.0)]),
            ],
            0.01,
        )
        .unwrap();
        assert_eq!(net.nodes().len(), 3);
        let shared = net
            .nodes()
            .iter()
            .find(|n| n.incident_links.len() == 2)
            .expect("one shared node of degree 2");
        assert_eq!(shared.degree, 2);
    }

    #[test]
    fn midspan_crossing_stays_disconnected() {
        // Geometries cross at (5,5,0) but share no endpoints.
        let net = Network::build(
            vec![
                rec("a", &[(0.0, 0.0, 0.0), (10.0, 10.0, 0.0)]),
                rec("b", &[(0.0, 10.0, 0.0), (10.0, 0.0, 0.0)]),
            ],
            0.01,
        )
        .unwrap();
        assert_eq!(net.nodes().len(), 4);
        assert_eq!(net.connectivity(0), 0);
        assert_eq!(net.connectivity(1), 0);
    }

    #[test]
    fn endpoints_within_tolerance_merge() {
        let net = Network::build(
            vec![
                rec("a", &[(10.0, 0.0, 0.0), (0.0, 0.0, 0.0)]),
                rec("b", &[(0.005, 0.0, 0.0), (0.0, 10.0, 0.0)]),
            ],
            0.01,
        )
        .unwrap();
        assert_eq!(net.nodes().len(), 3);
        assert_eq!(net.connectivity(0), 1);
    }

    #[test]
    fn duplicate_id_rejected() {
        let err = Network::build(
            vec![
                rec("a", &[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]),
                rec("a", &[(2.0, 0.0, 0.0), (3.0, 0.0, 0.0)]),
            ],
            0.01,
        );
        assert!(matches!(err, Err(NetworkError::DuplicateLinkId(_))));
    }

    #[test]
    fn bad_tolerance_rejected() {
        let err = Network::build(vec![rec("a", &[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])], 0.0);
        assert!(matches!(err, Err(NetworkError::BadTolerance(_))));
    }

    #[test]
    fn geometry_finer_than_tolerance_rejected() {
        let err = Network::build(
            vec![rec("a", &[(0.0, 0.0, 0.0), (0.004, 0.0, 0.0), (1.0, 0.0, 0.0)])],
            0.01,
        );
        assert!(matches!(err, Err(NetworkError::BadGeometry { .. })));
    }

    #[test]
    fn rebuild_is_idempotent() {
        let records = vec![
            rec("a", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
            rec("b", &[(10.002, 0.0, 0.0), (20.0, 0.0, 0.0)]),
            rec("c", &[(20.0, 0.0, 0.0), (20.0, 10.0, 0.0)]),
        ];
        let net1 = Network::build(records, 0.01).unwrap();
        let net2 = Network::build(net1.to_records(), 0.01).unwrap();
        assert_eq!(net1.nodes().len(), net2.nodes().len());
        for (a, b) in net1.links().iter().zip(net2.links()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.start_node, b.start_node);
            assert_eq!(a.end_node, b.end_node);
        }
    }

    #[test]
    fn clustering_is_order_independent() {
        let records = vec![
            rec("a", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
            rec("b", &[(10.003, 0.0, 0.0), (20.0, 0.0, 0.0)]),
            rec("c", &[(9.997, 0.0, 0.0), (10.0, 10.0, 0.0)]),
            rec("d", &[(5.0, 5.0, 5.0), (6.0, 6.0, 6.0)]),
        ];
        let net1 = Network::build(records.clone(), 0.01).unwrap();
        let mut shuffled = records;
        shuffled.reverse();
        shuffled.swap(0, 2);
        let net2 = Network::build(shuffled, 0.01).unwrap();
        assert_eq!(net1.nodes().len(), net2.nodes().len());
        for (a, b) in net1.links().iter().zip(net2.links()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.start_node, b.start_node);
            assert_eq!(a.end_node, b.end_node);
        }
        for (na, nb) in net1.nodes().iter().zip(net2.nodes()) {
            assert_eq!(na.incident_links, nb.incident_links);
        }
    }

    #[test]
    fn incidences_equal_twice_link_count() {
        let net = Network::build(
            vec![
                rec("a", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
                rec("b", &[(10.0, 0.0, 0.0), (20.0, 0.0, 0.0)]),
                rec("loop", &[(20.0, 0.0, 0.0), (25.0, 5.0, 0.0), (20.0, 0.0, 0.0)]),
            ],
            0.01,
        );
        let net = net.unwrap();
        let incidences: u32 = net.nodes().iter().map(|n| n.degree).sum();
        assert_eq!(incidences, 2 * net.links().len() as u32);
        let loop_idx = net.link_index("loop").unwrap();
        assert!(net.link(loop_idx).is_self_loop());
    }

    #[test]
    fn filter_excludes_tagged_links() {
        let records = vec![
            rec("out1", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
            rec("in1", &[(10.0, 0.0, 0.0), (20.0, 0.0, 0.0)]).with_tags(["indoor"]),
        ];
        let net = Network::build(records, 0.01).unwrap();
        let outdoor = net.filter(&TagFilter::exclude(["indoor"])).unwrap();
        assert_eq!(outdoor.links().len(), 1);
        assert_eq!(outdoor.links()[0].id, "out1");
    }

    #[test]
    fn empty_filter_is_identity() {
        let records = vec![
            rec("a", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]),
            rec("b", &[(10.0, 0.0, 0.0), (20.0, 0.0, 0.0)]),
        ];
        let net = Network::build(records, 0.01).unwrap();
        let same = net.filter(&TagFilter::default()).unwrap();
        assert_eq!(same.links().len(), net.links().len());
        assert_eq!(same.nodes().len(), net.nodes().len());
    }

    #[test]
    fn filter_to_nothing_errors() {
        let records = vec![rec("a", &[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).with_tags(["indoor"])];
        let net = Network::build(records, 0.01).unwrap();
        assert!(matches!(
            net.filter(&TagFilter::exclude(["indoor"])),
            Err(NetworkError::EmptyFilterResult)
        ));
    }

    #[test]
    fn filter_partition_recovers_link_set() {
        let records = vec![
            rec("a", &[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).with_tags(["indoor"]),
            rec("b", &[(1.0, 0.0, 0.0), (2.0, 0.0, 0.0)]),
            rec("c", &[(2.0, 0.0, 0.0), (3.0, 0.0, 0.0)]).with_tags(["indoor", "skywalk"]),
        ];
        let net = Network::build(records, 0.01).unwrap();
        let with: BTreeSet<String> = net
            .filter(&TagFilter::include(["indoor"]))
            .unwrap()
            .links()
            .iter()
            .map(|l| l.id.clone())
            .collect();
        let without: BTreeSet<String> = net
            .filter(&TagFilter::exclude(["indoor"]))
            .unwrap()
            .links()
            .iter()
            .map(|l| l.id.clone())
            .collect();
        assert!(with.is_disjoint(&without));
        let all: BTreeSet<String> = net.links().iter().map(|l| l.id.clone()).collect();
        assert_eq!(with.union(&without).cloned().collect::<BTreeSet<_>>(), all);
    }

    #[test]
    fn connectivity_counts_distinct_links() {
        // hub touches 4 links at one end and 1 at the other
        let mut records = vec![rec("hub", &[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)])];
        for i in 0..4 {
            records.push(rec(
                &format!("w{i}"),
                &[(0.0, 0.0, 0.0), (-5.0, i as f64 + 1.0, 0.0)],
            ));
        }
        records.push(rec("e0", &[(10.0, 0.0, 0.0), (15.0, 0.0, 0.0)]));
        let net = Network::build(records, 0.01).unwrap();
        let hub = net.link_index("hub").unwrap();
        assert_eq!(net.connectivity(hub), 5);
        let isolated = Network::build(
            vec![rec("only", &[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])],
            0.01,
        )
        .unwrap();
        assert_eq!(net.connectivity(net.link_index("w0").unwrap()), 4);
        assert_eq!(isolated.connectivity(0), 0);
    }
}
