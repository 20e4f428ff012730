//! Exhaustive search oracle: enumerates state-simple paths over directed
//! links by depth-first search with dominance pruning, entirely apart from
//! the production Dijkstra (no heap, no settle order, adjacency rebuilt
//! from the network directly). Tie rules match the production contract:
//! cost, then link count, then lexicographic id sequence (indices follow id
//! order), then direction sequence.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use pednet::geom::turn_angle_3d;
use pednet::metric::{CostTable, Metric, Radius};
use pednet::network::{LinkIdx, Network};
use pednet::routing::cmp_cost;

/// One best center-to-center path.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub cost: f64,
    /// Links in travel order, origin and destination included.
    pub links: Vec<LinkIdx>,
    /// Direction per step: false forward, true backward.
    pub dirs: Vec<bool>,
}

impl OraclePath {
    pub fn hops(&self) -> u32 {
        self.links.len() as u32
    }
}

/// All best center-to-center paths from one origin under one metric.
#[derive(Debug, Clone)]
pub struct OracleTree {
    pub origin: LinkIdx,
    pub dests: Vec<Option<OraclePath>>,
}

#[derive(Clone)]
struct Partial {
    label: f64,
    entry: f64,
    links: Vec<LinkIdx>,
    dirs: Vec<bool>,
}

fn cmp_candidate(
    cost_a: f64,
    links_a: &[LinkIdx],
    dirs_a: &[bool],
    cost_b: f64,
    links_b: &[LinkIdx],
    dirs_b: &[bool],
) -> Ordering {
    // Same tie tolerance as the engine; fixtures keep genuine tie groups
    // within it and distinct costs far outside it.
    cmp_cost(cost_a, cost_b)
        .then_with(|| links_a.len().cmp(&links_b.len()))
        .then_with(|| links_a.cmp(links_b))
        .then_with(|| dirs_a.cmp(dirs_b))
}

struct Enumerator<'a> {
    net: &'a Network,
    costs: &'a CostTable,
    metric: Metric,
    /// Best full-traversal label per state (cost, links, dirs).
    best_label: Vec<Option<(f64, Vec<LinkIdx>, Vec<bool>)>>,
    /// Best center arrival per destination link.
    best_center: Vec<Option<OraclePath>>,
    on_path: Vec<bool>,
    origin: LinkIdx,
}

impl<'a> Enumerator<'a> {
    fn head_node(&self, link: LinkIdx, backward: bool) -> u32 {
        let l = self.net.link(link);
        if backward {
            l.start_node
        } else {
            l.end_node
        }
    }

    fn terminal_direction(&self, link: LinkIdx, backward: bool) -> pednet::geom::Vec3 {
        let g = &self.net.link(link).geometry;
        if backward {
            g.initial_direction().scale(-1.0)
        } else {
            g.terminal_direction()
        }
    }

    fn initial_direction(&self, link: LinkIdx, backward: bool) -> pednet::geom::Vec3 {
        let g = &self.net.link(link).geometry;
        if backward {
            g.terminal_direction().scale(-1.0)
        } else {
            g.initial_direction()
        }
    }

    fn full_cost(&self, link: LinkIdx) -> f64 {
        self.metric.link_cost(self.costs.get(link))
    }

    fn half_cost_toward_start(&self, link: LinkIdx) -> f64 {
        self.metric.half_cost(&self.costs.get(link).to_start)
    }

    fn half_cost_toward_end(&self, link: LinkIdx) -> f64 {
        self.metric.half_cost(&self.costs.get(link).to_end)
    }

    fn exit_half(&self, link: LinkIdx, backward: bool) -> f64 {
        if backward {
            self.half_cost_toward_start(link)
        } else {
            self.half_cost_toward_end(link)
        }
    }

    fn entry_half(&self, link: LinkIdx, backward: bool) -> f64 {
        if backward {
            self.half_cost_toward_end(link)
        } else {
            self.half_cost_toward_start(link)
        }
    }

    fn state(link: LinkIdx, backward: bool) -> usize {
        (link as usize) << 1 | backward as usize
    }

    fn explore(&mut self, link: LinkIdx, backward: bool, partial: Partial) {
        let state = Self::state(link, backward);

        // Dominance: an extension of a worse-or-equal arrival can never beat
        // the extensions of the recorded best (prefix order survives
        // extension), and the recorded best path is itself fully explored.
        if let Some((cost, links, dirs)) = &self.best_label[state] {
            if cmp_candidate(partial.label, &partial.links, &partial.dirs, *cost, links, dirs)
                != Ordering::Less
            {
                return;
            }
        }
        self.best_label[state] = Some((partial.label, partial.links.clone(), partial.dirs.clone()));

        // Center arrival at this link, unless it is the origin itself or a
        // self-loop (those are not routing destinations).
        if link != self.origin && !self.net.link(link).is_self_loop() {
            let center_cost = partial.entry + self.entry_half(link, backward);
            let candidate = OraclePath {
                cost: center_cost,
                links: partial.links.clone(),
                dirs: partial.dirs.clone(),
            };
            let better = match &self.best_center[link as usize] {
                None => true,
                Some(best) => {
                    cmp_candidate(
                        candidate.cost,
                        &candidate.links,
                        &candidate.dirs,
                        best.cost,
                        &best.links,
                        &best.dirs,
                    ) == Ordering::Less
                }
            };
            if better {
                self.best_center[link as usize] = Some(candidate);
            }
        }

        let node = self.head_node(link, backward);
        let degree = self.net.node(node).degree;
        let incident: Vec<LinkIdx> = self.net.node(node).incident_links.iter().copied().collect();
        for next in incident {
            for next_backward in [false, true] {
                // The next state must start at this node.
                let tail = if next_backward {
                    self.net.link(next).end_node
                } else {
                    self.net.link(next).start_node
                };
                if tail != node {
                    continue;
                }
                let turn = if next == link {
                    // Same link again: only the immediate U-turn at a dead
                    // end, costed as a half rotation.
                    if next_backward != backward && degree == 1 {
                        180.0
                    } else {
                        continue;
                    }
                } else {
                    turn_angle_3d(
                        &self.terminal_direction(link, backward),
                        &self.initial_direction(next, next_backward),
                    )
                    .unwrap_or(0.0)
                };
                let next_state = Self::state(next, next_backward);
                if self.on_path[next_state] {
                    continue;
                }
                let entry = partial.label + self.metric.node_cost(turn);
                let label = entry + self.full_cost(next);
                let mut links = partial.links.clone();
                links.push(next);
                let mut dirs = partial.dirs.clone();
                dirs.push(next_backward);
                self.on_path[next_state] = true;
                self.explore(
                    next,
                    next_backward,
                    Partial {
                        label,
                        entry,
                        links,
                        dirs,
                    },
                );
                self.on_path[next_state] = false;
            }
        }
    }
}

/// Enumerates every state-simple path from `origin` and keeps the best
/// center-to-center arrival per destination.
pub fn oracle_tree(net: &Network, costs: &CostTable, metric: Metric, origin: LinkIdx) -> OracleTree {
    let n = net.links().len();
    let mut enumerator = Enumerator {
        net,
        costs,
        metric,
        best_label: vec![None; 2 * n],
        best_center: vec![None; n],
        on_path: vec![false; 2 * n],
        origin,
    };
    if !net.link(origin).is_self_loop() {
        for backward in [false, true] {
            let state = Enumerator::state(origin, backward);
            enumerator.on_path[state] = true;
            enumerator.explore(
                origin,
                backward,
                Partial {
                    label: enumerator.exit_half(origin, backward),
                    entry: f64::INFINITY,
                    links: vec![origin],
                    dirs: vec![backward],
                },
            );
            enumerator.on_path[state] = false;
        }
    }
    OracleTree {
        origin,
        dests: enumerator.best_center,
    }
}

/// Center-to-center Euclidean network distances from one origin.
pub fn oracle_euclid(net: &Network, costs: &CostTable, origin: LinkIdx) -> Vec<f64> {
    let tree = oracle_tree(net, costs, Metric::Euclidean, origin);
    let mut out = vec![f64::INFINITY; net.links().len()];
    out[origin as usize] = 0.0;
    for (i, d) in tree.dests.iter().enumerate() {
        if let Some(p) = d {
            out[i] = p.cost;
        }
    }
    out
}

/// Reachable link ids under the Euclidean radius rule.
pub fn oracle_reachable(
    net: &Network,
    costs: &CostTable,
    origin: LinkIdx,
    radius: Radius,
) -> BTreeSet<String> {
    let euclid = oracle_euclid(net, costs, origin);
    let mut out = BTreeSet::new();
    out.insert(net.link(origin).id.clone());
    for (i, d) in euclid.iter().enumerate() {
        if i != origin as usize && !net.link(i as LinkIdx).is_self_loop() && radius.contains(*d) {
            out.insert(net.link(i as LinkIdx).id.clone());
        }
    }
    out
}

/// Closeness and betweenness recomputed from oracle paths under the spec's
/// conventions: means over the reachable set, each unordered pair routed
/// once from its lexicographically smaller link, 1 per interior occurrence
/// and 0.5 per endpoint, weighted by the product of link weights.
pub struct OracleCentrality {
    pub reach_count: Vec<u32>,
    pub reach_weight: Vec<f64>,
    pub closeness_total: Vec<f64>,
    pub closeness_mean: Vec<Option<f64>>,
    pub betweenness: Vec<f64>,
}

pub fn oracle_centrality(
    net: &Network,
    costs: &CostTable,
    metric: Metric,
    radius: Radius,
) -> OracleCentrality {
    let n = net.links().len();
    let mut reach_count = vec![1u32; n];
    let mut reach_weight: Vec<f64> = net.links().iter().map(|l| l.weight).collect();
    let mut closeness_total = vec![0.0f64; n];
    let mut betweenness = vec![0.0f64; n];

    for origin in 0..n as LinkIdx {
        if net.link(origin).is_self_loop() {
            continue;
        }
        let euclid = oracle_euclid(net, costs, origin);
        let tree = oracle_tree(net, costs, metric, origin);
        for dest in 0..n as LinkIdx {
            if dest == origin
                || net.link(dest).is_self_loop()
                || !radius.contains(euclid[dest as usize])
            {
                continue;
            }
            let path = match &tree.dests[dest as usize] {
                Some(p) => p,
                None => continue,
            };
            reach_count[origin as usize] += 1;
            reach_weight[origin as usize] += net.link(dest).weight;
            closeness_total[origin as usize] += path.cost;

            if dest > origin {
                let w = net.link(origin).weight * net.link(dest).weight;
                for &link in &path.links {
                    betweenness[link as usize] += w;
                }
                betweenness[origin as usize] -= 0.5 * w;
                betweenness[dest as usize] -= 0.5 * w;
            }
        }
    }

    let closeness_mean = (0..n)
        .map(|i| {
            if reach_count[i] > 1 {
                Some(closeness_total[i] / (reach_count[i] as f64 - 1.0))
            } else {
                None
            }
        })
        .collect();
    OracleCentrality {
        reach_count,
        reach_weight,
        closeness_total,
        closeness_mean,
        betweenness,
    }
}
