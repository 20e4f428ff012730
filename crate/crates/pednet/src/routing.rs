//! Radius-conditioned geodesics over the directed-link (dual) graph.
//!
//! Traversal states are directed links. A geodesic between two links runs
//! center to center: the far half of the origin link, full intermediate
//! links plus junction turns, and the near half of the destination link.
//! Searches run from both origin directions at once, so the cheaper of the
//! two exits wins, and destinations are resolved over both entry directions.
//!
//! Reachability is a separate concern from path cost: a destination is in
//! radius iff its minimal Euclidean-metric center-to-center network distance
//! is within the radius, whatever the analysis metric. Ties are broken by
//! cost, then link count, then the lexicographically smallest id sequence
//! (link indices follow id order, so index sequences compare identically).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, BTreeSet};

use thiserror::Error;

use crate::geom::{turn_angle_3d, Vec3};
use crate::metric::{CostTable, Metric, Radius};
use crate::network::{LinkIdx, Network, NetworkError};

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("link `{0}` is a self-loop and cannot be a routing origin")]
    SelfLoopOrigin(String),
}

/// Directed link: link index shifted left once, low bit 1 for backward.
pub type State = u32;

pub const NO_STATE: State = u32::MAX;

/// Costs within this absolute tolerance count as tied, so float noise at
/// rotation scale cannot flip a route choice away from the hop and id rules.
pub const COST_TIE_EPS: f64 = 1e-9;

/// Cost comparison with the tie tolerance.
#[inline]
pub fn cmp_cost(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= COST_TIE_EPS {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

#[inline]
pub fn state_forward(link: LinkIdx) -> State {
    link << 1
}

#[inline]
pub fn state_backward(link: LinkIdx) -> State {
    (link << 1) | 1
}

#[inline]
pub fn state_link(state: State) -> LinkIdx {
    state >> 1
}

#[inline]
pub fn state_is_backward(state: State) -> bool {
    state & 1 == 1
}

#[inline]
pub fn state_reverse(state: State) -> State {
    state ^ 1
}

#[derive(Debug, Clone, Copy)]
struct Transition {
    to: State,
    turn_deg: f64,
}

/// Directed-link traversal graph with precomputed junction turns.
///
/// A transition u -> v exists when u's head node is v's tail node and v is
/// not u reversed, except at degree-1 nodes where the U-turn is allowed and
/// costed as a 180 degree turn.
#[derive(Debug, Clone)]
pub struct DualGraph {
    offsets: Vec<u32>,
    transitions: Vec<Transition>,
    state_count: usize,
}

impl DualGraph {
    pub fn build(net: &Network) -> DualGraph {
        let state_count = net.links().len() * 2;
        // Entry/exit directions per state, from the original geometry.
        let mut init_dir = vec![Vec3::new(0.0, 0.0, 0.0); state_count];
        let mut term_dir = vec![Vec3::new(0.0, 0.0, 0.0); state_count];
        let mut head_node = vec![0u32; state_count];
        for (i, link) in net.links().iter().enumerate() {
            let fwd = state_forward(i as LinkIdx) as usize;
            let bwd = state_backward(i as LinkIdx) as usize;
            let d0 = link.geometry.initial_direction();
            let d1 = link.geometry.terminal_direction();
            init_dir[fwd] = d0;
            term_dir[fwd] = d1;
            init_dir[bwd] = d1.scale(-1.0);
            term_dir[bwd] = d0.scale(-1.0);
            head_node[fwd] = link.end_node;
            head_node[bwd] = link.start_node;
        }

        // Outgoing states per node, ordered by state index.
        let mut outgoing: Vec<Vec<State>> = vec![Vec::new(); net.nodes().len()];
        for (i, link) in net.links().iter().enumerate() {
            outgoing[link.start_node as usize].push(state_forward(i as LinkIdx));
            outgoing[link.end_node as usize].push(state_backward(i as LinkIdx));
        }
        for list in &mut outgoing {
            list.sort_unstable();
        }

        let mut offsets = Vec::with_capacity(state_count + 1);
        let mut transitions = Vec::new();
        offsets.push(0u32);
        for u in 0..state_count as State {
            let node = head_node[u as usize];
            let degree = net.node(node).degree;
            for &v in &outgoing[node as usize] {
                let turn_deg = if state_link(v) == state_link(u) {
                    if v == state_reverse(u) && degree == 1 {
                        180.0
                    } else {
                        continue;
                    }
                } else {
                    // Both directions validated nonzero at build.
                    turn_angle_3d(&term_dir[u as usize], &init_dir[v as usize]).unwrap_or(0.0)
                };
                transitions.push(Transition { to: v, turn_deg });
            }
            offsets.push(transitions.len() as u32);
        }

        DualGraph {
            offsets,
            transitions,
            state_count,
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    fn out(&self, u: State) -> &[Transition] {
        &self.transitions[self.offsets[u as usize] as usize..self.offsets[u as usize + 1] as usize]
    }

    #[cfg(test)]
    pub fn transition_count(&self, u: State) -> usize {
        self.out(u).len()
    }

    #[cfg(test)]
    pub fn has_transition(&self, u: State, v: State) -> bool {
        self.out(u).iter().any(|t| t.to == v)
    }
}

/// Per-state costs of one metric over one cost table.
#[derive(Debug, Clone)]
pub struct StateCosts {
    pub metric: Metric,
    /// Full traversal cost per link.
    full: Vec<f64>,
    /// Entry endpoint to center, per state.
    entry_half: Vec<f64>,
    /// Center to exit endpoint, per state.
    exit_half: Vec<f64>,
    node_factor: f64,
}

impl StateCosts {
    pub fn new(metric: Metric, table: &CostTable) -> StateCosts {
        let n = table.all().len();
        let mut full = Vec::with_capacity(n);
        let mut entry_half = Vec::with_capacity(2 * n);
        let mut exit_half = Vec::with_capacity(2 * n);
        for costs in table.all() {
            full.push(metric.link_cost(costs));
            let start = metric.half_cost(&costs.to_start);
            let end = metric.half_cost(&costs.to_end);
            // Forward: enter at start, exit at end. Backward: the reverse.
            entry_half.push(start);
            entry_half.push(end);
            exit_half.push(end);
            exit_half.push(start);
        }
        StateCosts {
            metric,
            full,
            entry_half,
            exit_half,
            node_factor: metric.node_factor(),
        }
    }

    #[inline]
    pub fn full(&self, link: LinkIdx) -> f64 {
        self.full[link as usize]
    }

    #[inline]
    pub fn entry_half(&self, state: State) -> f64 {
        self.entry_half[state as usize]
    }

    #[inline]
    pub fn exit_half(&self, state: State) -> f64 {
        self.exit_half[state as usize]
    }
}

/// When to stop expanding the search.
#[derive(Debug, Clone, Copy)]
pub enum StopRule {
    /// Settle everything reachable.
    Exhaustive,
    /// Do not expand states whose label exceeds the bound. Valid for radius
    /// conditioning because the Euclidean metric has zero turn costs: every
    /// entry cost equals some expanded label.
    CostBound(f64),
    /// Stop once every target state's label is final.
    TargetsSettled,
}

#[derive(Clone, Copy)]
struct HeapEntry {
    cost: f64,
    state: State,
    generation: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap: reverse cost order.
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.state.cmp(&self.state))
            .then_with(|| other.generation.cmp(&self.generation))
    }
}

/// Reusable per-worker search buffers with epoch-stamped laziness.
pub struct SearchScratch {
    epoch: u32,
    stamp: Vec<u32>,
    cost: Vec<f64>,
    entry: Vec<f64>,
    hops: Vec<u32>,
    pred: Vec<State>,
    generation: Vec<u32>,
    popped: Vec<bool>,
    settled: Vec<State>,
    touched: Vec<State>,
    heap: BinaryHeap<HeapEntry>,
    chain_a: Vec<State>,
    chain_b: Vec<State>,
}

impl SearchScratch {
    pub fn new(state_count: usize) -> SearchScratch {
        SearchScratch {
            epoch: 0,
            stamp: vec![0; state_count],
            cost: vec![f64::INFINITY; state_count],
            entry: vec![f64::INFINITY; state_count],
            hops: vec![0; state_count],
            pred: vec![NO_STATE; state_count],
            generation: vec![0; state_count],
            popped: vec![false; state_count],
            settled: Vec::with_capacity(state_count),
            touched: Vec::with_capacity(state_count),
            heap: BinaryHeap::new(),
            chain_a: Vec::new(),
            chain_b: Vec::new(),
        }
    }

    fn begin(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            // Wrapped: stale stamps could collide, so reset them all.
            self.stamp.fill(u32::MAX);
            self.epoch = 1;
        }
        self.heap.clear();
        self.settled.clear();
        self.touched.clear();
    }

    #[inline]
    fn is_set(&self, s: State) -> bool {
        self.stamp[s as usize] == self.epoch
    }

    #[inline]
    fn touch(&mut self, s: State) {
        if !self.is_set(s) {
            self.stamp[s as usize] = self.epoch;
            self.cost[s as usize] = f64::INFINITY;
            self.entry[s as usize] = f64::INFINITY;
            self.hops[s as usize] = 0;
            self.pred[s as usize] = NO_STATE;
            self.generation[s as usize] = 0;
            self.popped[s as usize] = false;
            self.touched.push(s);
        }
    }

    /// Every state the last search assigned a label to, including states
    /// relaxed into but never popped.
    pub fn touched(&self) -> &[State] {
        &self.touched
    }

    /// Label cost of a state in the last search, if reached.
    pub fn label(&self, s: State) -> Option<f64> {
        if self.is_set(s) && self.cost[s as usize].is_finite() {
            Some(self.cost[s as usize])
        } else {
            None
        }
    }

    /// Cost at the entry node of a state (before traversing its link).
    pub fn entry_cost(&self, s: State) -> Option<f64> {
        if self.is_set(s) && self.entry[s as usize].is_finite() {
            Some(self.entry[s as usize])
        } else {
            None
        }
    }

    pub fn pred(&self, s: State) -> Option<State> {
        if self.is_set(s) && self.pred[s as usize] != NO_STATE {
            Some(self.pred[s as usize])
        } else {
            None
        }
    }

    pub fn hops(&self, s: State) -> u32 {
        if self.is_set(s) {
            self.hops[s as usize]
        } else {
            0
        }
    }

    /// States in final settle order (a state may appear once; re-improved
    /// states keep only their last pop).
    pub fn settled(&self) -> &[State] {
        &self.settled
    }

    /// Predecessor array slice for walking chains without re-borrowing.
    pub fn pred_raw(&self) -> &[State] {
        &self.pred
    }

    /// Whether the state was popped in the last search. A bounded search can
    /// leave a state labelled but unpopped when only its entry cost fits the
    /// bound.
    pub fn was_settled(&self, s: State) -> bool {
        self.is_set(s) && self.popped[s as usize]
    }

    /// Compares the paths ending at states `a` and `b` (equal hop counts)
    /// by link id sequence, then by direction sequence.
    fn cmp_equal_length_paths(&mut self, a: State, b: State) -> Ordering {
        let collect = |pred: &[State], stamp: &[u32], epoch: u32, start: State, buf: &mut Vec<State>| {
            buf.clear();
            let mut s = start;
            loop {
                buf.push(s);
                let p = pred[s as usize];
                if p == NO_STATE || stamp[s as usize] != epoch {
                    break;
                }
                s = p;
            }
        };
        let mut chain_a = std::mem::take(&mut self.chain_a);
        let mut chain_b = std::mem::take(&mut self.chain_b);
        collect(&self.pred, &self.stamp, self.epoch, a, &mut chain_a);
        collect(&self.pred, &self.stamp, self.epoch, b, &mut chain_b);
        // Chains are collected tail-first; forward order reads them backward.
        let mut ord = Ordering::Equal;
        for (sa, sb) in chain_a.iter().rev().zip(chain_b.iter().rev()) {
            match state_link(*sa).cmp(&state_link(*sb)) {
                Ordering::Equal => continue,
                other => {
                    ord = other;
                    break;
                }
            }
        }
        if ord == Ordering::Equal {
            for (sa, sb) in chain_a.iter().rev().zip(chain_b.iter().rev()) {
                match sa.cmp(sb) {
                    Ordering::Equal => continue,
                    other => {
                        ord = other;
                        break;
                    }
                }
            }
        }
        self.chain_a = chain_a;
        self.chain_b = chain_b;
        ord
    }
}

/// Routing context over one network: dual graph plus cached link costs.
pub struct Router<'a> {
    net: &'a Network,
    dual: DualGraph,
    cost_table: CostTable,
    euclid: StateCosts,
}

impl<'a> Router<'a> {
    pub fn new(net: &'a Network, noise_floor_deg: f64) -> Router<'a> {
        let cost_table = CostTable::compute(net, noise_floor_deg);
        let euclid = StateCosts::new(Metric::Euclidean, &cost_table);
        Router {
            net,
            dual: DualGraph::build(net),
            cost_table,
            euclid,
        }
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn dual(&self) -> &DualGraph {
        &self.dual
    }

    pub fn cost_table(&self) -> &CostTable {
        &self.cost_table
    }

    pub fn euclid_costs(&self) -> &StateCosts {
        &self.euclid
    }

    pub fn state_costs(&self, metric: Metric) -> StateCosts {
        if metric == Metric::Euclidean {
            self.euclid.clone()
        } else {
            StateCosts::new(metric, &self.cost_table)
        }
    }

    pub fn new_scratch(&self) -> SearchScratch {
        SearchScratch::new(self.dual.state_count())
    }

    /// Multi-seed Dijkstra from both directions of `origin`, labels seeded
    /// with the respective far-half costs. `targets` marks states whose
    /// labels must be final before a `TargetsSettled` stop.
    pub fn search(
        &self,
        origin: LinkIdx,
        costs: &StateCosts,
        stop: StopRule,
        targets: Option<&[bool]>,
        scratch: &mut SearchScratch,
    ) {
        scratch.begin();
        let mut remaining = match (stop, targets) {
            (StopRule::TargetsSettled, Some(t)) => t.iter().filter(|&&x| x).count(),
            _ => 0,
        };
        let mut max_target_cost = 0.0f64;

        for seed in [state_forward(origin), state_backward(origin)] {
            scratch.touch(seed);
            scratch.cost[seed as usize] = costs.exit_half(seed);
            scratch.hops[seed as usize] = 1;
            scratch.generation[seed as usize] += 1;
            scratch.heap.push(HeapEntry {
                cost: scratch.cost[seed as usize],
                state: seed,
                generation: scratch.generation[seed as usize],
            });
        }

        while let Some(entry) = scratch.heap.pop() {
            let u = entry.state;
            if entry.generation != scratch.generation[u as usize] {
                continue;
            }
            if let StopRule::CostBound(bound) = stop {
                if entry.cost > bound {
                    break;
                }
            }
            let repop = scratch.popped[u as usize];
            if !repop {
                scratch.popped[u as usize] = true;
                if let Some(t) = targets {
                    if t[u as usize] && remaining > 0 {
                        remaining -= 1;
                        max_target_cost = max_target_cost.max(entry.cost);
                    }
                }
            } else {
                // Re-pop after an equal-cost refinement: drop the earlier
                // settle record so the final order keeps the last pop.
                if let Some(pos) = scratch.settled.iter().rposition(|&s| s == u) {
                    scratch.settled.remove(pos);
                }
            }
            // Everything still queued costs at least this entry; once that
            // clears the costliest target label (plus the tie margin, so
            // pending equal-cost refinements still land), targets are final.
            if matches!(stop, StopRule::TargetsSettled)
                && targets.is_some()
                && remaining == 0
                && entry.cost > max_target_cost + COST_TIE_EPS
            {
                break;
            }
            scratch.settled.push(u);

            let u_cost = scratch.cost[u as usize];
            let u_hops = scratch.hops[u as usize];
            for t in self.dual.out(u) {
                let v = t.to;
                let entry_cost = u_cost + costs.node_factor * t.turn_deg;
                let cand_cost = entry_cost + costs.full(state_link(v));
                scratch.touch(v);
                let mut cascade = false;
                let better = match cmp_cost(cand_cost, scratch.cost[v as usize]) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => match (u_hops + 1).cmp(&scratch.hops[v as usize]) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            // Same cost and length: lexicographic id sequence.
                            // Both candidate paths end with v's link, so
                            // compare the predecessors' paths directly.
                            let incumbent = scratch.pred[v as usize];
                            if incumbent == u {
                                // v already runs through u, whose own path
                                // just refined at equal cost; wake v so the
                                // refinement reaches v's descendants too.
                                cascade = repop;
                                false
                            } else {
                                incumbent != NO_STATE
                                    && scratch.cmp_equal_length_paths(u, incumbent)
                                        == Ordering::Less
                            }
                        }
                    },
                };
                if better {
                    scratch.cost[v as usize] = cand_cost;
                    scratch.entry[v as usize] = entry_cost;
                    scratch.hops[v as usize] = u_hops + 1;
                    scratch.pred[v as usize] = u;
                }
                if better || cascade {
                    scratch.generation[v as usize] += 1;
                    scratch.heap.push(HeapEntry {
                        cost: scratch.cost[v as usize],
                        state: v,
                        generation: scratch.generation[v as usize],
                    });
                }
            }
        }
    }

    /// Best center-to-center arrival at `dest`, with the winning entry state,
    /// after a search. Ties between the two entry directions fall back to
    /// cost, hops, id sequence, direction sequence.
    pub fn resolve_dest(
        &self,
        costs: &StateCosts,
        dest: LinkIdx,
        scratch: &mut SearchScratch,
    ) -> Option<(f64, State)> {
        let fwd = state_forward(dest);
        let bwd = state_backward(dest);
        let candidate = |scratch: &SearchScratch, s: State| -> Option<f64> {
            scratch.entry_cost(s).map(|e| e + costs.entry_half(s))
        };
        let cf = candidate(scratch, fwd);
        let cb = candidate(scratch, bwd);
        match (cf, cb) {
            (None, None) => None,
            (Some(c), None) => Some((c, fwd)),
            (None, Some(c)) => Some((c, bwd)),
            (Some(a), Some(b)) => match cmp_cost(a, b) {
                Ordering::Less => Some((a, fwd)),
                Ordering::Greater => Some((b, bwd)),
                Ordering::Equal => match scratch.hops(fwd).cmp(&scratch.hops(bwd)) {
                    Ordering::Less => Some((a, fwd)),
                    Ordering::Greater => Some((b, bwd)),
                    Ordering::Equal => {
                        if scratch.cmp_equal_length_paths(bwd, fwd) == Ordering::Less {
                            Some((b, bwd))
                        } else {
                            Some((a, fwd))
                        }
                    }
                },
            },
        }
    }
}

/// Per-destination geodesic data from one origin.
#[derive(Debug, Clone, Copy)]
pub struct DestEntry {
    /// Center-to-center geodesic cost in metric units.
    pub cost: f64,
    /// Center-to-center Euclidean network distance in meters.
    pub euclid_m: f64,
    /// Final state of the geodesic (the destination's entry direction);
    /// NO_STATE for the origin itself.
    pub entry_state: State,
    /// Links on the geodesic, origin and destination included.
    pub hops: u32,
    /// Within the Euclidean radius.
    pub reachable: bool,
}

/// Single-origin geodesic tree under one metric and radius.
#[derive(Debug, Clone)]
pub struct GeodesicTree {
    pub origin: LinkIdx,
    pub metric: Metric,
    pub radius: Radius,
    entries: Vec<Option<DestEntry>>,
    pred: Vec<State>,
}

impl GeodesicTree {
    pub fn entry(&self, dest: LinkIdx) -> Option<&DestEntry> {
        self.entries[dest as usize].as_ref()
    }

    pub fn entries(&self) -> &[Option<DestEntry>] {
        &self.entries
    }

    /// Links of the geodesic to `dest` in travel order, origin first.
    pub fn path_links(&self, dest: LinkIdx) -> Option<Vec<LinkIdx>> {
        let entry = self.entries[dest as usize].as_ref()?;
        if entry.entry_state == NO_STATE {
            return Some(vec![self.origin]);
        }
        let mut links = Vec::with_capacity(entry.hops as usize);
        let mut s = entry.entry_state;
        loop {
            links.push(state_link(s));
            if self.pred[s as usize] == NO_STATE {
                break;
            }
            s = self.pred[s as usize];
        }
        links.reverse();
        Some(links)
    }
}

/// Runs the center-to-center search from `origin` and packages the result.
pub fn geodesic_tree(
    router: &Router,
    origin_id: &str,
    metric: Metric,
    radius: Radius,
) -> Result<GeodesicTree, RoutingError> {
    let net = router.network();
    let origin = net.require_link(origin_id)?;
    if net.link(origin).is_self_loop() {
        return Err(RoutingError::SelfLoopOrigin(origin_id.to_string()));
    }

    let mut scratch = router.new_scratch();
    let n = net.links().len();

    // Euclidean pass for radius conditioning and reported distances.
    let euclid_stop = match radius {
        Radius::Finite(r) => StopRule::CostBound(r),
        Radius::Infinite => StopRule::Exhaustive,
    };
    router.search(origin, router.euclid_costs(), euclid_stop, None, &mut scratch);
    let mut euclid_m = vec![f64::INFINITY; n];
    let mut euclid_entry = vec![NO_STATE; n];
    for dest in 0..n as LinkIdx {
        if dest == origin || net.link(dest).is_self_loop() {
            continue;
        }
        if let Some((c, s)) = router.resolve_dest(router.euclid_costs(), dest, &mut scratch) {
            euclid_m[dest as usize] = c;
            euclid_entry[dest as usize] = s;
        }
    }

    let costs = router.state_costs(metric);
    if metric != Metric::Euclidean {
        let mut targets = vec![false; router.dual().state_count()];
        for dest in 0..n as LinkIdx {
            if dest != origin && radius.contains(euclid_m[dest as usize]) {
                targets[state_forward(dest) as usize] = true;
                targets[state_backward(dest) as usize] = true;
            }
        }
        router.search(
            origin,
            &costs,
            StopRule::TargetsSettled,
            Some(&targets),
            &mut scratch,
        );
    }

    let mut entries: Vec<Option<DestEntry>> = vec![None; n];
    entries[origin as usize] = Some(DestEntry {
        cost: 0.0,
        euclid_m: 0.0,
        entry_state: NO_STATE,
        hops: 1,
        reachable: true,
    });
    for dest in 0..n as LinkIdx {
        if dest == origin || net.link(dest).is_self_loop() {
            continue;
        }
        let resolved = if metric == Metric::Euclidean {
            if euclid_entry[dest as usize] == NO_STATE {
                None
            } else {
                Some((euclid_m[dest as usize], euclid_entry[dest as usize]))
            }
        } else {
            router.resolve_dest(&costs, dest, &mut scratch)
        };
        if let Some((cost, entry_state)) = resolved {
            entries[dest as usize] = Some(DestEntry {
                cost,
                euclid_m: euclid_m[dest as usize],
                entry_state,
                hops: scratch.hops(entry_state),
                reachable: radius.contains(euclid_m[dest as usize]),
            });
        }
    }

    let mut pred = vec![NO_STATE; router.dual().state_count()];
    for s in 0..pred.len() {
        if let Some(p) = scratch.pred(s as State) {
            pred[s] = p;
        }
    }

    Ok(GeodesicTree {
        origin,
        metric,
        radius,
        entries,
        pred,
    })
}

/// Links whose minimal Euclidean network center-to-center distance from the
/// origin is within the radius; always contains the origin. Self-loop links
/// are not routing destinations and never appear (except as the origin,
/// which is rejected).
pub fn reachable_set(
    router: &Router,
    origin_id: &str,
    radius: Radius,
) -> Result<BTreeSet<String>, RoutingError> {
    let net = router.network();
    let origin = net.require_link(origin_id)?;
    if net.link(origin).is_self_loop() {
        return Err(RoutingError::SelfLoopOrigin(origin_id.to_string()));
    }
    let mut scratch = router.new_scratch();
    let stop = match radius {
        Radius::Finite(r) => StopRule::CostBound(r),
        Radius::Infinite => StopRule::Exhaustive,
    };
    router.search(origin, router.euclid_costs(), stop, None, &mut scratch);
    let mut out = BTreeSet::new();
    out.insert(net.link(origin).id.clone());
    for dest in 0..net.links().len() as LinkIdx {
        if dest == origin || net.link(dest).is_self_loop() {
            continue;
        }
        if let Some((c, _)) = router.resolve_dest(router.euclid_costs(), dest, &mut scratch) {
            if radius.contains(c) {
                out.insert(net.link(dest).id.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polyline3;
    use crate::network::LinkRecord;

    fn pl(pts: &[(f64, f64, f64)]) -> Polyline3 {
        let v = pts.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect();
        Polyline3::new(v, 0.0).unwrap()
    }

    fn chain3() -> Network {
        // L1 --- L2 --- L3, unit lengths, collinear
        Network::build(
            vec![
                LinkRecord::new("L1", pl(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])),
                LinkRecord::new("L2", pl(&[(1.0, 0.0, 0.0), (2.0, 0.0, 0.0)])),
                LinkRecord::new("L3", pl(&[(2.0, 0.0, 0.0), (3.0, 0.0, 0.0)])),
            ],
            0.001,
        )
        .unwrap()
    }

    #[test]
    fn chain_dual_transitions() {
        let net = chain3();
        let dual = DualGraph::build(&net);
        let l1 = net.link_index("L1").unwrap();
        let l2 = net.link_index("L2").unwrap();
        let l3 = net.link_index("L3").unwrap();
        // Interior moves both ways.
        assert!(dual.has_transition(state_forward(l1), state_forward(l2)));
        assert!(dual.has_transition(state_forward(l2), state_forward(l3)));
        assert!(dual.has_transition(state_backward(l2), state_backward(l1)));
        assert!(dual.has_transition(state_backward(l3), state_backward(l2)));
        // Dead ends allow the U-turn.
        assert!(dual.has_transition(state_forward(l3), state_backward(l3)));
        assert!(dual.has_transition(state_backward(l1), state_forward(l1)));
        // Interior nodes do not.
        assert!(!dual.has_transition(state_forward(l1), state_backward(l1)));
    }

    #[test]
    fn degree_three_node_fans_out() {
        let net = Network::build(
            vec![
                LinkRecord::new("a", pl(&[(-1.0, 0.0, 0.0), (0.0, 0.0, 0.0)])),
                LinkRecord::new("b", pl(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])),
                LinkRecord::new("c", pl(&[(0.0, 0.0, 0.0), (0.0, 1.0, 0.0)])),
            ],
            0.001,
        )
        .unwrap();
        let dual = DualGraph::build(&net);
        let a = net.link_index("a").unwrap();
        // Arriving at the degree-3 node: two ways on, no U-turn.
        assert_eq!(dual.transition_count(state_forward(a)), 2);
    }

    #[test]
    fn chain_euclidean_center_to_center() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let tree = geodesic_tree(&router, "L1", Metric::Euclidean, Radius::Infinite).unwrap();
        let l3 = net.link_index("L3").unwrap();
        let entry = tree.entry(l3).unwrap();
        assert!((entry.cost - 2.0).abs() < 1e-12);
        assert!((entry.euclid_m - 2.0).abs() < 1e-12);
        assert_eq!(entry.hops, 3);
        assert_eq!(
            tree.path_links(l3).unwrap(),
            vec![net.link_index("L1").unwrap(), net.link_index("L2").unwrap(), l3]
        );
    }

    #[test]
    fn chain_angular_cost_is_zero_when_straight() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let tree = geodesic_tree(&router, "L1", Metric::Angular, Radius::Infinite).unwrap();
        let l3 = net.link_index("L3").unwrap();
        assert_eq!(tree.entry(l3).unwrap().cost, 0.0);
    }

    #[test]
    fn reachable_set_infinite_covers_component() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let reach = reachable_set(&router, "L2", Radius::Infinite).unwrap();
        assert_eq!(reach.len(), 3);
    }

    #[test]
    fn reachable_set_small_radius_is_origin_only() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let reach = reachable_set(&router, "L2", Radius::Finite(0.4)).unwrap();
        assert_eq!(reach.len(), 1);
        assert!(reach.contains("L2"));
    }

    #[test]
    fn reachable_set_unit_radius_spans_neighbors() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let reach = reachable_set(&router, "L2", Radius::Finite(1.0)).unwrap();
        assert_eq!(
            reach,
            ["L1", "L2", "L3"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn unknown_origin_rejected() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        assert!(matches!(
            geodesic_tree(&router, "nope", Metric::Angular, Radius::Infinite),
            Err(RoutingError::Network(NetworkError::UnknownLink(_)))
        ));
    }

    #[test]
    fn self_loop_origin_rejected() {
        let net = Network::build(
            vec![
                LinkRecord::new("loop", pl(&[(0.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 0.0, 0.0)])),
                LinkRecord::new("a", pl(&[(0.0, 0.0, 0.0), (2.0, 0.0, 0.0)])),
            ],
            0.001,
        )
        .unwrap();
        let router = Router::new(&net, 0.0);
        assert!(matches!(
            geodesic_tree(&router, "loop", Metric::Angular, Radius::Infinite),
            Err(RoutingError::SelfLoopOrigin(_))
        ));
    }

    #[test]
    fn costs_nondecreasing_along_pred_chains() {
        let net = chain3();
        let router = Router::new(&net, 0.0);
        let costs = router.state_costs(Metric::Euclidean);
        let mut scratch = router.new_scratch();
        router.search(0, &costs, StopRule::Exhaustive, None, &mut scratch);
        for s in 0..router.dual().state_count() as State {
            if let (Some(c), Some(p)) = (scratch.label(s), scratch.pred(s)) {
                assert!(scratch.label(p).unwrap() <= c + 1e-12);
            }
        }
    }
}
