//! Per-link closeness, betweenness, connectivity and intelligibility over
//! metric x radius grids.
//!
//! Origins are processed in fixed-size chunks: members of a chunk run in
//! parallel, results fold back in origin order, so output bytes do not
//! depend on the thread count. Betweenness uses each unordered pair once
//! (canonical direction: from the lexicographically smaller link id), the
//! tie-broken unique geodesic, and credits 1 per interior occurrence plus
//! 0.5 to each endpoint link.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{Metric, Radius, DEFAULT_NOISE_FLOOR_DEG};
use crate::network::{LinkIdx, Network};
use crate::routing::{
    state_backward, state_forward, state_link, Router, SearchScratch, State, StopRule, NO_STATE,
};

const ORIGIN_CHUNK: usize = 32;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("no metrics requested")]
    NoMetrics,
    #[error("no radii requested")]
    NoRadii,
    #[error("analysis needs at least {needed} links, got {got}")]
    TooFewLinks { needed: usize, got: usize },
    #[error("zero variance in {0} series")]
    ZeroVariance(String),
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
}

/// How the radius bounds the neighborhood of an origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusMode {
    /// Euclidean network distance, center to center (the default).
    Network,
    /// Literal 3D sphere around the origin center, for sensitivity checks;
    /// links beyond network reach are excluded even if inside the sphere.
    Crowflight,
}

impl Default for RadiusMode {
    fn default() -> Self {
        RadiusMode::Network
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measures {
    pub closeness: bool,
    pub betweenness: bool,
}

impl Default for Measures {
    fn default() -> Self {
        Measures {
            closeness: true,
            betweenness: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisRequest {
    pub metrics: Vec<Metric>,
    pub radii: Vec<Radius>,
    #[serde(default)]
    pub measures: Measures,
    #[serde(default)]
    pub radius_mode: RadiusMode,
    #[serde(default = "default_noise_floor")]
    pub noise_floor_deg: f64,
    /// Worker threads; 0 picks the rayon default.
    #[serde(default)]
    pub threads: usize,
}

fn default_noise_floor() -> f64 {
    DEFAULT_NOISE_FLOOR_DEG
}

impl AnalysisRequest {
    pub fn new(metrics: Vec<Metric>, radii: Vec<Radius>) -> Self {
        AnalysisRequest {
            metrics,
            radii,
            measures: Measures::default(),
            radius_mode: RadiusMode::Network,
            noise_floor_deg: DEFAULT_NOISE_FLOOR_DEG,
            threads: 0,
        }
    }
}

/// One output row; rows are ordered by link id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRow {
    pub id: String,
    pub euc_m: f64,
    pub ang_deg: f64,
    pub connectivity: u32,
    /// Links in radius, this one included.
    pub reach_count: u32,
    /// Sum of link weights in radius, this one included.
    pub reach_weight: f64,
    /// Sum of geodesic costs to the other links in radius.
    pub closeness_total: f64,
    /// total / (reach_count - 1); absent for isolated or self-loop links.
    pub closeness_mean: Option<f64>,
    /// 1 / mean; 0 when the mean is absent or zero.
    pub closeness_inverse_mean: f64,
    pub betweenness: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralityTable {
    pub metric: Metric,
    pub radius: Radius,
    pub measures: Measures,
    pub rows: Vec<LinkRow>,
}

impl CentralityTable {
    pub fn row(&self, id: &str) -> Option<&LinkRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

/// Runs the requested metric x radius grid over the network.
pub fn analyze(net: &Network, req: &AnalysisRequest) -> Result<Vec<CentralityTable>, AnalysisError> {
    if req.metrics.is_empty() {
        return Err(AnalysisError::NoMetrics);
    }
    if req.radii.is_empty() {
        return Err(AnalysisError::NoRadii);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.threads)
        .build()
        .map_err(|e| AnalysisError::ThreadPool(e.to_string()))?;

    // Sorted unique radius buckets; destination tallies land in the first
    // bucket that reaches them and prefix-sums roll them outward.
    let mut buckets: Vec<Radius> = req.radii.clone();
    buckets.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    buckets.dedup_by(|a, b| a.as_f64() == b.as_f64());

    let router = Router::new(net, req.noise_floor_deg);
    let connectivity: Vec<u32> = (0..net.links().len() as LinkIdx)
        .map(|i| net.connectivity(i))
        .collect();

    let mut tables = Vec::new();
    for &metric in &req.metrics {
        let grid = pool.install(|| {
            run_metric(net, &router, metric, &buckets, req.radius_mode, req.measures)
        });
        for &radius in &req.radii {
            let b = buckets
                .iter()
                .position(|r| r.as_f64() == radius.as_f64())
                .expect("radius bucket");
            tables.push(build_table(
                net,
                &connectivity,
                &router,
                metric,
                radius,
                req.measures,
                &grid,
                b,
            ));
        }
    }
    Ok(tables)
}

/// Per-bucket tallies for one metric over all origins.
struct MetricGrid {
    buckets: usize,
    /// [origin * buckets + b]
    reach_count: Vec<u32>,
    reach_weight: Vec<f64>,
    total_cost: Vec<f64>,
    /// [link * buckets + b], already prefix-summed over buckets.
    betweenness: Vec<f64>,
}

fn run_metric(
    net: &Network,
    router: &Router,
    metric: Metric,
    buckets: &[Radius],
    mode: RadiusMode,
    measures: Measures,
) -> MetricGrid {
    let n = net.links().len();
    let nb = buckets.len();
    let mut grid = MetricGrid {
        buckets: nb,
        reach_count: vec![0; n * nb],
        reach_weight: vec![0.0; n * nb],
        total_cost: vec![0.0; n * nb],
        betweenness: vec![0.0; n * nb],
    };

    let mut chunk_out: Vec<Option<OriginOut>> = Vec::new();
    let mut start = 0usize;
    while start < n {
        let end = (start + ORIGIN_CHUNK).min(n);
        (start..end)
            .into_par_iter()
            .map_init(
                || Worker::new(router, metric, nb, measures.betweenness),
                |worker, origin| worker.run_origin(net, router, buckets, mode, origin as LinkIdx),
            )
            .collect_into_vec(&mut chunk_out);
        // Fold strictly in origin order so float sums never depend on the
        // parallel schedule.
        for (offset, out) in chunk_out.drain(..).enumerate() {
            let origin = start + offset;
            if let Some(out) = out {
                let base = origin * nb;
                grid.reach_count[base..base + nb].copy_from_slice(&out.reach_count);
                grid.reach_weight[base..base + nb].copy_from_slice(&out.reach_weight);
                grid.total_cost[base..base + nb].copy_from_slice(&out.total_cost);
                if let Some(betw) = out.betweenness {
                    for (slot, value) in grid.betweenness.iter_mut().zip(betw) {
                        *slot += value;
                    }
                }
            } else {
                // Self-loop origin: it reaches only itself.
                let base = origin * nb;
                for b in 0..nb {
                    grid.reach_count[base + b] = 1;
                    grid.reach_weight[base + b] = net.links()[origin].weight;
                }
            }
        }
        start = end;
    }

    // Roll per-bucket tallies into cumulative-within-radius values.
    for link in 0..n {
        let base = link * nb;
        for b in 1..nb {
            grid.betweenness[base + b] =
                grid.betweenness[base + b] + grid.betweenness[base + b - 1];
        }
    }
    grid
}

struct OriginOut {
    reach_count: Vec<u32>,
    reach_weight: Vec<f64>,
    total_cost: Vec<f64>,
    /// [link * buckets + b] contribution of this origin's pairs.
    betweenness: Option<Vec<f64>>,
}

struct Worker {
    scratch: SearchScratch,
    metric_costs: crate::routing::StateCosts,
    targets: Vec<bool>,
    marked: Vec<State>,
    /// [state * buckets + b]
    delta: Vec<f64>,
    touched: Vec<State>,
    /// Destinations labelled by the last Euclidean pass, ascending.
    reached: Vec<LinkIdx>,
    euclid_m: Vec<f64>,
    want_betweenness: bool,
    buckets: usize,
}

impl Worker {
    fn new(router: &Router, metric: Metric, buckets: usize, want_betweenness: bool) -> Worker {
        let states = router.dual().state_count();
        Worker {
            scratch: router.new_scratch(),
            metric_costs: router.state_costs(metric),
            targets: vec![false; states],
            marked: Vec::new(),
            delta: vec![0.0; states * buckets],
            touched: Vec::new(),
            reached: Vec::new(),
            euclid_m: vec![f64::INFINITY; states / 2],
            want_betweenness,
            buckets,
        }
    }

    fn run_origin(
        &mut self,
        net: &Network,
        router: &Router,
        buckets: &[Radius],
        mode: RadiusMode,
        origin: LinkIdx,
    ) -> Option<OriginOut> {
        if net.link(origin).is_self_loop() {
            return None;
        }
        let n = net.links().len();
        let nb = self.buckets;
        let max_radius = buckets.last().copied().unwrap_or(Radius::Infinite);

        // Reset per-origin distance markers from the previous run.
        while let Some(dest) = self.reached.pop() {
            self.euclid_m[dest as usize] = f64::INFINITY;
        }

        // Euclidean pass: reach conditioning plus reported distances. Only
        // links the search labelled can be in reach.
        let stop = match (mode, max_radius) {
            (RadiusMode::Network, Radius::Finite(r)) => StopRule::CostBound(r),
            _ => StopRule::Exhaustive,
        };
        router.search(origin, router.euclid_costs(), stop, None, &mut self.scratch);
        for i in 0..self.scratch.touched().len() {
            let dest = state_link(self.scratch.touched()[i]);
            if dest == origin
                || net.link(dest).is_self_loop()
                || self.euclid_m[dest as usize].is_finite()
            {
                continue;
            }
            if let Some((c, _)) = router.resolve_dest(router.euclid_costs(), dest, &mut self.scratch)
            {
                self.euclid_m[dest as usize] = c;
                self.reached.push(dest);
            }
        }
        self.reached.sort_unstable();

        // Radius conditioning distance per destination.
        let origin_center = net.link(origin).center;
        let cond = |worker: &Worker, dest: LinkIdx| -> f64 {
            match mode {
                RadiusMode::Network => worker.euclid_m[dest as usize],
                RadiusMode::Crowflight => {
                    if worker.euclid_m[dest as usize].is_finite() {
                        net.link(dest).center.distance(&origin_center)
                    } else {
                        f64::INFINITY
                    }
                }
            }
        };

        // Metric pass (the Euclidean one doubles up when it is the metric).
        if self.metric_costs.metric != Metric::Euclidean {
            while let Some(s) = self.marked.pop() {
                self.targets[s as usize] = false;
            }
            for i in 0..self.reached.len() {
                let dest = self.reached[i];
                if max_radius.contains(cond(self, dest)) {
                    for s in [state_forward(dest), state_backward(dest)] {
                        self.targets[s as usize] = true;
                        self.marked.push(s);
                    }
                }
            }
            router.search(
                origin,
                &self.metric_costs,
                StopRule::TargetsSettled,
                Some(&self.targets),
                &mut self.scratch,
            );
        }

        let mut out = OriginOut {
            reach_count: vec![0; nb],
            reach_weight: vec![0.0; nb],
            total_cost: vec![0.0; nb],
            betweenness: None,
        };
        // The origin reaches itself at every radius.
        out.reach_count[0] = 1;
        out.reach_weight[0] = net.link(origin).weight;

        let mut endpoint_corr: Vec<(LinkIdx, usize, f64)> = Vec::new();
        let mut seeds: Vec<State> = Vec::new();
        let mut seeded = false;
        for i in 0..self.reached.len() {
            let dest = self.reached[i];
            let conditioning = cond(self, dest);
            let bucket = match buckets.iter().position(|r| r.contains(conditioning)) {
                Some(b) => b,
                None => continue,
            };
            let (cost, entry_state) =
                match router.resolve_dest(&self.metric_costs, dest, &mut self.scratch) {
                    Some(hit) => hit,
                    None => continue,
                };
            out.reach_count[bucket] += 1;
            out.reach_weight[bucket] += net.link(dest).weight;
            out.total_cost[bucket] += cost;

            if self.want_betweenness && dest > origin {
                let w = net.link(origin).weight * net.link(dest).weight;
                if w != 0.0 {
                    let slot = entry_state as usize * nb + bucket;
                    if self.delta[slot] == 0.0 {
                        self.touched.push(entry_state);
                    }
                    self.delta[slot] += w;
                    seeds.push(entry_state);
                    seeded = true;
                    endpoint_corr.push((origin, bucket, 0.5 * w));
                    endpoint_corr.push((dest, bucket, 0.5 * w));
                }
            }
        }

        // Prefix over buckets: a destination in bucket b is also within
        // every larger radius.
        for b in 1..nb {
            out.reach_count[b] += out.reach_count[b - 1];
            out.reach_weight[b] += out.reach_weight[b - 1];
            out.total_cost[b] += out.total_cost[b - 1];
        }

        if self.want_betweenness {
            let mut betw = vec![0.0; n * nb];
            if seeded {
                // A bounded search can label an entry state without popping
                // it; flow such seeds into their settled predecessors first.
                for s in seeds {
                    if self.scratch.was_settled(s) {
                        continue;
                    }
                    let base = s as usize * nb;
                    let link_base = state_link(s) as usize * nb;
                    let p = self.scratch.pred_raw()[s as usize];
                    for b in 0..nb {
                        let value = self.delta[base + b];
                        if value != 0.0 {
                            betw[link_base + b] += value;
                            if p != NO_STATE {
                                let pred_base = p as usize * nb;
                                if self.delta[pred_base + b] == 0.0 {
                                    self.touched.push(p);
                                }
                                self.delta[pred_base + b] += value;
                            }
                            self.delta[base + b] = 0.0;
                        }
                    }
                }
                // Push pair weights up the predecessor forest; children are
                // settled after their predecessors, so walk settle order
                // backwards.
                let settled = self.scratch.settled();
                let preds = self.scratch.pred_raw();
                for &s in settled.iter().rev() {
                    let base = s as usize * nb;
                    let mut any = false;
                    for b in 0..nb {
                        if self.delta[base + b] != 0.0 {
                            any = true;
                            break;
                        }
                    }
                    if !any {
                        continue;
                    }
                    let link_base = state_link(s) as usize * nb;
                    for b in 0..nb {
                        betw[link_base + b] += self.delta[base + b];
                    }
                    let p = preds[s as usize];
                    if p != NO_STATE {
                        let pred_base = p as usize * nb;
                        for b in 0..nb {
                            if self.delta[base + b] != 0.0 {
                                if self.delta[pred_base + b] == 0.0 {
                                    self.touched.push(p);
                                }
                                self.delta[pred_base + b] += self.delta[base + b];
                            }
                        }
                    }
                }
                for (link, bucket, w) in endpoint_corr {
                    betw[link as usize * nb + bucket] -= w;
                }
            }
            while let Some(s) = self.touched.pop() {
                let base = s as usize * nb;
                for b in 0..nb {
                    self.delta[base + b] = 0.0;
                }
            }
            out.betweenness = Some(betw);
        }
        Some(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_table(
    net: &Network,
    connectivity: &[u32],
    router: &Router,
    metric: Metric,
    radius: Radius,
    measures: Measures,
    grid: &MetricGrid,
    bucket: usize,
) -> CentralityTable {
    let nb = grid.buckets;
    let rows = net
        .links()
        .iter()
        .enumerate()
        .map(|(i, link)| {
            let costs = router.cost_table().get(i as LinkIdx);
            let reach_count = grid.reach_count[i * nb + bucket];
            let total = grid.total_cost[i * nb + bucket];
            let mean = if reach_count > 1 {
                Some(total / (reach_count as f64 - 1.0))
            } else {
                None
            };
            let inverse_mean = match mean {
                Some(m) if m > 0.0 => 1.0 / m,
                _ => 0.0,
            };
            LinkRow {
                id: link.id.clone(),
                euc_m: costs.euc_m,
                ang_deg: costs.ang_deg,
                connectivity: connectivity[i],
                reach_count,
                reach_weight: grid.reach_weight[i * nb + bucket],
                closeness_total: total,
                closeness_mean: mean,
                closeness_inverse_mean: inverse_mean,
                betweenness: grid.betweenness[i * nb + bucket],
            }
        })
        .collect();
    CentralityTable {
        metric,
        radius,
        measures,
        rows,
    }
}

/// Pearson r-squared between per-link connectivity and the inverse mean of
/// global (infinite radius) closeness under `metric`.
pub fn intelligibility(
    net: &Network,
    metric: Metric,
    noise_floor_deg: f64,
) -> Result<f64, AnalysisError> {
    if net.links().len() < 3 {
        return Err(AnalysisError::TooFewLinks {
            needed: 3,
            got: net.links().len(),
        });
    }
    let mut req = AnalysisRequest::new(vec![metric], vec![Radius::Infinite]);
    req.noise_floor_deg = noise_floor_deg;
    req.measures = Measures {
        closeness: true,
        betweenness: false,
    };
    let table = analyze(net, &req)?.remove(0);
    let connectivity: Vec<f64> = table.rows.iter().map(|r| r.connectivity as f64).collect();
    let inverse_mean: Vec<f64> = table.rows.iter().map(|r| r.closeness_inverse_mean).collect();
    let corr = crate::stats::pearson(&connectivity, &inverse_mean).map_err(|e| match e {
        crate::stats::StatsError::ZeroVariance(series) => AnalysisError::ZeroVariance(match series
            .as_str()
        {
            "x" => "connectivity".to_string(),
            _ => "closeness inverse mean".to_string(),
        }),
        crate::stats::StatsError::TooFewPairs { needed, got } => {
            AnalysisError::TooFewLinks { needed, got }
        }
    })?;
    Ok(corr.r2)
}
