//! Analysis cost definitions: topological, angular, Euclidean, and the
//! hybrid blend `a * ang + (1 - a) * euc` along links with `a * ang` at
//! junctions. Angles are degrees, lengths meters; the hybrid mixes the raw
//! units without normalization.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Link, Network};

pub const DEFAULT_NOISE_FLOOR_DEG: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("hybrid weighting constant must be in [0, 1], got {0}")]
    WeightOutOfRange(f64),
    #[error("cannot parse metric `{0}` (expected topological|angular|euclidean|hybrid:<a|r:r>)")]
    BadMetric(String),
    #[error("cannot parse ratio `{0}` (expected <int>:<int> or a decimal in [0, 1])")]
    BadRatio(String),
    #[error("ratio 0:0 is undefined")]
    ZeroRatio,
}

/// Cost definition for geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Metric {
    /// 1 per link, free junctions: least turn count in the link-count sense.
    Topological,
    /// Cumulative angular change only: most direct path.
    Angular,
    /// Path length only: shortest path.
    Euclidean,
    /// `a * ang + (1 - a) * euc`; a = 1 is pure angular, a = 0 pure Euclidean.
    Hybrid { a: f64 },
}

impl Metric {
    pub fn hybrid(a: f64) -> Result<Metric, MetricError> {
        if !(0.0..=1.0).contains(&a) {
            return Err(MetricError::WeightOutOfRange(a));
        }
        Ok(Metric::Hybrid { a })
    }

    /// Parses `topological`, `angular`, `euclidean`, `hybrid:<a>`,
    /// `hybrid:<r_ang>:<r_euc>`.
    pub fn parse(s: &str) -> Result<Metric, MetricError> {
        match s.trim() {
            "topological" | "topo" => Ok(Metric::Topological),
            "angular" => Ok(Metric::Angular),
            "euclidean" => Ok(Metric::Euclidean),
            other => match other.strip_prefix("hybrid:") {
                Some(spec) => Metric::hybrid(parse_ratio(spec)?),
                None => Err(MetricError::BadMetric(s.to_string())),
            },
        }
    }

    /// Multiplier applied to junction turn angles.
    pub fn node_factor(&self) -> f64 {
        match self {
            Metric::Topological | Metric::Euclidean => 0.0,
            Metric::Angular => 1.0,
            Metric::Hybrid { a } => *a,
        }
    }

    /// Cost of traversing a whole link.
    pub fn link_cost(&self, costs: &LinkCosts) -> f64 {
        match self {
            Metric::Topological => 1.0,
            Metric::Angular => costs.ang_deg,
            Metric::Euclidean => costs.euc_m,
            Metric::Hybrid { a } => a * costs.ang_deg + (1.0 - a) * costs.euc_m,
        }
    }

    /// Cost of traversing half a link (center to one endpoint).
    pub fn half_cost(&self, half: &HalfCosts) -> f64 {
        match self {
            Metric::Topological => 0.5,
            Metric::Angular => half.ang_deg,
            Metric::Euclidean => half.euc_m,
            Metric::Hybrid { a } => a * half.ang_deg + (1.0 - a) * half.euc_m,
        }
    }

    /// Cost of a junction turn of `turn_deg` degrees.
    pub fn node_cost(&self, turn_deg: f64) -> f64 {
        self.node_factor() * turn_deg
    }

    /// Stable, filename-safe identifier.
    pub fn slug(&self) -> String {
        match self {
            Metric::Topological => "topological".to_string(),
            Metric::Angular => "angular".to_string(),
            Metric::Euclidean => "euclidean".to_string(),
            Metric::Hybrid { a } => format!("hybrid{a}"),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Hybrid { a } => write!(f, "hybrid(a={a})"),
            Metric::Topological => write!(f, "topological"),
            Metric::Angular => write!(f, "angular"),
            Metric::Euclidean => write!(f, "euclidean"),
        }
    }
}

/// Parses a hybrid weighting: either a decimal in [0, 1] or a ratio
/// `<r_ang>:<r_euc>` mapped to `a = r_ang / (r_ang + r_euc)`, so `1:0` is
/// pure angular and `0:1` pure Euclidean.
pub fn parse_ratio(s: &str) -> Result<f64, MetricError> {
    let s = s.trim();
    if let Some((lhs, rhs)) = s.split_once(':') {
        let r_ang: u32 = lhs
            .parse()
            .map_err(|_| MetricError::BadRatio(s.to_string()))?;
        let r_euc: u32 = rhs
            .parse()
            .map_err(|_| MetricError::BadRatio(s.to_string()))?;
        if r_ang == 0 && r_euc == 0 {
            return Err(MetricError::ZeroRatio);
        }
        return Ok(r_ang as f64 / (r_ang + r_euc) as f64);
    }
    let a: f64 = s
        .parse()
        .map_err(|_| MetricError::BadRatio(s.to_string()))?;
    if !(0.0..=1.0).contains(&a) {
        return Err(MetricError::WeightOutOfRange(a));
    }
    Ok(a)
}

/// Analysis neighborhood bound in meters of Euclidean network distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn parse(s: &str) -> Option<Radius> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
            return Some(Radius::Infinite);
        }
        let v: f64 = s.parse().ok()?;
        if v > 0.0 && v.is_finite() {
            Some(Radius::Finite(v))
        } else {
            None
        }
    }

    pub fn contains(&self, distance_m: f64) -> bool {
        match self {
            Radius::Finite(r) => distance_m <= *r,
            Radius::Infinite => true,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Radius::Finite(r) => *r,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn slug(&self) -> String {
        match self {
            Radius::Finite(r) => format!("{r}"),
            Radius::Infinite => "inf".to_string(),
        }
    }
}

impl std::fmt::Display for Radius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.slug())
    }
}

impl Serialize for Radius {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(r) => ser.serialize_f64(*r),
            Radius::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(v) if v > 0.0 && v.is_finite() => Ok(Radius::Finite(v)),
            Raw::Number(v) => Err(serde::de::Error::custom(format!("bad radius {v}"))),
            Raw::Text(s) => {
                Radius::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad radius `{s}`")))
            }
        }
    }
}

/// Costs of one half of a link, from the center to one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfCosts {
    pub euc_m: f64,
    pub ang_deg: f64,
}

/// Cached geometric quantities of a link under a given noise floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCosts {
    /// Polyline length in meters.
    pub euc_m: f64,
    /// Cumulative angular change in degrees, or the angular override.
    pub ang_deg: f64,
    /// Center to first vertex.
    pub to_start: HalfCosts,
    /// Center to last vertex. A turn exactly at the arc-length midpoint is
    /// assigned to this half.
    pub to_end: HalfCosts,
}

/// Computes link costs. The angular override, when present, replaces the
/// geometric cumulative angle and splits evenly between the halves.
pub fn link_costs(link: &Link, noise_floor_deg: f64) -> LinkCosts {
    let euc_m = link.geometry.length();
    let half_start = euc_m * 0.5;
    let half_end = euc_m - half_start;
    match link.angular_override_deg {
        Some(override_deg) => {
            let half_ang = override_deg * 0.5;
            LinkCosts {
                euc_m,
                ang_deg: override_deg,
                to_start: HalfCosts {
                    euc_m: half_start,
                    ang_deg: half_ang,
                },
                to_end: HalfCosts {
                    euc_m: half_end,
                    ang_deg: override_deg - half_ang,
                },
            }
        }
        None => {
            let mid = euc_m * 0.5;
            let mut ang_deg = 0.0;
            let mut ang_start = 0.0;
            let mut ang_end = 0.0;
            for (arc, turn) in link.geometry.interior_turns(noise_floor_deg) {
                ang_deg += turn;
                if arc < mid {
                    ang_start += turn;
                } else {
                    ang_end += turn;
                }
            }
            LinkCosts {
                euc_m,
                ang_deg,
                to_start: HalfCosts {
                    euc_m: half_start,
                    ang_deg: ang_start,
                },
                to_end: HalfCosts {
                    euc_m: half_end,
                    ang_deg: ang_end,
                },
            }
        }
    }
}

/// Per-link cost cache for one network and noise floor.
#[derive(Debug, Clone)]
pub struct CostTable {
    pub noise_floor_deg: f64,
    costs: Vec<LinkCosts>,
}

impl CostTable {
    pub fn compute(net: &Network, noise_floor_deg: f64) -> CostTable {
        CostTable {
            noise_floor_deg,
            costs: net
                .links()
                .iter()
                .map(|l| link_costs(l, noise_floor_deg))
                .collect(),
        }
    }

    pub fn get(&self, idx: crate::network::LinkIdx) -> &LinkCosts {
        &self.costs[idx as usize]
    }

    pub fn all(&self) -> &[LinkCosts] {
        &self.costs
    }
}
