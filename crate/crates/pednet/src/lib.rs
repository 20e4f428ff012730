//! 3D pedestrian network analysis: multi-level indoor/outdoor link-node
//! networks with radius-conditioned closeness and betweenness centrality
//! under topological, angular, Euclidean and hybrid angular-Euclidean
//! metrics, plus the log-log statistical harness used to validate the
//! measures against observed movement.
//!
//! Links carry full 3D polyline geometry, so one link spans junction to
//! junction including horizontal and vertical curvature; stairs, ramps and
//! escalators are ordinary links, and lifts can override their angular cost.
//! Geodesics run center to center over the directed-link graph with turn
//! costs at junctions, and a destination is in radius iff its Euclidean
//! network distance fits, whatever metric prices the paths.

pub mod centrality;
pub mod geom;
pub mod io;
pub mod metric;
pub mod network;
pub mod routing;
pub mod stats;
pub mod validate;

pub use centrality::{
    analyze, intelligibility, AnalysisRequest, CentralityTable, LinkRow, Measures, RadiusMode,
};
pub use geom::{turn_angle_3d, Polyline3, Vec3};
pub use metric::{link_costs, parse_ratio, CostTable, LinkCosts, Metric, Radius};
pub use network::{Link, LinkRecord, Network, Node, TagFilter};
pub use routing::{geodesic_tree, reachable_set, GeodesicTree, Router};
pub use stats::{
    cross_correlation_matrix, loglog_r2, pearson, stars, sweep, MeasureKind, ObservationSet,
    SweepResult, XcorrResult,
};
pub use validate::{validate_network, ValidationConfig, ValidationReport};
