//! Test support for pednet: fixture networks, an exhaustive path-enumeration
//! oracle for geodesics and centrality, and textbook-formula statistics.
//! Everything here recomputes results through independent machinery; only
//! the shared geometry and cost definitions come from the main crate.

pub mod fixtures;
pub mod oracle;
pub mod refstats;
