//! File formats: GeoJSON and CSV network input, observation CSVs, and the
//! CSV result tables. All output is UTF-8 with LF line ends, '.' decimal
//! separators, and floats at 9 significant digits, so identical analyses
//! produce identical bytes.

mod csv_geom;
mod fmt;
mod geojson;
mod observations;
mod tables;

pub use csv_geom::{parse_csv_geometry, write_csv_geometry};
pub use fmt::fmt_sig;
pub use geojson::{network_to_geojson, parse_geojson};
pub use observations::parse_observations;
pub use tables::{
    links_filename, write_links_csv, write_sweep_csv, write_xcorr_csv, LINKS_BASE_COLUMNS,
    LINKS_BETWEENNESS_COLUMNS, LINKS_CLOSENESS_COLUMNS,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{context}: {message}")]
    Format { context: String, message: String },
}

impl IoError {
    fn format(context: impl Into<String>, message: impl Into<String>) -> IoError {
        IoError::Format {
            context: context.into(),
            message: message.into(),
        }
    }

    fn feature(index: usize, message: impl Into<String>) -> IoError {
        IoError::Format {
            context: format!("feature {index}"),
            message: message.into(),
        }
    }
}
