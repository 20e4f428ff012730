//! CSV result tables. Column layouts are part of the output contract and
//! documented in docs/formats.md; the metric and radius live in the file
//! name, never inside the table, so metrics with identical values produce
//! identical bytes.

use super::{fmt_sig, IoError};
use crate::centrality::CentralityTable;
use crate::metric::{Metric, Radius};
use crate::stats::{stars, SweepResult, XcorrResult};

pub const LINKS_BASE_COLUMNS: [&str; 4] = ["id", "euc_m", "ang_deg", "connectivity"];
pub const LINKS_CLOSENESS_COLUMNS: [&str; 5] = [
    "reach_count",
    "reach_weight",
    "closeness_total",
    "closeness_mean",
    "closeness_inverse_mean",
];
pub const LINKS_BETWEENNESS_COLUMNS: [&str; 1] = ["betweenness"];

pub fn links_filename(metric: &Metric, radius: &Radius) -> String {
    format!("links_{}_{}.csv", metric.slug(), radius.slug())
}

pub fn write_links_csv<W: std::io::Write>(out: W, table: &CentralityTable) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = LINKS_BASE_COLUMNS.to_vec();
    if table.measures.closeness {
        header.extend(LINKS_CLOSENESS_COLUMNS);
    }
    if table.measures.betweenness {
        header.extend(LINKS_BETWEENNESS_COLUMNS);
    }
    writer.write_record(&header)?;
    for row in &table.rows {
        let mut record: Vec<String> = vec![
            row.id.clone(),
            fmt_sig(row.euc_m),
            fmt_sig(row.ang_deg),
            row.connectivity.to_string(),
        ];
        if table.measures.closeness {
            record.push(row.reach_count.to_string());
            record.push(fmt_sig(row.reach_weight));
            record.push(fmt_sig(row.closeness_total));
            record.push(row.closeness_mean.map(fmt_sig).unwrap_or_default());
            record.push(fmt_sig(row.closeness_inverse_mean));
        }
        if table.measures.betweenness {
            record.push(fmt_sig(row.betweenness));
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "measure",
    "metric",
    "radius",
    "r2",
    "p_value",
    "stars",
    "n_used",
    "n_dropped",
    "best_radius",
    "note",
];

pub fn write_sweep_csv<W: std::io::Write>(out: W, result: &SweepResult) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SWEEP_COLUMNS)?;
    for cell in &result.cells {
        let (r2, p, star, n_used, n_dropped) = match &cell.fit {
            Some(fit) => (
                fmt_sig(fit.r2),
                fmt_sig(fit.p_value),
                stars(fit.p_value).to_string(),
                fit.n_used.to_string(),
                fit.n_dropped.to_string(),
            ),
            None => Default::default(),
        };
        writer.write_record([
            cell.measure.slug().to_string(),
            cell.metric.slug(),
            cell.radius.slug(),
            r2,
            p,
            star,
            n_used,
            n_dropped,
            if cell.best_radius { "1" } else { "0" }.to_string(),
            cell.note.clone().unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Matrix form mirroring a cross-correlation table: one row per metric, one
/// column per metric, cells are r-squared values (empty when degenerate).
pub fn write_xcorr_csv<W: std::io::Write>(out: W, result: &XcorrResult) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["metric".to_string()];
    header.extend(result.metrics.iter().map(|m| m.slug()));
    writer.write_record(&header)?;
    for (i, metric) in result.metrics.iter().enumerate() {
        let mut record = vec![metric.slug()];
        for j in 0..result.metrics.len() {
            record.push(result.r2(i, j).map(fmt_sig).unwrap_or_default());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{analyze, AnalysisRequest};
    use crate::geom::{Polyline3, Vec3};
    use crate::network::{LinkRecord, Network};

    fn chain() -> Network {
        let records = (0..3)
            .map(|i| {
                LinkRecord::new(
                    format!("L{i}"),
                    Polyline3::new(
                        vec![
                            Vec3::new(i as f64, 0.0, 0.0),
                            Vec3::new(i as f64 + 1.0, 0.0, 0.0),
                        ],
                        0.0,
                    )
                    .unwrap(),
                )
            })
            .collect();
        Network::build(records, 0.001).unwrap()
    }

    #[test]
    fn links_csv_header_matches_declared_columns() {
        let net = chain();
        let mut req = AnalysisRequest::new(vec![Metric::Euclidean], vec![Radius::Infinite]);
        req.noise_floor_deg = 0.0;
        let table = analyze(&net, &req).unwrap().remove(0);
        let mut buf = Vec::new();
        write_links_csv(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "id,euc_m,ang_deg,connectivity,reach_count,reach_weight,\
             closeness_total,closeness_mean,closeness_inverse_mean,betweenness"
        );
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn filenames_carry_metric_and_radius() {
        assert_eq!(
            links_filename(&Metric::Angular, &Radius::Finite(500.0)),
            "links_angular_500.csv"
        );
        assert_eq!(
            links_filename(&Metric::Hybrid { a: 0.5 }, &Radius::Infinite),
            "links_hybrid0.5_inf.csv"
        );
    }
}
