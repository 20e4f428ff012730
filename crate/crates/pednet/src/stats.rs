//! Statistical validation harness: log-log bivariate fits of observed flows
//! against centrality, metric x radius sweep tables, and cross-metric
//! correlation matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::centrality::{analyze, AnalysisError, AnalysisRequest, CentralityTable, LinkRow};
use crate::metric::{Metric, Radius};
use crate::network::Network;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} usable pairs, got {got}")]
    TooFewPairs { needed: usize, got: usize },
    #[error("zero variance in {0} series")]
    ZeroVariance(String),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("observation references unknown link `{0}`")]
    UnknownObservationLink(String),
    #[error("no observations")]
    NoObservations,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Observed flows per link for one labelled period (or an average).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ObservationSet {
    pub flows: BTreeMap<String, f64>,
    pub period: Option<String>,
}

impl ObservationSet {
    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    pub fn validate_against(&self, net: &Network) -> Result<(), SweepError> {
        for id in self.flows.keys() {
            if net.link_index(id).is_none() {
                return Err(SweepError::UnknownObservationLink(id.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub r2: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Plain Pearson correlation with a two-sided p from the t distribution on
/// n - 2 degrees of freedom.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Correlation, StatsError> {
    let n = xs.len().min(ys.len());
    if n < 3 {
        return Err(StatsError::TooFewPairs { needed: 3, got: n });
    }
    let mean = |vals: &[f64]| vals.iter().sum::<f64>() / vals.len() as f64;
    let mx = mean(&xs[..n]);
    let my = mean(&ys[..n]);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance("x".to_string()));
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance("y".to_string()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let r2 = r * r;
    let df = (n - 2) as f64;
    let p_value = if 1.0 - r2 <= 0.0 {
        0.0
    } else {
        let t = r.abs() * (df / (1.0 - r2)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("t distribution");
        2.0 * (1.0 - dist.cdf(t))
    };
    Ok(Correlation { r, r2, p_value, n })
}

/// Significance stars matching the usual table footnote thresholds.
pub fn stars(p_value: f64) -> &'static str {
    if p_value <= 0.01 {
        "**"
    } else if p_value <= 0.05 {
        "*"
    } else {
        ""
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub r2: f64,
    pub p_value: f64,
    pub n_used: usize,
    pub n_dropped: usize,
}

/// Natural-log transform of both series, then Pearson r-squared.
///
/// Pairs where the observation or the value is missing, nonpositive, or
/// nonfinite are dropped (not offset) and counted; the per-cell invariant
/// n_used + n_dropped = observation count always holds.
pub fn loglog_r2(
    obs: &ObservationSet,
    values: &BTreeMap<String, f64>,
) -> Result<LogLogFit, StatsError> {
    let mut xs = Vec::with_capacity(obs.len());
    let mut ys = Vec::with_capacity(obs.len());
    let mut n_dropped = 0usize;
    for (id, &flow) in &obs.flows {
        let value = values.get(id).copied();
        match value {
            Some(v) if flow > 0.0 && v > 0.0 && v.is_finite() && flow.is_finite() => {
                xs.push(flow.ln());
                ys.push(v.ln());
            }
            _ => n_dropped += 1,
        }
    }
    if xs.len() < 3 {
        return Err(StatsError::TooFewPairs {
            needed: 3,
            got: xs.len(),
        });
    }
    let corr = pearson(&xs, &ys).map_err(|e| match e {
        StatsError::ZeroVariance(series) => StatsError::ZeroVariance(match series.as_str() {
            "x" => "observations".to_string(),
            _ => "values".to_string(),
        }),
        other => other,
    })?;
    Ok(LogLogFit {
        r2: corr.r2,
        p_value: corr.p_value,
        n_used: corr.n,
        n_dropped,
    })
}

/// Measures whose per-link series feed the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Closeness,
    Betweenness,
}

impl MeasureKind {
    pub fn parse(s: &str) -> Option<MeasureKind> {
        match s.trim() {
            "closeness" => Some(MeasureKind::Closeness),
            "betweenness" => Some(MeasureKind::Betweenness),
            _ => None,
        }
    }

    pub fn slug(&self) -> &'static str {
        match self {
            MeasureKind::Closeness => "closeness",
            MeasureKind::Betweenness => "betweenness",
        }
    }

    /// Series value per row: inverse mean for closeness (integration-like
    /// orientation; the log fit's r-squared is sign-blind either way),
    /// accumulated flow for betweenness.
    pub fn value(&self, row: &LinkRow) -> f64 {
        match self {
            MeasureKind::Closeness => row.closeness_inverse_mean,
            MeasureKind::Betweenness => row.betweenness,
        }
    }
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.slug())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub measure: MeasureKind,
    pub metric: Metric,
    pub radius: Radius,
    pub fit: Option<LogLogFit>,
    /// Why the fit is absent, when it is.
    pub note: Option<String>,
    /// Best radius within its (measure, metric) row; ties go to the
    /// smaller radius.
    pub best_radius: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

fn series_map(table: &CentralityTable, measure: MeasureKind) -> BTreeMap<String, f64> {
    table
        .rows
        .iter()
        .map(|r| (r.id.clone(), measure.value(r)))
        .collect()
}

/// Computes centrality per (measure, metric, radius) cell and fits each cell
/// against the observations. Cell errors become flagged cells, not aborts.
pub fn sweep(
    net: &Network,
    req: &AnalysisRequest,
    measures: &[MeasureKind],
    obs: &ObservationSet,
) -> Result<SweepResult, SweepError> {
    if obs.is_empty() {
        return Err(SweepError::NoObservations);
    }
    obs.validate_against(net)?;
    let tables = analyze(net, req)?;

    let mut cells = Vec::new();
    for &metric in &req.metrics {
        for &measure in measures {
            let mut row_cells = Vec::new();
            for &radius in &req.radii {
                let table = tables
                    .iter()
                    .find(|t| {
                        t.metric == metric && t.radius.as_f64() == radius.as_f64()
                    })
                    .expect("table per grid cell");
                let values = series_map(table, measure);
                let (fit, note) = match loglog_r2(obs, &values) {
                    Ok(fit) => (Some(fit), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                row_cells.push(SweepCell {
                    measure,
                    metric,
                    radius,
                    fit,
                    note,
                    best_radius: false,
                });
            }
            // Flag the best radius in this row: max r2, ties to the smaller
            // radius.
            let mut best: Option<usize> = None;
            for (i, cell) in row_cells.iter().enumerate() {
                if let Some(fit) = &cell.fit {
                    let better = match best {
                        None => true,
                        Some(j) => {
                            let cur = row_cells[j].fit.as_ref().unwrap();
                            fit.r2 > cur.r2
                                || (fit.r2 == cur.r2
                                    && cell.radius.as_f64() < row_cells[j].radius.as_f64())
                        }
                    };
                    if better {
                        best = Some(i);
                    }
                }
            }
            if let Some(j) = best {
                row_cells[j].best_radius = true;
            }
            cells.extend(row_cells);
        }
    }
    Ok(SweepResult { cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XcorrCell {
    pub r2: f64,
    pub p_value: f64,
    pub n_used: usize,
    pub n_dropped: usize,
}

/// Symmetric r-squared matrix between per-link centrality series of several
/// metrics at one radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XcorrResult {
    pub measure: MeasureKind,
    pub radius: Radius,
    pub metrics: Vec<Metric>,
    /// cells[i][j]; None marks a degenerate pair (zero variance or too few
    /// usable links).
    pub cells: Vec<Vec<Option<XcorrCell>>>,
}

impl XcorrResult {
    pub fn r2(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i][j].map(|c| c.r2)
    }
}

/// Pairwise drop rule: a link enters a pair's fit only with positive,
/// finite values in both series. The diagonal is exactly 1.
pub fn cross_correlation_matrix(
    net: &Network,
    req: &AnalysisRequest,
    measure: MeasureKind,
    radius: Radius,
) -> Result<XcorrResult, SweepError> {
    let mut single = req.clone();
    single.radii = vec![radius];
    let tables = analyze(net, &single)?;
    let series: Vec<Vec<f64>> = req
        .metrics
        .iter()
        .map(|m| {
            let table = tables
                .iter()
                .find(|t| t.metric == *m)
                .expect("table per metric");
            table.rows.iter().map(|r| measure.value(r)).collect()
        })
        .collect();

    let k = req.metrics.len();
    let n_links = net.links().len();
    let mut cells: Vec<Vec<Option<XcorrCell>>> = vec![vec![None; k]; k];
    for i in 0..k {
        let positive = series[i].iter().filter(|v| **v > 0.0 && v.is_finite()).count();
        cells[i][i] = Some(XcorrCell {
            r2: 1.0,
            p_value: 0.0,
            n_used: positive,
            n_dropped: n_links - positive,
        });
        for j in i + 1..k {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut n_dropped = 0usize;
            for l in 0..n_links {
                let a = series[i][l];
                let b = series[j][l];
                if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
                    xs.push(a.ln());
                    ys.push(b.ln());
                } else {
                    n_dropped += 1;
                }
            }
            let cell = if xs.len() < 3 {
                None
            } else {
                pearson(&xs, &ys).ok().map(|corr| XcorrCell {
                    r2: corr.r2,
                    p_value: corr.p_value,
                    n_used: corr.n,
                    n_dropped,
                })
            };
            cells[i][j] = cell;
            cells[j][i] = cell;
        }
    }
    Ok(XcorrResult {
        measure,
        radius,
        metrics: req.metrics.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Polyline3, Vec3};
    use crate::network::{LinkRecord, Network};

    fn obs_from(pairs: &[(&str, f64)]) -> ObservationSet {
        ObservationSet {
            flows: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            period: None,
        }
    }

    fn values_from(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn exact_power_law_gives_unit_r2() {
        let e = std::f64::consts::E;
        let obs = obs_from(&[("a", e), ("b", e * e), ("c", e * e * e)]);
        let values = values_from(&[("a", e.powi(2)), ("b", e.powi(4)), ("c", e.powi(6))]);
        let fit = loglog_r2(&obs, &values).unwrap();
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.n_used, 3);
        assert_eq!(fit.n_dropped, 0);
    }

    #[test]
    fn nonpositive_observations_are_dropped_and_counted() {
        let obs = obs_from(&[("a", 0.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)]);
        let values = values_from(&[("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 5.0)]);
        let fit = loglog_r2(&obs, &values).unwrap();
        assert_eq!(fit.n_dropped, 1);
        assert_eq!(fit.n_used, 3);
        assert_eq!(fit.n_used + fit.n_dropped, obs.len());
    }

    #[test]
    fn too_few_pairs_is_an_error() {
        let obs = obs_from(&[("a", 1.0), ("b", 2.0)]);
        let values = values_from(&[("a", 1.0), ("b", 2.0)]);
        assert_eq!(
            loglog_r2(&obs, &values),
            Err(StatsError::TooFewPairs { needed: 3, got: 2 })
        );
    }

    #[test]
    fn zero_variance_is_an_error() {
        let obs = obs_from(&[("a", 2.0), ("b", 2.0), ("c", 2.0)]);
        let values = values_from(&[("a", 1.0), ("b", 2.0), ("c", 3.0)]);
        assert_eq!(
            loglog_r2(&obs, &values),
            Err(StatsError::ZeroVariance("observations".to_string()))
        );
    }

    #[test]
    fn star_thresholds() {
        assert_eq!(stars(0.005), "**");
        assert_eq!(stars(0.01), "**");
        assert_eq!(stars(0.03), "*");
        assert_eq!(stars(0.05), "*");
        assert_eq!(stars(0.06), "");
    }

    fn chain(n: usize) -> Network {
        let records = (0..n)
            .map(|i| {
                LinkRecord::new(
                    format!("L{i:02}"),
                    Polyline3::new(
                        vec![
                            Vec3::new(i as f64 * 10.0, 0.0, 0.0),
                            Vec3::new((i + 1) as f64 * 10.0, 0.0, 0.0),
                        ],
                        0.0,
                    )
                    .unwrap(),
                )
            })
            .collect();
        Network::build(records, 0.01).unwrap()
    }

    #[test]
    fn sweep_has_full_grid_shape() {
        let net = chain(5);
        let obs = obs_from(&[
            ("L00", 10.0),
            ("L01", 25.0),
            ("L02", 30.0),
            ("L03", 22.0),
            ("L04", 9.0),
        ]);
        let mut req = AnalysisRequest::new(
            vec![Metric::Angular, Metric::Euclidean, Metric::Hybrid { a: 0.5 }],
            vec![
                Radius::Finite(400.0),
                Radius::Finite(500.0),
                Radius::Finite(600.0),
            ],
        );
        req.noise_floor_deg = 0.0;
        let result = sweep(
            &net,
            &req,
            &[MeasureKind::Betweenness, MeasureKind::Closeness],
            &obs,
        )
        .unwrap();
        assert_eq!(result.cells.len(), 18);
        // One best-radius flag per (measure, metric) row with any fit.
        for metric in &req.metrics {
            for measure in [MeasureKind::Betweenness, MeasureKind::Closeness] {
                let row: Vec<&SweepCell> = result
                    .cells
                    .iter()
                    .filter(|c| c.metric == *metric && c.measure == measure)
                    .collect();
                assert_eq!(row.len(), 3);
                if row.iter().any(|c| c.fit.is_some()) {
                    assert_eq!(row.iter().filter(|c| c.best_radius).count(), 1);
                }
            }
        }
    }

    #[test]
    fn sweep_with_constant_observations_completes_with_flags() {
        let net = chain(4);
        let obs = obs_from(&[("L00", 5.0), ("L01", 5.0), ("L02", 5.0), ("L03", 5.0)]);
        let mut req = AnalysisRequest::new(vec![Metric::Euclidean], vec![Radius::Infinite]);
        req.noise_floor_deg = 0.0;
        let result = sweep(&net, &req, &[MeasureKind::Betweenness], &obs).unwrap();
        assert_eq!(result.cells.len(), 1);
        assert!(result.cells[0].fit.is_none());
        assert!(result.cells[0].note.as_deref().unwrap().contains("variance"));
        assert!(!result.cells[0].best_radius);
    }

    #[test]
    fn sweep_perfect_correlation_marks_best_radius() {
        // Feed betweenness itself back as the observation: the log fit is
        // exact wherever values are positive.
        let net = chain(5);
        let mut req = AnalysisRequest::new(vec![Metric::Euclidean], vec![Radius::Infinite]);
        req.noise_floor_deg = 0.0;
        let table = analyze(&net, &req).unwrap().remove(0);
        let obs = ObservationSet {
            flows: table
                .rows
                .iter()
                .map(|r| (r.id.clone(), r.betweenness))
                .collect(),
            period: None,
        };
        let result = sweep(&net, &req, &[MeasureKind::Betweenness], &obs).unwrap();
        let cell = &result.cells[0];
        let fit = cell.fit.as_ref().unwrap();
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!(cell.best_radius);
    }

    #[test]
    fn sweep_rejects_unknown_ids() {
        let net = chain(4);
        let obs = obs_from(&[("nope", 1.0)]);
        let req = AnalysisRequest::new(vec![Metric::Euclidean], vec![Radius::Infinite]);
        assert!(matches!(
            sweep(&net, &req, &[MeasureKind::Closeness], &obs),
            Err(SweepError::UnknownObservationLink(_))
        ));
    }

    #[test]
    fn xcorr_diagonal_and_endpoint_identity() {
        let net = chain(6);
        let mut req = AnalysisRequest::new(
            vec![
                Metric::Angular,
                Metric::Euclidean,
                Metric::Hybrid { a: 1.0 },
                Metric::Hybrid { a: 0.5 },
            ],
            vec![Radius::Infinite],
        );
        req.noise_floor_deg = 0.0;
        let m = cross_correlation_matrix(&net, &req, MeasureKind::Betweenness, Radius::Infinite)
            .unwrap();
        for i in 0..4 {
            assert_eq!(m.r2(i, i), Some(1.0));
            for j in 0..4 {
                assert_eq!(m.r2(i, j), m.r2(j, i));
            }
        }
        // hybrid(1) produces the same series as angular, so r2 is exactly 1
        // (here the angular betweenness is constant on a straight chain, so
        // compare euclidean and hybrid(0) instead).
        let m0 = cross_correlation_matrix(
            &net,
            &AnalysisRequest {
                metrics: vec![Metric::Euclidean, Metric::Hybrid { a: 0.0 }],
                ..req.clone()
            },
            MeasureKind::Betweenness,
            Radius::Infinite,
        )
        .unwrap();
        assert_eq!(m0.r2(0, 1), Some(1.0));
    }
}
