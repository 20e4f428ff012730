//! Observed flow CSV: `link_id,flow` with an optional `period` column.
//! When several rows share a link (one per survey period), their mean is
//! used, which matches averaging counts across periods.

use std::collections::BTreeMap;

use super::IoError;
use crate::stats::ObservationSet;

pub fn parse_observations(text: &str) -> Result<ObservationSet, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let has_period;
    {
        let headers: Vec<&str> = reader.headers()?.iter().collect();
        match headers.as_slice() {
            ["link_id", "flow"] => has_period = false,
            ["link_id", "flow", "period"] => has_period = true,
            got => {
                return Err(IoError::format(
                    "header",
                    format!("expected link_id,flow[,period], got {got:?}"),
                ))
            }
        }
    }
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    let mut periods: Vec<String> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let context = format!("row {}", line + 2);
        let id = record
            .get(0)
            .ok_or_else(|| IoError::format(&context, "missing link_id"))?
            .to_string();
        let flow: f64 = record
            .get(1)
            .ok_or_else(|| IoError::format(&context, "missing flow"))?
            .trim()
            .parse()
            .map_err(|_| IoError::format(&context, "flow must be a number"))?;
        if !(flow >= 0.0) {
            return Err(IoError::format(
                &context,
                format!("flow must be >= 0, got {flow}"),
            ));
        }
        if has_period {
            if let Some(p) = record.get(2) {
                if !p.is_empty() && !periods.iter().any(|q| q == p) {
                    periods.push(p.to_string());
                }
            }
        }
        let entry = sums.entry(id).or_insert((0.0, 0));
        entry.0 += flow;
        entry.1 += 1;
    }
    let flows = sums
        .into_iter()
        .map(|(id, (sum, count))| (id, sum / count as f64))
        .collect();
    let period = match periods.len() {
        0 => None,
        1 => Some(periods.remove(0)),
        n => Some(format!("mean of {n} periods")),
    };
    Ok(ObservationSet { flows, period })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_flows() {
        let obs = parse_observations("link_id,flow\na,120\nb,45.5\n").unwrap();
        assert_eq!(obs.flows["a"], 120.0);
        assert_eq!(obs.flows["b"], 45.5);
        assert_eq!(obs.period, None);
    }

    #[test]
    fn averages_rows_sharing_a_link() {
        let text = "link_id,flow,period\na,100,am\na,200,pm\nb,50,am\n";
        let obs = parse_observations(text).unwrap();
        assert_eq!(obs.flows["a"], 150.0);
        assert_eq!(obs.flows["b"], 50.0);
        assert_eq!(obs.period.as_deref(), Some("mean of 2 periods"));
    }

    #[test]
    fn rejects_negative_flow() {
        assert!(parse_observations("link_id,flow\na,-1\n").is_err());
    }

    #[test]
    fn rejects_unknown_header() {
        assert!(parse_observations("id,count\na,1\n").is_err());
    }
}
