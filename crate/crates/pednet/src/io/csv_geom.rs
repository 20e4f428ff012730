//! Plain CSV geometry format: `link_id,seq,x,y,z` rows, one vertex per row,
//! vertices ordered by `seq` within each link. Tags, overrides and weights
//! are not expressible here; use GeoJSON for those.

use std::collections::BTreeMap;

use super::IoError;
use crate::geom::{Polyline3, Vec3};
use crate::network::{LinkRecord, Network};

pub fn parse_csv_geometry(text: &str) -> Result<Vec<LinkRecord>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    {
        let headers = reader.headers()?;
        let expected = ["link_id", "seq", "x", "y", "z"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(IoError::format(
                "header",
                format!("expected {expected:?}, got {got:?}"),
            ));
        }
    }
    let mut rows: BTreeMap<String, BTreeMap<i64, Vec3>> = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let context = format!("row {}", line + 2);
        let field = |i: usize| -> Result<&str, IoError> {
            record
                .get(i)
                .ok_or_else(|| IoError::format(&context, format!("missing column {i}")))
        };
        let id = field(0)?.to_string();
        let seq: i64 = field(1)?
            .trim()
            .parse()
            .map_err(|_| IoError::format(&context, "seq must be an integer"))?;
        let num = |i: usize, name: &str| -> Result<f64, IoError> {
            field(i)?
                .trim()
                .parse()
                .map_err(|_| IoError::format(&context, format!("{name} must be a number")))
        };
        let v = Vec3::new(num(2, "x")?, num(3, "y")?, num(4, "z")?);
        if rows.entry(id.clone()).or_default().insert(seq, v).is_some() {
            return Err(IoError::format(
                &context,
                format!("duplicate seq {seq} for link `{id}`"),
            ));
        }
    }
    rows.into_iter()
        .map(|(id, vertices)| {
            let vertices: Vec<Vec3> = vertices.into_values().collect();
            let geometry = Polyline3::new(vertices, 0.0)
                .map_err(|e| IoError::format(format!("link `{id}`"), e.to_string()))?;
            Ok(LinkRecord::new(id, geometry))
        })
        .collect()
}

pub fn write_csv_geometry<W: std::io::Write>(out: W, net: &Network) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["link_id", "seq", "x", "y", "z"])?;
    for link in net.links() {
        for (seq, v) in link.geometry.vertices().iter().enumerate() {
            writer.write_record([
                link.id.as_str(),
                &seq.to_string(),
                &format!("{}", v.x),
                &format!("{}", v.y),
                &format!("{}", v.z),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_orders_by_seq() {
        let text = "link_id,seq,x,y,z\na,1,10,0,0\na,0,0,0,0\nb,0,10,0,0\nb,1,10,5,0\n";
        let records = parse_csv_geometry(text).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].id, "a");
        assert_eq!(records[0].geometry.first(), &Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(records[0].geometry.last(), &Vec3::new(10.0, 0.0, 0.0));
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(parse_csv_geometry("id,seq,x,y,z\n").is_err());
    }

    #[test]
    fn rejects_duplicate_seq() {
        let text = "link_id,seq,x,y,z\na,0,0,0,0\na,0,1,0,0\n";
        let err = parse_csv_geometry(text).unwrap_err();
        assert!(err.to_string().contains("duplicate seq"));
    }

    #[test]
    fn round_trips() {
        let text = "link_id,seq,x,y,z\na,0,0,0,0\na,1,10,0,0\nb,0,10,0,0\nb,1,10,5,2.5\n";
        let records = parse_csv_geometry(text).unwrap();
        let net = Network::build(records, 0.01).unwrap();
        let mut buf = Vec::new();
        write_csv_geometry(&mut buf, &net).unwrap();
        let again = parse_csv_geometry(std::str::from_utf8(&buf).unwrap()).unwrap();
        let net2 = Network::build(again, 0.01).unwrap();
        for (a, b) in net.links().iter().zip(net2.links()) {
            assert_eq!(a.geometry.vertices(), b.geometry.vertices());
        }
    }
}
