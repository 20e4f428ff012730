//! 3D GeoJSON network format: a FeatureCollection of LineString features
//! with 3-element positions and properties `id` (required string), `tags`
//! (array of strings), `angular_override_deg` (number), `weight` (number).
//! 2D positions are accepted with z = 0 and reported as a warning, which
//! reproduces flat and 2.5D data as degenerate 3D.

use serde_json::{json, Map, Value};

use super::IoError;
use crate::geom::{Polyline3, Vec3};
use crate::network::{LinkRecord, Network};

pub fn parse_geojson(text: &str) -> Result<(Vec<LinkRecord>, Vec<String>), IoError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| IoError::format("document", "not a JSON object"))?;
    if obj.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(IoError::format("document", "type must be FeatureCollection"));
    }
    let features = obj
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::format("document", "missing features array"))?;

    let mut records = Vec::with_capacity(features.len());
    let mut flat_positions = 0usize;
    for (index, feature) in features.iter().enumerate() {
        let feature = feature
            .as_object()
            .ok_or_else(|| IoError::feature(index, "not an object"))?;
        let geometry = feature
            .get("geometry")
            .and_then(Value::as_object)
            .ok_or_else(|| IoError::feature(index, "missing geometry"))?;
        if geometry.get("type").and_then(Value::as_str) != Some("LineString") {
            return Err(IoError::feature(index, "geometry type must be LineString"));
        }
        let coordinates = geometry
            .get("coordinates")
            .and_then(Value::as_array)
            .ok_or_else(|| IoError::feature(index, "missing coordinates"))?;
        let mut vertices = Vec::with_capacity(coordinates.len());
        for (ci, position) in coordinates.iter().enumerate() {
            let nums = position
                .as_array()
                .ok_or_else(|| IoError::feature(index, format!("position {ci} not an array")))?;
            if nums.len() != 2 && nums.len() != 3 {
                return Err(IoError::feature(
                    index,
                    format!("position {ci} must have 2 or 3 elements, has {}", nums.len()),
                ));
            }
            let coord = |k: usize| -> Result<f64, IoError> {
                nums[k].as_f64().ok_or_else(|| {
                    IoError::feature(index, format!("position {ci} element {k} not a number"))
                })
            };
            let z = if nums.len() == 3 {
                coord(2)?
            } else {
                flat_positions += 1;
                0.0
            };
            vertices.push(Vec3::new(coord(0)?, coord(1)?, z));
        }
        let geometry = Polyline3::new(vertices, 0.0)
            .map_err(|e| IoError::feature(index, format!("bad geometry: {e}")))?;

        let empty = Map::new();
        let props = feature
            .get("properties")
            .and_then(Value::as_object)
            .unwrap_or(&empty);
        let id = props
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| IoError::feature(index, "missing required string property `id`"))?
            .to_string();
        let mut record = LinkRecord::new(id, geometry);
        if let Some(tags) = props.get("tags") {
            let tags = tags
                .as_array()
                .ok_or_else(|| IoError::feature(index, "`tags` must be an array of strings"))?;
            for tag in tags {
                let tag = tag
                    .as_str()
                    .ok_or_else(|| IoError::feature(index, "`tags` must be an array of strings"))?;
                record.tags.insert(tag.to_string());
            }
        }
        if let Some(v) = props.get("angular_override_deg") {
            let deg = v
                .as_f64()
                .ok_or_else(|| IoError::feature(index, "`angular_override_deg` must be a number"))?;
            record.angular_override_deg = Some(deg);
        }
        if let Some(v) = props.get("weight") {
            let w = v
                .as_f64()
                .ok_or_else(|| IoError::feature(index, "`weight` must be a number"))?;
            record.weight = w;
        }
        records.push(record);
    }

    let mut warnings = Vec::new();
    if flat_positions > 0 {
        warnings.push(format!(
            "{flat_positions} position(s) had no z coordinate; treated as z = 0"
        ));
    }
    Ok((records, warnings))
}

/// Writes a network back out; coordinates use the shortest round-trip float
/// form, so reloading reproduces the exact same geometry.
pub fn network_to_geojson(net: &Network) -> String {
    let features: Vec<Value> = net
        .links()
        .iter()
        .map(|link| {
            let coordinates: Vec<Value> = link
                .geometry
                .vertices()
                .iter()
                .map(|v| json!([v.x, v.y, v.z]))
                .collect();
            let mut props = Map::new();
            props.insert("id".to_string(), json!(link.id));
            if !link.tags.is_empty() {
                let tags: Vec<&String> = link.tags.iter().collect();
                props.insert("tags".to_string(), json!(tags));
            }
            if let Some(deg) = link.angular_override_deg {
                props.insert("angular_override_deg".to_string(), json!(deg));
            }
            props.insert("weight".to_string(), json!(link.weight));
            json!({
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": coordinates,
                },
                "properties": Value::Object(props),
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({
        "type": "FeatureCollection",
        "features": features,
    }))
    .expect("geojson serialization")
}
