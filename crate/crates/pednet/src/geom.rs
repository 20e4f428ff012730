//! 3D vectors and polylines: the geometric carrier of a network link.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite: ({0}, {1}, {2})")]
    NonFinite(f64, f64, f64),
    #[error("polyline needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("degenerate segment between vertices {0} and {1} (separation {2} <= minimum {3})")]
    DegenerateSegment(usize, usize, f64, f64),
    #[error("direction vector is zero")]
    ZeroDirection,
}

/// A point or direction in a projected, metric, right-handed frame; z is elevation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn sub(&self, other: &Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn add(&self, other: &Vec3) -> Vec3 {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn scale(&self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Vec3) -> f64 {
        self.sub(other).norm()
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Length of the horizontal (xy) component.
    pub fn horizontal_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

/// Angle in degrees between two direction vectors, in [0, 180].
///
/// atan2 of cross magnitude against dot keeps near-straight and
/// near-reversed turns well conditioned; the same formula serves horizontal
/// and vertical transitions alike.
pub fn turn_angle_3d(d1: &Vec3, d2: &Vec3) -> Result<f64, GeometryError> {
    if d1.dot(d1) == 0.0 || d2.dot(d2) == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    Ok(d1.cross(d2).norm().atan2(d1.dot(d2)).to_degrees())
}

/// Ordered 3D vertex chain with at least two distinct vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline3 {
    vertices: Vec<Vec3>,
}

impl Polyline3 {
    /// Builds a polyline, rejecting non-finite coordinates and segments
    /// shorter than `min_separation` (pass the snap tolerance, or 0 to
    /// require only strictly positive segments).
    pub fn new(vertices: Vec<Vec3>, min_separation: f64) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        for v in &vertices {
            if !v.is_finite() {
                return Err(GeometryError::NonFinite(v.x, v.y, v.z));
            }
        }
        for i in 1..vertices.len() {
            let sep = vertices[i - 1].distance(&vertices[i]);
            if sep <= min_separation {
                return Err(GeometryError::DegenerateSegment(
                    i - 1,
                    i,
                    sep,
                    min_separation,
                ));
            }
        }
        Ok(Polyline3 { vertices })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn first(&self) -> &Vec3 {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Vec3 {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Sum of 3D segment lengths.
    pub fn length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| w[0].distance(&w[1]))
            .sum()
    }

    /// Direction of the first segment (unnormalized).
    pub fn initial_direction(&self) -> Vec3 {
        self.vertices[1].sub(&self.vertices[0])
    }

    /// Direction of the last segment (unnormalized).
    pub fn terminal_direction(&self) -> Vec3 {
        let n = self.vertices.len();
        self.vertices[n - 1].sub(&self.vertices[n - 2])
    }

    /// Cumulative 3D angular change in degrees: the sum over interior
    /// vertices of the turn between consecutive segment directions.
    /// A single turn below `noise_floor_deg` counts as zero.
    pub fn cumulative_angular_change(&self, noise_floor_deg: f64) -> f64 {
        self.interior_turns(noise_floor_deg).map(|(_, t)| t).sum()
    }

    /// Interior turns as (arc length at the vertex, turn in degrees),
    /// with the noise floor already applied.
    pub fn interior_turns(
        &self,
        noise_floor_deg: f64,
    ) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mut arc = 0.0;
        (1..self.vertices.len() - 1).map(move |i| {
            arc += self.vertices[i - 1].distance(&self.vertices[i]);
            let d1 = self.vertices[i].sub(&self.vertices[i - 1]);
            let d2 = self.vertices[i + 1].sub(&self.vertices[i]);
            // Segments are validated non-degenerate, so directions are nonzero.
            let turn = turn_angle_3d(&d1, &d2).unwrap_or(0.0);
            let turn = if turn < noise_floor_deg { 0.0 } else { turn };
            (arc, turn)
        })
    }

    /// Point at half the total arc length.
    pub fn midpoint(&self) -> Vec3 {
        let half = self.length() * 0.5;
        let mut arc = 0.0;
        for w in self.vertices.windows(2) {
            let seg = w[0].distance(&w[1]);
            if arc + seg >= half {
                let t = (half - arc) / seg;
                return w[0].add(&w[1].sub(&w[0]).scale(t));
            }
            arc += seg;
        }
        *self.last()
    }

    /// Reversed copy.
    pub fn reversed(&self) -> Polyline3 {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline3 { vertices }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(pts: &[(f64, f64, f64)]) -> Polyline3 {
        let v = pts.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect();
        Polyline3::new(v, 0.0).unwrap()
    }

    #[test]
    fn length_straight_chain() {
        assert_eq!(pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0), (20.0, 0.0, 0.0)]).length(), 20.0);
    }

    #[test]
    fn length_three_four_five() {
        assert_eq!(pl(&[(0.0, 0.0, 0.0), (3.0, 4.0, 0.0)]).length(), 5.0);
    }

    #[test]
    fn length_counts_vertical_leg() {
        assert_eq!(pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0), (10.0, 0.0, 10.0)]).length(), 20.0);
    }

    #[test]
    fn turn_angle_identity() {
        let d = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(turn_angle_3d(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn turn_angle_orthogonal() {
        let a = turn_angle_3d(&Vec3::new(1.0, 0.0, 0.0), &Vec3::new(0.0, 1.0, 0.0)).unwrap();
        assert!((a - 90.0).abs() < 1e-12);
    }

    #[test]
    fn turn_angle_horizontal_to_slope() {
        let a = turn_angle_3d(&Vec3::new(1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 1.0)).unwrap();
        assert!((a - 45.0).abs() < 1e-12);
    }

    #[test]
    fn turn_angle_zero_vector_rejected() {
        let err = turn_angle_3d(&Vec3::new(0.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(err, Err(GeometryError::ZeroDirection));
    }

    #[test]
    fn cumulative_angle_straight() {
        assert_eq!(
            pl(&[(0.0, 0.0, 0.0), (5.0, 0.0, 0.0), (10.0, 0.0, 0.0)]).cumulative_angular_change(0.0),
            0.0
        );
    }

    #[test]
    fn cumulative_angle_l_shape() {
        let a = pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0), (10.0, 10.0, 0.0)])
            .cumulative_angular_change(0.0);
        assert!((a - 90.0).abs() < 1e-12);
    }

    #[test]
    fn cumulative_angle_stair_run() {
        // flat, 45 up over a 5 m rise, flat again: 45 + 45
        let a = pl(&[
            (0.0, 0.0, 0.0),
            (10.0, 0.0, 0.0),
            (15.0, 0.0, 5.0),
            (25.0, 0.0, 5.0),
        ])
        .cumulative_angular_change(0.0);
        assert!((a - 90.0).abs() < 1e-12);
    }

    #[test]
    fn noise_floor_zeroes_small_turns() {
        let p = pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0), (20.0, 0.05, 0.0)]);
        assert!(p.cumulative_angular_change(0.0) > 0.0);
        assert_eq!(p.cumulative_angular_change(0.5), 0.0);
    }

    #[test]
    fn midpoint_inside_segment() {
        let p = pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0)]);
        assert_eq!(p.midpoint(), Vec3::new(5.0, 0.0, 0.0));
    }

    #[test]
    fn midpoint_on_vertex() {
        let p = pl(&[(0.0, 0.0, 0.0), (10.0, 0.0, 0.0), (10.0, 10.0, 0.0)]);
        assert_eq!(p.midpoint(), Vec3::new(10.0, 0.0, 0.0));
    }

    #[test]
    fn rejects_duplicate_consecutive_vertices() {
        let v = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 0.0)];
        assert!(matches!(
            Polyline3::new(v, 0.0),
            Err(GeometryError::DegenerateSegment(0, 1, _, _))
        ));
    }

    #[test]
    fn rejects_single_vertex() {
        let v = vec![Vec3::new(0.0, 0.0, 0.0)];
        assert_eq!(Polyline3::new(v, 0.0), Err(GeometryError::TooFewVertices(1)));
    }

    #[test]
    fn rejects_non_finite() {
        let v = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(f64::NAN, 0.0, 0.0)];
        assert!(matches!(Polyline3::new(v, 0.0), Err(GeometryError::NonFinite(..))));
    }
}
