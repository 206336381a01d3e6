//! JSON and CSV persistence.

use serde::{Deserialize, Serialize};

use crate::affine_plane::Point;
use crate::delzant::DelzantPolygon;
use crate::error::Error;

/// Wire form of a polygon: `{"vertices": [["p/q", "p/q"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<Point>,
}

impl TryFrom<PolygonJson> for DelzantPolygon {
    type Error = Error;
    fn try_from(p: PolygonJson) -> Result<Self, Error> {
        DelzantPolygon::new(p.vertices)
    }
}

impl From<DelzantPolygon> for PolygonJson {
    fn from(p: DelzantPolygon) -> Self {
        PolygonJson { vertices: p.vertices().to_vec() }
    }
}

use std::fs;
use std::path::Path;

use crate::atf_base::BaseDiagram;
use crate::error::Result;
use crate::exact_arith::QField;
use crate::orbit::Histogram;
use crate::recurrence_map::LevelCurve;

pub fn read_polygon(path: &Path) -> Result<DelzantPolygon> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn polygon_to_json(poly: &DelzantPolygon) -> String {
    serde_json::to_string_pretty(poly).expect("polygon serializes")
}

pub fn read_diagram(path: &Path) -> Result<BaseDiagram> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn diagram_to_json(d: &BaseDiagram) -> String {
    serde_json::to_string_pretty(d).expect("diagram serializes")
}

/// One orbit dump row: iterate index, arc position and the point itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub n: u64,
    pub s: QField,
    pub point: Point,
}

pub fn orbit_rows(curve: &LevelCurve, arcs: &[QField]) -> Vec<OrbitRow> {
    arcs.iter()
        .enumerate()
        .map(|(n, s)| OrbitRow { n: n as u64, s: s.clone(), point: curve.point_at(s) })
        .collect()
}

/// `n,s` header followed by one row per iterate.
pub fn orbit_csv(arcs: &[QField]) -> String {
    let mut out = String::from("n,s\n");
    for (n, s) in arcs.iter().enumerate() {
        out.push_str(&format!("{n},{s}\n"));
    }
    out
}

pub fn orbit_json(rows: &[OrbitRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

pub fn histogram_json(h: &Histogram) -> String {
    serde_json::to_string_pretty(h).expect("histogram serializes")
}
