//! Finite distance-preserving bijections between balls of the tree, with a
//! JSON interchange format validated on load.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::field::Field;
use crate::gl2::Mat2;
use crate::tree::{act, ball, distance, edge_ball, Edge, Vertex};

use super::GeoError;

/// Center of a ball domain: a vertex or an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallCenter {
    Vertex(Vertex),
    Edge(Edge),
}

impl BallCenter {
    pub fn ball(&self, radius: u64) -> Vec<Vertex> {
        match self {
            BallCenter::Vertex(v) => ball(v, radius),
            BallCenter::Edge(e) => edge_ball(e, radius),
        }
    }
}

/// A distance-preserving bijection defined on a finite ball, mapping onto a
/// ball of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalAut {
    center: BallCenter,
    radius: u64,
    map: BTreeMap<Vertex, Vertex>,
}

impl LocalAut {
    /// Validates domain coverage, bijectivity, adjacency preservation, and
    /// that the image is the matching ball around the image center.
    pub fn new(
        center: BallCenter,
        radius: u64,
        pairs: Vec<(Vertex, Vertex)>,
    ) -> Result<LocalAut, GeoError> {
        let domain = center.ball(radius);
        let map: BTreeMap<Vertex, Vertex> = pairs.into_iter().collect();
        if map.len() != domain.len() || !domain.iter().all(|v| map.contains_key(v)) {
            return Err(GeoError::InvalidLocalAut(format!(
                "domain must be exactly the ball of radius {radius} ({} vertices)",
                domain.len()
            )));
        }
        let mut images: Vec<&Vertex> = map.values().collect();
        images.sort();
        images.dedup();
        if images.len() != map.len() {
            return Err(GeoError::InvalidLocalAut("mapping is not injective".into()));
        }
        // adjacency preservation on the domain
        for (v, fv) in &map {
            for n in crate::tree::neighbors(v) {
                if let Some(fn_) = map.get(&n) {
                    if distance(fv, fn_) != 1 {
                        return Err(GeoError::InvalidLocalAut(format!(
                            "adjacency broken at {v} - {n}"
                        )));
                    }
                }
            }
        }
        // image must be the ball of the same radius around the image center
        let image_center = match &center {
            BallCenter::Vertex(v) => BallCenter::Vertex(map[v].clone()),
            BallCenter::Edge(e) => {
                let (a, b) = e.endpoints();
                BallCenter::Edge(
                    Edge::new(map[a].clone(), map[b].clone())
                        .map_err(|_| GeoError::InvalidLocalAut("center edge image is not an edge".into()))?,
                )
            }
        };
        let mut image_ball = image_center.ball(radius);
        image_ball.sort();
        let mut actual: Vec<Vertex> = map.values().cloned().collect();
        actual.sort();
        if image_ball != actual {
            return Err(GeoError::InvalidLocalAut(
                "image is not a ball of the same radius".into(),
            ));
        }
        Ok(LocalAut { center, radius, map })
    }

    /// Restriction of a matrix action to the ball around `center`.
    pub fn restriction(g: &Mat2, center: BallCenter, radius: u64) -> LocalAut {
        let pairs = center
            .ball(radius)
            .into_iter()
            .map(|v| {
                let img = act(g, &v);
                (v, img)
            })
            .collect();
        Self::new(center, radius, pairs).expect("matrix restrictions are valid local automorphisms")
    }

    pub fn center(&self) -> &BallCenter {
        &self.center
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn domain(&self) -> Vec<Vertex> {
        self.map.keys().cloned().collect()
    }

    pub fn get(&self, v: &Vertex) -> Option<&Vertex> {
        self.map.get(v)
    }

    pub fn to_json(&self) -> Value {
        let center = match &self.center {
            BallCenter::Vertex(v) => json!({ "vertex": v.to_string() }),
            BallCenter::Edge(e) => {
                let (a, b) = e.endpoints();
                json!({ "edge": [a.to_string(), b.to_string()] })
            }
        };
        let map: Vec<Value> = self
            .map
            .iter()
            .map(|(k, v)| json!([k.to_string(), v.to_string()]))
            .collect();
        json!({ "center": center, "radius": self.radius, "map": map })
    }

    pub fn from_json(field: Field, text: &str) -> Result<LocalAut, GeoError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| GeoError::InvalidLocalAut(format!("bad JSON: {e}")))?;
        let center_v = value
            .get("center")
            .ok_or_else(|| GeoError::InvalidLocalAut("missing center".into()))?;
        let center = if let Some(v) = center_v.get("vertex") {
            let s = v
                .as_str()
                .ok_or_else(|| GeoError::InvalidLocalAut("center vertex must be a string".into()))?;
            BallCenter::Vertex(field.parse_vertex(s)?)
        } else if let Some(e) = center_v.get("edge") {
            let arr = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GeoError::InvalidLocalAut("center edge must be a pair".into()))?;
            let a = field.parse_vertex(arr[0].as_str().unwrap_or_default())?;
            let b = field.parse_vertex(arr[1].as_str().unwrap_or_default())?;
            BallCenter::Edge(Edge::new(a, b)?)
        } else {
            return Err(GeoError::InvalidLocalAut(
                "center must have a vertex or edge key".into(),
            ));
        };
        let radius = value
            .get("radius")
            .and_then(Value::as_u64)
            .ok_or_else(|| GeoError::InvalidLocalAut("missing radius".into()))?;
        let map_v = value
            .get("map")
            .and_then(Value::as_array)
            .ok_or_else(|| GeoError::InvalidLocalAut("missing map".into()))?;
        let mut pairs = Vec::with_capacity(map_v.len());
        for entry in map_v {
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GeoError::InvalidLocalAut("map entries must be pairs".into()))?;
            let k = field.parse_vertex(pair[0].as_str().unwrap_or_default())?;
            let v = field.parse_vertex(pair[1].as_str().unwrap_or_default())?;
            pairs.push((k, v));
        }
        Self::new(center, radius, pairs)
    }
}
