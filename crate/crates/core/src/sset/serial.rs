//! JSON interchange: `SSX v1` for simplicial sets and maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sset::product::DEFAULT_TOP_DIM_CAP;
use crate::sset::{Cell, SimplexRef, SimplicialMap, SimplicialSet};

pub const SSX_SCHEMA: &str = "SSX v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefJson {
    pub dim: usize,
    pub id: String,
    pub epi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsxJson {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub top_dim: usize,
    pub cells: Vec<Vec<String>>,
    pub faces: BTreeMap<String, Vec<RefJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub source: SsxJson,
    pub target: SsxJson,
    pub assignment: BTreeMap<String, RefJson>,
}

fn default_schema() -> String {
    SSX_SCHEMA.to_string()
}

fn ser_err(msg: impl Into<String>) -> Error {
    Error::Serialization(msg.into())
}

fn ref_to_json(k: &SimplicialSet, r: SimplexRef) -> RefJson {
    RefJson { dim: r.dim(), id: k.label(r.base_dim(), r.id()).to_string(), epi: r.epi_positions() }
}

fn ref_from_json(r: &RefJson, ids: &HashMap<&str, (usize, usize)>) -> Result<SimplexRef> {
    let &(d, id) = ids.get(r.id.as_str()).ok_or_else(|| ser_err(format!("unknown simplex id {:?}", r.id)))?;
    if r.dim < d || r.dim - d != r.epi.len() {
        return Err(ser_err(format!("reference to {:?} has inconsistent dimension {}", r.id, r.dim)));
    }
    SimplexRef::from_positions(r.dim, id, &r.epi).map_err(|e| ser_err(e.to_string()))
}

pub fn to_json(k: &SimplicialSet) -> SsxJson {
    let cells = k.cells().iter().map(|level| level.iter().map(|c| c.label.clone()).collect()).collect();
    let mut faces = BTreeMap::new();
    for level in k.cells().iter().skip(1) {
        for c in level {
            faces.insert(c.label.clone(), c.faces.iter().map(|&f| ref_to_json(k, f)).collect());
        }
    }
    SsxJson { schema: SSX_SCHEMA.to_string(), top_dim: k.top_dim(), cells, faces }
}

pub fn from_json(j: &SsxJson) -> Result<SimplicialSet> {
    from_json_with_cap(j, DEFAULT_TOP_DIM_CAP)
}

pub fn from_json_with_cap(j: &SsxJson, cap: usize) -> Result<SimplicialSet> {
    if j.schema != SSX_SCHEMA {
        return Err(ser_err(format!("unsupported schema {:?}", j.schema)));
    }
    if j.top_dim > cap {
        return Err(Error::DimensionCap { dim: j.top_dim, cap });
    }
    if j.cells.len() != j.top_dim + 1 {
        return Err(ser_err(format!("top_dim {} but {} cell levels", j.top_dim, j.cells.len())));
    }
    let mut ids: HashMap<&str, (usize, usize)> = HashMap::new();
    for (d, level) in j.cells.iter().enumerate() {
        for (id, name) in level.iter().enumerate() {
            if name.is_empty() || ids.insert(name.as_str(), (d, id)).is_some() {
                return Err(ser_err(format!("duplicate or empty simplex id {name:?}")));
            }
        }
    }
    for name in j.faces.keys() {
        match ids.get(name.as_str()) {
            Some(&(d, _)) if d > 0 => {}
            _ => return Err(ser_err(format!("face entry for unknown or 0-dimensional id {name:?}"))),
        }
    }
    let mut cells = Vec::with_capacity(j.cells.len());
    for (d, level) in j.cells.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for name in level {
            let faces = if d == 0 {
                Vec::new()
            } else {
                let fs = j.faces.get(name).ok_or_else(|| ser_err(format!("missing faces for {name:?}")))?;
                fs.iter().map(|f| ref_from_json(f, &ids)).collect::<Result<Vec<_>>>()?
            };
            row.push(Cell::new(name.clone(), faces));
        }
        cells.push(row);
    }
    let k = SimplicialSet::new(cells)?;
    if k.top_dim() != j.top_dim {
        return Err(ser_err(format!("top_dim {} has no simplices", j.top_dim)));
    }
    Ok(k)
}

pub fn to_string(k: &SimplicialSet) -> String {
    serde_json::to_string_pretty(&to_json(k)).expect("serializable")
}

pub fn from_str(s: &str) -> Result<SimplicialSet> {
    let j: SsxJson = serde_json::from_str(s).map_err(|e| ser_err(e.to_string()))?;
    from_json(&j)
}

pub fn map_to_json(f: &SimplicialMap) -> MapJson {
    let mut assignment = BTreeMap::new();
    for (d, level) in f.assignment().iter().enumerate() {
        for (id, &img) in level.iter().enumerate() {
            assignment.insert(f.source().label(d, id).to_string(), ref_to_json(f.target(), img));
        }
    }
    MapJson { source: to_json(f.source()), target: to_json(f.target()), assignment }
}

pub fn map_from_json(j: &MapJson) -> Result<SimplicialMap> {
    let source = Arc::new(from_json(&j.source)?);
    let target = Arc::new(from_json(&j.target)?);
    let ids: HashMap<&str, (usize, usize)> = target
        .cells()
        .iter()
        .enumerate()
        .flat_map(|(d, level)| level.iter().enumerate().map(move |(id, c)| (c.label.as_str(), (d, id))))
        .collect();
    if j.assignment.len() != source.total_cells() {
        return Err(ser_err("assignment must cover every nondegenerate source simplex"));
    }
    let mut assignment = Vec::with_capacity(source.counts().len());
    for (d, level) in source.cells().iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for c in level {
            let r = j.assignment.get(&c.label).ok_or_else(|| ser_err(format!("no image for {:?}", c.label)))?;
            if r.dim != d {
                return Err(ser_err(format!("image of {:?} has dimension {}", c.label, r.dim)));
            }
            row.push(ref_from_json(r, &ids)?);
        }
        assignment.push(row);
    }
    SimplicialMap::new(source, target, assignment)
}

pub fn map_to_string(f: &SimplicialMap) -> String {
    serde_json::to_string_pretty(&map_to_json(f)).expect("serializable")
}

pub fn map_from_str(s: &str) -> Result<SimplicialMap> {
    let j: MapJson = serde_json::from_str(s).map_err(|e| ser_err(e.to_string()))?;
    map_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::colimit::sphere;
    use crate::sset::standard::{horn_inclusion, simplex};

    #[test]
    fn round_trip_is_exact() {
        for k in [simplex(0), simplex(3), sphere(2), SimplicialSet::empty()] {
            let s = to_string(&k);
            let back = from_str(&s).unwrap();
            assert_eq!(back, k);
            assert_eq!(to_string(&back), s);
        }
    }

    #[test]
    fn map_round_trip() {
        let f = horn_inclusion(3, 1).unwrap();
        let s = map_to_string(&f);
        let g = map_from_str(&s).unwrap();
        assert_eq!(g.assignment(), f.assignment());
        assert_eq!(map_to_string(&g), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_str("{").is_err());
        let mut j = to_json(&simplex(1));
        j.faces.get_mut("01").unwrap()[0].id = "nope".into();
        assert!(matches!(from_json(&j), Err(Error::Serialization(_))));
        let mut j = to_json(&simplex(2));
        j.faces.get_mut("012").unwrap().swap(0, 1);
        assert!(from_json(&j).is_err());
    }
}
