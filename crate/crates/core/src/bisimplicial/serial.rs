//! JSON interchange: `BSSX v1` for bisimplicial sets and maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bisimplicial::biset::{BiCell, BiSimplexRef, BiSimplicialMap, BiSimplicialSet};
use crate::error::{Error, Result};
use crate::sset::SimplexRef;

pub const BSSX_SCHEMA: &str = "BSSX v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiRefJson {
    pub bidegree: [usize; 2],
    pub id: String,
    pub h_epi: Vec<usize>,
    pub v_epi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BssxJson {
    #[serde(default = "default_schema")]
    pub schema: String,
    /// `cells[p][q]` lists the labels of nondegenerate bisimplices.
    pub cells: Vec<Vec<Vec<String>>>,
    pub h_faces: BTreeMap<String, Vec<BiRefJson>>,
    pub v_faces: BTreeMap<String, Vec<BiRefJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiMapJson {
    pub source: BssxJson,
    pub target: BssxJson,
    pub assignment: BTreeMap<String, BiRefJson>,
}

fn default_schema() -> String {
    BSSX_SCHEMA.to_string()
}

fn ser_err(msg: impl Into<String>) -> Error {
    Error::Serialization(msg.into())
}

fn ref_to_json(x: &BiSimplicialSet, r: BiSimplexRef) -> BiRefJson {
    let (p, q) = r.base_bidegree();
    let (j, k) = r.bidegree();
    BiRefJson {
        bidegree: [j, k],
        id: x.label(p, q, r.id()).to_string(),
        h_epi: r.horizontal().epi_positions(),
        v_epi: r.vertical().epi_positions(),
    }
}

type Ids<'a> = HashMap<&'a str, (usize, usize, usize)>;

fn ids_of(x: &BiSimplicialSet) -> Ids<'_> {
    let mut ids = HashMap::new();
    for (p, row) in x.cells().iter().enumerate() {
        for (q, level) in row.iter().enumerate() {
            for (id, c) in level.iter().enumerate() {
                ids.insert(c.label.as_str(), (p, q, id));
            }
        }
    }
    ids
}

fn ref_from_json(r: &BiRefJson, ids: &Ids<'_>) -> Result<BiSimplexRef> {
    let &(p, q, id) = ids.get(r.id.as_str()).ok_or_else(|| ser_err(format!("unknown bisimplex id {:?}", r.id)))?;
    let [j, k] = r.bidegree;
    if j < p || k < q || j - p != r.h_epi.len() || k - q != r.v_epi.len() {
        return Err(ser_err(format!("reference to {:?} has inconsistent bidegree ({j},{k})", r.id)));
    }
    let h = SimplexRef::from_positions(j, id, &r.h_epi).map_err(|e| ser_err(e.to_string()))?;
    let v = SimplexRef::from_positions(k, id, &r.v_epi).map_err(|e| ser_err(e.to_string()))?;
    Ok(BiSimplexRef::from_parts(h, v, id))
}

pub fn to_json(x: &BiSimplicialSet) -> BssxJson {
    let cells = x.cells().iter().map(|row| row.iter().map(|l| l.iter().map(|c| c.label.clone()).collect()).collect()).collect();
    let mut h_faces = BTreeMap::new();
    let mut v_faces = BTreeMap::new();
    for c in x.cells().iter().flatten().flatten() {
        if !c.h_faces.is_empty() {
            h_faces.insert(c.label.clone(), c.h_faces.iter().map(|&f| ref_to_json(x, f)).collect());
        }
        if !c.v_faces.is_empty() {
            v_faces.insert(c.label.clone(), c.v_faces.iter().map(|&f| ref_to_json(x, f)).collect());
        }
    }
    BssxJson { schema: BSSX_SCHEMA.to_string(), cells, h_faces, v_faces }
}

pub fn from_json(j: &BssxJson) -> Result<BiSimplicialSet> {
    if j.schema != BSSX_SCHEMA {
        return Err(ser_err(format!("unsupported schema {:?}", j.schema)));
    }
    let mut ids: Ids<'_> = HashMap::new();
    for (p, row) in j.cells.iter().enumerate() {
        for (q, level) in row.iter().enumerate() {
            for (id, name) in level.iter().enumerate() {
                if name.is_empty() || ids.insert(name.as_str(), (p, q, id)).is_some() {
                    return Err(ser_err(format!("duplicate or empty bisimplex id {name:?}")));
                }
            }
        }
    }
    for name in j.h_faces.keys().chain(j.v_faces.keys()) {
        if !ids.contains_key(name.as_str()) {
            return Err(ser_err(format!("face entry for unknown id {name:?}")));
        }
    }
    let faces = |table: &BTreeMap<String, Vec<BiRefJson>>, name: &str, want: bool| -> Result<Vec<BiSimplexRef>> {
        match (table.get(name), want) {
            (Some(fs), true) => fs.iter().map(|f| ref_from_json(f, &ids)).collect(),
            (None, false) => Ok(Vec::new()),
            (None, true) => Err(ser_err(format!("missing faces for {name:?}"))),
            (Some(_), false) => Err(ser_err(format!("{name:?} has degree zero in a direction with faces"))),
        }
    };
    let mut cells = Vec::with_capacity(j.cells.len());
    for (p, row) in j.cells.iter().enumerate() {
        let mut out_row = Vec::with_capacity(row.len());
        for (q, level) in row.iter().enumerate() {
            let mut out = Vec::with_capacity(level.len());
            for name in level {
                out.push(BiCell::new(name.clone(), faces(&j.h_faces, name, p > 0)?, faces(&j.v_faces, name, q > 0)?));
            }
            out_row.push(out);
        }
        cells.push(out_row);
    }
    BiSimplicialSet::new(cells)
}

pub fn to_string(x: &BiSimplicialSet) -> String {
    serde_json::to_string_pretty(&to_json(x)).expect("serializable")
}

pub fn from_str(s: &str) -> Result<BiSimplicialSet> {
    let j: BssxJson = serde_json::from_str(s).map_err(|e| ser_err(e.to_string()))?;
    from_json(&j)
}

pub fn map_to_json(f: &BiSimplicialMap) -> BiMapJson {
    let mut assignment = BTreeMap::new();
    for (p, row) in f.assignment().iter().enumerate() {
        for (q, level) in row.iter().enumerate() {
            for (id, &img) in level.iter().enumerate() {
                assignment.insert(f.source().label(p, q, id).to_string(), ref_to_json(f.target(), img));
            }
        }
    }
    BiMapJson { source: to_json(f.source()), target: to_json(f.target()), assignment }
}

pub fn map_from_json(j: &BiMapJson) -> Result<BiSimplicialMap> {
    let source = Arc::new(from_json(&j.source)?);
    let target = Arc::new(from_json(&j.target)?);
    let ids = ids_of(&target);
    if j.assignment.len() != source.total_cells() {
        return Err(ser_err("assignment must cover every nondegenerate source bisimplex"));
    }
    let mut assignment = Vec::new();
    for (p, row) in source.cells().iter().enumerate() {
        let mut out_row = Vec::new();
        for (q, level) in row.iter().enumerate() {
            let mut out = Vec::new();
            for c in level {
                let r = j.assignment.get(&c.label).ok_or_else(|| ser_err(format!("no image for {:?}", c.label)))?;
                if r.bidegree != [p, q] {
                    return Err(ser_err(format!("image of {:?} has the wrong bidegree", c.label)));
                }
                out.push(ref_from_json(r, &ids)?);
            }
            out_row.push(out);
        }
        assignment.push(out_row);
    }
    BiSimplicialMap::new(source, target, assignment)
}

pub fn map_to_string(f: &BiSimplicialMap) -> String {
    serde_json::to_string_pretty(&map_to_json(f)).expect("serializable")
}

pub fn map_from_str(s: &str) -> Result<BiSimplicialMap> {
    let j: BiMapJson = serde_json::from_str(s).map_err(|e| ser_err(e.to_string()))?;
    map_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisimplicial::constructions::{const_geo, diag_extend};
    use crate::sset::standard::{horn, simplex};

    #[test]
    fn round_trip() {
        let h = Arc::new(horn(2, 1).unwrap());
        let ext = diag_extend(&h).unwrap();
        for x in [ext.object.as_ref().clone(), const_geo(&simplex(2)), BiSimplicialSet::empty()] {
            let s = to_string(&x);
            let back = from_str(&s).unwrap();
            assert_eq!(back, x);
            assert_eq!(to_string(&back), s);
        }
        let c = Arc::new(const_geo(&h));
        let f = ext.counit_map(&c);
        let s = map_to_string(&f);
        assert_eq!(map_from_str(&s).unwrap(), f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_str("[]").is_err());
        let mut j = to_json(&const_geo(&simplex(1)));
        j.schema = "BSSX v0".into();
        assert!(from_json(&j).is_err());
        let mut j = to_json(&const_geo(&simplex(1)));
        j.h_faces.clear();
        assert!(from_json(&j).is_err());
    }
}
