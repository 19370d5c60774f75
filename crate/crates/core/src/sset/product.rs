//! Cartesian products via the shuffle description, and the collapsed cylinder.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::op;
use crate::sset::colimit::{quotient_by, subcomplex_mask};
use crate::sset::{standard, Cell, SimplexRef, SimplicialMap, SimplicialSet};

/// Default bound on the dimension of constructed products.
pub const DEFAULT_TOP_DIM_CAP: usize = 8;

/// `K × L` with its two projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub object: Arc<SimplicialSet>,
    pub first: SimplicialMap,
    pub second: SimplicialMap,
    /// The pair of simplices behind each nondegenerate simplex of the product.
    pub pairs: Vec<Vec<(SimplexRef, SimplexRef)>>,
}

fn ref_label(k: &SimplicialSet, r: SimplexRef) -> String {
    let base = k.label(r.base_dim(), r.id());
    if r.is_degenerate() {
        let pos: Vec<String> = r.epi_positions().iter().map(|p| p.to_string()).collect();
        format!("s{}{}", pos.join(""), base)
    } else {
        base.to_string()
    }
}

/// Writes a pair of `m`-simplices in normal form: the common collapse set
/// becomes the degeneracy, the rest is a jointly nondegenerate pair.
pub fn split_pair(x: SimplexRef, y: SimplexRef) -> (u32, SimplexRef, SimplexRef) {
    let m = x.dim();
    let common = x.epi_mask() & y.epi_mask();
    if common == 0 {
        return (0, x, y);
    }
    let eps = op::epi_op(m, common);
    let r = m - common.count_ones() as usize;
    // block minima of ε give a section
    let mut section: Vec<u8> = Vec::with_capacity(r + 1);
    for (pos, &v) in eps.iter().enumerate() {
        if section.len() == v as usize {
            section.push(pos as u8);
        }
    }
    let reduce = |z: SimplexRef| -> SimplexRef {
        let zo = z.epi_op();
        let restricted: Vec<u8> = section.iter().map(|&p| zo[p as usize]).collect();
        SimplexRef::from_mask(r, z.id(), op::collapsed_mask(&restricted))
    };
    (common, reduce(x), reduce(y))
}

pub fn product(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>) -> Result<Product> {
    product_with_cap(k, l, DEFAULT_TOP_DIM_CAP)
}

pub fn product_with_cap(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>, cap: usize) -> Result<Product> {
    let top = if k.is_empty() || l.is_empty() { 0 } else { k.top_dim() + l.top_dim() };
    if top > cap {
        return Err(Error::DimensionCap { dim: top, cap });
    }
    let mut pairs: Vec<Vec<(SimplexRef, SimplexRef)>> = vec![Vec::new(); top + 1];
    let mut index: Vec<HashMap<(SimplexRef, SimplexRef), usize>> = vec![HashMap::new(); top + 1];
    for m in 0..=top {
        if k.is_empty() || l.is_empty() {
            break;
        }
        let ys = l.simplices(m);
        for x in k.simplices(m) {
            for &y in &ys {
                if x.epi_mask() & y.epi_mask() == 0 {
                    index[m].insert((x, y), pairs[m].len());
                    pairs[m].push((x, y));
                }
            }
        }
    }
    let lookup = |x: SimplexRef, y: SimplexRef| -> SimplexRef {
        let (common, x0, y0) = split_pair(x, y);
        let id = index[x0.dim()][&(x0, y0)];
        SimplexRef::nondegenerate(x0.dim(), id).degenerate_by(x.dim(), common)
    };
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(top + 1);
    for (m, level) in pairs.iter().enumerate() {
        let row = level
            .iter()
            .map(|&(x, y)| {
                let faces = if m == 0 {
                    Vec::new()
                } else {
                    (0..=m).map(|i| lookup(k.face(x, i), l.face(y, i))).collect()
                };
                Cell::new(format!("({},{})", ref_label(k, x), ref_label(l, y)), faces)
            })
            .collect();
        cells.push(row);
    }
    let object = Arc::new(SimplicialSet::new(cells)?);
    let first = SimplicialMap::new_unchecked(
        object.clone(),
        k.clone(),
        pairs.iter().map(|level| level.iter().map(|p| p.0).collect()).collect(),
    );
    let second = SimplicialMap::new_unchecked(
        object.clone(),
        l.clone(),
        pairs.iter().map(|level| level.iter().map(|p| p.1).collect()).collect(),
    );
    Ok(Product { object, first, second, pairs })
}

impl Product {
    /// The simplex of the product given by a pair of simplices of equal dimension.
    pub fn pair(&self, x: SimplexRef, y: SimplexRef) -> Option<SimplexRef> {
        let (common, x0, y0) = split_pair(x, y);
        let id = self.pairs.get(x0.dim())?.iter().position(|&p| p == (x0, y0))?;
        Some(SimplexRef::nondegenerate(x0.dim(), id).degenerate_by(x.dim(), common))
    }

    /// `⟨f, g⟩ : Z -> K × L`.
    pub fn pairing(&self, f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap> {
        let assignment = f
            .assignment()
            .iter()
            .zip(g.assignment())
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| self.pair(x, y).ok_or_else(|| Error::InvalidMap("pair out of range".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::new(f.source().clone(), self.object.clone(), assignment)
    }
}

/// The collapsed cylinder `M = (K × Δ^1)/(K × Δ^{1})` with the inclusion
/// `K ≅ K × Δ^{0} ↪ M`.
pub fn cylinder_quotient(k: &Arc<SimplicialSet>) -> Result<(SimplicialSet, SimplicialMap)> {
    let interval = Arc::new(standard::simplex(1));
    let prod = product_with_cap(k, &interval, usize::MAX)?;
    let at = |end: usize| -> Vec<Vec<bool>> {
        prod.pairs
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&(_, y)| y.base_dim() == 0 && y.id() == end)
                    .collect()
            })
            .collect()
    };
    let (_, top_end) = subcomplex_mask(&prod.object, &at(1))?;
    let (m, q) = quotient_by(&top_end)?;
    let m = Arc::new(m);
    let q = q.retarget(m.clone());
    // K -> K × {0}
    let assignment = k
        .counts()
        .iter()
        .enumerate()
        .map(|(d, &n)| {
            (0..n)
                .map(|id| {
                    let x = SimplexRef::nondegenerate(d, id);
                    let y = SimplexRef::from_mask(d, 0, op::full_mask(d) >> 1);
                    q.eval(prod.pair(x, y).expect("K × {0}"))
                })
                .collect()
        })
        .collect();
    let inc = SimplicialMap::new(k.clone(), m.clone(), assignment)?;
    Ok((Arc::unwrap_or_clone(m), inc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::search::{count_maps, is_isomorphic};
    use crate::sset::standard::{boundary, simplex};

    #[test]
    fn square_triangulation() {
        let d1 = Arc::new(simplex(1));
        let p = product(&d1, &d1).unwrap();
        assert_eq!(p.object.counts(), vec![4, 5, 2]);
        p.object.audit().unwrap();
    }

    #[test]
    fn prism() {
        let d1 = Arc::new(simplex(1));
        let d2 = Arc::new(simplex(2));
        let p = product(&d2, &d1).unwrap();
        assert_eq!(p.object.counts(), vec![6, 12, 10, 3]);
        p.object.audit().unwrap();
        assert_eq!(p.object.euler_characteristic(), 1);
    }

    #[test]
    fn maps_into_product_are_pairs() {
        let d1 = Arc::new(simplex(1));
        let d2 = Arc::new(simplex(2));
        let p = product(&d1, &d1).unwrap();
        assert_eq!(count_maps(&d2, &p.object), count_maps(&d2, &d1).pow(2));
    }

    #[test]
    fn cylinders() {
        let pt = Arc::new(simplex(0));
        let (m, inc) = cylinder_quotient(&pt).unwrap();
        assert!(is_isomorphic(&Arc::new(m), &Arc::new(simplex(1))));
        assert!(inc.is_mono());

        let b1 = Arc::new(boundary(1));
        let (m, inc) = cylinder_quotient(&b1).unwrap();
        assert_eq!(m.counts(), vec![3, 2]);
        assert!(inc.is_mono());

        let empty = Arc::new(SimplicialSet::empty());
        let (m, _) = cylinder_quotient(&empty).unwrap();
        assert_eq!(m.counts(), vec![1]);

        let d1 = Arc::new(simplex(1));
        let (m, inc) = cylinder_quotient(&d1).unwrap();
        assert_eq!(m.counts(), vec![3, 4, 2]);
        assert!(inc.is_mono());
        m.audit().unwrap();
    }

    #[test]
    fn cap_is_enforced() {
        let d3 = Arc::new(simplex(3));
        let d6 = Arc::new(simplex(6));
        assert_eq!(product(&d3, &d6).unwrap_err(), Error::DimensionCap { dim: 9, cap: 8 });
    }
}
