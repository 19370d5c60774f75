//! Barycentric subdivision and the last-vertex map.
//!
//! A nondegenerate `m`-simplex of `sd K` is a nondegenerate simplex `x` of `K`
//! together with a strict chain `S_0 ⊊ … ⊊ S_m = [dim x]` of vertex subsets.

use std::collections::HashMap;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::op;
use crate::sset::{Cell, SimplexRef, SimplicialMap, SimplicialSet};

pub type Chain = SmallVec<[u32; 8]>;

/// `sd K` together with its last-vertex map and the chain behind each cell.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub base: Arc<SimplicialSet>,
    pub object: Arc<SimplicialSet>,
    pub last_vertex: SimplicialMap,
    chains: Vec<Vec<(SimplexRef, Chain)>>,
    index: HashMap<(SimplexRef, Chain), usize>,
}

fn chain_label(k: &SimplicialSet, x: SimplexRef, chain: &[u32]) -> String {
    let n = x.dim();
    let parts: Vec<String> = chain.iter().map(|&s| crate::sset::standard::subset_label(n, s)).collect();
    format!("<{}:{}>", k.label(x.dim(), x.id()), parts.join("<"))
}

/// Strict chains of nonempty subsets of `[n]` ending at `[n]`, grouped by
/// length, each group in lexicographic order.
pub fn top_chains(n: usize) -> Vec<Vec<Chain>> {
    let full = op::full_mask(n);
    let mut by_len: Vec<Vec<Chain>> = vec![Vec::new(); n + 1];
    // grow downward from the top
    let mut stack: Vec<Chain> = vec![Chain::from_slice(&[full])];
    while let Some(c) = stack.pop() {
        by_len[c.len() - 1].push(c.iter().rev().copied().collect());
        let lowest = c[c.len() - 1];
        let mut sub = (lowest - 1) & lowest;
        while sub != 0 {
            let mut next = c.clone();
            next.push(sub);
            stack.push(next);
            sub = (sub - 1) & lowest;
        }
    }
    for level in &mut by_len {
        level.sort();
    }
    by_len
}

/// Writes the image of the chain `c` in `sd Δ^{dim r}` under `sd` of the
/// characteristic map of `r` in normal form: `(y, strict chain, collapse mask)`.
pub fn push_chain(k: &SimplicialSet, r: SimplexRef, c: &[u32]) -> (SimplexRef, Chain, u32) {
    let top = *c.last().expect("nonempty chain");
    let face = k.apply(r, &op::mono_from_mask(top));
    let sigma = face.epi_op();
    let mut strict = Chain::new();
    let mut collapse = 0u32;
    for (pos, &s) in c.iter().enumerate() {
        let image = op::map_mask(&sigma, op::relative_mask(s, top));
        if strict.last() == Some(&image) {
            collapse |= 1 << (pos - 1);
        } else {
            strict.push(image);
        }
    }
    (face.base(), strict, collapse)
}

impl Subdivision {
    pub fn new(k: &Arc<SimplicialSet>) -> Subdivision {
        let top = k.top_dim();
        let all_chains: Vec<Vec<Vec<Chain>>> = (0..=top).map(top_chains).collect();
        let mut chains: Vec<Vec<(SimplexRef, Chain)>> = vec![Vec::new(); top + 1];
        for m in 0..=top {
            for n in m..=top {
                for id in 0..k.count(n) {
                    let x = SimplexRef::nondegenerate(n, id);
                    for c in &all_chains[n][m] {
                        chains[m].push((x, c.clone()));
                    }
                }
            }
        }
        let index: HashMap<(SimplexRef, Chain), usize> = chains
            .iter()
            .flat_map(|level| level.iter().enumerate().map(|(id, key)| (key.clone(), id)))
            .collect();
        let lookup = |y: SimplexRef, strict: &Chain, collapse: u32, dim: usize| -> SimplexRef {
            let id = index[&(y, strict.clone())];
            SimplexRef::nondegenerate(strict.len() - 1, id).degenerate_by(dim, collapse)
        };
        let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(top + 1);
        let mut lv: Vec<Vec<SimplexRef>> = Vec::with_capacity(top + 1);
        for (m, level) in chains.iter().enumerate() {
            let mut row = Vec::with_capacity(level.len());
            let mut lv_row = Vec::with_capacity(level.len());
            for (x, c) in level {
                let mut faces = Vec::with_capacity(m + 1);
                if m > 0 {
                    for i in 0..m {
                        let mut d: Chain = c.clone();
                        d.remove(i);
                        faces.push(SimplexRef::nondegenerate(m - 1, index[&(*x, d)]));
                    }
                    let (y, strict, collapse) = push_chain(k, *x, &c[..m]);
                    faces.push(lookup(y, &strict, collapse, m - 1));
                }
                row.push(Cell::new(chain_label(k, *x, c), faces));
                let theta: Vec<u8> = c.iter().map(|&s| (31 - s.leading_zeros()) as u8).collect();
                lv_row.push(k.apply(*x, &theta));
            }
            cells.push(row);
            lv.push(lv_row);
        }
        let object = Arc::new(SimplicialSet::new_trusted(cells));
        let last_vertex = SimplicialMap::new_unchecked(object.clone(), k.clone(), lv);
        Subdivision { base: k.clone(), object, last_vertex, chains, index }
    }

    pub fn chain(&self, d: usize, id: usize) -> &(SimplexRef, Chain) {
        &self.chains[d][id]
    }

    /// The simplex of `sd K` given by a simplex `r` of `K` and a chain of
    /// subsets of `[dim r]`, which need not be strict or end at the top.
    pub fn simplex_of(&self, r: SimplexRef, c: &[u32]) -> SimplexRef {
        let (y, strict, collapse) = push_chain(&self.base, r, c);
        let id = self.index[&(y, strict.clone())];
        SimplexRef::nondegenerate(strict.len() - 1, id).degenerate_by(c.len() - 1, collapse)
    }

    /// `sd f : sd K -> sd L`, given the subdivision of the target.
    pub fn map(&self, f: &SimplicialMap, target: &Subdivision) -> SimplicialMap {
        let assignment = self
            .chains
            .iter()
            .map(|level| level.iter().map(|(x, c)| target.simplex_of(f.image(x.dim(), x.id()), c)).collect())
            .collect();
        SimplicialMap::new_unchecked(self.object.clone(), target.object.clone(), assignment)
    }
}

pub fn sd(k: &Arc<SimplicialSet>) -> (SimplicialSet, SimplicialMap) {
    let s = Subdivision::new(k);
    (Arc::unwrap_or_clone(s.object), s.last_vertex)
}

/// Default bound on the number of nondegenerate simplices produced by
/// iterated subdivision.
pub const DEFAULT_SD_CELL_CAP: usize = 2_000_000;

/// Predicted number of nondegenerate simplices of `sd K`.
pub fn sd_cell_count(k: &SimplicialSet) -> usize {
    // each n-simplex contributes the ordered set partitions of n+1 elements
    let fubini = |n: usize| -> usize {
        let mut a = vec![1usize; n + 2];
        for m in 1..=n + 1 {
            a[m] = (1..=m).map(|j| op::binomial(m, j) * a[m - j]).sum();
        }
        a[n + 1]
    };
    k.counts().iter().enumerate().map(|(n, &c)| c * fubini(n)).sum()
}

/// `sd^i K` with the composite last-vertex map `sd^i K -> K`.
pub fn sd_iter(k: &Arc<SimplicialSet>, i: usize) -> Result<(SimplicialSet, SimplicialMap)> {
    sd_iter_capped(k, i, DEFAULT_SD_CELL_CAP)
}

pub fn sd_iter_capped(
    k: &Arc<SimplicialSet>,
    i: usize,
    cell_cap: usize,
) -> Result<(SimplicialSet, SimplicialMap)> {
    let mut current = k.clone();
    let mut composite = SimplicialMap::identity(k);
    for stage in 0..i {
        if sd_cell_count(&current) > cell_cap {
            return Err(Error::ResourceCap { what: "sd cells".into(), limit: cell_cap, stage: Some(stage) });
        }
        let s = Subdivision::new(&current);
        composite = s.last_vertex.then(&composite);
        current = s.object;
    }
    Ok((Arc::unwrap_or_clone(current), composite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::colimit::sphere;
    use crate::sset::search::vertex_values;
    use crate::sset::standard::{boundary_inclusion, simplex};

    #[test]
    fn small_subdivisions() {
        let d1 = Arc::new(simplex(1));
        let (s, lv) = sd(&d1);
        assert_eq!(s.counts(), vec![3, 2]);
        // vertices: 0, 1, barycenter
        assert_eq!(vertex_values(&lv), vec![0, 1, 1]);
        let (s, _) = sd(&Arc::new(simplex(2)));
        assert_eq!(s.counts(), vec![7, 12, 6]);
        s.audit().unwrap();
        let (s, _) = sd(&Arc::new(sphere(1)));
        assert_eq!(s.counts(), vec![2, 2]);
    }

    #[test]
    fn chain_counts() {
        // ordered set partitions of n+1 elements
        let expected = [1, 3, 13, 75, 541];
        for (n, &e) in expected.iter().enumerate() {
            let c: usize = top_chains(n).iter().map(Vec::len).sum();
            assert_eq!(c, e);
        }
    }

    #[test]
    fn iterated() {
        let d1 = Arc::new(simplex(1));
        let (s, f) = sd_iter(&d1, 2).unwrap();
        assert_eq!(s.counts(), vec![5, 4]);
        f.validate().unwrap();
        let (s, f) = sd_iter(&d1, 0).unwrap();
        assert_eq!(s, *d1);
        assert!(f.is_isomorphism());
        let pt = Arc::new(simplex(0));
        assert_eq!(sd_iter(&pt, 3).unwrap().0.counts(), vec![1]);
        let err = sd_iter_capped(&Arc::new(simplex(3)), 3, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { stage: Some(1), .. }));
    }

    #[test]
    fn sd_of_mono_is_mono() {
        let inc = boundary_inclusion(3);
        let a = Subdivision::new(inc.source());
        let b = Subdivision::new(inc.target());
        let f = a.map(&inc, &b);
        f.validate().unwrap();
        assert!(f.is_mono());
    }

    #[test]
    fn last_vertex_is_natural() {
        let inc = boundary_inclusion(2);
        let a = Subdivision::new(inc.source());
        let b = Subdivision::new(inc.target());
        let f = a.map(&inc, &b);
        assert_eq!(f.then(&b.last_vertex), a.last_vertex.then(&inc));
    }
}
