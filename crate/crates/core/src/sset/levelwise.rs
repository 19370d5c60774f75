//! Builds a finite simplicial set from an explicit list of all its simplices
//! in each dimension and the action of faces and degeneracies on them.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::par;
use crate::sset::{Cell, SimplexRef, SimplicialSet};

/// A simplicial set given by its simplices as explicit values.
pub trait LevelwiseSource: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync;

    /// `d_i` on an `n`-simplex.
    fn face(&self, n: usize, i: usize, z: &Self::Elem) -> Self::Elem;

    /// `s_j` on an `n`-simplex.
    fn degeneracy(&self, n: usize, j: usize, z: &Self::Elem) -> Self::Elem;

    fn label(&self, n: usize, index: usize, z: &Self::Elem) -> String;
}

/// The result of [`build_levelwise`]: the simplicial set plus the normal form
/// of every listed element.
#[derive(Clone, Debug)]
pub struct Levelwise<E> {
    pub set: SimplicialSet,
    pub elements: Vec<Vec<E>>,
    pub normal_forms: Vec<Vec<SimplexRef>>,
    /// Element index of each nondegenerate simplex.
    pub cell_elements: Vec<Vec<usize>>,
    index: Vec<HashMap<E, usize>>,
    by_normal_form: Vec<HashMap<SimplexRef, usize>>,
}

impl<E: Clone + Eq + Hash> Levelwise<E> {
    pub fn index_of(&self, n: usize, z: &E) -> Option<usize> {
        self.index.get(n)?.get(z).copied()
    }

    pub fn normal_form(&self, n: usize, z: &E) -> Option<SimplexRef> {
        self.index_of(n, z).map(|i| self.normal_forms[n][i])
    }

    /// The element behind any simplex of dimension at most the truncation.
    pub fn element(&self, r: SimplexRef) -> &E {
        let n = r.dim();
        &self.elements[n][self.by_normal_form[n][&r]]
    }

    pub fn truncation(&self) -> usize {
        self.elements.len() - 1
    }
}

/// `levels[n]` must list every `n`-simplex exactly once and be closed under the
/// face maps. An element `z` is degenerate iff `z = s_j d_j z` for some `j`;
/// the set of such `j` is the collapse mask of its normal form.
pub fn build_levelwise<S: LevelwiseSource>(src: &S, levels: Vec<Vec<S::Elem>>) -> Result<Levelwise<S::Elem>> {
    let mut index: Vec<HashMap<S::Elem, usize>> = Vec::with_capacity(levels.len());
    let mut normal_forms: Vec<Vec<SimplexRef>> = Vec::with_capacity(levels.len());
    let mut cell_elements: Vec<Vec<usize>> = Vec::with_capacity(levels.len());
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(levels.len());
    for (n, level) in levels.iter().enumerate() {
        let map: HashMap<S::Elem, usize> = level.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect();
        if map.len() != level.len() {
            return Err(Error::InvalidSimplex(format!("level {n} lists a simplex twice")));
        }
        index.push(map);
        let masks: Vec<u32> = par::map(level, |z| {
            let mut mask = 0u32;
            for j in 0..n {
                if src.degeneracy(n - 1, j, &src.face(n, j, z)) == *z {
                    mask |= 1 << j;
                }
            }
            mask
        });
        let mut nfs = Vec::with_capacity(level.len());
        let mut cell_ids = Vec::new();
        for (i, z) in level.iter().enumerate() {
            let mask = masks[i];
            if mask == 0 {
                nfs.push(SimplexRef::nondegenerate(n, cell_ids.len()));
                cell_ids.push(i);
                continue;
            }
            // remove position j+1 for each collapsed j, from the top down
            let mut base = z.clone();
            let mut dim = n;
            for j in (0..n).rev().filter(|j| mask & (1 << j) != 0) {
                base = src.face(dim, j + 1, &base);
                dim -= 1;
            }
            let bi = *index[dim]
                .get(&base)
                .ok_or_else(|| Error::InvalidSimplex(format!("level {dim} is not closed under faces")))?;
            let b = normal_forms[dim][bi];
            if b.is_degenerate() {
                return Err(Error::InvalidSimplex(format!("inconsistent degeneracies at level {n}")));
            }
            nfs.push(b.degenerate_by(n, mask));
        }
        let row: Vec<Cell> = par::map(&cell_ids, |&i| {
            let z = &level[i];
            let faces = if n == 0 {
                Ok(Vec::new())
            } else {
                (0..=n)
                    .map(|k| {
                        let f = src.face(n, k, z);
                        index[n - 1]
                            .get(&f)
                            .map(|&fi| normal_forms[n - 1][fi])
                            .ok_or_else(|| Error::InvalidSimplex(format!("level {} is not closed under faces", n - 1)))
                    })
                    .collect::<Result<Vec<_>>>()
            };
            faces.map(|fs| Cell::new(src.label(n, i, z), fs))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        normal_forms.push(nfs);
        cell_elements.push(cell_ids);
        cells.push(row);
    }
    let set = SimplicialSet::new(cells)?;
    let by_normal_form = normal_forms
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, &r)| (r, i)).collect())
        .collect();
    Ok(Levelwise { set, elements: levels, normal_forms, cell_elements, index, by_normal_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op;

    /// `Δ^m` presented by monotone maps into `[m]`.
    struct Nerve;

    impl LevelwiseSource for Nerve {
        type Elem = Vec<u8>;
        fn face(&self, _n: usize, i: usize, z: &Vec<u8>) -> Vec<u8> {
            let mut w = z.clone();
            w.remove(i);
            w
        }
        fn degeneracy(&self, _n: usize, j: usize, z: &Vec<u8>) -> Vec<u8> {
            let mut w = z.clone();
            w.insert(j, z[j]);
            w
        }
        fn label(&self, _n: usize, _i: usize, z: &Vec<u8>) -> String {
            z.iter().map(|v| v.to_string()).collect()
        }
    }

    #[test]
    fn rebuilds_standard_simplex() {
        for m in 0..4 {
            let levels: Vec<Vec<Vec<u8>>> =
                (0..=m + 1).map(|p| op::monotone_maps(p, m).into_iter().map(|o| o.to_vec()).collect()).collect();
            let lw = build_levelwise(&Nerve, levels).unwrap();
            let _ = lw.truncation();
            assert!(lw.set.same_structure(&crate::sset::standard::simplex(m)));
            assert_eq!(lw.set.counts().len(), m + 1);
        }
    }
}
