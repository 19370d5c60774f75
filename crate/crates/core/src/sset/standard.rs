//! Standard simplices and their subcomplexes: boundaries, horns, and
//! vertex-set-defined subcomplexes.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::op;
use crate::sset::{Cell, SimplexRef, SimplicialMap, SimplicialSet};

/// Label of a face of `Δ^n` given by a vertex subset.
pub fn subset_label(n: usize, mask: u32) -> String {
    let vs: Vec<String> = op::bits(mask).map(|b| b.to_string()).collect();
    if n < 10 {
        vs.concat()
    } else {
        vs.join(",")
    }
}

/// The subcomplex of `Δ^n` whose nondegenerate simplices are the vertex subsets
/// accepted by `keep`. Returns the complex together with the subset behind each
/// nondegenerate simplex.
pub fn simplex_subcomplex(
    n: usize,
    keep: impl Fn(u32) -> bool,
) -> Result<(SimplicialSet, Vec<Vec<u32>>)> {
    let mut subsets: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for s in op::subsets_by_size(n) {
        if keep(s) {
            subsets[s.count_ones() as usize - 1].push(s);
        }
    }
    let index: HashMap<u32, usize> = subsets
        .iter()
        .flat_map(|level| level.iter().enumerate().map(|(id, &s)| (s, id)))
        .collect();
    let mut cells = Vec::with_capacity(n + 1);
    for (d, level) in subsets.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for (id, &s) in level.iter().enumerate() {
            let mut faces = Vec::new();
            if d > 0 {
                for b in op::bits(s) {
                    let f = s & !(1 << b);
                    let fid = *index.get(&f).ok_or(Error::NotSubcomplex { dim: d, id })?;
                    faces.push(SimplexRef::nondegenerate(d - 1, fid));
                }
            }
            row.push(Cell::new(subset_label(n, s), faces));
        }
        cells.push(row);
    }
    let set = SimplicialSet::new(cells)?;
    subsets.truncate(set.counts().len());
    Ok((set, subsets))
}

/// `Δ^n`, the nerve of `[n]`: its nondegenerate `k`-simplices are the
/// `(k+1)`-element subsets of `{0, …, n}`.
pub fn simplex(n: usize) -> SimplicialSet {
    simplex_subcomplex(n, |_| true).expect("Δ^n is well formed").0
}

/// `∂Δ^n`; for `n = 0` this is the empty simplicial set.
pub fn boundary(n: usize) -> SimplicialSet {
    let full = op::full_mask(n);
    simplex_subcomplex(n, |s| s != full).expect("∂Δ^n is well formed").0
}

/// The horn `Λ^n_i`, omitting the top cell and the face opposite vertex `i`.
pub fn horn(n: usize, i: usize) -> Result<SimplicialSet> {
    horn_with_subsets(n, i).map(|(h, _)| h)
}

fn horn_with_subsets(n: usize, i: usize) -> Result<(SimplicialSet, Vec<Vec<u32>>)> {
    if n == 0 || i > n {
        return Err(Error::HornIndex { n, i });
    }
    let full = op::full_mask(n);
    let opposite = full & !(1 << i);
    simplex_subcomplex(n, |s| s != full && s != opposite)
}

/// Inclusion of a vertex-subset subcomplex into `Δ^n`.
pub fn subset_inclusion(
    sub: Arc<SimplicialSet>,
    subsets: &[Vec<u32>],
    n: usize,
    simplex_n: Arc<SimplicialSet>,
) -> SimplicialMap {
    let (_, all) = simplex_subcomplex(n, |_| true).expect("Δ^n");
    let index: HashMap<u32, usize> = all
        .iter()
        .flat_map(|level| level.iter().enumerate().map(|(id, &s)| (s, id)))
        .collect();
    let assignment = subsets
        .iter()
        .enumerate()
        .map(|(d, level)| level.iter().map(|s| SimplexRef::nondegenerate(d, index[s])).collect())
        .collect();
    SimplicialMap::new_unchecked(sub, simplex_n, assignment)
}

/// `∂Δ^n ↪ Δ^n`.
pub fn boundary_inclusion(n: usize) -> SimplicialMap {
    let full = op::full_mask(n);
    let (b, subsets) = simplex_subcomplex(n, |s| s != full).expect("∂Δ^n");
    subset_inclusion(Arc::new(b), &subsets, n, Arc::new(simplex(n)))
}

/// `Λ^n_i ↪ Δ^n`.
pub fn horn_inclusion(n: usize, i: usize) -> Result<SimplicialMap> {
    let (h, subsets) = horn_with_subsets(n, i)?;
    Ok(subset_inclusion(Arc::new(h), &subsets, n, Arc::new(simplex(n))))
}

/// The vertex subset spanned by each nondegenerate simplex of `Δ^n`, in id order.
pub fn simplex_subsets(n: usize) -> Vec<Vec<u32>> {
    simplex_subcomplex(n, |_| true).expect("Δ^n").1
}

/// Id of the face of `Δ^n` spanned by `mask`.
pub fn simplex_id(n: usize, mask: u32) -> usize {
    let size = mask.count_ones();
    op::subsets_by_size(n)
        .into_iter()
        .filter(|s| s.count_ones() == size)
        .position(|s| s == mask)
        .expect("subset of [n]")
}

/// Simplex of `Δ^n` given by a monotone map `[p] -> [n]`.
pub fn simplex_of_op(theta: &[u8], ids: &HashMap<u32, usize>) -> SimplexRef {
    let image = op::image_mask(theta);
    let collapse = op::collapsed_mask(theta);
    SimplexRef::from_mask(theta.len() - 1, ids[&image], collapse)
}

/// Map from vertex subsets of `[n]` to simplex ids of `Δ^n`.
pub fn subset_ids(n: usize) -> HashMap<u32, usize> {
    simplex_subsets(n)
        .iter()
        .flat_map(|level| level.iter().enumerate().map(|(id, &s)| (s, id)))
        .collect()
}

/// The map `Δ^m -> Δ^n` induced by a monotone `θ : [m] -> [n]`.
pub fn simplex_map(
    m: usize,
    n: usize,
    theta: &[u8],
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
) -> SimplicialMap {
    let ids = subset_ids(n);
    let assignment = simplex_subsets(m)
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|&s| {
                    let restricted: Vec<u8> = op::bits(s).map(|b| theta[b as usize]).collect();
                    simplex_of_op(&restricted, &ids)
                })
                .collect()
        })
        .collect();
    SimplicialMap::new_unchecked(source, target, assignment)
}

/// The representing map `Δ^d -> K` of a simplex `x` of `K`.
pub fn characteristic_map(
    k: &Arc<SimplicialSet>,
    x: SimplexRef,
    simplex_d: Arc<SimplicialSet>,
) -> SimplicialMap {
    let d = x.dim();
    let assignment = simplex_subsets(d)
        .iter()
        .map(|level| level.iter().map(|&s| k.apply(x, &op::mono_from_mask(s))).collect())
        .collect();
    SimplicialMap::new_unchecked(simplex_d, k.clone(), assignment)
}

pub fn point() -> SimplicialSet {
    simplex(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_counts_are_binomial() {
        for n in 0..=6 {
            let s = simplex(n);
            for k in 0..=n {
                assert_eq!(s.count(k), op::binomial(n + 1, k + 1), "Δ^{n} in dim {k}");
            }
            s.audit().unwrap();
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(simplex(0).counts(), vec![1]);
        assert_eq!(simplex(1).counts(), vec![2, 1]);
        assert_eq!(simplex(2).counts(), vec![3, 3, 1]);
        assert_eq!(boundary(1).counts(), vec![2]);
        assert_eq!(boundary(2).counts(), vec![3, 3]);
        let h = horn(2, 1).unwrap();
        assert_eq!(h.counts(), vec![3, 2]);
        let labels: Vec<&str> = (0..2).map(|i| h.label(1, i)).collect();
        assert_eq!(labels, vec!["01", "12"]);
        assert!(boundary(0).is_empty());
    }

    #[test]
    fn horn_rejects_bad_indices() {
        assert_eq!(horn(0, 0).unwrap_err(), Error::HornIndex { n: 0, i: 0 });
        assert!(horn(2, 3).is_err());
    }

    #[test]
    fn inclusions_are_monos() {
        for n in 0..5 {
            let b = boundary_inclusion(n);
            b.validate().unwrap();
            assert!(b.is_mono());
            for i in 0..=n {
                if n > 0 {
                    let h = horn_inclusion(n, i).unwrap();
                    h.validate().unwrap();
                    assert!(h.is_mono());
                }
            }
        }
    }

    #[test]
    fn characteristic_map_of_degenerate_simplex() {
        let d1 = Arc::new(simplex(1));
        let x = d1.degeneracy(SimplexRef::nondegenerate(1, 0), 1);
        let chi = characteristic_map(&d1, x, Arc::new(simplex(2)));
        chi.validate().unwrap();
        assert_eq!(crate::sset::search::vertex_values(&chi), vec![0, 1, 1]);
    }
}
