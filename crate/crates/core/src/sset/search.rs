//! Backtracking search for simplicial maps.
//!
//! Nondegenerate source simplices are assigned in increasing dimension. A
//! simplex's faces are fixed by the time it is reached, so candidates are
//! looked up by their tuple of faces. Candidates are
//! tried in canonical [`SimplexRef`] order, so the enumeration order (and the
//! first solution found) is deterministic.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::par;
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};

/// Extra admissibility test for a candidate image of the nondegenerate source
/// simplex `(dim, id)`. Called after the face checks pass.
pub type Filter<'a> = dyn Fn(usize, usize, SimplexRef) -> bool + Sync + 'a;

type FaceKey = SmallVec<[SimplexRef; 8]>;

/// All simplices of a target up to some dimension, grouped by their tuple of
/// faces.
pub struct TargetIndex {
    vertices: Vec<SimplexRef>,
    by_faces: Vec<HashMap<FaceKey, Vec<SimplexRef>>>,
    // simplices by their first and by their last face
    by_end_face: Vec<[HashMap<SimplexRef, Vec<SimplexRef>>; 2]>,
}

impl TargetIndex {
    pub fn new(target: &SimplicialSet, max_dim: usize) -> Self {
        let vertices = (0..target.count(0)).map(|v| SimplexRef::nondegenerate(0, v)).collect();
        let mut by_faces = Vec::with_capacity(max_dim + 1);
        let mut by_end_face = Vec::with_capacity(max_dim + 1);
        for d in 0..=max_dim {
            let mut index: HashMap<FaceKey, Vec<SimplexRef>> = HashMap::new();
            let mut ends: [HashMap<SimplexRef, Vec<SimplexRef>>; 2] = Default::default();
            if d > 0 {
                for r in target.simplices(d) {
                    let key: FaceKey = (0..=d).map(|i| target.face(r, i)).collect();
                    ends[0].entry(key[0]).or_default().push(r);
                    ends[1].entry(key[d]).or_default().push(r);
                    index.entry(key).or_default().push(r);
                }
            }
            by_faces.push(index);
            by_end_face.push(ends);
        }
        TargetIndex { vertices, by_faces, by_end_face }
    }

    pub fn max_dim(&self) -> usize {
        self.by_faces.len() - 1
    }

    /// The `d`-simplices with the given faces, in canonical order.
    pub fn with_faces(&self, d: usize, faces: &[SimplexRef]) -> &[SimplexRef] {
        self.candidates(d, faces)
    }

    /// The `d`-simplices whose face `d_0` (if `last` is false) or `d_d` (if
    /// `last` is true) is `face`, in canonical order.
    pub fn with_end_face(&self, d: usize, last: bool, face: SimplexRef) -> &[SimplexRef] {
        self.by_end_face.get(d).and_then(|m| m[usize::from(last)].get(&face)).map_or(&[], Vec::as_slice)
    }

    fn candidates(&self, d: usize, key: &[SimplexRef]) -> &[SimplexRef] {
        if d == 0 {
            &self.vertices
        } else {
            self.by_faces.get(d).and_then(|m| m.get(key)).map_or(&[], Vec::as_slice)
        }
    }
}

pub struct MapSearch<'a> {
    source: &'a SimplicialSet,
    index: Arc<TargetIndex>,
    order: Vec<(usize, usize)>,
    filter: Option<&'a Filter<'a>>,
}

pub type Partial = Vec<Vec<SimplexRef>>;

impl<'a> MapSearch<'a> {
    pub fn new(source: &'a SimplicialSet, target: &'a SimplicialSet) -> Self {
        let index = Arc::new(TargetIndex::new(target, source.top_dim()));
        Self::with_index(source, target, index)
    }

    pub fn with_index(
        source: &'a SimplicialSet,
        target: &'a SimplicialSet,
        index: Arc<TargetIndex>,
    ) -> Self {
        let order = source
            .counts()
            .iter()
            .enumerate()
            .flat_map(|(d, &n)| (0..n).map(move |id| (d, id)))
            .collect();
        debug_assert_eq!(index.vertices.len(), target.count(0));
        MapSearch { source, index, order, filter: None }
    }

    pub fn filter(mut self, f: &'a Filter<'a>) -> Self {
        self.filter = Some(f);
        self
    }

    fn empty_partial(&self) -> Partial {
        self.source
            .counts()
            .iter()
            .map(|&n| vec![SimplexRef::nondegenerate(0, 0); n])
            .collect()
    }

    fn expected_faces(&self, partial: &Partial, d: usize, id: usize) -> FaceKey {
        self.source
            .faces(d, id)
            .iter()
            .map(|&f| {
                let img = partial[f.base_dim()][f.id()];
                if f.is_degenerate() {
                    img.degenerate_by(f.dim(), f.epi_mask())
                } else {
                    img
                }
            })
            .collect()
    }

    fn candidates_at(&self, partial: &Partial, pos: usize) -> Vec<SimplexRef> {
        let (d, id) = self.order[pos];
        let key = if d == 0 { FaceKey::new() } else { self.expected_faces(partial, d, id) };
        self.index
            .candidates(d, &key)
            .iter()
            .copied()
            .filter(|&c| self.filter.is_none_or(|f| f(d, id, c)))
            .collect()
    }

    fn dfs<F>(&self, pos: usize, partial: &mut Partial, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Partial) -> ControlFlow<()>,
    {
        if pos == self.order.len() {
            return visit(partial);
        }
        let (d, id) = self.order[pos];
        for c in self.candidates_at(partial, pos) {
            partial[d][id] = c;
            self.dfs(pos + 1, partial, visit)?;
        }
        ControlFlow::Continue(())
    }

    /// Expands the first few positions breadth-first to get independent
    /// subtrees for the parallel pool.
    fn prefixes(&self) -> Vec<(usize, Partial)> {
        let mut frontier = vec![(0usize, self.empty_partial())];
        while frontier.len() < 64 {
            let Some(&(pos, _)) = frontier.first() else { break };
            if pos >= self.order.len() || pos >= 3 {
                break;
            }
            let mut next = Vec::new();
            for (pos, partial) in frontier {
                let (d, id) = self.order[pos];
                for c in self.candidates_at(&partial, pos) {
                    let mut p = partial.clone();
                    p[d][id] = c;
                    next.push((pos + 1, p));
                }
            }
            frontier = next;
        }
        frontier
    }

    fn to_map(&self, partial: &Partial, source: &Arc<SimplicialSet>, target: &Arc<SimplicialSet>) -> SimplicialMap {
        SimplicialMap::new_unchecked(source.clone(), target.clone(), partial.clone())
    }

    /// Every admissible assignment, in canonical order. Fails once more than
    /// `limit` solutions have been seen.
    pub fn all_assignments(&self, limit: usize) -> Result<Vec<Partial>> {
        let seen = AtomicUsize::new(0);
        let over = AtomicBool::new(false);
        let chunks = par::map(&self.prefixes(), |(pos, partial)| {
            let mut out = Vec::new();
            let mut partial = partial.clone();
            let _ = self.dfs(*pos, &mut partial, &mut |p: &Partial| {
                if over.load(Ordering::Relaxed) || seen.fetch_add(1, Ordering::Relaxed) >= limit {
                    over.store(true, Ordering::Relaxed);
                    return ControlFlow::Break(());
                }
                out.push(p.clone());
                ControlFlow::Continue(())
            });
            out
        });
        if over.load(Ordering::Relaxed) {
            return Err(Error::ResourceCap { what: "map enumeration".into(), limit, stage: None });
        }
        Ok(chunks.into_iter().flatten().collect())
    }

    /// Runs `step` on every admissible assignment, folding each independent
    /// subtree into its own accumulator. Accumulators come back in canonical
    /// order, and each saw its assignments in canonical order.
    pub fn fold_chunks<T, I, S>(&self, init: I, step: S) -> Vec<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        S: Fn(&mut T, &Partial) + Sync,
    {
        par::map(&self.prefixes(), |(pos, partial)| {
            let mut acc = init();
            let mut partial = partial.clone();
            let _ = self.dfs(*pos, &mut partial, &mut |p: &Partial| {
                step(&mut acc, p);
                ControlFlow::Continue(())
            });
            acc
        })
    }

    pub fn count(&self) -> usize {
        par::map(&self.prefixes(), |(pos, partial)| {
            let mut n = 0usize;
            let mut partial = partial.clone();
            let _ = self.dfs(*pos, &mut partial, &mut |_| {
                n += 1;
                ControlFlow::Continue(())
            });
            n
        })
        .into_iter()
        .sum()
    }

    /// The least admissible assignment in canonical order.
    pub fn first_assignment(&self) -> Option<Partial> {
        par::find_map_first(&self.prefixes(), |(pos, partial)| {
            let mut found = None;
            let mut partial = partial.clone();
            let _ = self.dfs(*pos, &mut partial, &mut |p: &Partial| {
                found = Some(p.clone());
                ControlFlow::Break(())
            });
            found
        })
    }

    pub fn all_maps(
        &self,
        source: &Arc<SimplicialSet>,
        target: &Arc<SimplicialSet>,
        limit: usize,
    ) -> Result<Vec<SimplicialMap>> {
        Ok(self
            .all_assignments(limit)?
            .iter()
            .map(|p| self.to_map(p, source, target))
            .collect())
    }

    pub fn first_map(&self, source: &Arc<SimplicialSet>, target: &Arc<SimplicialSet>) -> Option<SimplicialMap> {
        self.first_assignment().map(|p| self.to_map(&p, source, target))
    }
}

/// Default cap on enumerated maps.
pub const DEFAULT_MAP_LIMIT: usize = 2_000_000;

/// All simplicial maps `K -> L`, in canonical order.
pub fn enumerate_maps(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>) -> Result<Vec<SimplicialMap>> {
    enumerate_maps_limited(k, l, DEFAULT_MAP_LIMIT)
}

pub fn enumerate_maps_limited(
    k: &Arc<SimplicialSet>,
    l: &Arc<SimplicialSet>,
    limit: usize,
) -> Result<Vec<SimplicialMap>> {
    MapSearch::new(k, l).all_maps(k, l, limit)
}

/// Count-only mode of [`enumerate_maps`].
pub fn count_maps(k: &SimplicialSet, l: &SimplicialSet) -> usize {
    MapSearch::new(k, l).count()
}

/// Some isomorphism `K -> L`, if one exists.
pub fn find_isomorphism(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>) -> Option<SimplicialMap> {
    if k.counts() != l.counts() {
        return None;
    }
    // nondegenerate images; injectivity is checked on complete assignments
    let filter = |_d: usize, _id: usize, c: SimplexRef| !c.is_degenerate();
    let search = MapSearch::new(k, l).filter(&filter);
    let mut result = None;
    let _ = search.dfs(0, &mut search.empty_partial(), &mut |p: &Partial| {
        let injective = p.iter().all(|level| {
            let mut ids: Vec<usize> = level.iter().map(|r| r.id()).collect();
            ids.sort_unstable();
            ids.windows(2).all(|w| w[0] != w[1])
        });
        if injective {
            result = Some(p.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    result.map(|p| SimplicialMap::new_unchecked(k.clone(), l.clone(), p))
}

pub fn is_isomorphic(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>) -> bool {
    find_isomorphism(k, l).is_some()
}

/// Vertex images of a map, handy in tests.
pub fn vertex_values(f: &SimplicialMap) -> Vec<usize> {
    f.assignment()[0].iter().map(|r| r.id()).collect()
}
