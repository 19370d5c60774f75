//! Coproducts, subcomplexes, pushouts and quotients.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sset::{standard, Cell, SimplexRef, SimplicialMap, SimplicialSet};

/// Disjoint union with its coprojections. Cells of summand `i` are labelled
/// `i:label`.
pub fn coproduct(parts: &[Arc<SimplicialSet>]) -> (SimplicialSet, Vec<SimplicialMap>) {
    coproduct_labeled(parts, |i, label| format!("{i}:{label}"))
}

pub fn coproduct_labeled(
    parts: &[Arc<SimplicialSet>],
    label: impl Fn(usize, &str) -> String,
) -> (SimplicialSet, Vec<SimplicialMap>) {
    let top = parts.iter().map(|p| p.top_dim()).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        let off: Vec<usize> = (0..=top).map(|d| cells[d].len()).collect();
        for (d, level) in part.cells().iter().enumerate() {
            for cell in level {
                let faces = cell.faces.iter().map(|&f| shift(f, &off)).collect();
                cells[d].push(Cell::new(label(i, &cell.label), faces));
            }
        }
        offsets.push(off);
    }
    let sum = Arc::new(SimplicialSet::new_trusted(cells));
    let legs = parts
        .iter()
        .zip(&offsets)
        .map(|(part, off)| {
            let assignment = part
                .counts()
                .iter()
                .enumerate()
                .map(|(d, &n)| (0..n).map(|id| SimplexRef::nondegenerate(d, off[d] + id)).collect())
                .collect();
            SimplicialMap::new_unchecked(part.clone(), sum.clone(), assignment)
        })
        .collect();
    (Arc::unwrap_or_clone(sum), legs)
}

fn shift(r: SimplexRef, off: &[usize]) -> SimplexRef {
    SimplexRef::from_mask(r.dim(), r.id() + off[r.base_dim()], r.epi_mask())
}

/// The subcomplex of `k` spanned by the listed nondegenerate simplices, which
/// must be closed under faces, together with its inclusion. Cells keep the
/// relative order they have in `k`.
pub fn subcomplex(k: &Arc<SimplicialSet>, members: &[SimplexRef]) -> Result<(SimplicialSet, SimplicialMap)> {
    let mut keep: Vec<Vec<bool>> = k.counts().iter().map(|&n| vec![false; n]).collect();
    for &m in members {
        if m.is_degenerate() || !k.contains(m) {
            return Err(Error::InvalidSimplex(format!("{m:?} is not a nondegenerate simplex")));
        }
        keep[m.dim()][m.id()] = true;
    }
    subcomplex_mask(k, &keep)
}

/// Subcomplex given by a membership mask on nondegenerate simplices.
pub fn subcomplex_mask(k: &Arc<SimplicialSet>, keep: &[Vec<bool>]) -> Result<(SimplicialSet, SimplicialMap)> {
    let mut new_id: Vec<Vec<usize>> = Vec::with_capacity(keep.len());
    for level in keep {
        let mut next = 0;
        new_id.push(
            level
                .iter()
                .map(|&b| {
                    if b {
                        next += 1;
                        next - 1
                    } else {
                        usize::MAX
                    }
                })
                .collect(),
        );
    }
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(keep.len());
    let mut assignment = Vec::with_capacity(keep.len());
    for (d, level) in keep.iter().enumerate() {
        let mut row = Vec::new();
        let mut imgs = Vec::new();
        for (id, &b) in level.iter().enumerate() {
            if !b {
                continue;
            }
            let mut faces = Vec::with_capacity(d + 1);
            for &f in k.faces(d, id) {
                let nid = new_id[f.base_dim()][f.id()];
                if nid == usize::MAX {
                    return Err(Error::NotSubcomplex { dim: d, id });
                }
                faces.push(SimplexRef::from_mask(f.dim(), nid, f.epi_mask()));
            }
            row.push(Cell::new(k.label(d, id), faces));
            imgs.push(SimplexRef::nondegenerate(d, id));
        }
        cells.push(row);
        assignment.push(imgs);
    }
    let sub = SimplicialSet::new(cells)?;
    assignment.truncate(sub.counts().len());
    let inc = SimplicialMap::new_unchecked(Arc::new(sub.clone()), k.clone(), assignment);
    Ok((sub, inc))
}

/// The smallest subcomplex containing the given simplices.
pub fn generated_subcomplex(k: &SimplicialSet, seeds: &[SimplexRef]) -> Vec<Vec<bool>> {
    let mut keep: Vec<Vec<bool>> = k.counts().iter().map(|&n| vec![false; n]).collect();
    let mut stack: Vec<SimplexRef> = seeds.iter().map(|r| r.base()).collect();
    while let Some(r) = stack.pop() {
        if keep[r.dim()][r.id()] {
            continue;
        }
        keep[r.dim()][r.id()] = true;
        if r.dim() > 0 {
            stack.extend(k.faces(r.dim(), r.id()).iter().map(|f| f.base()));
        }
    }
    keep
}

/// A pushout square `B -> P <- C` of a span `B <- A -> C`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Arc<SimplicialSet>,
    pub left_leg: SimplicialMap,
    pub right_leg: SimplicialMap,
}

impl Pushout {
    /// The map `P -> Z` induced by a cocone `u : B -> Z`, `v : C -> Z`.
    /// Fails if the cocone is not compatible with the legs.
    pub fn induced(&self, u: &SimplicialMap, v: &SimplicialMap) -> Result<SimplicialMap> {
        let p = &self.object;
        let mut assignment: Vec<Vec<Option<SimplexRef>>> = p.counts().iter().map(|&n| vec![None; n]).collect();
        for (leg, m) in [(&self.left_leg, u), (&self.right_leg, v)] {
            for (d, level) in leg.assignment().iter().enumerate() {
                for (id, img) in level.iter().enumerate() {
                    if img.is_degenerate() {
                        continue;
                    }
                    let val = m.image(d, id);
                    match assignment[d][img.id()] {
                        Some(prev) if prev != val => {
                            return Err(Error::InvalidMap("cocone does not agree on the span".into()));
                        }
                        _ => assignment[d][img.id()] = Some(val),
                    }
                }
            }
        }
        let assignment = assignment
            .into_iter()
            .map(|level| level.into_iter().map(|x| x.expect("legs are jointly surjective")).collect())
            .collect();
        SimplicialMap::new(p.clone(), u.target().clone(), assignment)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // the smaller index becomes the root, so roots are least members
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Pushout of `f : A -> B` and `g : A -> C`, computed as the quotient of
/// `B ⊔ C` by the equivalence relation generated by `f(a) ~ g(a)` over all
/// simplices `a` of `A`. Since that relation is a simplicial subset of
/// `(B ⊔ C)²`, its equivalence closure is already a congruence.
///
/// A class is degenerate exactly when it has a degenerate member. Nondegenerate
/// classes are ordered and labelled by their least member, with `B` before `C`.
pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<Pushout> {
    let a = f.source();
    if !(Arc::ptr_eq(a, g.source()) || **a == **g.source()) {
        return Err(Error::InvalidMap("pushout legs have different sources".into()));
    }
    let (b, c) = (f.target(), g.target());
    let top = b.top_dim().max(c.top_dim());

    // universe: every simplex of B ⊔ C up to `top`, B first, canonical order
    let mut universe: Vec<(u8, SimplexRef)> = Vec::new();
    let mut index: HashMap<(u8, SimplexRef), usize> = HashMap::new();
    let mut dim_start = Vec::with_capacity(top + 2);
    for d in 0..=top {
        dim_start.push(universe.len());
        for (side, k) in [(0u8, b), (1u8, c)] {
            for r in k.simplices(d) {
                index.insert((side, r), universe.len());
                universe.push((side, r));
            }
        }
    }
    dim_start.push(universe.len());

    // simplices of A above `top` only relate degenerate simplices, whose
    // classes are determined by their faces; the legs are checked below
    let mut uf = UnionFind::new(universe.len());
    for d in 0..=top {
        for r in a.simplices(d) {
            let x = index[&(0, f.eval(r))];
            let y = index[&(1, g.eval(r))];
            uf.union(x, y);
        }
    }

    // normal form of every class, dimension by dimension
    let mut class_nf: HashMap<usize, SimplexRef> = HashMap::new();
    let mut degenerate_member: HashMap<usize, usize> = HashMap::new();
    for (i, (_, r)) in universe.iter().enumerate() {
        if r.is_degenerate() {
            let root = uf.find(i);
            degenerate_member.entry(root).or_insert(i);
        }
    }
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    let mut roots_by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for d in 0..=top {
        for i in dim_start[d]..dim_start[d + 1] {
            let root = uf.find(i);
            if root != i {
                continue;
            }
            if let Some(&m) = degenerate_member.get(&root) {
                let (side, r) = universe[m];
                let base_root = uf.find(index[&(side, r.base())]);
                let nf = class_nf[&base_root].degenerate_by(d, r.epi_mask());
                class_nf.insert(root, nf);
            } else {
                let id = roots_by_dim[d].len();
                roots_by_dim[d].push(root);
                class_nf.insert(root, SimplexRef::nondegenerate(d, id));
            }
        }
    }
    for d in 0..=top {
        for &root in &roots_by_dim[d] {
            let (side, r) = universe[root];
            let (k, label) = if side == 0 { (b, b.label(d, r.id())) } else { (c, c.label(d, r.id())) };
            let faces = if d == 0 {
                Vec::new()
            } else {
                (0..=d)
                    .map(|i| {
                        let fr = k.face(r, i);
                        class_nf[&uf.find(index[&(side, fr)])]
                    })
                    .collect()
            };
            cells[d].push(Cell::new(label, faces));
        }
    }
    let object = Arc::new(SimplicialSet::new(cells)?);
    let mut leg = |side: u8, k: &Arc<SimplicialSet>| -> SimplicialMap {
        let assignment = k
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| {
                (0..n)
                    .map(|id| class_nf[&uf.find(index[&(side, SimplexRef::nondegenerate(d, id))])])
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(k.clone(), object.clone(), assignment)
    };
    let left_leg = leg(0, b);
    let right_leg = leg(1, c);
    if f.then(&left_leg) != g.then(&right_leg) {
        return Err(Error::InvalidMap("pushout square does not commute".into()));
    }
    Ok(Pushout { object, left_leg, right_leg })
}

/// `K/A`: collapses the subcomplex spanned by `members` to a point. Collapsing
/// the empty subcomplex adjoins a disjoint basepoint.
pub fn quotient(k: &Arc<SimplicialSet>, members: &[SimplexRef]) -> Result<(SimplicialSet, SimplicialMap)> {
    let (_, inc) = subcomplex(k, members)?;
    quotient_by(&inc)
}

/// Cofiber of a map `A -> K`: the pushout of `K <- A -> Δ^0`.
pub fn quotient_by(inc: &SimplicialMap) -> Result<(SimplicialSet, SimplicialMap)> {
    let pt = Arc::new(standard::point());
    let collapse = SimplicialMap::to_point(inc.source(), &pt);
    let po = pushout(inc, &collapse)?;
    Ok((Arc::unwrap_or_clone(po.object), po.left_leg))
}

/// `Δ^n/∂Δ^n`, the sphere with one vertex and one nondegenerate `n`-simplex.
pub fn sphere(n: usize) -> SimplicialSet {
    quotient_by(&standard::boundary_inclusion(n)).expect("∂Δ^n is a subcomplex").0
}

/// The identity-on-structure map between two presentations that agree up to
/// labels.
pub fn relabel_iso(from: &Arc<SimplicialSet>, to: &Arc<SimplicialSet>) -> Option<SimplicialMap> {
    if !from.same_structure(to) {
        return None;
    }
    Some(SimplicialMap::identity(from).retarget(to.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::search::{enumerate_maps, is_isomorphic};
    use crate::sset::standard::{boundary, boundary_inclusion, horn_inclusion, simplex};

    #[test]
    fn coproduct_of_points() {
        let pt = Arc::new(simplex(0));
        let (s, legs) = coproduct(&[pt.clone(), pt.clone()]);
        assert_eq!(s.counts(), vec![2]);
        assert_eq!(legs[1].image(0, 0), SimplexRef::nondegenerate(0, 1));
    }

    #[test]
    fn pushout_of_identities() {
        let a = Arc::new(boundary(2));
        let id = SimplicialMap::identity(&a);
        let po = pushout(&id, &id).unwrap();
        assert!(is_isomorphic(&po.object, &a));
    }

    #[test]
    fn interval_mod_boundary_is_a_circle() {
        let s = sphere(1);
        assert_eq!(s.counts(), vec![1, 1]);
        s.audit().unwrap();
        let (q, _) = quotient(&Arc::new(simplex(1)), &[
            SimplexRef::nondegenerate(0, 0),
            SimplexRef::nondegenerate(0, 1),
        ])
        .unwrap();
        assert_eq!(q.counts(), vec![1, 1]);
    }

    #[test]
    fn spheres_are_minimal() {
        for n in 1..=4 {
            let s = sphere(n);
            let mut expected = vec![0; n + 1];
            expected[0] = 1;
            expected[n] = 1;
            assert_eq!(s.counts(), expected);
            s.audit().unwrap();
            let top_faces = s.faces(n, 0);
            assert!(top_faces.iter().all(|f| f.base_dim() == 0));
        }
    }

    #[test]
    fn quotient_rejects_non_subcomplex() {
        let d1 = Arc::new(simplex(1));
        let err = quotient(&d1, &[SimplexRef::nondegenerate(1, 0)]).unwrap_err();
        assert_eq!(err, Error::NotSubcomplex { dim: 1, id: 0 });
    }

    #[test]
    fn attaching_a_cell_along_a_horn() {
        // two triangles glued along Λ^2_1
        let h = horn_inclusion(2, 1).unwrap();
        let po = pushout(&h, &h).unwrap();
        assert_eq!(po.object.counts(), vec![3, 4, 2]);
        po.object.audit().unwrap();
    }

    #[test]
    fn pushout_universal_property() {
        let f = boundary_inclusion(1);
        let pt = Arc::new(simplex(0));
        let g = SimplicialMap::to_point(f.source(), &pt);
        let po = pushout(&f, &g).unwrap();
        let z = Arc::new(crate::sset::colimit::sphere(1));
        let maps_from_b = enumerate_maps(f.target(), &z).unwrap();
        let maps_from_c = enumerate_maps(g.target(), &z).unwrap();
        let maps_from_p = enumerate_maps(&po.object, &z).unwrap();
        let mut cocones = 0;
        for u in &maps_from_b {
            for v in &maps_from_c {
                if f.then(u) == g.then(v) {
                    cocones += 1;
                    let h = po.induced(u, v).unwrap();
                    assert_eq!(po.left_leg.then(&h), *u);
                    assert_eq!(po.right_leg.then(&h), *v);
                }
            }
        }
        assert_eq!(cocones, maps_from_p.len());
    }

    #[test]
    fn collapsing_edge_of_triangle_makes_new_degeneracy() {
        // Δ^2 with edge 01 collapsed: the edge becomes a degenerate vertex
        let d2 = Arc::new(simplex(2));
        let (q, _) = quotient(&d2, &[
            SimplexRef::nondegenerate(0, 0),
            SimplexRef::nondegenerate(0, 1),
            SimplexRef::nondegenerate(1, 0),
        ])
        .unwrap();
        assert_eq!(q.counts(), vec![2, 2, 1]);
        q.audit().unwrap();
        assert!(q.faces(2, 0)[2].is_degenerate());
    }
}
