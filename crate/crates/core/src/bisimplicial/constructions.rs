//! External products, the diagonal and its left adjoint, horn closed forms,
//! the constant embedding and the counit.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bisimplicial::biset::{BiCell, BiSimplexRef, BiSimplicialMap, BiSimplicialSet};
use crate::error::{Error, Result};
use crate::op::{self, Op};
use crate::sset::colimit::subcomplex_mask;
use crate::sset::product::split_pair;
use crate::sset::standard::{simplex, simplex_subcomplex, simplex_subsets};
use crate::sset::{Cell, SimplexRef, SimplicialMap, SimplicialSet};

fn ref_label(k: &SimplicialSet, r: SimplexRef) -> String {
    let base = k.label(r.base_dim(), r.id());
    if r.is_degenerate() {
        format!("s{:?}{}", r.epi_positions(), base)
    } else {
        base.to_string()
    }
}

/// `K □ L`, with `(K □ L)_{j,k} = K_j × L_k`.
pub fn external_product(k: &SimplicialSet, l: &SimplicialSet) -> BiSimplicialSet {
    let mut cells: Vec<Vec<Vec<BiCell>>> = vec![vec![Vec::new(); l.counts().len()]; k.counts().len()];
    for p in 0..k.counts().len() {
        for q in 0..l.counts().len() {
            for a in 0..k.count(p) {
                for b in 0..l.count(q) {
                    let h_faces = k.faces(p, a).iter().map(|&f| box_ref(l, f, SimplexRef::nondegenerate(q, b))).collect();
                    let v_faces = l.faces(q, b).iter().map(|&g| box_ref(l, SimplexRef::nondegenerate(p, a), g)).collect();
                    cells[p][q].push(BiCell::new(format!("{}⊠{}", k.label(p, a), l.label(q, b)), h_faces, v_faces));
                }
            }
        }
    }
    BiSimplicialSet::new_trusted(cells)
}

/// The bisimplex `(x, y)` of `K □ L`.
pub fn box_ref(l: &SimplicialSet, x: SimplexRef, y: SimplexRef) -> BiSimplexRef {
    let id = x.id() * l.count(y.base_dim()) + y.id();
    BiSimplexRef::from_masks(x.dim(), x.epi_mask(), y.dim(), y.epi_mask(), id)
}

/// `f □ g : K □ L -> K' □ L'`.
pub fn external_product_map(
    f: &SimplicialMap,
    g: &SimplicialMap,
    source: &Arc<BiSimplicialSet>,
    target: &Arc<BiSimplicialSet>,
) -> BiSimplicialMap {
    let (k, l) = (f.source(), g.source());
    let l2 = g.target();
    let assignment = (0..source.counts().len())
        .map(|p| {
            (0..source.counts()[0].len())
                .map(|q| {
                    (0..k.count(p))
                        .flat_map(|a| (0..l.count(q)).map(move |b| (a, b)))
                        .map(|(a, b)| box_ref(l2, f.image(p, a), g.image(q, b)))
                        .collect()
                })
                .collect()
        })
        .collect();
    BiSimplicialMap::new_unchecked(source.clone(), target.clone(), assignment)
}

/// The constant embedding `const(M)_{j,k} = M_j`, discrete in the vertical
/// direction. This is `M □ Δ^0`.
pub fn const_geo(m: &SimplicialSet) -> BiSimplicialSet {
    external_product(m, &simplex(0))
}

/// The sub-bisimplicial set on the nondegenerate bisimplices accepted by
/// `keep`, with its inclusion.
pub fn sub_bisimplicial(
    x: &Arc<BiSimplicialSet>,
    keep: impl Fn(usize, usize, usize) -> bool,
) -> Result<(BiSimplicialSet, BiSimplicialMap)> {
    let counts = x.counts();
    let new_id: Vec<Vec<Vec<Option<usize>>>> = counts
        .iter()
        .enumerate()
        .map(|(p, row)| {
            row.iter()
                .enumerate()
                .map(|(q, &n)| {
                    let mut next = 0;
                    (0..n)
                        .map(|id| {
                            keep(p, q, id).then(|| {
                                next += 1;
                                next - 1
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let rename = |r: BiSimplexRef, ids: &Vec<Vec<Vec<Option<usize>>>>| -> Option<BiSimplexRef> {
        let (p, q) = r.base_bidegree();
        let (j, k) = r.bidegree();
        ids[p][q][r.id()].map(|id| BiSimplexRef::from_masks(j, r.hmask(), k, r.vmask(), id))
    };
    let mut cells: Vec<Vec<Vec<BiCell>>> = vec![vec![Vec::new(); counts[0].len()]; counts.len()];
    let mut assignment: Vec<Vec<Vec<BiSimplexRef>>> = vec![vec![Vec::new(); counts[0].len()]; counts.len()];
    for (p, row) in counts.iter().enumerate() {
        for (q, &n) in row.iter().enumerate() {
            for id in 0..n {
                if new_id[p][q][id].is_none() {
                    continue;
                }
                let c = x.cell(p, q, id);
                let faces = |fs: &[BiSimplexRef]| -> Result<Vec<BiSimplexRef>> {
                    fs.iter()
                        .map(|&f| rename(f, &new_id).ok_or(Error::NotSubcomplex { dim: p + q, id }))
                        .collect()
                };
                cells[p][q].push(BiCell::new(c.label.clone(), faces(&c.h_faces)?, faces(&c.v_faces)?));
                assignment[p][q].push(BiSimplexRef::nondegenerate(p, q, id));
            }
        }
    }
    let sub = Arc::new(BiSimplicialSet::new(cells)?);
    assignment.truncate(sub.counts().len());
    for row in &mut assignment {
        row.truncate(sub.counts()[0].len());
    }
    let inc = BiSimplicialMap::new_unchecked(sub.clone(), x.clone(), assignment);
    Ok((Arc::unwrap_or_clone(sub), inc))
}

/// The vertex subsets `(A, B)` behind each nondegenerate bisimplex of
/// `Δ^n □ Δ^n`, as `pairs[p][q][id]`.
pub fn simplex_box_pairs(n: usize) -> Vec<Vec<Vec<(u32, u32)>>> {
    let subsets = simplex_subsets(n);
    subsets
        .iter()
        .map(|a_level| {
            subsets.iter().map(|b_level| a_level.iter().flat_map(|&a| b_level.iter().map(move |&b| (a, b))).collect()).collect()
        })
        .collect()
}

/// The closed form `{(α, β) : some l ≠ i lies outside im α ∪ im β}` inside
/// `Δ^n □ Δ^n`, with its inclusion.
pub fn horn_closed_form(n: usize, i: usize) -> Result<(BiSimplicialSet, BiSimplicialMap)> {
    if i > n || n == 0 {
        return Err(Error::HornIndex { n, i });
    }
    let d = Arc::new(simplex(n));
    let boxed = Arc::new(external_product(&d, &d));
    let pairs = simplex_box_pairs(n);
    let full = op::full_mask(n);
    sub_bisimplicial(&boxed, |p, q, id| {
        let (a, b) = pairs[p][q][id];
        a | b | (1 << i) != full
    })
}

/// Direct count of the `(j, k)`-bisimplices of the horn closed form.
pub fn horn_closed_form_count(n: usize, i: usize, j: usize, k: usize) -> usize {
    let full = op::full_mask(n);
    let alphas = op::monotone_maps(j, n);
    let betas = op::monotone_maps(k, n);
    alphas
        .iter()
        .flat_map(|a| betas.iter().map(move |b| op::image_mask(a) | op::image_mask(b)))
        .filter(|u| u | (1 << i) != full)
        .count()
}

/// `diag_!(K)`: the bisimplicial set `∫^m K_m × (Δ^m □ Δ^m)`.
///
/// Every bisimplex is uniquely `(x, α, β)` with `x` nondegenerate of dimension
/// `m` and `im α ∪ im β = [m]`; the nondegenerate ones have `α`, `β` injective.
#[derive(Clone, Debug)]
pub struct DiagExtension {
    pub base: Arc<SimplicialSet>,
    pub object: Arc<BiSimplicialSet>,
    /// `(x, A, B)` behind each nondegenerate bisimplex, as `cells[p][q][id]`.
    pub cells: Vec<Vec<Vec<(SimplexRef, u32, u32)>>>,
    index: HashMap<(SimplexRef, u32, u32), BiSimplexRef>,
}

fn rank_in(mask: u32, v: u8) -> u8 {
    (mask & ((1u32 << v) - 1)).count_ones() as u8
}

fn normalize_in(
    k: &SimplicialSet,
    index: &HashMap<(SimplexRef, u32, u32), BiSimplexRef>,
    x: SimplexRef,
    alpha: &[u8],
    beta: &[u8],
) -> BiSimplexRef {
    let s = op::image_mask(alpha) | op::image_mask(beta);
    let y = k.apply(x, &op::mono_from_mask(s));
    let lift = |theta: &[u8]| -> Op {
        let rel: Op = theta.iter().map(|&v| rank_in(s, v)).collect();
        if y.is_degenerate() {
            op::compose(&y.epi_op(), &rel)
        } else {
            rel
        }
    };
    let (a, b) = (lift(alpha), lift(beta));
    let cell = index[&(y.base(), op::image_mask(&a), op::image_mask(&b))];
    BiSimplexRef::from_masks(alpha.len() - 1, op::collapsed_mask(&a), beta.len() - 1, op::collapsed_mask(&b), cell.id())
}

impl DiagExtension {
    pub fn new(k: &Arc<SimplicialSet>) -> Result<Self> {
        if k.top_dim() > 5 {
            return Err(Error::DimensionCap { dim: k.top_dim(), cap: 5 });
        }
        let m_top = k.top_dim();
        let mut cells: Vec<Vec<Vec<(SimplexRef, u32, u32)>>> = vec![vec![Vec::new(); m_top + 1]; m_top + 1];
        let mut index = HashMap::new();
        for x in k.nondegenerate() {
            let m = x.dim();
            let full = op::full_mask(m);
            let subsets = op::subsets_by_size(m);
            for &a in &subsets {
                for &b in &subsets {
                    if a | b != full {
                        continue;
                    }
                    let (p, q) = (a.count_ones() as usize - 1, b.count_ones() as usize - 1);
                    index.insert((x, a, b), BiSimplexRef::nondegenerate(p, q, cells[p][q].len()));
                    cells[p][q].push((x, a, b));
                }
            }
        }
        let mut bicells: Vec<Vec<Vec<BiCell>>> = vec![vec![Vec::new(); m_top + 1]; m_top + 1];
        for (p, row) in cells.iter().enumerate() {
            for (q, level) in row.iter().enumerate() {
                for &(x, a, b) in level {
                    let (ma, mb) = (op::mono_from_mask(a), op::mono_from_mask(b));
                    let drop = |mask: u32, i: usize| op::mono_from_mask(mask & !(1 << op::bits(mask).nth(i).unwrap()));
                    let h_faces = if p == 0 { Vec::new() } else { (0..=p).map(|i| normalize_in(k, &index, x, &drop(a, i), &mb)).collect() };
                    let v_faces = if q == 0 { Vec::new() } else { (0..=q).map(|i| normalize_in(k, &index, x, &ma, &drop(b, i))).collect() };
                    let label = format!("{}[{}|{}]", k.label(x.dim(), x.id()), mask_digits(a), mask_digits(b));
                    bicells[p][q].push(BiCell::new(label, h_faces, v_faces));
                }
            }
        }
        let object = Arc::new(BiSimplicialSet::new(bicells)?);
        Ok(DiagExtension { base: k.clone(), object, cells, index })
    }

    /// The bisimplex `(x, α, β)` in normal form, for any simplex `x` of the
    /// base and monotone `α : [j] -> [dim x]`, `β : [k] -> [dim x]`.
    pub fn normalize(&self, x: SimplexRef, alpha: &[u8], beta: &[u8]) -> BiSimplexRef {
        normalize_in(&self.base, &self.index, x, alpha, beta)
    }

    /// `diag_!(f) : diag_!(K) -> diag_!(L)`.
    pub fn map(&self, f: &SimplicialMap, target: &DiagExtension) -> BiSimplicialMap {
        let assignment = self.cells_map(|x, a, b| target.normalize(f.eval(x), &op::mono_from_mask(a), &op::mono_from_mask(b)));
        BiSimplicialMap::new_unchecked(self.object.clone(), target.object.clone(), assignment)
    }

    fn cells_map(&self, f: impl Fn(SimplexRef, u32, u32) -> BiSimplexRef) -> Vec<Vec<Vec<BiSimplexRef>>> {
        let counts = self.object.counts();
        (0..counts.len())
            .map(|p| {
                (0..counts[0].len())
                    .map(|q| self.cells[p][q].iter().map(|&(x, a, b)| f(x, a, b)).collect())
                    .collect()
            })
            .collect()
    }

    /// The counit `diag_!(K) -> const(K)`, `(x, α, β) ↦ α^* x`.
    pub fn counit_map(&self, const_k: &Arc<BiSimplicialSet>) -> BiSimplicialMap {
        let k = &self.base;
        let assignment = self.cells_map(|x, a, b| {
            let s = k.apply(x, &op::mono_from_mask(a));
            let q = b.count_ones() as usize - 1;
            BiSimplexRef::from_masks(s.dim(), s.epi_mask(), q, op::full_mask(q) >> 1, s.id())
        });
        BiSimplicialMap::new_unchecked(self.object.clone(), const_k.clone(), assignment)
    }

    /// The unit `K -> diag^* diag_!(K)`, `x ↦ (x, id, id)`.
    pub fn unit_map(&self, diag: &Diagonal) -> SimplicialMap {
        let k = &self.base;
        let assignment = (0..k.counts().len())
            .map(|m| {
                (0..k.count(m))
                    .map(|id| {
                        let full = op::full_mask(m);
                        diag.simplex_of(self.index[&(SimplexRef::nondegenerate(m, id), full, full)])
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(k.clone(), diag.object.clone(), assignment)
    }

    /// The transpose `diag_!(K) -> X` of `g : K -> diag^* X`.
    pub fn transpose(&self, g: &SimplicialMap, diag: &Diagonal) -> BiSimplicialMap {
        let x = &diag.source;
        let assignment = self.cells_map(|s, a, b| {
            x.apply(diag.bisimplex_of(g.eval(s)), &op::mono_from_mask(a), &op::mono_from_mask(b))
        });
        BiSimplicialMap::new_unchecked(self.object.clone(), x.clone(), assignment)
    }

    /// The transpose `K -> diag^* X` of `f : diag_!(K) -> X`.
    pub fn transpose_back(&self, f: &BiSimplicialMap, diag: &Diagonal) -> SimplicialMap {
        let k = &self.base;
        let assignment = (0..k.counts().len())
            .map(|m| {
                (0..k.count(m))
                    .map(|id| {
                        let full = op::full_mask(m);
                        diag.simplex_of(f.eval(self.index[&(SimplexRef::nondegenerate(m, id), full, full)]))
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(k.clone(), diag.object.clone(), assignment)
    }
}

fn mask_digits(m: u32) -> String {
    op::bits(m).map(|b| b.to_string()).collect()
}

pub fn diag_extend(k: &Arc<SimplicialSet>) -> Result<DiagExtension> {
    DiagExtension::new(k)
}

/// `diag^*(X)`, the simplicial set `n ↦ X_{n,n}`.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub source: Arc<BiSimplicialSet>,
    pub object: Arc<SimplicialSet>,
    cells: Vec<Vec<BiSimplexRef>>,
    index: HashMap<BiSimplexRef, usize>,
}

impl Diagonal {
    pub fn new(x: &Arc<BiSimplicialSet>) -> Self {
        let top = if x.is_empty() { 0 } else { x.top_h() + x.top_v() };
        let mut cells: Vec<Vec<BiSimplexRef>> = Vec::new();
        for n in 0..=top {
            let mut level = Vec::new();
            for p in 0..=n.min(x.top_h()) {
                for q in 0..=n.min(x.top_v()) {
                    let hms = op::surjection_masks(n, p);
                    let vms = op::surjection_masks(n, q);
                    for id in 0..x.count(p, q) {
                        for &hm in &hms {
                            for &vm in &vms {
                                if hm & vm == 0 {
                                    level.push(BiSimplexRef::from_masks(n, hm, n, vm, id));
                                }
                            }
                        }
                    }
                }
            }
            cells.push(level);
        }
        while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let index: HashMap<BiSimplexRef, usize> =
            cells.iter().flat_map(|l| l.iter().enumerate().map(|(i, &r)| (r, i))).collect();
        let mut diag = Diagonal { source: x.clone(), object: Arc::new(SimplicialSet::empty()), cells, index };
        let set_cells: Vec<Vec<Cell>> = diag
            .cells
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .iter()
                    .map(|&r| {
                        let (p, q) = r.base_bidegree();
                        let mut label = x.label(p, q, r.id()).to_string();
                        if r.is_degenerate() {
                            label = format!("{label}~{:?}|{:?}", r.horizontal().epi_positions(), r.vertical().epi_positions());
                        }
                        let faces = if n == 0 {
                            Vec::new()
                        } else {
                            (0..=n).map(|i| diag.simplex_of(x.apply(r, &op::coface(n, i), &op::coface(n, i)))).collect()
                        };
                        Cell::new(label, faces)
                    })
                    .collect()
            })
            .collect();
        diag.object = Arc::new(SimplicialSet::new_trusted(set_cells));
        diag
    }

    /// The simplex of `diag^* X` given by a bisimplex of bidegree `(n, n)`.
    pub fn simplex_of(&self, r: BiSimplexRef) -> SimplexRef {
        let n = r.bidegree().0;
        let (common, h, v) = split_pair(r.horizontal(), r.vertical());
        let m = h.dim();
        let base = BiSimplexRef::from_masks(m, h.epi_mask(), m, v.epi_mask(), r.id());
        SimplexRef::nondegenerate(m, self.index[&base]).degenerate_by(n, common)
    }

    pub fn bisimplex_of(&self, s: SimplexRef) -> BiSimplexRef {
        let n = s.dim();
        self.cells[s.base_dim()][s.id()].degenerate_by(n, s.epi_mask(), n, s.epi_mask())
    }

    /// `diag^*(f)`.
    pub fn map(&self, f: &BiSimplicialMap, target: &Diagonal) -> SimplicialMap {
        let assignment = self.cells.iter().map(|l| l.iter().map(|&r| target.simplex_of(f.eval(r))).collect()).collect();
        SimplicialMap::new_unchecked(self.object.clone(), target.object.clone(), assignment)
    }
}

pub fn diag_restrict(x: &Arc<BiSimplicialSet>) -> Diagonal {
    Diagonal::new(x)
}

/// The subcomplex of `Δ^n` of simplices whose vertex set does not contain
/// all of `complement`.
pub fn fiber_subcomplex(n: usize, complement: u32) -> Result<SimplicialSet> {
    if complement == 0 || complement & !op::full_mask(n) != 0 {
        return Err(Error::EmptyComplement { n });
    }
    Ok(simplex_subcomplex(n, |s| s & complement != complement)?.0)
}

/// A fiber of the horizontal level map of the counit over one vertex.
#[derive(Clone, Debug)]
pub struct CounitFiber {
    /// The `j`-simplex of the base the fiber sits over.
    pub over: SimplexRef,
    pub label: String,
    pub fiber: SimplicialSet,
}

/// The fibers of `diag_!(K)_{j,•} -> const(K)_{j,•}` over every `j`-simplex of `K`.
pub fn counit_fibers(ext: &DiagExtension, j: usize) -> Result<Vec<CounitFiber>> {
    let const_k = Arc::new(const_geo(&ext.base));
    let counit = ext.counit_map(&const_k);
    let from = ext.object.horizontal_level(j);
    let to = const_k.horizontal_level(j);
    let level = counit.level_map(&from, &to);
    let mut out = Vec::new();
    for v in 0..to.set.count(0) {
        let keep: Vec<Vec<bool>> = level
            .assignment()
            .iter()
            .map(|l| l.iter().map(|r| r.base_dim() == 0 && r.id() == v).collect())
            .collect();
        let (fiber, _) = subcomplex_mask(&from.set, &keep)?;
        let over = to.bisimplex_of(SimplexRef::nondegenerate(0, v)).horizontal();
        let over = SimplexRef::from_mask(over.dim(), over.id(), over.epi_mask());
        out.push(CounitFiber { over, label: ref_label(&ext.base, over), fiber });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::product::product;
    use crate::sset::search::is_isomorphic;
    use crate::sset::standard::{horn, horn_inclusion};

    #[test]
    fn box_of_intervals() {
        let d1 = simplex(1);
        let b = external_product(&d1, &d1);
        assert_eq!(b.counts(), vec![vec![4, 2], vec![2, 1]]);
        assert_eq!(b.bisimplex_count(1, 1), 9);
    }

    #[test]
    fn diagonal_of_box_is_product() {
        let d1 = Arc::new(simplex(1));
        let b = Arc::new(external_product(&d1, &d1));
        let diag = diag_restrict(&b);
        let p = product(&d1, &d1).unwrap();
        assert_eq!(diag.object.counts(), vec![4, 5, 2]);
        assert!(is_isomorphic(&diag.object, &p.object));
    }

    #[test]
    fn closed_form_counts() {
        let (c, _) = horn_closed_form(2, 1).unwrap();
        assert_eq!(c.count(0, 0), 7);
        assert_eq!(horn_closed_form_count(2, 1, 0, 0), 7);
        for (j, k) in [(0, 1), (1, 1), (2, 3)] {
            assert_eq!(c.bisimplex_count(j, k), horn_closed_form_count(2, 1, j, k));
        }
        assert!(horn_closed_form(2, 3).is_err());
    }

    #[test]
    fn diag_extension_of_horn() {
        let h = Arc::new(horn(2, 1).unwrap());
        let ext = diag_extend(&h).unwrap();
        assert_eq!(ext.object.count(0, 0), 7);
        for (j, k) in [(0, 0), (1, 0), (1, 1), (2, 2)] {
            assert_eq!(ext.object.bisimplex_count(j, k), horn_closed_form_count(2, 1, j, k));
        }
    }

    #[test]
    fn diag_extension_of_simplex_is_box() {
        let d2 = Arc::new(simplex(2));
        let ext = diag_extend(&d2).unwrap();
        let b = external_product(&d2, &d2);
        assert_eq!(ext.object.counts(), b.counts());
        assert_eq!(ext.object.horizontal_level(1).set.counts()[0], 6 * 3);
    }

    #[test]
    fn unit_and_transposes() {
        let h = Arc::new(horn(2, 1).unwrap());
        let ext = diag_extend(&h).unwrap();
        let diag = diag_restrict(&ext.object);
        let unit = ext.unit_map(&diag);
        unit.validate().unwrap();
        let id = BiSimplicialMap::identity(&ext.object);
        assert_eq!(ext.transpose_back(&id, &diag), unit);
        assert_eq!(ext.transpose(&unit, &diag), id);
        let d2 = Arc::new(simplex(2));
        let ext2 = diag_extend(&d2).unwrap();
        let f = ext.map(&horn_inclusion(2, 1).unwrap(), &ext2);
        f.validate().unwrap();
        assert!(f.is_mono());
    }

    #[test]
    fn counit_and_fibers() {
        let h = Arc::new(horn(2, 1).unwrap());
        let ext = diag_extend(&h).unwrap();
        let c = Arc::new(const_geo(&h));
        ext.counit_map(&c).validate().unwrap();
        for j in 0..=2 {
            let fibers = counit_fibers(&ext, j).unwrap();
            assert_eq!(fibers.len(), h.simplex_count(j));
            for f in fibers {
                let t = h.vertices_of_ref(f.over).iter().fold(1u32 << 1, |m, &v| m | 1 << v);
                let want = Arc::new(fiber_subcomplex(2, op::full_mask(2) & !t).unwrap());
                assert!(is_isomorphic(&Arc::new(f.fiber), &want), "over {}", f.label);
            }
        }
        assert!(matches!(fiber_subcomplex(2, 0), Err(Error::EmptyComplement { .. })));
    }

    #[test]
    fn const_levels_are_discrete() {
        let h = horn(2, 1).unwrap();
        let c = const_geo(&h);
        for j in 0..3 {
            let level = c.horizontal_level(j).set;
            assert_eq!(level.counts(), vec![h.simplex_count(j)]);
        }
    }
}
