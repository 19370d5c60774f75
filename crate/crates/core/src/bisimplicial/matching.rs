//! Matching objects as strict limits, levelwise components, and the
//! components-surjectivity probe against horns.

use std::sync::Arc;

use serde::Serialize;

use crate::bisimplicial::biset::{BiSimplexRef, BiSimplicialMap, BiSimplicialSet, HorizontalLevel};
use crate::error::Result;
use crate::homotopy::pi0::{pi0, Components};
use crate::op;
use crate::sset::levelwise::{build_levelwise, LevelwiseSource, Levelwise};
use crate::sset::search::{MapSearch, Partial, DEFAULT_MAP_LIMIT};
use crate::sset::standard::horn_inclusion;
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};
use crate::subdivision::ex::TruncatedSSet;

/// The strict limit caveat attached to every matching-object computation.
pub const STRICT_LIMIT_CAVEAT: &str =
    "matching objects are strict limits; homotopically meaningful only for constant or level-discrete directions";

/// `Y` read the other way: `columns[k]` is the simplicial set `j ↦ Y_{j,k}`,
/// with the vertical operators between columns.
#[derive(Clone, Debug)]
pub struct Columns {
    pub transposed: Arc<BiSimplicialSet>,
    pub columns: Vec<HorizontalLevel>,
    // faces[k][i] : column k -> column k-1, degeneracies[k][j] : column k -> column k+1
    faces: Vec<Vec<SimplicialMap>>,
    degeneracies: Vec<Vec<SimplicialMap>>,
}

impl Columns {
    pub fn new(y: &BiSimplicialSet, top: usize) -> Self {
        let t = Arc::new(y.transpose());
        let columns: Vec<HorizontalLevel> = (0..=top + 1).map(|k| t.horizontal_level(k)).collect();
        let faces = (0..=top)
            .map(|k| {
                if k == 0 {
                    Vec::new()
                } else {
                    (0..=k).map(|i| t.horizontal_operator(&columns[k], &columns[k - 1], &op::coface(k, i))).collect()
                }
            })
            .collect();
        let degeneracies = (0..top)
            .map(|k| (0..=k).map(|j| t.horizontal_operator(&columns[k], &columns[k + 1], &op::codegeneracy(k, j))).collect())
            .collect();
        Columns { transposed: t, columns, faces, degeneracies }
    }

    /// The simplex of column `k` given by a bisimplex of `Y` of vertical degree `k`.
    pub fn simplex_of(&self, r: BiSimplexRef) -> SimplexRef {
        self.columns[r.bidegree().1].simplex_of(r.transpose())
    }
}

fn postcompose(z: &Partial, f: &SimplicialMap) -> Partial {
    z.iter().map(|level| level.iter().map(|&r| f.eval(r)).collect()).collect()
}

struct MatchSource<'a> {
    columns: &'a Columns,
}

impl LevelwiseSource for MatchSource<'_> {
    type Elem = Partial;

    fn face(&self, n: usize, i: usize, z: &Partial) -> Partial {
        postcompose(z, &self.columns.faces[n][i])
    }

    fn degeneracy(&self, n: usize, j: usize, z: &Partial) -> Partial {
        postcompose(z, &self.columns.degeneracies[n][j])
    }

    fn label(&self, n: usize, index: usize, z: &Partial) -> String {
        let imgs: Vec<String> = z
            .iter()
            .flatten()
            .map(|r| {
                let c = &self.columns.columns[n].set;
                c.label(r.base_dim(), r.id()).to_string()
            })
            .collect();
        format!("m{n}.{index}({})", imgs.join(","))
    }
}

/// `Match_K(Y)`: its `k`-simplices are the maps from `K` to the column
/// `j ↦ Y_{j,k}`, computed up to vertical degree `trunc`.
#[derive(Clone, Debug)]
pub struct MatchObject {
    pub shape: Arc<SimplicialSet>,
    pub columns: Arc<Columns>,
    pub object: TruncatedSSet,
    levels: Levelwise<Partial>,
}

impl MatchObject {
    pub fn new(k: &Arc<SimplicialSet>, y: &BiSimplicialSet, trunc: usize) -> Result<Self> {
        Self::with_columns(k, Arc::new(Columns::new(y, trunc)), trunc)
    }

    pub fn with_columns(k: &Arc<SimplicialSet>, columns: Arc<Columns>, trunc: usize) -> Result<Self> {
        let levels: Vec<Vec<Partial>> = (0..=trunc)
            .map(|n| MapSearch::new(k, &columns.columns[n].set).all_assignments(DEFAULT_MAP_LIMIT))
            .collect::<Result<_>>()?;
        let lw = build_levelwise(&MatchSource { columns: &columns }, levels)?;
        let object = TruncatedSSet { underlying: Arc::new(lw.set.clone()), trunc_dim: trunc };
        Ok(MatchObject { shape: k.clone(), columns, object, levels: lw })
    }

    /// The element behind a simplex: a map from the shape into a column.
    pub fn element(&self, r: SimplexRef) -> &Partial {
        self.levels.element(r)
    }

    pub fn simplex_of(&self, n: usize, z: &Partial) -> Option<SimplexRef> {
        self.levels.normal_form(n, z)
    }

    /// All `n`-simplices as maps, in level order.
    pub fn elements(&self, n: usize) -> &[Partial] {
        &self.levels.elements[n]
    }

    /// The restriction of a bisimplex `y` of bidegree `(n, k)` along `f : K -> Δ^n`.
    pub fn restrict(&self, y_set: &BiSimplicialSet, y: BiSimplexRef, f: &SimplicialMap) -> Partial {
        let (n, k) = y.bidegree();
        let delta = f.target();
        debug_assert_eq!(delta.top_dim(), n);
        f.assignment()
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&s| {
                        let theta: Vec<u8> = delta.vertices_of_ref(s).iter().map(|&v| v as u8).collect();
                        self.columns.simplex_of(y_set.apply(y, &theta, &op::identity(k)))
                    })
                    .collect()
            })
            .collect()
    }

    /// `Y_{n,•} -> Match_K(Y)` induced by `f : K -> Δ^n`.
    pub fn restriction_map(&self, y_set: &BiSimplicialSet, level: &HorizontalLevel, f: &SimplicialMap) -> Result<SimplicialMap> {
        let trunc = self.object.trunc_dim;
        let assignment = (0..level.set.counts().len().min(trunc + 1))
            .map(|k| {
                (0..level.set.count(k))
                    .map(|id| {
                        let y = level.bisimplex_of(SimplexRef::nondegenerate(k, id));
                        let z = self.restrict(y_set, y, f);
                        self.simplex_of(k, &z).expect("restriction lands in the matching object")
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new(level.set.clone(), self.object.underlying.clone(), assignment)
    }
}

pub fn match_object(k: &Arc<SimplicialSet>, y: &BiSimplicialSet, trunc: usize) -> Result<MatchObject> {
    MatchObject::new(k, y, trunc)
}

struct Pi0Source<'a> {
    y: &'a BiSimplicialSet,
    levels: &'a [HorizontalLevel],
    components: &'a [Components],
}

impl Pi0Source<'_> {
    fn op(&self, from: usize, class: usize, theta: &[u8]) -> usize {
        let v = self.components[from].representatives[class];
        let r = self.levels[from].bisimplex_of(SimplexRef::nondegenerate(0, v));
        let image = self.y.apply(r, theta, &op::identity(0));
        let to = theta.len() - 1;
        self.components[to].class_of[self.levels[to].simplex_of(image).id()]
    }
}

impl LevelwiseSource for Pi0Source<'_> {
    type Elem = usize;

    fn face(&self, n: usize, i: usize, z: &usize) -> usize {
        self.op(n, *z, &op::coface(n, i))
    }

    fn degeneracy(&self, n: usize, j: usize, z: &usize) -> usize {
        self.op(n, *z, &op::codegeneracy(n, j))
    }

    fn label(&self, n: usize, _index: usize, z: &usize) -> String {
        let v = self.components[n].representatives[*z];
        format!("[{}]", self.levels[n].set.label(0, v))
    }
}

/// The simplicial set `j ↦ π_0(Y_{j,•})`, up to dimension `trunc`.
#[derive(Clone, Debug)]
pub struct LevelwisePi0 {
    pub object: TruncatedSSet,
    pub components: Vec<Components>,
}

pub fn levelwise_pi0(y: &BiSimplicialSet, trunc: usize) -> Result<LevelwisePi0> {
    let levels: Vec<HorizontalLevel> = (0..=trunc + 1).map(|j| y.horizontal_level(j)).collect();
    let components: Vec<Components> = levels.iter().map(|l| pi0(&l.set)).collect();
    let elems: Vec<Vec<usize>> = (0..=trunc).map(|j| (0..components[j].count()).collect()).collect();
    let lw = build_levelwise(&Pi0Source { y, levels: &levels, components: &components }, elems)?;
    Ok(LevelwisePi0 {
        object: TruncatedSSet { underlying: Arc::new(lw.set), trunc_dim: trunc },
        components: components.into_iter().take(trunc + 1).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HornProbe {
    pub n: usize,
    pub i: usize,
    /// Components of `Match_Λ(Y) ×_{Match_Λ(Z)} Z_n`.
    pub target_components: usize,
    /// Components meeting the image of `Y_n`.
    pub hit_components: usize,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub horns: Vec<HornProbe>,
    pub caveat: &'static str,
}

impl ProbeReport {
    pub fn passes(&self) -> bool {
        self.horns.iter().all(|h| h.surjective)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// For every horn `Λ^n_i` with `n ≤ n_cap`, checks that
/// `Y_n -> Match_Λ(Y) ×_{Match_Λ(Z)} Z_n` is surjective on components.
pub fn pi0_fibration_probe(f: &BiSimplicialMap, n_cap: usize) -> Result<ProbeReport> {
    let (y, z) = (f.source(), f.target());
    let (ycols, zcols) = (Arc::new(Columns::new(y, 1)), Arc::new(Columns::new(z, 1)));
    // f on columns 0 and 1
    let col_map = |k: usize, r: SimplexRef| -> SimplexRef {
        let b = ycols.columns[k].bisimplex_of(r).transpose();
        zcols.simplex_of(f.eval(b))
    };
    let mut horns = Vec::new();
    for n in 1..=n_cap {
        let (yn, zn) = (y.horizontal_level(n), z.horizontal_level(n));
        for i in 0..=n {
            let inc = horn_inclusion(n, i)?;
            let lam = inc.source().clone();
            let my = MatchObject::with_columns(&lam, ycols.clone(), 1)?;
            let mz = MatchObject::with_columns(&lam, zcols.clone(), 1)?;
            let push = |k: usize, a: &Partial| -> Partial {
                a.iter().map(|l| l.iter().map(|&r| col_map(k, r)).collect()).collect()
            };
            // pullback simplices in degrees 0 and 1
            let mut nodes: Vec<(SimplexRef, SimplexRef)> = Vec::new();
            let mut node_index = std::collections::HashMap::new();
            let zrestrict = |s: SimplexRef| -> Partial { mz.restrict(z, zn.bisimplex_of(s), &inc) };
            let zsimplices = |k: usize| zn.set.simplices(k);
            for a in my.object.underlying.simplices(0) {
                let pa = push(0, my.element(a));
                for zs in zsimplices(0) {
                    if zrestrict(zs) == pa {
                        node_index.insert((a, zs), nodes.len());
                        nodes.push((a, zs));
                    }
                }
            }
            let mut parent: Vec<usize> = (0..nodes.len()).collect();
            {
                for a in my.object.underlying.simplices(1) {
                    let pa = push(1, my.element(a));
                    for zs in zsimplices(1) {
                        if zrestrict(zs) != pa {
                            continue;
                        }
                        let ends: Vec<usize> = (0..2)
                            .map(|e| {
                                let key = (my.object.underlying.face(a, e), zn.set.face(zs, e));
                                node_index[&key]
                            })
                            .collect();
                        let (r0, r1) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
                        parent[r0.max(r1)] = r0.min(r1);
                    }
                }
            }
            let roots: std::collections::BTreeSet<usize> = (0..nodes.len()).map(|x| find(&mut parent, x)).collect();
            let mut hit = std::collections::BTreeSet::new();
            for v in 0..yn.set.count(0) {
                let yb = yn.bisimplex_of(SimplexRef::nondegenerate(0, v));
                let a = my.simplex_of(0, &my.restrict(y, yb, &inc)).expect("restriction is a vertex of the matching object");
                let zs = zn.simplex_of(f.eval(yb));
                hit.insert(find(&mut parent, node_index[&(a, zs)]));
            }
            horns.push(HornProbe {
                n,
                i,
                target_components: roots.len(),
                hit_components: hit.len(),
                surjective: hit.len() == roots.len(),
            });
        }
    }
    Ok(ProbeReport { horns, caveat: STRICT_LIMIT_CAVEAT })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisimplicial::constructions::{const_geo, diag_extend, external_product};
    use crate::sset::search::is_isomorphic;
    use crate::sset::standard::{boundary, horn, simplex};
    use crate::sset::product::product;

    fn corpus() -> Vec<BiSimplicialSet> {
        let d1 = simplex(1);
        vec![
            const_geo(&horn(2, 1).unwrap()),
            const_geo(&horn(2, 1).unwrap()).transpose(),
            external_product(&d1, &boundary(1)),
            diag_extend(&Arc::new(d1.clone())).unwrap().object.as_ref().clone(),
        ]
    }

    #[test]
    fn match_on_simplices_is_the_level() {
        for y in corpus() {
            for n in 0..=2 {
                let d = Arc::new(simplex(n));
                let m = match_object(&d, &y, 2).unwrap();
                let level = y.horizontal_level(n);
                let r = m.restriction_map(&y, &level, &SimplicialMap::identity(&d)).unwrap();
                assert!(r.is_mono());
                assert_eq!(m.object.underlying.counts(), level.set.counts()[..level.set.counts().len().min(3)].to_vec());
            }
        }
    }

    #[test]
    fn match_on_two_points_is_a_product() {
        for y in corpus() {
            let b = Arc::new(boundary(1));
            let m = match_object(&b, &y, 2).unwrap();
            let l0 = y.horizontal_level(0);
            let p = product(&l0.set, &l0.set).unwrap();
            let assignment = (0..m.object.underlying.counts().len())
                .map(|k| {
                    (0..m.object.underlying.count(k))
                        .map(|id| {
                            let z = m.element(SimplexRef::nondegenerate(k, id));
                            let side = |v: usize| {
                                let b = m.columns.columns[k].bisimplex_of(z[0][v]).transpose();
                                l0.simplex_of(b)
                            };
                            p.pair(side(0), side(1)).unwrap()
                        })
                        .collect()
                })
                .collect();
            let f = SimplicialMap::new(m.object.underlying.clone(), p.object.clone(), assignment).unwrap();
            assert!(f.is_mono());
            let truncated: Vec<usize> = p.object.counts().into_iter().take(3).collect();
            assert_eq!(m.object.underlying.counts(), truncated);
        }
    }

    #[test]
    fn components_of_constant_levels() {
        let h = horn(2, 1).unwrap();
        let c = const_geo(&h);
        let p = levelwise_pi0(&c, 2).unwrap();
        assert!(is_isomorphic(&p.object.underlying, &Arc::new(h.clone())));
        let t = levelwise_pi0(&c.transpose(), 2).unwrap();
        assert_eq!(t.object.underlying.counts(), vec![1]);
    }

    #[test]
    fn identity_probe_passes() {
        for y in corpus() {
            let y = Arc::new(y);
            let r = pi0_fibration_probe(&BiSimplicialMap::identity(&y), 2).unwrap();
            assert!(r.passes(), "{r:?}");
            assert_eq!(r.horns.len(), 5);
        }
    }
}
