//! `Ex(K)_n = hom(sd Δ^n, K)`, computed level by level up to a truncation.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::op;
use crate::sset::levelwise::{build_levelwise, Levelwise, LevelwiseSource};
use crate::sset::search::{enumerate_maps_limited, DEFAULT_MAP_LIMIT};
use crate::sset::standard::{characteristic_map, simplex, simplex_map};
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};
use crate::subdivision::sd::Subdivision;

/// Default inspection depth for `Ex`.
pub const DEFAULT_TRUNC_DIM: usize = 3;
/// Default number of `Ex` stages in a tower.
pub const DEFAULT_STAGES: usize = 2;

/// A simplicial set of which only the simplices up to `trunc_dim` are known.
/// The underlying object is the `trunc_dim`-skeleton.
#[derive(Clone, Debug)]
pub struct TruncatedSSet {
    pub underlying: Arc<SimplicialSet>,
    pub trunc_dim: usize,
}

impl TruncatedSSet {
    /// Fails unless simplices up to `depth` are represented.
    pub fn require(&self, depth: usize) -> Result<()> {
        if depth > self.trunc_dim {
            return Err(Error::TruncationTooShallow { needed: depth, available: self.trunc_dim });
        }
        Ok(())
    }
}

/// A map `sd Δ^n -> K`, stored as its assignment on nondegenerate simplices.
pub type ExElem = Vec<Vec<SimplexRef>>;

/// `sd Δ^n` for `n ≤ N` and `sd` of the generating cosimplicial operators.
#[derive(Clone, Debug)]
pub struct SdSimplices {
    pub subdivisions: Vec<Subdivision>,
    // cofaces[n][i] = sd(δ^i) : sd Δ^{n-1} -> sd Δ^n
    cofaces: Vec<Vec<SimplicialMap>>,
    // codegeneracies[n][j] = sd(σ^j) : sd Δ^{n+1} -> sd Δ^n
    codegeneracies: Vec<Vec<SimplicialMap>>,
}

impl SdSimplices {
    pub fn new(top: usize) -> Self {
        let simplices: Vec<Arc<SimplicialSet>> = (0..=top + 1).map(|n| Arc::new(simplex(n))).collect();
        let subdivisions: Vec<Subdivision> = simplices.iter().map(Subdivision::new).collect();
        let sd_op = |m: usize, n: usize, theta: &[u8]| {
            let f = simplex_map(m, n, theta, simplices[m].clone(), simplices[n].clone());
            subdivisions[m].map(&f, &subdivisions[n])
        };
        let cofaces = (0..=top)
            .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| sd_op(n - 1, n, &op::coface(n, i))).collect() })
            .collect();
        let codegeneracies =
            (0..=top).map(|n| (0..=n).map(|j| sd_op(n + 1, n, &op::codegeneracy(n, j))).collect()).collect();
        SdSimplices { subdivisions, cofaces, codegeneracies }
    }

    pub fn sd(&self, n: usize) -> &Subdivision {
        &self.subdivisions[n]
    }

    pub fn top(&self) -> usize {
        self.cofaces.len() - 1
    }

    /// `sd(θ)` for an arbitrary monotone `θ : [m] -> [n]`.
    pub fn sd_op(&self, theta: &[u8], n: usize) -> SimplicialMap {
        let m = theta.len() - 1;
        let f = simplex_map(m, n, theta, self.subdivisions[m].base.clone(), self.subdivisions[n].base.clone());
        self.subdivisions[m].map(&f, &self.subdivisions[n])
    }
}

/// `z ∘ g` where `z` is an assignment on the target of `g`.
pub fn precompose(g: &SimplicialMap, z: &[Vec<SimplexRef>]) -> ExElem {
    g.assignment()
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|&r| {
                    let img = z[r.base_dim()][r.id()];
                    if r.is_degenerate() {
                        img.degenerate_by(r.dim(), r.epi_mask())
                    } else {
                        img
                    }
                })
                .collect()
        })
        .collect()
}

/// `f ∘ z`.
pub fn postcompose(z: &[Vec<SimplexRef>], f: &SimplicialMap) -> ExElem {
    z.iter().map(|level| level.iter().map(|&r| f.eval(r)).collect()).collect()
}

struct ExSource<'a> {
    ops: &'a SdSimplices,
    base: &'a SimplicialSet,
}

impl LevelwiseSource for ExSource<'_> {
    type Elem = ExElem;

    fn face(&self, n: usize, i: usize, z: &ExElem) -> ExElem {
        precompose(&self.ops.cofaces[n][i], z)
    }

    fn degeneracy(&self, n: usize, j: usize, z: &ExElem) -> ExElem {
        precompose(&self.ops.codegeneracies[n][j], z)
    }

    fn label(&self, n: usize, index: usize, z: &ExElem) -> String {
        if n == 0 {
            let v = z[0][0];
            self.base.label(0, v.id()).to_string()
        } else {
            format!("ex{n}.{index}")
        }
    }
}

/// `Ex(K)` up to `trunc_dim`, with every level materialized.
#[derive(Clone, Debug)]
pub struct ExComplex {
    pub base: Arc<SimplicialSet>,
    pub trunc_dim: usize,
    pub complex: TruncatedSSet,
    pub ops: Arc<SdSimplices>,
    levels: Levelwise<ExElem>,
}

impl ExComplex {
    pub fn new(k: &Arc<SimplicialSet>, trunc_dim: usize) -> Result<Self> {
        Self::with_limit(k, trunc_dim, DEFAULT_MAP_LIMIT, Arc::new(SdSimplices::new(trunc_dim)))
    }

    /// `limit` bounds the size of each level.
    pub fn with_limit(k: &Arc<SimplicialSet>, trunc_dim: usize, limit: usize, ops: Arc<SdSimplices>) -> Result<Self> {
        if ops.top() < trunc_dim {
            return Err(Error::TruncationTooShallow { needed: trunc_dim, available: ops.top() });
        }
        let mut levels = Vec::with_capacity(trunc_dim + 1);
        for n in 0..=trunc_dim {
            let maps = enumerate_maps_limited(&ops.sd(n).object, k, limit).map_err(|e| match e {
                Error::ResourceCap { what, limit, .. } => Error::ResourceCap { what, limit, stage: Some(n) },
                other => other,
            })?;
            levels.push(maps.into_iter().map(|m| m.assignment().to_vec()).collect::<Vec<_>>());
        }
        let levels = build_levelwise(&ExSource { ops: &ops, base: k }, levels)?;
        let complex = TruncatedSSet { underlying: Arc::new(levels.set.clone()), trunc_dim };
        Ok(ExComplex { base: k.clone(), trunc_dim, complex, ops, levels })
    }

    pub fn object(&self) -> &Arc<SimplicialSet> {
        &self.complex.underlying
    }

    /// Number of `n`-simplices, degenerate ones included.
    pub fn level_size(&self, n: usize) -> usize {
        self.levels.elements[n].len()
    }

    pub fn elements(&self, n: usize) -> &[ExElem] {
        &self.levels.elements[n]
    }

    /// The map `sd Δ^n -> K` behind a simplex of `Ex K`.
    pub fn element(&self, r: SimplexRef) -> &ExElem {
        self.levels.element(r)
    }

    pub fn element_map(&self, r: SimplexRef) -> SimplicialMap {
        SimplicialMap::new_unchecked(
            self.ops.sd(r.dim()).object.clone(),
            self.base.clone(),
            self.element(r).clone(),
        )
    }

    /// The simplex of `Ex K` given by a map `sd Δ^n -> K`.
    pub fn simplex_of(&self, n: usize, z: &ExElem) -> Option<SimplexRef> {
        self.levels.normal_form(n, z)
    }

    pub fn normal_forms(&self, n: usize) -> &[SimplexRef] {
        &self.levels.normal_forms[n]
    }

    /// The unit `K -> Ex K`, adjoint to the last-vertex map: a simplex
    /// `x : Δ^n -> K` goes to `x ∘ lv : sd Δ^n -> K`.
    pub fn unit_map(&self) -> Result<SimplicialMap> {
        self.complex.require(self.base.top_dim())?;
        let assignment = self
            .base
            .counts()
            .iter()
            .enumerate()
            .map(|(n, &count)| {
                let sdn = self.ops.sd(n);
                (0..count)
                    .map(|id| {
                        let chi = characteristic_map(&self.base, SimplexRef::nondegenerate(n, id), sdn.base.clone());
                        let z = postcompose(sdn.last_vertex.assignment(), &chi);
                        self.simplex_of(n, &z).expect("every map sd Δ^n -> K is listed")
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialMap::new_unchecked(self.base.clone(), self.object().clone(), assignment))
    }

    /// `Ex f : Ex K -> Ex L` for `f : K -> L`, given `Ex L` to the same depth.
    pub fn map(&self, f: &SimplicialMap, target: &ExComplex) -> Result<SimplicialMap> {
        target.complex.require(self.trunc_dim)?;
        let src = self.object();
        let assignment = src
            .counts()
            .iter()
            .enumerate()
            .map(|(n, &count)| {
                (0..count)
                    .map(|id| {
                        let z = postcompose(self.element(SimplexRef::nondegenerate(n, id)), f);
                        target.simplex_of(n, &z).expect("target level is complete")
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialMap::new_unchecked(src.clone(), target.object().clone(), assignment))
    }
}

/// `Ex(K)` truncated at `trunc_dim`.
pub fn ex(k: &Arc<SimplicialSet>, trunc_dim: usize) -> Result<TruncatedSSet> {
    Ok(ExComplex::new(k, trunc_dim)?.complex)
}

pub fn unit_map(k: &Arc<SimplicialSet>, trunc_dim: usize) -> Result<SimplicialMap> {
    if k.top_dim() > trunc_dim {
        return Err(Error::TruncationTooShallow { needed: k.top_dim(), available: trunc_dim });
    }
    ExComplex::new(k, trunc_dim)?.unit_map()
}

/// Stage `i` of the tower `K -> Ex K -> Ex² K -> …`.
#[derive(Clone, Debug)]
pub struct ExTowerStage {
    pub stage: usize,
    pub complex: TruncatedSSet,
    /// The composite `K -> Ex^i K`.
    pub unit_trace: SimplicialMap,
    /// How `Ex^i K` was built from the previous stage (absent at stage 0).
    pub ex: Option<Arc<ExComplex>>,
}

/// The tower together with the reason it stopped early, if it did.
#[derive(Clone, Debug)]
pub struct ExTower {
    pub stages: Vec<ExTowerStage>,
    pub cap: Option<Error>,
}

pub fn ex_tower(k: &Arc<SimplicialSet>, stages: usize, trunc_dim: usize) -> Result<ExTower> {
    ex_tower_limited(k, stages, trunc_dim, DEFAULT_MAP_LIMIT)
}

pub fn ex_tower_limited(k: &Arc<SimplicialSet>, stages: usize, trunc_dim: usize, limit: usize) -> Result<ExTower> {
    if k.top_dim() > trunc_dim {
        return Err(Error::TruncationTooShallow { needed: k.top_dim(), available: trunc_dim });
    }
    let ops = Arc::new(SdSimplices::new(trunc_dim));
    let mut out = vec![ExTowerStage {
        stage: 0,
        complex: TruncatedSSet { underlying: k.clone(), trunc_dim },
        unit_trace: SimplicialMap::identity(k),
        ex: None,
    }];
    for i in 1..=stages {
        let prev = out.last().expect("stage 0");
        let exc = match ExComplex::with_limit(&prev.complex.underlying, trunc_dim, limit, ops.clone()) {
            Ok(e) => e,
            Err(e) if e.is_resource_cap() => {
                let cap = match e {
                    Error::ResourceCap { what, limit, .. } => Error::ResourceCap { what, limit, stage: Some(i) },
                    other => other,
                };
                return Ok(ExTower { stages: out, cap: Some(cap) });
            }
            Err(e) => return Err(e),
        };
        let unit = exc.unit_map()?;
        let trace = prev.unit_trace.then(&unit);
        out.push(ExTowerStage { stage: i, complex: exc.complex.clone(), unit_trace: trace, ex: Some(Arc::new(exc)) });
    }
    Ok(ExTower { stages: out, cap: None })
}

/// `g^♭ : K -> Ex L` for `g : sd K -> L`; `x` goes to `g ∘ sd(x)`.
pub fn transpose_to_ex(g: &SimplicialMap, sd_k: &Subdivision, ex_l: &ExComplex) -> Result<SimplicialMap> {
    let k = &sd_k.base;
    ex_l.complex.require(k.top_dim())?;
    let assignment = k
        .counts()
        .iter()
        .enumerate()
        .map(|(n, &count)| {
            let sdn = ex_l.ops.sd(n);
            (0..count)
                .map(|id| {
                    let chi = characteristic_map(k, SimplexRef::nondegenerate(n, id), sdn.base.clone());
                    let sd_chi = sdn.map(&chi, sd_k);
                    let z = postcompose(sd_chi.assignment(), g);
                    ex_l.simplex_of(n, &z).ok_or_else(|| Error::InvalidMap("transpose not found in Ex".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialMap::new_unchecked(k.clone(), ex_l.object().clone(), assignment))
}

/// `h^♯ : sd K -> L` for `h : K -> Ex L`; the cell `(x, c)` goes to `h(x)(c)`.
pub fn transpose_to_sd(h: &SimplicialMap, sd_k: &Subdivision, ex_l: &ExComplex) -> SimplicialMap {
    let assignment = sd_k
        .object
        .counts()
        .iter()
        .enumerate()
        .map(|(m, &count)| {
            (0..count)
                .map(|id| {
                    let (x, c) = sd_k.chain(m, id);
                    let z = ex_l.element(h.image(x.dim(), x.id()));
                    let sdn = ex_l.ops.sd(x.dim());
                    let cell = sdn.simplex_of(SimplexRef::nondegenerate(x.dim(), 0), c);
                    let img = z[cell.base_dim()][cell.id()];
                    img.degenerate_by(m, cell.epi_mask())
                })
                .collect()
        })
        .collect();
    SimplicialMap::new_unchecked(sd_k.object.clone(), ex_l.base.clone(), assignment)
}

/// The transposition bijection `hom(sd K, L) ≅ hom(K, Ex L)`.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    pub left: Vec<SimplicialMap>,
    pub right: Vec<SimplicialMap>,
    /// `pairing[a] = b` when `left[a]^♭ = right[b]`.
    pub pairing: Vec<usize>,
}

pub fn check_adjunction(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>, trunc_dim: usize) -> Result<AdjunctionWitness> {
    if k.top_dim() > trunc_dim {
        return Err(Error::TruncationTooShallow { needed: k.top_dim(), available: trunc_dim });
    }
    let sd_k = Subdivision::new(k);
    let ex_l = ExComplex::new(l, trunc_dim)?;
    let left = enumerate_maps_limited(&sd_k.object, l, DEFAULT_MAP_LIMIT)?;
    let right = enumerate_maps_limited(k, ex_l.object(), DEFAULT_MAP_LIMIT)?;
    let right_index: std::collections::HashMap<&[Vec<SimplexRef>], usize> =
        right.iter().enumerate().map(|(i, m)| (m.assignment(), i)).collect();
    let mut pairing = Vec::with_capacity(left.len());
    let mut hit = vec![false; right.len()];
    for (a, g) in left.iter().enumerate() {
        let flat = transpose_to_ex(g, &sd_k, &ex_l)?;
        let b = *right_index.get(flat.assignment()).ok_or_else(|| {
            Error::InvalidMap(format!("transpose of map #{a} out of sd K is not a map K -> Ex L"))
        })?;
        if transpose_to_sd(&right[b], &sd_k, &ex_l).assignment() != g.assignment() {
            return Err(Error::InvalidMap(format!("transposing map #{a} twice does not return it")));
        }
        if hit[b] {
            return Err(Error::InvalidMap(format!("maps out of sd K collide on map #{b} into Ex L")));
        }
        hit[b] = true;
        pairing.push(b);
    }
    if let Some(b) = hit.iter().position(|h| !h) {
        return Err(Error::InvalidMap(format!(
            "cardinality mismatch: {} maps out of sd K, {} into Ex L; map #{b} into Ex L is unmatched",
            left.len(),
            right.len()
        )));
    }
    Ok(AdjunctionWitness { left, right, pairing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::search::vertex_values;
    use crate::sset::standard::{boundary, horn};

    #[test]
    fn ex_of_point_and_interval() {
        let pt = Arc::new(simplex(0));
        let e = ExComplex::new(&pt, 3).unwrap();
        assert_eq!(e.object().counts(), vec![1]);
        assert!(e.unit_map().unwrap().is_isomorphism());

        let d1 = Arc::new(simplex(1));
        let e = ExComplex::new(&d1, 2).unwrap();
        assert_eq!(e.level_size(0), 2);
        assert_eq!(e.level_size(1), 5);
        let nondeg = e.normal_forms(1).iter().filter(|r| !r.is_degenerate()).count();
        assert_eq!(nondeg, 3);
        let unit = e.unit_map().unwrap();
        assert!(unit.is_mono());
        let edge = e.element_map(unit.image(1, 0));
        assert_eq!(vertex_values(&edge), vec![0, 1, 1]);
    }

    #[test]
    fn ex_preserves_discrete() {
        let b = Arc::new(boundary(1));
        let e = ExComplex::new(&b, 3).unwrap();
        assert_eq!(e.object().counts(), vec![2]);
        for n in 0..=3 {
            assert_eq!(e.level_size(n), 2);
        }
        assert!(e.unit_map().unwrap().is_isomorphism());
    }

    #[test]
    fn adjunction_small_cases() {
        let d1 = Arc::new(simplex(1));
        let w = check_adjunction(&d1, &d1, 1).unwrap();
        assert_eq!(w.left.len(), 5);
        let pt = Arc::new(simplex(0));
        let h = Arc::new(horn(2, 1).unwrap());
        assert_eq!(check_adjunction(&pt, &h, 1).unwrap().left.len(), 3);
        let b = Arc::new(boundary(1));
        assert_eq!(check_adjunction(&b, &h, 1).unwrap().left.len(), 9);
    }

    #[test]
    fn towers() {
        let pt = Arc::new(simplex(0));
        let t = ex_tower(&pt, 3, 2).unwrap();
        assert_eq!(t.stages.len(), 4);
        assert!(t.stages.iter().all(|s| s.complex.underlying.counts() == vec![1]));
        let d1 = Arc::new(simplex(1));
        let t = ex_tower(&d1, 0, 2).unwrap();
        assert_eq!(t.stages.len(), 1);
        assert!(matches!(unit_map(&Arc::new(simplex(3)), 2), Err(Error::TruncationTooShallow { .. })));
    }
}
