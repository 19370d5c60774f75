//! Bounded horn-filler checks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lifting::problem::ExtensionPlan;
use crate::par;
use crate::sset::search::{MapSearch, TargetIndex, DEFAULT_MAP_LIMIT};
use crate::sset::standard::horn_inclusion;
use crate::sset::{SimplicialMap, SimplicialSet};
use crate::subdivision::ex::ExComplex;
use crate::subdivision::sd::Subdivision;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornCount {
    pub n: usize,
    pub i: usize,
    pub horns: usize,
    pub unfilled: usize,
}

#[derive(Clone, Debug)]
pub struct KanReport {
    pub dim_cap: usize,
    pub counts: Vec<HornCount>,
    /// The first horn without a filler, in `(n, i)` then canonical order.
    pub first_unfilled: Option<(usize, usize, SimplicialMap)>,
}

impl KanReport {
    /// True iff every horn of dimension at most `dim_cap` fills.
    pub fn kan_up_to(&self) -> bool {
        self.deficit() == 0
    }

    /// Total number of horns without a filler.
    pub fn deficit(&self) -> usize {
        self.counts.iter().map(|c| c.unfilled).sum()
    }

    pub fn horns(&self) -> usize {
        self.counts.iter().map(|c| c.horns).sum()
    }
}

fn check_horns(
    n_cap: usize,
    target: &Arc<SimplicialSet>,
    horns_of: impl Fn(&SimplicialMap) -> Result<Vec<SimplicialMap>>,
) -> Result<KanReport> {
    let index = Arc::new(TargetIndex::new(target, n_cap));
    let mut counts = Vec::new();
    let mut first_unfilled = None;
    for n in 1..=n_cap {
        for i in 0..=n {
            let inc = horn_inclusion(n, i)?;
            let horns = horns_of(&inc)?;
            let plan = ExtensionPlan::new(&inc);
            let filled = par::map(&horns, |h| plan.solve(h, Some(index.clone()), None).is_some());
            let unfilled = filled.iter().filter(|f| !**f).count();
            if first_unfilled.is_none() {
                if let Some(p) = filled.iter().position(|f| !f) {
                    first_unfilled = Some((n, i, horns[p].clone()));
                }
            }
            counts.push(HornCount { n, i, horns: horns.len(), unfilled });
        }
    }
    Ok(KanReport { dim_cap: n_cap, counts, first_unfilled })
}

/// Checks every horn `Λ^n_i -> K` with `n ≤ n_cap` for a filler.
pub fn kan_check(k: &Arc<SimplicialSet>, n_cap: usize) -> Result<KanReport> {
    kan_check_limited(k, n_cap, DEFAULT_MAP_LIMIT)
}

pub fn kan_check_limited(k: &Arc<SimplicialSet>, n_cap: usize, limit: usize) -> Result<KanReport> {
    check_horns(n_cap, k, |inc| MapSearch::new(inc.source(), k).all_maps(inc.source(), k, limit))
}

/// Like [`kan_check`], but only for the horns `f ∘ h` with `h` a horn in the
/// source of `f : K_0 -> K`.
pub fn kan_check_along(f: &SimplicialMap, n_cap: usize) -> Result<KanReport> {
    let k0 = f.source();
    check_horns(n_cap, f.target(), |inc| {
        let horns = MapSearch::new(inc.source(), k0).all_maps(inc.source(), k0, DEFAULT_MAP_LIMIT)?;
        Ok(horns.iter().map(|h| h.then(f)).collect())
    })
}

/// An extension of `j ∘ h` over `Λ^n_i -> Δ^n`, where `h : Λ^n_i -> Ex Y`
/// and `j : Ex Y -> Ex² Y`, written through the adjunction as a map
/// `sd Δ^n -> Ex Y` restricting to `h ∘ lv` on `sd Λ^n_i`.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    pub n: usize,
    pub i: usize,
    pub adjoint: SimplicialMap,
}

impl ExtensionWitness {
    /// The witness as a map `Δ^n -> Ex² Y`.
    pub fn transpose(&self, ex_y: &ExComplex, ex2_y: &ExComplex) -> Result<SimplicialMap> {
        crate::subdivision::ex::transpose_to_ex(&self.adjoint, ex_y.ops.sd(self.n), ex2_y)
    }
}

pub fn ex_extension_check(ex_y: &ExComplex, n: usize, i: usize, h: &SimplicialMap) -> Result<ExtensionWitness> {
    ex_y.complex.require(n)?;
    let index = Arc::new(TargetIndex::new(ex_y.object(), n));
    HornExtender::new(ex_y, n, i)?.extend(h, &index)
}

/// `sd Λ^n_i -> sd Δ^n` and the last-vertex map of `sd Λ^n_i`, shared by
/// every horn with the same `(n, i)`.
struct HornExtender<'a> {
    ex_y: &'a ExComplex,
    n: usize,
    i: usize,
    last_vertex: SimplicialMap,
    plan: ExtensionPlan,
}

impl<'a> HornExtender<'a> {
    fn new(ex_y: &'a ExComplex, n: usize, i: usize) -> Result<Self> {
        let inc = horn_inclusion(n, i)?;
        let sd_horn = Subdivision::new(inc.source());
        let sd_inc = sd_horn.map(&inc, ex_y.ops.sd(n));
        Ok(HornExtender { ex_y, n, i, last_vertex: sd_horn.last_vertex, plan: ExtensionPlan::new(&sd_inc) })
    }

    fn extend(&self, h: &SimplicialMap, index: &Arc<TargetIndex>) -> Result<ExtensionWitness> {
        let (n, i) = (self.n, self.i);
        let restricted = self.last_vertex.then(h);
        match self.plan.solve(&restricted, Some(index.clone()), None) {
            Some(adjoint) => Ok(ExtensionWitness { n, i, adjoint }),
            None => {
                let labels: Vec<String> =
                    h.assignment()[0].iter().map(|r| self.ex_y.object().label(0, r.id()).to_string()).collect();
                Err(Error::MissingExtension(format!(
                    "horn Λ^{n}_{i} -> Ex(Y) with vertex images {labels:?} has no extension into Ex²(Y)"
                )))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExExtensionSummary {
    pub n: usize,
    pub i: usize,
    pub horns: usize,
    pub extended: usize,
}

/// Runs [`ex_extension_check`] on every horn `Λ^n_i -> Ex Y` for every `i`.
/// Stops with an error at the first horn without an extension.
pub fn ex_extension_all(ex_y: &ExComplex, n: usize) -> Result<Vec<ExExtensionSummary>> {
    ex_y.complex.require(n)?;
    let target = ex_y.object();
    let index = Arc::new(TargetIndex::new(target, n));
    let mut out = Vec::new();
    for i in 0..=n {
        let inc = horn_inclusion(n, i)?;
        let horns = MapSearch::with_index(inc.source(), target, index.clone()).all_maps(
            inc.source(),
            target,
            DEFAULT_MAP_LIMIT,
        )?;
        let extender = HornExtender::new(ex_y, n, i)?;
        let results = par::map(&horns, |h| extender.extend(h, &index).map(|_| ()));
        for r in results {
            r?;
        }
        out.push(ExExtensionSummary { n, i, horns: horns.len(), extended: horns.len() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{boundary, horn, simplex};

    #[test]
    fn simplices_are_kan() {
        let pt = Arc::new(simplex(0));
        assert!(kan_check(&pt, 3).unwrap().kan_up_to());
    }

    #[test]
    fn interval_is_not_kan() {
        let d1 = Arc::new(simplex(1));
        let r = kan_check(&d1, 2).unwrap();
        assert!(!r.kan_up_to());
        let (n, _, h) = r.first_unfilled.clone().unwrap();
        assert_eq!(n, 2);
        assert!(h.validate().is_ok());
        assert!(r.counts.iter().filter(|c| c.n == 1).all(|c| c.unfilled == 0));
    }

    #[test]
    fn boundary_and_horn_are_not_kan() {
        for k in [boundary(2), horn(2, 1).unwrap()] {
            assert!(!kan_check(&Arc::new(k), 2).unwrap().kan_up_to());
        }
    }

    #[test]
    fn along_identity_matches_plain() {
        let b = Arc::new(boundary(2));
        let plain = kan_check(&b, 2).unwrap();
        let along = kan_check_along(&SimplicialMap::identity(&b), 2).unwrap();
        assert_eq!(plain.counts, along.counts);
    }

    #[test]
    fn ex_extension_of_interval() {
        let d1 = Arc::new(simplex(1));
        let ex = ExComplex::new(&d1, 2).unwrap();
        let summary = ex_extension_all(&ex, 2).unwrap();
        assert_eq!(summary.len(), 3);
        assert!(summary.iter().all(|s| s.horns > 0 && s.extended == s.horns));
    }

    #[test]
    fn extension_transposes_into_ex_squared() {
        let d1 = Arc::new(simplex(1));
        let ex = ExComplex::new(&d1, 2).unwrap();
        let ex2 = ExComplex::new(ex.object(), 2).unwrap();
        let unit = ex.object().clone();
        let j = ex2.unit_map().unwrap();
        let inc = horn_inclusion(2, 1).unwrap();
        let horns = MapSearch::new(inc.source(), &unit).all_maps(inc.source(), &unit, 1000).unwrap();
        for h in horns.iter().take(20) {
            let w = ex_extension_check(&ex, 2, 1, h).unwrap();
            let t = w.transpose(&ex, &ex2).unwrap();
            t.validate().unwrap();
            assert_eq!(inc.then(&t), h.then(&j));
        }
    }

    #[test]
    fn shallow_truncation_is_an_error() {
        let d1 = Arc::new(simplex(1));
        let ex = ExComplex::new(&d1, 1).unwrap();
        assert!(matches!(ex_extension_all(&ex, 2), Err(Error::TruncationTooShallow { .. })));
    }
}
