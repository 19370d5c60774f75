//! Lifting problems, generating sets and right lifting property certificates.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par;
use crate::sset::search::{MapSearch, TargetIndex, DEFAULT_MAP_LIMIT};
use crate::op;
use crate::sset::standard::{boundary_inclusion, horn_inclusion, simplex, simplex_subsets};
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratingSetName {
    /// Boundary inclusions `∂Δ^n -> Δ^n`.
    IKq,
    /// Horn inclusions `Λ^n_i -> Δ^n`.
    JKq,
    Custom(String),
}

impl std::fmt::Display for GeneratingSetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratingSetName::IKq => write!(f, "I_KQ"),
            GeneratingSetName::JKq => write!(f, "J_KQ"),
            GeneratingSetName::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// A finite set of monomorphisms between finite simplicial sets.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    pub name: GeneratingSetName,
    pub members: Vec<SimplicialMap>,
    pub dim_cap: usize,
    /// Human-readable name of each member.
    pub labels: Vec<String>,
}

impl GeneratingSet {
    /// `∂Δ^n -> Δ^n` for `0 ≤ n ≤ N`.
    pub fn i_kq(dim_cap: usize) -> Self {
        let members = (0..=dim_cap).map(boundary_inclusion).collect();
        let labels = (0..=dim_cap).map(|n| format!("∂Δ^{n} -> Δ^{n}")).collect();
        GeneratingSet { name: GeneratingSetName::IKq, members, dim_cap, labels }
    }

    /// `Λ^n_i -> Δ^n` for `1 ≤ n ≤ N`, `0 ≤ i ≤ n`.
    pub fn j_kq(dim_cap: usize) -> Self {
        let mut members = Vec::new();
        let mut labels = Vec::new();
        for n in 1..=dim_cap {
            for i in 0..=n {
                members.push(horn_inclusion(n, i).expect("valid horn"));
                labels.push(format!("Λ^{n}_{i} -> Δ^{n}"));
            }
        }
        GeneratingSet { name: GeneratingSetName::JKq, members, dim_cap, labels }
    }

    pub fn custom(name: &str, members: Vec<SimplicialMap>) -> Result<Self> {
        for m in &members {
            m.check_mono()?;
        }
        let dim_cap = members.iter().map(|m| m.target().top_dim()).max().unwrap_or(0);
        let labels = (0..members.len()).map(|i| format!("{name}[{i}]")).collect();
        Ok(GeneratingSet { name: GeneratingSetName::Custom(name.to_string()), members, dim_cap, labels })
    }
}

/// A commutative square
/// ```text
///  A --top--> X
///  |          |
/// left      right
///  v          v
///  B -bottom> Y
/// ```
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: SimplicialMap,
    pub right: SimplicialMap,
    pub top: SimplicialMap,
    pub bottom: SimplicialMap,
}

impl LiftingProblem {
    pub fn new(left: SimplicialMap, right: SimplicialMap, top: SimplicialMap, bottom: SimplicialMap) -> Result<Self> {
        let p = LiftingProblem { left, right, top, bottom };
        let corners = [
            ("A", p.left.source(), p.top.source()),
            ("B", p.left.target(), p.bottom.source()),
            ("X", p.top.target(), p.right.source()),
            ("Y", p.bottom.target(), p.right.target()),
        ];
        for (name, u, v) in corners {
            if !(Arc::ptr_eq(u, v) || u.same_structure(v)) {
                return Err(Error::InvalidMap(format!("the square's maps disagree on the corner {name}")));
            }
        }
        if p.top.then(&p.right) != p.left.then(&p.bottom) {
            return Err(Error::NonCommutingSquare("right ∘ top differs from bottom ∘ left".into()));
        }
        Ok(p)
    }

    /// Checks that `h : B -> X` is a diagonal filler.
    pub fn is_lift(&self, h: &SimplicialMap) -> bool {
        h.validate().is_ok() && self.left.then(h) == self.top && h.then(&self.right) == self.bottom
    }
}

/// Conditions on the images of the nondegenerate simplices of `B` coming
/// from a map `A -> B` and a prescribed `A -> X`: `σ^* h(b) = x` whenever
/// `left(a) = σ^* b` and `top(a) = x`.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    by_cell: HashMap<(usize, usize), Vec<(usize, u32, SimplexRef)>>,
}

impl Constraints {
    pub fn new(left: &SimplicialMap, top: &SimplicialMap) -> Self {
        let mut by_cell: HashMap<(usize, usize), Vec<(usize, u32, SimplexRef)>> = HashMap::new();
        for (d, level) in left.assignment().iter().enumerate() {
            for (id, &b) in level.iter().enumerate() {
                let x = top.image(d, id);
                let entry = by_cell.entry((b.base_dim(), b.id())).or_default();
                let c = (b.dim(), b.epi_mask(), x);
                if !entry.contains(&c) {
                    entry.push(c);
                }
            }
        }
        Constraints { by_cell }
    }

    pub fn admits(&self, d: usize, id: usize, cand: SimplexRef) -> bool {
        self.by_cell
            .get(&(d, id))
            .is_none_or(|cs| cs.iter().all(|&(dim, mask, x)| cand.degenerate_by(dim, mask) == x))
    }
}

/// A map out of `Δ^n` is a single `n`-simplex, so extensions along maps into
/// a standard simplex are searched over top simplices directly, using the
/// faces already prescribed by `A`.
struct SimplexPlan {
    n: usize,
    // vertex operator of each nondegenerate simplex of B
    ops: Vec<Vec<Vec<u8>>>,
    // (operator of left(a), dim a, id a) over the nondegenerate simplices of A
    restrictions: Vec<(Vec<u8>, usize, usize)>,
    // the simplex of A whose image is the j-th codimension-one face of B
    faces: Vec<Option<(usize, usize)>>,
}

impl SimplexPlan {
    fn new(left: &SimplicialMap) -> Option<Self> {
        let b = left.target();
        let n = b.top_dim();
        if b.count(n) != 1 || !b.same_structure(&simplex(n)) {
            return None;
        }
        let ops: Vec<Vec<Vec<u8>>> = simplex_subsets(n)
            .iter()
            .map(|level| level.iter().map(|&m| op::mono_from_mask(m).to_vec()).collect())
            .collect();
        let mut restrictions = Vec::new();
        let mut faces = vec![None; n + 1];
        for (d, level) in left.assignment().iter().enumerate() {
            for (id, &r) in level.iter().enumerate() {
                let theta: Vec<u8> = b.vertices_of_ref(r).iter().map(|&v| v as u8).collect();
                if n > 0 && d == n - 1 && !r.is_degenerate() {
                    let missing = (0..=n as u8).find(|v| !theta.contains(v)).expect("codimension one");
                    faces[missing as usize] = Some((d, id));
                }
                restrictions.push((theta, d, id));
            }
        }
        Some(SimplexPlan { n, ops, restrictions, faces })
    }

    fn solve(
        &self,
        left: &SimplicialMap,
        top: &SimplicialMap,
        index: &TargetIndex,
        extra: Option<&(dyn Fn(usize, usize, SimplexRef) -> bool + Sync)>,
    ) -> Option<SimplicialMap> {
        let x = top.target();
        let n = self.n;
        let known: Vec<Option<SimplexRef>> = self.faces.iter().map(|f| f.map(|(d, id)| top.image(d, id))).collect();
        let owned;
        let candidates: &[SimplexRef] = if n == 0 {
            index.with_faces(0, &[])
        } else if known.iter().all(Option::is_some) {
            let key: Vec<SimplexRef> = known.iter().map(|f| f.unwrap()).collect();
            index.with_faces(n, &key)
        } else if let Some(f) = known[0] {
            index.with_end_face(n, false, f)
        } else if let Some(f) = known[n] {
            index.with_end_face(n, true, f)
        } else {
            owned = x.simplices(n);
            &owned
        };
        let mut best: Option<Vec<Vec<SimplexRef>>> = None;
        for &c in candidates {
            if !self.restrictions.iter().all(|(theta, d, id)| x.apply(c, theta) == top.image(*d, *id)) {
                continue;
            }
            let assignment: Vec<Vec<SimplexRef>> =
                self.ops.iter().map(|level| level.iter().map(|theta| x.apply(c, theta)).collect()).collect();
            let ok = extra.is_none_or(|f| {
                assignment.iter().enumerate().all(|(d, level)| level.iter().enumerate().all(|(id, &r)| f(d, id, r)))
            });
            if ok && best.as_ref().is_none_or(|b| assignment < *b) {
                best = Some(assignment);
            }
        }
        best.map(|a| SimplicialMap::new_unchecked(left.target().clone(), x.clone(), a))
    }
}

/// Extensions of `top : A -> X` along a fixed `left : A -> B`, prepared once
/// and reused across many `top`.
pub struct ExtensionPlan {
    left: SimplicialMap,
    simplex: Option<SimplexPlan>,
}

impl ExtensionPlan {
    pub fn new(left: &SimplicialMap) -> Self {
        ExtensionPlan { left: left.clone(), simplex: SimplexPlan::new(left) }
    }

    /// The least extension in canonical order.
    pub fn solve(
        &self,
        top: &SimplicialMap,
        index: Option<Arc<TargetIndex>>,
        extra: Option<&(dyn Fn(usize, usize, SimplexRef) -> bool + Sync)>,
    ) -> Option<SimplicialMap> {
        let b = self.left.target();
        let x = top.target();
        let index = index
            .filter(|i| i.max_dim() >= b.top_dim())
            .unwrap_or_else(|| Arc::new(TargetIndex::new(x, b.top_dim())));
        if let Some(plan) = &self.simplex {
            return plan.solve(&self.left, top, &index, extra);
        }
        let constraints = Constraints::new(&self.left, top);
        let filter =
            |d: usize, id: usize, c: SimplexRef| constraints.admits(d, id, c) && extra.is_none_or(|f| f(d, id, c));
        MapSearch::with_index(b, x, index).filter(&filter).first_map(b, x)
    }

    /// Same search without the shortcut for standard simplices.
    pub fn solve_generic(
        &self,
        top: &SimplicialMap,
        extra: Option<&(dyn Fn(usize, usize, SimplexRef) -> bool + Sync)>,
    ) -> Option<SimplicialMap> {
        let b = self.left.target();
        let x = top.target();
        let constraints = Constraints::new(&self.left, top);
        let filter =
            |d: usize, id: usize, c: SimplexRef| constraints.admits(d, id, c) && extra.is_none_or(|f| f(d, id, c));
        MapSearch::new(b, x).filter(&filter).first_map(b, x)
    }
}

/// Extensions of `top : A -> X` along `left : A -> B`, searched with a shared
/// index on `X`.
pub fn find_extension_with(
    left: &SimplicialMap,
    top: &SimplicialMap,
    index: Option<Arc<TargetIndex>>,
    extra: Option<&(dyn Fn(usize, usize, SimplexRef) -> bool + Sync)>,
) -> Option<SimplicialMap> {
    ExtensionPlan::new(left).solve(top, index, extra)
}

/// The least `B -> X` extending `top` along `left`.
pub fn find_extension(left: &SimplicialMap, top: &SimplicialMap) -> Option<SimplicialMap> {
    find_extension_with(left, top, None, None)
}

/// A diagonal filler, deterministically the least one in canonical order, or
/// `None` if none exists (the search is exhaustive).
pub fn find_lift(p: &LiftingProblem) -> Option<SimplicialMap> {
    find_lift_with(p, None)
}

pub fn find_lift_with(p: &LiftingProblem, index: Option<Arc<TargetIndex>>) -> Option<SimplicialMap> {
    lift_with_plan(&ExtensionPlan::new(&p.left), p, index)
}

fn lift_with_plan(plan: &ExtensionPlan, p: &LiftingProblem, index: Option<Arc<TargetIndex>>) -> Option<SimplicialMap> {
    let right = &p.right;
    let bottom = &p.bottom;
    let over = |d: usize, id: usize, c: SimplexRef| right.eval(c) == bottom.image(d, id);
    plan.solve(&p.top, index, Some(&over))
}

/// One commutative square from a generator to the map under test.
#[derive(Clone, Debug)]
pub struct Square {
    pub member: usize,
    pub top: SimplicialMap,
    pub bottom: SimplicialMap,
}

#[derive(Clone, Debug)]
pub struct SquareOutcome {
    pub square: Square,
    pub lift: Option<SimplicialMap>,
}

/// Outcome of checking every square against a generating set.
#[derive(Clone, Debug)]
pub struct RlpCertificate {
    pub generating_set: String,
    pub holds: bool,
    pub squares_checked: usize,
    pub squares_per_member: Vec<usize>,
    /// Every square with its lift, in enumeration order (when kept).
    pub outcomes: Vec<SquareOutcome>,
    /// The first square without a lift.
    pub first_failure: Option<Square>,
}

/// Every commutative square from `g : A -> B` to `f : X -> Y`.
pub fn enumerate_squares(
    g: &SimplicialMap,
    f: &SimplicialMap,
    member: usize,
    x_index: &Arc<TargetIndex>,
    limit: usize,
) -> Result<Vec<Square>> {
    let (a, b) = (g.source(), g.target());
    let (x, y) = (f.source(), f.target());
    let bottoms = MapSearch::new(b, y).all_maps(b, y, limit)?;
    let mut out = Vec::new();
    for bottom in bottoms {
        let composite = g.then(&bottom);
        let over = |d: usize, id: usize, c: SimplexRef| f.eval(c) == composite.image(d, id);
        let tops = MapSearch::with_index(a, x, x_index.clone()).filter(&over).all_maps(a, x, limit)?;
        for top in tops {
            out.push(Square { member, top, bottom: bottom.clone() });
            if out.len() > limit {
                return Err(Error::ResourceCap { what: "square enumeration".into(), limit, stage: None });
            }
        }
    }
    Ok(out)
}

/// Counts of a pass over every square from one generator to a map.
#[derive(Clone, Debug, Default)]
pub struct SquareScan {
    pub squares: usize,
    pub unsolved: usize,
    /// The first unsolved squares in enumeration order, at most `keep` of them.
    pub kept: Vec<Square>,
}

impl SquareScan {
    fn absorb(&mut self, other: SquareScan, keep: usize) {
        self.squares += other.squares;
        self.unsolved += other.unsolved;
        let room = keep.saturating_sub(self.kept.len());
        self.kept.extend(other.kept.into_iter().take(room));
    }
}

/// Streams every square from `g` to `f` through the lift search without
/// storing the solved ones.
pub fn scan_squares(
    g: &SimplicialMap,
    f: &SimplicialMap,
    member: usize,
    x_index: &Arc<TargetIndex>,
    keep: usize,
    limit: usize,
) -> Result<SquareScan> {
    let (a, b) = (g.source(), g.target());
    let (x, y) = (f.source(), f.target());
    let bottoms = MapSearch::new(b, y).all_maps(b, y, limit)?;
    let plan = ExtensionPlan::new(g);
    let mut total = SquareScan::default();
    for bottom in bottoms {
        let composite = g.then(&bottom);
        let over = |d: usize, id: usize, c: SimplexRef| f.eval(c) == composite.image(d, id);
        let chunks = MapSearch::with_index(a, x, x_index.clone()).filter(&over).fold_chunks(SquareScan::default, |acc, top| {
            acc.squares += 1;
            if acc.unsolved >= limit {
                return;
            }
            let top = SimplicialMap::new_unchecked(a.clone(), x.clone(), top.clone());
            let p = LiftingProblem { left: g.clone(), right: f.clone(), top, bottom: bottom.clone() };
            if lift_with_plan(&plan, &p, Some(x_index.clone())).is_none() {
                acc.unsolved += 1;
                if acc.kept.len() < keep {
                    acc.kept.push(Square { member, top: p.top, bottom: p.bottom });
                }
            }
        });
        for c in chunks {
            total.absorb(c, keep);
        }
        if total.unsolved > limit {
            return Err(Error::ResourceCap { what: "unsolved squares".into(), limit, stage: None });
        }
    }
    Ok(total)
}

/// Index on the source of `f` deep enough for every generator.
pub fn index_for(f: &SimplicialMap, g: &GeneratingSet) -> Arc<TargetIndex> {
    let depth = g.members.iter().map(|m| m.target().top_dim()).max().unwrap_or(0);
    Arc::new(TargetIndex::new(f.source(), depth))
}

pub fn solve_square(g: &SimplicialMap, f: &SimplicialMap, sq: &Square, index: &Arc<TargetIndex>) -> Option<SimplicialMap> {
    let p = LiftingProblem { left: g.clone(), right: f.clone(), top: sq.top.clone(), bottom: sq.bottom.clone() };
    find_lift_with(&p, Some(index.clone()))
}

/// Checks the right lifting property of `f` against every member of `g`.
pub fn has_rlp(f: &SimplicialMap, g: &GeneratingSet) -> Result<RlpCertificate> {
    has_rlp_with(f, g, DEFAULT_MAP_LIMIT, false)
}

pub fn has_rlp_with(f: &SimplicialMap, g: &GeneratingSet, limit: usize, keep_outcomes: bool) -> Result<RlpCertificate> {
    let index = index_for(f, g);
    let mut squares_per_member = Vec::with_capacity(g.members.len());
    if !keep_outcomes {
        let mut first_failure = None;
        for (m, member) in g.members.iter().enumerate() {
            let scan = scan_squares(member, f, m, &index, 1, limit)?;
            squares_per_member.push(scan.squares);
            if first_failure.is_none() {
                first_failure = scan.kept.into_iter().next();
            }
        }
        return Ok(RlpCertificate {
            generating_set: g.name.to_string(),
            holds: first_failure.is_none(),
            squares_checked: squares_per_member.iter().sum(),
            squares_per_member,
            outcomes: Vec::new(),
            first_failure,
        });
    }
    let mut all = Vec::new();
    for (m, member) in g.members.iter().enumerate() {
        let sqs = enumerate_squares(member, f, m, &index, limit)?;
        squares_per_member.push(sqs.len());
        all.extend(sqs);
    }
    let lifts = par::map(&all, |sq| solve_square(&g.members[sq.member], f, sq, &index));
    let first_failure = all.iter().zip(&lifts).find(|(_, l)| l.is_none()).map(|(s, _)| s.clone());
    let outcomes = all.iter().cloned().zip(lifts).map(|(square, lift)| SquareOutcome { square, lift }).collect();
    Ok(RlpCertificate {
        generating_set: g.name.to_string(),
        holds: first_failure.is_none(),
        squares_checked: all.len(),
        squares_per_member,
        outcomes,
        first_failure,
    })
}

/// The unique map to the terminal simplicial set `Δ^0`.
pub fn to_terminal(k: &Arc<SimplicialSet>) -> SimplicialMap {
    SimplicialMap::to_point(k, &Arc::new(crate::sset::standard::point()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{boundary, horn, simplex};

    fn pt() -> Arc<SimplicialSet> {
        Arc::new(simplex(0))
    }

    #[test]
    fn generating_set_sizes() {
        assert_eq!(GeneratingSet::i_kq(3).members.len(), 4);
        assert_eq!(GeneratingSet::j_kq(3).members.len(), 2 + 3 + 4);
    }

    #[test]
    fn lifts_against_terminal() {
        let h = horn_inclusion(2, 1).unwrap();
        let d2 = h.target().clone();
        let p = LiftingProblem::new(h.clone(), to_terminal(&d2), h.clone(), to_terminal(&d2)).unwrap();
        let l = find_lift(&p).unwrap();
        assert!(p.is_lift(&l));
        assert!(l.is_isomorphism());
    }

    #[test]
    fn boundary_of_interval_does_not_lift_into_two_points() {
        let inc = boundary_inclusion(1);
        let b1 = inc.source().clone();
        let p = LiftingProblem::new(
            inc.clone(),
            to_terminal(&b1),
            SimplicialMap::identity(&b1),
            to_terminal(inc.target()),
        )
        .unwrap();
        assert!(find_lift(&p).is_none());
    }

    #[test]
    fn empty_to_point() {
        let x = Arc::new(simplex(2));
        let p = LiftingProblem::new(
            SimplicialMap::from_empty(&pt()),
            SimplicialMap::identity(&x),
            SimplicialMap::from_empty(&x),
            SimplicialMap::new(pt(), x.clone(), vec![vec![SimplexRef::nondegenerate(0, 2)]]).unwrap(),
        )
        .unwrap();
        let l = find_lift(&p).unwrap();
        assert_eq!(l.image(0, 0), SimplexRef::nondegenerate(0, 2));
    }

    #[test]
    fn non_commuting_square_rejected() {
        let inc = boundary_inclusion(1);
        let d1 = inc.target().clone();
        let bad = LiftingProblem::new(
            inc.clone(),
            SimplicialMap::identity(&d1),
            SimplicialMap::new(inc.source().clone(), d1.clone(), vec![vec![SimplexRef::nondegenerate(0, 1); 2]]).unwrap(),
            SimplicialMap::identity(&d1),
        );
        assert!(matches!(bad, Err(Error::NonCommutingSquare(_))));
    }

    #[test]
    fn mismatched_corner_rejected() {
        let h = horn_inclusion(2, 1).unwrap();
        let d2 = h.target().clone();
        let bad = LiftingProblem::new(h.clone(), to_terminal(&d2), to_terminal(h.source()), to_terminal(&d2));
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn simplex_shortcut_agrees_with_generic_search() {
        let targets = [boundary(2), horn(2, 0).unwrap(), simplex(2), crate::sset::colimit::sphere(2)];
        for t in targets {
            let t = Arc::new(t);
            for n in 1..=2 {
                for inc in (0..=n).map(|i| horn_inclusion(n, i).unwrap()).chain([boundary_inclusion(n)]) {
                    let plan = ExtensionPlan::new(&inc);
                    let src = inc.source();
                    for top in MapSearch::new(src, &t).all_maps(src, &t, 10_000).unwrap() {
                        assert_eq!(plan.solve(&top, None, None), plan.solve_generic(&top, None));
                    }
                }
            }
        }
    }

    #[test]
    fn rlp_examples() {
        let d1 = Arc::new(simplex(1));
        assert!(has_rlp(&SimplicialMap::identity(&d1), &GeneratingSet::j_kq(2)).unwrap().holds);
        // an outer horn with one degenerate edge would need the edge 1 -> 0
        let cert = has_rlp(&to_terminal(&d1), &GeneratingSet::j_kq(2)).unwrap();
        assert!(!cert.holds);
        assert_eq!(cert.first_failure.unwrap().member, 2);
        let b1 = Arc::new(boundary(1));
        assert!(has_rlp(&to_terminal(&b1), &GeneratingSet::j_kq(2)).unwrap().holds);
        let b2 = Arc::new(boundary(2));
        let cert = has_rlp_with(&to_terminal(&b2), &GeneratingSet::i_kq(2), 1000, true).unwrap();
        assert!(!cert.holds);
        // the pair of vertices (1, 0) already has no edge
        assert_eq!(cert.first_failure.unwrap().member, 1);
        let identity_square = cert
            .outcomes
            .iter()
            .find(|o| o.square.member == 2 && o.square.top.is_isomorphism())
            .unwrap();
        assert!(identity_square.lift.is_none());
        let h = Arc::new(horn(2, 1).unwrap());
        assert!(!has_rlp(&to_terminal(&h), &GeneratingSet::j_kq(2)).unwrap().holds);
    }
}
