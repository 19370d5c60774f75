//! Elementary collapses as contractibility certificates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sset::{SimplexRef, SimplicialSet};

/// Collapse pairs `(free face, coface)` in order; replaying them leaves one
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub pairs: Vec<((usize, usize), (usize, usize))>,
    pub remaining_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CollapseOutcome {
    Collapsed(CollapseCertificate),
    /// No sequence was found; contractibility is not decided.
    Inconclusive { explored: usize, budget_exhausted: bool },
}

impl CollapseOutcome {
    pub fn certificate(&self) -> Option<&CollapseCertificate> {
        match self {
            CollapseOutcome::Collapsed(c) => Some(c),
            CollapseOutcome::Inconclusive { .. } => None,
        }
    }
}

struct State<'a> {
    k: &'a SimplicialSet,
    alive: Vec<Vec<bool>>,
    /// `users[d][id]`: number of alive simplices with this one as the base of a
    /// codimension-one face, counted with multiplicity.
    users: Vec<Vec<usize>>,
    alive_count: usize,
}

impl<'a> State<'a> {
    fn new(k: &'a SimplicialSet) -> Self {
        let counts = k.counts();
        let alive: Vec<Vec<bool>> = counts.iter().map(|&n| vec![true; n]).collect();
        let mut users: Vec<Vec<usize>> = counts.iter().map(|&n| vec![0; n]).collect();
        for d in 1..counts.len() {
            for id in 0..counts[d] {
                for f in k.faces(d, id) {
                    users[f.base_dim()][f.id()] += 1;
                }
            }
        }
        State { k, alive, users, alive_count: k.total_cells() }
    }

    /// Free pairs `(σ, τ)`: `τ` unused, and `σ` a codimension-one face used
    /// only once, by `τ`.
    fn free_pairs(&self) -> Vec<(SimplexRef, SimplexRef)> {
        let mut out = Vec::new();
        for d in (1..self.alive.len()).rev() {
            for id in 0..self.alive[d].len() {
                if !self.alive[d][id] || self.users[d][id] != 0 {
                    continue;
                }
                for f in self.k.faces(d, id) {
                    if !f.is_degenerate() && self.users[d - 1][f.id()] == 1 {
                        out.push((*f, SimplexRef::nondegenerate(d, id)));
                    }
                }
            }
        }
        out
    }

    fn set(&mut self, r: SimplexRef, alive: bool) {
        let (d, id) = (r.dim(), r.id());
        self.alive[d][id] = alive;
        if d > 0 {
            for f in self.k.faces(d, id) {
                let u = &mut self.users[f.base_dim()][f.id()];
                if alive {
                    *u += 1;
                } else {
                    *u -= 1;
                }
            }
        }
        if alive {
            self.alive_count += 1;
        } else {
            self.alive_count -= 1;
        }
    }

    fn apply(&mut self, (s, t): (SimplexRef, SimplexRef), alive: bool) {
        if alive {
            self.set(s, true);
            self.set(t, true);
        } else {
            self.set(t, false);
            self.set(s, false);
        }
    }
}

fn search(
    st: &mut State<'_>,
    trail: &mut Vec<(SimplexRef, SimplexRef)>,
    explored: &mut usize,
    budget: usize,
) -> Option<bool> {
    if st.alive_count == 1 {
        return Some(true);
    }
    let pairs = st.free_pairs();
    for (n, p) in pairs.into_iter().enumerate() {
        if n > 0 {
            *explored += 1;
            if *explored > budget {
                return None;
            }
        }
        st.apply(p, false);
        trail.push(p);
        match search(st, trail, explored, budget) {
            Some(true) => return Some(true),
            None => return None,
            Some(false) => {}
        }
        trail.pop();
        st.apply(p, true);
    }
    Some(false)
}

/// Greedy elementary collapsing; `budget` bounds the number of alternative
/// choices tried after the greedy path fails.
pub fn collapse_search(k: &SimplicialSet, budget: usize) -> CollapseOutcome {
    if k.count(0) == 0 {
        return CollapseOutcome::Inconclusive { explored: 0, budget_exhausted: false };
    }
    let mut st = State::new(k);
    let mut trail = Vec::new();
    let mut explored = 0;
    match search(&mut st, &mut trail, &mut explored, budget) {
        Some(true) => {
            let remaining_vertex = st.alive[0].iter().position(|a| *a).expect("one vertex remains");
            CollapseOutcome::Collapsed(CollapseCertificate {
                pairs: trail.iter().map(|(s, t)| ((s.dim(), s.id()), (t.dim(), t.id()))).collect(),
                remaining_vertex,
            })
        }
        Some(false) => CollapseOutcome::Inconclusive { explored, budget_exhausted: false },
        None => CollapseOutcome::Inconclusive { explored, budget_exhausted: true },
    }
}

impl CollapseCertificate {
    /// Replays the collapses on `k`, checking every pair is free when used.
    pub fn replay(&self, k: &SimplicialSet) -> Result<()> {
        let mut st = State::new(k);
        for &((sd, sid), (td, tid)) in &self.pairs {
            let (s, t) = (SimplexRef::nondegenerate(sd, sid), SimplexRef::nondegenerate(td, tid));
            if sd >= st.alive.len() || td >= st.alive.len() || sid >= st.alive[sd].len() || tid >= st.alive[td].len() {
                return Err(Error::InvalidSimplex(format!("collapse pair {s:?}, {t:?} out of range")));
            }
            if !st.free_pairs().contains(&(s, t)) {
                return Err(Error::InvalidSimplex(format!("collapse pair {s:?}, {t:?} is not free")));
            }
            st.apply((s, t), false);
        }
        if st.alive_count != 1 || !st.alive[0].get(self.remaining_vertex).is_some_and(|a| *a) {
            return Err(Error::InvalidSimplex("collapses do not end at a single vertex".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisimplicial::fiber_subcomplex;
    use crate::sset::standard::{boundary, simplex};

    #[test]
    fn simplices_collapse() {
        for n in 0..4 {
            let k = simplex(n);
            let c = collapse_search(&k, 100);
            c.certificate().unwrap().replay(&k).unwrap();
        }
        let f = fiber_subcomplex(2, 0b100).unwrap();
        assert!(collapse_search(&f, 100).certificate().is_some());
    }

    #[test]
    fn circle_does_not() {
        assert_eq!(
            collapse_search(&boundary(2), 1000),
            CollapseOutcome::Inconclusive { explored: 0, budget_exhausted: false }
        );
    }
}
