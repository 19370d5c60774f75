//! Bounded small object argument.
//!
//! Each round collects every square from a generator to the current second
//! factor that has no lift and glues in all of them at once along a single
//! pushout of the coproduct of the generators involved.

use std::sync::Arc;

use crate::error::Result;
use crate::lifting::problem::{has_rlp_with, index_for, scan_squares, GeneratingSet, RlpCertificate, Square, SquareScan};
use crate::sset::colimit::{coproduct_labeled, pushout};
use crate::sset::search::DEFAULT_MAP_LIMIT;
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};

pub const DEFAULT_ROUND_CAP: usize = 3;

/// One glued-in copy of a generator.
#[derive(Clone, Debug)]
pub struct SoaAttachment {
    pub round: usize,
    pub member: usize,
    /// The attaching map from the generator's source to the previous stage.
    pub attaching: SimplicialMap,
    /// The generator's target mapped into the new stage.
    pub cell: SimplicialMap,
}

#[derive(Clone, Debug)]
pub struct RoundTrace {
    pub round: usize,
    pub squares: usize,
    pub unsolved: usize,
    pub stage_counts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: Arc<SimplicialSet>,
    pub first: SimplicialMap,
    pub second: SimplicialMap,
    pub rounds_used: usize,
    pub attachments: Vec<SoaAttachment>,
    pub trace: Vec<RoundTrace>,
    /// Squares still without a lift when the round cap was reached, in
    /// enumeration order and truncated to [`RESIDUAL_KEEP`].
    pub residual: Vec<Square>,
    pub residual_count: usize,
    /// Present iff a fixed point was reached.
    pub certificate: Option<RlpCertificate>,
    /// `stage k -> stage k+1` for each round.
    pub legs: Vec<SimplicialMap>,
}

impl Factorization {
    pub fn reached_fixed_point(&self) -> bool {
        self.residual_count == 0 && self.certificate.as_ref().is_some_and(|c| c.holds)
    }

    /// Number of attached generators per dimension of their target.
    pub fn attachment_dims(&self, members: &GeneratingSet) -> Vec<usize> {
        let mut out = vec![0; members.dim_cap + 1];
        for a in &self.attachments {
            out[members.members[a.member].target().top_dim()] += 1;
        }
        out
    }

    /// The inclusion of the stage attached to in `round` into the middle.
    pub fn first_stage_inclusion(&self, round: usize) -> SimplicialMap {
        let start = round - 1;
        let src = self.legs[start].source().clone();
        self.legs[start..].iter().fold(SimplicialMap::identity(&src), |acc, l| acc.then(l))
    }

    /// Rebuilds the middle object from the source by gluing in the recorded
    /// attachments round by round, and compares it to the middle object.
    pub fn replay_matches(&self, g: &GeneratingSet) -> Result<bool> {
        let mut stage = self.first.source().clone();
        for round in 1..=self.rounds_used {
            let atts: Vec<&SoaAttachment> = self.attachments.iter().filter(|a| a.round == round).collect();
            if atts.is_empty() {
                continue;
            }
            if !atts.iter().all(|a| a.attaching.target().same_structure(&stage)) {
                return Ok(false);
            }
            let sources: Vec<Arc<SimplicialSet>> = atts.iter().map(|a| g.members[a.member].source().clone()).collect();
            let targets: Vec<Arc<SimplicialSet>> = atts.iter().map(|a| g.members[a.member].target().clone()).collect();
            let (sum_a, inj_a) = coproduct_labeled(&sources, |i, l| format!("r{round}.{i}:{l}"));
            let (sum_b, inj_b) = coproduct_labeled(&targets, |i, l| format!("r{round}.{i}:{l}"));
            let (sum_a, sum_b) = (Arc::new(sum_a), Arc::new(sum_b));
            let inj_a: Vec<SimplicialMap> = inj_a.iter().map(|m| m.retarget(sum_a.clone())).collect();
            let inj_b: Vec<SimplicialMap> = inj_b.iter().map(|m| m.retarget(sum_b.clone())).collect();
            let tops: Vec<SimplicialMap> = atts.iter().map(|a| a.attaching.retarget(stage.clone())).collect();
            let gens: Vec<SimplicialMap> = atts.iter().zip(&inj_b).map(|(a, inj)| g.members[a.member].then(inj)).collect();
            let po = pushout(&copair(&sum_a, &inj_a, &tops, &stage)?, &copair(&sum_a, &inj_a, &gens, &sum_b)?)?;
            stage = po.object;
        }
        Ok(stage.same_structure(&self.middle))
    }
}

/// The map out of a coproduct given by one map per summand.
pub fn copair(
    sum: &Arc<SimplicialSet>,
    injections: &[SimplicialMap],
    maps: &[SimplicialMap],
    target: &Arc<SimplicialSet>,
) -> Result<SimplicialMap> {
    let mut assignment: Vec<Vec<SimplexRef>> =
        sum.counts().iter().map(|&n| vec![SimplexRef::nondegenerate(0, 0); n]).collect();
    for (inj, m) in injections.iter().zip(maps) {
        for (d, level) in inj.assignment().iter().enumerate() {
            for (id, r) in level.iter().enumerate() {
                assignment[d][r.id()] = m.image(d, id);
            }
        }
    }
    SimplicialMap::new(sum.clone(), target.clone(), assignment)
}

/// Number of residual squares kept when the round cap is reached.
pub const RESIDUAL_KEEP: usize = 256;

fn unsolved_squares(f: &SimplicialMap, g: &GeneratingSet, keep: usize, limit: usize) -> Result<SquareScan> {
    let index = index_for(f, g);
    let mut total = SquareScan::default();
    for (m, member) in g.members.iter().enumerate() {
        let scan = scan_squares(member, f, m, &index, keep, limit)?;
        total.squares += scan.squares;
        total.unsolved += scan.unsolved;
        let room = keep.saturating_sub(total.kept.len());
        total.kept.extend(scan.kept.into_iter().take(room));
    }
    Ok(total)
}

pub fn soa_factorize(f: &SimplicialMap, g: &GeneratingSet, round_cap: usize) -> Result<Factorization> {
    soa_factorize_limited(f, g, round_cap, DEFAULT_MAP_LIMIT)
}

pub fn soa_factorize_limited(
    f: &SimplicialMap,
    g: &GeneratingSet,
    round_cap: usize,
    limit: usize,
) -> Result<Factorization> {
    let mut middle = f.source().clone();
    let mut first = SimplicialMap::identity(&middle);
    let mut second = f.clone();
    let mut attachments = Vec::new();
    let mut trace = Vec::new();
    let mut legs = Vec::new();
    let mut round = 0;
    loop {
        let keep = if round == round_cap { RESIDUAL_KEEP } else { usize::MAX };
        let r = unsolved_squares(&second, g, keep, limit)?;
        trace.push(RoundTrace { round, squares: r.squares, unsolved: r.unsolved, stage_counts: middle.counts() });
        if r.unsolved == 0 {
            let certificate = has_rlp_with(&second, g, limit, false)?;
            return Ok(Factorization {
                middle,
                first,
                second,
                rounds_used: round,
                attachments,
                trace,
                residual_count: 0,
                residual: Vec::new(),
                certificate: Some(certificate),
                legs,
            });
        }
        if round == round_cap {
            return Ok(Factorization {
                middle,
                first,
                second,
                rounds_used: round,
                attachments,
                trace,
                residual_count: r.unsolved,
                residual: r.kept,
                certificate: None,
                legs,
            });
        }
        round += 1;
        let unsolved = r.kept;
        let sources: Vec<Arc<SimplicialSet>> = unsolved.iter().map(|s| g.members[s.member].source().clone()).collect();
        let targets: Vec<Arc<SimplicialSet>> = unsolved.iter().map(|s| g.members[s.member].target().clone()).collect();
        let (sum_a, inj_a) = coproduct_labeled(&sources, |i, l| format!("r{round}.{i}:{l}"));
        let (sum_b, inj_b) = coproduct_labeled(&targets, |i, l| format!("r{round}.{i}:{l}"));
        let (sum_a, sum_b) = (Arc::new(sum_a), Arc::new(sum_b));
        let inj_a: Vec<SimplicialMap> = inj_a.iter().map(|m| m.retarget(sum_a.clone())).collect();
        let inj_b: Vec<SimplicialMap> = inj_b.iter().map(|m| m.retarget(sum_b.clone())).collect();
        let tops: Vec<SimplicialMap> = unsolved.iter().map(|s| s.top.clone()).collect();
        let gens: Vec<SimplicialMap> =
            unsolved.iter().zip(&inj_b).map(|(s, inj)| g.members[s.member].then(inj)).collect();
        let bottoms: Vec<SimplicialMap> = unsolved.iter().map(|s| s.bottom.clone()).collect();
        let top = copair(&sum_a, &inj_a, &tops, &middle)?;
        let along = copair(&sum_a, &inj_a, &gens, &sum_b)?;
        let bottom = copair(&sum_b, &inj_b, &bottoms, second.target())?;
        let po = pushout(&top, &along)?;
        second = po.induced(&second, &bottom)?;
        first = first.then(&po.left_leg);
        for (s, inj) in unsolved.iter().zip(&inj_b) {
            attachments.push(SoaAttachment {
                round,
                member: s.member,
                attaching: s.top.clone(),
                cell: inj.then(&po.right_leg),
            });
        }
        legs.push(po.left_leg);
        middle = po.object;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::problem::{to_terminal, LiftingProblem};
    use crate::sset::standard::{boundary, horn};

    #[test]
    fn already_fibrant_takes_no_rounds() {
        let b1 = Arc::new(boundary(1));
        let fac = soa_factorize(&to_terminal(&b1), &GeneratingSet::j_kq(2), 3).unwrap();
        assert_eq!(fac.rounds_used, 0);
        assert!(fac.reached_fixed_point());
        assert!(fac.middle.same_structure(&b1));
    }

    #[test]
    fn empty_to_point_over_boundaries() {
        let empty = Arc::new(SimplicialSet::empty());
        let g = GeneratingSet::i_kq(2);
        let fac = soa_factorize(&to_terminal(&empty), &g, 3).unwrap();
        assert!(fac.reached_fixed_point());
        assert_eq!(fac.first.then(&fac.second), to_terminal(&empty));
        assert!(fac.first.is_mono());
        assert!(fac.replay_matches(&g).unwrap());
        assert!(!fac.attachments.is_empty());
    }

    #[test]
    fn each_attachment_solves_its_square() {
        let h = Arc::new(horn(2, 1).unwrap());
        let g = GeneratingSet::j_kq(2);
        let fac = soa_factorize(&to_terminal(&h), &g, 1).unwrap();
        assert_eq!(fac.first.then(&fac.second), to_terminal(&h));
        assert!(fac.attachment_dims(&g)[2] > 0);
        for a in &fac.attachments {
            let member = &g.members[a.member];
            let top = a.attaching.then(&fac.first_stage_inclusion(a.round));
            let p = LiftingProblem::new(member.clone(), fac.second.clone(), top, a.cell.then(&fac.second)).unwrap();
            assert!(p.is_lift(&a.cell));
        }
        assert!(fac.replay_matches(&g).unwrap());
    }
}
