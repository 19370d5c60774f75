//! Skeletal cell presentations of monomorphisms.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::sset::colimit::pushout;
use crate::sset::standard::{boundary_inclusion, characteristic_map, simplex};
use crate::sset::{SimplexRef, SimplicialMap, SimplicialSet};

/// One cell attachment `stage ∪_{∂Δ^n} Δ^n`.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub dim: usize,
    /// The nondegenerate simplex of the codomain this cell becomes.
    pub cell: SimplexRef,
    /// `∂Δ^n -> result`. It lands in the stage built by the earlier
    /// attachments, whose simplices keep their ids in every later stage.
    pub attaching: SimplicialMap,
}

/// `A ↪ B` written as attachments of the nondegenerate simplices of `B` not
/// in the image of `A`, in increasing dimension and then id order.
#[derive(Clone, Debug)]
pub struct CellPresentation {
    pub source: Arc<SimplicialSet>,
    pub target: Arc<SimplicialSet>,
    pub attachments: Vec<Attachment>,
    /// The last stage and its comparison isomorphism to `B`.
    pub result: Arc<SimplicialSet>,
    pub comparison: SimplicialMap,
}

pub fn cell_presentation(mono: &SimplicialMap) -> Result<CellPresentation> {
    mono.check_mono()?;
    let b = mono.target().clone();
    let mut hit = mono.image_mask();
    let mut stage = mono.source().clone();
    let mut comparison = mono.clone();
    let mut attachments: Vec<Attachment> = Vec::new();
    let parked = Arc::new(SimplicialSet::empty());
    for d in 0..hit.len() {
        for id in 0..hit[d].len() {
            if hit[d][id] {
                continue;
            }
            let (mut att, next, cmp) = attach(&b, &stage, &comparison, d, id)?;
            att.attaching = att.attaching.retarget(parked.clone());
            attachments.push(att);
            stage = next;
            comparison = cmp;
            hit[d][id] = true;
        }
    }
    for att in &mut attachments {
        att.attaching = att.attaching.retarget(stage.clone());
    }
    Ok(CellPresentation {
        source: mono.source().clone(),
        target: b,
        attachments,
        result: stage,
        comparison,
    })
}

fn attach(
    b: &Arc<SimplicialSet>,
    stage: &Arc<SimplicialSet>,
    comparison: &SimplicialMap,
    d: usize,
    id: usize,
) -> Result<(Attachment, Arc<SimplicialSet>, SimplicialMap)> {
    let preimage: HashMap<SimplexRef, SimplexRef> = comparison
        .assignment()
        .iter()
        .enumerate()
        .flat_map(|(k, level)| level.iter().enumerate().map(move |(j, &img)| (img, SimplexRef::nondegenerate(k, j))))
        .collect();
    let cell = SimplexRef::nondegenerate(d, id);
    let delta = Arc::new(simplex(d));
    let chi = characteristic_map(b, cell, delta.clone());
    let bdry = boundary_inclusion(d).retarget(delta.clone());
    let attaching_assignment = bdry
        .assignment()
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|&r| {
                    let img = chi.eval(r);
                    preimage[&img.base()].degenerate_by(img.dim(), img.epi_mask())
                })
                .collect()
        })
        .collect();
    let attaching = SimplicialMap::new(bdry.source().clone(), stage.clone(), attaching_assignment)?;
    let po = pushout(&attaching, &bdry)?;
    let next_cmp = po.induced(comparison, &chi)?;
    Ok((Attachment { dim: d, cell, attaching }, po.object, next_cmp))
}

impl CellPresentation {
    /// Replays the attachments as pushouts of boundary inclusions starting
    /// from the source, returning the final stage.
    pub fn replay(&self) -> Result<Arc<SimplicialSet>> {
        let mut stage = self.source.clone();
        for att in &self.attachments {
            let delta = Arc::new(simplex(att.dim));
            let bdry = boundary_inclusion(att.dim).retarget(delta);
            let attaching = att.attaching.retarget(stage.clone());
            let po = pushout(&attaching, &bdry)?;
            stage = po.object;
        }
        Ok(stage)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.target.counts().len()];
        for att in &self.attachments {
            counts[att.dim] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::sset::standard::horn_inclusion;

    #[test]
    fn examples() {
        let pt = Arc::new(simplex(0));
        let p = cell_presentation(&SimplicialMap::from_empty(&pt)).unwrap();
        assert_eq!(p.attachments.len(), 1);
        assert_eq!(p.attachments[0].dim, 0);

        let p = cell_presentation(&boundary_inclusion(2)).unwrap();
        assert_eq!(p.attachments.iter().map(|a| a.dim).collect::<Vec<_>>(), vec![2]);

        let p = cell_presentation(&horn_inclusion(2, 1).unwrap()).unwrap();
        assert_eq!(p.attachments.iter().map(|a| a.dim).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(p.target.label(1, p.attachments[0].cell.id()), "02");
        assert!(p.comparison.is_isomorphism());
        let replayed = p.replay().unwrap();
        assert_eq!(*replayed, *p.result);
    }

    #[test]
    fn rejects_non_mono() {
        let d1 = Arc::new(simplex(1));
        let pt = Arc::new(simplex(0));
        let f = SimplicialMap::to_point(&d1, &pt);
        assert!(matches!(cell_presentation(&f), Err(Error::NotMono { .. })));
    }
}
