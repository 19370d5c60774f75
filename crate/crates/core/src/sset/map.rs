use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sset::{SimplexRef, SimplicialSet};

/// A simplicial map, stored as the image of every nondegenerate source simplex.
#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    assignment: Vec<Vec<SimplexRef>>,
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialMap").field("assignment", &self.assignment).finish()
    }
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl Eq for SimplicialMap {}

impl SimplicialMap {
    /// Checks dimensions and compatibility with all face maps.
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        assignment: Vec<Vec<SimplexRef>>,
    ) -> Result<Self> {
        let map = SimplicialMap { source, target, assignment };
        map.validate()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        assignment: Vec<Vec<SimplexRef>>,
    ) -> Self {
        let map = SimplicialMap { source, target, assignment };
        debug_assert!(map.validate().is_ok(), "invalid internal map: {:?}", map.validate());
        map
    }

    pub fn identity(k: &Arc<SimplicialSet>) -> Self {
        let assignment = k
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| (0..n).map(|id| SimplexRef::nondegenerate(d, id)).collect())
            .collect();
        SimplicialMap { source: k.clone(), target: k.clone(), assignment }
    }

    /// The unique map out of the empty simplicial set.
    pub fn from_empty(target: &Arc<SimplicialSet>) -> Self {
        SimplicialMap {
            source: Arc::new(SimplicialSet::empty()),
            target: target.clone(),
            assignment: vec![Vec::new()],
        }
    }

    /// The unique map to a simplicial set with a single vertex and nothing else.
    pub fn to_point(source: &Arc<SimplicialSet>, point: &Arc<SimplicialSet>) -> Self {
        debug_assert_eq!(point.counts(), vec![1]);
        let assignment = source
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| vec![SimplexRef::from_mask(d, 0, crate::op::full_mask(d) >> 1); n])
            .collect();
        SimplicialMap { source: source.clone(), target: point.clone(), assignment }
    }

    pub fn validate(&self) -> Result<()> {
        if self.assignment.len() != self.source.counts().len() {
            return Err(Error::InvalidMap("assignment does not cover every dimension".into()));
        }
        for (d, level) in self.assignment.iter().enumerate() {
            if level.len() != self.source.count(d) {
                return Err(Error::InvalidMap(format!("dimension {d}: wrong number of images")));
            }
            for (id, &img) in level.iter().enumerate() {
                if img.dim() != d || !self.target.contains(img) {
                    return Err(Error::InvalidMap(format!(
                        "{d}-simplex #{id} maps to invalid simplex {img:?}"
                    )));
                }
                if d == 0 {
                    continue;
                }
                for (i, &f) in self.source.faces(d, id).iter().enumerate() {
                    if self.eval(f) != self.target.face(img, i) {
                        return Err(Error::InvalidMap(format!(
                            "does not commute with d_{i} on {d}-simplex #{id}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn assignment(&self) -> &[Vec<SimplexRef>] {
        &self.assignment
    }

    pub fn image(&self, d: usize, id: usize) -> SimplexRef {
        self.assignment[d][id]
    }

    /// Image of an arbitrary simplex: `f(σ^* x) = σ^* f(x)`.
    pub fn eval(&self, r: SimplexRef) -> SimplexRef {
        let img = self.assignment[r.base_dim()][r.id()];
        if r.is_degenerate() {
            img.degenerate_by(r.dim(), r.epi_mask())
        } else {
            img
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> SimplicialMap {
        debug_assert!(
            Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source,
            "composing maps with mismatched objects"
        );
        let assignment = self
            .assignment
            .iter()
            .map(|level| level.iter().map(|&r| other.eval(r)).collect())
            .collect();
        SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment,
        }
    }

    /// Same assignment, reinterpreted against a structurally identical target.
    pub fn retarget(&self, target: Arc<SimplicialSet>) -> SimplicialMap {
        SimplicialMap { source: self.source.clone(), target, assignment: self.assignment.clone() }
    }

    pub fn resource(&self, source: Arc<SimplicialSet>) -> SimplicialMap {
        SimplicialMap { source, target: self.target.clone(), assignment: self.assignment.clone() }
    }

    /// Injective on nondegenerate simplices and never sends one to a degenerate
    /// simplex. This is exactly the monomorphism condition.
    pub fn check_mono(&self) -> Result<()> {
        for (d, level) in self.assignment.iter().enumerate() {
            let mut seen = vec![usize::MAX; self.target.count(d)];
            for (id, img) in level.iter().enumerate() {
                if img.is_degenerate() {
                    return Err(Error::DegenerateImage { dim: d, id });
                }
                if seen[img.id()] != usize::MAX {
                    return Err(Error::NotMono { dim: d, first: seen[img.id()], second: id });
                }
                seen[img.id()] = id;
            }
        }
        Ok(())
    }

    pub fn is_mono(&self) -> bool {
        self.check_mono().is_ok()
    }

    /// Bijective on nondegenerate simplices.
    pub fn is_isomorphism(&self) -> bool {
        self.is_mono() && self.source.counts() == self.target.counts()
    }

    /// Whether a nondegenerate target simplex lies in the image.
    pub fn image_mask(&self) -> Vec<Vec<bool>> {
        let mut hit: Vec<Vec<bool>> = self.target.counts().iter().map(|&n| vec![false; n]).collect();
        for level in &self.assignment {
            for img in level {
                hit[img.base_dim()][img.id()] = true;
            }
        }
        hit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard;

    #[test]
    fn identity_validates() {
        let k = Arc::new(standard::simplex(3));
        let id = SimplicialMap::identity(&k);
        id.validate().unwrap();
        assert!(id.is_isomorphism());
    }

    #[test]
    fn rejects_non_commuting_assignment() {
        let d1 = Arc::new(standard::simplex(1));
        // edge sent to itself but vertex 0 sent to vertex 1
        let bad = SimplicialMap::new(
            d1.clone(),
            d1.clone(),
            vec![
                vec![SimplexRef::nondegenerate(0, 1), SimplexRef::nondegenerate(0, 1)],
                vec![SimplexRef::nondegenerate(1, 0)],
            ],
        );
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn collapse_to_point_is_not_mono() {
        let d1 = Arc::new(standard::simplex(1));
        let pt = Arc::new(standard::simplex(0));
        let f = SimplicialMap::to_point(&d1, &pt);
        f.validate().unwrap();
        assert!(matches!(f.check_mono(), Err(Error::NotMono { dim: 0, first: 0, second: 1 })));
        assert!(SimplicialMap::to_point(&pt, &pt).is_isomorphism());
    }
}
