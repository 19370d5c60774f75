//! Enumeration of bisimplicial maps by backtracking over nondegenerate
//! bisimplices.

use std::sync::Arc;

use crate::bisimplicial::biset::{BiSimplexRef, BiSimplicialMap, BiSimplicialSet};
use crate::error::{Error, Result};

struct Search<'a> {
    source: &'a BiSimplicialSet,
    target: &'a BiSimplicialSet,
    order: Vec<(usize, usize, usize)>,
    candidates: Vec<Vec<Vec<BiSimplexRef>>>,
}

impl Search<'_> {
    fn eval(&self, partial: &[Vec<Vec<Option<BiSimplexRef>>>], r: BiSimplexRef) -> BiSimplexRef {
        let (p, q) = r.base_bidegree();
        let (j, k) = r.bidegree();
        partial[p][q][r.id()].expect("faces are assigned first").degenerate_by(j, r.hmask(), k, r.vmask())
    }

    fn fits(&self, partial: &[Vec<Vec<Option<BiSimplexRef>>>], (p, q, id): (usize, usize, usize), c: BiSimplexRef) -> bool {
        let cell = self.source.cell(p, q, id);
        cell.h_faces.iter().enumerate().all(|(i, &f)| self.target.h_face(c, i) == self.eval(partial, f))
            && cell.v_faces.iter().enumerate().all(|(i, &f)| self.target.v_face(c, i) == self.eval(partial, f))
    }

    fn dfs(
        &self,
        pos: usize,
        partial: &mut Vec<Vec<Vec<Option<BiSimplexRef>>>>,
        out: &mut Vec<Vec<Vec<Vec<BiSimplexRef>>>>,
        limit: usize,
    ) -> Result<()> {
        if pos == self.order.len() {
            if out.len() == limit {
                return Err(Error::ResourceCap { what: "bisimplicial map enumeration".into(), limit, stage: None });
            }
            out.push(
                partial
                    .iter()
                    .map(|row| row.iter().map(|l| l.iter().map(|x| x.expect("complete")).collect()).collect())
                    .collect(),
            );
            return Ok(());
        }
        let (p, q, id) = self.order[pos];
        for &c in &self.candidates[p][q] {
            if self.fits(partial, (p, q, id), c) {
                partial[p][q][id] = Some(c);
                self.dfs(pos + 1, partial, out, limit)?;
                partial[p][q][id] = None;
            }
        }
        Ok(())
    }
}

/// Every map `source -> target` in lexicographic order of assignments.
pub fn enumerate_bimaps(
    source: &Arc<BiSimplicialSet>,
    target: &Arc<BiSimplicialSet>,
    limit: usize,
) -> Result<Vec<BiSimplicialMap>> {
    let counts = source.counts();
    let mut order: Vec<(usize, usize, usize)> = Vec::new();
    for total in 0..counts.len() + counts[0].len() {
        for (p, row) in counts.iter().enumerate() {
            if let Some(&n) = total.checked_sub(p).and_then(|q| row.get(q)) {
                order.extend((0..n).map(|id| (p, total - p, id)));
            }
        }
    }
    let candidates = (0..counts.len())
        .map(|p| (0..counts[0].len()).map(|q| target.bisimplices(p, q)).collect())
        .collect();
    let search = Search { source, target, order, candidates };
    let mut partial: Vec<Vec<Vec<Option<BiSimplexRef>>>> =
        counts.iter().map(|row| row.iter().map(|&n| vec![None; n]).collect()).collect();
    let mut out = Vec::new();
    search.dfs(0, &mut partial, &mut out, limit)?;
    Ok(out.into_iter().map(|a| BiSimplicialMap::new_unchecked(source.clone(), target.clone(), a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisimplicial::constructions::{diag_extend, diag_restrict, external_product};
    use crate::sset::search::enumerate_maps;
    use crate::sset::standard::{boundary, horn, simplex};

    #[test]
    fn adjunction_bijection() {
        let ks = [simplex(0), simplex(1), boundary(1), horn(2, 1).unwrap()];
        let d1 = simplex(1);
        let xs = [external_product(&d1, &d1), external_product(&boundary(1), &d1), external_product(&d1, &simplex(0))];
        for k in ks {
            let k = Arc::new(k);
            let ext = diag_extend(&k).unwrap();
            for x in &xs {
                let x = Arc::new(x.clone());
                let diag = diag_restrict(&x);
                let left = enumerate_bimaps(&ext.object, &x, 100_000).unwrap();
                let right = enumerate_maps(&k, &diag.object).unwrap();
                assert_eq!(left.len(), right.len());
                for f in &left {
                    f.validate().unwrap();
                    let g = ext.transpose_back(f, &diag);
                    g.validate().unwrap();
                    assert!(right.contains(&g));
                    assert_eq!(&ext.transpose(&g, &diag), f);
                }
            }
        }
    }
}
