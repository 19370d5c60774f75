//! Normalized integral chains.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homotopy::snf::SparseMatrix;
use crate::sset::{SimplicialMap, SimplicialSet};

/// Free abelian groups `C_d` with boundaries `∂_d : C_d -> C_{d-1}`.
/// `boundaries[d]` is `∂_d`; `∂_0` is the zero map to the zero group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Basis: nondegenerate simplices. Degenerate faces contribute zero.
    pub fn normalized(k: &SimplicialSet) -> ChainComplex {
        let ranks: Vec<usize> = if k.is_empty() { vec![0] } else { k.counts() };
        let mut boundaries = vec![SparseMatrix::zero(0, ranks[0])];
        for d in 1..ranks.len() {
            let mut m = SparseMatrix::zero(ranks[d - 1], ranks[d]);
            for id in 0..ranks[d] {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (i, f) in k.faces(d, id).iter().enumerate() {
                    if !f.is_degenerate() {
                        *acc.entry(f.id()).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
                    }
                }
                m.columns[id] = acc.into_iter().filter(|e| e.1 != 0).collect();
            }
            boundaries.push(m);
        }
        ChainComplex { ranks, boundaries }
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn boundary(&self, d: usize) -> SparseMatrix {
        match self.boundaries.get(d) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.ranks.get(d - 1).copied().unwrap_or(0), self.ranks.get(d).copied().unwrap_or(0)),
        }
    }

    /// Fails unless `∂_d ∘ ∂_{d+1} = 0` for every `d`.
    pub fn check_dd_zero(&self) -> Result<()> {
        for d in 1..self.boundaries.len() {
            let dd = self.boundaries[d - 1].mul(&self.boundaries[d]);
            if dd.as_ref().is_none_or(|m| !m.is_zero()) {
                return Err(Error::InvalidSimplex(format!("∂∂ ≠ 0 at dimension {d}")));
            }
        }
        Ok(())
    }

    /// The mapping cone of `f_# : C(K) -> C(L)`: `Cone_n = C_{n-1}(K) ⊕ C_n(L)`
    /// with `∂(a, b) = (-∂a, f(a) + ∂b)`.
    pub fn mapping_cone(f: &SimplicialMap) -> ChainComplex {
        let ck = ChainComplex::normalized(f.source());
        let cl = ChainComplex::normalized(f.target());
        let top = (ck.top() + 1).max(cl.top());
        let rk = |d: usize| ck.ranks.get(d).copied().unwrap_or(0);
        let rl = |d: usize| cl.ranks.get(d).copied().unwrap_or(0);
        let ranks: Vec<usize> = (0..=top).map(|n| if n == 0 { rl(0) } else { rk(n - 1) + rl(n) }).collect();
        let mut boundaries = vec![SparseMatrix::zero(0, ranks[0])];
        for n in 1..=top {
            let mut m = SparseMatrix::zero(ranks[n - 1], ranks[n]);
            // rows: C_{n-2}(K) then C_{n-1}(L); columns: C_{n-1}(K) then C_n(L)
            let off_row = if n >= 2 { rk(n - 2) } else { 0 };
            for a in 0..rk(n - 1) {
                let mut col = Vec::new();
                if n >= 2 {
                    for &(r, v) in &ck.boundaries[n - 1].columns[a] {
                        col.push((r, -v));
                    }
                }
                let img = f.image(n - 1, a);
                if !img.is_degenerate() {
                    col.push((off_row + img.id(), 1));
                }
                m.columns[a] = col;
            }
            for b in 0..rl(n) {
                m.columns[rk(n - 1) + b] =
                    cl.boundaries[n].columns[b].iter().map(|&(r, v)| (off_row + r, v)).collect();
            }
            boundaries.push(m);
        }
        ChainComplex { ranks, boundaries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{boundary, simplex, boundary_inclusion};

    #[test]
    fn boundary_squares_to_zero() {
        for k in [simplex(3), boundary(3)] {
            ChainComplex::normalized(&k).check_dd_zero().unwrap();
        }
        ChainComplex::mapping_cone(&boundary_inclusion(2)).check_dd_zero().unwrap();
    }

    #[test]
    fn degenerate_faces_vanish() {
        let (k, _) = crate::sset::colimit::quotient_by(&boundary_inclusion(1)).unwrap();
        let c = ChainComplex::normalized(&k);
        assert_eq!(c.ranks, vec![1, 1]);
        assert!(c.boundaries[1].is_zero());
    }
}
