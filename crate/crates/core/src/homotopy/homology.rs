//! Integral homology and homology equivalences.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::homotopy::chain::ChainComplex;
use crate::homotopy::pi0::{pi0, pi0_map};
use crate::homotopy::snf::invariant_factors;
use crate::par;
use crate::sset::{SimplicialMap, SimplicialSet};

fn torsion_strings<S: Serializer>(t: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors greater than one.
    #[serde(serialize_with = "torsion_strings")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn get(&self, d: usize) -> HomologyGroup {
        self.groups.get(d).cloned().unwrap_or_default()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// `H̃`: one copy of `Z` removed from `H_0` when it is nonzero.
    pub fn reduced(&self) -> HomologyResult {
        let mut r = self.clone();
        if let Some(g) = r.groups.first_mut() {
            g.betti = g.betti.saturating_sub(1);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_zero)
    }

    /// Vanishing reduced homology of a nonempty complex.
    pub fn is_acyclic(&self) -> bool {
        self.get(0).betti == 1 && self.reduced().is_zero()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().enumerate().map(|(d, g)| format!("H{d} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

pub fn homology_of(c: &ChainComplex) -> Result<HomologyResult> {
    c.check_dd_zero()?;
    let factors: Vec<Vec<BigInt>> = par::range_map(c.ranks.len() + 1, |d| {
        if d == 0 || d > c.top() {
            Vec::new()
        } else {
            invariant_factors(&c.boundaries[d])
        }
    });
    let groups = (0..c.ranks.len())
        .map(|d| {
            let rank_out = factors[d].len();
            let rank_in = &factors[d + 1];
            HomologyGroup {
                betti: c.ranks[d] - rank_out - rank_in.len(),
                torsion: rank_in.iter().filter(|t| !t.is_one()).cloned().collect(),
            }
        })
        .collect();
    Ok(HomologyResult { groups })
}

pub fn homology(k: &SimplicialSet) -> Result<HomologyResult> {
    homology_of(&ChainComplex::normalized(k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalence: bool,
    pub pi0_bijection: bool,
    /// Least degree where the mapping cone has homology.
    pub failing_degree: Option<usize>,
    pub cone: HomologyResult,
    pub oracle: &'static str,
}

/// `f` induces an isomorphism on integral homology (the mapping cone is
/// acyclic) and a bijection on components.
pub fn is_homology_equivalence(f: &SimplicialMap) -> Result<EquivalenceVerdict> {
    let cone = homology_of(&ChainComplex::mapping_cone(f))?;
    let failing_degree = cone.groups.iter().position(|g| !g.is_zero());
    let (cs, ct) = (pi0(f.source()), pi0(f.target()));
    let m = pi0_map(f, &cs, &ct);
    let mut hit = vec![false; ct.count()];
    let mut injective = true;
    for &c in &m {
        injective &= !std::mem::replace(&mut hit[c], true);
    }
    let pi0_bijection = injective && hit.iter().all(|h| *h);
    Ok(EquivalenceVerdict {
        equivalence: failing_degree.is_none() && pi0_bijection,
        pi0_bijection,
        failing_degree,
        cone,
        oracle: "mapping-cone integral homology + pi0",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::colimit::quotient_by;
    use crate::sset::standard::{boundary, boundary_inclusion, simplex};
    use crate::subdivision::sd::Subdivision;
    use std::sync::Arc;

    #[test]
    fn circle_disk_sphere() {
        let h = homology(&boundary(2)).unwrap().reduced();
        assert_eq!(h.betti(), vec![0, 1]);
        for n in 0..4 {
            assert!(homology(&simplex(n)).unwrap().is_acyclic());
        }
        for n in 1..5 {
            let (s, _) = quotient_by(&boundary_inclusion(n)).unwrap();
            let h = homology(&s).unwrap().reduced();
            for d in 0..=n {
                assert_eq!(h.get(d).betti, usize::from(d == n));
                assert!(h.get(d).torsion.is_empty());
            }
        }
    }

    #[test]
    fn equivalences() {
        let d2 = Arc::new(simplex(2));
        assert!(is_homology_equivalence(&SimplicialMap::identity(&d2)).unwrap().equivalence);
        let sd = Subdivision::new(&d2);
        assert!(is_homology_equivalence(&sd.last_vertex).unwrap().equivalence);
        let v = is_homology_equivalence(&boundary_inclusion(2)).unwrap();
        assert!(!v.equivalence);
        assert!(v.pi0_bijection);
        assert_eq!(v.failing_degree, Some(2));
    }
}
