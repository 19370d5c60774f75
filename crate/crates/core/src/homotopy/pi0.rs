//! Path components.

use crate::sset::{SimplicialMap, SimplicialSet};

/// A partition of the vertices. Classes are numbered by their least vertex,
/// which is also the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    /// Vertices of each class in increasing order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count()];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The coequalizer of `d_0, d_1 : K_1 -> K_0`.
pub fn pi0(k: &SimplicialSet) -> Components {
    let n = k.count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    if k.counts().len() > 1 {
        for id in 0..k.count(1) {
            let f = k.faces(1, id);
            let (a, b) = (find(&mut parent, f[0].id()), find(&mut parent, f[1].id()));
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    let mut class_of = vec![0; n];
    let mut representatives = Vec::new();
    let mut class_of_root = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = representatives.len();
            representatives.push(v);
        }
        class_of[v] = class_of_root[r];
    }
    Components { class_of, representatives }
}

/// `π_0(f)` as a map of class indices.
pub fn pi0_map(f: &SimplicialMap, source: &Components, target: &Components) -> Vec<usize> {
    source.representatives.iter().map(|&v| target.class_of[f.image(0, v).id()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{boundary, simplex};
    use crate::subdivision::sd::Subdivision;
    use std::sync::Arc;

    #[test]
    fn small_cases() {
        assert_eq!(pi0(&boundary(1)).count(), 2);
        for n in 0..4 {
            assert_eq!(pi0(&simplex(n)).count(), 1);
        }
        let sd = Subdivision::new(&Arc::new(boundary(2)));
        assert_eq!(pi0(&sd.object).count(), 1);
        assert_eq!(pi0(&SimplicialSet::empty()).count(), 0);
    }
}
