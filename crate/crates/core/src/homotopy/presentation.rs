//! Edge-path group presentations, for inspection only.

use std::collections::VecDeque;

use serde::Serialize;

use crate::homotopy::pi0::pi0;
use crate::sset::{SimplexRef, SimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub base_vertex: usize,
    /// Edge ids of the nondegenerate edges outside the spanning tree.
    pub generators: Vec<usize>,
    pub generator_labels: Vec<String>,
    /// Words in the generators as `(generator index, ±1)`, freely reduced.
    pub relators: Vec<Vec<(usize, i8)>>,
    pub warning: Option<String>,
}

fn free_reduce(word: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::with_capacity(word.len());
    for x in word {
        if out.last().is_some_and(|&(g, e)| g == x.0 && e == -x.1) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Generators are the edges outside a breadth-first spanning tree of the
/// base component; each nondegenerate triangle gives `d_2 · d_0 · d_1^{-1}`.
/// Words are freely reduced and generators equal to a single relator dropped.
pub fn edge_path_presentation(k: &SimplicialSet, base_vertex: usize) -> Presentation {
    let comps = pi0(k);
    let component = comps.class_of[base_vertex];
    let warning = (comps.count() > 1).then(|| {
        format!("input has {} components; restricted to the component of vertex {base_vertex}", comps.count())
    });
    let nv = k.count(0);
    let ne = if k.counts().len() > 1 { k.count(1) } else { 0 };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for e in 0..ne {
        let f = k.faces(1, e);
        let (a, b) = (f[1].id(), f[0].id());
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut in_tree = vec![false; ne];
    let mut seen = vec![false; nv];
    seen[base_vertex] = true;
    let mut queue = VecDeque::from([base_vertex]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    let in_component = |e: usize| comps.class_of[k.faces(1, e)[0].id()] == component;
    let generators: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && in_component(e)).collect();
    let gen_index = |r: SimplexRef| -> Option<usize> {
        if r.is_degenerate() {
            None
        } else {
            generators.iter().position(|&g| g == r.id())
        }
    };
    let mut relators = Vec::new();
    if k.counts().len() > 2 {
        for t in 0..k.count(2) {
            let f = k.faces(2, t);
            let v = k.apply(SimplexRef::nondegenerate(2, t), &[0]);
            if comps.class_of[v.id()] != component {
                continue;
            }
            let mut word = Vec::new();
            for (r, e) in [(f[2], 1), (f[0], 1), (f[1], -1)] {
                if let Some(g) = gen_index(r) {
                    word.push((g, e));
                }
            }
            let word = free_reduce(word);
            if !word.is_empty() {
                relators.push(word);
            }
        }
    }
    // a relator of length one kills its generator
    let mut generators = generators;
    while let Some(g) = relators.iter().find(|w| w.len() == 1).map(|w| w[0].0) {
        generators.remove(g);
        relators = relators
            .into_iter()
            .map(|w| free_reduce(w.into_iter().filter(|x| x.0 != g).map(|(h, e)| (if h > g { h - 1 } else { h }, e)).collect()))
            .filter(|w| !w.is_empty())
            .collect();
    }
    Presentation {
        base_vertex,
        generator_labels: generators.iter().map(|&e| k.label(1, e).to_string()).collect(),
        generators,
        relators,
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::colimit::quotient_by;
    use crate::sset::standard::{boundary, boundary_inclusion, simplex};

    #[test]
    fn small_presentations() {
        let p = edge_path_presentation(&simplex(2), 0);
        assert!(p.generators.is_empty() && p.relators.is_empty());
        let p = edge_path_presentation(&boundary(2), 0);
        assert_eq!((p.generators.len(), p.relators.len()), (1, 0));
        let (s, _) = quotient_by(&boundary_inclusion(1)).unwrap();
        let p = edge_path_presentation(&s, 0);
        assert_eq!((p.generators.len(), p.relators.len()), (1, 0));
        assert!(edge_path_presentation(&boundary(1), 0).warning.is_some());
    }
}
