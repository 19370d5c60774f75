use std::sync::Arc;

use proptest::prelude::*;

use kanquillen::bisimplicial::{const_geo, diag_restrict};
use kanquillen::homotopy::{collapse_search, homology, pi0, CollapseOutcome};
use kanquillen::lifting::problem::to_terminal;
use kanquillen::lifting::soa::copair;
use kanquillen::lifting::{find_lift, has_rlp, soa_factorize, GeneratingSet, LiftingProblem};
use kanquillen::op;
use kanquillen::sset::cells::cell_presentation;
use kanquillen::sset::colimit::{coproduct, generated_subcomplex, quotient, subcomplex_mask};
use kanquillen::sset::product::cylinder_quotient;
use kanquillen::sset::search::{enumerate_maps, is_isomorphic};
use kanquillen::sset::standard::simplex;
use kanquillen::subdivision::{sd, Subdivision};
use kanquillen::{SimplexRef, SimplicialMap, SimplicialSet};

/// The subcomplex of `Δ^n` generated by the faces picked out by `seeds`
/// (bit `s` of a seed selects the vertex `s`), together with its inclusion.
/// A seed with no bit in range selects the vertex 0.
fn sub_of_simplex(n: usize, seeds: &[u32]) -> (Arc<SimplicialSet>, SimplicialMap) {
    let d = Arc::new(simplex(n));
    let subsets = kanquillen::sset::standard::simplex_subsets(n);
    let picks: Vec<SimplexRef> = seeds
        .iter()
        .map(|&s| (s & op::full_mask(n)).max(1))
        .map(|s| {
            let dim = s.count_ones() as usize - 1;
            let id = subsets[dim].iter().position(|&t| t == s).unwrap();
            SimplexRef::nondegenerate(dim, id)
        })
        .collect();
    let keep = generated_subcomplex(&d, &picks);
    let (k, inc) = subcomplex_mask(&d, &keep).unwrap();
    let k = Arc::new(k);
    let inc = inc.resource(k.clone());
    (k, inc)
}

fn small_complex() -> impl Strategy<Value = Arc<SimplicialSet>> {
    (1usize..=3, prop::collection::vec(1u32..16, 1..4), any::<bool>()).prop_map(|(n, seeds, squash)| {
        let (k, _) = sub_of_simplex(n, &seeds);
        if squash && k.count(1) > 0 {
            let mut members = vec![SimplexRef::nondegenerate(1, 0)];
            members.extend(k.faces(1, 0).iter().copied());
            let (q, _) = quotient(&k, &members).unwrap();
            Arc::new(q)
        } else {
            k
        }
    })
}

fn tiny_complex() -> impl Strategy<Value = Arc<SimplicialSet>> {
    (1usize..=2, prop::collection::vec(1u32..8, 1..3)).prop_map(|(n, seeds)| sub_of_simplex(n, &seeds).0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_satisfy_the_simplicial_identities(k in small_complex()) {
        k.audit().unwrap();
        sd(&k).0.audit().unwrap();
        cylinder_quotient(&k).unwrap().0.audit().unwrap();
    }

    #[test]
    fn operator_evaluation_is_confluent(k in small_complex(), pick in any::<prop::sample::Index>(), a in 0usize..4, b in 0usize..4) {
        let all: Vec<SimplexRef> = (0..=k.top_dim() + 1).flat_map(|d| k.simplices(d)).collect();
        let r = all[pick.index(all.len())];
        let outer = op::monotone_maps(a, r.dim());
        let inner = op::monotone_maps(b, a);
        for o in outer.iter().step_by(3) {
            for i in inner.iter().step_by(2) {
                prop_assert_eq!(k.apply(k.apply(r, o), i), k.apply(r, &op::compose(o, i)));
            }
        }
    }

    #[test]
    fn composites_of_maps_are_maps(k in tiny_complex(), l in tiny_complex(), m in tiny_complex()) {
        let kl = enumerate_maps(&k, &l).unwrap();
        let lm = enumerate_maps(&l, &m).unwrap();
        let km = enumerate_maps(&k, &m).unwrap();
        for f in kl.iter().take(6) {
            for g in lm.iter().take(6) {
                let h = f.then(g);
                h.validate().unwrap();
                prop_assert!(km.contains(&h));
            }
        }
        if let (Some(f), Some(g), Some(h)) = (kl.first(), lm.first(), enumerate_maps(&m, &k).unwrap().first()) {
            prop_assert_eq!(f.then(g).then(h), f.then(&g.then(h)));
        }
    }

    #[test]
    fn sd_preserves_monos(n in 1usize..=3, seeds in prop::collection::vec(1u32..16, 1..4)) {
        let (_, inc) = sub_of_simplex(n, &seeds);
        let (sa, sb) = (Subdivision::new(inc.source()), Subdivision::new(inc.target()));
        prop_assert!(sa.map(&inc, &sb).is_mono());
    }

    #[test]
    fn sd_is_functorial(k in tiny_complex(), l in tiny_complex(), m in tiny_complex()) {
        let (f, g) = match (enumerate_maps(&k, &l).unwrap().pop(), enumerate_maps(&l, &m).unwrap().pop()) {
            (Some(f), Some(g)) => (f, g),
            _ => return Ok(()),
        };
        let (sk, sl, sm) = (Subdivision::new(&k), Subdivision::new(&l), Subdivision::new(&m));
        prop_assert_eq!(sk.map(&f.then(&g), &sm), sk.map(&f, &sl).then(&sl.map(&g, &sm)));
    }

    #[test]
    fn sd_commutes_with_coproducts(k in tiny_complex(), l in tiny_complex()) {
        let (sum, inj) = coproduct(&[k.clone(), l.clone()]);
        let sum = Arc::new(sum);
        let sd_sum = Subdivision::new(&sum);
        let (sd_k, sd_l) = (Subdivision::new(&k), Subdivision::new(&l));
        let (parts, sd_inj) = coproduct(&[sd_k.object.clone(), sd_l.object.clone()]);
        let parts = Arc::new(parts);
        let sd_inj: Vec<SimplicialMap> = sd_inj.iter().map(|m| m.retarget(parts.clone())).collect();
        let legs = [
            sd_k.map(&inj[0].retarget(sum.clone()), &sd_sum),
            sd_l.map(&inj[1].retarget(sum.clone()), &sd_sum),
        ];
        let comparison = copair(&parts, &sd_inj, &legs, &sd_sum.object).unwrap();
        prop_assert!(comparison.is_isomorphism());
    }

    #[test]
    fn find_lift_agrees_with_brute_force(
        a_seeds in prop::collection::vec(1u32..8, 1..3),
        x in tiny_complex(),
        pick_top in any::<prop::sample::Index>(),
    ) {
        let (_, left) = sub_of_simplex(2, &a_seeds);
        let right = to_terminal(&x);
        let tops = enumerate_maps(left.source(), &x).unwrap();
        if tops.is_empty() {
            return Ok(());
        }
        let top = tops[pick_top.index(tops.len())].clone();
        let p = LiftingProblem::new(left.clone(), right.clone(), top, to_terminal(left.target())).unwrap();
        let brute = brute_force_lift(&p);
        let found = find_lift(&p);
        prop_assert_eq!(brute, found.is_some());
        if let Some(h) = found {
            prop_assert!(p.is_lift(&h));
        }
    }

    #[test]
    fn rlp_against_boundaries_implies_rlp_against_horns(k in tiny_complex(), l in tiny_complex(), pick in any::<prop::sample::Index>()) {
        let maps = enumerate_maps(&k, &l).unwrap();
        if maps.is_empty() {
            return Ok(());
        }
        let f = &maps[pick.index(maps.len())];
        if has_rlp(f, &GeneratingSet::i_kq(2)).unwrap().holds {
            prop_assert!(has_rlp(f, &GeneratingSet::j_kq(2)).unwrap().holds);
        }
    }

    #[test]
    fn soa_first_factor_replays_through_cells(k in tiny_complex(), rounds in 0usize..=1) {
        let fac = soa_factorize(&to_terminal(&k), &GeneratingSet::j_kq(2), rounds).unwrap();
        let pres = cell_presentation(&fac.first).unwrap();
        prop_assert!(pres.replay().unwrap().same_structure(&pres.result));
        prop_assert!(pres.comparison.is_isomorphism());
        prop_assert!(pres.target.same_structure(&fac.middle));
        prop_assert!(fac.replay_matches(&GeneratingSet::j_kq(2)).unwrap());
    }

    #[test]
    fn diagonal_of_const_is_the_identity(k in small_complex()) {
        let back = diag_restrict(&Arc::new(const_geo(&k))).object;
        prop_assert!(is_isomorphic(&back, &k));
    }

    #[test]
    fn homology_oracles_agree(k in small_complex(), l in small_complex()) {
        let (hk, hl) = (homology(&k).unwrap(), homology(&l).unwrap());
        let sum = homology(&coproduct(&[k.clone(), l.clone()]).0).unwrap();
        let top = sum.groups.len().max(hk.groups.len()).max(hl.groups.len());
        for d in 0..top {
            let (a, b, s) = (hk.get(d), hl.get(d), sum.get(d));
            prop_assert_eq!(s.betti, a.betti + b.betti);
            let mut torsion = [a.torsion.clone(), b.torsion.clone()].concat();
            torsion.sort();
            let mut st = s.torsion.clone();
            st.sort();
            prop_assert_eq!(st, torsion);
        }
        prop_assert_eq!(k.euler_characteristic(), hk.euler_characteristic());
        prop_assert_eq!(pi0(&k).representatives.len(), hk.get(0).betti);
        prop_assert!(homology(&cylinder_quotient(&k).unwrap().0).unwrap().reduced().is_zero());
        if let CollapseOutcome::Collapsed(_) = collapse_search(&k, 10_000) {
            prop_assert!(hk.reduced().is_zero());
        }
    }
}

#[test]
fn simplex_counts_are_binomial() {
    for n in 0..=6 {
        let d = simplex(n);
        for k in 0..=n {
            assert_eq!(d.count(k), op::binomial(n + 1, k + 1));
        }
    }
}

/// Tries every function from the simplices of `B` up to its top dimension to
/// the simplices of `X` in the same dimension.
fn brute_force_lift(p: &LiftingProblem) -> bool {
    let b = p.left.target();
    let x = p.top.target();
    let cells: Vec<(usize, usize)> = (0..=b.top_dim()).flat_map(|d| (0..b.count(d)).map(move |id| (d, id))).collect();
    let choices: Vec<Vec<SimplexRef>> = cells.iter().map(|&(d, _)| x.simplices(d)).collect();
    let mut idx = vec![0usize; cells.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return false;
    }
    loop {
        let mut assignment: Vec<Vec<SimplexRef>> = b.counts().iter().map(|&n| Vec::with_capacity(n)).collect();
        for (c, &(d, _)) in cells.iter().enumerate() {
            assignment[d].push(choices[c][idx[c]]);
        }
        if let Ok(h) = SimplicialMap::new(b.clone(), x.clone(), assignment) {
            if p.is_lift(&h) {
                return true;
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
