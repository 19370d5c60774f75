//! Monotone maps between finite ordinals `[p] -> [m]`.
//!
//! A map is stored as the list of its values, so `op[i]` is the image of `i`.
//! Surjections are also encoded compactly as a bitmask of *collapsed
//! positions*: bit `j` is set when `j` and `j + 1` have the same image. This
//! bitmask is the degeneracy word carried by [`crate::SimplexRef`].

use std::cmp::Ordering;

use smallvec::SmallVec;

/// Values of a monotone map, indexed by source element.
pub type Op = SmallVec<[u8; 16]>;

/// Largest simplex dimension that fits the bitmask encodings.
pub const MAX_DIM: usize = 30;

pub fn identity(n: usize) -> Op {
    (0..=n as u8).collect()
}

/// The coface `δ_i : [n-1] -> [n]` skipping `i`.
pub fn coface(n: usize, i: usize) -> Op {
    debug_assert!(n >= 1 && i <= n);
    (0..n as u8).map(|k| if (k as usize) < i { k } else { k + 1 }).collect()
}

/// The codegeneracy `σ_j : [n+1] -> [n]` hitting `j` twice.
pub fn codegeneracy(n: usize, j: usize) -> Op {
    debug_assert!(j <= n);
    (0..=(n + 1) as u8)
        .map(|k| if (k as usize) <= j { k } else { k - 1 })
        .collect()
}

/// Constant map `[p] -> [m]` with value `v`.
pub fn constant(p: usize, v: u8) -> Op {
    std::iter::repeat_n(v, p + 1).collect()
}

pub fn is_monotone(op: &[u8], target_dim: usize) -> bool {
    op.windows(2).all(|w| w[0] <= w[1]) && op.iter().all(|&v| (v as usize) <= target_dim)
}

/// `outer ∘ inner`.
pub fn compose(outer: &[u8], inner: &[u8]) -> Op {
    inner.iter().map(|&i| outer[i as usize]).collect()
}

/// The surjection `[dim] -> [dim - popcount(mask)]` with the given collapsed positions.
pub fn epi_op(dim: usize, mask: u32) -> Op {
    let mut out = Op::with_capacity(dim + 1);
    let mut v = 0u8;
    out.push(0);
    for j in 0..dim {
        if mask & (1 << j) == 0 {
            v += 1;
        }
        out.push(v);
    }
    out
}

/// Positions `j` with `op[j] == op[j+1]`.
pub fn collapsed_mask(op: &[u8]) -> u32 {
    let mut mask = 0;
    for j in 0..op.len().saturating_sub(1) {
        if op[j] == op[j + 1] {
            mask |= 1 << j;
        }
    }
    mask
}

pub fn image_mask(op: &[u8]) -> u32 {
    op.iter().fold(0, |m, &v| m | (1 << v))
}

/// The injective map enumerating the elements of `mask` in increasing order.
pub fn mono_from_mask(mask: u32) -> Op {
    bits(mask).collect()
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 31 {
        u32::MAX
    } else {
        (1u32 << (n + 1)) - 1
    }
}

pub fn bits(mask: u32) -> impl Iterator<Item = u8> {
    (0..32u8).filter(move |&b| mask & (1 << b) != 0)
}

/// Given surjections `inner : [p] ->> [q]` and `outer : [q] ->> [r]` as collapse
/// masks, the collapse mask of `outer ∘ inner`.
pub fn compose_epi_masks(p: usize, inner: u32, outer: u32) -> u32 {
    let mut mask = inner;
    let mut image = 0usize;
    for j in 0..p {
        if inner & (1 << j) == 0 {
            if outer & (1 << image) != 0 {
                mask |= 1 << j;
            }
            image += 1;
        }
    }
    mask
}

/// Lexicographic order on the sorted position lists encoded by two masks.
pub fn cmp_masks_lex(a: u32, b: u32) -> Ordering {
    let mut ia = bits(a);
    let mut ib = bits(b);
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => match x.cmp(&y) {
                Ordering::Equal => continue,
                o => return o,
            },
        }
    }
}

/// All collapse masks of surjections `[d] ->> [k]`, in lexicographic order of
/// their position lists.
pub fn surjection_masks(d: usize, k: usize) -> Vec<u32> {
    if k > d {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(d - k);
    fn rec(start: usize, d: usize, left: usize, chosen: &mut Vec<usize>, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(chosen.iter().fold(0, |m, &p| m | (1 << p)));
            return;
        }
        for p in start..d {
            if d - p < left {
                break;
            }
            chosen.push(p);
            rec(p + 1, d, left - 1, chosen, out);
            chosen.pop();
        }
    }
    rec(0, d, d - k, &mut chosen, &mut out);
    out
}

/// All monotone maps `[p] -> [m]`, in lexicographic order of their value lists.
pub fn monotone_maps(p: usize, m: usize) -> Vec<Op> {
    let mut out = Vec::new();
    let mut cur = Op::new();
    fn rec(p: usize, m: usize, lo: u8, cur: &mut Op, out: &mut Vec<Op>) {
        if cur.len() == p + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=m as u8 {
            cur.push(v);
            rec(p, m, v, cur, out);
            cur.pop();
        }
    }
    rec(p, m, 0, &mut cur, &mut out);
    out
}

/// Nonempty subsets of `[n]` as bitmasks, ordered by size then lexicographically.
pub fn subsets_by_size(n: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=full_mask(n)).collect();
    out.sort_by(|&a, &b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| cmp_masks_lex(a, b))
    });
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Renumber the bits of `sub` (which must be contained in `within`) by their
/// rank inside `within`.
pub fn relative_mask(sub: u32, within: u32) -> u32 {
    let mut out = 0;
    for (rank, b) in bits(within).enumerate() {
        if sub & (1 << b) != 0 {
            out |= 1 << rank;
        }
    }
    out
}

/// Image of a subset under a monotone map.
pub fn map_mask(op: &[u8], mask: u32) -> u32 {
    bits(mask).fold(0, |m, b| m | (1 << op[b as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coface_and_codegeneracy() {
        assert_eq!(coface(2, 1).as_slice(), &[0, 2]);
        assert_eq!(codegeneracy(1, 0).as_slice(), &[0, 0, 1]);
        assert_eq!(collapsed_mask(&codegeneracy(3, 2)), 0b100);
    }

    #[test]
    fn epi_round_trip() {
        for d in 0..6 {
            for k in 0..=d {
                for m in surjection_masks(d, k) {
                    let op = epi_op(d, m);
                    assert_eq!(op[d] as usize, k);
                    assert_eq!(collapsed_mask(&op), m);
                }
            }
        }
    }

    #[test]
    fn surjection_counts_are_binomial() {
        for d in 0..7 {
            for k in 0..=d {
                assert_eq!(surjection_masks(d, k).len(), binomial(d, k));
            }
        }
    }

    #[test]
    fn lex_order_differs_from_numeric() {
        // [0,3] < [1,2] lexicographically although 0b1001 > 0b0110.
        assert_eq!(cmp_masks_lex(0b1001, 0b0110), Ordering::Less);
    }

    proptest! {
        #[test]
        fn epi_composition_matches_maps(p in 0usize..8, seed in any::<u64>()) {
            let masks_inner: Vec<u32> = (0..=p).flat_map(|q| surjection_masks(p, q)).collect();
            let inner = masks_inner[(seed as usize) % masks_inner.len()];
            let q = p - inner.count_ones() as usize;
            let masks_outer: Vec<u32> = (0..=q).flat_map(|r| surjection_masks(q, r)).collect();
            let outer = masks_outer[((seed >> 20) as usize) % masks_outer.len()];
            let composed = compose(&epi_op(q, outer), &epi_op(p, inner));
            prop_assert_eq!(collapsed_mask(&composed), compose_epi_masks(p, inner, outer));
        }
    }
}
