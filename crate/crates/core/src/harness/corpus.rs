//! Named complexes: `point`, `empty`, `simplex:n`, `boundary:n`,
//! `horn:n:i`, `sphere:n` (`Δ^n/∂Δ^n`).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sset::colimit::sphere;
use crate::sset::standard::{boundary, horn, simplex};
use crate::sset::SimplicialSet;

const MAX_NAMED_DIM: usize = 8;

fn bad(name: &str, why: &str) -> Error {
    Error::InvalidSimplex(format!("cannot build {name:?}: {why}"))
}

pub fn named(name: &str) -> Result<SimplicialSet> {
    let parts: Vec<&str> = name.trim().split(':').collect();
    let num = |i: usize| -> Result<usize> {
        let v: usize = parts.get(i).ok_or_else(|| bad(name, "missing dimension"))?.parse().map_err(|_| bad(name, "not a number"))?;
        if v > MAX_NAMED_DIM {
            return Err(Error::DimensionCap { dim: v, cap: MAX_NAMED_DIM });
        }
        Ok(v)
    };
    let arity = |n: usize| if parts.len() == n { Ok(()) } else { Err(bad(name, "wrong number of parameters")) };
    match parts[0] {
        "point" => arity(1).map(|_| simplex(0)),
        "empty" => arity(1).map(|_| SimplicialSet::empty()),
        "simplex" => arity(2).and_then(|_| Ok(simplex(num(1)?))),
        "boundary" => arity(2).and_then(|_| Ok(boundary(num(1)?))),
        "sphere" => arity(2).and_then(|_| {
            let n = num(1)?;
            if n == 0 {
                return Err(bad(name, "sphere dimension must be positive"));
            }
            Ok(sphere(n))
        }),
        "horn" => arity(3).and_then(|_| horn(num(1)?, num(2)?)),
        _ => Err(bad(name, "unknown family; expected point, empty, simplex, boundary, horn or sphere")),
    }
}

pub fn display_name(name: &str) -> String {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["point"] => "Δ^0".into(),
        ["empty"] => "∅".into(),
        ["simplex", n] => format!("Δ^{n}"),
        ["boundary", n] => format!("∂Δ^{n}"),
        ["sphere", n] => format!("Δ^{n}/∂Δ^{n}"),
        ["horn", n, i] => format!("Λ^{n}_{i}"),
        _ => name.to_string(),
    }
}

pub(crate) fn shared(name: &str) -> Result<Arc<SimplicialSet>> {
    named(name).map(Arc::new)
}

/// `simplex:n` for `n ≤ top`, `boundary:n` and every `horn:n:i` for `1 ≤ n ≤ top`.
pub fn standard_corpus(top: usize) -> Vec<String> {
    let mut out: Vec<String> = (0..=top).map(|n| format!("simplex:{n}")).collect();
    out.extend((1..=top).map(|n| format!("boundary:{n}")));
    for n in 1..=top {
        out.extend((0..=n).map(|i| format!("horn:{n}:{i}")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(named("horn:2:1").unwrap().counts(), vec![3, 2]);
        assert_eq!(named("sphere:2").unwrap().counts(), vec![1, 0, 1]);
        assert!(named("horn:2:3").is_err());
        assert!(named("simplex").is_err());
        assert!(named("simplex:99").is_err());
        assert!(named("torus").is_err());
        assert_eq!(display_name("horn:3:0"), "Λ^3_0");
        assert_eq!(standard_corpus(2).len(), 3 + 2 + 5);
    }
}
