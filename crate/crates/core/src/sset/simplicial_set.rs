use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::op::{self, Op};

/// A simplex of a finite simplicial set in Eilenberg–Zilber normal form:
/// a nondegenerate simplex together with a degeneracy word.
///
/// `epi` is the collapse mask of the surjection `[dim] ->> [base]`; bit `j`
/// set means positions `j` and `j + 1` are identified.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimplexRef {
    dim: u8,
    base: u8,
    id: u32,
    epi: u32,
}

impl SimplexRef {
    pub fn nondegenerate(dim: usize, id: usize) -> Self {
        SimplexRef { dim: dim as u8, base: dim as u8, id: id as u32, epi: 0 }
    }

    /// Builds a reference from its serialized form. `positions` must be strictly
    /// increasing and each `< dim`.
    pub fn from_positions(dim: usize, id: usize, positions: &[usize]) -> Result<Self> {
        if dim > op::MAX_DIM {
            return Err(Error::InvalidSimplex(format!("dimension {dim} too large")));
        }
        let mut mask = 0u32;
        let mut last: Option<usize> = None;
        for &p in positions {
            if p >= dim || last.is_some_and(|l| l >= p) {
                return Err(Error::InvalidSimplex(format!(
                    "degeneracy positions {positions:?} invalid for dimension {dim}"
                )));
            }
            mask |= 1 << p;
            last = Some(p);
        }
        Ok(SimplexRef::from_mask(dim, id, mask))
    }

    pub(crate) fn from_mask(dim: usize, id: usize, epi: u32) -> Self {
        SimplexRef {
            dim: dim as u8,
            base: (dim - epi.count_ones() as usize) as u8,
            id: id as u32,
            epi,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// Dimension of the underlying nondegenerate simplex.
    pub fn base_dim(&self) -> usize {
        self.base as usize
    }

    pub fn id(&self) -> usize {
        self.id as usize
    }

    pub fn epi_mask(&self) -> u32 {
        self.epi
    }

    pub fn epi_positions(&self) -> Vec<usize> {
        op::bits(self.epi).map(usize::from).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.epi != 0
    }

    /// The underlying nondegenerate simplex.
    pub fn base(&self) -> SimplexRef {
        SimplexRef::nondegenerate(self.base as usize, self.id as usize)
    }

    /// The surjection `[dim] ->> [base_dim]`.
    pub fn epi_op(&self) -> Op {
        op::epi_op(self.dim as usize, self.epi)
    }

    /// Precomposes the degeneracy word with a further surjection
    /// `[p] ->> [dim]` given by its collapse mask.
    pub fn degenerate_by(&self, p: usize, mask: u32) -> SimplexRef {
        SimplexRef::from_mask(p, self.id as usize, op::compose_epi_masks(p, mask, self.epi))
            .with_base(self.base)
    }

    fn with_base(mut self, base: u8) -> Self {
        self.base = base;
        self
    }
}

impl Ord for SimplexRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.base.cmp(&other.base))
            .then(self.id.cmp(&other.id))
            .then_with(|| op::cmp_masks_lex(self.epi, other.epi))
    }
}

impl PartialOrd for SimplexRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.epi == 0 {
            write!(f, "{}#{}", self.dim, self.id)
        } else {
            write!(f, "{}#{}s{:?}<{}", self.base, self.id, self.epi_positions(), self.dim)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub faces: Vec<SimplexRef>,
}

impl Cell {
    pub fn new(label: impl Into<String>, faces: Vec<SimplexRef>) -> Self {
        Cell { label: label.into(), faces }
    }
}

/// Labels double as serialization ids, so they must be nonempty and distinct
/// across all dimensions. Empty labels become `d.id`; repeats get primes.
fn make_labels_unique(cells: &mut [Vec<Cell>]) {
    let mut seen = std::collections::HashSet::new();
    for (d, level) in cells.iter_mut().enumerate() {
        for (id, cell) in level.iter_mut().enumerate() {
            if cell.label.is_empty() {
                cell.label = format!("{d}.{id}");
            }
            while !seen.insert(cell.label.clone()) {
                cell.label.push('\'');
            }
        }
    }
}

/// Dimension up to which face tables are precomputed per nondegenerate simplex.
const TABLE_DIM: usize = 7;

/// A finite simplicial set presented by its nondegenerate simplices and their
/// faces in normal form. Degenerate simplices are never materialized.
#[derive(Clone)]
pub struct SimplicialSet {
    cells: Vec<Vec<Cell>>,
    // face_table[d][id][S] = the face of (d, id) spanned by the vertex subset S
    face_table: Vec<Vec<Vec<SimplexRef>>>,
    vertices: Vec<Vec<SmallVec<[u32; 8]>>>,
}

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for SimplicialSet {}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialSet{:?}", self.counts())
    }
}

impl SimplicialSet {
    /// Validates and builds a simplicial set. `cells[d]` lists the nondegenerate
    /// `d`-simplices; each must carry exactly `d + 1` faces (none for vertices).
    pub fn new(mut cells: Vec<Vec<Cell>>) -> Result<Self> {
        while cells.len() > 1 && cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        if cells.is_empty() {
            cells.push(Vec::new());
        }
        if cells.len() - 1 > op::MAX_DIM {
            return Err(Error::DimensionCap { dim: cells.len() - 1, cap: op::MAX_DIM });
        }
        for (d, level) in cells.iter().enumerate() {
            for (id, cell) in level.iter().enumerate() {
                let expected = if d == 0 { 0 } else { d + 1 };
                if cell.faces.len() != expected {
                    return Err(Error::InvalidSimplex(format!(
                        "{d}-simplex #{id} has {} faces, expected {expected}",
                        cell.faces.len()
                    )));
                }
                for face in &cell.faces {
                    if face.dim() != d - 1
                        || face.base_dim() >= cells.len()
                        || face.id() >= cells[face.base_dim()].len()
                    {
                        return Err(Error::InvalidSimplex(format!(
                            "{d}-simplex #{id} has dangling face {face:?}"
                        )));
                    }
                }
            }
        }
        make_labels_unique(&mut cells);
        let mut set = SimplicialSet { cells, face_table: Vec::new(), vertices: Vec::new() };
        set.build_tables();
        set.check_identities()?;
        Ok(set)
    }

    pub(crate) fn new_trusted(cells: Vec<Vec<Cell>>) -> Self {
        Self::new(cells).expect("internal construction produced an invalid simplicial set")
    }

    pub fn empty() -> Self {
        Self::new_trusted(vec![Vec::new()])
    }

    fn build_tables(&mut self) {
        let top = self.cells.len() - 1;
        for d in 0..=top {
            let mut level_tables = Vec::new();
            if d <= TABLE_DIM {
                for id in 0..self.cells[d].len() {
                    let full = op::full_mask(d);
                    let mut table = vec![SimplexRef::nondegenerate(0, 0); (full + 1) as usize];
                    for s in 1..=full {
                        table[s as usize] = if s == full {
                            SimplexRef::nondegenerate(d, id)
                        } else {
                            self.face_by_recursion(d, id, s)
                        };
                    }
                    level_tables.push(table);
                }
            }
            self.face_table.push(level_tables);
            let mut level_vertices = Vec::with_capacity(self.cells[d].len());
            for id in 0..self.cells[d].len() {
                let vs = (0..=d)
                    .map(|k| self.face_of(d, id, 1 << k).id)
                    .collect::<SmallVec<[u32; 8]>>();
                level_vertices.push(vs);
            }
            self.vertices.push(level_vertices);
        }
    }

    fn face_by_recursion(&self, d: usize, id: usize, subset: u32) -> SimplexRef {
        // drop the largest missing vertex first
        let missing = op::full_mask(d) & !subset;
        let l = 31 - missing.leading_zeros() as usize;
        let face = self.cells[d][id].faces[l];
        let rel = op::relative_mask(subset, op::full_mask(d) & !(1 << l));
        self.apply(face, &op::mono_from_mask(rel))
    }

    /// The face of a nondegenerate simplex spanned by a vertex subset.
    pub(crate) fn face_of(&self, d: usize, id: usize, subset: u32) -> SimplexRef {
        if subset == op::full_mask(d) {
            return SimplexRef::nondegenerate(d, id);
        }
        if d <= TABLE_DIM {
            if let Some(t) = self.face_table.get(d).and_then(|l| l.get(id)) {
                return t[subset as usize];
            }
        }
        self.face_by_recursion(d, id, subset)
    }

    /// Applies the simplicial operator `θ^*` for a monotone `θ : [p] -> [r.dim]`.
    pub fn apply(&self, r: SimplexRef, theta: &[u8]) -> SimplexRef {
        let c = if r.epi == 0 { Op::from_slice(theta) } else { op::compose(&r.epi_op(), theta) };
        let image = op::image_mask(&c);
        let collapse = op::collapsed_mask(&c);
        let face = self.face_of(r.base_dim(), r.id(), image);
        let p = theta.len() - 1;
        SimplexRef::from_mask(p, face.id(), op::compose_epi_masks(p, collapse, face.epi))
            .with_base(face.base)
    }

    pub fn face(&self, r: SimplexRef, i: usize) -> SimplexRef {
        self.apply(r, &op::coface(r.dim(), i))
    }

    pub fn degeneracy(&self, r: SimplexRef, j: usize) -> SimplexRef {
        r.degenerate_by(r.dim() + 1, 1 << j)
    }

    fn check_identities(&self) -> Result<()> {
        for d in 2..self.cells.len() {
            for (id, cell) in self.cells[d].iter().enumerate() {
                for j in 1..=d {
                    for i in 0..j {
                        let a = self.face(cell.faces[j], i);
                        let b = self.face(cell.faces[i], j - 1);
                        if a != b {
                            return Err(Error::SimplicialIdentity { dim: d, id, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Highest dimension with a nondegenerate simplex (0 for the empty set).
    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.cells[0].is_empty()
    }

    pub fn count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    /// Nondegenerate simplex counts per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn cells(&self) -> &[Vec<Cell>] {
        &self.cells
    }

    pub fn cell(&self, d: usize, id: usize) -> &Cell {
        &self.cells[d][id]
    }

    pub fn label(&self, d: usize, id: usize) -> &str {
        &self.cells[d][id].label
    }

    pub fn faces(&self, d: usize, id: usize) -> &[SimplexRef] {
        &self.cells[d][id].faces
    }

    /// Vertex ids of a nondegenerate simplex, in order.
    pub fn vertices_of(&self, d: usize, id: usize) -> &[u32] {
        &self.vertices[d][id]
    }

    pub fn vertices_of_ref(&self, r: SimplexRef) -> SmallVec<[u32; 8]> {
        let vs = &self.vertices[r.base_dim()][r.id()];
        r.epi_op().iter().map(|&k| vs[k as usize]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Iterates nondegenerate simplices in canonical order.
    pub fn nondegenerate(&self) -> impl Iterator<Item = SimplexRef> + '_ {
        self.cells
            .iter()
            .enumerate()
            .flat_map(|(d, c)| (0..c.len()).map(move |id| SimplexRef::nondegenerate(d, id)))
    }

    /// All `d`-simplices, degenerate ones included, in canonical order.
    pub fn simplices(&self, d: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for k in 0..=d.min(self.top_dim()) {
            let masks = op::surjection_masks(d, k);
            for id in 0..self.count(k) {
                for &m in &masks {
                    out.push(SimplexRef::from_mask(d, id, m));
                }
            }
        }
        out
    }

    pub fn simplex_count(&self, d: usize) -> usize {
        (0..=d.min(self.top_dim())).map(|k| self.count(k) * op::binomial(d, k)).sum()
    }

    pub fn contains(&self, r: SimplexRef) -> bool {
        r.base_dim() < self.cells.len() && r.id() < self.count(r.base_dim())
    }

    /// Exhaustive audit of the simplicial identities on every simplex of
    /// dimension at most `top_dim + 1`, degenerate ones included.
    pub fn audit(&self) -> Result<()> {
        for m in 0..=self.top_dim() + 1 {
            for r in self.simplices(m) {
                // d_i d_j = d_{j-1} d_i, i < j
                if m >= 2 {
                    for j in 1..=m {
                        for i in 0..j {
                            if self.face(self.face(r, j), i) != self.face(self.face(r, i), j - 1) {
                                return Err(Error::SimplicialIdentity {
                                    dim: m,
                                    id: r.id(),
                                    i,
                                    j,
                                });
                            }
                        }
                    }
                }
                for j in 0..=m {
                    let s = self.degeneracy(r, j);
                    // d_i s_j
                    for i in 0..=m + 1 {
                        let lhs = self.face(s, i);
                        let rhs = if i < j {
                            if m == 0 {
                                continue;
                            }
                            self.degeneracy(self.face(r, i), j - 1)
                        } else if i == j || i == j + 1 {
                            r
                        } else {
                            if m == 0 {
                                continue;
                            }
                            self.degeneracy(self.face(r, i - 1), j)
                        };
                        if lhs != rhs {
                            return Err(Error::InvalidSimplex(format!(
                                "d_{i} s_{j} relation fails on {r:?}"
                            )));
                        }
                    }
                    // s_i s_j = s_{j+1} s_i, i <= j
                    for i in 0..=j {
                        let lhs = self.degeneracy(s, i);
                        let rhs = self.degeneracy(self.degeneracy(r, i), j + 1);
                        if lhs != rhs {
                            return Err(Error::InvalidSimplex(format!(
                                "s_{i} s_{j} relation fails on {r:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Compares two simplicial sets ignoring labels.
    pub fn same_structure(&self, other: &SimplicialSet) -> bool {
        self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.faces == y.faces)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> SimplicialSet {
        let v = SimplexRef::nondegenerate(0, 0);
        SimplicialSet::new(vec![vec![Cell::new("v", vec![])], vec![Cell::new("e", vec![v, v])]])
            .unwrap()
    }

    #[test]
    fn rejects_bad_face_count() {
        let v = SimplexRef::nondegenerate(0, 0);
        let err = SimplicialSet::new(vec![vec![Cell::new("v", vec![])], vec![Cell::new("e", vec![v])]]);
        assert!(matches!(err, Err(Error::InvalidSimplex(_))));
    }

    #[test]
    fn rejects_identity_violation() {
        // a triangle whose edges do not close up
        let v = |i| SimplexRef::nondegenerate(0, i);
        let e = |i| SimplexRef::nondegenerate(1, i);
        let cells = vec![
            vec![Cell::new("0", vec![]), Cell::new("1", vec![]), Cell::new("2", vec![])],
            vec![
                Cell::new("01", vec![v(1), v(0)]),
                Cell::new("02", vec![v(2), v(0)]),
                Cell::new("12", vec![v(2), v(1)]),
            ],
            vec![Cell::new("012", vec![e(2), e(1), e(2)])],
        ];
        assert!(matches!(SimplicialSet::new(cells), Err(Error::SimplicialIdentity { .. })));
    }

    #[test]
    fn degenerate_faces_of_circle() {
        let s = circle();
        let e = SimplexRef::nondegenerate(1, 0);
        let t = s.degeneracy(e, 0);
        assert_eq!(t.epi_positions(), vec![0]);
        assert_eq!(s.face(t, 0), e);
        assert_eq!(s.face(t, 1), e);
        let v = SimplexRef::nondegenerate(0, 0);
        assert_eq!(s.face(t, 2), s.degeneracy(v, 0));
        s.audit().unwrap();
    }

    #[test]
    fn simplex_counts_include_degeneracies() {
        let s = circle();
        // one vertex, one edge: 2-simplices are s0 s0 v, s0 e, s1 e
        assert_eq!(s.simplex_count(2), 3);
        assert_eq!(s.simplices(2).len(), 3);
    }
}
