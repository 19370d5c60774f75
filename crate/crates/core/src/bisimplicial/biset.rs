//! Finite bisimplicial sets stored by their nondegenerate bisimplices.
//!
//! A bisimplex of bidegree `(j, k)` has a horizontal degree `j` and a vertical
//! degree `k`. Every bisimplex is uniquely `(σ, τ)^* x` with `x` nondegenerate
//! and `σ`, `τ` surjections, recorded as a pair of [`SimplexRef`]s sharing the
//! id of `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::op::{self, Op};
use crate::sset::{Cell, SimplexRef, SimplicialMap, SimplicialSet};

/// Largest horizontal or vertical degree with an operator table.
const TABLE_DIM: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiSimplexRef {
    h: SimplexRef,
    v: SimplexRef,
}

impl BiSimplexRef {
    pub fn nondegenerate(p: usize, q: usize, id: usize) -> Self {
        BiSimplexRef { h: SimplexRef::nondegenerate(p, id), v: SimplexRef::nondegenerate(q, id) }
    }

    /// `(σ, τ)^* x` where `x = (p, q, id)` and the collapse masks describe
    /// `σ : [j] ->> [p]` and `τ : [k] ->> [q]`.
    pub fn from_masks(j: usize, hmask: u32, k: usize, vmask: u32, id: usize) -> Self {
        BiSimplexRef { h: SimplexRef::from_mask(j, id, hmask), v: SimplexRef::from_mask(k, id, vmask) }
    }

    /// Combines a horizontal and a vertical component whose ids are ignored.
    pub fn from_parts(h: SimplexRef, v: SimplexRef, id: usize) -> Self {
        Self::from_masks(h.dim(), h.epi_mask(), v.dim(), v.epi_mask(), id)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.h.dim(), self.v.dim())
    }

    pub fn base_bidegree(&self) -> (usize, usize) {
        (self.h.base_dim(), self.v.base_dim())
    }

    pub fn id(&self) -> usize {
        self.h.id()
    }

    /// Horizontal part: the surjection `[j] ->> [p]`.
    pub fn horizontal(&self) -> SimplexRef {
        self.h
    }

    /// Vertical part: the surjection `[k] ->> [q]`.
    pub fn vertical(&self) -> SimplexRef {
        self.v
    }

    pub fn hmask(&self) -> u32 {
        self.h.epi_mask()
    }

    pub fn vmask(&self) -> u32 {
        self.v.epi_mask()
    }

    pub fn is_degenerate(&self) -> bool {
        self.h.is_degenerate() || self.v.is_degenerate()
    }

    pub fn base(&self) -> BiSimplexRef {
        let (p, q) = self.base_bidegree();
        BiSimplexRef::nondegenerate(p, q, self.id())
    }

    /// Precomposes with further surjections given by collapse masks.
    pub fn degenerate_by(&self, j: usize, hmask: u32, k: usize, vmask: u32) -> BiSimplexRef {
        BiSimplexRef { h: self.h.degenerate_by(j, hmask), v: self.v.degenerate_by(k, vmask) }
    }

    pub fn transpose(&self) -> BiSimplexRef {
        BiSimplexRef { h: self.v, v: self.h }
    }
}

impl fmt::Debug for BiSimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (j, k) = self.bidegree();
        let (p, q) = self.base_bidegree();
        write!(f, "({j},{k})#{}@({p},{q})", self.id())?;
        if self.is_degenerate() {
            write!(f, "[h{:b} v{:b}]", self.hmask(), self.vmask())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiCell {
    pub label: String,
    /// `d^h_0, …, d^h_p`, empty when `p = 0`.
    pub h_faces: Vec<BiSimplexRef>,
    /// `d^v_0, …, d^v_q`, empty when `q = 0`.
    pub v_faces: Vec<BiSimplexRef>,
}

impl BiCell {
    pub fn new(label: impl Into<String>, h_faces: Vec<BiSimplexRef>, v_faces: Vec<BiSimplexRef>) -> Self {
        BiCell { label: label.into(), h_faces, v_faces }
    }
}

#[derive(Clone)]
pub struct BiSimplicialSet {
    // cells[p][q]
    cells: Vec<Vec<Vec<BiCell>>>,
    // tables[p][q][id][(S, T)] for vertex subsets S of [p], T of [q]
    tables: Vec<Vec<Vec<Vec<BiSimplexRef>>>>,
}

impl fmt::Debug for BiSimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSimplicialSet{:?}", self.counts())
    }
}

impl PartialEq for BiSimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for BiSimplicialSet {}

fn table_index(q: usize, s: u32, t: u32) -> usize {
    ((s as usize) << (q + 1)) | t as usize
}

impl BiSimplicialSet {
    /// Validates and builds a bisimplicial set from `cells[p][q]`. The grid is
    /// padded to a rectangle and trailing empty rows and columns are dropped.
    pub fn new(mut cells: Vec<Vec<Vec<BiCell>>>) -> Result<Self> {
        let width = cells.iter().map(Vec::len).max().unwrap_or(0).max(1);
        if cells.is_empty() {
            cells.push(Vec::new());
        }
        for row in &mut cells {
            row.resize(width, Vec::new());
        }
        while cells.len() > 1 && cells.last().is_some_and(|r| r.iter().all(Vec::is_empty)) {
            cells.pop();
        }
        while cells[0].len() > 1 && cells.iter().all(|r| r.last().is_some_and(Vec::is_empty)) {
            for row in &mut cells {
                row.pop();
            }
        }
        let (np, nq) = (cells.len(), cells[0].len());
        if np - 1 > TABLE_DIM || nq - 1 > TABLE_DIM {
            return Err(Error::DimensionCap { dim: (np - 1).max(nq - 1), cap: TABLE_DIM });
        }
        let count = |p: usize, q: usize| cells.get(p).and_then(|r| r.get(q)).map_or(0, Vec::len);
        for p in 0..np {
            for q in 0..nq {
                for (id, c) in cells[p][q].iter().enumerate() {
                    let eh = if p == 0 { 0 } else { p + 1 };
                    let ev = if q == 0 { 0 } else { q + 1 };
                    if c.h_faces.len() != eh || c.v_faces.len() != ev {
                        return Err(Error::InvalidSimplex(format!(
                            "bisimplex ({p},{q})#{id} has {} horizontal and {} vertical faces",
                            c.h_faces.len(),
                            c.v_faces.len()
                        )));
                    }
                    let ok = |r: &BiSimplexRef, want: (usize, usize)| {
                        let (bp, bq) = r.base_bidegree();
                        r.bidegree() == want && r.id() < count(bp, bq)
                    };
                    if !c.h_faces.iter().all(|r| ok(r, (p.wrapping_sub(1), q)))
                        || !c.v_faces.iter().all(|r| ok(r, (p, q.wrapping_sub(1))))
                    {
                        return Err(Error::InvalidSimplex(format!("bisimplex ({p},{q})#{id} has a dangling face")));
                    }
                }
            }
        }
        make_bilabels_unique(&mut cells);
        let mut x = BiSimplicialSet { cells, tables: Vec::new() };
        x.build_tables();
        x.check_identities()?;
        Ok(x)
    }

    pub(crate) fn new_trusted(cells: Vec<Vec<Vec<BiCell>>>) -> Self {
        Self::new(cells).expect("internal construction produced an invalid bisimplicial set")
    }

    fn build_tables(&mut self) {
        let (np, nq) = (self.cells.len(), self.cells[0].len());
        self.tables = vec![vec![Vec::new(); nq]; np];
        for total in 0..np + nq - 1 {
            for p in 0..np {
                if total < p || total - p >= nq {
                    continue;
                }
                let q = total - p;
                let mut level = Vec::with_capacity(self.cells[p][q].len());
                for id in 0..self.cells[p][q].len() {
                    let (fp, fq) = (op::full_mask(p), op::full_mask(q));
                    let mut table = vec![BiSimplexRef::nondegenerate(0, 0, 0); table_index(q, fp, fq) + 1];
                    for s in 1..=fp {
                        for t in 1..=fq {
                            table[table_index(q, s, t)] = if s == fp && t == fq {
                                BiSimplexRef::nondegenerate(p, q, id)
                            } else {
                                self.face_by_recursion(p, q, id, s, t)
                            };
                        }
                    }
                    level.push(table);
                }
                self.tables[p][q] = level;
            }
        }
    }

    fn face_by_recursion(&self, p: usize, q: usize, id: usize, s: u32, t: u32) -> BiSimplexRef {
        let cell = &self.cells[p][q][id];
        let (fp, fq) = (op::full_mask(p), op::full_mask(q));
        if s != fp {
            let l = 31 - (fp & !s).leading_zeros() as usize;
            let rel = op::relative_mask(s, fp & !(1 << l));
            self.apply(cell.h_faces[l], &op::mono_from_mask(rel), &op::mono_from_mask(t))
        } else {
            let l = 31 - (fq & !t).leading_zeros() as usize;
            let rel = op::relative_mask(t, fq & !(1 << l));
            self.apply(cell.v_faces[l], &op::mono_from_mask(s), &op::mono_from_mask(rel))
        }
    }

    /// Applies `(θ, φ)^*` for monotone `θ : [j'] -> [j]`, `φ : [k'] -> [k]`.
    pub fn apply(&self, r: BiSimplexRef, theta: &[u8], phi: &[u8]) -> BiSimplexRef {
        let ch: Op = if r.h.is_degenerate() { op::compose(&r.h.epi_op(), theta) } else { Op::from_slice(theta) };
        let cv: Op = if r.v.is_degenerate() { op::compose(&r.v.epi_op(), phi) } else { Op::from_slice(phi) };
        let (p, q) = r.base_bidegree();
        let face = self.tables[p][q][r.id()][table_index(q, op::image_mask(&ch), op::image_mask(&cv))];
        face.degenerate_by(theta.len() - 1, op::collapsed_mask(&ch), phi.len() - 1, op::collapsed_mask(&cv))
    }

    pub fn h_face(&self, r: BiSimplexRef, i: usize) -> BiSimplexRef {
        let (j, k) = r.bidegree();
        self.apply(r, &op::coface(j, i), &op::identity(k))
    }

    pub fn v_face(&self, r: BiSimplexRef, i: usize) -> BiSimplexRef {
        let (j, k) = r.bidegree();
        self.apply(r, &op::identity(j), &op::coface(k, i))
    }

    pub fn h_degeneracy(&self, r: BiSimplexRef, i: usize) -> BiSimplexRef {
        let (j, k) = r.bidegree();
        r.degenerate_by(j + 1, 1 << i, k, 0)
    }

    pub fn v_degeneracy(&self, r: BiSimplexRef, i: usize) -> BiSimplexRef {
        let (j, k) = r.bidegree();
        r.degenerate_by(j, 0, k + 1, 1 << i)
    }

    fn check_identities(&self) -> Result<()> {
        for p in 0..self.cells.len() {
            for q in 0..self.cells[p].len() {
                for id in 0..self.cells[p][q].len() {
                    let x = BiSimplexRef::nondegenerate(p, q, id);
                    let fail = || Error::InvalidSimplex(format!("bisimplicial identity fails on ({p},{q})#{id}"));
                    for jj in (1..=p).filter(|_| p >= 2) {
                        for i in 0..jj {
                            if self.h_face(self.h_face(x, jj), i) != self.h_face(self.h_face(x, i), jj - 1) {
                                return Err(fail());
                            }
                        }
                    }
                    for jj in (1..=q).filter(|_| q >= 2) {
                        for i in 0..jj {
                            if self.v_face(self.v_face(x, jj), i) != self.v_face(self.v_face(x, i), jj - 1) {
                                return Err(fail());
                            }
                        }
                    }
                    if p > 0 && q > 0 {
                        for i in 0..=p {
                            for l in 0..=q {
                                if self.h_face(self.v_face(x, l), i) != self.v_face(self.h_face(x, i), l) {
                                    return Err(fail());
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty() -> Self {
        Self::new_trusted(vec![vec![Vec::new()]])
    }

    pub fn cells(&self) -> &[Vec<Vec<BiCell>>] {
        &self.cells
    }

    pub fn cell(&self, p: usize, q: usize, id: usize) -> &BiCell {
        &self.cells[p][q][id]
    }

    pub fn label(&self, p: usize, q: usize, id: usize) -> &str {
        &self.cells[p][q][id].label
    }

    pub fn count(&self, p: usize, q: usize) -> usize {
        self.cells.get(p).and_then(|r| r.get(q)).map_or(0, Vec::len)
    }

    /// `counts()[p][q]` is the number of nondegenerate bisimplices of bidegree `(p, q)`.
    pub fn counts(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|r| r.iter().map(Vec::len).collect()).collect()
    }

    pub fn top_h(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn top_v(&self) -> usize {
        self.cells[0].len() - 1
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_cells() == 0
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = BiSimplexRef> + '_ {
        self.cells.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(q, level)| (0..level.len()).map(move |id| BiSimplexRef::nondegenerate(p, q, id)))
        })
    }

    /// Every bisimplex of bidegree `(j, k)` in canonical order.
    pub fn bisimplices(&self, j: usize, k: usize) -> Vec<BiSimplexRef> {
        let mut out = Vec::new();
        for p in 0..=j.min(self.top_h()) {
            let hm = op::surjection_masks(j, p);
            for q in 0..=k.min(self.top_v()) {
                let vm = op::surjection_masks(k, q);
                for id in 0..self.count(p, q) {
                    for &a in &hm {
                        for &b in &vm {
                            out.push(BiSimplexRef::from_masks(j, a, k, b, id));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn bisimplex_count(&self, j: usize, k: usize) -> usize {
        let mut n = 0;
        for p in 0..=j.min(self.top_h()) {
            for q in 0..=k.min(self.top_v()) {
                n += self.count(p, q) * op::binomial(j, p) * op::binomial(k, q);
            }
        }
        n
    }

    /// Swaps the two directions.
    pub fn transpose(&self) -> BiSimplicialSet {
        let (np, nq) = (self.cells.len(), self.cells[0].len());
        let mut cells = vec![vec![Vec::new(); np]; nq];
        for p in 0..np {
            for q in 0..nq {
                for c in &self.cells[p][q] {
                    cells[q][p].push(BiCell::new(
                        c.label.clone(),
                        c.v_faces.iter().map(BiSimplexRef::transpose).collect(),
                        c.h_faces.iter().map(BiSimplexRef::transpose).collect(),
                    ));
                }
            }
        }
        Self::new_trusted(cells)
    }

    /// Compares two bisimplicial sets ignoring labels.
    pub fn same_structure(&self, other: &BiSimplicialSet) -> bool {
        self.counts() == other.counts()
            && self.cells.iter().flatten().flatten().zip(other.cells.iter().flatten().flatten()).all(|(a, b)| {
                a.h_faces == b.h_faces && a.v_faces == b.v_faces
            })
    }

    /// The simplicial set `X_{j, •}` with the vertical operators.
    pub fn horizontal_level(&self, j: usize) -> HorizontalLevel {
        HorizontalLevel::new(self, j)
    }

    /// `(θ, id)^* : X_{j, •} -> X_{j', •}` for monotone `θ : [j'] -> [j]`.
    pub fn horizontal_operator(&self, from: &HorizontalLevel, to: &HorizontalLevel, theta: &[u8]) -> SimplicialMap {
        debug_assert_eq!(theta.len(), to.j + 1);
        let assignment = from
            .cells
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .map(|&r| to.simplex_of(self.apply(r, theta, &op::identity(k))))
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(from.set.clone(), to.set.clone(), assignment)
    }
}

fn make_bilabels_unique(cells: &mut [Vec<Vec<BiCell>>]) {
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    for (p, row) in cells.iter_mut().enumerate() {
        for (q, level) in row.iter_mut().enumerate() {
            for (id, c) in level.iter_mut().enumerate() {
                if c.label.is_empty() {
                    c.label = format!("{p},{q}.{id}");
                }
                while !seen.insert(c.label.clone()) {
                    c.label.push('\'');
                }
            }
        }
    }
}

/// `X_{j, •}` together with the bisimplex behind each of its nondegenerate
/// simplices.
#[derive(Clone, Debug)]
pub struct HorizontalLevel {
    pub j: usize,
    pub set: Arc<SimplicialSet>,
    // cells[k][id] = the bisimplex (j, k) behind the id-th nondegenerate k-simplex
    cells: Vec<Vec<BiSimplexRef>>,
    index: HashMap<BiSimplexRef, usize>,
}

impl HorizontalLevel {
    fn new(x: &BiSimplicialSet, j: usize) -> Self {
        // vertically nondegenerate bisimplices of horizontal degree j
        let mut cells: Vec<Vec<BiSimplexRef>> = Vec::new();
        for k in 0..=x.top_v() {
            let mut level = Vec::new();
            for p in 0..=j.min(x.top_h()) {
                let masks = op::surjection_masks(j, p);
                for id in 0..x.count(p, k) {
                    for &m in &masks {
                        level.push(BiSimplexRef::from_masks(j, m, k, 0, id));
                    }
                }
            }
            cells.push(level);
        }
        let index: HashMap<BiSimplexRef, usize> =
            cells.iter().flat_map(|level| level.iter().enumerate().map(|(i, &r)| (r, i))).collect();
        let lookup = |r: BiSimplexRef| -> SimplexRef {
            let k = r.bidegree().1;
            let q = r.base_bidegree().1;
            let base = BiSimplexRef::from_masks(j, r.hmask(), q, 0, r.id());
            SimplexRef::nondegenerate(q, index[&base]).degenerate_by(k, r.vmask())
        };
        let set_cells: Vec<Vec<Cell>> = cells
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .map(|&r| {
                        let (p, _) = r.base_bidegree();
                        let label = if r.hmask() == 0 {
                            x.label(p, k, r.id()).to_string()
                        } else {
                            format!("{}~h{:?}", x.label(p, k, r.id()), r.horizontal().epi_positions())
                        };
                        let faces = if k == 0 { Vec::new() } else { (0..=k).map(|i| lookup(x.v_face(r, i))).collect() };
                        Cell::new(label, faces)
                    })
                    .collect()
            })
            .collect();
        let set = Arc::new(SimplicialSet::new_trusted(set_cells));
        HorizontalLevel { j, set, cells, index }
    }

    /// The simplex of `X_{j, •}` given by a bisimplex of horizontal degree `j`.
    pub fn simplex_of(&self, r: BiSimplexRef) -> SimplexRef {
        debug_assert_eq!(r.bidegree().0, self.j);
        let (k, q) = (r.bidegree().1, r.base_bidegree().1);
        let base = BiSimplexRef::from_masks(self.j, r.hmask(), q, 0, r.id());
        SimplexRef::nondegenerate(q, self.index[&base]).degenerate_by(k, r.vmask())
    }

    /// The bisimplex behind a simplex of `X_{j, •}`.
    pub fn bisimplex_of(&self, s: SimplexRef) -> BiSimplexRef {
        let base = self.cells[s.base_dim()][s.id()];
        base.degenerate_by(self.j, 0, s.dim(), s.epi_mask())
    }
}

/// A map of bisimplicial sets, given on nondegenerate bisimplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSimplicialMap {
    source: Arc<BiSimplicialSet>,
    target: Arc<BiSimplicialSet>,
    assignment: Vec<Vec<Vec<BiSimplexRef>>>,
}

impl BiSimplicialMap {
    pub fn new(
        source: Arc<BiSimplicialSet>,
        target: Arc<BiSimplicialSet>,
        assignment: Vec<Vec<Vec<BiSimplexRef>>>,
    ) -> Result<Self> {
        let f = BiSimplicialMap { source, target, assignment };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<BiSimplicialSet>,
        target: Arc<BiSimplicialSet>,
        assignment: Vec<Vec<Vec<BiSimplexRef>>>,
    ) -> Self {
        BiSimplicialMap { source, target, assignment }
    }

    pub fn identity(x: &Arc<BiSimplicialSet>) -> Self {
        let assignment = x
            .counts()
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, &n)| (0..n).map(|id| BiSimplexRef::nondegenerate(p, q, id)).collect())
                    .collect()
            })
            .collect();
        BiSimplicialMap { source: x.clone(), target: x.clone(), assignment }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.source;
        if self.assignment.len() != s.cells.len() {
            return Err(Error::InvalidMap("assignment does not cover every bidegree".into()));
        }
        for (p, row) in s.cells.iter().enumerate() {
            for (q, level) in row.iter().enumerate() {
                let imgs = self.assignment[p].get(q).map_or(&[][..], Vec::as_slice);
                if imgs.len() != level.len() {
                    return Err(Error::InvalidMap(format!("bidegree ({p},{q}): wrong number of images")));
                }
                for (id, c) in level.iter().enumerate() {
                    let img = imgs[id];
                    let (bp, bq) = img.base_bidegree();
                    if img.bidegree() != (p, q) || img.id() >= self.target.count(bp, bq) {
                        return Err(Error::InvalidMap(format!("image of ({p},{q})#{id} is not a ({p},{q})-bisimplex")));
                    }
                    for (i, &f) in c.h_faces.iter().enumerate() {
                        if self.target.h_face(img, i) != self.eval(f) {
                            return Err(Error::InvalidMap(format!(
                                "map does not commute with d^h_{i} on ({p},{q})#{id}"
                            )));
                        }
                    }
                    for (i, &f) in c.v_faces.iter().enumerate() {
                        if self.target.v_face(img, i) != self.eval(f) {
                            return Err(Error::InvalidMap(format!(
                                "map does not commute with d^v_{i} on ({p},{q})#{id}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<BiSimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BiSimplicialSet> {
        &self.target
    }

    pub fn assignment(&self) -> &[Vec<Vec<BiSimplexRef>>] {
        &self.assignment
    }

    pub fn image(&self, p: usize, q: usize, id: usize) -> BiSimplexRef {
        self.assignment[p][q][id]
    }

    pub fn eval(&self, r: BiSimplexRef) -> BiSimplexRef {
        let (p, q) = r.base_bidegree();
        let (j, k) = r.bidegree();
        self.image(p, q, r.id()).degenerate_by(j, r.hmask(), k, r.vmask())
    }

    pub fn then(&self, g: &BiSimplicialMap) -> BiSimplicialMap {
        let assignment = self
            .assignment
            .iter()
            .map(|row| row.iter().map(|level| level.iter().map(|&r| g.eval(r)).collect()).collect())
            .collect();
        BiSimplicialMap { source: self.source.clone(), target: g.target.clone(), assignment }
    }

    /// The component `X_{j, •} -> Y_{j, •}`.
    pub fn level_map(&self, from: &HorizontalLevel, to: &HorizontalLevel) -> SimplicialMap {
        let assignment = from
            .cells
            .iter()
            .map(|level| level.iter().map(|&r| to.simplex_of(self.eval(r))).collect())
            .collect();
        SimplicialMap::new_unchecked(from.set.clone(), to.set.clone(), assignment)
    }

    /// Injective on bisimplices of every bidegree, checked on nondegenerate
    /// ones: distinct images, none degenerate.
    pub fn is_mono(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.assignment.iter().flatten().flatten().all(|r| !r.is_degenerate() && seen.insert(*r))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_mono() && self.source.counts() == self.target.counts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> BiSimplicialSet {
        BiSimplicialSet::new(vec![vec![vec![BiCell::new("pt", vec![], vec![])]]]).unwrap()
    }

    /// `Δ^1 □ Δ^0` written by hand.
    fn edge() -> BiSimplicialSet {
        let v = |id| BiSimplexRef::nondegenerate(0, 0, id);
        BiSimplicialSet::new(vec![
            vec![vec![BiCell::new("a", vec![], vec![]), BiCell::new("b", vec![], vec![])]],
            vec![vec![BiCell::new("ab", vec![v(1), v(0)], vec![])]],
        ])
        .unwrap()
    }

    #[test]
    fn operators_on_a_hand_built_edge() {
        let e = edge();
        assert_eq!(e.counts(), vec![vec![2], vec![1]]);
        let x = BiSimplexRef::nondegenerate(1, 0, 0);
        assert_eq!(e.h_face(x, 0), BiSimplexRef::nondegenerate(0, 0, 1));
        let s = e.v_degeneracy(x, 0);
        assert_eq!(s.bidegree(), (1, 1));
        assert_eq!(e.v_face(s, 0), x);
        assert_eq!(e.h_face(e.v_degeneracy(x, 0), 1), e.v_degeneracy(BiSimplexRef::nondegenerate(0, 0, 0), 0));
        assert_eq!(e.bisimplex_count(2, 3), e.bisimplices(2, 3).len());
        assert_eq!(e.bisimplex_count(1, 0), 3);
    }

    #[test]
    fn horizontal_levels() {
        let e = edge();
        assert_eq!(e.horizontal_level(0).set.counts(), vec![2]);
        assert_eq!(e.horizontal_level(1).set.counts(), vec![3]);
        let t = e.transpose();
        assert_eq!(t.counts(), vec![vec![2, 1]]);
        assert_eq!(t.horizontal_level(0).set.counts(), vec![2, 1]);
        let l0 = e.horizontal_level(0);
        let l1 = e.horizontal_level(1);
        let s = e.horizontal_operator(&l0, &l1, &op::codegeneracy(0, 0));
        s.validate().unwrap();
        assert!(s.is_mono());
    }

    #[test]
    fn rejects_broken_identities() {
        let v = |id| BiSimplexRef::nondegenerate(0, 0, id);
        let bad = BiSimplicialSet::new(vec![
            vec![vec![BiCell::new("a", vec![], vec![]), BiCell::new("b", vec![], vec![])]],
            vec![vec![BiCell::new("ab", vec![v(1)], vec![])]],
        ]);
        assert!(bad.is_err());
        assert!(point().transpose().same_structure(&point()));
    }

    #[test]
    fn identity_map_validates() {
        let e = Arc::new(edge());
        let id = BiSimplicialMap::identity(&e);
        id.validate().unwrap();
        assert!(id.is_isomorphism());
        assert_eq!(id.then(&id), id);
    }
}
