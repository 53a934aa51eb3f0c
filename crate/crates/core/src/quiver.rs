//! Finite-dimensional representations of a finite acyclic quiver over `F_p`.
//!
//! This is the abelian base category of the model. Representations and
//! intertwiners are plain values; every constructor validates matrix shapes
//! and the intertwiner law exactly.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{quotient, Matrix, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Validates vertex/arrow names and rejects directed cycles.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidQuiver("a quiver needs at least one vertex".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v:?}")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {:?} references a missing vertex",
                    a.name
                )));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow {:?}", a.name)));
            }
        }
        let q = Self { vertices, arrows };
        if let Some(v) = q.find_cycle() {
            return Err(Error::CyclicQuiver(q.vertices[v].clone()));
        }
        Ok(q)
    }

    /// One vertex, no arrows: representations are plain vector spaces.
    pub fn one_vertex() -> Self {
        Self {
            vertices: vec!["v".into()],
            arrows: vec![],
        }
    }

    /// The `A_2` quiver `1 -> 2`.
    pub fn a2() -> Self {
        Self {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![Arrow {
                name: "a".into(),
                source: 0,
                target: 1,
            }],
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    // Kahn's algorithm; returns a vertex on a cycle if one exists.
    fn find_cycle(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        (removed < n).then(|| (0..n).find(|&v| indegree[v] > 0).unwrap())
    }

    /// All paths starting at `v`, as arrow index sequences (the trivial path
    /// first). Finite because the quiver is acyclic.
    fn paths_from(&self, v: usize) -> Vec<(usize, Vec<usize>)> {
        let mut out = vec![(v, vec![])];
        let mut i = 0;
        while i < out.len() {
            let (end, path) = out[i].clone();
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.source == end {
                    let mut p = path.clone();
                    p.push(ai);
                    out.push((a.target, p));
                }
            }
            i += 1;
        }
        out
    }
}

/// The category `rep_{F_p}(Q)`: a quiver together with a prime field.
#[derive(Clone, Debug)]
pub struct RepCategory {
    quiver: Arc<Quiver>,
    field: PrimeField,
}

impl PartialEq for RepCategory {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && (Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver)
    }
}

impl Eq for RepCategory {}

impl RepCategory {
    pub fn new(quiver: Quiver, field: PrimeField) -> Self {
        Self {
            quiver: Arc::new(quiver),
            field,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn zero_rep(&self) -> QuiverRep {
        let dims = vec![0; self.vertex_count()];
        self.rep_with_zero_maps(dims)
    }

    fn rep_with_zero_maps(&self, dims: Vec<usize>) -> QuiverRep {
        let maps = self
            .quiver
            .arrows
            .iter()
            .map(|a| Matrix::zeros(self.field, dims[a.target], dims[a.source]))
            .collect();
        QuiverRep {
            cat: self.clone(),
            dims,
            maps,
        }
    }

    /// The simple representation concentrated at `vertex`.
    pub fn simple(&self, vertex: usize) -> QuiverRep {
        let mut dims = vec![0; self.vertex_count()];
        dims[vertex] = 1;
        self.rep_with_zero_maps(dims)
    }

    /// The indecomposable projective at `vertex`: the span of paths leaving it.
    pub fn projective(&self, vertex: usize) -> QuiverRep {
        let paths = self.quiver.paths_from(vertex);
        let n = self.vertex_count();
        let mut index = vec![Vec::new(); n];
        for (pi, (end, _)) in paths.iter().enumerate() {
            index[*end].push(pi);
        }
        let dims: Vec<usize> = index.iter().map(Vec::len).collect();
        let maps = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(self.field, dims[a.target], dims[a.source]);
                for (col, &pi) in index[a.source].iter().enumerate() {
                    let mut ext = paths[pi].1.clone();
                    ext.push(ai);
                    let qi = paths
                        .iter()
                        .position(|(_, p)| *p == ext)
                        .expect("extended path is enumerated");
                    let row = index[a.target].iter().position(|&x| x == qi).unwrap();
                    m.set(row, col, 1);
                }
                m
            })
            .collect();
        QuiverRep {
            cat: self.clone(),
            dims,
            maps,
        }
    }

    /// Dimensions uniform in `[0, max_dim]` per vertex, arrow matrices uniform.
    pub fn random_rep<R: Rng + ?Sized>(&self, max_dim: usize, rng: &mut R) -> QuiverRep {
        let dims: Vec<usize> = (0..self.vertex_count()).map(|_| rng.gen_range(0..=max_dim)).collect();
        let maps = self
            .quiver
            .arrows
            .iter()
            .map(|a| Matrix::random(self.field, dims[a.target], dims[a.source], rng))
            .collect();
        QuiverRep {
            cat: self.clone(),
            dims,
            maps,
        }
    }

    /// A random projective representation with every vertex dimension at
    /// most `max_dim`: a sum of indecomposable projectives, conjugated by a
    /// random change of basis at each vertex.
    pub fn random_projective<R: Rng + ?Sized>(&self, max_dim: usize, rng: &mut R) -> QuiverRep {
        let n = self.vertex_count();
        let proj: Vec<QuiverRep> = (0..n).map(|v| self.projective(v)).collect();
        let mut dims = vec![0usize; n];
        let mut parts = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for v in order {
            let room = (0..n)
                .filter(|&w| proj[v].dims[w] > 0)
                .map(|w| (max_dim - dims[w]) / proj[v].dims[w])
                .min()
                .unwrap_or(0);
            let mult = rng.gen_range(0..=room);
            for _ in 0..mult {
                for w in 0..n {
                    dims[w] += proj[v].dims[w];
                }
                parts.push(proj[v].clone());
            }
        }
        let refs: Vec<&QuiverRep> = parts.iter().collect();
        let sum = Layout::new(self, &refs).total;
        let change: Vec<Matrix> = sum.dims.iter().map(|&d| random_invertible(self.field, d, rng)).collect();
        let inverse: Vec<Matrix> = change.iter().map(|g| g.inverse().unwrap()).collect();
        let maps = self
            .quiver
            .arrows
            .iter()
            .zip(&sum.maps)
            .map(|(a, m)| change[a.target].mul(m).mul(&inverse[a.source]))
            .collect();
        QuiverRep {
            cat: self.clone(),
            dims: sum.dims,
            maps,
        }
    }
}

fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::random(field, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuiverRep {
    cat: RepCategory,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl fmt::Debug for QuiverRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuiverRep")
            .field("dims", &self.dims)
            .field("maps", &self.maps)
            .finish()
    }
}

impl QuiverRep {
    pub fn new(cat: &RepCategory, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let q = cat.quiver();
        if dims.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "{} vertex dimensions given for a quiver with {} vertices",
                dims.len(),
                q.vertex_count()
            )));
        }
        if maps.len() != q.arrows().len() {
            return Err(Error::Shape(format!(
                "{} arrow matrices given for a quiver with {} arrows",
                maps.len(),
                q.arrows().len()
            )));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.shape() != (dims[a.target], dims[a.source]) || m.field() != cat.field() {
                return Err(Error::Shape(format!(
                    "arrow {:?} needs a {}x{} matrix, found {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            cat: cat.clone(),
            dims,
            maps,
        })
    }

    pub fn category(&self) -> &RepCategory {
        &self.cat
    }

    pub fn field(&self) -> PrimeField {
        self.cat.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, vertex: usize) -> usize {
        self.dims[vertex]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn arrow_maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// A representation is projective iff it is a sum of the indecomposable
    /// projectives counted by its top, which is a dimension comparison.
    pub fn is_projective(&self) -> bool {
        let q = self.cat.quiver();
        let mut expected = vec![0usize; q.vertex_count()];
        for v in 0..q.vertex_count() {
            let incoming: Vec<&Matrix> = q
                .arrows()
                .iter()
                .zip(&self.maps)
                .filter(|(a, _)| a.target == v)
                .map(|(_, m)| m)
                .collect();
            let radical = incoming
                .iter()
                .fold(Matrix::zeros(self.field(), self.dims[v], 0), |acc, m| acc.hstack(m))
                .rank();
            let top = self.dims[v] - radical;
            if top > 0 {
                let pv = self.cat.projective(v);
                for w in 0..q.vertex_count() {
                    expected[w] += top * pv.dims[w];
                }
            }
        }
        expected == self.dims
    }

    fn same_category(&self, other: &QuiverRep) -> Result<()> {
        if self.cat == other.cat {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }
}

/// A direct sum with its block layout: per-vertex offsets of each summand.
#[derive(Clone, Debug)]
pub struct Layout {
    pub parts: Vec<QuiverRep>,
    pub total: QuiverRep,
    offsets: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(cat: &RepCategory, parts: &[&QuiverRep]) -> Self {
        let n = cat.vertex_count();
        let mut offsets = Vec::with_capacity(parts.len());
        let mut dims = vec![0usize; n];
        for p in parts {
            offsets.push(dims.clone());
            for v in 0..n {
                dims[v] += p.dims[v];
            }
        }
        let maps = cat
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(cat.field(), dims[a.target], dims[a.source]);
                for (pi, p) in parts.iter().enumerate() {
                    m.set_block(offsets[pi][a.target], offsets[pi][a.source], &p.maps[ai]);
                }
                m
            })
            .collect();
        Self {
            parts: parts.iter().map(|&p| p.clone()).collect(),
            total: QuiverRep {
                cat: cat.clone(),
                dims,
                maps,
            },
            offsets,
        }
    }

    pub fn offset(&self, part: usize, vertex: usize) -> usize {
        self.offsets[part][vertex]
    }

    pub fn injection(&self, part: usize) -> RepMap {
        let comps = (0..self.total.dims.len())
            .map(|v| {
                let mut m = Matrix::zeros(self.total.field(), self.total.dims[v], self.parts[part].dims[v]);
                m.set_block(self.offsets[part][v], 0, &Matrix::identity(self.total.field(), self.parts[part].dims[v]));
                m
            })
            .collect();
        RepMap::new(&self.parts[part], &self.total, comps).expect("block injection is an intertwiner")
    }

    pub fn projection(&self, part: usize) -> RepMap {
        let comps = (0..self.total.dims.len())
            .map(|v| {
                let mut m = Matrix::zeros(self.total.field(), self.parts[part].dims[v], self.total.dims[v]);
                m.set_block(0, self.offsets[part][v], &Matrix::identity(self.total.field(), self.parts[part].dims[v]));
                m
            })
            .collect();
        RepMap::new(&self.total, &self.parts[part], comps).expect("block projection is an intertwiner")
    }
}

/// Direct sum of two representations with injections and projections.
pub fn direct_sum(a: &QuiverRep, b: &QuiverRep) -> Result<Layout> {
    a.same_category(b)?;
    Ok(Layout::new(&a.cat, &[a, b]))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RepMap {
    source: QuiverRep,
    target: QuiverRep,
    comps: Vec<Matrix>,
}

impl fmt::Debug for RepMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepMap")
            .field("source_dims", &self.source.dims)
            .field("target_dims", &self.target.dims)
            .field("components", &self.comps)
            .finish()
    }
}

impl RepMap {
    /// Validates component shapes and the intertwiner law at every arrow.
    pub fn new(source: &QuiverRep, target: &QuiverRep, comps: Vec<Matrix>) -> Result<Self> {
        source.same_category(target)?;
        let n = source.dims.len();
        if comps.len() != n {
            return Err(Error::Shape(format!("{} components for {} vertices", comps.len(), n)));
        }
        for (v, c) in comps.iter().enumerate() {
            if c.shape() != (target.dims[v], source.dims[v]) {
                return Err(Error::Shape(format!(
                    "component at vertex {v} should be {}x{}, found {}x{}",
                    target.dims[v],
                    source.dims[v],
                    c.rows(),
                    c.cols()
                )));
            }
        }
        for (ai, a) in source.cat.quiver().arrows().iter().enumerate() {
            let lhs = target.maps[ai].mul(&comps[a.source]);
            let rhs = comps[a.target].mul(&source.maps[ai]);
            if lhs != rhs {
                return Err(Error::law(
                    "intertwiner",
                    format!("components do not commute with arrow {:?}", a.name),
                ));
            }
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(rep: &QuiverRep) -> Self {
        let comps = rep.dims.iter().map(|&d| Matrix::identity(rep.field(), d)).collect();
        Self {
            source: rep.clone(),
            target: rep.clone(),
            comps,
        }
    }

    pub fn zero(source: &QuiverRep, target: &QuiverRep) -> Self {
        let comps = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| Matrix::zeros(source.field(), t, s))
            .collect();
        Self {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    pub fn source(&self) -> &QuiverRep {
        &self.source
    }

    pub fn target(&self) -> &QuiverRep {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn component(&self, vertex: usize) -> &Matrix {
        &self.comps[vertex]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RepMap) -> RepMap {
        assert_eq!(first.target.dims, self.source.dims, "composing incompatible intertwiners");
        RepMap {
            source: first.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&first.comps).map(|(g, f)| g.mul(f)).collect(),
        }
    }

    pub fn add(&self, other: &RepMap) -> RepMap {
        assert_eq!(self.source.dims, other.source.dims);
        assert_eq!(self.target.dims, other.target.dims);
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &RepMap) -> RepMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RepMap {
        self.scale(self.source.field().p() - 1)
    }

    pub fn scale(&self, s: u32) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn rank(&self) -> Vec<usize> {
        self.comps.iter().map(Matrix::rank).collect()
    }

    /// Factors `self: X -> B` through the monomorphism `mono: K -> B`,
    /// failing if the image of `self` is not contained in that of `mono`.
    pub fn lift_through(&self, mono: &RepMap) -> Result<RepMap> {
        let comps = self
            .comps
            .iter()
            .zip(&mono.comps)
            .map(|(f, m)| {
                let l = m.left_inverse().map_err(|_| {
                    Error::NoFactorization("lifting along a map that is not injective".into())
                })?;
                let g = l.mul(f);
                if m.mul(&g) != *f {
                    return Err(Error::NoFactorization("image not contained in the subobject".into()));
                }
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        RepMap::new(&self.source, &mono.source, comps)
    }

    /// Factors `self: B -> Y` through the epimorphism `epi: B -> C`, failing
    /// if `self` does not vanish on the kernel of `epi`.
    pub fn descend_through(&self, epi: &RepMap) -> Result<RepMap> {
        let comps = self
            .comps
            .iter()
            .zip(&epi.comps)
            .map(|(f, e)| {
                let s = e.right_inverse().map_err(|_| {
                    Error::NoFactorization("descending along a map that is not surjective".into())
                })?;
                let g = f.mul(&s);
                if g.mul(e) != *f {
                    return Err(Error::NoFactorization("map does not vanish on the kernel".into()));
                }
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        RepMap::new(&epi.target, &self.target, comps)
    }

    /// Assembles a map between direct sums from blocks `(target part,
    /// source part, map)`; unspecified blocks are zero.
    pub fn from_blocks(source: &Layout, target: &Layout, blocks: &[(usize, usize, &RepMap)]) -> Result<RepMap> {
        let field = source.total.field();
        let comps = (0..source.total.dims.len())
            .map(|v| {
                let mut m = Matrix::zeros(field, target.total.dims[v], source.total.dims[v]);
                for &(ti, si, b) in blocks {
                    m.set_block(target.offset(ti, v), source.offset(si, v), &b.comps[v]);
                }
                m
            })
            .collect();
        RepMap::new(&source.total, &target.total, comps)
    }
}

/// Kernel of an intertwiner with its inclusion.
pub fn rep_kernel(map: &RepMap) -> (QuiverRep, RepMap) {
    let cat = map.source.cat.clone();
    let bases: Vec<Matrix> = map.comps.iter().map(Matrix::kernel_basis).collect();
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let lefts: Vec<Matrix> = bases.iter().map(|b| b.left_inverse().expect("kernel basis is independent")).collect();
    let maps = cat
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| lefts[a.target].mul(&map.source.maps[ai]).mul(&bases[a.source]))
        .collect();
    let k = QuiverRep { cat, dims, maps };
    let inc = RepMap::new(&k, &map.source, bases).expect("kernel inclusion is an intertwiner");
    (k, inc)
}

/// Cokernel of an intertwiner with its projection.
pub fn rep_cokernel(map: &RepMap) -> (QuiverRep, RepMap) {
    let cat = map.target.cat.clone();
    let quots: Vec<_> = map
        .comps
        .iter()
        .zip(&map.target.dims)
        .map(|(c, &d)| quotient(cat.field(), d, &c.image_basis()).expect("image basis is independent"))
        .collect();
    let dims: Vec<usize> = quots.iter().map(|q| q.projection.rows()).collect();
    let maps = cat
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| quots[a.target].projection.mul(&map.target.maps[ai]).mul(&quots[a.source].section))
        .collect();
    let c = QuiverRep { cat, dims, maps };
    let proj = RepMap::new(&map.target, &c, quots.into_iter().map(|q| q.projection).collect())
        .expect("cokernel projection is an intertwiner");
    (c, proj)
}

/// The space of intertwiners `A -> B` as a subspace of the flattened
/// component entries, with a coordinate map back.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: QuiverRep,
    target: QuiverRep,
    /// Columns: basis intertwiners, flattened vertex by vertex, row-major.
    embed: Matrix,
    coords: Matrix,
}

impl HomSpace {
    pub fn new(source: &QuiverRep, target: &QuiverRep) -> Result<Self> {
        source.same_category(target)?;
        let field = source.field();
        let n = source.dims.len();
        let mut offset = vec![0usize; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + target.dims[v] * source.dims[v];
        }
        let vars = offset[n];
        let arrows = source.cat.quiver().arrows();
        let mut row_offset = Vec::with_capacity(arrows.len());
        let mut rows = 0;
        for a in arrows {
            row_offset.push(rows);
            rows += target.dims[a.target] * source.dims[a.source];
        }
        // Constraint for a: s -> t is B_a φ_s - φ_t A_a = 0, a dim B_t x dim A_s block.
        let mut constraint = Matrix::zeros(field, rows, vars);
        for (ai, a) in arrows.iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let ncols = source.dims[s];
            let bt = &target.maps[ai];
            let at = &source.maps[ai];
            for r in 0..target.dims[s] {
                for c in 0..source.dims[s] {
                    let var = offset[s] + r * source.dims[s] + c;
                    for i in 0..target.dims[t] {
                        let row = row_offset[ai] + i * ncols + c;
                        let v = field.add(constraint.get(row, var), bt.get(i, r));
                        constraint.set(row, var, v);
                    }
                }
            }
            for r in 0..target.dims[t] {
                for c in 0..source.dims[t] {
                    let var = offset[t] + r * source.dims[t] + c;
                    for j in 0..ncols {
                        let row = row_offset[ai] + r * ncols + j;
                        let v = field.sub(constraint.get(row, var), at.get(c, j));
                        constraint.set(row, var, v);
                    }
                }
            }
        }
        let embed = constraint.kernel_basis();
        let coords = embed.left_inverse()?;
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            embed,
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.embed.cols()
    }

    pub fn source(&self) -> &QuiverRep {
        &self.source
    }

    pub fn target(&self) -> &QuiverRep {
        &self.target
    }

    /// Flattened entries of the basis element `i`.
    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        self.embed.column(i)
    }

    pub fn basis(&self) -> Vec<RepMap> {
        (0..self.dim()).map(|i| self.element(&Matrix::identity(self.source.field(), self.dim()).column(i))).collect()
    }

    /// The intertwiner with the given coordinates.
    pub fn element(&self, coeffs: &[u32]) -> RepMap {
        let flat = self.embed.mul(&Matrix::column_vector(self.source.field(), coeffs));
        let comps = unflatten(&self.source, &self.target, flat.entries());
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    /// Coordinates of per-vertex matrices known to form an intertwiner.
    pub fn coordinates_of(&self, comps: &[Matrix]) -> Vec<u32> {
        let flat: Vec<u32> = comps.iter().flat_map(|m| m.entries().iter().copied()).collect();
        self.coords
            .mul(&Matrix::column_vector(self.source.field(), &flat))
            .entries()
            .to_vec()
    }
}

fn unflatten(source: &QuiverRep, target: &QuiverRep, flat: &[u32]) -> Vec<Matrix> {
    let mut at = 0;
    (0..source.dims.len())
        .map(|v| {
            let (r, c) = (target.dims[v], source.dims[v]);
            let m = Matrix::from_fn(source.field(), r, c, |i, j| flat[at + i * c + j]);
            at += r * c;
            m
        })
        .collect()
}

/// Basis of `Hom(A, B)` as a list of intertwiners.
pub fn rep_hom_space(a: &QuiverRep, b: &QuiverRep) -> Result<Vec<RepMap>> {
    Ok(HomSpace::new(a, b)?.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cat(q: Quiver, p: u32) -> RepCategory {
        RepCategory::new(q, PrimeField::new(p).unwrap())
    }

    fn a2_rep(c: &RepCategory, d1: usize, d2: usize, rows: &[Vec<i64>]) -> QuiverRep {
        let m = if rows.is_empty() {
            Matrix::zeros(c.field(), d2, d1)
        } else {
            Matrix::from_rows_shaped(c.field(), d2, d1, rows).unwrap()
        };
        QuiverRep::new(c, vec![d1, d2], vec![m]).unwrap()
    }

    #[test]
    fn rejects_cycles() {
        let arrows = vec![
            Arrow { name: "a".into(), source: 0, target: 1 },
            Arrow { name: "b".into(), source: 1, target: 0 },
        ];
        assert!(matches!(
            Quiver::new(vec!["x".into(), "y".into()], arrows),
            Err(Error::CyclicQuiver(_))
        ));
        let loop_arrow = vec![Arrow { name: "l".into(), source: 0, target: 0 }];
        assert!(Quiver::new(vec!["x".into()], loop_arrow).is_err());
    }

    #[test]
    fn hom_from_zero_is_zero() {
        let c = cat(Quiver::a2(), 2);
        let b = a2_rep(&c, 1, 1, &[vec![1]]);
        assert_eq!(rep_hom_space(&c.zero_rep(), &b).unwrap().len(), 0);
    }

    #[test]
    fn hom_of_lines_is_scalars() {
        let c = cat(Quiver::one_vertex(), 2);
        let s = c.simple(0);
        assert_eq!(rep_hom_space(&s, &s).unwrap().len(), 1);
    }

    #[test]
    fn a2_hom_matches_enumeration() {
        let c = cat(Quiver::a2(), 2);
        let a = a2_rep(&c, 1, 1, &[vec![1]]);
        let b = a2_rep(&c, 0, 1, &[]);
        // brute force over every pair of component matrices
        let count = |x: &QuiverRep, y: &QuiverRep| {
            let shapes: Vec<(usize, usize)> = (0..2).map(|v| (y.dim(v), x.dim(v))).collect();
            let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
            (0..1u32 << entries)
                .filter(|bits| {
                    let mut at = 0;
                    let comps = shapes
                        .iter()
                        .map(|&(r, cc)| {
                            let m = Matrix::from_fn(c.field(), r, cc, |i, j| (bits >> (at + i * cc + j)) & 1);
                            at += r * cc;
                            m
                        })
                        .collect();
                    RepMap::new(x, y, comps).is_ok()
                })
                .count()
        };
        // |Hom| = 2^dim
        assert_eq!(count(&a, &b), 1);
        assert_eq!(count(&b, &a), 2);
        assert_eq!(rep_hom_space(&a, &b).unwrap().len(), 0);
        assert_eq!(rep_hom_space(&b, &a).unwrap().len(), 1);
    }

    #[test]
    fn kernel_of_a2_map() {
        let c = cat(Quiver::a2(), 2);
        let a = a2_rep(&c, 1, 1, &[vec![1]]);
        let s1 = c.simple(0);
        let phi = &rep_hom_space(&a, &s1).unwrap()[0];
        let (k, inc) = rep_kernel(phi);
        assert_eq!(k.dims(), &[0, 1]);
        assert!(phi.compose(&inc).is_zero());
        let b = a2_rep(&c, 0, 1, &[]);
        let psi = &rep_hom_space(&b, &a).unwrap()[0];
        assert!(rep_kernel(psi).0.is_zero());
        assert_eq!(rep_cokernel(psi).0, s1);
    }

    #[test]
    fn kernel_and_cokernel_of_identity_and_zero() {
        let c = cat(Quiver::a2(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = c.random_rep(3, &mut rng);
        let b = c.random_rep(3, &mut rng);
        let id = RepMap::identity(&a);
        assert!(rep_kernel(&id).0.is_zero());
        assert!(rep_cokernel(&id).0.is_zero());
        let z = RepMap::zero(&a, &b);
        assert_eq!(rep_kernel(&z).0, a);
        assert_eq!(rep_cokernel(&z).0.dims(), b.dims());
    }

    #[test]
    fn direct_sum_with_zero() {
        let c = cat(Quiver::a2(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = c.random_rep(2, &mut rng);
        let s = direct_sum(&a, &c.zero_rep()).unwrap();
        assert_eq!(s.total, a);
        assert!(direct_sum(&c.zero_rep(), &c.zero_rep()).unwrap().total.is_zero());
        let other = cat(Quiver::one_vertex(), 2).zero_rep();
        assert!(matches!(direct_sum(&a, &other), Err(Error::BaseMismatch)));
    }

    #[test]
    fn random_rep_edge_cases() {
        let c = cat(Quiver::a2(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(c.random_rep(0, &mut rng).is_zero());
        let r1 = c.random_rep(3, &mut ChaCha8Rng::seed_from_u64(99));
        let r2 = c.random_rep(3, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(r1, r2);
        let mut seen = [[false; 2]; 2];
        for _ in 0..1000 {
            let r = c.random_rep(1, &mut rng);
            for v in 0..2 {
                seen[v][r.dim(v)] = true;
            }
        }
        assert!(seen.iter().flatten().all(|&b| b));
    }

    #[test]
    fn projectives_of_a2() {
        let c = cat(Quiver::a2(), 2);
        let p1 = c.projective(0);
        let p2 = c.projective(1);
        assert_eq!(p1.dims(), &[1, 1]);
        assert_eq!(p2.dims(), &[0, 1]);
        assert!(p1.is_projective() && p2.is_projective());
        // the simple at the source vertex is not projective
        assert!(!c.simple(0).is_projective());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let r = c.random_projective(4, &mut rng);
            assert!(r.is_projective());
            assert!(r.dims().iter().all(|&d| d <= 4));
        }
    }

    #[test]
    fn lift_and_descend() {
        let c = cat(Quiver::a2(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let a = c.random_rep(3, &mut rng);
            let b = c.random_rep(3, &mut rng);
            let hom = HomSpace::new(&a, &b).unwrap();
            let coeffs: Vec<u32> = (0..hom.dim()).map(|_| c.field().random(&mut rng)).collect();
            let phi = hom.element(&coeffs);
            assert_eq!(hom.coordinates_of(phi.components()), coeffs);
            let (_, inc) = rep_kernel(&phi);
            let (_, proj) = rep_cokernel(&phi);
            assert_eq!(inc.lift_through(&inc).unwrap(), RepMap::identity(inc.source()));
            assert_eq!(proj.descend_through(&proj).unwrap(), RepMap::identity(proj.target()));
            let (_, coinc) = rep_kernel(&proj);
            // phi lands in the kernel of its cokernel projection
            let lifted = phi.lift_through(&coinc).unwrap();
            assert_eq!(coinc.compose(&lifted), phi);
            if !proj.target().is_zero() {
                assert!(RepMap::identity(&b).lift_through(&coinc).is_err() || phi.rank() == b.dims().to_vec());
            }
        }
    }

    fn random_map(c: &RepCategory, rng: &mut ChaCha8Rng) -> RepMap {
        let a = c.random_rep(3, rng);
        let b = c.random_rep(3, rng);
        let hom = HomSpace::new(&a, &b).unwrap();
        let coeffs: Vec<u32> = (0..hom.dim()).map(|_| c.field().random(rng)).collect();
        hom.element(&coeffs)
    }

    #[test]
    fn kernel_cokernel_laws_and_exactness() {
        for p in [2, 3] {
            let c = cat(Quiver::a2(), p);
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            for _ in 0..100 {
                let phi = random_map(&c, &mut rng);
                let (k, inc) = rep_kernel(&phi);
                let (co, proj) = rep_cokernel(&phi);
                assert!(phi.compose(&inc).is_zero());
                assert!(proj.compose(&phi).is_zero());
                let ranks = phi.rank();
                for v in 0..2 {
                    assert_eq!(k.dim(v) + ranks[v], phi.source().dim(v));
                    assert_eq!(co.dim(v), phi.target().dim(v) - ranks[v]);
                }
            }
        }
    }

    #[test]
    fn hom_dimension_is_additive() {
        let c = cat(Quiver::a2(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let a = c.random_rep(2, &mut rng);
            let a2 = c.random_rep(2, &mut rng);
            let b = c.random_rep(2, &mut rng);
            let sum = direct_sum(&a, &a2).unwrap().total;
            let lhs = HomSpace::new(&sum, &b).unwrap().dim();
            let rhs = HomSpace::new(&a, &b).unwrap().dim() + HomSpace::new(&a2, &b).unwrap().dim();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn intertwiner_law_is_enforced() {
        let c = cat(Quiver::a2(), 2);
        let a = a2_rep(&c, 1, 1, &[vec![1]]);
        let comps = vec![
            Matrix::from_rows(c.field(), &[vec![1]]).unwrap(),
            Matrix::zeros(c.field(), 1, 1),
        ];
        let err = RepMap::new(&a, &a, comps).unwrap_err();
        assert!(matches!(err, Error::LawViolation { law: "intertwiner", .. }));
    }
}
