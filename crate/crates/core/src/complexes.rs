//! Bounded chain complexes of quiver representations: the stable model.
//!
//! Homological grading throughout: `d_n: X_n -> X_{n-1}`, `X[k]_n = X_{n-k}`
//! with differential multiplied by `(-1)^k`, `cone(f)_n = X_{n-1} ⊕ Y_n` with
//! `d(x, y) = (-dx, fx + dy)`, and the Hom complex differential
//! `D(φ) = d∘φ - (-1)^n φ∘d` on degree-`n` maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};
use crate::quiver::{rep_cokernel, rep_kernel, HomSpace, Layout, Quiver, QuiverRep, RepCategory, RepMap};

#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    cat: RepCategory,
    lo: i32,
    terms: Vec<QuiverRep>,
    /// `diffs[k]` is `d_{lo+k}` for `k` in `0..=terms.len()`; the two end
    /// maps have a zero source or target.
    diffs: Vec<RepMap>,
    zero: QuiverRep,
    zero_map: RepMap,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for n in self.degrees() {
            m.entry(&n, &(self.term(n), self.d(n).components()));
        }
        m.finish()
    }
}

impl Complex {
    /// Builds a complex with `terms[i]` in degree `lo + i` and
    /// `diffs[i] = d_{lo+i+1}: terms[i+1] -> terms[i]`. Checks `d∘d = 0` and
    /// trims zero terms at both ends.
    pub fn new(cat: &RepCategory, lo: i32, terms: Vec<QuiverRep>, diffs: Vec<RepMap>) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::Shape(format!(
                "{} terms need {} differentials, found {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for t in &terms {
            if t.category() != cat {
                return Err(Error::BaseMismatch);
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.source() != &terms[i + 1] || d.target() != &terms[i] {
                return Err(Error::Shape(format!(
                    "differential in degree {} does not connect the given terms",
                    lo + i as i32 + 1
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i - 1].compose(&diffs[i]).is_zero() {
                return Err(Error::law(
                    "d-squared",
                    format!("d_{} ∘ d_{} is nonzero", lo + i as i32, lo + i as i32 + 1),
                ));
            }
        }
        Ok(Self::trimmed(cat, lo, terms, diffs))
    }

    fn trimmed(cat: &RepCategory, lo: i32, mut terms: Vec<QuiverRep>, mut diffs: Vec<RepMap>) -> Self {
        let zero = cat.zero_rep();
        let zero_map = RepMap::identity(&zero);
        let first = terms.iter().position(|t| !t.is_zero());
        let Some(first) = first else {
            return Self {
                cat: cat.clone(),
                lo: 0,
                terms: vec![],
                diffs: vec![],
                zero,
                zero_map,
            };
        };
        let last = terms.iter().rposition(|t| !t.is_zero()).unwrap();
        terms.truncate(last + 1);
        terms.drain(..first);
        diffs.truncate(last);
        diffs.drain(..first);
        let mut all = Vec::with_capacity(terms.len() + 1);
        all.push(RepMap::zero(&terms[0], &zero));
        all.extend(diffs);
        all.push(RepMap::zero(&zero, terms.last().unwrap()));
        Self {
            cat: cat.clone(),
            lo: lo + first as i32,
            terms,
            diffs: all,
            zero,
            zero_map,
        }
    }

    pub fn zero(cat: &RepCategory) -> Self {
        Self::trimmed(cat, 0, vec![], vec![])
    }

    /// `rep` placed in degree `n`.
    pub fn concentrated(rep: &QuiverRep, n: i32) -> Self {
        Self::trimmed(rep.category(), n, vec![rep.clone()], vec![])
    }

    /// The two-term complex `source(d) -> target(d)` in degrees `n`, `n - 1`.
    pub fn two_term(d: &RepMap, n: i32) -> Self {
        Self::trimmed(
            d.source().category(),
            n - 1,
            vec![d.target().clone(), d.source().clone()],
            vec![d.clone()],
        )
    }

    pub fn category(&self) -> &RepCategory {
        &self.cat
    }

    pub fn field(&self) -> PrimeField {
        self.cat.field()
    }

    /// Degrees of the minimal support; empty for the zero complex.
    pub fn degrees(&self) -> RangeInclusive<i32> {
        self.lo..=self.lo + self.terms.len() as i32 - 1
    }

    pub fn support(&self) -> Option<(i32, i32)> {
        (!self.terms.is_empty()).then(|| (*self.degrees().start(), *self.degrees().end()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: i32) -> &QuiverRep {
        if self.degrees().contains(&n) {
            &self.terms[(n - self.lo) as usize]
        } else {
            &self.zero
        }
    }

    /// `d_n: X_n -> X_{n-1}`.
    pub fn d(&self, n: i32) -> &RepMap {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.diffs.len() {
            &self.diffs[k as usize]
        } else {
            &self.zero_map
        }
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(QuiverRep::total_dim).sum()
    }

    pub fn is_projective(&self) -> bool {
        self.terms.iter().all(QuiverRep::is_projective)
    }

    /// Per-vertex dimensions of `H_n`, computed from ranks alone.
    pub fn homology_dims(&self, n: i32) -> Vec<usize> {
        let out = self.d(n).rank();
        let inc = self.d(n + 1).rank();
        self.term(n)
            .dims()
            .iter()
            .zip(out.iter().zip(&inc))
            .map(|(&d, (&a, &b))| d - a - b)
            .collect()
    }

    pub fn homology(&self, n: i32) -> Homology {
        let (z, cycles) = rep_kernel(self.d(n));
        let boundaries = self
            .d(n + 1)
            .lift_through(&cycles)
            .expect("boundaries are cycles");
        let (rep, projection) = rep_cokernel(&boundaries);
        debug_assert_eq!(projection.source(), &z);
        Homology {
            rep,
            cycles,
            projection,
        }
    }

    /// Degrees with nonzero homology, as a closed interval.
    pub fn homology_support(&self) -> Option<(i32, i32)> {
        let nonzero: Vec<i32> = self
            .degrees()
            .filter(|&n| self.homology_dims(n).iter().any(|&d| d > 0))
            .collect();
        Some((*nonzero.first()?, *nonzero.last()?))
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_support().is_none()
    }

    /// `X[k]`: `X[k]_n = X_{n-k}`, differential times `(-1)^k`.
    pub fn shift(&self, k: i32) -> Complex {
        let s = self.field().sign(k);
        let mut out = self.clone();
        out.lo += k;
        if !out.terms.is_empty() {
            out.diffs = self.diffs.iter().map(|d| d.scale(s)).collect();
        }
        out
    }

    /// The differential as a degree `-1` self-map.
    pub fn differential(&self) -> GradedMap {
        GradedMap {
            source: self.clone(),
            target: self.clone(),
            degree: -1,
            comps: self.degrees().map(|n| self.d(n).clone()).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        if self.cat != other.cat {
            return Err(Error::BaseMismatch);
        }
        Ok(direct_sum_assembled(self, other).complex)
    }
}

/// `H_n` with the cycle inclusion `Z_n -> X_n` and projection `Z_n -> H_n`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub rep: QuiverRep,
    pub cycles: RepMap,
    pub projection: RepMap,
}

/// Induced map `H_n(X) -> H_n(Y)`.
pub fn homology_map(f: &ChainMap, n: i32) -> RepMap {
    let hx = f.source().homology(n);
    let hy = f.target().homology(n);
    let on_cycles = f
        .comp(n)
        .compose(&hx.cycles)
        .lift_through(&hy.cycles)
        .expect("chain maps preserve cycles");
    hy.projection
        .compose(&on_cycles)
        .descend_through(&hx.projection)
        .expect("chain maps preserve boundaries")
}

/// A family of intertwiners `X_n -> Y_{n+degree}`, no compatibility required.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: Complex,
    target: Complex,
    degree: i32,
    /// Indexed by the degrees of `source`.
    comps: Vec<RepMap>,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (n, c) in self.source.degrees().zip(&self.comps) {
            m.entry(&n, &c.components());
        }
        m.finish()
    }
}

impl GradedMap {
    pub fn from_fn(
        source: &Complex,
        target: &Complex,
        degree: i32,
        mut f: impl FnMut(i32) -> RepMap,
    ) -> Result<Self> {
        if source.cat != target.cat {
            return Err(Error::BaseMismatch);
        }
        let comps = source
            .degrees()
            .map(|n| {
                let c = f(n);
                if c.source() != source.term(n) || c.target() != target.term(n + degree) {
                    return Err(Error::Shape(format!(
                        "component in degree {n} does not match the terms"
                    )));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            degree,
            comps,
        })
    }

    pub fn zero(source: &Complex, target: &Complex, degree: i32) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            degree,
            comps: source
                .degrees()
                .map(|n| RepMap::zero(source.term(n), target.term(n + degree)))
                .collect(),
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Component `X_n -> Y_{n+degree}`; zero outside the source support.
    pub fn comp(&self, n: i32) -> RepMap {
        if self.source.degrees().contains(&n) {
            self.comps[(n - self.source.lo) as usize].clone()
        } else {
            RepMap::zero(self.source.term(n), self.target.term(n + self.degree))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RepMap::is_zero)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> GradedMap {
        assert!(first.target == self.source, "composing graded maps with mismatched ends");
        GradedMap {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            comps: first
                .source
                .degrees()
                .zip(&first.comps)
                .map(|(n, f)| self.comp(n + first.degree).compose(f))
                .collect(),
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert!(
            self.source == other.source && self.target == other.target && self.degree == other.degree,
            "adding graded maps with different ends"
        );
        GradedMap {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(self.source.field().p() - 1)
    }

    pub fn scale(&self, s: u32) -> GradedMap {
        GradedMap {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `D(φ) = d∘φ - (-1)^n φ∘d`.
    pub fn boundary(&self) -> GradedMap {
        let left = self.target.differential().compose(self);
        let right = self.compose(&self.source.differential());
        left.sub(&right.scale(self.source.field().sign(self.degree)))
    }
}

/// A degree-zero graded map commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap(GradedMap);

impl ChainMap {
    pub fn new(map: GradedMap) -> Result<Self> {
        if map.degree != 0 {
            return Err(Error::Shape(format!("chain maps have degree 0, found {}", map.degree)));
        }
        if !map.boundary().is_zero() {
            return Err(Error::law("chain-map", "d∘f differs from f∘d"));
        }
        Ok(Self(map))
    }

    pub fn from_fn(source: &Complex, target: &Complex, f: impl FnMut(i32) -> RepMap) -> Result<Self> {
        Self::new(GradedMap::from_fn(source, target, 0, f)?)
    }

    pub fn identity(x: &Complex) -> Self {
        Self(GradedMap {
            source: x.clone(),
            target: x.clone(),
            degree: 0,
            comps: x.terms.iter().map(RepMap::identity).collect(),
        })
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        Self(GradedMap::zero(source, target, 0))
    }

    pub fn graded(&self) -> &GradedMap {
        &self.0
    }

    pub fn source(&self) -> &Complex {
        &self.0.source
    }

    pub fn target(&self) -> &Complex {
        &self.0.target
    }

    pub fn comp(&self, n: i32) -> RepMap {
        self.0.comp(n)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self ∘ first`; panics if the ends do not match.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        ChainMap(self.0.compose(&first.0))
    }

    pub fn try_compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target() != self.source() {
            return Err(Error::Shape("target of the first map is not the source of the second".into()));
        }
        Ok(self.compose(first))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        ChainMap(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        ChainMap(self.0.sub(&other.0))
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap(self.0.neg())
    }

    pub fn scale(&self, s: u32) -> ChainMap {
        ChainMap(self.0.scale(s))
    }

    /// `f[k]`, with `f[k]_n = f_{n-k}`.
    pub fn shift(&self, k: i32) -> ChainMap {
        let src = self.source().shift(k);
        let tgt = self.target().shift(k);
        ChainMap(GradedMap {
            source: src,
            target: tgt,
            degree: 0,
            comps: self.0.comps.clone(),
        })
    }

    pub fn is_quasi_iso(&self) -> bool {
        is_quasi_iso(self)
    }
}

/// A homotopy `h` from `from` to `to`: `to - from = d∘h + h∘d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    from: ChainMap,
    to: ChainMap,
    map: GradedMap,
}

impl Homotopy {
    pub fn new(from: &ChainMap, to: &ChainMap, map: GradedMap) -> Result<Self> {
        if map.degree != 1 {
            return Err(Error::Shape(format!("homotopies have degree 1, found {}", map.degree)));
        }
        if from.source() != to.source()
            || from.target() != to.target()
            || map.source() != from.source()
            || map.target() != from.target()
        {
            return Err(Error::Shape("homotopy ends do not match its chain maps".into()));
        }
        if map.boundary() != to.sub(from).0 {
            return Err(Error::law("homotopy", "to - from differs from dh + hd"));
        }
        Ok(Self {
            from: from.clone(),
            to: to.clone(),
            map,
        })
    }

    /// The zero homotopy from `f` to itself.
    pub fn zero(f: &ChainMap) -> Self {
        Self {
            from: f.clone(),
            to: f.clone(),
            map: GradedMap::zero(f.source(), f.target(), 1),
        }
    }

    pub fn from(&self) -> &ChainMap {
        &self.from
    }

    pub fn to(&self) -> &ChainMap {
        &self.to
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }

    pub fn comp(&self, n: i32) -> RepMap {
        self.map.comp(n)
    }

    /// `g ∘ h`, a homotopy from `g∘from` to `g∘to`.
    pub fn whisker_left(&self, g: &ChainMap) -> Homotopy {
        Homotopy {
            from: g.compose(&self.from),
            to: g.compose(&self.to),
            map: g.0.compose(&self.map),
        }
    }

    /// `h ∘ f`, a homotopy from `from∘f` to `to∘f`.
    pub fn whisker_right(&self, f: &ChainMap) -> Homotopy {
        Homotopy {
            from: self.from.compose(f),
            to: self.to.compose(f),
            map: self.map.compose(&f.0),
        }
    }

    /// The reversed homotopy, from `to` to `from`.
    pub fn reverse(&self) -> Homotopy {
        Homotopy {
            from: self.to.clone(),
            to: self.from.clone(),
            map: self.map.neg(),
        }
    }

    /// Concatenation: `self` then `next`.
    pub fn then(&self, next: &Homotopy) -> Homotopy {
        assert!(self.to == next.from, "concatenating non-adjacent homotopies");
        Homotopy {
            from: self.from.clone(),
            to: next.to.clone(),
            map: self.map.add(&next.map),
        }
    }
}

/// A square `A --top--> B --right--> D`, `A --left--> C --bottom--> D`
/// with a homotopy from `right∘top` to `bottom∘left`.
#[derive(Clone, Debug)]
pub struct CommutingSquare {
    pub top: ChainMap,
    pub left: ChainMap,
    pub right: ChainMap,
    pub bottom: ChainMap,
    pub witness: Homotopy,
}

impl CommutingSquare {
    pub fn new(top: ChainMap, left: ChainMap, right: ChainMap, bottom: ChainMap, witness: Homotopy) -> Result<Self> {
        if top.source() != left.source()
            || right.source() != top.target()
            || bottom.source() != left.target()
            || right.target() != bottom.target()
        {
            return Err(Error::Shape("square edges do not connect".into()));
        }
        if witness.from != right.compose(&top) || witness.to != bottom.compose(&left) {
            return Err(Error::law("homotopy", "square witness does not connect the two composites"));
        }
        Ok(Self {
            top,
            left,
            right,
            bottom,
            witness,
        })
    }

    /// A strictly commuting square, witnessed by the zero homotopy.
    pub fn strict(top: ChainMap, left: ChainMap, right: ChainMap, bottom: ChainMap) -> Result<Self> {
        if top.source() != left.source()
            || right.source() != top.target()
            || bottom.source() != left.target()
            || right.target() != bottom.target()
        {
            return Err(Error::Shape("square edges do not connect".into()));
        }
        let a = right.compose(&top);
        let b = bottom.compose(&left);
        let witness = Homotopy::new(&a, &b, GradedMap::zero(a.source(), a.target(), 1))
            .map_err(|_| Error::law("homotopy", "square does not commute strictly"))?;
        Self::new(top, left, right, bottom, witness)
    }

    pub fn corner(&self) -> &Complex {
        self.top.source()
    }
}

/// `X -f-> Y -g-> Z -h-> X[1]` with nullhomotopies of consecutive composites.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
    /// From `g∘f` to 0.
    pub gf: Homotopy,
    /// From `h∘g` to 0.
    pub hg: Homotopy,
    /// From `f[1]∘h` to 0.
    pub fh: Homotopy,
}

/// A complex assembled degreewise from direct sums of parts.
struct Assembled {
    cat: RepCategory,
    complex: Complex,
    layouts: BTreeMap<i32, Layout>,
    arity: usize,
}

impl Assembled {
    fn build(
        cat: &RepCategory,
        (lo, hi): (i32, i32),
        parts: impl Fn(i32) -> Vec<QuiverRep>,
        diff: impl Fn(i32, &Layout, &Layout) -> RepMap,
    ) -> Self {
        let arity = parts(lo).len();
        let layouts: BTreeMap<i32, Layout> = (lo..=hi)
            .map(|n| {
                let p = parts(n);
                let refs: Vec<&QuiverRep> = p.iter().collect();
                (n, Layout::new(cat, &refs))
            })
            .collect();
        let terms = (lo..=hi).map(|n| layouts[&n].total.clone()).collect();
        let diffs = (lo + 1..=hi).map(|n| diff(n, &layouts[&n], &layouts[&(n - 1)])).collect();
        let complex = Complex::new(cat, lo, terms, diffs).expect("assembled complex satisfies d∘d = 0");
        Self {
            cat: cat.clone(),
            complex,
            layouts,
            arity,
        }
    }

    fn layout(&self, n: i32) -> Layout {
        self.layouts.get(&n).cloned().unwrap_or_else(|| {
            let z = self.cat.zero_rep();
            Layout::new(&self.cat, &vec![&z; self.arity])
        })
    }
}

fn single(rep: &QuiverRep) -> Layout {
    Layout::new(rep.category(), &[rep])
}

fn block(src: &Layout, tgt: &Layout, blocks: &[(usize, usize, &RepMap)]) -> RepMap {
    RepMap::from_blocks(src, tgt, blocks).expect("block map is an intertwiner")
}

fn span(complexes: &[(&Complex, i32)]) -> (i32, i32) {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for (c, offset) in complexes {
        if let Some((a, b)) = c.support() {
            lo = lo.min(a + offset);
            hi = hi.max(b + offset);
        }
    }
    if lo > hi {
        (0, 0)
    } else {
        (lo, hi)
    }
}

fn direct_sum_assembled(x: &Complex, y: &Complex) -> Assembled {
    Assembled::build(
        &x.cat,
        span(&[(x, 0), (y, 0)]),
        |n| vec![x.term(n).clone(), y.term(n).clone()],
        |n, s, t| block(s, t, &[(0, 0, x.d(n)), (1, 1, y.d(n))]),
    )
}

fn cone_assembled(f: &ChainMap) -> Assembled {
    let (x, y) = (f.source(), f.target());
    Assembled::build(
        &x.cat,
        span(&[(x, 1), (y, 0)]),
        |n| vec![x.term(n - 1).clone(), y.term(n).clone()],
        |n, s, t| {
            let mdx = x.d(n - 1).neg();
            let fx = f.comp(n - 1);
            block(s, t, &[(0, 0, &mdx), (1, 0, &fx), (1, 1, y.d(n))])
        },
    )
}

/// The mapping cone with its structure maps `Y -> cone(f) -> X[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub object: Complex,
    pub into: ChainMap,
    pub outof: ChainMap,
}

pub fn cone(f: &ChainMap) -> Cone {
    let a = cone_assembled(f);
    let (x, y) = (f.source(), f.target());
    let into = ChainMap::from_fn(y, &a.complex, |n| block(&single(y.term(n)), &a.layout(n), &[(1, 0, &RepMap::identity(y.term(n)))]))
        .expect("cone inclusion is a chain map");
    let x1 = x.shift(1);
    let outof = ChainMap::from_fn(&a.complex, &x1, |n| {
        block(&a.layout(n), &single(x1.term(n)), &[(0, 0, &RepMap::identity(x1.term(n)))])
    })
    .expect("cone projection is a chain map");
    Cone {
        object: a.complex,
        into,
        outof,
    }
}

/// The cofiber of `f`, which is its cone.
pub fn cofib(f: &ChainMap) -> Cone {
    cone(f)
}

/// The fiber `cone(f)[-1]`: `fib_n = X_n ⊕ Y_{n+1}`, `d(x, y) = (dx, -fx - dy)`,
/// with projection to `X` and inclusion of `Y[-1]`.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub object: Complex,
    pub proj: ChainMap,
    pub incl: ChainMap,
}

pub fn fib(f: &ChainMap) -> Fiber {
    let (x, y) = (f.source(), f.target());
    let a = Assembled::build(
        &x.cat,
        span(&[(x, 0), (y, -1)]),
        |n| vec![x.term(n).clone(), y.term(n + 1).clone()],
        |n, s, t| {
            let mf = f.comp(n).neg();
            let mdy = y.d(n + 1).neg();
            block(s, t, &[(0, 0, x.d(n)), (1, 0, &mf), (1, 1, &mdy)])
        },
    );
    let proj = ChainMap::from_fn(&a.complex, x, |n| block(&a.layout(n), &single(x.term(n)), &[(0, 0, &RepMap::identity(x.term(n)))]))
        .expect("fiber projection is a chain map");
    let ym = y.shift(-1);
    let incl = ChainMap::from_fn(&ym, &a.complex, |n| {
        block(&single(ym.term(n)), &a.layout(n), &[(1, 0, &RepMap::identity(ym.term(n)))])
    })
    .expect("fiber inclusion is a chain map");
    Fiber {
        object: a.complex,
        proj,
        incl,
    }
}

/// The square `fib(f) -> X -> Y`, `fib(f) -> 0 -> Y`, witnessed by
/// `(x, y) ↦ y`.
pub fn fiber_square(f: &ChainMap) -> CommutingSquare {
    let fb = fib(f);
    let (x, y) = (f.source(), f.target());
    let zero = Complex::zero(&x.cat);
    let h = GradedMap::from_fn(&fb.object, y, 1, |n| {
        let l = Layout::new(&x.cat, &[x.term(n), y.term(n + 1)]);
        block(&l, &single(y.term(n + 1)), &[(0, 1, &RepMap::identity(y.term(n + 1)))])
    })
    .expect("fiber witness has matching components");
    let to_zero = ChainMap::zero(&fb.object, &zero);
    let zero_y = ChainMap::zero(&zero, y);
    let witness = Homotopy::new(&f.compose(&fb.proj), &zero_y.compose(&to_zero), h).expect("fiber witness is a homotopy");
    CommutingSquare::new(fb.proj, to_zero, f.clone(), zero_y, witness).expect("fiber square is valid")
}

/// The distinguished triangle `X -> Y -> cone(f) -> X[1]` with its witnesses.
pub fn cone_triangle(f: &ChainMap) -> Triangle {
    let a = cone_assembled(f);
    let c = cone(f);
    let (x, y) = (f.source(), f.target());
    let gf = c.into.compose(f);
    let h1 = GradedMap::from_fn(x, &c.object, 1, |n| {
        block(&single(x.term(n)), &a.layout(n + 1), &[(0, 0, &RepMap::identity(x.term(n)).neg())])
    })
    .unwrap();
    let gf_w = Homotopy::new(&gf, &ChainMap::zero(x, &c.object), h1).expect("g∘f is nullhomotopic");
    let hg = c.outof.compose(&c.into);
    let hg_w = Homotopy::zero(&hg);
    let f1 = f.shift(1);
    let fh = f1.compose(&c.outof);
    let y1 = y.shift(1);
    let h3 = GradedMap::from_fn(&c.object, &y1, 1, |n| {
        block(&a.layout(n), &single(y1.term(n + 1)), &[(0, 1, &RepMap::identity(y.term(n)).neg())])
    })
    .unwrap();
    let fh_w = Homotopy::new(&fh, &ChainMap::zero(&c.object, &y1), h3).expect("f[1]∘h is nullhomotopic");
    Triangle {
        f: f.clone(),
        g: c.into,
        h: c.outof,
        gf: gf_w,
        hg: hg_w,
        fh: fh_w,
    }
}

/// True iff the cone of `f` is acyclic.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    cone_assembled(f).complex.is_acyclic()
}

/// A homotopy pullback `W` of `X -f-> Z <-g- Y` with the witness from
/// `f∘proj_x` to `g∘proj_y`. `W_n = X_n ⊕ Y_n ⊕ Z_{n+1}`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Complex,
    pub proj_x: ChainMap,
    pub proj_y: ChainMap,
    pub witness: Homotopy,
}

impl Pullback {
    /// The pullback square with `proj_x` on top and `proj_y` on the left.
    pub fn square(&self, f: &ChainMap, g: &ChainMap) -> CommutingSquare {
        CommutingSquare::new(self.proj_x.clone(), self.proj_y.clone(), f.clone(), g.clone(), self.witness.clone())
            .expect("pullback square is valid")
    }
}

fn pullback_assembled(f: &ChainMap, g: &ChainMap) -> Assembled {
    let (x, y, z) = (f.source(), g.source(), f.target());
    Assembled::build(
        &x.cat,
        span(&[(x, 0), (y, 0), (z, -1)]),
        |n| vec![x.term(n).clone(), y.term(n).clone(), z.term(n + 1).clone()],
        |n, s, t| {
            let mf = f.comp(n).neg();
            let gn = g.comp(n);
            let mdz = z.d(n + 1).neg();
            block(s, t, &[(0, 0, x.d(n)), (1, 1, y.d(n)), (2, 0, &mf), (2, 1, &gn), (2, 2, &mdz)])
        },
    )
}

pub fn homotopy_pullback(f: &ChainMap, g: &ChainMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::Shape("pullback needs a common target".into()));
    }
    let a = pullback_assembled(f, g);
    let (x, y, z) = (f.source(), g.source(), f.target());
    let w = &a.complex;
    let proj = |part: usize, c: &Complex| {
        ChainMap::from_fn(w, c, |n| block(&a.layout(n), &single(c.term(n)), &[(0, part, &RepMap::identity(c.term(n)))]))
            .expect("pullback projection is a chain map")
    };
    let proj_x = proj(0, x);
    let proj_y = proj(1, y);
    let h = GradedMap::from_fn(w, z, 1, |n| {
        block(&a.layout(n), &single(z.term(n + 1)), &[(0, 2, &RepMap::identity(z.term(n + 1)))])
    })?;
    let witness = Homotopy::new(&f.compose(&proj_x), &g.compose(&proj_y), h)?;
    Ok(Pullback {
        object: a.complex,
        proj_x,
        proj_y,
        witness,
    })
}

/// A homotopy pushout `Z` of `X <-f- W -g-> Y` with the witness from
/// `inj_x∘f` to `inj_y∘g`. `Z_n = W_{n-1} ⊕ X_n ⊕ Y_n`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Complex,
    pub inj_x: ChainMap,
    pub inj_y: ChainMap,
    pub witness: Homotopy,
}

impl Pushout {
    /// The pushout square with `f` on top and `g` on the left.
    pub fn square(&self, f: &ChainMap, g: &ChainMap) -> CommutingSquare {
        CommutingSquare::new(f.clone(), g.clone(), self.inj_x.clone(), self.inj_y.clone(), self.witness.clone())
            .expect("pushout square is valid")
    }
}

fn pushout_assembled(f: &ChainMap, g: &ChainMap) -> Assembled {
    let (w, x, y) = (f.source(), f.target(), g.target());
    Assembled::build(
        &w.cat,
        span(&[(w, 1), (x, 0), (y, 0)]),
        |n| vec![w.term(n - 1).clone(), x.term(n).clone(), y.term(n).clone()],
        |n, s, t| {
            let mdw = w.d(n - 1).neg();
            let fw = f.comp(n - 1);
            let mgw = g.comp(n - 1).neg();
            block(s, t, &[(0, 0, &mdw), (1, 0, &fw), (1, 1, x.d(n)), (2, 0, &mgw), (2, 2, y.d(n))])
        },
    )
}

pub fn homotopy_pushout(f: &ChainMap, g: &ChainMap) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::Shape("pushout needs a common source".into()));
    }
    let a = pushout_assembled(f, g);
    let (w, x, y) = (f.source(), f.target(), g.target());
    let z = &a.complex;
    let inj = |part: usize, c: &Complex| {
        ChainMap::from_fn(c, z, |n| block(&single(c.term(n)), &a.layout(n), &[(part, 0, &RepMap::identity(c.term(n)))]))
            .expect("pushout injection is a chain map")
    };
    let inj_x = inj(1, x);
    let inj_y = inj(2, y);
    let h = GradedMap::from_fn(w, z, 1, |n| {
        block(&single(w.term(n)), &a.layout(n + 1), &[(0, 0, &RepMap::identity(w.term(n)).neg())])
    })?;
    let witness = Homotopy::new(&inj_x.compose(f), &inj_y.compose(g), h)?;
    Ok(Pushout {
        object: a.complex,
        inj_x,
        inj_y,
        witness,
    })
}

/// The map from the corner of a square into the homotopy pullback of its
/// cospan: `a ↦ (top a, left a, H a)`.
pub fn cartesian_comparison(sq: &CommutingSquare) -> ChainMap {
    let a = pullback_assembled(&sq.right, &sq.bottom);
    let src = sq.corner();
    ChainMap::from_fn(src, &a.complex, |n| {
        let (t, l, h) = (sq.top.comp(n), sq.left.comp(n), sq.witness.comp(n));
        block(&single(src.term(n)), &a.layout(n), &[(0, 0, &t), (1, 0, &l), (2, 0, &h)])
    })
    .expect("cartesian comparison is a chain map")
}

/// The map from the homotopy pushout of a square's span to its far corner:
/// `(a, b, c) ↦ right b + bottom c - H a`.
pub fn cocartesian_comparison(sq: &CommutingSquare) -> ChainMap {
    let a = pushout_assembled(&sq.top, &sq.left);
    let d = sq.right.target();
    ChainMap::from_fn(&a.complex, d, |n| {
        let (r, b, mh) = (sq.right.comp(n), sq.bottom.comp(n), sq.witness.comp(n - 1).neg());
        block(&a.layout(n), &single(d.term(n)), &[(0, 0, &mh), (0, 1, &r), (0, 2, &b)])
    })
    .expect("cocartesian comparison is a chain map")
}

/// Outcome of both pullout tests on a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PulloutReport {
    pub cartesian: bool,
    pub cocartesian: bool,
}

impl PulloutReport {
    pub fn holds(&self) -> bool {
        self.cartesian && self.cocartesian
    }

    pub fn agree(&self) -> bool {
        self.cartesian == self.cocartesian
    }
}

pub fn is_pullout(sq: &CommutingSquare) -> PulloutReport {
    PulloutReport {
        cartesian: is_quasi_iso(&cartesian_comparison(sq)),
        cocartesian: is_quasi_iso(&cocartesian_comparison(sq)),
    }
}

/// The Hom complex of two complexes, a complex of plain vector spaces whose
/// degree-`n` term is `⊕_i Hom(X_i, Y_{i+n})`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    source: Complex,
    target: Complex,
    complex: Complex,
    /// `(n, i)` to the coordinate offset and space of `Hom(X_i, Y_{i+n})`.
    blocks: BTreeMap<(i32, i32), (usize, HomSpace)>,
    dims: BTreeMap<i32, usize>,
}

impl HomComplex {
    pub fn new(x: &Complex, y: &Complex) -> Result<Self> {
        if x.cat != y.cat {
            return Err(Error::BaseMismatch);
        }
        let field = x.field();
        let vcat = RepCategory::new(Quiver::one_vertex(), field);
        let mut blocks = BTreeMap::new();
        let mut dims = BTreeMap::new();
        let (lo, hi) = match (x.support(), y.support()) {
            (Some((xl, xh)), Some((yl, yh))) => (yl - xh, yh - xl),
            _ => (0, -1),
        };
        for n in lo..=hi {
            let mut off = 0;
            for i in x.degrees() {
                let t = y.term(i + n);
                if t.is_zero() {
                    continue;
                }
                let h = HomSpace::new(x.term(i), t)?;
                let d = h.dim();
                blocks.insert((n, i), (off, h));
                off += d;
            }
            dims.insert(n, off);
        }
        let mut this = Self {
            source: x.clone(),
            target: y.clone(),
            complex: Complex::zero(&vcat),
            blocks,
            dims,
        };
        let terms: Vec<QuiverRep> = (lo..=hi)
            .map(|n| QuiverRep::new(&vcat, vec![this.dim(n)], vec![]).unwrap())
            .collect();
        let diffs = (lo + 1..=hi)
            .map(|n| {
                let i = (n - lo) as usize;
                RepMap::new(&terms[i], &terms[i - 1], vec![this.differential(n)]).unwrap()
            })
            .collect();
        this.complex = Complex::new(&vcat, lo, terms, diffs)?;
        Ok(this)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    /// The Hom complex as a complex over the one-vertex quiver.
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn homology_dim(&self, n: i32) -> usize {
        self.complex.homology_dims(n)[0]
    }

    /// The degree-`n` graded map with the given coordinates.
    pub fn element(&self, n: i32, coeffs: &[u32]) -> GradedMap {
        assert_eq!(coeffs.len(), self.dim(n), "coordinate vector has the wrong length");
        GradedMap::from_fn(&self.source, &self.target, n, |i| match self.blocks.get(&(n, i)) {
            Some((off, h)) => h.element(&coeffs[*off..off + h.dim()]),
            None => RepMap::zero(self.source.term(i), self.target.term(i + n)),
        })
        .expect("Hom complex element has matching components")
    }

    pub fn coordinates(&self, map: &GradedMap) -> Vec<u32> {
        let n = map.degree();
        let mut out = vec![0; self.dim(n)];
        for ((m, i), (off, h)) in &self.blocks {
            if *m == n {
                let c = h.coordinates_of(map.comp(*i).components());
                out[*off..off + c.len()].copy_from_slice(&c);
            }
        }
        out
    }

    /// Matrix of `D: Hom_n -> Hom_{n-1}`.
    pub fn differential(&self, n: i32) -> Matrix {
        let field = self.source.field();
        let mut m = Matrix::zeros(field, self.dim(n - 1), self.dim(n));
        let sign = field.neg(field.sign(n));
        for ((deg, i), (off, h)) in &self.blocks {
            if *deg != n {
                continue;
            }
            for j in 0..h.dim() {
                let mut e = vec![0; h.dim()];
                e[j] = 1;
                let phi = h.element(&e);
                if let Some((toff, th)) = self.blocks.get(&(n - 1, *i)) {
                    let v = th.coordinates_of(self.target.d(i + n).compose(&phi).components());
                    for (r, x) in v.into_iter().enumerate() {
                        m.set(toff + r, off + j, field.add(m.get(toff + r, off + j), x));
                    }
                }
                if let Some((toff, th)) = self.blocks.get(&(n - 1, i + 1)) {
                    let v = th.coordinates_of(phi.compose(self.source.d(i + 1)).scale(sign).components());
                    for (r, x) in v.into_iter().enumerate() {
                        m.set(toff + r, off + j, field.add(m.get(toff + r, off + j), x));
                    }
                }
            }
        }
        m
    }

    /// Basis of the degree-`n` cycles, as columns.
    pub fn cycles(&self, n: i32) -> Matrix {
        self.differential(n).kernel_basis()
    }
}

pub fn hom_complex(x: &Complex, y: &Complex) -> Result<HomComplex> {
    HomComplex::new(x, y)
}

/// Finds a homotopy from `f` to `g` if one exists.
pub fn homotopic(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    if f.source() != g.source() || f.target() != g.target() {
        return None;
    }
    let hom = HomComplex::new(f.source(), f.target()).ok()?;
    let diff = g.sub(f);
    let rhs = hom.coordinates(diff.graded());
    let field = f.source().field();
    let sol = hom
        .differential(1)
        .solve(&Matrix::column_vector(field, &rhs))
        .ok()??;
    let h = hom.element(1, sol.particular.entries());
    Homotopy::new(f, g, h).ok()
}

/// Finds a chain map `φ: C -> I` with `k∘φ∘q ≃ f`, for `q: X -> C`,
/// `k: I -> Y` and `f: X -> Y`, together with the homotopy from `k∘φ∘q`
/// to `f`. Exact up to homotopy of chain maps; derived when `C` and `X`
/// have projective terms.
pub fn solve_factorization(f: &ChainMap, q: &ChainMap, k: &ChainMap) -> Option<(ChainMap, Homotopy)> {
    if q.source() != f.source() || k.target() != f.target() {
        return None;
    }
    let field = f.source().field();
    let inner = HomComplex::new(q.target(), k.source()).ok()?;
    let outer = HomComplex::new(f.source(), f.target()).ok()?;
    let cycles = inner.cycles(0);
    let mut system = Matrix::zeros(field, outer.dim(0), 0);
    for j in 0..cycles.cols() {
        let phi = inner.element(0, &cycles.column(j));
        let image = k.graded().compose(&phi).compose(q.graded());
        system = system.hstack(&Matrix::column_vector(field, &outer.coordinates(&image)));
    }
    let system = system.hstack(&outer.differential(1));
    let rhs = Matrix::column_vector(field, &outer.coordinates(f.graded()));
    let sol = system.solve(&rhs).ok()??;
    let coeffs = sol.particular.entries();
    let (a, h) = coeffs.split_at(cycles.cols());
    let a = Matrix::column_vector(field, a);
    let phi_coords = cycles.mul(&a);
    let phi = ChainMap::new(inner.element(0, phi_coords.entries())).ok()?;
    let composite = k.compose(&phi).compose(q);
    let w = Homotopy::new(&composite, f, outer.element(1, h)).ok()?;
    Some((phi, w))
}

/// Shape of randomly generated complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexParams {
    pub lo: i32,
    pub hi: i32,
    pub max_dim: usize,
    /// Use projective terms, so that Hom complexes compute derived Hom.
    pub projective: bool,
}

impl Default for ComplexParams {
    fn default() -> Self {
        Self {
            lo: -4,
            hi: 4,
            max_dim: 4,
            projective: true,
        }
    }
}

fn random_combination<R: Rng + ?Sized>(field: PrimeField, basis: &Matrix, rng: &mut R) -> Vec<u32> {
    let coeffs: Vec<u32> = (0..basis.cols()).map(|_| field.random(rng)).collect();
    basis.mul(&Matrix::column_vector(field, &coeffs)).entries().to_vec()
}

/// A random complex supported in `[lo, hi]`, built upward: each `d_n` is a
/// random intertwiner into the kernel of `d_{n-1}`. Coefficients on the Hom
/// basis are zero with probability one half, so that differentials of low
/// rank (and hence nonzero homology) are common.
pub fn random_complex<R: Rng + ?Sized>(cat: &RepCategory, params: &ComplexParams, rng: &mut R) -> Complex {
    let field = cat.field();
    let mut terms: Vec<QuiverRep> = Vec::new();
    let mut diffs: Vec<RepMap> = Vec::new();
    for n in params.lo..=params.hi {
        let t = if params.projective {
            cat.random_projective(params.max_dim, rng)
        } else {
            cat.random_rep(params.max_dim, rng)
        };
        if n > params.lo {
            let below = terms.last().unwrap();
            let kernel = match diffs.last() {
                Some(d) => rep_kernel(d).1,
                None => RepMap::identity(below),
            };
            let hom = HomSpace::new(&t, kernel.source()).expect("same category");
            let coeffs: Vec<u32> = (0..hom.dim())
                .map(|_| if rng.gen_bool(0.5) { 0 } else { field.random(rng) })
                .collect();
            diffs.push(kernel.compose(&hom.element(&coeffs)));
        }
        terms.push(t);
    }
    Complex::new(cat, params.lo, terms, diffs).expect("random complex satisfies d∘d = 0")
}

/// A uniformly random chain map `X -> Y`.
pub fn random_chain_map<R: Rng + ?Sized>(x: &Complex, y: &Complex, rng: &mut R) -> ChainMap {
    let hom = HomComplex::new(x, y).expect("same category");
    let coeffs = random_combination(x.field(), &hom.cycles(0), rng);
    ChainMap::new(hom.element(0, &coeffs)).expect("degree-0 cycles are chain maps")
}

/// A uniformly random degree-`n` graded map `X -> Y`.
pub fn random_graded_map<R: Rng + ?Sized>(x: &Complex, y: &Complex, n: i32, rng: &mut R) -> GradedMap {
    let hom = HomComplex::new(x, y).expect("same category");
    let coeffs: Vec<u32> = (0..hom.dim(n)).map(|_| x.field().random(rng)).collect();
    hom.element(n, &coeffs)
}

/// Perturbs `f` by a random null-homotopic map, returning the new map and a
/// homotopy from `f` to it.
pub fn random_homotopic<R: Rng + ?Sized>(f: &ChainMap, rng: &mut R) -> (ChainMap, Homotopy) {
    let h = random_graded_map(f.source(), f.target(), 1, rng);
    let g = ChainMap::new(f.graded().add(&h.boundary())).expect("f + Dh is a chain map");
    let w = Homotopy::new(f, &g, h).expect("h is a homotopy from f to f + Dh");
    (g, w)
}
