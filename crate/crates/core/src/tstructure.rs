//! The standard t-structure on bounded complexes and its integer shifts.
//!
//! `t_n` has `C≥0 = {X : H_k(X) = 0 for k < n}` and
//! `C<0 = {X : H_k(X) = 0 for k ≥ n}`. Truncations are the good ones, which
//! are strictly functorial.

use rand::Rng;

use crate::complexes::{
    cofib, cone, fib, homology_map, is_quasi_iso, random_chain_map, solve_factorization, ChainMap, Complex,
    CommutingSquare,
};
use crate::error::{Error, Result};
use crate::quiver::{rep_cokernel, rep_kernel, QuiverRep, RepCategory, RepMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Truncation {
    /// Cut at the cycles `ker d_n`.
    Good,
    /// Cut at the boundaries `im d_{n+1}`; loses `H_n` on the wrong side.
    /// Only used to check that the property suite detects faults.
    Corrupted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TStructure {
    n: i32,
    truncation: Truncation,
}

impl TStructure {
    pub fn new(n: i32) -> Self {
        Self {
            n,
            truncation: Truncation::Good,
        }
    }

    /// A deliberately broken variant whose truncations cut at the boundaries
    /// instead of the cycles.
    #[doc(hidden)]
    pub fn corrupted(n: i32) -> Self {
        Self {
            n,
            truncation: Truncation::Corrupted,
        }
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    /// `t_n[k] = t_{n+k}`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            n: self.n + k,
            ..*self
        }
    }

    /// The poset order: `t_n ≼ t_m` iff `n ≤ m`.
    pub fn precedes(&self, other: &TStructure) -> bool {
        self.n <= other.n
    }

    /// `X ∈ C≥0(t)`.
    pub fn in_coaisle(&self, x: &Complex) -> bool {
        x.homology_support().is_none_or(|(lo, _)| lo >= self.n)
    }

    /// `X ∈ C<0(t)`.
    pub fn in_aisle(&self, x: &Complex) -> bool {
        x.homology_support().is_none_or(|(_, hi)| hi < self.n)
    }

    pub fn heart_contains(&self, x: &Complex) -> bool {
        x.homology_support().is_none_or(|(lo, hi)| lo == self.n && hi == self.n)
    }

    /// The subobject of `X_n` where the truncations cut.
    fn cut(&self, x: &Complex) -> RepMap {
        match self.truncation {
            Truncation::Good => rep_kernel(x.d(self.n)).1,
            Truncation::Corrupted => rep_kernel(&rep_cokernel(x.d(self.n + 1)).1).1,
        }
    }

    /// `τ≥X` with its inclusion into `X`.
    pub fn truncate_ge(&self, x: &Complex) -> (Complex, ChainMap) {
        let n = self.n;
        let s = self.cut(x);
        let hi = x.support().map_or(n, |(_, hi)| hi.max(n));
        let mut terms = vec![s.source().clone()];
        let mut diffs = Vec::new();
        for k in n + 1..=hi {
            terms.push(x.term(k).clone());
            diffs.push(if k == n + 1 {
                x.d(k).lift_through(&s).expect("boundaries lie in the cut")
            } else {
                x.d(k).clone()
            });
        }
        let t = Complex::new(x.category(), n, terms, diffs).expect("truncation is a complex");
        let iota = ChainMap::from_fn(&t, x, |k| if k == n { s.clone() } else { RepMap::identity(x.term(k)) })
            .expect("truncation inclusion is a chain map");
        (t, iota)
    }

    /// `τ<X` with the projection from `X`.
    pub fn truncate_lt(&self, x: &Complex) -> (Complex, ChainMap) {
        let n = self.n;
        let (quot, q) = rep_cokernel(&self.cut(x));
        let lo = x.support().map_or(n, |(lo, _)| lo.min(n));
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for k in lo..=n {
            if k > lo {
                diffs.push(if k == n {
                    x.d(k).descend_through(&q).expect("d vanishes on the cut")
                } else {
                    x.d(k).clone()
                });
            }
            terms.push(if k == n { quot.clone() } else { x.term(k).clone() });
        }
        let t = Complex::new(x.category(), lo, terms, diffs).expect("truncation is a complex");
        let pi = ChainMap::from_fn(x, &t, |k| match k.cmp(&n) {
            std::cmp::Ordering::Less => RepMap::identity(x.term(k)),
            std::cmp::Ordering::Equal => q.clone(),
            std::cmp::Ordering::Greater => RepMap::zero(x.term(k), t.term(k)),
        })
        .expect("truncation projection is a chain map");
        (t, pi)
    }

    pub fn truncate_map_ge(&self, f: &ChainMap) -> ChainMap {
        let n = self.n;
        let (tx, _) = self.truncate_ge(f.source());
        let (ty, _) = self.truncate_ge(f.target());
        let (sx, sy) = (self.cut(f.source()), self.cut(f.target()));
        ChainMap::from_fn(&tx, &ty, |k| {
            if k == n {
                f.comp(n).compose(&sx).lift_through(&sy).expect("chain maps preserve the cut")
            } else {
                f.comp(k)
            }
        })
        .expect("truncated map is a chain map")
    }

    pub fn truncate_map_lt(&self, f: &ChainMap) -> ChainMap {
        let n = self.n;
        let (tx, _) = self.truncate_lt(f.source());
        let (ty, _) = self.truncate_lt(f.target());
        let (_, qx) = rep_cokernel(&self.cut(f.source()));
        let (_, qy) = rep_cokernel(&self.cut(f.target()));
        ChainMap::from_fn(&tx, &ty, |k| {
            if k == n {
                qy.compose(&f.comp(n)).descend_through(&qx).expect("chain maps preserve the cut")
            } else {
                f.comp(k)
            }
        })
        .expect("truncated map is a chain map")
    }

    /// The strict square `τ≥X -> X -> τ<X` over `0`.
    pub fn fiber_sequence_square(&self, x: &Complex) -> CommutingSquare {
        let (s, iota) = self.truncate_ge(x);
        let (r, pi) = self.truncate_lt(x);
        let zero = Complex::zero(x.category());
        CommutingSquare::strict(iota, ChainMap::zero(&s, &zero), pi, ChainMap::zero(&zero, &r))
            .expect("τ≥ -> X -> τ< composes to zero")
    }
}

/// A morphism between heart objects of a fixed t-structure.
#[derive(Clone, Debug)]
pub struct HeartMorphism {
    map: ChainMap,
    t: TStructure,
}

impl HeartMorphism {
    pub fn new(map: ChainMap, t: TStructure) -> Result<Self> {
        for (side, x) in [("source", map.source()), ("target", map.target())] {
            if !t.heart_contains(x) {
                return Err(Error::NotInHeart {
                    shift: t.n,
                    detail: format!("{side} has homology outside degree {}", t.n),
                });
            }
        }
        Ok(Self { map, t })
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    pub fn t_structure(&self) -> TStructure {
        self.t
    }

    pub fn source(&self) -> &Complex {
        self.map.source()
    }

    pub fn target(&self) -> &Complex {
        self.map.target()
    }

    /// The map induced on `H_n`.
    pub fn on_homology(&self) -> RepMap {
        homology_map(&self.map, self.t.n)
    }
}

/// `ker f = τ≥n(fib f)`, with its map to the source.
pub fn heart_kernel(f: &HeartMorphism) -> Result<HeartMorphism> {
    let fb = fib(&f.map);
    let (_, iota) = f.t.truncate_ge(&fb.object);
    HeartMorphism::new(fb.proj.compose(&iota), f.t)
}

/// `coker f = τ<(n+1)(cofib f)`, with its map from the target.
pub fn heart_cokernel(f: &HeartMorphism) -> Result<HeartMorphism> {
    let c = cofib(&f.map);
    let (_, pi) = f.t.shift(1).truncate_lt(&c.object);
    HeartMorphism::new(pi.compose(&c.into), f.t)
}

/// `im f = ker(coker f)`, a monomorphism into the target.
pub fn heart_image(f: &HeartMorphism) -> Result<HeartMorphism> {
    heart_kernel(&heart_cokernel(f)?)
}

/// `coim f = coker(ker f)`, an epimorphism out of the source.
pub fn heart_coimage(f: &HeartMorphism) -> Result<HeartMorphism> {
    heart_cokernel(&heart_kernel(f)?)
}

/// The comparison `coim f -> im f` through which `f` factors, determined up
/// to homotopy by `im∘φ∘coim ≃ f`.
pub fn coimage_to_image(f: &HeartMorphism) -> Result<ChainMap> {
    let q = heart_coimage(f)?;
    let k = heart_image(f)?;
    solve_factorization(&f.map, &q.map, &k.map)
        .map(|(phi, _)| phi)
        .ok_or_else(|| Error::NoFactorization("f does not factor through its coimage and image".into()))
}

/// True iff the coimage-to-image comparison exists and is a quasi-isomorphism.
pub fn first_isomorphism_holds(f: &HeartMorphism) -> bool {
    coimage_to_image(f).is_ok_and(|phi| is_quasi_iso(&phi))
}

/// A random heart object of `t_n` with projective terms: a projective
/// presentation `P_1 -> P_0` in degrees `n+1, n`, plus, half of the time, a
/// contractible summand `cone(id_A)` in degrees `n, n-1`.
pub fn random_heart_object<R: Rng + ?Sized>(cat: &RepCategory, n: i32, max_dim: usize, rng: &mut R) -> Complex {
    let p0 = cat.random_projective(max_dim, rng);
    let mut x = Complex::concentrated(&p0, n);
    for _ in 0..8 {
        let p1 = cat.random_projective(max_dim, rng);
        let hom = crate::quiver::HomSpace::new(&p1, &p0).expect("same category");
        let coeffs: Vec<u32> = (0..hom.dim()).map(|_| cat.field().random(rng)).collect();
        let d = hom.element(&coeffs);
        if d.rank() == p1.dims() {
            x = Complex::two_term(&d, n + 1);
            break;
        }
    }
    if rng.gen_bool(0.5) {
        let a = Complex::concentrated(&cat.random_projective(max_dim.min(2), rng), n - 1);
        let c = cone(&ChainMap::identity(&a)).object;
        x = x.direct_sum(&c).expect("same category");
    }
    x
}

/// A random morphism between random heart objects of `t_n`.
pub fn random_heart_morphism<R: Rng + ?Sized>(cat: &RepCategory, t: TStructure, max_dim: usize, rng: &mut R) -> HeartMorphism {
    let x = random_heart_object(cat, t.n, max_dim, rng);
    let y = random_heart_object(cat, t.n, max_dim, rng);
    HeartMorphism::new(random_chain_map(&x, &y, rng), t).expect("random heart objects lie in the heart")
}

/// `rep` placed in degree `n`, which is a heart object of `t_n`.
pub fn heart_sphere(rep: &QuiverRep, n: i32) -> Complex {
    Complex::concentrated(rep, n)
}
