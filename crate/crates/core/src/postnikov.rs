//! Postnikov towers of bounded morphisms for the standard t-structure.
//!
//! A morphism `f` is bounded by `[a, b)` when `H_k(fib f) = 0` outside it.
//! The tower is built from the truncation filtration of `W = cofib(f)`:
//! `Z_k = Y ×_{τ<c_k W} 0` with cutoffs `c_k = b + 1 - k`, so stage `k` has
//! fiber `H_{b-1-k}(fib f)` placed in degree `b - 1 - k`.

use serde::Serialize;

use crate::complexes::{
    cartesian_comparison, cofib, cone_triangle, fib, homotopic, homotopy_pullback, is_quasi_iso, ChainMap,
    CommutingSquare, Complex, GradedMap, Homotopy, Pullback,
};
use crate::error::{Error, Result};
use crate::tstructure::TStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundWindow {
    pub a: i32,
    pub b: i32,
}

impl BoundWindow {
    pub fn width(&self) -> usize {
        (self.b - self.a) as usize
    }

    pub fn contains(&self, other: &BoundWindow) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// The minimal window containing the homology of `fib f`; `None` when `f`
/// is already invertible.
pub fn boundedness_window(f: &ChainMap) -> Option<BoundWindow> {
    fib(f)
        .object
        .homology_support()
        .map(|(lo, hi)| BoundWindow { a: lo, b: hi + 1 })
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub map: ChainMap,
    /// The single degree in which `fib(map)` may carry homology.
    pub degree: i32,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub window: Option<BoundWindow>,
    /// In construction order: fiber degrees descend from `b - 1` to `a`.
    pub stages: Vec<Stage>,
    /// From the composite of the stages to `f`; absent for the empty tower.
    pub witness: Option<Homotopy>,
}

impl Tower {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// `Z_0, …, Z_{b-a}`.
    pub fn objects(&self) -> Vec<&Complex> {
        let mut out: Vec<&Complex> = self.stages.iter().map(|s| s.map.source()).collect();
        out.extend(self.stages.last().map(|s| s.map.target()));
        out
    }

    pub fn composite(&self) -> Option<ChainMap> {
        let mut it = self.stages.iter();
        let first = it.next()?.map.clone();
        it.try_fold(first, |acc, s| s.map.try_compose(&acc).ok())
    }
}

pub fn postnikov_tower(f: &ChainMap) -> Tower {
    let Some(window) = boundedness_window(f) else {
        return Tower {
            window: None,
            stages: Vec::new(),
            witness: None,
        };
    };
    let m = window.width();
    if m == 1 {
        return Tower {
            window: Some(window),
            stages: vec![Stage {
                map: f.clone(),
                degree: window.a,
            }],
            witness: Some(Homotopy::zero(f)),
        };
    }
    let (x, y) = (f.source(), f.target());
    let zero = Complex::zero(x.category());
    let tri = cone_triangle(f);
    let into = tri.g.clone();

    // Successive truncations T_k = τ<c_k W for k = 1..m-1, with g_k: Y -> T_k.
    let mut pullbacks: Vec<(Pullback, ChainMap)> = Vec::new();
    let mut links: Vec<ChainMap> = Vec::new();
    let mut current = cofib(f).object;
    let mut to_current = into;
    for k in 1..m {
        let c = window.b + 1 - k as i32;
        let (t, pi) = TStructure::new(c).truncate_lt(&current);
        let g = pi.compose(&to_current);
        let pb = homotopy_pullback(&g, &ChainMap::zero(&zero, &t)).expect("common target");
        links.push(pi.clone());
        pullbacks.push((pb, g.clone()));
        current = t;
        to_current = g;
    }

    let mut stages = Vec::with_capacity(m);
    let (pb1, g1) = &pullbacks[0];
    let first = CommutingSquare::new(
        f.clone(),
        ChainMap::zero(x, &zero),
        g1.clone(),
        ChainMap::zero(&zero, g1.target()),
        tri.gf.whisker_left(&links[0]),
    )
    .expect("g_1∘f is nullhomotopic");
    let first = cartesian_comparison(&first);
    debug_assert_eq!(first.target(), &pb1.object);
    stages.push(first);
    for k in 1..m - 1 {
        let (pb, _) = &pullbacks[k - 1];
        let (_, g_next) = &pullbacks[k];
        let sq = CommutingSquare::new(
            pb.proj_x.clone(),
            pb.proj_y.clone(),
            g_next.clone(),
            ChainMap::zero(&zero, g_next.target()),
            pb.witness.whisker_left(&links[k]),
        )
        .expect("truncation preserves the pullback witness");
        stages.push(cartesian_comparison(&sq));
    }
    stages.push(pullbacks[m - 2].0.proj_x.clone());

    let stages: Vec<Stage> = stages
        .into_iter()
        .enumerate()
        .map(|(k, map)| Stage {
            map,
            degree: window.b - 1 - k as i32,
        })
        .collect();
    let mut tower = Tower {
        window: Some(window),
        stages,
        witness: None,
    };
    let composite = tower.composite().expect("stages compose");
    tower.witness = Some(Homotopy::new(&composite, f, GradedMap::zero(x, y, 1)).expect("the tower composes to f on the nose"));
    tower
}

/// Builds the tower after checking `window` contains the minimal one; the
/// minimal window is used regardless.
pub fn postnikov_tower_within(f: &ChainMap, window: BoundWindow) -> Result<Tower> {
    if window.a >= window.b {
        return Err(Error::Shape(format!("empty window [{}, {})", window.a, window.b)));
    }
    match boundedness_window(f) {
        Some(w) if !window.contains(&w) => Err(Error::law(
            "bounded",
            format!("fiber homology spans [{}, {}), outside [{}, {})", w.a, w.b, window.a, window.b),
        )),
        _ => Ok(postnikov_tower(f)),
    }
}

/// Composite `≃ f`, each stage fiber concentrated in its declared degree
/// with the homology of `fib f` there, and degrees enumerate the minimal
/// window exactly.
pub fn verify_tower(f: &ChainMap, tower: &Tower) -> bool {
    let window = boundedness_window(f);
    if tower.window != window {
        return false;
    }
    let Some(window) = window else {
        return tower.is_empty() && is_quasi_iso(f);
    };
    if tower.len() != window.width() {
        return false;
    }
    let mut degrees: Vec<i32> = tower.stages.iter().map(|s| s.degree).collect();
    degrees.sort_unstable();
    if degrees != (window.a..window.b).collect::<Vec<_>>() {
        return false;
    }
    let Some(composite) = tower.composite() else {
        return false;
    };
    if composite.source() != f.source() || composite.target() != f.target() || (composite != *f && homotopic(&composite, f).is_none()) {
        return false;
    }
    let fiber = fib(f).object;
    tower.stages.iter().all(|s| {
        let fs = fib(&s.map).object;
        let concentrated = fs.homology_support().is_none_or(|(lo, hi)| lo == s.degree && hi == s.degree);
        concentrated && fs.homology_dims(s.degree) == fiber.homology_dims(s.degree)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{random_chain_map, random_complex, ComplexParams};
    use crate::linalg::PrimeField;
    use crate::quiver::{Quiver, RepCategory};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn categories() -> Vec<RepCategory> {
        [2, 3]
            .into_iter()
            .flat_map(|p| {
                [Quiver::one_vertex(), Quiver::a2()].map(|q| RepCategory::new(q, PrimeField::new(p).unwrap()))
            })
            .collect()
    }

    #[test]
    fn quasi_iso_has_no_window() {
        let c = &categories()[0];
        let x = Complex::concentrated(&c.simple(0), 1);
        let id = ChainMap::identity(&x);
        assert_eq!(boundedness_window(&id), None);
        let t = postnikov_tower(&id);
        assert!(t.is_empty() && verify_tower(&id, &t));
    }

    #[test]
    fn window_examples() {
        for c in categories() {
            let zero = Complex::zero(&c);
            let s = Complex::concentrated(&c.simple(0), 0);
            let f = ChainMap::zero(&zero, &s);
            assert_eq!(boundedness_window(&f), Some(BoundWindow { a: -1, b: 0 }));
            let t = postnikov_tower(&f);
            assert_eq!(t.len(), 1);
            assert!(verify_tower(&f, &t));

            let x = s.direct_sum(&Complex::concentrated(&c.simple(0), 2)).unwrap();
            let g = ChainMap::zero(&x, &zero);
            assert_eq!(boundedness_window(&g), Some(BoundWindow { a: 0, b: 3 }));
        }
    }

    #[test]
    fn split_two_stage_tower() {
        for c in categories() {
            let zero = Complex::zero(&c);
            let s = Complex::concentrated(&c.simple(0), 0);
            let s1 = Complex::concentrated(&c.projective(0), 1);
            let x = s.direct_sum(&s1).unwrap();
            let f = ChainMap::zero(&x, &zero);
            let t = postnikov_tower(&f);
            assert_eq!(t.len(), 2);
            assert_eq!(t.stages[0].degree, 1);
            assert_eq!(t.stages[1].degree, 0);
            assert_eq!(fib(&t.stages[0].map).object.homology_dims(1), c.projective(0).dims());
            assert_eq!(fib(&t.stages[1].map).object.homology_dims(0), c.simple(0).dims());
            assert!(verify_tower(&f, &t));
        }
    }

    #[test]
    fn gaps_keep_zero_fiber_stages() {
        let c = &categories()[0];
        let zero = Complex::zero(c);
        let x = Complex::concentrated(&c.simple(0), -1)
            .direct_sum(&Complex::concentrated(&c.simple(0), 1))
            .unwrap();
        let f = ChainMap::zero(&x, &zero);
        let t = postnikov_tower(&f);
        assert_eq!(t.len(), 3);
        assert!(is_quasi_iso(&t.stages[1].map));
        assert!(verify_tower(&f, &t));
    }

    #[test]
    fn random_towers_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let params = ComplexParams {
            lo: -2,
            hi: 2,
            max_dim: 2,
            projective: true,
        };
        for c in categories() {
            for _ in 0..8 {
                let x = random_complex(&c, &params, &mut rng);
                let y = random_complex(&c, &params, &mut rng);
                let f = random_chain_map(&x, &y, &mut rng);
                let t = postnikov_tower(&f);
                assert!(verify_tower(&f, &t));
                if let Some(w) = t.window {
                    assert_eq!(t.len(), w.width());
                    assert_eq!(boundedness_window(&t.composite().unwrap()), Some(w));
                }
            }
        }
    }

    #[test]
    fn tampered_towers_fail() {
        let c = &categories()[1];
        let zero = Complex::zero(c);
        let x = Complex::concentrated(&c.simple(0), 0)
            .direct_sum(&Complex::concentrated(&c.simple(0), 1))
            .unwrap();
        let f = ChainMap::zero(&zero, &x);
        let mut t = postnikov_tower(&f);
        assert!(verify_tower(&f, &t));
        t.stages[0].degree += 1;
        assert!(!verify_tower(&f, &t));

        let mut t = postnikov_tower(&f);
        let s = &t.stages[1].map;
        t.stages[1].map = ChainMap::zero(s.source(), s.target());
        assert!(!verify_tower(&f, &t));

        let s = Complex::concentrated(&c.simple(0), 0);
        let g = ChainMap::zero(&zero, &s);
        let mut t = postnikov_tower(&g);
        t.stages[0].degree = 0;
        assert!(!verify_tower(&g, &t));
    }

    #[test]
    fn supplied_window() {
        let c = &categories()[0];
        let zero = Complex::zero(c);
        let s = Complex::concentrated(&c.simple(0), 0);
        let f = ChainMap::zero(&zero, &s);
        let t = postnikov_tower_within(&f, BoundWindow { a: -3, b: 3 }).unwrap();
        assert_eq!(t.len(), 1);
        assert!(postnikov_tower_within(&f, BoundWindow { a: 0, b: 3 }).is_err());
    }
}
