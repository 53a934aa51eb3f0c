//! Seeded property suite: every check of the workbench run over random
//! samples, with deterministic reports and replayable counterexamples.
//!
//! Case `i` of property `k` draws from `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `(k << 32) | i`, so results do not depend on scheduling. The
//! reported counterexample is the failing case with the lowest index.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{
    cone, fiber_square, homotopy_pullback, homotopy_pushout, is_pullout, is_quasi_iso, random_chain_map,
    random_complex, random_homotopic, ChainMap, CommutingSquare, Complex, ComplexParams, HomComplex,
};
use crate::document::{Document, RawQuiver};
use crate::error::{Error, Result};
use crate::factorization::{
    antitone_check, derived_hom_dim, factor, factorization_check, in_e, in_m, is_orthogonal, normality_report,
    roundtrip_morphism, roundtrip_object, sator_check, semiexact_report, solve_lifting, star_square_report,
    three_for_two_check, MorphismClass,
};
use crate::linalg::PrimeField;
use crate::postnikov::{boundedness_window, postnikov_tower, verify_tower};
use crate::quiver::{rep_cokernel, rep_kernel, Layout, Quiver, RepCategory};
use crate::tstructure::{
    first_isomorphism_holds, heart_cokernel, heart_kernel, random_heart_morphism, HeartMorphism, TStructure,
};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Pullout,
    TAxioms,
    Factorization,
    Orthogonality,
    Normality,
    Semiexactness,
    EMIntersection,
    ThreeForTwo,
    Roundtrips,
    Heart,
    Postnikov,
    HomOracle,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Pullout,
        Property::TAxioms,
        Property::Factorization,
        Property::Orthogonality,
        Property::Normality,
        Property::Semiexactness,
        Property::EMIntersection,
        Property::ThreeForTwo,
        Property::Roundtrips,
        Property::Heart,
        Property::Postnikov,
        Property::HomOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Pullout => "pullout",
            Property::TAxioms => "t-axioms",
            Property::Factorization => "factorization",
            Property::Orthogonality => "orthogonality",
            Property::Normality => "normality",
            Property::Semiexactness => "semiexactness",
            Property::EMIntersection => "e-m-intersection",
            Property::ThreeForTwo => "three-for-two",
            Property::Roundtrips => "roundtrips",
            Property::Heart => "heart",
            Property::Postnikov => "postnikov",
            Property::HomOracle => "hom-oracle",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }

    fn index(self) -> u64 {
        Property::ALL.iter().position(|&p| p == self).unwrap() as u64
    }

    /// Properties whose checks do not involve the t-structure run once per
    /// case rather than once per shift.
    fn uses_shift(self) -> bool {
        !matches!(self, Property::Pullout | Property::Postnikov | Property::HomOracle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuiverChoice {
    OneVertex,
    A2,
    /// A JSON file `{"vertices": [...], "arrows": [{"name", "source", "target"}]}`.
    Custom(PathBuf),
}

impl QuiverChoice {
    pub fn load(&self) -> Result<Quiver> {
        match self {
            QuiverChoice::OneVertex => Ok(Quiver::one_vertex()),
            QuiverChoice::A2 => Ok(Quiver::a2()),
            QuiverChoice::Custom(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let raw: RawQuiver = serde_json::from_str(&text).map_err(|e| Error::Syntax {
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                })?;
                raw.build()
            }
        }
    }
}

impl std::str::FromStr for QuiverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-vertex" => Ok(QuiverChoice::OneVertex),
            "a2" | "A2" => Ok(QuiverChoice::A2),
            path => Ok(QuiverChoice::Custom(PathBuf::from(path))),
        }
    }
}

/// Deliberate defects for exercising the failure path.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    CorruptedTruncation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub prime: u32,
    pub quiver: QuiverChoice,
    pub seed: u64,
    pub cases: usize,
    pub max_dim: usize,
    /// Inclusive degree window for generated complexes.
    pub window: (i32, i32),
    pub shifts: Vec<i32>,
    pub properties: Vec<Property>,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Include wall-clock time per property in the report.
    pub timings: bool,
    #[doc(hidden)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            prime: 2,
            quiver: QuiverChoice::OneVertex,
            seed: 0,
            cases: 100,
            max_dim: 4,
            window: (-4, 4),
            shifts: (-2..=2).collect(),
            properties: Property::ALL.to_vec(),
            threads: None,
            timings: false,
            fault: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        PrimeField::new(self.prime)?;
        if self.cases == 0 {
            return Err(Error::Config("cases must be at least 1".into()));
        }
        if self.window.0 > self.window.1 {
            return Err(Error::Config(format!("empty window [{}, {}]", self.window.0, self.window.1)));
        }
        if self.max_dim == 0 {
            return Err(Error::Config("max_dim must be at least 1".into()));
        }
        if self.shifts.is_empty() {
            return Err(Error::Config("at least one shift is needed".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn category(&self) -> Result<RepCategory> {
        Ok(RepCategory::new(self.quiver.load()?, PrimeField::new(self.prime)?))
    }

    fn t(&self, n: i32) -> TStructure {
        match self.fault {
            Some(Fault::CorruptedTruncation) => TStructure::corrupted(n),
            None => TStructure::new(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub case: usize,
    pub seed: u64,
    pub shift: i32,
    pub detail: String,
    /// The sample as a document: maps `f`, `g`, `a` and objects `X`, `Y`,
    /// whichever the property uses.
    pub document: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub config: SuiteConfig,
    pub properties: Vec<PropertyReport>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn property(&self, p: Property) -> Option<&PropertyReport> {
        self.properties.iter().find(|r| r.property == p)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "p={} quiver={} seed={} cases={}\n",
            self.config.prime,
            match &self.config.quiver {
                QuiverChoice::OneVertex => "one-vertex".to_string(),
                QuiverChoice::A2 => "a2".to_string(),
                QuiverChoice::Custom(p) => p.display().to_string(),
            },
            self.config.seed,
            self.config.cases
        );
        for r in &self.properties {
            let status = if r.failed == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<18} {}/{}", r.property.name(), r.passed, r.cases));
            if let Some(ms) = r.millis {
                out.push_str(&format!(" {ms}ms"));
            }
            if let Some(c) = &r.counterexample {
                out.push_str(&format!(" first failure: case {} shift {}: {}", c.case, c.shift, c.detail));
            }
            out.push('\n');
        }
        out.push_str(if self.passed { "all properties pass\n" } else { "some properties fail\n" });
        out
    }
}

/// One generated input.
#[derive(Clone, Debug)]
enum Sample {
    Morphism(ChainMap),
    /// Two maps, composable (`g∘f`) or with a common target.
    Pair(ChainMap, ChainMap),
    /// `f`, `g` and `a: C_f -> C_g` between the middles of their factorizations.
    Square(ChainMap, ChainMap, ChainMap),
    Object(Complex),
    Objects(Complex, Complex),
}

impl Sample {
    fn to_document(&self, cat: &RepCategory) -> Document {
        let mut doc = Document::new(cat);
        let mut put = |name: &str, m: &ChainMap| {
            doc.insert_map(name, &format!("{name}.source"), &format!("{name}.target"), m.clone())
                .expect("fresh names")
        };
        match self {
            Sample::Morphism(f) => put("f", f),
            Sample::Pair(f, g) => {
                put("f", f);
                put("g", g);
            }
            Sample::Square(f, g, a) => {
                put("f", f);
                put("g", g);
                put("a", a);
            }
            Sample::Object(_) | Sample::Objects(..) => {}
        }
        match self {
            Sample::Object(x) => doc.insert_complex("X", x.clone()).expect("same category"),
            Sample::Objects(x, y) => {
                doc.insert_complex("X", x.clone()).expect("same category");
                doc.insert_complex("Y", y.clone()).expect("same category");
            }
            _ => {}
        }
        doc
    }

    fn from_document(property: Property, doc: &Document) -> Result<Sample> {
        let map = |n: &str| doc.map(n).cloned();
        let obj = |n: &str| doc.complex(n).cloned();
        Ok(match property {
            Property::Pullout | Property::ThreeForTwo => Sample::Pair(map("f")?, map("g")?),
            Property::TAxioms | Property::HomOracle => Sample::Objects(obj("X")?, obj("Y")?),
            Property::Normality => Sample::Object(obj("X")?),
            Property::Orthogonality if doc.maps().is_empty() => Sample::Object(obj("X")?),
            Property::EMIntersection if doc.maps().contains_key("g") => Sample::Pair(map("f")?, map("g")?),
            Property::Orthogonality => Sample::Square(map("f")?, map("g")?, map("a")?),
            _ => Sample::Morphism(map("f")?),
        })
    }
}

struct Ctx<'a> {
    cat: RepCategory,
    config: &'a SuiteConfig,
}

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, what: &str) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

impl Ctx<'_> {
    /// A random sub-window of width at most three inside the configured
    /// window keeps Hom complexes small while covering every degree.
    fn params<R: Rng>(&self, rng: &mut R, max_dim: usize) -> ComplexParams {
        let (lo, hi) = self.config.window;
        let a = rng.gen_range(lo..=hi);
        let b = rng.gen_range(a..=(a + 2).min(hi));
        ComplexParams {
            lo: a,
            hi: b,
            max_dim: max_dim.min(self.config.max_dim),
            projective: true,
        }
    }

    fn complex<R: Rng>(&self, rng: &mut R, max_dim: usize) -> Complex {
        let p = self.params(rng, max_dim);
        random_complex(&self.cat, &p, rng)
    }

    fn morphism<R: Rng>(&self, rng: &mut R, max_dim: usize) -> ChainMap {
        let x = self.complex(rng, max_dim);
        let y = self.complex(rng, max_dim);
        random_chain_map(&x, &y, rng)
    }

    fn map_from<R: Rng>(&self, x: &Complex, rng: &mut R, max_dim: usize) -> ChainMap {
        let y = self.complex(rng, max_dim);
        random_chain_map(x, &y, rng)
    }

    fn map_to<R: Rng>(&self, y: &Complex, rng: &mut R, max_dim: usize) -> ChainMap {
        let x = self.complex(rng, max_dim);
        random_chain_map(&x, y, rng)
    }

    fn non_acyclic<R: Rng>(&self, rng: &mut R) -> Complex {
        let (lo, hi) = self.config.window;
        let p = self.cat.random_projective(self.config.max_dim.min(2), rng);
        let p = if p.is_zero() { self.cat.projective(0) } else { p };
        let s = Complex::concentrated(&p, rng.gen_range(lo..=hi));
        s.direct_sum(&self.complex(rng, 1)).expect("same category")
    }

    fn generate<R: Rng>(&self, property: Property, t: TStructure, case: usize, rng: &mut R) -> Sample {
        match property {
            Property::Pullout => {
                let f = self.morphism(rng, 3);
                let g = self.map_to(f.target(), rng, 3);
                Sample::Pair(f, g)
            }
            Property::TAxioms => Sample::Objects(self.complex(rng, 4), self.complex(rng, 4)),
            Property::Normality => Sample::Object(self.complex(rng, 4)),
            Property::Factorization | Property::Semiexactness | Property::Postnikov => {
                Sample::Morphism(self.morphism(rng, 3))
            }
            Property::Roundtrips => Sample::Morphism(self.morphism(rng, 2)),
            Property::Orthogonality if case % 5 == 4 => Sample::Object(self.non_acyclic(rng)),
            Property::Orthogonality => {
                let f = self.morphism(rng, 2);
                let g = self.morphism(rng, 2);
                let (e, m) = (factor(&f, &t).e, factor(&g, &t).m);
                let a = random_chain_map(e.target(), m.source(), rng);
                Sample::Square(f, g, a)
            }
            Property::EMIntersection if case % 5 == 4 => {
                let f = self.morphism(rng, 3);
                let x = self.complex(rng, 3);
                let a = cone(&ChainMap::identity(&self.complex(rng, 2))).object;
                let sum = x.direct_sum(&a).expect("same category");
                let inc = ChainMap::from_fn(&x, &sum, |n| Layout::new(&self.cat, &[x.term(n), a.term(n)]).injection(0))
                    .expect("summand inclusion is a chain map");
                Sample::Pair(f, random_homotopic(&inc, rng).0)
            }
            Property::EMIntersection => Sample::Morphism(self.morphism(rng, 3)),
            Property::ThreeForTwo => {
                let h = self.morphism(rng, 2);
                match case % 4 {
                    0 => {
                        let f = factor(&h, &t).e;
                        let k = self.map_from(f.target(), rng, 2);
                        Sample::Pair(f, factor(&k, &t).e)
                    }
                    1 => {
                        let g = factor(&h, &t).m;
                        let k = self.map_to(g.source(), rng, 2);
                        Sample::Pair(factor(&k, &t).m, g)
                    }
                    2 => {
                        let f = factor(&h, &t).e;
                        let g = self.map_from(f.target(), rng, 2);
                        Sample::Pair(f, g)
                    }
                    _ => {
                        let g = self.map_from(h.target(), rng, 2);
                        Sample::Pair(h, g)
                    }
                }
            }
            Property::Heart => Sample::Morphism(random_heart_morphism(&self.cat, t, self.config.max_dim.min(3), rng).map().clone()),
            Property::HomOracle => Sample::Objects(self.complex(rng, 3), self.complex(rng, 3)),
        }
    }

    fn check(&self, property: Property, t: TStructure, sample: &Sample) -> Check {
        match (property, sample) {
            (Property::Pullout, Sample::Pair(f, g)) => {
                let fs = is_pullout(&fiber_square(f));
                ensure(fs.agree(), "fiber square: cartesian and cocartesian tests disagree")?;
                ensure(fs.holds(), "fiber square is not a pullout")?;
                let pb = homotopy_pullback(f, g).map_err(|e| e.to_string())?;
                let r = is_pullout(&pb.square(f, g));
                ensure(r.agree() && r.holds(), "pullback square is not a pullout")?;
                let po = homotopy_pushout(&pb.proj_x, &pb.proj_y).map_err(|e| e.to_string())?;
                let r = is_pullout(&po.square(&pb.proj_x, &pb.proj_y));
                ensure(r.agree() && r.holds(), "pushout square is not a pullout")?;
                let x = f.source();
                let zero = Complex::zero(&self.cat);
                let z = ChainMap::zero(x, &zero);
                let zz = ChainMap::identity(&zero);
                let r = is_pullout(&CommutingSquare::strict(z.clone(), z, zz.clone(), zz).expect("zero square"));
                ensure(r.agree(), "collapsed square: cartesian and cocartesian tests disagree")?;
                ensure(r.holds() == x.is_acyclic(), "collapsed square misjudged")
            }
            (Property::TAxioms, Sample::Objects(x, y)) => {
                let (a, _) = t.truncate_ge(x);
                let (b, _) = t.truncate_lt(y);
                ensure(t.in_coaisle(&a), "truncate_ge leaves the coaisle")?;
                ensure(t.in_aisle(&b), "truncate_lt leaves the aisle")?;
                if let (Some((lo, _)), Some((_, hi))) = (a.support(), b.support()) {
                    for k in 0..=(hi - lo).max(0) {
                        let dim = if a.is_projective() {
                            HomComplex::new(&a, &b).map_err(|e| e.to_string())?.homology_dim(k)
                        } else {
                            derived_hom_dim(&a, &b, k)
                        };
                        ensure(dim == 0, &format!("H_{k} hom(τ≥X, τ<Y) is nonzero"))?;
                    }
                }
                ensure(t.shift(-1).in_coaisle(&a) && t.in_coaisle(&a.shift(1)), "coaisle shift inclusion fails")?;
                ensure(t.shift(1).in_aisle(&b) && t.in_aisle(&b.shift(-1)), "aisle shift inclusion fails")?;
                ensure(is_pullout(&t.fiber_sequence_square(x)).holds(), "τ≥X -> X -> τ<X is not a fiber sequence")?;
                ensure(is_quasi_iso(&t.truncate_ge(&a).1), "truncate_ge is not idempotent")
            }
            (Property::Factorization, Sample::Morphism(f)) => {
                ensure(factorization_check(f, &t).map_err(|e| e.to_string())?, "factorization check fails")
            }
            (Property::Orthogonality, Sample::Square(f, g, a0)) => {
                let (e, m) = (factor(f, &t).e, factor(g, &t).m);
                if a0.source() != e.target() || a0.target() != m.source() {
                    return Err("filler seed does not fit the square".into());
                }
                let sq = CommutingSquare::strict(a0.compose(&e), e.clone(), m.clone(), m.compose(a0)).map_err(|e| e.to_string())?;
                ensure(is_orthogonal(&e, &m), "e_f is not orthogonal to m_g")?;
                let r = solve_lifting(&sq);
                ensure(r.unique(), &format!("{} homotopy classes of fillers", r.class_count()))
            }
            (Property::Orthogonality, Sample::Object(s)) => {
                let zero = Complex::zero(&self.cat);
                let e = ChainMap::zero(&zero, s);
                let m = ChainMap::zero(s, &zero);
                let sq = CommutingSquare::strict(e.clone(), e.clone(), m.clone(), m.clone()).expect("zero square");
                let r = solve_lifting(&sq);
                ensure(!is_orthogonal(&e, &m), "0 -> S reported orthogonal to S -> 0")?;
                ensure(!r.unique(), "lifting against S -> 0 reported unique")
            }
            (Property::Normality, Sample::Object(x)) => {
                let r = normality_report(x, &t);
                ensure(r.consistent(), &format!("normality conditions disagree: {r:?}"))?;
                ensure(r.all(), &format!("normality fails: {r:?}"))
            }
            (Property::Semiexactness, Sample::Morphism(f)) => {
                let r = semiexact_report(f, &t);
                ensure(r.comparison, "SY ⊔_SX X -> RX ×_RY Y is not a quasi-isomorphism")?;
                ensure(r.pulled_back_unit, "pulled-back unit leaves E")?;
                ensure(star_square_report(f, &t).holds(), "factorization square is not a pullout")
            }
            (Property::EMIntersection, Sample::Morphism(f)) => {
                let (e, m, q) = (in_e(f, &t), in_m(f, &t), is_quasi_iso(f));
                ensure((e && m) == q, &format!("in E: {e}, in M: {m}, quasi-iso: {q}"))
            }
            (Property::EMIntersection, Sample::Pair(f, q)) => {
                self.check(property, t, &Sample::Morphism(f.clone()))?;
                ensure(is_quasi_iso(q), "constructed map is not a quasi-isomorphism")?;
                ensure(in_e(q, &t) && in_m(q, &t), "constructed quasi-isomorphism leaves E or M")
            }
            (Property::ThreeForTwo, Sample::Pair(f, g)) => {
                if f.target() != g.source() {
                    return Err("pair is not composable".into());
                }
                let pairs = [(f.clone(), g.clone())];
                ensure(three_for_two_check(MorphismClass::E, &t, &pairs), "3-for-2 fails for E")?;
                ensure(three_for_two_check(MorphismClass::M, &t, &pairs), "3-for-2 fails for M")?;
                ensure(sator_check(f.source(), &t) && sator_check(g.target(), &t), "sator check fails")
            }
            (Property::Roundtrips, Sample::Morphism(f)) => {
                ensure(roundtrip_object(f.source(), &t) && roundtrip_object(f.target(), &t), "object roundtrip fails")?;
                ensure(roundtrip_morphism(f, &t), "morphism roundtrip fails")?;
                let mut shifts = self.config.shifts.clone();
                shifts.sort_unstable();
                ensure(antitone_check(f, &shifts), "antitone implication fails")
            }
            (Property::Heart, Sample::Morphism(f)) => {
                let h = HeartMorphism::new(f.clone(), t).map_err(|e| e.to_string())?;
                ensure(first_isomorphism_holds(&h), "coimage -> image is not a quasi-isomorphism")?;
                let (k, _) = rep_kernel(&h.on_homology());
                let (c, _) = rep_cokernel(&h.on_homology());
                let n = t.n();
                let kernel = heart_kernel(&h).map_err(|e| e.to_string())?;
                let cokernel = heart_cokernel(&h).map_err(|e| e.to_string())?;
                ensure(kernel.source().homology_dims(n) == k.dims(), "heart kernel dimensions")?;
                ensure(cokernel.target().homology_dims(n) == c.dims(), "heart cokernel dimensions")
            }
            (Property::Postnikov, Sample::Morphism(f)) => {
                let tower = postnikov_tower(f);
                ensure(verify_tower(f, &tower), "tower does not verify")?;
                let width = boundedness_window(f).map_or(0, |w| w.width());
                ensure(tower.len() == width, "tower length differs from the window width")
            }
            (Property::HomOracle, Sample::Objects(x, y)) => {
                let hom = HomComplex::new(x, y).map_err(|e| e.to_string())?;
                let (Some((xl, xh)), Some((yl, yh))) = (x.support(), y.support()) else {
                    return Ok(());
                };
                for k in (yl - xh - 1)..=(yh - xl + 1) {
                    let (a, b) = (hom.homology_dim(k), derived_hom_dim(x, y, k));
                    ensure(a == b, &format!("H_{k}: Hom complex gives {a}, homology route gives {b}"))?;
                }
                Ok(())
            }
            _ => Err("sample does not fit the property".into()),
        }
    }

    fn run_case(&self, property: Property, case: usize) -> Option<Counterexample> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream((property.index() << 32) | case as u64);
        let shifts: &[i32] = if property.uses_shift() {
            &self.config.shifts
        } else {
            &self.config.shifts[..1]
        };
        for &n in shifts {
            let t = self.config.t(n);
            let sample = self.generate(property, t, case, &mut rng);
            let outcome = panic::catch_unwind(AssertUnwindSafe(|| self.check(property, t, &sample)))
                .unwrap_or_else(|e| Err(format!("check panicked: {}", panic_message(&*e))));
            if let Err(detail) = outcome {
                return Some(Counterexample {
                    case,
                    seed: self.config.seed,
                    shift: n,
                    detail,
                    document: sample.to_document(&self.cat).to_value(),
                });
            }
        }
        None
    }

    fn run_property(&self, property: Property) -> PropertyReport {
        let start = Instant::now();
        let failures: Vec<Counterexample> = (0..self.config.cases)
            .into_par_iter()
            .filter_map(|case| self.run_case(property, case))
            .collect();
        let failed = failures.len();
        PropertyReport {
            property,
            cases: self.config.cases,
            passed: self.config.cases - failed,
            failed,
            counterexample: failures.into_iter().min_by_key(|c| c.case),
            millis: self.config.timings.then(|| start.elapsed().as_millis() as u64),
        }
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let ctx = Ctx {
        cat: config.category()?,
        config,
    };
    let run = || {
        config
            .properties
            .iter()
            .map(|&p| ctx.run_property(p))
            .collect::<Vec<_>>()
    };
    let properties = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    let passed = properties.iter().all(|r| r.failed == 0);
    Ok(Report {
        format_version: REPORT_VERSION,
        config: config.clone(),
        properties,
        passed,
    })
}

/// Re-runs the named property's check on a counterexample's document.
/// Returns the failure detail, or `None` if the check now passes.
pub fn replay(config: &SuiteConfig, property: Property, counterexample: &Counterexample) -> Result<Option<String>> {
    let ctx = Ctx {
        cat: config.category()?,
        config,
    };
    let doc = Document::from_value(counterexample.document.clone())?;
    if doc.category() != &ctx.cat {
        return Err(Error::BaseMismatch);
    }
    let sample = Sample::from_document(property, &doc)?;
    let t = config.t(counterexample.shift);
    Ok(panic::catch_unwind(AssertUnwindSafe(|| ctx.check(property, t, &sample)))
        .unwrap_or_else(|e| Err(format!("check panicked: {}", panic_message(&*e))))
        .err())
}
