//! JSON documents holding named representations, complexes and chain maps
//! over one quiver and one prime.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "prime": 2,
//!   "quiver": { "vertices": ["1", "2"], "arrows": [{ "name": "a", "source": "1", "target": "2" }] },
//!   "reps": { "S1": { "dims": [1, 0], "arrows": { "a": [] } } },
//!   "complexes": { "X": { "terms": { "0": "S1" } } },
//!   "maps": { "id": { "source": "X", "target": "X", "components": { "0": [[[1]], []] } } }
//! }
//! ```
//!
//! Matrices are row lists with entries in `[0, p)`. Complex terms are either
//! the name of a rep or an inline rep; `differentials[n]` is `d_n: X_n ->
//! X_{n-1}` and chain map `components[n]` is the degree-`n` component, both
//! given per vertex in quiver order. Omitted differentials and components are
//! zero. Serialization always inlines terms and drops zero blocks, so
//! `parse ∘ serialize` is the identity and `serialize ∘ parse` normalizes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};
use crate::quiver::{Arrow, Quiver, QuiverRep, RepCategory, RepMap};

pub const FORMAT_VERSION: u32 = 1;

type Rows = Vec<Vec<i64>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawArrow {
    name: String,
    source: String,
    target: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawQuiver {
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
}

impl Default for RawQuiver {
    fn default() -> Self {
        RawQuiver::from(&Quiver::one_vertex())
    }
}

impl From<&Quiver> for RawQuiver {
    fn from(q: &Quiver) -> Self {
        let v = q.vertices();
        RawQuiver {
            vertices: v.to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| RawArrow {
                    name: a.name.clone(),
                    source: v[a.source].clone(),
                    target: v[a.target].clone(),
                })
                .collect(),
        }
    }
}

impl RawQuiver {
    pub(crate) fn build(&self) -> Result<Quiver> {
        let index = |name: &str| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Unresolved {
                    kind: "vertex",
                    name: name.to_string(),
                })
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    name: a.name.clone(),
                    source: index(&a.source)?,
                    target: index(&a.target)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(self.vertices.clone(), arrows)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    dims: Vec<usize>,
    #[serde(default)]
    arrows: BTreeMap<String, Rows>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawTerm {
    Named(String),
    Inline(RawRep),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    terms: BTreeMap<i32, RawTerm>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    differentials: BTreeMap<i32, Vec<Rows>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source: String,
    target: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    components: BTreeMap<i32, Vec<Rows>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn default_prime() -> u32 {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default = "default_version")]
    format_version: u32,
    #[serde(default = "default_prime")]
    prime: u32,
    #[serde(default)]
    quiver: RawQuiver,
    #[serde(default)]
    reps: BTreeMap<String, RawRep>,
    #[serde(default)]
    complexes: BTreeMap<String, RawComplex>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
}

/// A chain map together with the names of its source and target.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedMap {
    pub source: String,
    pub target: String,
    pub map: ChainMap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    category: RepCategory,
    reps: BTreeMap<String, QuiverRep>,
    complexes: BTreeMap<String, Complex>,
    maps: BTreeMap<String, NamedMap>,
}

fn syntax(err: serde_json::Error) -> Error {
    Error::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

fn matrix(field: PrimeField, rows: usize, cols: usize, entries: &Rows, what: &str) -> Result<Matrix> {
    if let Some(&bad) = entries.iter().flatten().find(|&&a| a < 0 || a >= field.p() as i64) {
        return Err(Error::law(
            "entry-range",
            format!("{what}: entry {bad} is outside [0, {})", field.p()),
        ));
    }
    Matrix::from_rows_shaped(field, rows, cols, entries).map_err(|e| Error::Shape(format!("{what}: {e}")))
}

fn rows_of(m: &Matrix) -> Rows {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()
}

fn rep_map(source: &QuiverRep, target: &QuiverRep, comps: &[Rows], what: &str) -> Result<RepMap> {
    let n = source.category().vertex_count();
    if comps.len() != n {
        return Err(Error::Shape(format!("{what}: {} vertex blocks for {n} vertices", comps.len())));
    }
    let mats = comps
        .iter()
        .enumerate()
        .map(|(v, rows)| matrix(source.field(), target.dim(v), source.dim(v), rows, what))
        .collect::<Result<Vec<_>>>()?;
    RepMap::new(source, target, mats)
}

fn raw_rep_map(m: &RepMap) -> Vec<Rows> {
    m.components().iter().map(rows_of).collect()
}

impl Document {
    pub fn new(category: &RepCategory) -> Self {
        Document {
            category: category.clone(),
            reps: BTreeMap::new(),
            complexes: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    pub fn category(&self) -> &RepCategory {
        &self.category
    }

    pub fn reps(&self) -> &BTreeMap<String, QuiverRep> {
        &self.reps
    }

    pub fn complexes(&self) -> &BTreeMap<String, Complex> {
        &self.complexes
    }

    pub fn maps(&self) -> &BTreeMap<String, NamedMap> {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty() && self.complexes.is_empty() && self.maps.is_empty()
    }

    pub fn rep(&self, name: &str) -> Result<&QuiverRep> {
        self.reps.get(name).ok_or_else(|| Error::Unresolved {
            kind: "rep",
            name: name.to_string(),
        })
    }

    pub fn complex(&self, name: &str) -> Result<&Complex> {
        self.complexes.get(name).ok_or_else(|| Error::Unresolved {
            kind: "complex",
            name: name.to_string(),
        })
    }

    pub fn map(&self, name: &str) -> Result<&ChainMap> {
        self.maps.get(name).map(|m| &m.map).ok_or_else(|| Error::Unresolved {
            kind: "map",
            name: name.to_string(),
        })
    }

    pub fn insert_rep(&mut self, name: &str, rep: QuiverRep) -> Result<()> {
        if rep.category() != &self.category {
            return Err(Error::BaseMismatch);
        }
        self.reps.insert(name.to_string(), rep);
        Ok(())
    }

    pub fn insert_complex(&mut self, name: &str, x: Complex) -> Result<()> {
        if x.category() != &self.category {
            return Err(Error::BaseMismatch);
        }
        self.complexes.insert(name.to_string(), x);
        Ok(())
    }

    /// Inserts `map` under `name`, adding its source and target under the
    /// given names unless complexes of those names are already present, in
    /// which case they must agree.
    pub fn insert_map(&mut self, name: &str, source: &str, target: &str, map: ChainMap) -> Result<()> {
        for (end, x) in [(source, map.source()), (target, map.target())] {
            match self.complexes.get(end) {
                Some(existing) if existing != x => {
                    return Err(Error::Shape(format!("map {name:?}: complex {end:?} differs from the map's end")))
                }
                Some(_) => {}
                None => self.insert_complex(end, x.clone())?,
            }
        }
        self.maps.insert(
            name.to_string(),
            NamedMap {
                source: source.to_string(),
                target: target.to_string(),
                map,
            },
        );
        Ok(())
    }

    /// Whitespace-only text is the empty document over the one-vertex quiver
    /// and `p = 2`.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument = if text.trim().is_empty() {
            serde_json::from_str("{}").map_err(syntax)?
        } else {
            serde_json::from_str(text).map_err(syntax)?
        };
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawDocument) -> Result<Self> {
        if raw.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(raw.format_version));
        }
        let field = PrimeField::new(raw.prime)?;
        let quiver = raw.quiver.build()?;
        let cat = RepCategory::new(quiver, field);
        let mut doc = Document::new(&cat);

        for (name, r) in &raw.reps {
            let rep = doc.build_rep(r, &format!("rep {name:?}"))?;
            doc.reps.insert(name.clone(), rep);
        }
        for (name, c) in &raw.complexes {
            let x = doc.build_complex(c, name)?;
            doc.complexes.insert(name.clone(), x);
        }
        for (name, m) in &raw.maps {
            let source = doc.complex(&m.source)?.clone();
            let target = doc.complex(&m.target)?.clone();
            if let Some((&n, _)) = m.components.iter().find(|(&n, _)| !source.degrees().contains(&n)) {
                if !m.components[&n].iter().all(|rows| rows.iter().flatten().all(|&a| a == 0)) {
                    return Err(Error::Shape(format!("map {name:?}: component in degree {n} leaves the source")));
                }
            }
            let mut comps = BTreeMap::new();
            for (&n, blocks) in &m.components {
                if source.degrees().contains(&n) {
                    let what = format!("map {name:?} in degree {n}");
                    comps.insert(n, rep_map(source.term(n), target.term(n), blocks, &what)?);
                }
            }
            let map = ChainMap::from_fn(&source, &target, |n| {
                comps
                    .remove(&n)
                    .unwrap_or_else(|| RepMap::zero(source.term(n), target.term(n)))
            })
            .map_err(|e| match e {
                Error::LawViolation { law, detail } => Error::LawViolation {
                    law,
                    detail: format!("map {name:?}: {detail}"),
                },
                other => other,
            })?;
            doc.maps.insert(
                name.clone(),
                NamedMap {
                    source: m.source.clone(),
                    target: m.target.clone(),
                    map,
                },
            );
        }
        Ok(doc)
    }

    fn build_rep(&self, r: &RawRep, what: &str) -> Result<QuiverRep> {
        let q = self.category.quiver();
        if r.dims.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "{what}: {} dimensions for {} vertices",
                r.dims.len(),
                q.vertex_count()
            )));
        }
        if let Some(name) = r.arrows.keys().find(|n| !q.arrows().iter().any(|a| &a.name == *n)) {
            return Err(Error::Unresolved {
                kind: "arrow",
                name: name.clone(),
            });
        }
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let (rows, cols) = (r.dims[a.target], r.dims[a.source]);
                match r.arrows.get(&a.name) {
                    Some(entries) => matrix(self.category.field(), rows, cols, entries, &format!("{what}, arrow {:?}", a.name)),
                    None => Ok(Matrix::zeros(self.category.field(), rows, cols)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        QuiverRep::new(&self.category, r.dims.clone(), maps)
    }

    fn build_complex(&self, c: &RawComplex, name: &str) -> Result<Complex> {
        let zero = self.category.zero_rep();
        let mut terms = BTreeMap::new();
        for (&n, t) in &c.terms {
            let rep = match t {
                RawTerm::Named(r) => self.rep(r)?.clone(),
                RawTerm::Inline(r) => self.build_rep(r, &format!("complex {name:?}, term {n}"))?,
            };
            terms.insert(n, rep);
        }
        let term = |n: i32| terms.get(&n).unwrap_or(&zero);
        let mut diffs = BTreeMap::new();
        for (&n, blocks) in &c.differentials {
            let what = format!("complex {name:?}, d_{n}");
            diffs.insert(n, rep_map(term(n), term(n - 1), blocks, &what)?);
        }
        let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
            return Ok(Complex::zero(&self.category));
        };
        let reps: Vec<QuiverRep> = (lo..=hi).map(|n| term(n).clone()).collect();
        let ds: Vec<RepMap> = (lo + 1..=hi)
            .map(|n| diffs.remove(&n).unwrap_or_else(|| RepMap::zero(term(n), term(n - 1))))
            .collect();
        Complex::new(&self.category, lo, reps, ds).map_err(|e| match e {
            Error::LawViolation { law, detail } => Error::LawViolation {
                law,
                detail: format!("complex {name:?}: {detail}"),
            },
            other => other,
        })
    }

    fn raw_rep(rep: &QuiverRep) -> RawRep {
        let q = rep.category().quiver();
        RawRep {
            dims: rep.dims().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .zip(rep.arrow_maps())
                .filter(|(_, m)| !m.is_zero())
                .map(|(a, m)| (a.name.clone(), rows_of(m)))
                .collect(),
        }
    }

    fn to_raw(&self) -> RawDocument {
        let complexes = self
            .complexes
            .iter()
            .map(|(name, x)| {
                let terms = x
                    .degrees()
                    .filter(|&n| !x.term(n).is_zero())
                    .map(|n| (n, RawTerm::Inline(Self::raw_rep(x.term(n)))))
                    .collect();
                let differentials = x
                    .degrees()
                    .filter(|&n| !x.d(n).is_zero())
                    .map(|n| (n, raw_rep_map(x.d(n))))
                    .collect();
                (name.clone(), RawComplex { terms, differentials })
            })
            .collect();
        let maps = self
            .maps
            .iter()
            .map(|(name, m)| {
                let components = m
                    .map
                    .source()
                    .degrees()
                    .filter_map(|n| {
                        let c = m.map.comp(n);
                        (!c.is_zero()).then(|| (n, raw_rep_map(&c)))
                    })
                    .collect();
                let raw = RawMap {
                    source: m.source.clone(),
                    target: m.target.clone(),
                    components,
                };
                (name.clone(), raw)
            })
            .collect();
        RawDocument {
            format_version: FORMAT_VERSION,
            prime: self.category.field().p(),
            quiver: RawQuiver::from(self.category.quiver()),
            reps: self.reps.iter().map(|(n, r)| (n.clone(), Self::raw_rep(r))).collect(),
            complexes,
            maps,
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("documents serialize")
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let raw: RawDocument = serde_json::from_value(value).map_err(|e| Error::Syntax {
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        Self::from_raw(raw)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    Document::parse(text)
}

pub fn serialize_document(doc: &Document) -> String {
    doc.to_json()
}
