//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! Criteria 1-11 run the seeded property suite over p ∈ {2, 3} and the
//! one-vertex and A2 quivers with the default sizes (100 cases, degree window
//! [-4, 4], vertex dimensions ≤ 4, shifts -2..=2). Every comparison is exact.
//! Criterion 12 compares Hom-complex homology against a brute-force count of
//! homotopy classes computed here from raw matrix entries.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfactor::complexes::{random_complex, Complex, ComplexParams, HomComplex};
use tfactor::linalg::PrimeField;
use tfactor::quiver::{Quiver, RepCategory};
use tfactor::suite::{run_suite, Property, QuiverChoice, Report, SuiteConfig};

const RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_INSTANCES: usize = 240;
const ORACLE_MAX_TOTAL_DIM: usize = 8;
/// Raw spaces up to this many points are enumerated element by element.
const ENUMERATION_LIMIT: u64 = 1 << 16;

fn configs() -> Vec<SuiteConfig> {
    let mut out = Vec::new();
    for quiver in [QuiverChoice::OneVertex, QuiverChoice::A2] {
        for prime in [2, 3] {
            out.push(SuiteConfig {
                prime,
                quiver: quiver.clone(),
                seed: 20_240_601,
                ..SuiteConfig::default()
            });
        }
    }
    out
}

struct Tally {
    cases: usize,
    failed: usize,
    details: Vec<String>,
}

fn tally(reports: &[Report], property: Property) -> Tally {
    let mut t = Tally {
        cases: 0,
        failed: 0,
        details: Vec::new(),
    };
    for r in reports {
        let p = r.property(property).expect("property ran");
        t.cases += p.cases;
        t.failed += p.failed;
        if let Some(c) = &p.counterexample {
            t.details.push(format!(
                "p={} {:?}: case {} shift {}: {}",
                r.config.prime, r.config.quiver, c.case, c.shift, c.detail
            ));
        }
    }
    t
}

// ---- brute-force oracle over raw matrix entries -------------------------

/// Dense mod-p vectors; independent of the library's linear algebra.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = (1..p).find(|&x| rows[rank][c] * x % p == 1).unwrap();
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - k * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn kernel_basis_mod_p(rows: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    // Reduce, then read off the free columns.
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = (1..p).find(|&x| m[rank][c] * x % p == 1).unwrap();
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pr = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = (*x + p * p - k * y % p) % p;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// The raw degree-`n` graded maps `X -> Y`: one matrix per (source degree,
/// vertex), entries flattened.
struct RawSpace {
    p: u64,
    blocks: Vec<(i32, usize, usize, usize, usize)>, // (degree, vertex, rows, cols, offset)
    len: usize,
}

fn entry(x: &Complex, n: i32, v: usize) -> usize {
    x.term(n).dim(v)
}

impl RawSpace {
    fn new(x: &Complex, y: &Complex, n: i32) -> Self {
        let vcount = x.category().vertex_count();
        let mut blocks = Vec::new();
        let mut len = 0;
        for i in x.degrees() {
            for v in 0..vcount {
                let (r, c) = (entry(y, i + n, v), entry(x, i, v));
                blocks.push((i, v, r, c, len));
                len += r * c;
            }
        }
        RawSpace {
            p: x.field().p() as u64,
            blocks,
            len,
        }
    }

    fn block(&self, i: i32, v: usize) -> Option<(usize, usize, usize)> {
        self.blocks
            .iter()
            .find(|b| b.0 == i && b.1 == v)
            .map(|&(_, _, r, c, o)| (r, c, o))
    }
}

fn mat(m: &tfactor::linalg::Matrix) -> Vec<Vec<u64>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
}

fn mul(a: &[Vec<u64>], b: &[Vec<u64>], inner: usize, rows: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    (0..rows)
        .map(|i| (0..cols).map(|j| (0..inner).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect())
        .collect()
}

fn unflatten(v: &[u64], r: usize, c: usize, o: usize) -> Vec<Vec<u64>> {
    (0..r).map(|i| v[o + i * c..o + (i + 1) * c].to_vec()).collect()
}

/// Linear conditions (as rows) that make a raw vector an intertwiner in
/// every degree.
fn intertwiner_rows(x: &Complex, y: &Complex, n: i32, s: &RawSpace) -> Vec<Vec<u64>> {
    let p = s.p;
    let quiver = x.category().quiver().clone();
    let mut rows = Vec::new();
    for i in x.degrees() {
        for (ai, a) in quiver.arrows().iter().enumerate() {
            let xa = mat(&x.term(i).arrow_maps()[ai]);
            let ya = mat(&y.term(i + n).arrow_maps()[ai]);
            let (rs, cs, os) = s.block(i, a.source).unwrap();
            let (rt, ct, ot) = s.block(i, a.target).unwrap();
            // φ_t X_a - Y_a φ_s = 0, entrywise in (rt x cs).
            for r in 0..rt {
                for c in 0..cs {
                    let mut row = vec![0u64; s.len];
                    for k in 0..ct {
                        row[ot + r * ct + k] = (row[ot + r * ct + k] + xa[k][c]) % p;
                    }
                    for k in 0..rs {
                        row[os + k * cs + c] = (row[os + k * cs + c] + p - ya[r][k] % p) % p;
                    }
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// `D φ = d φ - (-1)^n φ d` on raw vectors, into the raw degree-`n-1` space.
fn boundary(x: &Complex, y: &Complex, n: i32, from: &RawSpace, to: &RawSpace, v: &[u64]) -> Vec<u64> {
    let p = from.p;
    let sign = if n % 2 == 0 { p - 1 } else { 1 };
    let mut out = vec![0u64; to.len];
    let vcount = x.category().vertex_count();
    for i in x.degrees() {
        for vert in 0..vcount {
            let Some((r, c, o)) = to.block(i, vert) else { continue };
            if r * c == 0 {
                continue;
            }
            // d_Y φ_i : X_i -> Y_{i+n} -> Y_{i+n-1}
            let (pr, pc, po) = from.block(i, vert).unwrap();
            let phi = unflatten(v, pr, pc, po);
            let dy = mat(y.d(i + n).component(vert));
            let a = mul(&dy, &phi, pr, r, c, p);
            // φ_{i-1} d_X : X_i -> X_{i-1} -> Y_{i-1+n}
            let b = match from.block(i - 1, vert) {
                Some((qr, qc, qo)) if qr * qc > 0 => {
                    let psi = unflatten(v, qr, qc, qo);
                    let dx = mat(x.d(i).component(vert));
                    mul(&psi, &dx, qc, r, c, p)
                }
                _ => vec![vec![0; c]; r],
            };
            for rr in 0..r {
                for cc in 0..c {
                    out[o + rr * c + cc] = (a[rr][cc] + sign * b[rr][cc]) % p;
                }
            }
        }
    }
    out
}

fn all_vectors(len: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(len as u32);
    (0..total).map(move |mut k| {
        (0..len)
            .map(|_| {
                let d = k % p;
                k /= p;
                d
            })
            .collect()
    })
}

fn combos(basis: &[Vec<u64>], len: usize, p: u64) -> impl Iterator<Item = Vec<u64>> + '_ {
    all_vectors(basis.len(), p).map(move |coeffs| {
        let mut v = vec![0u64; len];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = (*x + c * y) % p;
            }
        }
        v
    })
}

/// Number of homotopy classes of degree-`n` maps, `|Z_n| / |B_n|`, and
/// whether both sets were enumerated element by element.
fn brute_force_classes(x: &Complex, y: &Complex, n: i32) -> (u64, bool) {
    let s = RawSpace::new(x, y, n);
    let below = RawSpace::new(x, y, n - 1);
    let above = RawSpace::new(x, y, n + 1);
    let p = s.p;
    let small = p.checked_pow(s.len as u32).is_some_and(|k| k <= ENUMERATION_LIMIT)
        && p.checked_pow(above.len as u32).is_some_and(|k| k <= ENUMERATION_LIMIT);
    let is_zero = |v: &[u64]| v.iter().all(|&a| a == 0);
    let check = |rows: &[Vec<u64>], v: &[u64]| {
        rows.iter().all(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % p == 0)
    };
    let cond = intertwiner_rows(x, y, n, &s);
    let cond_above = intertwiner_rows(x, y, n + 1, &above);
    if small {
        let z = all_vectors(s.len, p)
            .filter(|v| check(&cond, v) && is_zero(&boundary(x, y, n, &s, &below, v)))
            .count() as u64;
        let b: HashSet<Vec<u64>> = all_vectors(above.len, p)
            .filter(|v| check(&cond_above, v))
            .map(|v| boundary(x, y, n + 1, &above, &s, &v))
            .collect();
        assert_eq!(z % b.len() as u64, 0, "boundaries form a subgroup of cycles");
        (z / b.len() as u64, true)
    } else {
        // Solve for the intertwiners, then enumerate only within them.
        let g = kernel_basis_mod_p(&cond, s.len, p);
        let g_above = kernel_basis_mod_p(&cond_above, above.len, p);
        let d_rows: Vec<Vec<u64>> = g.iter().map(|v| boundary(x, y, n, &s, &below, v)).collect();
        let z_dim = g.len() - rank_mod_p(d_rows, p);
        let b_dim = rank_mod_p(g_above.iter().map(|v| boundary(x, y, n + 1, &above, &s, v)).collect(), p);
        if p.checked_pow(g_above.len() as u32).is_some_and(|k| k <= ENUMERATION_LIMIT) {
            let b: HashSet<Vec<u64>> = combos(&g_above, above.len, p)
                .map(|v| boundary(x, y, n + 1, &above, &s, &v))
                .collect();
            assert_eq!(b.len() as u64, p.pow(b_dim as u32));
        }
        (p.pow((z_dim - b_dim) as u32), false)
    }
}

struct OracleSummary {
    instances: usize,
    comparisons: usize,
    enumerated: usize,
    mismatches: Vec<String>,
}

fn oracle_instances() -> Vec<(Complex, Complex)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cats: Vec<RepCategory> = [2, 3]
        .into_iter()
        .flat_map(|p| [Quiver::one_vertex(), Quiver::a2()].map(|q| RepCategory::new(q, PrimeField::new(p).unwrap())))
        .collect();
    let mut k = 0usize;
    while out.len() < ORACLE_INSTANCES {
        let cat = &cats[k % cats.len()];
        k += 1;
        let lo = rng.gen_range(-2..=1);
        let params = |hi: i32, projective: bool| ComplexParams {
            lo,
            hi,
            max_dim: 2,
            projective,
        };
        let x = random_complex(cat, &params(lo + rng.gen_range(0..=2), rng.gen_bool(0.5)), &mut rng);
        let y = random_complex(cat, &params(lo + rng.gen_range(0..=2), rng.gen_bool(0.5)), &mut rng);
        if x.total_dim() + y.total_dim() <= ORACLE_MAX_TOTAL_DIM && x.total_dim() > 0 && y.total_dim() > 0 {
            out.push((x, y));
        }
    }
    out
}

fn run_oracle() -> OracleSummary {
    let mut s = OracleSummary {
        instances: 0,
        comparisons: 0,
        enumerated: 0,
        mismatches: Vec::new(),
    };
    for (idx, (x, y)) in oracle_instances().into_iter().enumerate() {
        s.instances += 1;
        let hom = HomComplex::new(&x, &y).unwrap();
        let p = x.field().p() as u64;
        let (xl, xh) = x.support().unwrap();
        let (yl, yh) = y.support().unwrap();
        for n in (yl - xh - 1)..=(yh - xl + 1) {
            let (classes, enumerated) = brute_force_classes(&x, &y, n);
            let expected = p.pow(hom.homology_dim(n) as u32);
            s.comparisons += 1;
            s.enumerated += usize::from(enumerated);
            if classes != expected {
                s.mismatches.push(format!("instance {idx}, n={n}: oracle {classes}, Hom complex {expected}"));
            }
        }
    }
    s
}

fn line(n: usize, name: &str, ok: bool, detail: &str) -> bool {
    println!("criterion {n:>2} {name:<28} {} ({detail})", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports: Vec<Report> = configs().iter().map(|c| run_suite(c).expect("valid config")).collect();
    let suite_time = start.elapsed();

    let criteria = [
        (1, "pullout axiom", Property::Pullout),
        (2, "t-structure axioms", Property::TAxioms),
        (3, "factorization theorem", Property::Factorization),
        (4, "orthogonality cross-check", Property::Orthogonality),
        (5, "normality", Property::Normality),
        (6, "semiexactness", Property::Semiexactness),
        (7, "E ∩ M = quasi-isos", Property::EMIntersection),
        (8, "3-for-2 and sator", Property::ThreeForTwo),
        (9, "roundtrips", Property::Roundtrips),
        (10, "heart abelianness", Property::Heart),
        (11, "postnikov towers", Property::Postnikov),
    ];
    let mut all = true;
    for (n, name, prop) in criteria {
        let t = tally(&reports, prop);
        let extra = match prop {
            Property::Orthogonality => format!(", {} orthogonal and {} non-orthogonal squares", t.cases * 4 / 5, t.cases / 5),
            Property::EMIntersection => format!(", plus {} constructed quasi-isos", t.cases / 5),
            _ => String::new(),
        };
        let detail = format!("{} failed of {} cases over 4 configurations{extra}", t.failed, t.cases);
        all &= line(n, name, t.failed == 0, &detail);
        for d in &t.details {
            println!("    {d}");
        }
    }

    let oracle = run_oracle();
    let hom_suite = tally(&reports, Property::HomOracle);
    let ok12 = oracle.mismatches.is_empty() && oracle.instances >= 200 && hom_suite.failed == 0;
    all &= line(
        12,
        "oracle equivalence",
        ok12,
        &format!(
            "{} instances, {} degree comparisons ({} fully enumerated), {} mismatches; suite cross-check {} failed of {}",
            oracle.instances,
            oracle.comparisons,
            oracle.enumerated,
            oracle.mismatches.len(),
            hom_suite.failed,
            hom_suite.cases
        ),
    );
    for m in oracle.mismatches.iter().take(5) {
        println!("    {m}");
    }
    let fast = suite_time < RUNTIME_LIMIT;
    println!(
        "runtime                          {} (suite {:.1}s for 4 configurations, limit {}s)",
        if fast { "PASS" } else { "FAIL" },
        suite_time.as_secs_f64(),
        RUNTIME_LIMIT.as_secs()
    );
    if all && fast {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
