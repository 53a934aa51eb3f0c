use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tfactor::document::Document;
use tfactor::factorization::{factor, normality_report};
use tfactor::postnikov::postnikov_tower;
use tfactor::suite::{replay, run_suite, Property, QuiverChoice, Report, SuiteConfig};
use tfactor::tstructure::TStructure;
use tfactor::{Error, Result};

/// Truncations, factorizations and Postnikov towers of bounded complexes of
/// quiver representations over a prime field.
#[derive(Parser)]
#[command(name = "tfactor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded property suite.
    Verify {
        /// Suite configuration (JSON); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        prime: Option<u32>,
        /// `one-vertex`, `a2`, or a path to a quiver JSON file.
        #[arg(long)]
        quiver: Option<String>,
        /// Emit the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a map as `m∘e` with `e ∈ E`, `m ∈ M`.
    Factor {
        doc: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i32,
        #[arg(long)]
        json: bool,
    },
    /// Truncate a complex with respect to the t-structure at `--at`.
    Truncate {
        doc: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        at: i32,
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long)]
        json: bool,
    },
    /// Build the Postnikov tower of a map.
    Postnikov {
        doc: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the six normality conditions on a complex.
    Normality {
        doc: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i32,
        #[arg(long)]
        json: bool,
    },
    /// Render a saved suite report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-run the failing check recorded in a report.
    Replay {
        #[arg(long = "in")]
        input: PathBuf,
        /// Property to replay; defaults to the first failing one.
        #[arg(long)]
        property: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Ge,
    Lt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document> {
    Document::parse(&read(path)?)
}

fn dims_line(x: &tfactor::complexes::Complex) -> String {
    match x.homology_support() {
        None => "acyclic".to_string(),
        Some((lo, hi)) => (lo..=hi)
            .map(|n| format!("H_{n}={:?}", x.homology_dims(n)))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            config,
            seed,
            cases,
            prime,
            quiver,
            json,
            out,
        } => {
            let mut c = match config {
                Some(p) => SuiteConfig::from_json(&read(&p)?)?,
                None => SuiteConfig::default(),
            };
            c.seed = seed.unwrap_or(c.seed);
            c.cases = cases.unwrap_or(c.cases);
            c.prime = prime.unwrap_or(c.prime);
            if let Some(q) = quiver {
                c.quiver = q.parse::<QuiverChoice>()?;
            }
            let report = run_suite(&c)?;
            if let Some(path) = out {
                fs::write(&path, report.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            print!("{}", if json { report.to_json() } else { report.to_text() });
            Ok(report.passed)
        }
        Command::Factor { doc, map, shift, json } => {
            let d = load(&doc)?;
            let named = d.maps().get(&map).ok_or_else(|| Error::Unresolved {
                kind: "map",
                name: map.clone(),
            })?;
            let fact = factor(&named.map, &TStructure::new(shift));
            let mut out = Document::new(d.category());
            let mid = format!("{map}.mid");
            out.insert_map(&map, &named.source, &named.target, named.map.clone())?;
            out.insert_map(&format!("{map}.e"), &named.source, &mid, fact.e)?;
            out.insert_map(&format!("{map}.m"), &mid, &named.target, fact.m)?;
            if json {
                print!("{}", out.to_json());
            } else {
                println!("{mid}: {}", dims_line(&fact.middle));
            }
            Ok(true)
        }
        Command::Truncate {
            doc,
            object,
            at,
            side,
            json,
        } => {
            let d = load(&doc)?;
            let x = d.complex(&object)?;
            let t = TStructure::new(at);
            let mut out = Document::new(d.category());
            let name = match side {
                Side::Ge => {
                    let (tx, iota) = t.truncate_ge(x);
                    let name = format!("{object}.ge{at}");
                    out.insert_map(&format!("{name}.incl"), &name, &object, iota)?;
                    out.insert_complex(&name, tx)?;
                    name
                }
                Side::Lt => {
                    let (tx, pi) = t.truncate_lt(x);
                    let name = format!("{object}.lt{at}");
                    out.insert_map(&format!("{name}.proj"), &object, &name, pi)?;
                    out.insert_complex(&name, tx)?;
                    name
                }
            };
            if json {
                print!("{}", out.to_json());
            } else {
                println!("{name}: {}", dims_line(out.complex(&name)?));
            }
            Ok(true)
        }
        Command::Postnikov { doc, map, json } => {
            let d = load(&doc)?;
            let f = d.map(&map)?;
            let tower = postnikov_tower(f);
            let mut out = Document::new(d.category());
            let objects: Vec<_> = tower.objects().into_iter().cloned().collect();
            for (k, s) in tower.stages.iter().enumerate() {
                out.insert_map(
                    &format!("{map}.f{k}"),
                    &format!("{map}.Z{k}"),
                    &format!("{map}.Z{}", k + 1),
                    s.map.clone(),
                )?;
            }
            debug_assert_eq!(objects.len(), tower.stages.len() + usize::from(!tower.is_empty()));
            if json {
                print!("{}", out.to_json());
            } else {
                match tower.window {
                    None => println!("{map}: already invertible, empty tower"),
                    Some(w) => {
                        let n = tower.len();
                        println!("{map}: window [{}, {}), {n} stage{}", w.a, w.b, if n == 1 { "" } else { "s" });
                        for (k, s) in tower.stages.iter().enumerate() {
                            println!("  f{k}: fiber in degree {}", s.degree);
                        }
                    }
                }
            }
            Ok(true)
        }
        Command::Normality {
            doc,
            object,
            shift,
            json,
        } => {
            let d = load(&doc)?;
            let r = normality_report(d.complex(&object)?, &TStructure::new(shift));
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("reports serialize"));
            } else {
                for (name, v) in [
                    ("k_in_torsion", r.k_in_torsion),
                    ("q_in_torsion_free", r.q_in_torsion_free),
                    ("normal", r.normal),
                    ("q_is_reflection", r.q_is_reflection),
                    ("k_is_coreflection", r.k_is_coreflection),
                    ("fiber_sequence", r.fiber_sequence),
                ] {
                    println!("{name}: {v}");
                }
            }
            Ok(r.all() && r.consistent())
        }
        Command::Report { input, format } => {
            let report = Report::from_json(&read(&input)?)?;
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            Ok(report.passed)
        }
        Command::Replay { input, property } => {
            let report = Report::from_json(&read(&input)?)?;
            let entry = match property {
                Some(name) => {
                    let p = Property::from_name(&name).ok_or_else(|| Error::Unresolved {
                        kind: "property",
                        name: name.clone(),
                    })?;
                    report.property(p)
                }
                None => report.properties.iter().find(|r| r.failed > 0),
            };
            let Some(cx) = entry.and_then(|e| e.counterexample.as_ref().map(|c| (e.property, c))) else {
                println!("nothing to replay");
                return Ok(true);
            };
            match replay(&report.config, cx.0, cx.1)? {
                Some(detail) => {
                    println!("{} case {} shift {} still fails: {detail}", cx.0.name(), cx.1.case, cx.1.shift);
                    Ok(false)
                }
                None => {
                    println!("{} case {} shift {} now passes", cx.0.name(), cx.1.case, cx.1.shift);
                    Ok(true)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
