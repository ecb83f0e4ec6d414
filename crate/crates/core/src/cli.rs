//! Command-line front end. Every subcommand writes its artifacts into `--out`
//! together with a `<subcommand>.manifest.json` run manifest, and prints a
//! one-line summary.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::continuous::{
    enumerate_continuous_tilings, enumerate_one_factorizations, packing_from_one_factorization, parameter_count,
};
use crate::error::{Error, Result};
use crate::keller::{
    build_compatibility_graph, build_keller_graph, export_dimacs, export_keller_dimacs, import_dimacs, max_clique,
    max_clique_with, Graph, MAX_GRAPH_DIM, REFERENCE_OMEGA_7,
};
use crate::model::TorusParams;
use crate::random::{density_stats, exact_terminal_distribution_gated, simulate, DensityStats, SimulationConfig};
use crate::search::{
    classify_holes, enumerate_tilings, flip_connectivity, min_blocking_gated, min_nonextensible_gated,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "cubepack", version, about = "Cube packings and tilings of the discrete torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Dimacs,
}

#[derive(Args, Debug, Serialize)]
struct Torus {
    /// Dimension.
    #[arg(long = "n")]
    n: usize,
    /// Half side of the torus (cubes have side N on (Z/2NZ)^n).
    #[arg(long = "N", default_value_t = 2)]
    #[serde(rename = "N")]
    scale: u32,
}

#[derive(Args, Debug, Serialize)]
struct Dim {
    #[arg(long = "n")]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Directory for artifacts and the run manifest.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo runs of the random packing process.
    Simulate {
        #[command(flatten)]
        torus: Torus,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Exact law of the terminal packing type.
    ExactDist {
        #[command(flatten)]
        torus: Torus,
        #[arg(long)]
        allow_long: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Tiling types up to symmetry.
    Enumerate {
        #[command(flatten)]
        dim: Dim,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest non-extensible packing.
    MinF {
        #[command(flatten)]
        dim: Dim,
        #[arg(long)]
        allow_long: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest blocking set.
    MinH {
        #[command(flatten)]
        dim: Dim,
        #[arg(long)]
        allow_long: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Holes of non-extensible packings with 2^n - l cubes.
    Holes {
        #[command(flatten)]
        dim: Dim,
        /// Missing cube count; all of 1..=4 (below 2^n) when omitted.
        #[arg(long)]
        l: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Connectivity of the flip graph on tiling types.
    Flips {
        #[command(flatten)]
        dim: Dim,
        #[command(flatten)]
        output: Output,
    },
    /// Maximum clique of the Keller graph G_n or of an imported DIMACS graph.
    Keller {
        #[arg(long = "n")]
        n: Option<usize>,
        /// Node budget for the clique search.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Also write the graph in DIMACS format.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Read the graph from a DIMACS file instead.
        #[arg(long)]
        import: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Continuous tiling types.
    Continuous {
        #[command(flatten)]
        dim: Dim,
        #[command(flatten)]
        output: Output,
    },
    /// One-factorizations of K_{n+1} and their non-extensible packings (odd n).
    Of {
        #[command(flatten)]
        dim: Dim,
        #[command(flatten)]
        output: Output,
    },
    /// Writes G_n (n <= 7) or the compatibility graph in DIMACS format.
    Export {
        #[command(flatten)]
        dim: Dim,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: Format,
        /// Export the compatibility graph instead of G_n (n <= 5).
        #[arg(long)]
        compatibility: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Provenance record written next to every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub version: String,
    pub wall_time_secs: f64,
    /// Artifact file names, relative to the manifest.
    pub artifacts: Vec<String>,
    /// SHA-256 over the artifact contents in listed order.
    pub result_digest: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Recomputes the digest from the artifacts in `dir`.
    pub fn verify(&self, dir: &Path) -> Result<bool> {
        let contents = self.artifacts.iter().map(|a| fs::read(dir.join(a))).collect::<std::io::Result<Vec<_>>>()?;
        Ok(digest(contents.iter().map(Vec::as_slice)) == self.result_digest)
    }
}

pub fn digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    format!("{:x}", h.finalize())
}

/// A finished run: artifacts to write and a summary line.
struct Outcome {
    artifacts: Vec<(String, Vec<u8>)>,
    summary: String,
}

fn json_artifact(name: &str, value: &Value) -> (String, Vec<u8>) {
    let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
    text.push('\n');
    (name.to_string(), text.into_bytes())
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code: 0 success, 2 usage, 3 capacity, 1 other failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("cubepack: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::InvalidPacking(_) | Error::Json(_) => 2,
        Error::Capacity(_) => 3,
        Error::Io(_) => 1,
    }
}

fn execute(command: Command) -> Result<String> {
    let start = Instant::now();
    let (name, params, seed, workers, out) = describe(&command);
    let outcome = dispatch(command)?;
    fs::create_dir_all(&out)?;
    for (file, bytes) in &outcome.artifacts {
        fs::write(out.join(file), bytes)?;
    }
    let manifest = RunManifest {
        subcommand: name.to_string(),
        params,
        seed,
        workers,
        version: VERSION.to_string(),
        wall_time_secs: start.elapsed().as_secs_f64(),
        artifacts: outcome.artifacts.iter().map(|(f, _)| f.clone()).collect(),
        result_digest: digest(outcome.artifacts.iter().map(|(_, b)| b.as_slice())),
    };
    fs::write(out.join(format!("{name}.manifest.json")), manifest.to_json())?;
    Ok(outcome.summary)
}

type Described = (&'static str, Value, Option<u64>, Option<usize>, PathBuf);

fn describe(command: &Command) -> Described {
    match command {
        Command::Simulate { torus, trials, seed, workers, format, output } => (
            "simulate",
            json!({ "n": torus.n, "N": torus.scale, "trials": trials, "format": format }),
            Some(*seed),
            Some(*workers),
            output.out.clone(),
        ),
        Command::ExactDist { torus, allow_long, output } => {
            ("exact-dist", json!({ "n": torus.n, "N": torus.scale, "allow_long": allow_long }), None, None, output.out.clone())
        }
        Command::Enumerate { dim, output } => ("enumerate", json!(dim), None, None, output.out.clone()),
        Command::MinF { dim, allow_long, output } => {
            ("min-f", json!({ "n": dim.n, "allow_long": allow_long }), None, None, output.out.clone())
        }
        Command::MinH { dim, allow_long, output } => {
            ("min-h", json!({ "n": dim.n, "allow_long": allow_long }), None, None, output.out.clone())
        }
        Command::Holes { dim, l, output } => ("holes", json!({ "n": dim.n, "l": l }), None, None, output.out.clone()),
        Command::Flips { dim, output } => ("flips", json!(dim), None, None, output.out.clone()),
        Command::Keller { n, budget, threads, export, import, output } => (
            "keller",
            json!({ "n": n, "budget": budget, "export": export, "import": import }),
            None,
            *threads,
            output.out.clone(),
        ),
        Command::Continuous { dim, output } => ("continuous", json!(dim), None, None, output.out.clone()),
        Command::Of { dim, output } => ("of", json!(dim), None, None, output.out.clone()),
        Command::Export { dim, format, compatibility, output } => (
            "export",
            json!({ "n": dim.n, "format": format, "compatibility": compatibility }),
            None,
            None,
            output.out.clone(),
        ),
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Simulate { torus, trials, seed, workers, format, .. } => {
            let params = TorusParams::new(torus.n, torus.scale)?;
            let config = SimulationConfig::new(params, trials, seed, workers)?;
            run_simulate(&config, format)
        }
        Command::ExactDist { torus, allow_long, .. } => {
            let params = TorusParams::new(torus.n, torus.scale)?;
            let d = exact_terminal_distribution_gated(&params, allow_long)?;
            let value: Value = serde_json::from_str(&d.to_json())?;
            Ok(Outcome {
                artifacts: vec![json_artifact("exact_dist.json", &value)],
                summary: format!("{} terminal types, expected density {}", d.len(), d.expected_density()),
            })
        }
        Command::Enumerate { dim, .. } => {
            let forms = enumerate_tilings(dim.n)?;
            Ok(Outcome {
                artifacts: vec![json_artifact("tilings.json", &json!({ "n": dim.n, "count": forms.len(), "tilings": forms }))],
                summary: format!("{} tiling types for n = {}", forms.len(), dim.n),
            })
        }
        Command::MinF { dim, allow_long, .. } => {
            let m = min_nonextensible_gated(dim.n, allow_long)?;
            let value = json!({ "n": dim.n, "f": m.value, "witness": m.witness, "nodes": m.stats.nodes });
            Ok(Outcome { artifacts: vec![json_artifact("min_f.json", &value)], summary: format!("f({}) = {}", dim.n, m.value) })
        }
        Command::MinH { dim, allow_long, .. } => {
            let m = min_blocking_gated(dim.n, allow_long)?;
            let value = json!({ "n": dim.n, "h": m.value, "witness": m.witness, "nodes": m.stats.nodes });
            Ok(Outcome { artifacts: vec![json_artifact("min_h.json", &value)], summary: format!("h({}) = {}", dim.n, m.value) })
        }
        Command::Holes { dim, l, .. } => {
            let n = dim.n;
            let ls: Vec<usize> = match l {
                Some(l) => vec![l],
                None => (1..=4).filter(|&l| n < usize::BITS as usize && l < 1 << n).collect(),
            };
            if ls.is_empty() {
                return Err(Error::usage(format!("no admissible l for n = {n}")));
            }
            let mut rows = Vec::new();
            let mut parts = Vec::new();
            for l in ls {
                let classes = classify_holes(n, l)?;
                parts.push(format!("l={l}: {}", classes.len()));
                let list: Vec<Value> = classes
                    .iter()
                    .map(|c| json!({ "cells": c.cells.len(), "hole": c.cells, "packings": c.packings }))
                    .collect();
                rows.push(json!({ "l": l, "types": classes.len(), "classes": list }));
            }
            Ok(Outcome {
                artifacts: vec![json_artifact("holes.json", &json!({ "n": n, "results": rows }))],
                summary: format!("hole types for n = {n}: {}", parts.join(", ")),
            })
        }
        Command::Flips { dim, .. } => {
            let r = flip_connectivity(dim.n)?;
            let summary = format!("{} types, {} edges, connected = {}", r.node_count, r.edge_count, r.connected);
            Ok(Outcome { artifacts: vec![json_artifact("flips.json", &json!(r))], summary })
        }
        Command::Keller { n, budget, threads, export, import, .. } => run_keller(n, budget, threads, export, import),
        Command::Continuous { dim, .. } => {
            let tilings = enumerate_continuous_tilings(dim.n)?;
            let counts: Vec<usize> = tilings.iter().map(parameter_count).collect();
            let value = json!({
                "n": dim.n,
                "count": tilings.len(),
                "min_parameters": counts.iter().min(),
                "max_parameters": counts.iter().max(),
                "tilings": tilings,
            });
            Ok(Outcome {
                artifacts: vec![json_artifact("continuous.json", &value)],
                summary: format!("{} continuous tiling types for n = {}", tilings.len(), dim.n),
            })
        }
        Command::Of { dim, .. } => {
            let n = dim.n;
            if n % 2 == 0 {
                return Err(Error::usage(format!("one-factorizations give packings in odd dimensions (n = {n})")));
            }
            let factorizations = enumerate_one_factorizations(n.div_ceil(2))?;
            let entries = factorizations
                .iter()
                .map(|f| {
                    let p = packing_from_one_factorization(f)?;
                    Ok(json!({ "factorization": f, "parameters": parameter_count(&p), "packing": p }))
                })
                .collect::<Result<Vec<Value>>>()?;
            Ok(Outcome {
                artifacts: vec![json_artifact("one_factorizations.json", &json!({ "n": n, "count": entries.len(), "entries": entries }))],
                summary: format!("{} one-factorizations of K_{}", entries.len(), n + 1),
            })
        }
        Command::Export { dim, format, compatibility, .. } => {
            if format != Format::Dimacs {
                return Err(Error::usage("export writes DIMACS only (--format dimacs)"));
            }
            let mut bytes = Vec::new();
            let (name, what) = if compatibility {
                export_dimacs(build_compatibility_graph(dim.n)?.graph(), &mut bytes)?;
                (format!("compat_{}.dimacs", dim.n), "compatibility graph")
            } else {
                export_keller_dimacs(dim.n, &mut bytes)?;
                (format!("keller_{}.dimacs", dim.n), "Keller graph")
            };
            Ok(Outcome { summary: format!("wrote {what} for n = {} to {name}", dim.n), artifacts: vec![(name, bytes)] })
        }
    }
}

fn run_simulate(config: &SimulationConfig, format: Format) -> Result<Outcome> {
    let (artifact, stats): ((String, Vec<u8>), DensityStats) = match format {
        Format::Csv => {
            let stats = density_stats(config)?;
            (("density.csv".to_string(), stats.to_csv().into_bytes()), stats)
        }
        Format::Json => {
            let packings = simulate(config)?;
            let stats = density_stats(config)?;
            let value = json!({ "config": config, "stats": stats, "packings": packings });
            (json_artifact("simulate.json", &value), stats)
        }
        Format::Dimacs => return Err(Error::usage("simulate writes json or csv")),
    };
    let summary = format!(
        "{} trials, mean density {:.6} (variance {:.6}), sizes {:?}",
        stats.trials, stats.mean_density, stats.var_density, stats.histogram
    );
    Ok(Outcome { artifacts: vec![artifact], summary })
}

fn run_keller(
    n: Option<usize>,
    budget: Option<u64>,
    threads: Option<usize>,
    export: Option<PathBuf>,
    import: Option<PathBuf>,
) -> Result<Outcome> {
    let graph: Graph;
    let mut transitive = false;
    match (n, &import) {
        (Some(_), Some(_)) => return Err(Error::usage("pass either --n or --import, not both")),
        (None, None) => return Err(Error::usage("missing --n (or --import PATH)")),
        (None, Some(path)) => graph = import_dimacs(BufReader::new(fs::File::open(path)?))?,
        (Some(n), None) => {
            if n > MAX_GRAPH_DIM {
                if let Some(path) = &export {
                    export_keller_dimacs(n, &mut std::io::BufWriter::new(fs::File::create(path)?))?;
                }
                return Err(Error::capacity(format!(
                    "clique search on G_{n} is beyond desk scale (in-memory graphs need n <= {MAX_GRAPH_DIM}; the published omega(G_7) = {REFERENCE_OMEGA_7}); use `export` for DIMACS"
                )));
            }
            graph = build_keller_graph(n)?.graph().clone();
            transitive = true;
        }
    }
    if let Some(path) = &export {
        export_dimacs(&graph, &mut std::io::BufWriter::new(fs::File::create(path)?))?;
    }
    let result = if transitive && graph.order() > 0 {
        max_clique_with(&graph, budget, threads, &[0])?
    } else {
        max_clique(&graph, budget, threads)?
    };
    let value = json!({
        "n": n,
        "vertices": graph.order(),
        "edges": graph.edge_count(),
        "clique_number": result.size,
        "complete": result.complete,
        "witness": result.witness,
    });
    let status = if result.complete { "exact" } else { "incomplete, lower bound" };
    Ok(Outcome {
        artifacts: vec![json_artifact("keller.json", &value)],
        summary: format!("clique number {} ({status}) on {} vertices", result.size, graph.order()),
    })
}
