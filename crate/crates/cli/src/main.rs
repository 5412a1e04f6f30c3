//! `tpm`: command-line access to toroidal polyhedral maps.
//!
//! Maps are read one per line in plantri format from a file or standard
//! input. Map output is plantri format; reports are `<line#> <verdict>
//! <detail>` lines. Exit status is 0 on success, 1 when a check fails and
//! 2 on usage or parse errors.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use torusmap::catalog::{catalog_lines, verify_catalog};
use torusmap::generate::{generate_with, GenerationTask, DEFAULT_MAX_VERTICES};
use torusmap::moves::{removable_edges, shrinkable_edges, Reducer};
use torusmap::render::{render, SvgOptions};
use torusmap::{
    canonical_code, dual, is_diminimal, is_tpm, read_stream, reduce, remove_edge, serialize, shrink_edge,
    CanonicalCode, EdgeRef, EmbeddedMap,
};

#[derive(Parser)]
#[command(name = "tpm", version, about = "Toroidal polyhedral maps in plantri format")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check each map at the given level.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Tpm)]
        level: Level,
        input: Option<PathBuf>,
    },
    /// Print vertex, edge and face counts, genus and face sizes.
    Stats { input: Option<PathBuf> },
    /// Print the canonical form of each map.
    Canon {
        /// Drop maps isomorphic to an earlier one.
        #[arg(long)]
        dedup: bool,
        input: Option<PathBuf>,
    },
    /// Print the dual of each map.
    Dual { input: Option<PathBuf> },
    /// List removable and shrinkable edges, or apply one move.
    Moves {
        #[arg(long, value_enum, requires = "edge")]
        apply: Option<MoveArg>,
        /// Edge given by its endpoint letters, e.g. `b,f`.
        #[arg(long, requires = "apply")]
        edge: Option<String>,
        input: Option<PathBuf>,
    },
    /// Reduce each map to a diminimal map by successful moves.
    Reduce {
        /// Print every reachable diminimal map instead of one.
        #[arg(long)]
        all: bool,
        input: Option<PathBuf>,
    },
    /// Generate all toroidal polyhedral maps with N vertices.
    Generate {
        n: usize,
        #[arg(long)]
        diminimal_only: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Checkpoint file of finished graph codes; finished graphs are skipped.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Allow more than the default vertex cap.
        #[arg(long)]
        force: bool,
    },
    /// Print or verify the catalog of known diminimal maps.
    Catalog {
        #[arg(value_enum, default_value_t = CatalogAction::Print)]
        action: CatalogAction,
    },
    /// Draw each map on the flat torus as SVG.
    Render {
        /// Overlay the dual map.
        #[arg(long)]
        dual: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 512.0)]
        scale: f64,
        #[arg(long)]
        no_labels: bool,
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Map,
    Tpm,
    Diminimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveArg {
    Remove,
    Shrink,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogAction {
    Print,
    Verify,
}

/// Exit status accumulated while streaming.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
}

struct Failure(Status, String);

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(Status::Usage, e.to_string())
    }
}

type Outcome = Result<Status, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(status) => ExitCode::from(status as u8),
        Err(Failure(status, message)) => {
            eprintln!("tpm: {message}");
            ExitCode::from(status as u8)
        }
    }
}

fn open(input: &Option<PathBuf>) -> Result<Box<dyn BufRead>, Failure> {
    match input {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure(Status::Usage, format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufReader::new(file)))
        }
        None => Ok(Box::new(io::stdin().lock())),
    }
}

/// Calls `each` for every parsed map; parse errors are reported and turn
/// the final status into a usage error.
fn for_each_map(
    input: &Option<PathBuf>,
    mut each: impl FnMut(usize, EmbeddedMap) -> Result<Status, Failure>,
) -> Outcome {
    let mut status = Status::Ok;
    for item in read_stream(open(input)?) {
        let (line, parsed) = item?;
        match parsed {
            Ok(map) => status = status.max(each(line, map)?),
            Err(e) => {
                eprintln!("{line} PARSE-ERROR {e}");
                status = Status::Usage;
            }
        }
    }
    Ok(status)
}

fn line_of(map: &EmbeddedMap) -> String {
    serialize(map).unwrap_or_else(|_| canonical_code(map).map(|c| c.to_string()).unwrap_or_default())
}

fn letter(v: usize) -> String {
    if v < 26 {
        ((b'a' + v as u8) as char).to_string()
    } else {
        v.to_string()
    }
}

fn edge_name(map: &EmbeddedMap, e: EdgeRef) -> String {
    let (u, v) = map.endpoints(e);
    let (u, v) = (u.min(v), u.max(v));
    format!("{},{}", letter(u), letter(v))
}

fn edge_names(map: &EmbeddedMap, edges: &[EdgeRef]) -> String {
    if edges.is_empty() {
        "-".to_string()
    } else {
        edges.iter().map(|&e| edge_name(map, e)).collect::<Vec<_>>().join(" ")
    }
}

fn parse_vertex(s: &str) -> Option<usize> {
    let s = s.trim();
    match s.as_bytes() {
        [c] if c.is_ascii_lowercase() => Some((c - b'a') as usize),
        _ => s.parse().ok(),
    }
}

fn parse_edge(spec: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure(Status::Usage, format!("bad edge {spec:?}; expected two vertex letters like b,f"));
    let (a, b) = spec.split_once(',').ok_or_else(bad)?;
    Ok((parse_vertex(a).ok_or_else(bad)?, parse_vertex(b).ok_or_else(bad)?))
}

fn run(command: Command) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let status = match command {
        Command::Verify { level, input } => for_each_map(&input, |line, map| {
            let verdict = is_tpm(&map);
            let (pass, detail) = match level {
                Level::Map => (verdict.is_map, describe(&verdict)),
                Level::Tpm => (verdict.is_tpm(), describe(&verdict)),
                Level::Diminimal => {
                    if verdict.is_tpm() {
                        let d = is_diminimal(&map).unwrap_or(false);
                        (d, if d { "diminimal".into() } else { "has a removable or shrinkable edge".into() })
                    } else {
                        (false, describe(&verdict))
                    }
                }
            };
            writeln!(out, "{line} {} {detail}", if pass { "PASS" } else { "FAIL" })?;
            Ok(if pass { Status::Ok } else { Status::Failed })
        })?,
        Command::Stats { input } => for_each_map(&input, |line, map| {
            let faces = map.trace_faces();
            let mut sizes = faces.sizes();
            sizes.sort_unstable();
            let mut degrees = map.degree_sequence();
            degrees.sort_unstable();
            let genus = map.euler_genus().map(|g| g.to_string()).unwrap_or_else(|_| "disconnected".into());
            writeln!(
                out,
                "{line} OK n={} e={} f={} genus={genus} degrees={} faces={}",
                map.vertex_count(),
                map.edge_count(),
                faces.len(),
                join(&degrees),
                join(&sizes)
            )?;
            Ok(Status::Ok)
        })?,
        Command::Canon { dedup, input } => {
            let mut seen = HashSet::new();
            for_each_map(&input, |line, map| match canonical_code(&map) {
                Ok(code) => {
                    if !dedup || seen.insert(code.clone()) {
                        writeln!(out, "{code}")?;
                    }
                    Ok(Status::Ok)
                }
                Err(e) => {
                    eprintln!("{line} FAIL {e}");
                    Ok(Status::Failed)
                }
            })?
        }
        Command::Dual { input } => for_each_map(&input, |line, map| match dual(&map) {
            Ok(d) => {
                writeln!(out, "{}", line_of(&d))?;
                Ok(Status::Ok)
            }
            Err(e) => {
                eprintln!("{line} FAIL {e}");
                Ok(Status::Failed)
            }
        })?,
        Command::Moves { apply, edge, input } => {
            let edge = edge.as_deref().map(parse_edge).transpose()?;
            for_each_map(&input, |line, map| {
                if !is_tpm(&map).is_tpm() {
                    eprintln!("{line} FAIL not a toroidal polyhedral map");
                    return Ok(Status::Failed);
                }
                match (apply, edge) {
                    (Some(kind), Some((u, v))) => {
                        let Some(e) =
                            (u < map.vertex_count() && v < map.vertex_count()).then(|| map.find_edge(u, v)).flatten()
                        else {
                            eprintln!("{line} FAIL no edge {},{}", letter(u), letter(v));
                            return Ok(Status::Failed);
                        };
                        let outcome = match kind {
                            MoveArg::Remove => remove_edge(&map, e),
                            MoveArg::Shrink => shrink_edge(&map, e),
                        }
                        .expect("edge exists");
                        match outcome.result {
                            Ok(result) => {
                                writeln!(out, "{}", line_of(&result))?;
                                Ok(Status::Ok)
                            }
                            Err(reason) => {
                                eprintln!("{line} REJECTED {} {}: {reason}", outcome.kind, edge_name(&map, e));
                                Ok(Status::Failed)
                            }
                        }
                    }
                    _ => {
                        let removable = removable_edges(&map).expect("checked");
                        let shrinkable = shrinkable_edges(&map).expect("checked");
                        writeln!(
                            out,
                            "{line} OK removable: {} shrinkable: {}",
                            edge_names(&map, &removable),
                            edge_names(&map, &shrinkable)
                        )?;
                        Ok(Status::Ok)
                    }
                }
            })?
        }
        Command::Reduce { all, input } => {
            let mut reducer = Reducer::new();
            for_each_map(&input, |line, map| {
                if !is_tpm(&map).is_tpm() {
                    eprintln!("{line} FAIL not a toroidal polyhedral map");
                    return Ok(Status::Failed);
                }
                let codes: Vec<CanonicalCode> = if all {
                    reducer.reduce(&map).expect("checked").into_iter().collect()
                } else {
                    reduce(&map, true).expect("checked")
                };
                for code in codes {
                    writeln!(out, "{code}")?;
                }
                Ok(Status::Ok)
            })?
        }
        Command::Generate { n, diminimal_only, jobs, resume, force } => {
            generate(&mut out, n, diminimal_only, jobs, resume, force)?
        }
        Command::Catalog { action } => match action {
            CatalogAction::Print => {
                for line in catalog_lines() {
                    writeln!(out, "{line}")?;
                }
                Status::Ok
            }
            CatalogAction::Verify => {
                let report = verify_catalog();
                writeln!(out, "{report}")?;
                if report.passed() {
                    Status::Ok
                } else {
                    Status::Failed
                }
            }
        },
        Command::Render { dual, out: dir, scale, no_labels, input } => {
            fs::create_dir_all(&dir)?;
            let options = SvgOptions { show_dual: dual, scale, labels: !no_labels };
            for_each_map(&input, |line, map| render_one(&mut out, &dir, line, &map, options))?
        }
    };
    out.flush()?;
    Ok(status)
}

fn join(values: &[usize]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn describe(verdict: &torusmap::TpmVerdict) -> String {
    let genus = verdict.genus.map(|g| g.to_string()).unwrap_or_else(|| "-".into());
    if verdict.failure_reasons.is_empty() {
        format!("genus={genus}")
    } else {
        let reasons: Vec<String> = verdict.failure_reasons.iter().map(ToString::to_string).collect();
        format!("genus={genus} {}", reasons.join(" "))
    }
}

fn render_one(out: &mut impl Write, dir: &Path, line: usize, map: &EmbeddedMap, options: SvgOptions) -> Outcome {
    let drawing = match render(map, options) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{line} FAIL {e}");
            return Ok(Status::Failed);
        }
    };
    let code = canonical_code(map).expect("rendered maps are connected");
    let digest = Sha256::digest(code.as_bytes());
    let name: String = format!("{digest:x}").chars().take(16).collect();
    let path = dir.join(format!("{name}.svg"));
    fs::write(&path, &drawing.svg)?;
    if !drawing.crossings.is_empty() {
        eprintln!("{line} WARN {} improper crossings in drawing", drawing.crossings.len());
    }
    writeln!(out, "{line} OK {}", path.display())?;
    Ok(Status::Ok)
}

fn read_codes(path: &Path) -> Result<HashSet<CanonicalCode>, Failure> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| CanonicalCode::from_bytes(l.as_bytes().to_vec()))
            .collect()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(HashSet::new()),
        Err(e) => Err(Failure(Status::Usage, format!("{}: {e}", path.display()))),
    }
}

fn generate(
    out: &mut impl Write,
    n: usize,
    diminimal_only: bool,
    jobs: Option<usize>,
    resume: Option<PathBuf>,
    force: bool,
) -> Outcome {
    if n > DEFAULT_MAX_VERTICES && !force {
        return Err(Failure(
            Status::Usage,
            format!("n={n} exceeds the default cap of {DEFAULT_MAX_VERTICES}; pass --force"),
        ));
    }
    if n > torusmap::graph::MAX_GRAPH_VERTICES {
        return Err(Failure(
            Status::Usage,
            format!("n={n} exceeds the {}-vertex graph limit", torusmap::graph::MAX_GRAPH_VERTICES),
        ));
    }
    let task = GenerationTask::new(n).diminimal_only(diminimal_only);
    let mut skip = HashSet::new();
    let mut saved: Vec<CanonicalCode> = Vec::new();
    let mut checkpoint = None;
    if let Some(path) = &resume {
        // Maps of finished graphs go to a sidecar before the graph is
        // marked finished, so a resumed run can still print everything.
        let sidecar = maps_sidecar(path);
        skip = read_codes(path)?;
        saved = read_codes(&sidecar)?.into_iter().collect();
        let open = |p: &Path| {
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Failure(Status::Usage, format!("{}: {e}", p.display())))
        };
        checkpoint = Some(Mutex::new((open(path)?, open(&sidecar)?)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure(Status::Usage, e.to_string()))?;
    let fresh = pool.install(|| {
        generate_with(&task, &skip, |finished| {
            if let Some(files) = &checkpoint {
                let mut files = files.lock().expect("checkpoint lock");
                let (graphs, maps) = &mut *files;
                for (code, _) in &finished.maps {
                    let _ = writeln!(maps, "{code}");
                }
                let _ = maps.flush();
                let _ = writeln!(graphs, "{}", finished.graph_code);
                let _ = graphs.flush();
            }
        })
    });
    let mut codes: Vec<CanonicalCode> = fresh.into_iter().map(|(code, _)| code).chain(saved).collect();
    codes.sort();
    codes.dedup();
    for code in &codes {
        writeln!(out, "{code}")?;
    }
    eprintln!("n={n}: {} maps", codes.len());
    Ok(Status::Ok)
}

fn maps_sidecar(checkpoint: &Path) -> PathBuf {
    let mut name = checkpoint.as_os_str().to_owned();
    name.push(".maps");
    PathBuf::from(name)
}
