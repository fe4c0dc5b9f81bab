//! Command-line frontend: load a singularity description from JSON, run the
//! library operations, and emit text, JSON or DOT reports.
//!
//! Exit codes: 0 on success, 1 on domain errors (invalid file, invalid
//! flag/word/subset), 2 on usage errors. Results go to stdout, diagnostics
//! to stderr. Identical invocations produce byte-identical output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use canmma::graph::{
    bfs_closure, build_exchange_graph_with_threads, graphs_isomorphic, hasse_weak_order, to_dot,
    LabeledGraph,
};
use canmma::model::{
    class_of_subset, iso_class, picture_of_flag, FactorData, Flag, GroupSequence, Word,
};
use canmma::mutation::{mu_adjacent, reflect, SummandSet};
use canmma::poly::parse_poly;
use canmma::present::{
    build_quiver, count_mm, cy_reduce, derived_equiv_diagnostic, is_ct, is_mm, is_modifying,
    mf_pair, morita_class_count,
};
use canmma::Error;

#[derive(Parser)]
#[command(
    name = "canmma",
    version,
    about = "Modifying modules over cA_n singularities: classification, mutation, \
             exchange graphs, class groups, quivers and matrix factorizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a singularity file and report multiplicities and warnings
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the picture of a flag: the groups of prime classes per curve
    Picture {
        file: PathBuf,
        /// Flag as a JSON array of subsets, e.g. `[[2,3],[1,2,3]]`
        #[arg(long)]
        flag: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Mutate: reflect a picture at curves J, or act on a word by s_i
    Mutate {
        file: PathBuf,
        /// Flag as a JSON array of subsets (picture mutation)
        #[arg(long)]
        flag: Option<String>,
        /// Word such as 1133 (adjacent mutation; J must be one index)
        #[arg(long)]
        word: Option<String>,
        /// Curve indices, comma separated, e.g. 2,5
        #[arg(long = "J")]
        j: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exchange graph of basic MM generators (optionally grown from a word)
    ExchangeGraph {
        file: PathBuf,
        /// Start word: build by closure from it instead of enumeration
        #[arg(long)]
        word: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hasse graph of the weak order on the symmetric group
    Hasse {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Test the exchange graph against the weak-order Hasse graph (or a
    /// second file's exchange graph), or two flags for module isomorphism
    IsoCheck {
        file: PathBuf,
        /// Compare against another singularity file instead of the Hasse graph
        #[arg(long)]
        against: Option<PathBuf>,
        /// With --flag2: compare T^F and T^G as basic modules instead
        #[arg(long)]
        flag: Option<String>,
        #[arg(long)]
        flag2: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Describe Cl(R) = Z^t / <a> and optionally the class of (u, f_I)
    ClassGroup {
        file: PathBuf,
        /// Subset I of {1..n}, comma separated
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify T^F: modifying / maximal modifying / cluster tilting
    Classify {
        file: PathBuf,
        #[arg(long)]
        flag: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Split the CY reduction at T^F into residual singularities
    Reduce {
        file: PathBuf,
        #[arg(long)]
        flag: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Quiver of the endomorphism algebra of T^F
    Quiver {
        file: PathBuf,
        #[arg(long)]
        flag: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Verify the matrix factorizations presenting (u, f_I)
    MfVerify {
        file: PathBuf,
        /// Single subset I; when absent all 2^n subsets are verified
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sufficient derived-equivalence test between two partial resolutions
    DerivedEquiv {
        file: PathBuf,
        #[arg(long)]
        flag: String,
        #[arg(long)]
        flag2: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count basic MM generators: formula and enumeration must agree
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Failures are split by exit code: domain errors exit 1, usage errors 2.
enum Failure {
    Domain(String),
    Usage(String),
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Domain(msg.into())
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Domain(msg) | Failure::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

/// On-disk description of the singularity.
#[derive(Debug, Serialize, Deserialize)]
struct SingularityFile {
    primes: Vec<PrimeEntry>,
    factors: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PrimeEntry {
    id: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly: Option<String>,
}

fn load_factor_data(path: &Path) -> CliResult<FactorData> {
    let text =
        std::fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))?;
    let file: SingularityFile =
        serde_json::from_str(&text).map_err(|e| domain(format!("{}: {e}", path.display())))?;

    let t = file.primes.len();
    if t == 0 {
        return Err(domain(format!("{}: no primes declared", path.display())));
    }
    let mut seen = vec![false; t + 1];
    for p in &file.primes {
        if p.id == 0 || p.id > t || seen[p.id] {
            return Err(domain(format!(
                "{}: prime ids must be 1..{t} without repeats (got {})",
                path.display(),
                p.id
            )));
        }
        seen[p.id] = true;
    }
    for (k, f) in file.factors.iter().enumerate() {
        if *f == 0 || *f > t {
            return Err(domain(format!(
                "{}: factors[{k}] = {f} references no declared prime",
                path.display()
            )));
        }
    }

    let with_poly = file.primes.iter().filter(|p| p.poly.is_some()).count();
    let reps = if with_poly == 0 {
        None
    } else if with_poly == t {
        let mut reps = vec![None; t];
        for p in &file.primes {
            let text = p.poly.as_ref().unwrap();
            let poly = parse_poly(text, 2)
                .map_err(|e| domain(format!("{}: prime {}: {e}", path.display(), p.id)))?;
            reps[p.id - 1] = Some(poly);
        }
        Some(reps.into_iter().map(Option::unwrap).collect())
    } else {
        return Err(domain(format!(
            "{}: either every prime carries a poly or none does",
            path.display()
        )));
    };

    let fd = FactorData::new(file.factors, reps)
        .map_err(|e| domain(format!("{}: {e}", path.display())))?;
    for warning in fd.validate()? {
        eprintln!("warning: {warning}");
    }
    Ok(fd)
}

fn parse_flag_arg(raw: &str, n: usize) -> CliResult<Flag> {
    let chain: Vec<Vec<usize>> =
        serde_json::from_str(raw).map_err(|e| domain(format!("--flag: {e}")))?;
    Ok(Flag::new(chain, n)?)
}

fn parse_index_list(raw: &str) -> CliResult<Vec<usize>> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| domain(format!("invalid index '{part}'")))
        })
        .collect()
}

fn parse_word_arg(raw: &str, fd: &FactorData) -> CliResult<Word> {
    let letters: Vec<usize> = if raw.contains(',') {
        parse_index_list(raw)?
    } else {
        raw.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| domain(format!("invalid word letter '{c}'")))
            })
            .collect::<CliResult<_>>()?
    };
    Ok(Word::new(letters, fd)?)
}

fn thread_hint() -> usize {
    std::env::var("CANMMA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .unwrap_or(1)
}

fn emit_json<T: Serialize>(value: &T) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn reject_dot(format: Format) -> CliResult<()> {
    if format == Format::Dot {
        // usage error, surfaced with exit code 2 by main
        return Err(Failure::Usage("--format dot is not supported here".into()));
    }
    Ok(())
}

fn picture_text(p: &GroupSequence) -> String {
    format!("picture: ( {} )  [{} curves]", p, p.curves())
}

#[derive(Serialize, Deserialize)]
struct ValidateReport {
    n: usize,
    t: usize,
    a: Vec<usize>,
    warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ClassifyReport {
    modifying: bool,
    mm: bool,
    /// None when no polynomial representatives are available.
    ct: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct ClassGroupReport {
    t: usize,
    a: Vec<usize>,
    /// Cl(R) = Z^free_rank + Z/torsion (torsion 1 means none, 0 means Z)
    free_rank: usize,
    torsion: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset_class: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct IsoCheckReport {
    isomorphic: bool,
    left_vertices: usize,
    right_vertices: usize,
}

#[derive(Serialize, Deserialize)]
struct PieceReport {
    primes: Vec<usize>,
    classes: Vec<usize>,
    a: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reps: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct MfReport {
    subset: Vec<usize>,
    a: Vec<Vec<String>>,
    b: Vec<Vec<String>>,
    ok: bool,
}

#[derive(Serialize, Deserialize)]
struct CountReport {
    formula: String,
    enumerated: usize,
    morita_classes: String,
    ok: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate { file, format } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let warnings = fd.validate()?;
            let report = ValidateReport {
                n: fd.n(),
                t: fd.t(),
                a: fd.multiplicities().to_vec(),
                warnings,
            };
            match format {
                Format::Json => emit_json(&report)?,
                _ => {
                    println!(
                        "ok: n={} primes in t={} classes, a={:?}",
                        report.n, report.t, report.a
                    );
                    for w in &report.warnings {
                        println!("warning: {w}");
                    }
                }
            }
        }
        Command::Picture { file, flag, format } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let flag = parse_flag_arg(&flag, fd.n())?;
            let picture = picture_of_flag(&fd, &flag)?;
            match format {
                Format::Json => emit_json(&picture)?,
                _ => println!("{}", picture_text(&picture)),
            }
        }
        Command::Mutate {
            file,
            flag,
            word,
            j,
            format,
        } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let indices = parse_index_list(&j)?;
            match (flag, word) {
                (Some(flag), None) => {
                    let flag = parse_flag_arg(&flag, fd.n())?;
                    let picture = picture_of_flag(&fd, &flag)?;
                    let summands = SummandSet::new(indices, picture.curves())?;
                    let mutated = reflect(&picture, &summands)?;
                    match format {
                        Format::Json => emit_json(&mutated)?,
                        _ => println!("{}", picture_text(&mutated)),
                    }
                }
                (None, Some(word)) => {
                    if indices.len() != 1 {
                        return Err(Failure::Usage(
                            "word mutation takes exactly one index in --J".into(),
                        ));
                    }
                    let word = parse_word_arg(&word, &fd)?;
                    let mutated = mu_adjacent(&word, indices[0])?;
                    match format {
                        Format::Json => emit_json(&mutated.key())?,
                        _ => println!("{mutated}"),
                    }
                }
                _ => {
                    return Err(Failure::Usage(
                        "mutate needs exactly one of --flag or --word".into(),
                    ))
                }
            }
        }
        Command::ExchangeGraph { file, word, format } => {
            let fd = load_factor_data(&file)?;
            let graph = match word {
                Some(raw) => {
                    let start = parse_word_arg(&raw, &fd)?;
                    bfs_closure(&fd, &start)?
                }
                None => build_exchange_graph_with_threads(&fd, thread_hint()),
            };
            emit_graph(&graph, format)?;
        }
        Command::Hasse { n, format } => {
            if n == 0 {
                return Err(domain("n must be at least 1"));
            }
            emit_graph(&hasse_weak_order(n), format)?;
        }
        Command::IsoCheck {
            file,
            against,
            flag,
            flag2,
            format,
        } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            match (flag, flag2) {
                (Some(flag), Some(flag2)) => {
                    let f = parse_flag_arg(&flag, fd.n())?;
                    let g = parse_flag_arg(&flag2, fd.n())?;
                    let isomorphic = iso_class(&fd, &f)? == iso_class(&fd, &g)?;
                    match format {
                        Format::Json => emit_json(&isomorphic)?,
                        _ => println!("modules isomorphic: {isomorphic}"),
                    }
                }
                (None, None) => {
                    let left = build_exchange_graph_with_threads(&fd, thread_hint());
                    let right = match against {
                        Some(other) => {
                            let fd2 = load_factor_data(&other)?;
                            build_exchange_graph_with_threads(&fd2, thread_hint())
                        }
                        None => hasse_weak_order(fd.n()),
                    };
                    let report = IsoCheckReport {
                        isomorphic: graphs_isomorphic(&left, &right),
                        left_vertices: left.vertex_count(),
                        right_vertices: right.vertex_count(),
                    };
                    match format {
                        Format::Json => emit_json(&report)?,
                        _ => println!(
                            "isomorphic: {} ({} vs {} vertices)",
                            report.isomorphic, report.left_vertices, report.right_vertices
                        ),
                    }
                }
                _ => {
                    return Err(Failure::Usage(
                        "module comparison needs both --flag and --flag2".into(),
                    ))
                }
            }
        }
        Command::ClassGroup {
            file,
            subset,
            format,
        } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let g = fd
                .multiplicities()
                .iter()
                .fold(0usize, |acc, &x| gcd(acc, x));
            let (subset_indices, subset_class) = match subset {
                Some(raw) => {
                    let indices = parse_index_list(&raw)?;
                    let class = class_of_subset(&fd, &indices)?;
                    (Some(indices), Some(class.coords().to_vec()))
                }
                None => (None, None),
            };
            let report = ClassGroupReport {
                t: fd.t(),
                a: fd.multiplicities().to_vec(),
                free_rank: fd.t() - 1,
                torsion: g,
                subset: subset_indices,
                subset_class,
            };
            match format {
                Format::Json => emit_json(&report)?,
                _ => {
                    let torsion = match report.torsion {
                        1 => String::new(),
                        g => format!(" + Z/{g}"),
                    };
                    println!(
                        "Cl(R) = Z^{t}/<{a:?}> = Z^{r}{torsion}",
                        t = report.t,
                        a = report.a,
                        r = report.free_rank
                    );
                    if let (Some(subset), Some(class)) = (&report.subset, &report.subset_class) {
                        println!("[(u, f_{subset:?})] = {class:?}");
                    }
                }
            }
        }
        Command::Classify { file, flag, format } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let flag = parse_flag_arg(&flag, fd.n())?;
            let ct = match is_ct(&fd, &flag) {
                Ok(v) => Some(v),
                Err(Error::MissingReps) => None,
                Err(e) => return Err(e.into()),
            };
            let report = ClassifyReport {
                modifying: is_modifying(&fd, &flag)?,
                mm: is_mm(&fd, &flag)?,
                ct,
            };
            match format {
                Format::Json => emit_json(&report)?,
                _ => {
                    let ct = match report.ct {
                        Some(v) => v.to_string(),
                        None => "unknown (no polynomial representatives)".into(),
                    };
                    println!(
                        "modifying: {}, MM: {}, CT: {}",
                        report.modifying, report.mm, ct
                    );
                }
            }
        }
        Command::Reduce { file, flag, format } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let flag = parse_flag_arg(&flag, fd.n())?;
            let reduction = cy_reduce(&fd, &flag)?;
            let layers = flag.layers(fd.n());
            let pieces: Vec<PieceReport> = reduction
                .pieces
                .iter()
                .zip(layers)
                .map(|(piece, primes)| PieceReport {
                    primes,
                    classes: piece.classes().to_vec(),
                    a: piece.multiplicities().to_vec(),
                    reps: piece
                        .reps()
                        .map(|reps| reps.iter().map(|p| p.to_string()).collect()),
                })
                .collect();
            match format {
                Format::Json => emit_json(&pieces)?,
                _ => {
                    for (k, piece) in pieces.iter().enumerate() {
                        let reps = match &piece.reps {
                            Some(reps) => format!(", reps {:?}", reps),
                            None => String::new(),
                        };
                        println!(
                            "piece {}: primes {:?}, a = {:?}{}",
                            k + 1,
                            piece.primes,
                            piece.a,
                            reps
                        );
                    }
                }
            }
        }
        Command::Quiver { file, flag, format } => {
            let fd = load_factor_data(&file)?;
            let flag = parse_flag_arg(&flag, fd.n())?;
            let quiver = build_quiver(&fd, &flag)?;
            match format {
                Format::Json => emit_json(&quiver)?,
                Format::Dot => print!("{}", quiver.to_dot()),
                Format::Text => {
                    println!("vertices: {}", quiver.vertices.join(", "));
                    for arrow in &quiver.arrows {
                        println!("  {} -> {}  [{}]", arrow.source, arrow.target, arrow.label);
                    }
                }
            }
        }
        Command::MfVerify {
            file,
            subset,
            format,
        } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let subsets: Vec<Vec<usize>> = match subset {
                Some(raw) => vec![parse_index_list(&raw)?],
                None => {
                    if fd.n() > 16 {
                        return Err(domain("n too large to verify every subset; pass --subset"));
                    }
                    (0u32..(1 << fd.n()))
                        .map(|mask| {
                            (1..=fd.n())
                                .filter(|i| mask & (1 << (i - 1)) != 0)
                                .collect()
                        })
                        .collect()
                }
            };
            let f = fd.product_of(&(1..=fd.n()).collect::<Vec<_>>())?;
            let mut reports = Vec::new();
            let mut all_ok = true;
            for subset in subsets {
                let (a, b) = mf_pair(&fd, &subset)?;
                let ok = canmma::verify_mf(&a, &b, &f);
                all_ok &= ok;
                reports.push(MfReport {
                    subset,
                    a: a.entries
                        .iter()
                        .map(|row| row.iter().map(|p| p.to_string()).collect())
                        .collect(),
                    b: b.entries
                        .iter()
                        .map(|row| row.iter().map(|p| p.to_string()).collect())
                        .collect(),
                    ok,
                });
            }
            match format {
                Format::Json => emit_json(&reports)?,
                _ => {
                    for r in &reports {
                        println!(
                            "subset {:?}: {}",
                            r.subset,
                            if r.ok { "ok" } else { "FAIL" }
                        );
                    }
                }
            }
            if !all_ok {
                return Err(domain("matrix factorization verification failed"));
            }
        }
        Command::DerivedEquiv {
            file,
            flag,
            flag2,
            format,
        } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let f = parse_flag_arg(&flag, fd.n())?;
            let g = parse_flag_arg(&flag2, fd.n())?;
            let report = derived_equiv_diagnostic(&fd, &f, &g)?;
            match format {
                Format::Json => emit_json(&report)?,
                _ => {
                    println!("derived equivalent (sufficient): {}", report.equivalent);
                    if !report.equivalent {
                        println!(
                            "curves: {} vs {}",
                            report.curves_first, report.curves_second
                        );
                        for c in &report.only_in_first {
                            println!("only in first: {c}");
                        }
                        for c in &report.only_in_second {
                            println!("only in second: {c}");
                        }
                    }
                }
            }
        }
        Command::Count { file, format } => {
            reject_dot(format)?;
            let fd = load_factor_data(&file)?;
            let formula = count_mm(&fd);
            let enumerated = build_exchange_graph_with_threads(&fd, thread_hint()).vertex_count();
            let ok = formula == enumerated.into();
            let report = CountReport {
                formula: formula.to_string(),
                enumerated,
                morita_classes: morita_class_count(&fd).to_string(),
                ok,
            };
            match format {
                Format::Json => emit_json(&report)?,
                _ => println!(
                    "formula: {}, enumerated: {}, morita classes: {}",
                    report.formula, report.enumerated, report.morita_classes
                ),
            }
            if !ok {
                return Err(domain("formula and enumeration disagree"));
            }
        }
    }
    Ok(())
}

fn emit_graph(graph: &LabeledGraph, format: Format) -> CliResult<()> {
    match format {
        Format::Json => emit_json(graph)?,
        Format::Dot => print!("{}", to_dot(graph)),
        Format::Text => {
            println!(
                "{} vertices, {} edges, {} loops",
                graph.vertex_count(),
                graph.edge_count(),
                graph.loop_count()
            );
            for (v, i) in &graph.loops {
                println!("  {v} -- {v}  [{i}]");
            }
            for (v, w, i) in &graph.edges {
                println!("  {v} -- {w}  [{i}]");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            match failure {
                Failure::Domain(_) => ExitCode::from(1),
                Failure::Usage(_) => ExitCode::from(2),
            }
        }
    }
}
