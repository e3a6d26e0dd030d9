//! Command-line front end: construct, verify, transform, correlate, render,
//! enumerate, orbit and compare periodic Costas arrays.

use clap::{Arg, ArgAction, ArgMatches, Command};
use mpca::compare::characterize;
use mpca::enumerator::{enumerate, enumerate_task_with_ticker, list_tasks, SearchConfig};
use mpca::symmetry::{
    apply_add, apply_linear, apply_mul, apply_translate, orbit_closure, GeneratorFamily, LinearMap,
};
use mpca::welch::{construct_welch, find_reference_parameters};
use mpca::{FieldSpec, FieldTable, GroupSpec, PeriodicArray};
use rayon::prelude::*;
use std::collections::HashMap;
use std::error::Error;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

/// Orders at or above this need --force for exhaustive work.
const FORCE_ORDER: usize = 13;
/// Node interval between PROGRESS lines in a checkpoint file.
const PROGRESS_TICK: u64 = 20_000_000;

type CliResult<T> = Result<T, Box<dyn Error>>;

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn cli() -> Command {
    let group = Arg::new("group")
        .long("group")
        .value_name("N1,N2,...")
        .required(true)
        .help("Cyclic factor orders of the grid group");
    Command::new("mpca")
        .about("Multidimensional periodic Costas arrays over finite abelian groups")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("construct")
                .about("Build a generalized Welch array over (Z_p)^m")
                .arg(group.clone())
                .arg(
                    Arg::new("poly")
                        .long("poly")
                        .value_name("C0,C1,...|auto")
                        .default_value("auto")
                        .help("Primitive polynomial low coefficients, or auto for the smallest"),
                )
                .arg(
                    Arg::new("logbase")
                        .long("logbase")
                        .value_name("E")
                        .default_value("1")
                        .help("Log base exponent e, gcd(e, p^m-1) = 1"),
                )
                .arg(Arg::new("out").long("out").value_name("FILE"))
                .arg(
                    Arg::new("match-paper")
                        .long("match-paper")
                        .action(ArgAction::SetTrue)
                        .help("Search all (polynomial, logbase) pairs reproducing the bundled 5x5 reference array"),
                ),
        )
        .subcommand(
            Command::new("verify")
                .about("Check the distinct difference property of an array file")
                .arg(Arg::new("file").value_name("FILE").required(true)),
        )
        .subcommand(
            Command::new("apply")
                .about("Apply symmetry operations left to right and re-verify")
                .arg(Arg::new("file").value_name("FILE").required(true))
                .arg(Arg::new("add").long("add").value_name("S").action(ArgAction::Append))
                .arg(Arg::new("mul").long("mul").value_name("K").action(ArgAction::Append))
                .arg(
                    Arg::new("linear")
                        .long("linear")
                        .value_name("R00,R01;R10,R11")
                        .action(ArgAction::Append)
                        .help("Row-major matrix over Z_p mapping positions a to La"),
                )
                .arg(
                    Arg::new("translate")
                        .long("translate")
                        .value_name("C1,C2,...")
                        .action(ArgAction::Append),
                )
                .arg(Arg::new("out").long("out").value_name("FILE"))
                .arg(Arg::new("no-verify").long("no-verify").action(ArgAction::SetTrue)),
        )
        .subcommand(
            Command::new("correlate")
                .about("Full periodic autocorrelation sweep")
                .arg(Arg::new("file").value_name("FILE").required(true)),
        )
        .subcommand(
            Command::new("render")
                .about("Print an array file; --2d pretty-prints rank-2 grids bottom-up")
                .arg(Arg::new("file").value_name("FILE").required(true))
                .arg(Arg::new("2d").long("2d").action(ArgAction::SetTrue)),
        )
        .subcommand(
            Command::new("enumerate")
                .about("Exhaustively enumerate all generic arrays over a group")
                .arg(group.clone())
                .arg(Arg::new("anchor").long("anchor").value_name("V").default_value("0"))
                .arg(Arg::new("count-only").long("count-only").action(ArgAction::SetTrue))
                .arg(
                    Arg::new("split-depth")
                        .long("split-depth")
                        .value_name("D")
                        .default_value("0")
                        .help("Split the search into tasks by prefixes of D free positions"),
                )
                .arg(
                    Arg::new("task")
                        .long("task")
                        .value_name("T")
                        .help("Run a single task instead of all of them"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_name("DIR")
                        .conflicts_with("count-only")
                        .help("Write each array to DIR under its content hash"),
                )
                .arg(
                    Arg::new("checkpoint")
                        .long("checkpoint")
                        .value_name("FILE")
                        .conflicts_with("task")
                        .help("Plain-text resume file recording finished tasks and progress"),
                )
                .arg(Arg::new("force").long("force").action(ArgAction::SetTrue)),
        )
        .subcommand(
            Command::new("orbit")
                .about("Orbit closure of seed arrays under generator families")
                .arg(
                    Arg::new("seeds")
                        .value_name("FILE")
                        .num_args(1..)
                        .required(true),
                )
                .arg(
                    Arg::new("gens")
                        .long("gens")
                        .value_name("FAMILIES")
                        .default_value("add,mul,g1,g2")
                        .help("Comma-separated families among add, mul, g1, g2; or none"),
                )
                .arg(
                    Arg::new("include-translations")
                        .long("include-translations")
                        .action(ArgAction::SetTrue),
                )
                .arg(Arg::new("out").long("out").value_name("DIR")),
        )
        .subcommand(
            Command::new("compare")
                .about("Anchored exhaustive enumeration vs orbit closure from the Welch seed")
                .arg(group)
                .arg(Arg::new("anchor").long("anchor").value_name("V").default_value("0"))
                .arg(Arg::new("force").long("force").action(ArgAction::SetTrue)),
        )
}

fn run() -> CliResult<i32> {
    let matches = cli().get_matches();
    match matches.subcommand() {
        Some(("construct", m)) => cmd_construct(m),
        Some(("verify", m)) => cmd_verify(m),
        Some(("apply", m)) => cmd_apply(m),
        Some(("correlate", m)) => cmd_correlate(m),
        Some(("render", m)) => cmd_render(m),
        Some(("enumerate", m)) => cmd_enumerate(m),
        Some(("orbit", m)) => cmd_orbit(m),
        Some(("compare", m)) => cmd_compare(m),
        _ => unreachable!("subcommand required"),
    }
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn parse_group(m: &ArgMatches) -> CliResult<GroupSpec> {
    Ok(m.get_one::<String>("group").expect("required").parse()?)
}

fn elementary_parameters(spec: &GroupSpec) -> CliResult<(u32, usize)> {
    let first = spec.factors()[0];
    if spec.factors().iter().any(|&f| f != first) {
        return Err(Box::new(mpca::Error::NonElementaryGroup(spec.to_string())));
    }
    spec.elementary_prime()
        .map(|p| (p, spec.rank()))
        .ok_or_else(|| Box::new(mpca::Error::NotPrime(first as u64)) as Box<dyn Error>)
}

fn read_array(path: &str) -> CliResult<PeriodicArray> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    Ok(PeriodicArray::parse(&text).map_err(|e| format!("{path}: {e}"))?)
}

fn write_array(arr: &PeriodicArray, out: Option<&String>) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, arr.canonical_bytes()).map_err(|e| format!("cannot write {path}: {e}"))?
        }
        None => print!("{}", arr.canonical_string()),
    }
    Ok(())
}

fn write_into_dir(dir: &Path, arr: &PeriodicArray) -> Result<(), String> {
    let path = dir.join(format!("{}.mpca", arr.content_hash()));
    fs::write(&path, arr.canonical_bytes())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn parse_csv_u32(s: &str, what: &str) -> CliResult<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad {what} entry {t:?}").into())
        })
        .collect()
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MPCA_WORKERS") {
        let n: usize = v
            .parse()
            .map_err(|_| format!("MPCA_WORKERS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err("MPCA_WORKERS must be at least 1".into());
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn force_guard(spec: &GroupSpec, forced: bool, what: &str) -> CliResult<()> {
    if spec.order() >= FORCE_ORDER && !forced {
        return Err(format!(
            "{what} over {spec} (order {}) is long-running; pass --force, and consider \
             --split-depth with --checkpoint",
            spec.order()
        )
        .into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(m: &ArgMatches) -> CliResult<i32> {
    let spec = parse_group(m)?;
    if m.get_flag("match-paper") {
        if spec.factors() != [5, 5] {
            return Err("the reference array is defined over --group 5,5".into());
        }
        let matches = find_reference_parameters()?;
        for (fspec, e, _) in &matches {
            let coeffs: Vec<String> = fspec.modulus().iter().map(u32::to_string).collect();
            println!("MATCH POLY {} LOGBASE {e}", coeffs.join(","));
        }
        println!("MATCHES {}", matches.len());
        return Ok(if matches.is_empty() { 1 } else { 0 });
    }

    let (p, rank) = elementary_parameters(&spec)?;
    let poly = m.get_one::<String>("poly").expect("defaulted");
    let fspec = if poly == "auto" {
        FieldSpec::default_poly(p, rank)?
    } else {
        FieldSpec::new(p, rank, parse_csv_u32(poly, "polynomial coefficient")?)?
    };
    let logbase: u64 = m
        .get_one::<String>("logbase")
        .expect("defaulted")
        .parse()
        .map_err(|_| "bad --logbase")?;
    let arr = construct_welch(&FieldTable::build(fspec, logbase)?)?;
    debug_assert!(arr.verify());
    write_array(&arr, m.get_one::<String>("out"))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify / apply / correlate / render
// ---------------------------------------------------------------------------

fn cmd_verify(m: &ArgMatches) -> CliResult<i32> {
    let arr = read_array(m.get_one::<String>("file").expect("required"))?;
    if arr.verify() {
        println!("VERIFY PASS");
        Ok(0)
    } else {
        println!("VERIFY FAIL");
        Ok(1)
    }
}

fn cmd_apply(m: &ArgMatches) -> CliResult<i32> {
    let mut arr = read_array(m.get_one::<String>("file").expect("required"))?;

    // gather operations in command-line order
    let mut ops: Vec<(usize, &str, String)> = Vec::new();
    for kind in ["add", "mul", "linear", "translate"] {
        if let (Some(indices), Some(values)) = (m.indices_of(kind), m.get_many::<String>(kind)) {
            for (i, v) in indices.zip(values) {
                ops.push((i, kind, v.clone()));
            }
        }
    }
    ops.sort_by_key(|&(i, _, _)| i);

    for (_, kind, raw) in &ops {
        arr = match *kind {
            "add" => apply_add(&arr, raw.parse().map_err(|_| "bad --add value")?)?,
            "mul" => apply_mul(&arr, raw.parse().map_err(|_| "bad --mul value")?)?,
            "linear" => {
                let p = arr
                    .spec()
                    .elementary_prime()
                    .ok_or_else(|| mpca::Error::NonElementaryGroup(arr.spec().to_string()))?;
                let rows = raw
                    .split(';')
                    .map(|row| parse_csv_u32(row, "matrix"))
                    .collect::<CliResult<Vec<_>>>()?;
                apply_linear(&arr, &LinearMap::from_rows(p, &rows)?)?
            }
            "translate" => apply_translate(&arr, &parse_csv_u32(raw, "translation")?)?,
            _ => unreachable!(),
        };
    }

    let mut code = 0;
    if !m.get_flag("no-verify") {
        if arr.verify() {
            eprintln!("VERIFY PASS");
        } else {
            eprintln!("VERIFY FAIL");
            code = 1;
        }
    }
    write_array(&arr, m.get_one::<String>("out"))?;
    Ok(code)
}

fn cmd_correlate(m: &ArgMatches) -> CliResult<i32> {
    let arr = read_array(m.get_one::<String>("file").expect("required"))?;
    let report = arr.correlation_report();
    let coords: Vec<String> = report.worst_shift.0.iter().map(u32::to_string).collect();
    println!("PEAK {}", report.peak);
    println!("MAXOFFPEAK {}", report.max_off_peak);
    println!("WORSTSHIFT {} {}", coords.join(","), report.worst_shift.1);
    Ok(0)
}

fn cmd_render(m: &ArgMatches) -> CliResult<i32> {
    let arr = read_array(m.get_one::<String>("file").expect("required"))?;
    if m.get_flag("2d") {
        print!("{}", arr.render_2d()?);
    } else {
        print!("{}", arr.canonical_string());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

/// Plain-text resume file: a CONFIG header, one TASK line per finished task,
/// and informational PROGRESS lines.
struct Checkpoint {
    file: Mutex<fs::File>,
    done: HashMap<usize, u64>,
}

impl Checkpoint {
    fn open(path: &str, config: &str) -> CliResult<Checkpoint> {
        let mut done = HashMap::new();
        if let Ok(text) = fs::read_to_string(path) {
            let mut lines = text.lines();
            match lines.next() {
                Some(first) if first == config => {}
                Some(first) => {
                    return Err(format!(
                        "checkpoint {path} was written by a different run:\n  have {first}\n  want {config}"
                    )
                    .into())
                }
                None => {}
            }
            for line in lines {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if let ["TASK", t, "COUNT", c, "NODES", _n] = fields[..] {
                    done.insert(t.parse::<usize>()?, c.parse::<u64>()?);
                }
            }
        } else {
            fs::write(path, format!("{config}\n")).map_err(|e| format!("cannot write {path}: {e}"))?;
        }
        let file = fs::OpenOptions::new().append(true).open(path)?;
        Ok(Checkpoint {
            file: Mutex::new(file),
            done,
        })
    }

    fn append(&self, line: &str) {
        let mut file = self.file.lock().expect("checkpoint lock");
        let _ = writeln!(file, "{line}");
        let _ = file.flush();
    }
}

fn cmd_enumerate(m: &ArgMatches) -> CliResult<i32> {
    let spec = parse_group(m)?;
    force_guard(&spec, m.get_flag("force"), "exhaustive enumeration")?;
    let anchor: u32 = m
        .get_one::<String>("anchor")
        .expect("defaulted")
        .parse()
        .map_err(|_| "bad --anchor")?;
    let depth: usize = m
        .get_one::<String>("split-depth")
        .expect("defaulted")
        .parse()
        .map_err(|_| "bad --split-depth")?;
    let out_dir = match m.get_one::<String>("out") {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            fs::create_dir_all(&dir)
                .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            Some(dir)
        }
        None => None,
    };
    let base_cfg = SearchConfig::new(spec.clone())
        .with_anchor(anchor)?
        .with_split_depth(depth)?;
    let total_of = |anchored: u64| anchored * spec.modulus() as u64;

    // single-task mode
    if let Some(task) = m.get_one::<String>("task") {
        let task: usize = task.parse().map_err(|_| "bad --task")?;
        let cfg = base_cfg.with_task(task);
        let mut sink_err = None;
        let stats = enumerate_task_with_ticker(
            &cfg,
            |arr| {
                if let (Some(dir), None) = (&out_dir, &sink_err) {
                    sink_err = write_into_dir(dir, &arr).err();
                }
            },
            0,
            |_| {},
        )?;
        if let Some(e) = sink_err {
            return Err(e.into());
        }
        println!("COUNT {} {}", stats.emitted, total_of(stats.emitted));
        return Ok(0);
    }

    // full run, optionally split into tasks and checkpointed
    let checkpoint = match m.get_one::<String>("checkpoint") {
        Some(path) => {
            let config = format!(
                "CONFIG GROUP {} ANCHOR {anchor} DEPTH {depth}",
                spec.display_compact()
            );
            Some(Checkpoint::open(path, &config)?)
        }
        None => None,
    };

    if depth == 0 && checkpoint.is_none() {
        let mut sink_err = None;
        let stats = enumerate(&base_cfg, |arr| {
            if let (Some(dir), None) = (&out_dir, &sink_err) {
                sink_err = write_into_dir(dir, &arr).err();
            }
        })?;
        if let Some(e) = sink_err {
            return Err(e.into());
        }
        println!("COUNT {} {}", stats.emitted, total_of(stats.emitted));
        return Ok(0);
    }

    let tasks = list_tasks(&spec, anchor, depth)?;
    eprintln!("TASKS {}", tasks.len());
    let pool = thread_pool()?;
    let results: Vec<Result<u64, String>> = pool.install(|| {
        (0..tasks.len())
            .into_par_iter()
            .map(|t| -> Result<u64, String> {
                if let Some(cp) = &checkpoint {
                    if let Some(&count) = cp.done.get(&t) {
                        return Ok(count);
                    }
                }
                let cfg = base_cfg.clone().with_task(t);
                let mut sink_err = None;
                let stats = enumerate_task_with_ticker(
                    &cfg,
                    |arr| {
                        if let (Some(dir), None) = (&out_dir, &sink_err) {
                            sink_err = write_into_dir(dir, &arr).err();
                        }
                    },
                    if checkpoint.is_some() { PROGRESS_TICK } else { 0 },
                    |nodes| {
                        if let Some(cp) = &checkpoint {
                            cp.append(&format!("PROGRESS TASK {t} NODES {nodes}"));
                        }
                    },
                )
                .map_err(|e| e.to_string())?;
                if let Some(e) = sink_err {
                    return Err(e.to_string());
                }
                if let Some(cp) = &checkpoint {
                    cp.append(&format!(
                        "TASK {t} COUNT {} NODES {}",
                        stats.emitted, stats.nodes
                    ));
                }
                Ok(stats.emitted)
            })
            .collect()
    });
    let mut anchored = 0u64;
    for r in results {
        anchored += r?;
    }
    println!("COUNT {anchored} {}", total_of(anchored));
    Ok(0)
}

// ---------------------------------------------------------------------------
// orbit / compare
// ---------------------------------------------------------------------------

fn cmd_orbit(m: &ArgMatches) -> CliResult<i32> {
    let seeds = m
        .get_many::<String>("seeds")
        .expect("required")
        .map(|p| read_array(p))
        .collect::<CliResult<Vec<_>>>()?;
    let gens_raw = m.get_one::<String>("gens").expect("defaulted");
    let families: Vec<GeneratorFamily> = if gens_raw == "none" {
        Vec::new()
    } else {
        gens_raw
            .split(',')
            .map(|t| t.parse())
            .collect::<mpca::Result<_>>()?
    };
    let closure = orbit_closure(&seeds, &families, m.get_flag("include-translations"))?;
    if let Some(dir) = m.get_one::<String>("out") {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        for bytes in &closure {
            write_into_dir(&dir, &PeriodicArray::parse_bytes(bytes)?)?;
        }
    }
    println!("ORBIT {}", closure.len());
    Ok(0)
}

fn cmd_compare(m: &ArgMatches) -> CliResult<i32> {
    let spec = parse_group(m)?;
    force_guard(&spec, m.get_flag("force"), "characterization")?;
    let anchor: u32 = m
        .get_one::<String>("anchor")
        .expect("defaulted")
        .parse()
        .map_err(|_| "bad --anchor")?;
    let report = characterize(&spec, anchor)?;
    println!("ENUMERATED {}", report.enumerated.len());
    println!("CLOSURE {}", report.closure_slice.len());
    if report.equal() {
        println!("EQUAL SYMDIFF 0");
        Ok(0)
    } else {
        println!("UNEQUAL SYMDIFF {}", report.symmetric_difference_size());
        Ok(1)
    }
}
