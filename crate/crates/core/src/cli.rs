//! Command-line front end: `solve`, `study`, `constants`, `refcheck`, `tables`.
//!
//! Exit codes: 0 success, 1 error, 2 a reference comparison failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::afem::{afem_loop, records_to_csv, AfemConfig, AfemRun, RefineMode, SpaceChoice, TriangleSpace};
use crate::bench;
use crate::constants::{constants_table, table_csv, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryCondition, BoundarySpec, DomainKind};
use crate::plotdata::emit_plotdata;
use crate::reference;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "biharm", version, about = "Adaptive Argyris FEM for biharmonic eigenvalue problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One adaptive or uniform run; writes the level history as CSV.
    Solve(SolveArgs),
    /// A family of runs varying one parameter.
    Study(StudyArgs),
    /// Principal eigenvalues on the three triangles for all spaces and forms.
    Constants {
        #[arg(long)]
        max_ndof: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reruns the benchmarks and compares them with the embedded tables.
    Refcheck {
        #[arg(long)]
        benchmark: Option<String>,
        #[arg(long, default_value_t = 30_000)]
        max_ndof: usize,
    },
    /// Prints embedded reference values.
    Tables {
        #[arg(long)]
        benchmark: Option<String>,
        #[arg(long)]
        j: Option<usize>,
    },
}

/// Run flags; every one overrides the same key of `--config`.
#[derive(Debug, Args, Default, Clone)]
struct RunFlags {
    #[arg(long)]
    domain: Option<String>,
    /// `clamped`, `simply-supported`, `free`, or `outer/inner` for the hole.
    #[arg(long)]
    bc: Option<String>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    /// `adaptive` or `uniform`
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    init_red: Option<usize>,
    #[arg(long)]
    max_ndof: Option<usize>,
    #[arg(long)]
    max_levels: Option<usize>,
    #[arg(long)]
    shift: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Triangle space C, S, V or M (triangle domains only).
    #[arg(long)]
    space: Option<String>,
    /// Mass form index s.
    #[arg(long)]
    form: Option<u8>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// `key = value` file with defaults for the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Writes plot data of the history to this file.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Writes the estimator contributions of the last level to this file.
    #[arg(long)]
    estimator: Option<PathBuf>,
    /// Reference eigenvalue for plot data; defaults to the table value if known.
    #[arg(long)]
    lambda_ref: Option<f64>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Parameter and values, e.g. `theta=0.1,0.3,0.5` or `init-red=0,1,2`.
    #[arg(long)]
    vary: String,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub afem: AfemConfig,
    pub output: Option<PathBuf>,
}

const KEYS: [&str; 14] = [
    "domain", "bc", "j", "theta", "mode", "init-red", "max-ndof", "max-levels", "shift", "tol", "seed", "space", "form", "output",
];

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected `key = value`", n + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Parse(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad value `{v}` for {key}")))
}

pub fn parse_bc(s: &str) -> Result<BoundarySpec> {
    match s.split_once('/') {
        Some((o, i)) => Ok(BoundarySpec { outer: o.parse()?, inner: Some(i.parse::<BoundaryCondition>()?) }),
        None => Ok(BoundarySpec::uniform(s.parse()?)),
    }
}

impl RunFlags {
    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "domain" => self.domain = Some(v.into()),
            "bc" => self.bc = Some(v.into()),
            "j" => self.j = Some(parse(key, v)?),
            "theta" => self.theta = Some(parse(key, v)?),
            "mode" => self.mode = Some(v.into()),
            "init-red" => self.init_red = Some(parse(key, v)?),
            "max-ndof" => self.max_ndof = Some(parse(key, v)?),
            "max-levels" => self.max_levels = Some(parse(key, v)?),
            "shift" => self.shift = Some(parse(key, v)?),
            "tol" => self.tol = Some(parse(key, v)?),
            "seed" => self.seed = Some(parse(key, v)?),
            "space" => self.space = Some(v.into()),
            "form" => self.form = Some(parse(key, v)?),
            "output" => self.output = Some(v.into()),
            _ => return Err(Error::Parse(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Config file values under the flags given on the command line.
    fn merged(&self) -> Result<RunFlags> {
        let Some(path) = &self.config else { return Ok(self.clone()) };
        let mut base = RunFlags::default();
        for (k, v) in parse_config_text(&std::fs::read_to_string(path)?)? {
            base.set(&k, &v)?;
        }
        macro_rules! over {
            ($($f:ident),*) => { $( if self.$f.is_some() { base.$f = self.$f.clone(); } )* };
        }
        over!(domain, bc, j, theta, mode, init_red, max_ndof, max_levels, shift, tol, seed, space, form, output);
        Ok(base)
    }

    fn resolve(&self) -> Result<RunConfig> {
        let f = self.merged()?;
        let domain: DomainKind = f.domain.as_deref().unwrap_or("square").parse()?;
        let mut afem = AfemConfig::new(domain);
        if let Some(bc) = &f.bc {
            afem.spec = parse_bc(bc)?;
        }
        if let Some(space) = &f.space {
            afem.space = SpaceChoice::Triangle(space.parse::<TriangleSpace>()?);
        }
        if let Some(mode) = &f.mode {
            afem.mode = mode.parse::<RefineMode>()?;
        }
        afem.j = f.j.unwrap_or(afem.j);
        afem.theta = f.theta.unwrap_or(afem.theta);
        afem.init_red = f.init_red.unwrap_or(afem.init_red);
        afem.max_ndof = f.max_ndof.unwrap_or(afem.max_ndof);
        afem.max_levels = f.max_levels.unwrap_or(afem.max_levels);
        afem.form = f.form.unwrap_or(afem.form);
        afem.solver.shift = f.shift.unwrap_or(afem.solver.shift);
        afem.solver.tol = f.tol.unwrap_or(afem.solver.tol);
        afem.solver.seed = f.seed.unwrap_or(afem.solver.seed);
        afem.validate()?;
        Ok(RunConfig { afem, output: f.output })
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Table value of eigenvalue `j` for the configuration, if it is tabulated.
pub fn reference_for(cfg: &AfemConfig) -> Option<f64> {
    let id = match cfg.space {
        SpaceChoice::Triangle(t) => {
            let shape = crate::constants::TriangleShape::ALL.into_iter().find(|s| s.domain() == cfg.domain)?;
            return reference::value(&reference::triangle_id(shape.name(), t.code(), cfg.form), cfg.j).ok();
        }
        SpaceChoice::Boundary => {
            let bc = cfg.spec.outer;
            match (cfg.domain, bc) {
                _ if cfg.form != 0 => return None,
                (DomainKind::Square, BoundaryCondition::Clamped) => "square",
                (DomainKind::LShape, BoundaryCondition::Clamped) => "lshape",
                (DomainKind::Drum1 | DomainKind::Drum2, BoundaryCondition::SimplySupported) => "drums-ss",
                (DomainKind::Drum1, BoundaryCondition::Clamped) => "drums-clamped-left",
                (DomainKind::Drum2, BoundaryCondition::Clamped) => "drums-clamped-right",
                (DomainKind::RectHole, _) if cfg.spec == BoundarySpec::default_for(DomainKind::RectHole) => "rect-hole",
                _ => return None,
            }
        }
    };
    reference::value(id, cfg.j).ok()
}

fn solve(args: &SolveArgs) -> Result<i32> {
    let rc = args.run.resolve()?;
    let run = afem_loop(&rc.afem)?;
    write_or_print(rc.output.as_deref(), &records_to_csv(&run.records))?;
    if let Some(path) = &args.estimator {
        std::fs::write(path, run.report.to_csv())?;
    }
    if let Some(path) = &args.plot {
        let lambda_ref = args
            .lambda_ref
            .or_else(|| reference_for(&rc.afem))
            .ok_or_else(|| Error::InvalidInput("no reference eigenvalue known; pass --lambda-ref".into()))?;
        std::fs::write(path, emit_plotdata(&run.records, lambda_ref)?.text)?;
    }
    Ok(EXIT_OK)
}

/// Applies one `key=value` variation to a copy of the run flags.
fn study_configs(base: &RunFlags, vary: &str) -> Result<Vec<(String, RunConfig)>> {
    let (key, values) = vary.split_once('=').ok_or_else(|| Error::Parse(format!("--vary `{vary}`: expected key=v1,v2,...")))?;
    let key = key.trim().replace('_', "-");
    if key == "output" || key == "config" {
        return Err(Error::Parse(format!("cannot vary `{key}`")));
    }
    let base = base.merged()?;
    values
        .split(',')
        .map(|v| {
            let v = v.trim();
            let mut f = base.clone();
            f.set(&key, v)?;
            f.output = None;
            Ok((format!("{key}={v}"), f.resolve()?))
        })
        .collect()
}

fn study(args: &StudyArgs) -> Result<i32> {
    let configs = study_configs(&args.run, &args.vary)?;
    let runs: Vec<Result<AfemRun>> = configs.par_iter().map(|(_, rc)| afem_loop(&rc.afem)).collect();
    let mut summary = String::from("run,levels,ndof,lambda,eta,seconds\n");
    let mut histories = String::new();
    for ((label, _), run) in configs.iter().zip(runs) {
        let run = run?;
        let last = run.records.last().expect("a run has at least one level");
        let secs: f64 = run.records.iter().map(|r| r.seconds).sum();
        writeln!(summary, "{label},{},{},{:.17e},{:.6e},{:.3}", run.records.len(), last.ndof, last.lambda, last.eta, secs).unwrap();
        match &args.run.output {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(format!("{}.csv", label.replace('=', "-"))), records_to_csv(&run.records))?;
            }
            None => {
                writeln!(histories, "\n# {label}").unwrap();
                histories.push_str(&records_to_csv(&run.records));
            }
        }
    }
    print!("{summary}{histories}");
    Ok(EXIT_OK)
}

fn tables(benchmark: Option<&str>, j: Option<usize>) -> Result<i32> {
    match (benchmark, j) {
        (Some(id), Some(j)) => println!("{}", reference::lookup(id, j)?.text),
        (Some(id), None) => {
            for e in reference::benchmark(id)? {
                println!("{} {}", e.j, e.text);
            }
        }
        (None, Some(_)) => return Err(Error::InvalidInput("--j needs --benchmark".into())),
        (None, None) => {
            for id in reference::benchmark_ids() {
                for e in reference::benchmark(id)? {
                    println!("{id} {} {}", e.j, e.text);
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn refcheck(benchmark: Option<&str>, max_ndof: usize) -> Result<i32> {
    let checks = match benchmark {
        Some(id) => bench::run_benchmark(id, max_ndof)?,
        None => bench::refcheck(max_ndof)?,
    };
    for c in &checks {
        println!("{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("BIHARM_THREADS") {
        let n: usize = parse("BIHARM_THREADS", &v)?;
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Study(a) => study(&a),
        Command::Constants { max_ndof, output } => {
            let entries = constants_table(max_ndof.unwrap_or(DEFAULT_BUDGET))?;
            write_or_print(output.as_deref(), &table_csv(&entries))?;
            Ok(EXIT_OK)
        }
        Command::Refcheck { benchmark, max_ndof } => refcheck(benchmark.as_deref(), max_ndof),
        Command::Tables { benchmark, j } => tables(benchmark.as_deref(), j),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
