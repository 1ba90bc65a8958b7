use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trine::bundle::{write_bundle, BundleOptions};
use trine::config::{thread_count, Cond1, Config, Level};
use trine::formats::graph::parse_graph;
use trine::formats::report::{grid_csv, ipf_report_json, verdict_json};
use trine::formats::rtfile::{parse_table, write_table};
use trine::formats::steptable::parse_step_table;
use trine::formats::summary::{coincidence_csv, csv_label, integral_csv, scounts_csv};
use trine::formats::trace::{run_json, trace_csv};
use trine::formats::{read_text, write_text};
use trine::search::{classify_mask_par, grid, pool};
use trine::{Error, Result};
use trine_core::ac23::{Mask, MaskStatus};
use trine_core::dynamics::{run_to_mirror, Automaton};
use trine_core::ipf::{check_ipf, IpfError};
use trine_core::rt::{self, ExtractOptions, ExtractionHypothesis, ResolutionTable, RtValue};
use trine_core::{Coloring, RunRecord};

/// Exit codes: 0 success, 1 error, 2 a checked mask is Incorrect.
#[derive(Parser)]
#[command(name = "trine", version, about = "Three-color reversible automaton workbench")]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Settings {
    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    lmin: Option<usize>,
    #[arg(long, global = true)]
    lmax: Option<usize>,
    /// Lengths up to this are searched exhaustively.
    #[arg(long, global = true)]
    exhaustive_cutoff: Option<usize>,
    /// Sampled starts per length above the cutoff.
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true, value_enum)]
    level: Option<LevelArg>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Worker threads (0: one per core). TRINE_THREADS overrides.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reading of condition [1].
    #[arg(long, global = true, value_enum)]
    cond1: Option<Cond1Arg>,
    /// Origin of C times for condition [8] (0 or 1).
    #[arg(long, global = true)]
    time_origin: Option<u8>,
    /// Stop after this many start pairs per mask.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum LevelArg {
    Light,
    Full,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Cond1Arg {
    Raw,
    Complemented,
}

impl Settings {
    fn resolve(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        macro_rules! set {
            ($($field:ident = $value:expr),* $(,)?) => {
                $(if let Some(v) = $value { c.$field = v; })*
            };
        }
        set! {
            seed = self.seed,
            lmin = self.lmin,
            lmax = self.lmax,
            exhaustive_cutoff = self.exhaustive_cutoff,
            samples_per_len = self.samples,
            max_steps = self.max_steps,
            threads = self.threads,
            time_origin = self.time_origin,
        }
        if let Some(b) = self.budget {
            c.budget = Some(b);
        }
        if let Some(l) = self.level {
            c.check_level = match l {
                LevelArg::Light => Level::Light,
                LevelArg::Full => Level::Full,
            };
        }
        if let Some(r) = self.cond1 {
            c.cond1_interpretation = match r {
                Cond1Arg::Raw => Cond1::Raw,
                Cond1Arg::Complemented => Cond1::Complemented,
            };
        }
        c.threads = thread_count(c.threads)?;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a start coloring and its complement to the Mirror Point and check
    /// the invariant.
    Trace(TraceArgs),
    /// Classify one mask over the configured lengths.
    CheckMask {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        /// Write the verdict as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every odd mask with n, m ≤ max.
    Grid {
        #[arg(long)]
        max: u64,
        /// Grid CSV; printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append finished cells here and reuse them on the next run.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Resolution-table tools.
    #[command(subcommand)]
    Rt(RtCommand),
    /// Write every artifact of the configuration with a manifest.
    Bundle {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        grid_max: u64,
        #[arg(long, default_value_t = 8)]
        rt_lmax: usize,
        #[arg(long, default_value_t = 3)]
        rt_kmax: u32,
        /// Step table for the induction tables; none are built without it.
        #[arg(long)]
        step_table: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TraceArgs {
    /// Mask as `n,m`.
    #[arg(long, value_parser = parse_mask, conflicts_with = "graph", required_unless_present = "graph")]
    mask: Option<Mask>,
    /// Ring length for `--mask`; defaults to the length of the start.
    #[arg(long = "L", alias = "len")]
    len: Option<usize>,
    /// Graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Start coloring over A and B.
    #[arg(long)]
    start: String,
    /// Directory for the trace CSV/JSON files and the invariant report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RtCommand {
    /// Rows from every passing start pair of a mask (experimental).
    Extract {
        #[arg(long, value_parser = parse_mask)]
        mask: Mask,
        /// Largest ring length; all starts of each length are used.
        #[arg(long = "max-len", default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value = "phase-diff-v1")]
        hypothesis: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the six subtables.
    Expand { table: PathBuf },
    /// Size, value-set class and kind of each table.
    Classify { tables: Vec<PathBuf> },
    /// Value counts per table as CSV.
    Scounts {
        tables: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mirror a table into the table layout of the reflected mask.
    Reflect {
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether the first table includes the second.
    Includes { a: PathBuf, b: PathBuf },
    /// Check pairwise compatibility and fold the union.
    Integral {
        tables: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fold steps as CSV.
        #[arg(long)]
        steps: Option<PathBuf>,
    },
    /// Coincidence matrix as CSV.
    Coincide {
        tables: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table of mask (1, 2^k − 1) by induction.
    #[command(name = "build-1-2k1")]
    Build {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        step_table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_mask(s: &str) -> Result<Mask, String> {
    let (n, m) = s.split_once([',', '.']).ok_or("expected n,m")?;
    let n: u64 = n.trim().parse().map_err(|_| format!("bad n {n:?}"))?;
    let m: u64 = m.trim().parse().map_err(|_| format!("bad m {m:?}"))?;
    Mask::try_new(n, m).ok_or_else(|| "n and m must be positive".to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_table(p: &Path) -> Result<ResolutionTable> {
    parse_table(&read_text(p)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", p.display()) },
        other => other,
    })
}

fn load_tables(paths: &[PathBuf]) -> Result<Vec<ResolutionTable>> {
    if paths.is_empty() {
        return Err(Error::Config("no table files given".into()));
    }
    paths.iter().map(|p| load_table(p)).collect()
}

fn table_label(p: &Path, t: &ResolutionTable) -> String {
    match t.mask {
        Some(m) => format!("[{},{}]", m.n, m.m),
        None => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
    }
}

fn print_run(name: &str, run: &RunRecord) {
    let s = &run.summary;
    println!("{name}: start {} T={} mirror {}", s.start_ab, s.period, s.mirror_state);
    match s.uniform_lambda() {
        Some(l) => println!("  lambda {l} at every node"),
        None => println!("  lambda per node {:?}", s.lambdas().iter().map(|l| l.0).collect::<Vec<_>>()),
    }
}

fn trace<A: Automaton>(aut: &A, args: &TraceArgs, config: &Config) -> Result<ExitCode> {
    let start: Coloring = args.start.parse()?;
    let comp = start.complement();
    let run = run_to_mirror(aut, &start, config.max_steps)?;
    let bar = run_to_mirror(aut, &comp, config.max_steps)?;
    print_run("run", &run);
    print_run("complement", &bar);
    if let Some(dir) = &args.out {
        write_text(&dir.join("trace.csv"), &trace_csv(&run)?)?;
        write_text(&dir.join("trace.json"), &run_json(&run))?;
        write_text(&dir.join("complement.csv"), &trace_csv(&bar)?)?;
        write_text(&dir.join("complement.json"), &run_json(&bar))?;
    }
    match check_ipf(&run, &bar, &config.ipf()) {
        Ok(report) => {
            let level = config.level();
            match report.first_failure(level) {
                None => println!("invariant holds (T={}, Tbar={}, K={})", report.t, report.t_bar, report.k),
                Some(c) => println!("invariant fails at {} (T={}, Tbar={})", c.name(), report.t, report.t_bar),
            }
            if let Some(dir) = &args.out {
                write_text(&dir.join("ipf.json"), &ipf_report_json(&report))?;
            } else {
                print!("{}", ipf_report_json(&report));
            }
        }
        Err(IpfError::DegenerateRun { period, complement_period }) => {
            println!("degenerate pair (T={period}, Tbar={complement_period}): the invariant does not apply");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(ExitCode::SUCCESS)
}

fn rt_command(cmd: RtCommand, config: &Config) -> Result<ExitCode> {
    match cmd {
        RtCommand::Extract { mask, max_len, hypothesis, out } => {
            let hypothesis = ExtractionHypothesis::from_id(&hypothesis)
                .ok_or_else(|| Error::Config(format!("unknown hypothesis {hypothesis:?}")))?;
            let opts = ExtractOptions { hypothesis, level: config.level(), ipf: config.ipf() };
            let mut pairs = Vec::new();
            let mut skipped = 0;
            for len in config.lmin..=max_len {
                let ring = mask.ring(len);
                let full = ring.full_mask();
                for bits in 0..=full {
                    let a = run_to_mirror(&ring, &Coloring::from_ab_bits(len, bits), config.max_steps)?;
                    let b = run_to_mirror(&ring, &Coloring::from_ab_bits(len, !bits & full), config.max_steps)?;
                    match check_ipf(&a, &b, &opts.ipf) {
                        Ok(r) if r.passes(opts.level) && r.slot_mismatches.is_empty() => pairs.push((a, b)),
                        _ => skipped += 1,
                    }
                }
            }
            let t = rt::extract_rows(&mask, &pairs, &opts)?;
            eprintln!("{} pairs used, {skipped} skipped, C_R = {}", pairs.len(), t.row_count());
            emit(out.as_deref(), &write_table(&t))?;
        }
        RtCommand::Expand { table } => {
            let t = load_table(&table)?;
            for (v, sub) in RtValue::ALL.iter().zip(t.expand_subtables()) {
                println!("subtable={v} rows={}", sub.row_count());
                for row in sub.rows() {
                    println!("{row}");
                }
            }
        }
        RtCommand::Classify { tables } => {
            for (p, t) in tables.iter().zip(load_tables(&tables)?) {
                println!(
                    "{} N={} C_R={} class={:?} kind={:?}",
                    table_label(p, &t),
                    t.width(),
                    t.row_count(),
                    t.classify(),
                    t.kind()
                );
            }
        }
        RtCommand::Scounts { tables, out } => {
            let labelled: Vec<_> = tables.iter().zip(load_tables(&tables)?).map(|(p, t)| (table_label(p, &t), t)).collect();
            emit(out.as_deref(), &scounts_csv(&labelled)?)?;
        }
        RtCommand::Intersect { a, b, out } => {
            emit(out.as_deref(), &write_table(&rt::intersect(&load_table(&a)?, &load_table(&b)?)?))?;
        }
        RtCommand::Union { a, b, out } => {
            emit(out.as_deref(), &write_table(&rt::union(&load_table(&a)?, &load_table(&b)?)?))?;
        }
        RtCommand::Reflect { table, out } => {
            emit(out.as_deref(), &write_table(&load_table(&table)?.reflect()?))?;
        }
        RtCommand::Includes { a, b } => {
            println!("{}", rt::includes(&load_table(&a)?, &load_table(&b)?)?);
        }
        RtCommand::Integral { tables, out, steps } => {
            let integral = rt::compatibility(&load_tables(&tables)?)?;
            if let Some(p) = steps {
                write_text(&p, &integral_csv(&integral)?)?;
            }
            eprintln!("integral C_R = {}", integral.table.row_count());
            emit(out.as_deref(), &write_table(&integral.table))?;
        }
        RtCommand::Coincide { tables, out } => {
            let loaded = load_tables(&tables)?;
            let mut m = rt::coincidence_matrix(&loaded)?;
            m.labels = tables.iter().zip(&loaded).map(|(p, t)| csv_label(&table_label(p, t))).collect();
            emit(out.as_deref(), &coincidence_csv(&m)?)?;
        }
        RtCommand::Build { k, step_table, out } => {
            let step = match step_table {
                Some(p) => Some(parse_step_table(&read_text(&p)?)?),
                None => None,
            };
            let t = rt::build_1_2k1(k, step.as_ref())?;
            emit(out.as_deref(), &write_table(&t))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = cli.settings.resolve()?;
    let threads = pool(config.threads)?;
    match cli.command {
        Command::Trace(args) => match (&args.mask, &args.graph) {
            (Some(mask), _) => {
                let len = args.len.unwrap_or(args.start.chars().count());
                if len != args.start.chars().count() {
                    return Err(Error::Config(format!("start has {} nodes, --L is {len}", args.start.chars().count())));
                }
                if !(3..=trine_core::ring::MAX_RING_LEN).contains(&len) {
                    return Err(Error::Config(format!("ring length must lie in 3..=64, got {len}")));
                }
                trace(&mask.ring(len), &args, &config)
            }
            (None, Some(path)) => trace(&parse_graph(&read_text(path)?)?, &args, &config),
            (None, None) => unreachable!("clap requires --mask or --graph"),
        },
        Command::CheckMask { n, m, out } => {
            let mask = Mask::try_new(n, m).ok_or_else(|| Error::Config("n and m must be positive".into()))?;
            let verdict = threads.install(|| classify_mask_par(&mask, &config.search()))?;
            let tested: u64 = verdict.tested.iter().map(|b| b.tested).sum();
            println!("{mask}: {} ({tested} start pairs checked)", verdict.status);
            if let Some(w) = &verdict.witness {
                println!("witness: L={} start {} fails {}", w.len, w.start, w.condition.name());
            }
            if verdict.budget_exhausted {
                println!("budget exhausted before the envelope was covered");
            }
            if let Some(p) = out {
                write_text(&p, &verdict_json(&verdict))?;
            }
            Ok(match verdict.status {
                MaskStatus::CorrectSoFar => ExitCode::SUCCESS,
                MaskStatus::Incorrect => ExitCode::from(2),
            })
        }
        Command::Grid { max, out, checkpoint } => {
            let hash = config.hash();
            let g = threads.install(|| grid(max, &config.search(), checkpoint.as_deref().map(|p| (p, hash.as_str()))))?;
            if !g.is_reflection_symmetric() {
                eprintln!("warning: asymmetric cells {:?}", g.asymmetric_cells());
            }
            emit(out.as_deref(), &grid_csv(&g)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rt(cmd) => rt_command(cmd, &config),
        Command::Bundle { out, grid_max, rt_lmax, rt_kmax, step_table } => {
            let step_table = match step_table {
                Some(p) => Some(parse_step_table(&read_text(&p)?)?),
                None => None,
            };
            let options = BundleOptions { grid_max, rt_lmax, rt_kmax, step_table };
            let manifest = threads.install(|| write_bundle(&config, &options, &out))?;
            println!("{} files, config {}", manifest.files.len(), manifest.config_hash);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
