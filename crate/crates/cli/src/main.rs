use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use fmult::checkpoint::Checkpoint;
use fmult::data::{load_dataset_dir, Dataset, Split};
use fmult::eval::{evaluate, CSV_HEADER};
use fmult::model::{sample_row, ModelFamily};
use fmult::train::{gradient_check, gradient_check_spec, train_with, TrainConfig};
use fmult::trig::TrigVariant;

/// Validation MRR is appended to the training log at this epoch interval.
const VALID_EVERY: usize = 25;

#[derive(Parser)]
#[command(name = "fmult", version, about = "Function embeddings for knowledge graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model and write a checkpoint plus a per-epoch log.
    Train(TrainArgs),
    /// Evaluate a checkpoint with filtered MRR and Hits@k.
    Eval(EvalArgs),
    /// Train polynomial models across degrees; CSV of (degree, split, mrr).
    SweepDegree(SweepArgs),
    /// Sample entity functions on a uniform grid as CSV.
    SampleFunctions(SampleArgs),
    /// Compare analytic gradients with finite differences.
    GradCheck(GradCheckArgs),
}

#[derive(Args, Clone)]
struct DatasetArgs {
    /// Dataset name under the data root, or a directory with train/valid/test files.
    #[arg(long)]
    dataset: String,
    /// Directory holding named datasets.
    #[arg(long, env = "FMULT_DATA_ROOT", default_value = "data")]
    data_root: PathBuf,
}

impl DatasetArgs {
    fn dir(&self) -> PathBuf {
        let direct = Path::new(&self.dataset);
        if direct.is_dir() {
            direct.to_path_buf()
        } else {
            self.data_root.join(&self.dataset)
        }
    }

    fn name(&self) -> String {
        let dir = self.dir();
        dir.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.dataset.clone())
    }

    fn load(&self) -> Result<Dataset> {
        let dir = self.dir();
        ensure!(dir.is_dir(), "dataset directory {} does not exist", dir.display());
        Ok(load_dataset_dir(&dir)?)
    }
}

/// Hyperparameter flags; unset flags fall back to the config file, then defaults.
#[derive(Args, Clone, Default)]
struct HyperArgs {
    /// key=value file applied before flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// poly, trig, nn, distmult or complex.
    #[arg(long)]
    model: Option<ModelFamily>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    /// Integration interval as LOWER,UPPER.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[arg(long)]
    trig_variant: Option<TrigVariant>,
    #[arg(long)]
    conjugate_tail: bool,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    negative_ratio: Option<usize>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl HyperArgs {
    fn resolve(&self) -> Result<TrainConfig> {
        let mut cfg = TrainConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            cfg.apply_text(&text)
                .with_context(|| format!("in config file {}", path.display()))?;
        }
        let m = &mut cfg.model;
        if let Some(v) = self.model {
            m.family = v;
        }
        if let Some(v) = self.dim {
            m.dim = v;
        }
        if let Some(v) = self.degree {
            m.degree = v;
        }
        if let Some(v) = self.layers {
            m.layers = v;
        }
        if let Some(v) = &self.omega {
            cfg.set("omega", v)?;
        }
        if let Some(v) = self.trig_variant {
            cfg.model.trig_variant = v;
        }
        if self.conjugate_tail {
            cfg.model.conjugate_tail = true;
        }
        if let Some(v) = self.lr {
            cfg.learning_rate = v;
        }
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = self.batch_size {
            cfg.batch_size = v;
        }
        if let Some(v) = self.negative_ratio {
            cfg.negative_ratio = v;
        }
        if let Some(v) = self.l2 {
            cfg.l2_lambda = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Checkpoint path.
    #[arg(long, default_value = "model.fmck")]
    out: PathBuf,
    /// Training log path; defaults to the checkpoint path with a .log extension.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Echo log lines to stderr.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    checkpoint: PathBuf,
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value = "test", value_parser = parse_split)]
    split: Split,
    /// Append a CSV row (header written if the file is new).
    #[arg(long)]
    append: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', default_value = "1,3,7,15,31")]
    degrees: Vec<usize>,
    /// Train the degrees concurrently.
    #[arg(long)]
    parallel: bool,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    checkpoint: PathBuf,
    /// Comma-separated entity labels.
    #[arg(long, value_delimiter = ',', required = true)]
    entities: Vec<String>,
    #[arg(long, default_value_t = 100)]
    grid_points: usize,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GradCheckArgs {
    /// Family to check; all when absent.
    #[arg(long)]
    model: Option<ModelFamily>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_split(s: &str) -> Result<Split, String> {
    Split::ALL
        .into_iter()
        .find(|sp| sp.name() == s)
        .ok_or_else(|| format!("unknown split {s:?} (expected train, valid or test)"))
}

/// Writes `bytes` to `path` via a temporary file in the same directory and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let cfg = args.hyper.resolve()?;
    let dataset = args.data.load()?;
    let log_path = args.log.clone().unwrap_or_else(|| args.out.with_extension("log"));
    let mut log = String::new();
    let outcome = train_with(&cfg, &dataset, |stats, model| {
        let mut line = format!("{}\t{:.6}\t{:.3}", stats.epoch, stats.mean_loss, stats.elapsed_seconds);
        if stats.epoch % VALID_EVERY == 0 && !dataset.store.valid().is_empty() {
            if let Ok(r) = evaluate(model, &dataset.store, Split::Valid) {
                line.push_str(&format!("\t{:.6}", r.mrr));
            }
        }
        if args.verbose {
            eprintln!("{line}");
        }
        log.push_str(&line);
        log.push('\n');
    })?;
    let ck = Checkpoint::new(cfg.clone(), dataset.vocab.clone(), cfg.epochs, outcome.model)?;
    write_atomic(&args.out, &ck.to_bytes())?;
    write_atomic(&log_path, log.as_bytes())?;
    if dataset.store.valid().is_empty() {
        println!("valid_mrr=nan");
    } else {
        let r = evaluate(&ck.model, &dataset.store, Split::Valid)?;
        println!("valid_mrr={:.6}", r.mrr);
    }
    Ok(())
}

fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let file = File::open(path).with_context(|| format!("cannot open checkpoint {}", path.display()))?;
    Checkpoint::read_from(io::BufReader::new(file))
        .with_context(|| format!("cannot load checkpoint {}", path.display()))
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let ck = load_checkpoint(&args.checkpoint)?;
    let dataset = args.data.load()?;
    ck.check_vocabulary(&dataset.vocab)?;
    let report = evaluate(&ck.model, &dataset.store, args.split)?;
    let spec = &ck.config.model;
    let row = report.csv_row(
        &args.data.name(),
        spec.family.name(),
        spec.dim,
        spec.degree_or_layers(),
        ck.config.seed,
    );
    if let Some(path) = &args.append {
        let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        let mut text = String::new();
        if fresh {
            text.push_str(CSV_HEADER);
            text.push('\n');
        }
        text.push_str(&row);
        text.push('\n');
        f.write_all(text.as_bytes())?;
    }
    print!("{}", report.to_kv());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    ensure!(!args.degrees.is_empty(), "no degrees given");
    let mut base = args.hyper.clone();
    base.model = Some(ModelFamily::Poly);
    base.dim.get_or_insert(96);
    // Validate every degree before any training starts.
    let configs = args
        .degrees
        .iter()
        .map(|&d| {
            let mut h = base.clone();
            h.degree = Some(d);
            h.resolve().with_context(|| format!("degree {d}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let dataset = args.data.load()?;

    let run = |cfg: &TrainConfig| -> Result<Vec<String>> {
        let outcome = train_with(cfg, &dataset, |_, _| {})?;
        Split::ALL
            .into_iter()
            .map(|split| {
                let r = evaluate(&outcome.model, &dataset.store, split)?;
                Ok(format!("{},{},{:.6}", cfg.model.degree, split.name(), r.mrr))
            })
            .collect()
    };
    let rows: Vec<Vec<String>> = if args.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = configs.iter().map(|c| s.spawn(|| run(c))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect::<Result<_>>()
        })?
    } else {
        configs.iter().map(run).collect::<Result<_>>()?
    };
    let mut out = output(&args.out)?;
    writeln!(out, "degree,split,mrr")?;
    for row in rows.iter().flatten() {
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

fn near_misses<'a>(label: &str, known: &'a [String]) -> Vec<&'a str> {
    let mut scored: Vec<(usize, &str)> = known
        .iter()
        .map(|k| (strsim::levenshtein(label, k), k.as_str()))
        .collect();
    scored.sort();
    let limit = (label.chars().count() / 2).max(2);
    scored
        .into_iter()
        .filter(|&(d, _)| d <= limit)
        .take(3)
        .map(|(_, k)| k)
        .collect()
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    ensure!(args.grid_points >= 2, "grid_points must be at least 2, got {}", args.grid_points);
    let ck = load_checkpoint(&args.checkpoint)?;
    let mut ids = Vec::with_capacity(args.entities.len());
    for label in &args.entities {
        match ck.vocab.entity_id(label) {
            Some(id) => ids.push((label, id)),
            None => {
                let hints = near_misses(label, ck.vocab.entities());
                if hints.is_empty() {
                    bail!("unknown entity {label:?}");
                }
                bail!("unknown entity {label:?}; did you mean {}?", hints.join(", "));
            }
        }
    }
    let grid = ck.config.model.omega.grid(args.grid_points);
    let mut text = String::from("entity,component,x,value\n");
    for (label, id) in ids {
        let row = ck.model.entity(id);
        let samples: Vec<Vec<f64>> = grid.iter().map(|&x| sample_row(ck.model.scorer(), row, x)).collect();
        for c in 0..samples[0].len() {
            for (x, s) in grid.iter().zip(&samples) {
                text.push_str(&format!("{label},{c},{x},{}\n", s[c]));
            }
        }
    }
    let mut out = output(&args.out)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_grad_check(args: GradCheckArgs) -> Result<()> {
    let families = match args.model {
        Some(f) => vec![f],
        None => ModelFamily::ALL.to_vec(),
    };
    let mut failed = Vec::new();
    for family in families {
        let mut specs = vec![gradient_check_spec(family)];
        if family == ModelFamily::Trig {
            specs.push(gradient_check_spec(family).with_variant(TrigVariant::Full));
        }
        let limit = if family == ModelFamily::Neural { 1e-4 } else { 1e-6 };
        for spec in specs {
            let err = gradient_check(&spec, args.seed)?;
            let ok = err < limit;
            let name = match family {
                ModelFamily::Trig => format!("{family}-{}", spec.trig_variant),
                _ => family.to_string(),
            };
            println!("{name}\t{err:.3e}\t{}", if ok { "ok" } else { "FAIL" });
            if !ok {
                failed.push(name);
            }
        }
    }
    ensure!(failed.is_empty(), "gradient check failed for {}", failed.join(", "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::SweepDegree(a) => cmd_sweep(a),
        Command::SampleFunctions(a) => cmd_sample(a),
        Command::GradCheck(a) => cmd_grad_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
