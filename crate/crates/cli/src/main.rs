use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use defectbench::experiment::{compare, run_experiment, CompareOptions, ExperimentConfig, THREADS_ENV};
use defectbench::report::{cd_line, comparison_files, friedman_line, rank_table_markdown, write_files, Provenance};
use defectbench::seed::DERIVATION;
use defectbench::stats::{
    average_ranks, critical_distance, friedman_test, ingest_metric_matrix, nemenyi_q, MetricKind, MetricMatrix,
    RankTable, RopeBounds,
};
use defectbench::Error;

#[derive(Parser, Debug)]
#[command(name = "defectbench", version, about = "Benchmark and compare software defect classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a nested cross-validation experiment and persist its result store
    Run {
        config: PathBuf,
        /// Store directory
        #[arg(long, default_value = "defectbench-store")]
        out: PathBuf,
        /// Replace an existing store directory
        #[arg(long)]
        force: bool,
    },
    /// Validate a classifier x dataset table and write it in canonical form
    Ingest {
        table: PathBuf,
        #[arg(long)]
        metric: MetricKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Print average ranks
    Ranks(MatrixArgs),
    /// Print the Friedman test for each table
    Friedman(MatrixArgs),
    /// Print the Nemenyi critical distance
    Cd {
        /// Table to size k and N from
        matrix: Option<PathBuf>,
        #[arg(long, requires = "n", conflicts_with = "matrix")]
        k: Option<usize>,
        #[arg(long, requires = "k", conflicts_with = "matrix")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Ranks, Friedman, Nemenyi and Bayesian pairwise comparisons
    Compare {
        #[command(flatten)]
        matrices: MatrixArgs,
        #[command(flatten)]
        opts: CompareFlags,
    },
    /// Compare the aggregated matrices of a result store
    Report {
        store: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
        #[command(flatten)]
        opts: CompareFlags,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Classifier x dataset CSV tables
    #[arg(required = true)]
    matrices: Vec<PathBuf>,
    /// One metric for all tables, or one per table
    #[arg(long, value_delimiter = ',', required = true)]
    metric: Vec<MetricKind>,
    /// Restrict to these classifiers
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct CompareFlags {
    /// Region of practical equivalence as lo,hi (default per metric)
    #[arg(long, allow_hyphen_values = true)]
    rope: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Monte Carlo draws per Bayesian comparison
    #[arg(long, default_value_t = 50_000)]
    mc: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report directory
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

/// Error carrying the process exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::Clobber(_)) => 3,
            Some(Error::IncompleteStore(_)) => 1,
            _ => 2,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { config, out, force } => cmd_run(&config, &out, force),
        Command::Ingest {
            table,
            metric,
            out,
            force,
        } => {
            let m = ingest_metric_matrix(&table, metric)?;
            if out.exists() && !force {
                return Err(Error::Clobber(out).into());
            }
            fs::write(&out, m.to_csv()).map_err(|e| Error::io(&out, e))?;
            println!("{}: {} classifiers x {} datasets ({})", out.display(), m.k(), m.n(), metric);
            Ok(())
        }
        Command::Ranks(args) => {
            let inputs = load_inputs(&args)?;
            let ranks: Vec<(String, RankTable)> = inputs
                .iter()
                .map(|(label, m, _)| Ok((label.clone(), average_ranks(&checked(m)?))))
                .collect::<Result<_, Failure>>()?;
            let tables: Vec<(&str, &RankTable)> = ranks.iter().map(|(l, r)| (l.as_str(), r)).collect();
            print!("{}", rank_table_markdown(&tables));
            Ok(())
        }
        Command::Friedman(args) => {
            for (label, m, _) in load_inputs(&args)? {
                let m = checked(&m)?;
                println!("{label} (k={}, N={}): {}", m.k(), m.n(), friedman_line(&friedman_test(&m)?));
            }
            Ok(())
        }
        Command::Cd {
            matrix,
            k,
            n,
            subset,
            alpha,
        } => {
            let (k, n) = match (matrix, k, n) {
                (Some(path), _, _) => {
                    // the metric is irrelevant to the table's shape
                    let m = ingest_metric_matrix(&path, MetricKind::Auc)?;
                    let m = match &subset {
                        Some(s) => m.subset(s)?,
                        None => m,
                    };
                    (m.k(), m.n())
                }
                (None, Some(k), Some(n)) => (k, n),
                _ => return Err(anyhow!("give a table or both --k and --n").into()),
            };
            let q = nemenyi_q(k, alpha)?;
            println!("{} (q={q}, alpha={alpha})", cd_line(k, n, critical_distance(k, n, q)));
            Ok(())
        }
        Command::Compare { matrices, opts } => {
            let inputs = load_inputs(&matrices)?;
            let subset = matrices.subset.clone();
            cmd_compare(inputs, subset, &opts)
        }
        Command::Report { store, subset, opts } => {
            let cfg = ExperimentConfig::load(&store.join("config.toml"))
                .with_context(|| format!("reading result store {}", store.display()))?;
            let mut inputs = Vec::new();
            for &metric in &cfg.metrics {
                let path = store.join(format!("matrix_{metric}.csv"));
                if !path.exists() {
                    return Err(Error::IncompleteStore(format!(
                        "{} has no aggregated {metric} matrix; the run had failed tasks",
                        store.display()
                    ))
                    .into());
                }
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let m = defectbench::stats::parse_metric_matrix(&text, metric)?;
                let m = match &subset {
                    Some(s) => m.subset(s)?,
                    None => m,
                };
                inputs.push((metric.to_string(), m, text));
            }
            cmd_compare(inputs, subset, &opts)
        }
    }
}

fn checked(m: &MetricMatrix) -> Result<MetricMatrix, Failure> {
    m.check_comparable()?;
    Ok(m.clone())
}

/// `(label, matrix, raw text)` per input, subset applied.
fn load_inputs(args: &MatrixArgs) -> Result<Vec<(String, MetricMatrix, String)>, Failure> {
    let metrics: Vec<MetricKind> = match args.metric.len() {
        1 => vec![args.metric[0]; args.matrices.len()],
        n if n == args.matrices.len() => args.metric.clone(),
        n => {
            return Err(anyhow!("{n} metrics given for {} tables", args.matrices.len()).into());
        }
    };
    let mut labels = HashSet::new();
    let mut out = Vec::new();
    for (path, metric) in args.matrices.iter().zip(metrics) {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        if !labels.insert(label.clone()) {
            return Err(anyhow!("two inputs share the name '{label}'").into());
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m = defectbench::stats::parse_metric_matrix(&text, metric)
            .with_context(|| format!("reading {}", path.display()))?;
        let m = match &args.subset {
            Some(s) => m.subset(s)?,
            None => m,
        };
        out.push((label, m, text));
    }
    Ok(out)
}

fn parse_rope(s: &str) -> Result<RopeBounds, Failure> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("--rope expects lo,hi, got '{s}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| anyhow!("--rope: '{v}' is not a number"))
    };
    Ok(RopeBounds::new(parse(lo)?, parse(hi)?)?)
}

fn cmd_compare(
    inputs: Vec<(String, MetricMatrix, String)>,
    subset: Option<Vec<String>>,
    flags: &CompareFlags,
) -> Result<(), Failure> {
    if let Some((first, rest)) = inputs.split_first() {
        let names: HashSet<&String> = first.1.classifiers.iter().collect();
        for (label, m, _) in rest {
            if m.classifiers.iter().collect::<HashSet<_>>() != names {
                return Err(anyhow!(
                    "mismatched matrices: '{label}' and '{}' list different classifiers",
                    first.0
                )
                .into());
            }
        }
    }
    let rope = flags.rope.as_deref().map(parse_rope).transpose()?;
    let opts = CompareOptions {
        subset: None,
        rope,
        alpha: flags.alpha,
        mc_samples: flags.mc,
        seed: flags.seed,
    };
    let mut comparisons = Vec::new();
    for (label, m, _) in &inputs {
        comparisons.push(compare(label, m, &opts).with_context(|| format!("comparing {label}"))?);
    }
    let mut config_text = String::new();
    for (label, m, text) in &inputs {
        config_text.push_str(&format!("[{label} {}]\n{text}\n", m.metric));
    }
    config_text.push_str(&format!(
        "subset={:?} rope={:?} alpha={} mc={} seed={}\n",
        subset, flags.rope, flags.alpha, flags.mc, flags.seed
    ));
    let prov = Provenance::new(
        &config_text,
        vec![("seed".to_string(), flags.seed)],
        inputs.iter().map(|(l, m, _)| format!("{l} ({})", m.metric)).collect(),
    );
    let files = comparison_files(&comparisons, &prov);
    write_files(&flags.out, &files, flags.force)?;
    for c in &comparisons {
        println!("{}: {}", c.label, cd_line(c.matrix.k(), c.matrix.n(), c.cd));
    }
    println!("report written to {}", flags.out.display());
    Ok(())
}

fn cmd_run(config: &Path, out: &Path, force: bool) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(config)?;
    if out.exists() && !force && fs::read_dir(out).map(|mut d| d.next().is_some()).unwrap_or(false) {
        return Err(Error::Clobber(out.to_path_buf()).into());
    }
    println!("master_seed={} config_hash={:016x}", cfg.master_seed, cfg.hash());
    println!("seed derivation: {DERIVATION}");
    if let Ok(t) = std::env::var(THREADS_ENV) {
        println!("{THREADS_ENV}={t}");
    }
    let store = run_experiment(&cfg)?;
    store.write_dir(out, force)?;
    let failures = store.failures();
    println!(
        "{} task(s), {} failed; store written to {}",
        store.records.len(),
        failures.len(),
        out.display()
    );
    if failures.is_empty() {
        return Ok(());
    }
    for r in &failures {
        eprintln!(
            "failed: {}/{}/fold {}: {}",
            r.dataset,
            r.classifier,
            r.fold,
            r.outcome.as_ref().err().map(String::as_str).unwrap_or("")
        );
    }
    Err(Failure {
        code: 1,
        error: anyhow!("{} task(s) failed; the store is not publishable", failures.len()),
    })
}
