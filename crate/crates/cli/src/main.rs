//! `benchrank` — rank systems across benchmark tasks.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or validation
//! errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use benchrank::{
    load_direction_sidecar, load_instance_level, load_manifest, load_task_level, write_report,
    Dataset, DataError, Format, Report,
};
use benchrank_core::{
    evaluate_method, generate_scores, mean_instance_aggregate, run_agreement_analysis,
    run_dispersion_analysis, run_manipulation_robustness, run_scaling_robustness,
    run_subset_robustness, AggregationResult, Direction, Method, SubsetData, SyntheticConfig,
    TiePolicy,
};

#[derive(Parser)]
#[command(
    name = "benchrank",
    version,
    about = "Rank systems across benchmark tasks by aggregating per-task rankings",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed; identical seeds give byte-identical outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for report files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Report formats to write (comma-separated).
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    format: Option<Vec<Format>>,

    /// Worker threads for replicated experiments (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate a dataset under one or more methods and print the rankings
    /// side by side.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        /// Methods to run (comma-separated): mean, sigma_star, one_level,
        /// two_level.
        #[arg(long, value_delimiter = ',', default_value = "sigma_star,mean")]
        method: Vec<String>,
    },
    /// Agreement analysis between two methods on one dataset.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "sigma_star")]
        method_a: String,
        #[arg(long, default_value = "mean")]
        method_b: String,
        /// Top/last-K cutoffs (comma-separated); defaults to 1,3,5,10
        /// clipped to N.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
    },
    /// Emit a synthetic instance-level dataset and its generator config.
    Simulate {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        t: usize,
        #[arg(long, default_value_t = 20)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Task-reversal robustness suite on synthetic data.
    Robustness {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        t: usize,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Dispersion grid (comma-separated).
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1.0")]
        phis: Vec<f64>,
        /// Corrupted-task counts; defaults to 0..=t.
        #[arg(long, value_delimiter = ',')]
        corrupted: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', default_value = "mean,one_level,two_level")]
        methods: Vec<String>,
        #[arg(long, default_value_t = 50)]
        reps: u32,
    },
    /// Rescaling robustness suite: one reversed task amplified by each
    /// factor.
    Scaling {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        t: usize,
        #[arg(long, default_value_t = 20)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        phi: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,1,2,7,100")]
        factors: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "mean,sigma_star,one_level,two_level"
        )]
        methods: Vec<String>,
        #[arg(long, default_value_t = 50)]
        reps: u32,
    },
    /// Stability under task subsampling: tau between subset and full-task
    /// rankings.
    Subset {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', default_value = "sigma_star,mean")]
        method: Vec<String>,
        /// Subset sizes (task counts, comma-separated).
        #[arg(long, value_delimiter = ',', conflicts_with = "fractions")]
        sizes: Option<Vec<usize>>,
        /// Subset sizes as fractions of T (rounded).
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1.0")]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    /// Dispersion analysis of a task-level dataset.
    Dispersion {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 100)]
        n_random: u32,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Score file (CSV).
    #[arg(long, value_name = "FILE", conflicts_with = "manifest")]
    input: Option<PathBuf>,
    /// Input granularity of --input.
    #[arg(long, value_enum, default_value_t = Level::Task)]
    level: Level,
    /// Dataset manifest (JSON): file, format, directions, tie policy.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// Uniform metric direction for every task.
    #[arg(long, value_enum, conflicts_with = "directions_json")]
    direction: Option<DirectionArg>,
    /// JSON sidecar mapping task name to "higher" | "lower".
    #[arg(long, value_name = "FILE")]
    directions_json: Option<PathBuf>,
    /// Rank assignment for tied scores.
    #[arg(long, value_enum, default_value_t = TieArg::Fractional)]
    tie_policy: TieArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Task,
    Instance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Higher,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Fractional,
    Competition,
    Stable,
}

impl TieArg {
    fn to_policy(self) -> TiePolicy {
        match self {
            TieArg::Fractional => TiePolicy::Fractional,
            TieArg::Competition => TiePolicy::Competition,
            TieArg::Stable => TiePolicy::StableIndex,
        }
    }
}

enum AppError {
    Usage(String),
    Data(DataError),
}

impl From<DataError> for AppError {
    fn from(e: DataError) -> Self {
        AppError::Data(e)
    }
}

impl From<benchrank_core::Error> for AppError {
    fn from(e: benchrank_core::Error) -> Self {
        AppError::Data(DataError::Core(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too; they are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure the thread pool");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(AppError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>, AppError> {
    names
        .iter()
        .map(|name| {
            Method::parse(name).ok_or_else(|| {
                AppError::Usage(format!(
                    "unknown method {name:?}; expected mean, sigma_star, one_level or two_level"
                ))
            })
        })
        .collect()
}

fn load_dataset(args: &InputArgs) -> Result<(Dataset, TiePolicy), AppError> {
    if let Some(manifest_path) = &args.manifest {
        let (manifest, dataset) = load_manifest(manifest_path)?;
        return Ok((dataset, manifest.tie_policy));
    }
    let Some(input) = &args.input else {
        return Err(AppError::Usage(
            "either --input or --manifest is required".into(),
        ));
    };
    let directions: Option<BTreeMap<String, Direction>> = match (&args.direction, &args.directions_json) {
        (Some(_), _) => None, // uniform, applied below
        (None, Some(path)) => Some(load_direction_sidecar(path)?),
        (None, None) => None,
    };
    let uniform = args.direction.map(|d| match d {
        DirectionArg::Higher => Direction::HigherBetter,
        DirectionArg::Lower => Direction::LowerBetter,
    });

    let dataset = match args.level {
        Level::Task => {
            let mut m = load_task_level(input)?;
            if let Some(dir) = uniform {
                let n_tasks = m.n_tasks();
                m = m.with_directions(vec![dir; n_tasks]).map_err(DataError::Core)?;
            } else if let Some(map) = &directions {
                m = benchrank::dataset::apply_directions(m, map)?;
            }
            Dataset::Task(m)
        }
        Level::Instance => {
            let data = load_instance_level(input)?;
            let map: BTreeMap<String, Direction> = match (uniform, &directions) {
                (Some(dir), _) => data
                    .tasks()
                    .iter()
                    .map(|t| (t.name().to_string(), dir))
                    .collect(),
                (None, Some(map)) => map.clone(),
                (None, None) => BTreeMap::new(),
            };
            Dataset::Instance(benchrank::manifest::apply_instance_directions(data, &map)?)
        }
    };
    Ok((dataset, args.tie_policy.to_policy()))
}

fn eval_on_dataset(
    dataset: &Dataset,
    method: Method,
    tie_policy: TiePolicy,
) -> Result<AggregationResult, AppError> {
    let data = match dataset {
        Dataset::Task(m) => SubsetData::Task(m),
        Dataset::Instance(d) => SubsetData::Instance(d),
    };
    Ok(evaluate_method(&data, method, tie_policy)?)
}

/// "C > B > A" style summary; exact value ties join with "=".
fn order_line(result: &AggregationResult, names: &[String]) -> String {
    let order = result
        .ranking
        .order()
        .expect("aggregation results are strict");
    let mut out = String::new();
    for (pos, &system) in order.iter().enumerate() {
        if pos > 0 {
            let previous = order[pos - 1];
            let tied =
                result.per_system_value[previous] == result.per_system_value[system];
            out.push_str(if tied { " = " } else { " > " });
        }
        out.push_str(&names[system]);
    }
    out
}

fn print_rank_table(results: &[AggregationResult], names: &[String]) {
    for result in results {
        println!("{}: {}", result.method, order_line(result, names));
    }
    println!();
    let mut header = vec!["system".to_string()];
    for result in results {
        header.push(format!("{}_rank", result.method));
        header.push(format!("{}_value", result.method));
    }
    println!("{}", header.join("\t"));
    let mut order: Vec<usize> = (0..names.len()).collect();
    if let Some(first) = results.first() {
        order.sort_by(|&a, &b| first.ranking.rank_of(a).total_cmp(&first.ranking.rank_of(b)));
    }
    for system in order {
        let mut row = vec![names[system].clone()];
        for result in results {
            row.push(format!("{}", result.ranking.rank_of(system)));
            row.push(format!("{}", result.per_system_value[system]));
        }
        println!("{}", row.join("\t"));
    }
}

fn formats_or(cli_formats: &Option<Vec<Format>>, default: &[Format]) -> Vec<Format> {
    cli_formats.clone().unwrap_or_else(|| default.to_vec())
}

fn out_dir(out: &Option<PathBuf>) -> PathBuf {
    out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn report_written(paths: &[PathBuf]) {
    for path in paths {
        println!("wrote {}", path.display());
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Rank { input, method } => {
            let methods = parse_methods(method)?;
            if methods.is_empty() {
                return Err(AppError::Usage("--method needs at least one method".into()));
            }
            let (dataset, tie_policy) = load_dataset(input)?;
            let results: Vec<AggregationResult> = methods
                .iter()
                .map(|&m| eval_on_dataset(&dataset, m, tie_policy))
                .collect::<Result<_, _>>()?;
            print_rank_table(&results, dataset.system_names());
            let formats = formats_or(&cli.format, &[]);
            let paths = write_report(
                &Report::Aggregation {
                    results: &results,
                    system_names: dataset.system_names(),
                    config: serde_json::json!({
                        "command": "rank",
                        "input": input.input.as_ref().map(|p| p.display().to_string()),
                        "manifest": input.manifest.as_ref().map(|p| p.display().to_string()),
                        "methods": methods.iter().map(|m| m.label()).collect::<Vec<_>>(),
                    }),
                    seed: cli.seed,
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
        Command::Compare {
            input,
            method_a,
            method_b,
            ks,
        } => {
            let a = parse_methods(std::slice::from_ref(method_a))?[0];
            let b = parse_methods(std::slice::from_ref(method_b))?[0];
            let (dataset, tie_policy) = load_dataset(input)?;
            let result_a = eval_on_dataset(&dataset, a, tie_policy)?;
            let result_b = eval_on_dataset(&dataset, b, tie_policy)?;
            let n = dataset.n_systems();
            let ks: Vec<usize> = match ks {
                Some(ks) => ks.clone(),
                None => [1usize, 3, 5, 10].iter().copied().filter(|&k| k <= n).collect(),
            };
            let summary = run_agreement_analysis(&result_a, &result_b, &ks)?;
            println!("{}: {}", result_a.method, order_line(&result_a, dataset.system_names()));
            println!("{}: {}", result_b.method, order_line(&result_b, dataset.system_names()));
            println!("kendall_tau: {}", summary.full_tau);
            println!("k\ttop_k\tlast_k");
            for (&k, &top) in &summary.top_k_agreement {
                println!("{k}\t{top}\t{}", summary.last_k_agreement[&k]);
            }
            if !summary.tie_straddled_ks.is_empty() {
                println!("tie-straddled K: {:?}", summary.tie_straddled_ks);
            }
            let formats = formats_or(&cli.format, &[]);
            let paths = write_report(
                &Report::Agreement {
                    summary: &summary,
                    config: serde_json::json!({
                        "command": "compare",
                        "method_a": a.label(),
                        "method_b": b.label(),
                        "ks": ks,
                    }),
                    seed: cli.seed,
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
        Command::Simulate { n, t, k, phi, beta } => {
            let cfg = SyntheticConfig {
                n_systems: *n,
                n_tasks: *t,
                n_instances: *k,
                phi: *phi,
                beta: *beta,
                seed: cli.seed,
            };
            let data = generate_scores(&cfg)?;
            let dir = out_dir(&cli.out);
            std::fs::create_dir_all(&dir)
                .map_err(|e| DataError::io(&dir, e))?;
            let scores_path = dir.join("scores.csv");
            benchrank::write_instance_level(&data, &scores_path)?;
            let config_path = dir.join("config.json");
            let mut text = serde_json::to_string_pretty(&cfg).expect("config serializes");
            text.push('\n');
            std::fs::write(&config_path, text)
                .map_err(|e| DataError::io(&config_path, e))?;
            println!("wrote {}", scores_path.display());
            println!("wrote {}", config_path.display());
        }
        Command::Robustness {
            n,
            t,
            k,
            phis,
            corrupted,
            methods,
            reps,
        } => {
            let methods = parse_methods(methods)?;
            let counts: Vec<usize> = match corrupted {
                Some(c) => c.clone(),
                None => (0..=*t).collect(),
            };
            let base = SyntheticConfig::new(*n, *t, *k, 1.0, 0);
            let report =
                run_manipulation_robustness(&base, phis, &counts, &methods, *reps, cli.seed)?;
            for &phi in phis {
                for &method in &methods {
                    let threshold = counts.iter().find(|&&c| {
                        report
                            .cell(&[("phi", phi), ("corrupted", c as f64)], method)
                            .is_some_and(|cell| cell.mean > 0.75)
                    });
                    match threshold {
                        Some(c) => println!(
                            "phi={phi} {method}: error exceeds 0.75 from {c} corrupted tasks"
                        ),
                        None => println!(
                            "phi={phi} {method}: error stays below 0.75 on this grid"
                        ),
                    }
                }
            }
            let formats = formats_or(&cli.format, &[Format::Csv, Format::Json]);
            let paths = write_report(
                &Report::Experiment {
                    report: &report,
                    config: serde_json::json!({
                        "command": "robustness",
                        "n": n, "t": t, "k": k,
                        "phis": phis,
                        "corrupted": counts,
                        "methods": methods.iter().map(|m| m.label()).collect::<Vec<_>>(),
                        "reps": reps,
                    }),
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
        Command::Scaling {
            n,
            t,
            k,
            phi,
            factors,
            methods,
            reps,
        } => {
            let methods = parse_methods(methods)?;
            let base = SyntheticConfig::new(*n, *t, *k, *phi, 0);
            let report = run_scaling_robustness(&base, factors, &methods, *reps, cli.seed)?;
            for cell in &report.cells {
                let x = cell.params[0].1;
                println!("x={x} {}: error {} (std {})", cell.method, cell.mean, cell.std);
            }
            let formats = formats_or(&cli.format, &[Format::Csv, Format::Json]);
            let paths = write_report(
                &Report::Experiment {
                    report: &report,
                    config: serde_json::json!({
                        "command": "scaling",
                        "n": n, "t": t, "k": k, "phi": phi,
                        "factors": factors,
                        "methods": methods.iter().map(|m| m.label()).collect::<Vec<_>>(),
                        "reps": reps,
                    }),
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
        Command::Subset {
            input,
            method,
            sizes,
            fractions,
            samples,
        } => {
            let methods = parse_methods(method)?;
            let (dataset, _) = load_dataset(input)?;
            let t_total = dataset.n_tasks();
            let sizes: Vec<usize> = match sizes {
                Some(sizes) => sizes.clone(),
                None => {
                    let mut sizes: Vec<usize> = fractions
                        .iter()
                        .map(|f| ((f * t_total as f64).round() as usize).clamp(1, t_total))
                        .collect();
                    sizes.dedup();
                    sizes
                }
            };
            let data = match &dataset {
                Dataset::Task(m) => SubsetData::Task(m),
                Dataset::Instance(d) => SubsetData::Instance(d),
            };
            let report = run_subset_robustness(data, &methods, &sizes, *samples, cli.seed)?;
            println!("subset_size\tmethod\tmean_tau\tstd");
            for cell in &report.cells {
                println!(
                    "{}\t{}\t{}\t{}",
                    cell.params[0].1, cell.method, cell.mean, cell.std
                );
            }
            let formats = formats_or(&cli.format, &[Format::Csv, Format::Json]);
            let paths = write_report(
                &Report::Experiment {
                    report: &report,
                    config: serde_json::json!({
                        "command": "subset",
                        "input": input.input.as_ref().map(|p| p.display().to_string()),
                        "manifest": input.manifest.as_ref().map(|p| p.display().to_string()),
                        "sizes": sizes,
                        "samples": samples,
                        "methods": methods.iter().map(|m| m.label()).collect::<Vec<_>>(),
                    }),
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
        Command::Dispersion { input, n_random } => {
            let (dataset, tie_policy) = load_dataset(input)?;
            let matrix = match &dataset {
                Dataset::Task(m) => m.clone(),
                Dataset::Instance(d) => mean_instance_aggregate(d),
            };
            let report = run_dispersion_analysis(&matrix, tie_policy, *n_random, cli.seed)?;
            for (label, value) in &report.performance {
                println!("dispersion_{label}: {value}");
            }
            println!("pairwise_mean: {}", report.pairwise_mean);
            println!(
                "random_baseline: {} (std {} over {} draws)",
                report.random_baseline_mean, report.random_baseline_std, report.n_random
            );
            if let Some(ok) = report.sandwich_ok {
                println!("sandwich_ok: {ok}");
            }
            let formats = formats_or(&cli.format, &[Format::Csv, Format::Json]);
            let paths = write_report(
                &Report::Dispersion {
                    report: &report,
                    config: serde_json::json!({
                        "command": "dispersion",
                        "input": input.input.as_ref().map(|p| p.display().to_string()),
                        "manifest": input.manifest.as_ref().map(|p| p.display().to_string()),
                        "n_random": n_random,
                    }),
                    seed: cli.seed,
                },
                &out_dir(&cli.out),
                &formats,
            )?;
            report_written(&paths);
        }
    }
    Ok(())
}
