//! Report emission.
//!
//! JSON reports carry a fixed envelope — `method` or `experiment`, `seed`,
//! `config`, `version`, `results` — so every output file records how it was
//! produced. Experiment CSVs use the header
//! `experiment,param_name,param_value,method,mean,std,n_reps` with one row
//! per grid cell; when a cell has several parameters the leading ones are
//! folded into `param_name` as `name=value;` prefixes. SVG output is a
//! best-effort line chart; the CSV is the numeric contract.

use std::path::{Path, PathBuf};

use benchrank_core::{
    AggregationResult, AgreementSummary, DispersionReport, ExperimentReport,
};
use serde_json::json;

use crate::error::DataError;
use crate::svg;

/// Output format selector for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// One writable report.
pub enum Report<'a> {
    /// Aggregation results on one dataset, one JSON file per method.
    Aggregation {
        results: &'a [AggregationResult],
        system_names: &'a [String],
        config: serde_json::Value,
        seed: u64,
    },
    Experiment {
        report: &'a ExperimentReport,
        config: serde_json::Value,
    },
    Dispersion {
        report: &'a DispersionReport,
        config: serde_json::Value,
        seed: u64,
    },
    Agreement {
        summary: &'a AgreementSummary,
        config: serde_json::Value,
        seed: u64,
    },
}

fn envelope(
    kind_key: &str,
    kind: &str,
    seed: u64,
    config: &serde_json::Value,
    results: serde_json::Value,
) -> serde_json::Value {
    json!({
        kind_key: kind,
        "seed": seed,
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "results": results,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), DataError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| DataError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| DataError::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, DataError> {
    csv::Writer::from_path(path).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn write_record<W: std::io::Write>(
    path: &Path,
    writer: &mut csv::Writer<W>,
    record: &[String],
) -> Result<(), DataError> {
    writer.write_record(record).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn fmt(value: f64) -> String {
    format!("{value}")
}

/// Writes `report` to `out_dir` in each requested format and returns the
/// created paths. An empty format list writes nothing.
pub fn write_report(
    report: &Report<'_>,
    out_dir: &Path,
    formats: &[Format],
) -> Result<Vec<PathBuf>, DataError> {
    if formats.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(out_dir).map_err(|e| DataError::io(out_dir, e))?;
    let mut paths = Vec::new();
    for &format in formats {
        match report {
            Report::Aggregation {
                results,
                system_names,
                config,
                seed,
            } => match format {
                Format::Json => {
                    for result in results.iter() {
                        let path = out_dir.join(format!("rank_{}.json", result.method));
                        let value = envelope(
                            "method",
                            result.method.label(),
                            *seed,
                            config,
                            json!({
                                "systems": system_names,
                                "ranking": result.ranking.ranks(),
                                "per_system_value": result.per_system_value,
                                "tie_groups": result.tie_groups,
                            }),
                        );
                        write_json(&path, &value)?;
                        paths.push(path);
                    }
                }
                Format::Csv => {
                    let path = out_dir.join("rank.csv");
                    let mut writer = csv_writer(&path)?;
                    let mut header = vec!["system".to_string()];
                    for result in results.iter() {
                        header.push(format!("{}_rank", result.method));
                        header.push(format!("{}_value", result.method));
                    }
                    write_record(&path, &mut writer, &header)?;
                    for (n, system) in system_names.iter().enumerate() {
                        let mut record = vec![system.clone()];
                        for result in results.iter() {
                            record.push(fmt(result.ranking.rank_of(n)));
                            record.push(fmt(result.per_system_value[n]));
                        }
                        write_record(&path, &mut writer, &record)?;
                    }
                    writer.flush().map_err(|e| DataError::io(&path, e))?;
                    paths.push(path);
                }
                Format::Svg => {} // no chart for a single ranking table
            },
            Report::Experiment { report, config } => match format {
                Format::Json => {
                    let path = out_dir.join(format!("{}.json", report.experiment));
                    let value = envelope(
                        "experiment",
                        &report.experiment,
                        report.seed,
                        config,
                        serde_json::to_value(report).map_err(|source| DataError::Json {
                            path: path.clone(),
                            source,
                        })?,
                    );
                    write_json(&path, &value)?;
                    paths.push(path);
                }
                Format::Csv => {
                    let path = out_dir.join(format!("{}.csv", report.experiment));
                    let mut writer = csv_writer(&path)?;
                    write_record(
                        &path,
                        &mut writer,
                        &[
                            "experiment".into(),
                            "param_name".into(),
                            "param_value".into(),
                            "method".into(),
                            "mean".into(),
                            "std".into(),
                            "n_reps".into(),
                        ],
                    )?;
                    for cell in &report.cells {
                        let (leading, last) = cell.params.split_at(cell.params.len() - 1);
                        let mut param_name = String::new();
                        for (name, value) in leading {
                            param_name.push_str(&format!("{name}={};", fmt(*value)));
                        }
                        param_name.push_str(&last[0].0);
                        write_record(
                            &path,
                            &mut writer,
                            &[
                                report.experiment.clone(),
                                param_name,
                                fmt(last[0].1),
                                cell.method.clone(),
                                fmt(cell.mean),
                                fmt(cell.std),
                                cell.n.to_string(),
                            ],
                        )?;
                    }
                    writer.flush().map_err(|e| DataError::io(&path, e))?;
                    paths.push(path);
                }
                Format::Svg => {
                    let path = out_dir.join(format!("{}.svg", report.experiment));
                    std::fs::write(&path, svg::experiment_chart(report))
                        .map_err(|e| DataError::io(&path, e))?;
                    paths.push(path);
                }
            },
            Report::Dispersion {
                report,
                config,
                seed,
            } => match format {
                Format::Json => {
                    let path = out_dir.join("dispersion.json");
                    let value = envelope(
                        "experiment",
                        "dispersion",
                        *seed,
                        config,
                        serde_json::to_value(report).map_err(|source| DataError::Json {
                            path: path.clone(),
                            source,
                        })?,
                    );
                    write_json(&path, &value)?;
                    paths.push(path);
                }
                Format::Csv => {
                    let path = out_dir.join("dispersion.csv");
                    let mut writer = csv_writer(&path)?;
                    write_record(&path, &mut writer, &["label".into(), "value".into()])?;
                    for (label, value) in &report.performance {
                        write_record(
                            &path,
                            &mut writer,
                            &[format!("dispersion_{label}"), fmt(*value)],
                        )?;
                    }
                    for (label, value) in [
                        ("pairwise_mean", report.pairwise_mean),
                        ("random_baseline_mean", report.random_baseline_mean),
                        ("random_baseline_std", report.random_baseline_std),
                        ("n_random", report.n_random as f64),
                    ] {
                        write_record(&path, &mut writer, &[label.to_string(), fmt(value)])?;
                    }
                    if let Some(ok) = report.sandwich_ok {
                        write_record(
                            &path,
                            &mut writer,
                            &["sandwich_ok".to_string(), ok.to_string()],
                        )?;
                    }
                    writer.flush().map_err(|e| DataError::io(&path, e))?;
                    paths.push(path);
                }
                Format::Svg => {}
            },
            Report::Agreement {
                summary,
                config,
                seed,
            } => match format {
                Format::Json => {
                    let path = out_dir.join("agreement.json");
                    let value = envelope(
                        "experiment",
                        "agreement",
                        *seed,
                        config,
                        serde_json::to_value(summary).map_err(|source| DataError::Json {
                            path: path.clone(),
                            source,
                        })?,
                    );
                    write_json(&path, &value)?;
                    paths.push(path);
                }
                Format::Csv => {
                    let path = out_dir.join("agreement.csv");
                    let mut writer = csv_writer(&path)?;
                    write_record(
                        &path,
                        &mut writer,
                        &["k".into(), "top_k_agreement".into(), "last_k_agreement".into()],
                    )?;
                    for (&k, &top) in &summary.top_k_agreement {
                        let last = summary.last_k_agreement[&k];
                        write_record(
                            &path,
                            &mut writer,
                            &[k.to_string(), fmt(top), fmt(last)],
                        )?;
                    }
                    writer.flush().map_err(|e| DataError::io(&path, e))?;
                    paths.push(path);
                }
                Format::Svg => {}
            },
        }
    }
    Ok(paths)
}
