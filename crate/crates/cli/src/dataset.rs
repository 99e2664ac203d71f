//! CSV dataset ingestion and emission.
//!
//! Scores are written with Rust's shortest round-trip float formatting, so a
//! write/load cycle reproduces every value bit-exactly.

use std::collections::BTreeMap;
use std::path::Path;

use benchrank_core::{Direction, InstanceScoreSet, TaskInstances, TaskScoreMatrix};

use crate::error::DataError;

/// A loaded dataset at either granularity.
#[derive(Debug, Clone)]
pub enum Dataset {
    Task(TaskScoreMatrix),
    Instance(InstanceScoreSet),
}

impl Dataset {
    pub fn n_systems(&self) -> usize {
        match self {
            Dataset::Task(m) => m.n_systems(),
            Dataset::Instance(d) => d.n_systems(),
        }
    }

    pub fn n_tasks(&self) -> usize {
        match self {
            Dataset::Task(m) => m.n_tasks(),
            Dataset::Instance(d) => d.n_tasks(),
        }
    }

    pub fn system_names(&self) -> &[String] {
        match self {
            Dataset::Task(m) => m.system_names(),
            Dataset::Instance(d) => d.system_names(),
        }
    }

    pub fn task_names(&self) -> Vec<String> {
        match self {
            Dataset::Task(m) => m.task_names().to_vec(),
            Dataset::Instance(d) => d.tasks().iter().map(|t| t.name().to_string()).collect(),
        }
    }
}

fn parse_score(
    path: &Path,
    row: usize,
    system: &str,
    task: &str,
    cell: &str,
) -> Result<f64, DataError> {
    let value: f64 = cell.trim().parse().map_err(|_| {
        DataError::parse(
            path,
            row,
            format!("cell for system {system}, task {task} is not numeric: {cell:?}"),
        )
    })?;
    if !value.is_finite() {
        return Err(DataError::parse(
            path,
            row,
            format!("cell for system {system}, task {task} is not finite: {cell:?}"),
        ));
    }
    Ok(value)
}

/// Loads a task-level CSV (`system,<task1>,...,<taskT>`); row and column
/// order are preserved and all directions default to higher-better.
pub fn load_task_level(path: &Path) -> Result<TaskScoreMatrix, DataError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let headers = reader
        .headers()
        .map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    if headers.is_empty() || headers.get(0) != Some("system") {
        return Err(DataError::parse(
            path,
            1,
            "header must start with a `system` column",
        ));
    }
    let task_names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    if task_names.is_empty() {
        return Err(DataError::parse(path, 1, "no task columns in header"));
    }

    let mut system_names = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row_number = i + 2; // 1-based, after the header
        let record = record.map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.len() != task_names.len() + 1 {
            return Err(DataError::parse(
                path,
                row_number,
                format!(
                    "expected {} cells, found {}",
                    task_names.len() + 1,
                    record.len()
                ),
            ));
        }
        let system = record.get(0).unwrap_or_default().to_string();
        if system_names.contains(&system) {
            return Err(DataError::parse(
                path,
                row_number,
                format!("duplicate system name: {system}"),
            ));
        }
        let mut row = Vec::with_capacity(task_names.len());
        for (j, cell) in record.iter().skip(1).enumerate() {
            row.push(parse_score(path, row_number, &system, &task_names[j], cell)?);
        }
        system_names.push(system);
        rows.push(row);
    }

    let n_tasks = task_names.len();
    Ok(TaskScoreMatrix::new(
        system_names,
        task_names,
        vec![Direction::HigherBetter; n_tasks],
        rows,
    )?)
}

/// Loads a long-format instance-level CSV (`system,task,instance,score`).
///
/// System and task order follow first appearance; instances within a task
/// are ordered lexicographically by identifier. Every system must cover the
/// same instance set per task; gaps and duplicate triples are errors naming
/// the offending cell.
pub fn load_instance_level(path: &Path) -> Result<InstanceScoreSet, DataError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let headers = reader
        .headers()
        .map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let expected = ["system", "task", "instance", "score"];
    if headers.iter().ne(expected) {
        return Err(DataError::parse(
            path,
            1,
            format!("header must be `system,task,instance,score`, found {headers:?}"),
        ));
    }

    // (system, instance) -> (score, row number), one map per task
    type TaskCells = BTreeMap<(String, String), (f64, usize)>;
    let mut system_names: Vec<String> = Vec::new();
    let mut task_order: Vec<String> = Vec::new();
    let mut cells: BTreeMap<String, TaskCells> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let row_number = i + 2;
        let record = record.map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.len() != 4 {
            return Err(DataError::parse(
                path,
                row_number,
                format!("expected 4 cells, found {}", record.len()),
            ));
        }
        let system = record[0].to_string();
        let task = record[1].to_string();
        let instance = record[2].to_string();
        let score = parse_score(path, row_number, &system, &task, &record[3])?;
        if !system_names.contains(&system) {
            system_names.push(system.clone());
        }
        if !task_order.contains(&task) {
            task_order.push(task.clone());
        }
        let entry = cells.entry(task.clone()).or_default();
        if entry
            .insert((system.clone(), instance.clone()), (score, row_number))
            .is_some()
        {
            return Err(DataError::parse(
                path,
                row_number,
                format!("duplicate triple ({system}, {task}, {instance})"),
            ));
        }
    }
    if system_names.is_empty() {
        return Err(DataError::parse(path, 1, "no data rows"));
    }

    let mut tasks = Vec::with_capacity(task_order.len());
    for task_name in &task_order {
        let task_cells = &cells[task_name];
        let mut instance_names: Vec<String> = task_cells
            .keys()
            .map(|(_, instance)| instance.clone())
            .collect();
        instance_names.sort_unstable();
        instance_names.dedup();

        let mut scores = Vec::with_capacity(system_names.len() * instance_names.len());
        for system in &system_names {
            for instance in &instance_names {
                match task_cells.get(&(system.clone(), instance.clone())) {
                    Some(&(score, _)) => scores.push(score),
                    None => {
                        return Err(DataError::MissingCell {
                            path: path.to_path_buf(),
                            system: system.clone(),
                            task: task_name.clone(),
                            instance: instance.clone(),
                        })
                    }
                }
            }
        }
        tasks.push(TaskInstances::new(
            task_name.clone(),
            Direction::HigherBetter,
            instance_names,
            system_names.len(),
            scores,
        )?);
    }

    Ok(InstanceScoreSet::new(system_names, tasks)?)
}

/// Loads a direction sidecar: a JSON object mapping task name to `"higher"`
/// or `"lower"`. Tasks absent from the map keep the default direction.
pub fn load_direction_sidecar(path: &Path) -> Result<BTreeMap<String, Direction>, DataError> {
    let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| DataError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Applies a direction map to a matrix's tasks.
pub fn apply_directions(
    m: TaskScoreMatrix,
    directions: &BTreeMap<String, Direction>,
) -> Result<TaskScoreMatrix, DataError> {
    let dirs: Vec<Direction> = m
        .task_names()
        .iter()
        .map(|name| directions.get(name).copied().unwrap_or_default())
        .collect();
    Ok(m.with_directions(dirs)?)
}

fn fmt(value: f64) -> String {
    format!("{value}")
}

/// Writes a task-level CSV; exact decimal round-trip.
pub fn write_task_level(m: &TaskScoreMatrix, path: &Path) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_path(path).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let mut header = vec!["system".to_string()];
    header.extend(m.task_names().iter().cloned());
    let write = |w: &mut csv::Writer<std::fs::File>, rec: &[String]| {
        w.write_record(rec).map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })
    };
    write(&mut writer, &header)?;
    for (n, system) in m.system_names().iter().enumerate() {
        let mut record = vec![system.clone()];
        for t in 0..m.n_tasks() {
            record.push(fmt(m.score(n, t)));
        }
        write(&mut writer, &record)?;
    }
    writer
        .flush()
        .map_err(|e| DataError::io(path, e))
}

/// Writes an instance-level long-format CSV; exact decimal round-trip.
pub fn write_instance_level(data: &InstanceScoreSet, path: &Path) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_path(path).map_err(|source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let mut write = |rec: [&str; 4]| {
        writer.write_record(rec).map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })
    };
    write(["system", "task", "instance", "score"])?;
    for (n, system) in data.system_names().iter().enumerate() {
        for task in data.tasks() {
            for (k, instance) in task.instance_names().iter().enumerate() {
                let score = fmt(task.score(n, k));
                write([system, task.name(), instance, &score])?;
            }
        }
    }
    writer
        .flush()
        .map_err(|e| DataError::io(path, e))
}
