//! Dataset manifests: a small JSON document naming a score file, its
//! format, per-task metric directions, and the tie policy to use.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use benchrank_core::{Direction, TiePolicy};
use serde::{Deserialize, Serialize};

use crate::dataset::{apply_directions, load_instance_level, load_task_level, Dataset};
use crate::error::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    TaskLevel,
    InstanceLevel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub format: DatasetFormat,
    /// Score file location, resolved relative to the manifest file.
    pub path: PathBuf,
    /// Task name -> direction; absent tasks default to higher-better.
    #[serde(default)]
    pub directions: BTreeMap<String, Direction>,
    #[serde(default)]
    pub tie_policy: TiePolicy,
}

/// Parses a manifest and loads the dataset it references, applying the
/// direction map. Unknown task names in the map are an error so typos do
/// not silently fall back to the default direction.
pub fn load_manifest(path: &Path) -> Result<(DatasetManifest, Dataset), DataError> {
    let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
    let manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|source| DataError::Json {
            path: path.to_path_buf(),
            source,
        })?;
    let data_path = if manifest.path.is_absolute() {
        manifest.path.clone()
    } else {
        path.parent().unwrap_or(Path::new(".")).join(&manifest.path)
    };

    let dataset = match manifest.format {
        DatasetFormat::TaskLevel => {
            let m = load_task_level(&data_path)?;
            check_known_tasks(path, manifest.directions.keys(), m.task_names())?;
            Dataset::Task(apply_directions(m, &manifest.directions)?)
        }
        DatasetFormat::InstanceLevel => {
            let data = load_instance_level(&data_path)?;
            let names: Vec<String> = data.tasks().iter().map(|t| t.name().to_string()).collect();
            check_known_tasks(path, manifest.directions.keys(), &names)?;
            let data = apply_instance_directions(data, &manifest.directions)?;
            Dataset::Instance(data)
        }
    };
    Ok((manifest, dataset))
}

fn check_known_tasks<'a>(
    manifest_path: &Path,
    mapped: impl Iterator<Item = &'a String>,
    known: &[String],
) -> Result<(), DataError> {
    for name in mapped {
        if !known.contains(name) {
            return Err(DataError::parse(
                manifest_path,
                0,
                format!("directions entry names unknown task {name}"),
            ));
        }
    }
    Ok(())
}

/// Rebuilds an instance-level set with directions from a task-name map;
/// absent tasks keep the default direction.
pub fn apply_instance_directions(
    data: benchrank_core::InstanceScoreSet,
    directions: &BTreeMap<String, Direction>,
) -> Result<benchrank_core::InstanceScoreSet, DataError> {
    if directions.is_empty() {
        return Ok(data);
    }
    let tasks = data
        .tasks()
        .iter()
        .map(|t| {
            benchrank_core::TaskInstances::new(
                t.name().to_string(),
                directions.get(t.name()).copied().unwrap_or_default(),
                t.instance_names().to_vec(),
                data.n_systems(),
                (0..data.n_systems())
                    .flat_map(|n| t.system_row(n).to_vec())
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(benchrank_core::InstanceScoreSet::new(
        data.system_names().to_vec(),
        tasks,
    )?)
}
