//! IO and reporting companion for [`benchrank_core`]: CSV dataset formats,
//! dataset manifests, and report emission (CSV, JSON, SVG).
//!
//! Two dataset formats are supported:
//!
//! - task-level CSV: header `system,<task1>,...,<taskT>`, one row per
//!   system, numeric cells;
//! - instance-level CSV (long format): header `system,task,instance,score`,
//!   one row per scored instance, complete coverage required.
//!
//! Metric directions default to higher-better and can be overridden by a
//! JSON sidecar mapping task name to `"higher"` or `"lower"`.

pub mod dataset;
mod error;
pub mod manifest;
pub mod report;
pub mod svg;

pub use dataset::{
    load_direction_sidecar, load_instance_level, load_task_level, write_instance_level,
    write_task_level, Dataset,
};
pub use error::DataError;
pub use manifest::{load_manifest, DatasetFormat, DatasetManifest};
pub use report::{write_report, Format, Report};
