//! Dataset registry, experiment manifests and the commands behind the CLI.

mod commands;
mod datasets;
mod manifest;
mod run;

pub use commands::{cmd_curves, cmd_qq, cmd_simulate, cmd_table, QqSettings, SimulateSummary};
pub use datasets::{dataset, DatasetSpec, T_OBS};
pub use manifest::{ExperimentManifest, Profile};
pub use run::{cmd_run, read_summary, report_functionals, run_dir, RunRecord};
