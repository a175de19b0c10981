//! End-to-end preprocessing runs: learn (when the scheme needs a model),
//! segment, and write artifacts plus a reproducibility manifest.

mod config;
mod run;
mod sweep;

pub use config::{PipelineConfig, Scheme};
pub use run::{run_pipeline, run_pipeline_into, sha256_hex, PipelineOutcome, MANIFEST_FILE};
pub use sweep::{load_grid, rows_to_tsv, sweep, sweep_dir, SweepRow, TSV_HEADER};
