//! Grid search orchestration: configuration, grid expansion, scheduling,
//! blob storage and the three event-driven stages.

pub mod config;
pub mod grid;
pub mod pipeline;
pub mod plots;
pub mod schedule;
pub mod store;
pub mod trigger;

pub use config::{parse_config, ConfigError, ExperimentConfig};
pub use grid::{evaluation_demand, expand_grid};
pub use pipeline::{
    read_aggregate, read_records, read_selection, run_all, run_pipeline_1, run_pipeline_2, run_pipeline_3,
    run_with_store, AggregateRow, PipelineError, RunOptions, RunRecord, RunStatus, RunSummary, Selection,
};
pub use schedule::schedule_static;
pub use store::{DirStore, MemoryStore, ObjectStore, StoreError};
pub use trigger::{PipelineTrigger, TriggerError};
