//! Configuration, ingestion, result files and the batch pipeline.

pub mod config;
pub mod ingest;
pub mod pipeline;
pub mod svg;
pub mod table;

pub use config::{load_config, parse_config, DeviceConfig, Encoding};
pub use ingest::{ingest_trace, read_curve, read_trace};
pub use pipeline::{run_pipeline, FluctSettings, PipelineFailure, PipelineInputs, RunReport};
pub use table::{Format, Table};
