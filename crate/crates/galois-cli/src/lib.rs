//! Curve input, the monodromy pipeline, reports and plots behind the
//! `galois` binary.

pub mod input;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use input::{load_curve, parse_curve, InputError};
pub use pipeline::{run_pipeline, CertificateError, PipelineError, PipelineOptions, PipelineRun};
pub use report::{MonodromyCertificate, PipelineReport, SCHEMA_VERSION};
