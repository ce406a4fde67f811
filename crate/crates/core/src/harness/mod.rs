//! The TOML document format, random fixtures, campaigns and reports.

pub mod campaign;
pub mod cli;
pub mod document;
pub mod random;

pub use campaign::{run_campaign, run_campaign_with_cap, run_job, Check, JobReport, Report, Summary, REPORT_SCHEMA};
pub use document::{parse_and_validate, parse_field, Document, Job, JobSpec, DEFAULT_CAP};
pub use random::{derive_seed, random_module};
