//! Demo registry, reports and emitters behind the `leftorder` binary.

mod demos;
mod options;
mod registry;
mod report;

pub use options::{DemoOptions, Format};
pub use registry::{run_demo, Demo, DemoError, DemoRegistry};
pub use report::{emit, Check, Report, WitnessTable, SCHEMA_VERSION};

pub use demos::verify_report;
