use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::demos;
use crate::options::DemoOptions;
use crate::report::Report;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unknown demo `{0}` (try `leftorder list`)")]
    UnknownDemo(String),
    #[error("invalid --{name}: {reason}")]
    InvalidOption { name: &'static str, reason: String },
    #[error("{0}")]
    Failed(String),
}

/// A named, self-checking scenario.
pub trait Demo: Send + Sync {
    fn name(&self) -> &'static str;

    /// Short description of the construction the demo reproduces.
    fn anchor(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError>;
}

pub struct DemoRegistry {
    demos: BTreeMap<&'static str, Box<dyn Demo>>,
}

impl DemoRegistry {
    pub fn empty() -> Self {
        DemoRegistry {
            demos: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = DemoRegistry::empty();
        for d in demos::all() {
            r.register(d);
        }
        r
    }

    /// Adds a demo, replacing any demo of the same name.
    pub fn register(&mut self, demo: Box<dyn Demo>) {
        self.demos.insert(demo.name(), demo);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Demo> {
        self.demos.get(name).map(|d| d.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.demos.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Demo> {
        self.demos.values().map(|d| d.as_ref())
    }

    pub fn run(&self, name: &str, opts: &DemoOptions) -> Result<Report, DemoError> {
        let demo = self
            .get(name)
            .ok_or_else(|| DemoError::UnknownDemo(name.to_string()))?;
        opts.validate()?;
        let start = Instant::now();
        let mut report = demo.run(opts)?;
        if opts.timing {
            report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        Ok(report)
    }
}

/// Runs a built-in demo by name.
pub fn run_demo(name: &str, opts: &DemoOptions) -> Result<Report, DemoError> {
    DemoRegistry::builtin().run(name, opts)
}
