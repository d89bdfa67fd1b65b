//! Evaluation counters for goal (`G`) and seeking (`E`) applications.
//!
//! A trace is threaded explicitly through traced operations; there is no
//! global instrumentation.

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub label: Option<String>,
    pub g_evals: u64,
    pub e_apps: u64,
    pub runs: u64,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a new run, discarding previous counts.
    pub fn begin(&mut self, label: &str) {
        self.label = Some(label.to_owned());
        self.g_evals = 0;
        self.e_apps = 0;
        self.runs += 1;
    }

    pub fn has_run(&self) -> bool {
        self.runs > 0
    }
}
