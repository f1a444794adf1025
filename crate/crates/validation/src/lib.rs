//! Support code for the acceptance suite in `tests/acceptance.rs`.

use std::path::PathBuf;

use parimutuel_cli::Scenario;

/// The `scenarios/` directory at the workspace root.
pub fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

/// Every bundled scenario, sorted by file name.
pub fn bundled() -> Vec<Scenario> {
    let mut paths: Vec<_> = std::fs::read_dir(scenarios_dir())
        .expect("scenarios directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Scenario::load(p).unwrap_or_else(|e| panic!("{}: {e}", p.display())))
        .collect()
}

/// Failed checks for one criterion. [`Verdict::finish`] prints a single
/// `criterion N: PASS|FAIL` line and panics on failure.
pub struct Verdict {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Verdict {
    pub fn new(id: u32, title: &'static str) -> Self {
        Verdict {
            id,
            title,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn line(&self) -> String {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("criterion {}: {status} [{}]", self.id, self.title);
        if !self.notes.is_empty() {
            line.push_str(&format!(" ({})", self.notes.join("; ")));
        }
        for f in &self.failures {
            line.push_str(&format!("\n  failed: {f}"));
        }
        line
    }

    pub fn finish(self) {
        // one write, so parallel tests do not interleave inside a verdict
        println!("{}", self.line());
        assert!(self.failures.is_empty(), "criterion {} failed", self.id);
    }
}
