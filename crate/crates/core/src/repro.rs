//! Named reproducible checks grouped into suites.
//!
//! Every check is deterministic: its verdict and detail string depend only
//! on exact computations, never on timing or thread count. Timings are kept
//! out of the machine records.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::variety::Engine;

mod checks;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Dimension,
    Consequence,
    Basis,
    Kernel,
    Generates,
    LeadingWords,
    Rewrite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// What a check computed and whether it matched the expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }

    /// Conjunction of several outcomes; details are joined with `; `.
    pub fn all(parts: Vec<Outcome>) -> Self {
        let pass = parts.iter().all(|o| o.pass);
        let detail = parts
            .into_iter()
            .map(|o| o.detail)
            .collect::<Vec<_>>()
            .join("; ");
        Outcome { pass, detail }
    }
}

pub struct CheckSpec {
    pub name: &'static str,
    /// Acceptance criterion number this check belongs to.
    pub criterion: u32,
    pub kind: CheckKind,
    pub description: &'static str,
    pub run: fn(&Context) -> Result<Outcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub criterion: u32,
    pub kind: CheckKind,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub engine_version: String,
    pub results: Vec<CheckResult>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    /// One JSON object per check, in suite order.
    pub fn json_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            s.push_str(&serde_json::to_string(r).expect("result serializes"));
            s.push('\n');
        }
        s
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            s.push_str(&format!(
                "{tag:5} {}/{} [{:.2}s] {}\n",
                r.suite,
                r.name,
                r.elapsed.as_secs_f64(),
                r.detail
            ));
        }
        let passed = self
            .results
            .iter()
            .filter(|r| r.status == Status::Pass)
            .count();
        s.push_str(&format!("{passed}/{} checks passed\n", self.results.len()));
        s
    }
}

/// Shared state of a run: the registry and one engine per variety.
pub struct Context {
    registry: Registry,
    engines: Mutex<HashMap<String, Arc<Engine>>>,
}

impl Default for Context {
    fn default() -> Self {
        Self::new(Registry::builtin())
    }
}

impl Context {
    pub fn new(registry: Registry) -> Self {
        Context {
            registry,
            engines: Mutex::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn engine(&self, variety: &str) -> Result<Arc<Engine>> {
        if let Some(e) = self.engines.lock().unwrap().get(variety) {
            return Ok(e.clone());
        }
        let e = Arc::new(Engine::new(self.registry.variety(variety)?));
        Ok(self
            .engines
            .lock()
            .unwrap()
            .entry(variety.to_string())
            .or_insert(e)
            .clone())
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn suite(name: &str) -> Result<Vec<CheckSpec>> {
    SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f())
        .ok_or_else(|| {
            Error::Invalid(format!(
                "unknown suite `{name}`; available: {}",
                suite_names().join(", ")
            ))
        })
}

type SuiteFn = fn() -> Vec<CheckSpec>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("binary-perm", checks::binary_perm_suite),
    ("binary-perm-derived", checks::derived_suite),
    ("nap-derived", checks::nap_suite),
];

pub fn run_check(ctx: &Context, suite: &str, spec: &CheckSpec) -> CheckResult {
    let t = Instant::now();
    let (status, detail) = match (spec.run)(ctx) {
        Ok(o) if o.pass => (Status::Pass, o.detail),
        Ok(o) => (Status::Fail, o.detail),
        Err(e) => (Status::Error, e.to_string()),
    };
    CheckResult {
        suite: suite.to_string(),
        name: spec.name.to_string(),
        criterion: spec.criterion,
        kind: spec.kind,
        status,
        detail,
        elapsed: t.elapsed(),
    }
}

/// Runs the named suites in order.
pub fn run_suites(ctx: &Context, names: &[&str]) -> Result<RunReport> {
    let mut results = Vec::new();
    for name in names {
        for spec in suite(name)? {
            results.push(run_check(ctx, name, &spec));
        }
    }
    Ok(RunReport {
        engine_version: ENGINE_VERSION.to_string(),
        results,
    })
}
