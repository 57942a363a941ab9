//! Suite reports in text and JSON.

use serde_json::{json, Value};

pub const SCHEMA: &str = "wittvec/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub key: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub p: u64,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn new(suite: &str, p: u64, seed: u64) -> Self {
        SuiteReport { suite: suite.into(), p, seed, cases: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, ok: bool, lhs: impl Into<String>, rhs: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.cases.push(Case { key: key.into(), status, lhs: lhs.into(), rhs: rhs.into() });
    }

    pub fn count(&self, s: Status) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    fn sorted(&self) -> Vec<&Case> {
        let mut v: Vec<&Case> = self.cases.iter().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }

    pub fn to_json(&self) -> Value {
        let cases: Vec<Value> = self
            .sorted()
            .into_iter()
            .map(|c| json!({"key": c.key, "status": c.status.as_str(), "lhs": c.lhs, "rhs": c.rhs}))
            .collect();
        json!({
            "suite": self.suite,
            "p": self.p,
            "seed": self.seed,
            "cases": cases,
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "inconclusive": self.count(Status::Inconclusive),
            },
        })
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = format!(
            "suite {} (p={}, seed={}): {} cases, {} pass, {} fail, {} inconclusive\n",
            self.suite,
            self.p,
            self.seed,
            self.cases.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Inconclusive)
        );
        for c in self.sorted() {
            if verbose || c.status != Status::Pass {
                out.push_str(&format!("  {:<12} {}: lhs = {}, rhs = {}\n", c.status.as_str(), c.key, c.lhs, c.rhs));
            }
        }
        out
    }
}

pub fn reports_json(reports: &[SuiteReport]) -> Value {
    json!({
        "schema": SCHEMA,
        "passed": reports.iter().all(SuiteReport::passed),
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    })
}
