//! Report payloads: one JSON document per job, with a stable field order
//! so identical runs are byte-identical (timestamps excluded, per the
//! determinism contract).

use serde::Serialize;

/// One checked inequality (or equality) with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityRow {
    pub suite: String,
    /// stable law identifier, also listed by `list-suites`
    pub law: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: bool,
    pub detail: String,
}

impl InequalityRow {
    /// lhs <= rhs + slack
    pub fn le(suite: &str, law: &str, instance: String, lhs: f64, rhs: f64, slack: f64) -> Self {
        InequalityRow {
            suite: suite.into(),
            law: law.into(),
            instance,
            lhs,
            rhs,
            slack,
            verdict: lhs <= rhs + slack,
            detail: String::new(),
        }
    }

    /// |lhs - rhs| <= slack
    pub fn eq(suite: &str, law: &str, instance: String, lhs: f64, rhs: f64, slack: f64) -> Self {
        InequalityRow {
            suite: suite.into(),
            law: law.into(),
            instance,
            lhs,
            rhs,
            slack,
            verdict: (lhs - rhs).abs() <= slack,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub tol: f64,
    /// unix seconds; excluded from determinism comparisons
    pub timestamp: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub job: serde_json::Value,
    pub results: serde_json::Value,
    pub rows: Vec<InequalityRow>,
    pub passed: usize,
    pub failed: usize,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(
        job: serde_json::Value,
        results: serde_json::Value,
        rows: Vec<InequalityRow>,
        seed: u64,
        tol: f64,
    ) -> Self {
        let passed = rows.iter().filter(|r| r.verdict).count();
        let failed = rows.len() - passed;
        Report {
            job,
            results,
            rows,
            passed,
            failed,
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
                tol,
                timestamp: std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rendering of the row table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,law,instance,lhs,rhs,slack,verdict,detail\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.suite,
                r.law,
                r.instance.replace(',', ";"),
                r.lhs,
                r.rhs,
                r.slack,
                r.verdict,
                r.detail.replace(',', ";")
            ));
        }
        out
    }
}
