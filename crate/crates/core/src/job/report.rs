use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::JobError;
use crate::homotopy::{HomotopyOutcome, InfeasibilityCertificate};
use crate::linalg::SparseMatrix;
use crate::poly::Rational;

pub const SCHEMA: &str = "ezd-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// An expectation was checked and holds.
    Pass,
    /// An expectation was checked and fails.
    Fail,
    /// Not decided within the requested bounds.
    Uncertified,
    /// Not run because an earlier item failed.
    Skipped,
    /// A plain command reached its verdict.
    Done,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub module: String,
    pub status: Status,
    pub verdict: String,
    pub details: serde_json::Value,
    #[serde(default)]
    pub certificates: Vec<Certificate>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

impl CommandReport {
    pub fn new(command: impl Into<String>, module: &str, status: Status, verdict: impl Into<String>) -> Self {
        CommandReport {
            command: command.into(),
            module: module.to_string(),
            status,
            verdict: verdict.into(),
            details: serde_json::Value::Null,
            certificates: Vec::new(),
            warnings: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub commands: Vec<CommandReport>,
    pub elapsed_ms: u64,
}

impl Default for Report {
    fn default() -> Self {
        Report {
            schema: SCHEMA.to_string(),
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            commands: Vec::new(),
            elapsed_ms: 0,
        }
    }
}

impl Report {
    /// No command errored and no checked expectation failed.
    pub fn ok(&self) -> bool {
        self.commands.iter().all(|c| !matches!(c.status, Status::Fail | Status::Error))
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per command, for humans.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.commands {
            let tag = serde_json::to_value(c.status).unwrap();
            out.push_str(&format!("[{}] {}: {}\n", tag.as_str().unwrap_or("?"), c.command, c.verdict));
            for w in &c.warnings {
                out.push_str(&format!("  warning: {w}\n"));
            }
        }
        out
    }

    pub fn find(&self, command_prefix: &str) -> Option<&CommandReport> {
        self.commands.iter().find(|c| c.command.starts_with(command_prefix))
    }
}

/// Self-contained linear-algebra certificates; rationals are written `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `A u = b`, with every row of `A`.
    LinearSolution {
        label: String,
        cols: usize,
        rows: Vec<Vec<(usize, String)>>,
        rhs: Vec<String>,
        solution: Vec<String>,
    },
    /// `y A = 0` and `y . b != 0`; only rows where `y` is nonzero are kept.
    Infeasibility {
        label: String,
        cols: usize,
        rows: Vec<Vec<(usize, String)>>,
        row_labels: Vec<String>,
        rhs: Vec<String>,
        witness: Vec<String>,
    },
}

fn q(v: &Rational) -> String {
    v.to_string()
}

fn sparse_rows(rows: &[Vec<(usize, Rational)>]) -> Vec<Vec<(usize, String)>> {
    rows.iter().map(|r| r.iter().map(|(j, v)| (*j, q(v))).collect()).collect()
}

impl Certificate {
    pub fn from_outcome(label: impl Into<String>, out: &HomotopyOutcome) -> Self {
        let label = label.into();
        match out {
            HomotopyOutcome::NullHomotopic(c) => Certificate::LinearSolution {
                label,
                cols: c.system.matrix.cols,
                rows: sparse_rows(&c.system.matrix.rows),
                rhs: c.system.rhs.iter().map(q).collect(),
                solution: c.solution.iter().map(q).collect(),
            },
            HomotopyOutcome::NotNullHomotopic(c) => Self::from_infeasible(label, c),
        }
    }

    fn from_infeasible(label: String, c: &InfeasibilityCertificate) -> Self {
        let keep: Vec<usize> = (0..c.witness.len()).filter(|&k| !c.witness[k].is_zero()).collect();
        Certificate::Infeasibility {
            label,
            cols: c.system.matrix.cols,
            rows: keep.iter().map(|&k| c.system.matrix.rows[k].iter().map(|(j, v)| (*j, q(v))).collect()).collect(),
            row_labels: keep.iter().map(|&k| c.system.row_labels[k].clone()).collect(),
            rhs: keep.iter().map(|&k| q(&c.system.rhs[k])).collect(),
            witness: keep.iter().map(|&k| q(&c.witness[k])).collect(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Certificate::LinearSolution { label, .. } | Certificate::Infeasibility { label, .. } => label,
        }
    }
}

fn parse_q(s: &str) -> Result<Rational, JobError> {
    Rational::from_str(s).map_err(|_| JobError::Run {
        module: "certificate",
        message: format!("bad rational `{s}`"),
    })
}

fn parse_rows(cols: usize, rows: &[Vec<(usize, String)>]) -> Result<SparseMatrix, JobError> {
    let mut m = SparseMatrix::new(cols);
    for r in rows {
        let mut row = Vec::with_capacity(r.len());
        for (j, v) in r {
            if *j >= cols {
                return Err(JobError::Run {
                    module: "certificate",
                    message: format!("column {j} out of range"),
                });
            }
            row.push((*j, parse_q(v)?));
        }
        m.rows.push(row);
    }
    Ok(m)
}

/// Re-checks a certificate from its serialized data alone.
pub fn verify_certificate(c: &Certificate) -> Result<bool, JobError> {
    let parse_vec = |v: &[String]| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>();
    match c {
        Certificate::LinearSolution { cols, rows, rhs, solution, .. } => {
            let a = parse_rows(*cols, rows)?;
            let (b, u) = (parse_vec(rhs)?, parse_vec(solution)?);
            Ok(u.len() == *cols && b.len() == a.nrows() && a.mul_vec(&u) == b)
        }
        Certificate::Infeasibility { cols, rows, rhs, witness, .. } => {
            let a = parse_rows(*cols, rows)?;
            let (b, y) = (parse_vec(rhs)?, parse_vec(witness)?);
            if b.len() != a.nrows() || y.len() != a.nrows() {
                return Ok(false);
            }
            let pairing: Rational = y.iter().zip(&b).map(|(y, b)| y * b).sum();
            Ok(a.left_mul(&y).iter().all(Zero::is_zero) && !pairing.is_zero())
        }
    }
}
