//! Job files: a small line-oriented input language, its printer, and the
//! runner that turns each command into a JSON report.
//!
//! ```text
//! ring S vars x:1, y:1 mod x^2; y^3
//! elem f in S = x
//! quotient R = S / f
//! complex K over R { module 0 twists [0]; module 1 twists [-1]; map d1 = [[y]] }
//! check ezd S f g
//! ann g in R
//! resolve R / y --hmax 3 --dmax 10 as F
//! operators build F pair f,g z t, y^2 as B
//! homotopy check B.phi --window 0:3
//! reproduce-example --dmax 10
//! ```

mod parse;
mod print;
mod report;
mod reproduce;
mod run;

pub use parse::parse_jobfile;
pub use report::{verify_certificate, Certificate, CommandReport, Report, Status, SCHEMA};
pub use reproduce::{reproduce_example, ExampleOptions};
pub use run::{default_seed, run, run_command, Session, SEED_ENV};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobFile {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Ring {
        name: String,
        vars: Vec<(String, u32)>,
        relations: Vec<String>,
        graded: bool,
    },
    Elem {
        name: String,
        ring: String,
        poly: String,
    },
    Quotient {
        name: String,
        ring: String,
        elem: String,
    },
    Complex {
        name: String,
        ring: String,
        modules: Vec<(i64, Vec<i64>)>,
        maps: Vec<(i64, Vec<Vec<String>>)>,
    },
    Command(Command),
}

/// The module being resolved: `R / elem` or `R / [[g1, g2, ...]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Elem(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftChoice {
    Canonical,
    /// Randomized lift; `None` takes the seed from the environment.
    Random(Option<u64>),
}

/// `[bundle.]phi` or `[bundle.]psi(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapRef {
    pub bundle: Option<String>,
    pub op: OpRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpRef {
    Phi,
    Psi(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    CheckEzd {
        ring: String,
        x: String,
        y: String,
    },
    Ann {
        elem: String,
        ring: String,
    },
    Resolve {
        ring: String,
        module: ModuleSpec,
        hmax: i64,
        dmax: i64,
        /// Binds the computed resolution as a complex.
        name: Option<String>,
    },
    OperatorsBuild {
        complex: String,
        x: String,
        y: String,
        zs: Vec<String>,
        lift: LiftChoice,
        name: Option<String>,
    },
    HomotopyCheck {
        map: MapRef,
        window: (i64, i64),
        flipped: bool,
    },
    ReproduceExample {
        dmax: Option<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JobError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: undefined reference `{name}`")]
    Undefined { line: usize, col: usize, name: String },
    #[error("{line}:{col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
    #[error("[{module}] {message}")]
    Run { module: &'static str, message: String },
}

impl JobError {
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            JobError::Syntax { line, col, .. }
            | JobError::Undefined { line, col, .. }
            | JobError::Invalid { line, col, .. } => Some((*line, *col)),
            JobError::Run { .. } => None,
        }
    }
}
