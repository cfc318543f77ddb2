use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use super::report::{Certificate, CommandReport, Report, Status};
use super::reproduce::{reproduce_example, ExampleOptions};
use super::{Command, Item, JobError, JobFile, LiftChoice, MapRef, ModuleSpec, OpRef};
use crate::complex::{ComplexMap, GradedComplex, GradedFreeModule, PolyMatrix};
use crate::homotopy::{null_homotopy, Convention, HomotopyOutcome, HomotopyProblem, Mode};
use crate::operators::{LiftPolicy, OperatorBuilder, OperatorBundle};
use crate::poly::Polynomial;
use crate::resolution::{minimal_resolution, ModulePresentation, StepStatus};
use crate::ring::{annihilator, check_exact_pair, quotient_by, PresentedRing, QuotientMap, RingElem};

/// Environment variable holding the default seed for randomized lifts.
pub const SEED_ENV: &str = "EZD_SEED";

/// Bound on entry degrees for homotopies over ungraded rings.
const UNGRADED_BOUND: u64 = 3;

pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

fn fail(module: &'static str, e: impl std::fmt::Display) -> JobError {
    JobError::Run { module, message: e.to_string() }
}

/// Definitions made so far while running a job.
#[derive(Default)]
pub struct Session {
    rings: HashMap<String, Arc<PresentedRing>>,
    quotients: HashMap<String, QuotientMap>,
    elems: HashMap<String, String>,
    complexes: HashMap<String, GradedComplex>,
    bundles: HashMap<String, OperatorBundle>,
    last_bundle: Option<String>,
    pub seed: u64,
}

impl Session {
    pub fn new(seed: u64) -> Self {
        Session { seed, ..Default::default() }
    }

    fn ring(&self, name: &str) -> Result<&Arc<PresentedRing>, JobError> {
        self.rings.get(name).ok_or_else(|| fail("job", format!("undefined ring `{name}`")))
    }

    fn text<'a>(&'a self, token: &'a str) -> &'a str {
        self.elems.get(token).map(String::as_str).unwrap_or(token)
    }

    fn poly(&self, ring: &PresentedRing, token: &str) -> Result<Polynomial, JobError> {
        ring.parse(self.text(token)).map_err(|e| fail("ring", e))
    }

    fn elem(&self, ring: &Arc<PresentedRing>, token: &str) -> Result<RingElem, JobError> {
        ring.parse_elem(self.text(token)).map_err(|e| fail("ring", e))
    }

    pub fn define(&mut self, item: &Item) -> Result<(), JobError> {
        match item {
            Item::Ring { name, vars, relations, graded } => {
                let vs: Vec<(&str, u32)> = vars.iter().map(|(v, d)| (v.as_str(), *d)).collect();
                let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
                let r = PresentedRing::make_ring(name, &vs, &rels, *graded).map_err(|e| fail("ring", e))?;
                self.rings.insert(name.clone(), r);
            }
            Item::Elem { name, poly, .. } => {
                self.elems.insert(name.clone(), poly.clone());
            }
            Item::Quotient { name, ring, elem } => {
                let s = self.ring(ring)?.clone();
                let x = self.elem(&s, elem)?;
                let q = quotient_by(&s, &x, name).map_err(|e| fail("ring", e))?;
                self.rings.insert(name.clone(), q.target.clone());
                self.quotients.insert(name.clone(), q);
            }
            Item::Complex { name, ring, modules, maps } => {
                let r = self.ring(ring)?.clone();
                let lo = modules.first().map(|(i, _)| *i).unwrap_or(0);
                let mods: Vec<GradedFreeModule> = modules.iter().map(|(_, t)| GradedFreeModule::new(t.clone())).collect();
                let mut diffs = Vec::new();
                for (k, (i, _)) in modules.iter().enumerate().skip(1) {
                    let (rows, cols) = (mods[k - 1].rank(), mods[k].rank());
                    let m = match maps.iter().find(|(j, _)| j == i) {
                        Some((_, m)) if !m.is_empty() => {
                            let rows_ref: Vec<Vec<&str>> = m.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
                            let rows_ref: Vec<&[&str]> = rows_ref.iter().map(Vec::as_slice).collect();
                            PolyMatrix::parse(r.poly_ring(), &rows_ref, cols).map_err(|e| fail("complex", e))?
                        }
                        _ => PolyMatrix::zeros(r.poly_ring(), rows, cols),
                    };
                    diffs.push(m);
                }
                let c = GradedComplex::new(&r, lo, mods, diffs, true).map_err(|e| fail("complex", e))?;
                self.complexes.insert(name.clone(), c);
            }
            Item::Command(_) => {}
        }
        Ok(())
    }
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn map_json(g: &ComplexMap) -> Value {
    let comps: serde_json::Map<String, Value> =
        g.components.iter().map(|(i, m)| (i.to_string(), json!(m.matrix.to_strings()))).collect();
    json!({
        "hom_degree": g.hom_degree,
        "internal_degree": g.internal_degree,
        "components": comps,
    })
}

fn check_ezd(s: &Session, ring: &str, x: &str, y: &str) -> Result<CommandReport, JobError> {
    let r = s.ring(ring)?;
    let (xe, ye) = (s.elem(r, x)?, s.elem(r, y)?);
    let rep = check_exact_pair(r, &xe, &ye).map_err(|e| fail("ring", e))?;
    Ok(CommandReport::new("", "ring", Status::Done, rep.exact.to_string()).with_details(json!({
        "x": xe.to_string(),
        "y": ye.to_string(),
        "exact": rep.exact,
        "ann_x": strings(&rep.ann_x),
        "ann_y": strings(&rep.ann_y),
        "failures": rep.failures,
    })))
}

fn ann(s: &Session, elem: &str, ring: &str) -> Result<CommandReport, JobError> {
    let r = s.ring(ring)?;
    let e = s.elem(r, elem)?;
    let gens = annihilator(r, &e).map_err(|e| fail("ring", e))?;
    Ok(CommandReport::new("", "ring", Status::Done, format!("{} generators", gens.len()))
        .with_details(json!({ "element": e.to_string(), "ring": ring, "generators": strings(&gens) })))
}

fn resolve(
    s: &mut Session,
    ring: &str,
    module: &ModuleSpec,
    hmax: i64,
    dmax: i64,
    name: &Option<String>,
) -> Result<CommandReport, JobError> {
    let r = s.ring(ring)?.clone();
    let gens = match module {
        ModuleSpec::Elem(e) => vec![s.poly(&r, e)?],
        ModuleSpec::Matrix(m) => m[0].iter().map(|e| s.poly(&r, e)).collect::<Result<_, _>>()?,
    };
    let pres = ModulePresentation::cyclic(&r, &gens).map_err(|e| fail("resolution", e))?;
    let res = minimal_resolution(&r, &pres, hmax, dmax).map_err(|e| fail("resolution", e))?;
    let steps: Vec<Value> = res
        .steps
        .iter()
        .map(|st| {
            json!({
                "index": st.index,
                "twists": res.betti(st.index),
                "certified_through": st.certified_through,
                "status": if st.status == StepStatus::Certified { "certified" } else { "uncertified" },
            })
        })
        .collect();
    let betti: Vec<String> = res.steps.iter().map(|st| st.twists.len().to_string()).collect();
    let mut rep = CommandReport::new("", "resolution", Status::Done, format!("ranks {}", betti.join(" ")))
        .with_details(json!({ "dmax": dmax, "hmax": hmax, "steps": steps }));
    for st in res.steps.iter().filter(|st| st.status == StepStatus::Uncertified) {
        rep.warnings.push(format!("step {} is uncertified at dmax {dmax}", st.index));
    }
    if let Some(n) = name {
        s.complexes.insert(n.clone(), res.complex);
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn operators(
    s: &mut Session,
    complex: &str,
    x: &str,
    y: &str,
    zs: &[String],
    lift: LiftChoice,
    name: &Option<String>,
    key: String,
) -> Result<CommandReport, JobError> {
    let f = s.complexes.get(complex).ok_or_else(|| fail("job", format!("undefined complex `{complex}`")))?.clone();
    let rname = f.ring().name().to_string();
    let q = s
        .quotients
        .get(&rname)
        .ok_or_else(|| fail("operators", format!("{rname} is not defined as a quotient")))?
        .clone();
    let (xe, ye) = (s.elem(&q.source, x)?, s.elem(&q.source, y)?);
    let zp: Vec<Polynomial> = zs.iter().map(|z| s.poly(&q.target, z)).collect::<Result<_, _>>()?;
    let policy = match lift {
        LiftChoice::Canonical => LiftPolicy::Canonical,
        LiftChoice::Random(seed) => LiftPolicy::Randomized(seed.unwrap_or(s.seed)),
    };
    let builder = OperatorBuilder::new(&q, &xe, &ye).map_err(|e| fail("operators", e))?;
    let b = builder.build(&f, &zp, policy.clone()).map_err(|e| fail("operators", e))?;
    let psi_z: Vec<Value> = b.psi_z.iter().map(|(z, m)| json!({ "z": z.to_string(), "map": map_json(m) })).collect();
    let checks: Vec<Value> = b
        .chain_checks
        .iter()
        .map(|(n, v)| json!({ "map": n, "chain_map": v.map(|b| json!(b)).unwrap_or(json!("no equation in window")) }))
        .collect();
    let mut rep = CommandReport::new("", "operators", Status::Done, "contracts hold").with_details(json!({
        "lift": policy.tag(),
        "ann_y": strings(&builder.ann_y),
        "psi_tilde": map_json(&b.psi_tilde),
        "phi_tilde": map_json(&b.phi_tilde),
        "psi": map_json(&b.psi),
        "phi": map_json(&b.phi),
        "psi_z": psi_z,
        "chain_checks": checks,
    }));
    rep.warnings = b.warnings.clone();
    let key = name.clone().unwrap_or(key);
    s.bundles.insert(key.clone(), b);
    s.last_bundle = Some(key);
    Ok(rep)
}

fn homotopy(s: &Session, map: &MapRef, window: (i64, i64), flipped: bool) -> Result<CommandReport, JobError> {
    let key = map.bundle.clone().or_else(|| s.last_bundle.clone()).ok_or_else(|| fail("homotopy", "no operators built"))?;
    let b = s.bundles.get(&key).ok_or_else(|| fail("homotopy", format!("undefined bundle `{key}`")))?;
    let ring = b.complex().ring().clone();
    let (g, label) = match &map.op {
        OpRef::Phi => (b.phi.clone(), "phi".to_string()),
        OpRef::Psi(z) => {
            let zp = s.poly(&ring, z)?;
            (b.psi_for(&zp), format!("psi_{zp}"))
        }
    };
    let f = b.complex();
    let graded = ring.is_graded() && g.internal_degree.is_some();
    let mode = if graded { Mode::Graded } else { Mode::Bounded(UNGRADED_BOUND) };
    let conv = if flipped { Convention::Flipped } else { Convention::Standard };
    let prob = HomotopyProblem::new(&g, f, window).with_convention(conv).with_mode(mode);
    let out = null_homotopy(&prob).map_err(|e| fail("homotopy", e))?;
    let scope = if graded { String::new() } else { format!(" (entries of degree <= {UNGRADED_BOUND})") };
    let verdict = match &out {
        HomotopyOutcome::NullHomotopic(_) => format!("null-homotopic on window {}:{}{scope}", window.0, window.1),
        HomotopyOutcome::NotNullHomotopic(_) => format!("not null-homotopic{scope}"),
    };
    let mut details = json!({
        "map": label,
        "hom_degree": g.hom_degree,
        "theta_internal_degree": g.internal_degree,
        "window": [window.0, window.1],
        "equations": prob.equation_indices(),
        "convention": if flipped { "flipped" } else { "standard" },
        "bounded": !graded,
    });
    match &out {
        HomotopyOutcome::NullHomotopic(c) => details["theta"] = map_json(&c.theta),
        HomotopyOutcome::NotNullHomotopic(c) => details["witness_rows"] = json!(c.support()),
    }
    let mut rep = CommandReport::new("", "homotopy", Status::Done, verdict).with_details(details);
    rep.certificates.push(Certificate::from_outcome(label, &out));
    if matches!(out, HomotopyOutcome::NullHomotopic(_)) {
        rep.warnings.push("feasibility is certified on the window only".into());
    }
    Ok(rep)
}

/// Runs one command against the session.
pub fn run_command(s: &mut Session, cmd: &Command, index: usize) -> Result<Vec<CommandReport>, JobError> {
    let start = Instant::now();
    let mut rep = match cmd {
        Command::CheckEzd { ring, x, y } => check_ezd(s, ring, x, y)?,
        Command::Ann { elem, ring } => ann(s, elem, ring)?,
        Command::Resolve { ring, module, hmax, dmax, name } => resolve(s, ring, module, *hmax, *dmax, name)?,
        Command::OperatorsBuild { complex, x, y, zs, lift, name } => {
            operators(s, complex, x, y, zs, *lift, name, format!("#{index}"))?
        }
        Command::HomotopyCheck { map, window, flipped } => homotopy(s, map, *window, *flipped)?,
        Command::ReproduceExample { dmax } => {
            let r = reproduce_example(&ExampleOptions { dmax: dmax.unwrap_or(ExampleOptions::default().dmax), ..Default::default() });
            return Ok(r.commands);
        }
    };
    rep.command = cmd.to_string();
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(vec![rep])
}

/// Runs every item in order; stops at the first error, which is reported.
pub fn run(job: &JobFile) -> Report {
    let start = Instant::now();
    let mut report = Report::default();
    let mut s = Session::new(default_seed());
    for (k, item) in job.items.iter().enumerate() {
        let result = match item {
            Item::Command(c) => run_command(&mut s, c, k),
            other => s.define(other).map(|_| Vec::new()),
        };
        match result {
            Ok(reps) => report.commands.extend(reps),
            Err(e) => {
                let module = match &e {
                    JobError::Run { module, .. } => *module,
                    _ => "job",
                };
                report.commands.push(CommandReport::new(item.to_string(), module, Status::Error, e.to_string()));
                break;
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}
