use std::time::Instant;

use serde_json::{json, Value};

use super::report::{Certificate, CommandReport, Report, Status};
use crate::complex::{is_chain_map, PolyMatrix};
use crate::example::{self, Example};
use crate::homotopy::{ext_class_nonzero, HomotopyOutcome};
use crate::linalg::QMatrix;
use crate::operators::{LiftPolicy, OperatorBuilder, OperatorBundle};
use crate::poly::Polynomial;
use crate::resolution::{extend_resolution, minimal_resolution, verify_resolution_window, ModulePresentation, StepStatus};
use crate::ring::{annihilator, check_exact_pair};

#[derive(Debug, Clone)]
pub struct ExampleOptions {
    /// Internal-degree bound for the Betti-number computation.
    pub dmax: i64,
    /// Replacement for the first element of the pair.
    pub f: String,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        ExampleOptions {
            dmax: 10,
            f: example::F.to_string(),
        }
    }
}

type ItemResult = Result<(Status, String, Value, Vec<Certificate>), String>;

struct Runner {
    report: Report,
    halted: bool,
}

impl Runner {
    fn item(&mut self, name: &str, module: &str, body: impl FnOnce() -> ItemResult) -> Status {
        let command = format!("reproduce-example: {name}");
        if self.halted {
            self.report.commands.push(CommandReport::new(command, module, Status::Skipped, "skipped"));
            return Status::Skipped;
        }
        let start = Instant::now();
        let mut rep = match body() {
            Ok((status, verdict, details, certs)) => {
                let mut r = CommandReport::new(command, module, status, verdict).with_details(details);
                r.certificates = certs;
                r
            }
            Err(e) => CommandReport::new(command, module, Status::Fail, e),
        };
        rep.elapsed_ms = start.elapsed().as_millis() as u64;
        let status = rep.status;
        self.report.commands.push(rep);
        status
    }
}

fn verdict(ok: bool, yes: &str, no: &str) -> (Status, String) {
    if ok {
        (Status::Pass, yes.to_string())
    } else {
        (Status::Fail, no.to_string())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// The stated lifts satisfy `x psi~ ≡ d~ d~` and `y phi~ ≡ d~ psi~ - psi~ d~` over `S`.
fn stated_identities(ex: &Example) -> ItemResult {
    let s = &ex.s;
    let m = |rows: &[&[&str]]| ex.matrix(rows).map_err(e);
    let (d1, d2, d3) = (m(&example::D1)?, m(&example::D2)?, m(&example::D3)?);
    let (p2, p3, f3) = (m(&example::PSI_TILDE_2)?, m(&example::PSI_TILDE_3)?, m(&example::PHI_TILDE_3)?);
    let (x, y) = (ex.f.rep(), s.parse(example::G).map_err(e)?);
    let same = |a: &PolyMatrix, b: &PolyMatrix| a.sub(b).map(|d| d.reduce(s).is_zero()).unwrap_or(false);
    let d1d2 = d1.mul(&d2).map_err(e)?;
    let d2d3 = d2.mul(&d3).map_err(e)?;
    let num = d1.mul(&p3).map_err(e)?.sub(&p2.mul(&d3).map_err(e)?).map_err(e)?;
    let checks = [
        ("d1 d2 equals the stated product", same(&d1d2, &m(&example::D1D2)?)),
        ("d2 d3 equals the stated product", same(&d2d3, &m(&example::D2D3)?)),
        ("x psi2 = d1 d2", same(&p2.mul_scalar(x), &d1d2)),
        ("x psi3 = d2 d3", same(&p3.mul_scalar(x), &d2d3)),
        ("d1 psi3 - psi2 d3 equals the stated numerator", same(&num, &m(&example::PHI_NUMERATOR_3)?)),
        ("y phi3 = d1 psi3 - psi2 d3", same(&f3.mul_scalar(&y), &num)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let details = json!(checks.iter().map(|(n, ok)| json!({ "identity": n, "holds": ok })).collect::<Vec<_>>());
    let (st, v) = verdict(failed.is_empty(), "all identities hold", &format!("failed: {}", failed.join(", ")));
    Ok((st, v, details, vec![]))
}

fn nonvanishing(name: &str, g: &crate::complex::ComplexMap, bundle: &OperatorBundle, window: (i64, i64)) -> ItemResult {
    let (nonzero, out) = ext_class_nonzero(g, bundle.complex(), window).map_err(e)?;
    let details = match &out {
        HomotopyOutcome::NotNullHomotopic(c) => json!({
            "window": [window.0, window.1],
            "theta_internal_degree": g.internal_degree,
            "witness_rows": c.support(),
            "system": [c.system.matrix.nrows(), c.system.matrix.cols],
        }),
        HomotopyOutcome::NullHomotopic(_) => json!({ "window": [window.0, window.1] }),
    };
    let (st, v) = verdict(nonzero, "not null-homotopic", "a homotopy exists on the window");
    Ok((st, v, details, vec![Certificate::from_outcome(name, &out)]))
}

/// Runs every check of the worked example; a failed exact-pair check halts the rest.
pub fn reproduce_example(opts: &ExampleOptions) -> Report {
    let start = Instant::now();
    let mut run = Runner { report: Report::default(), halted: false };
    let ex = match Example::with_f(&opts.f) {
        Ok(ex) => ex,
        Err(err) => {
            run.report.commands.push(CommandReport::new("reproduce-example: setup", "ring", Status::Error, err.to_string()));
            return run.report;
        }
    };
    let t = || ex.s.poly_ring().parse("t").unwrap();

    let st = run.item("exact pair", "ring", || {
        let rep = check_exact_pair(&ex.s, &ex.f, &ex.g).map_err(e)?;
        let (st, v) = verdict(rep.exact, "true", "false");
        let ann = |ps: &[Polynomial]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        Ok((st, v, json!({ "ann_f": ann(&rep.ann_x), "ann_g": ann(&rep.ann_y), "failures": rep.failures }), vec![]))
    });
    if st != Status::Pass {
        run.halted = true;
    }

    run.item("ann_R(g)", "ring", || {
        let g = ex.r.elem(ex.g.rep()).map_err(e)?;
        let gens = annihilator(&ex.r, &g).map_err(e)?;
        let stated: Vec<Polynomial> = example::ANN_G.iter().map(|s| ex.r.parse(s)).collect::<Result<_, _>>().map_err(e)?;
        let ok = ex.r.ideals_equal(&gens, &stated);
        let (st, v) = verdict(ok, "equals (t, y^2, z^2, w^2)", "differs from (t, y^2, z^2, w^2)");
        Ok((st, v, json!({ "generators": gens.iter().map(|p| p.to_string()).collect::<Vec<_>>() }), vec![]))
    });

    run.item("graded dimensions", "ring", || {
        let r1 = ex.r.graded_basis(1).map_err(e)?;
        let r2 = ex.r.graded_basis(2).map_err(e)?;
        let s2 = ex.s.graded_basis(2).map_err(e)?;
        let vars: Vec<Polynomial> = ["x", "y", "z", "w", "t"].iter().map(|v| ex.r.parse(v).unwrap()).collect();
        let coords = |ps: &[Polynomial], d: i64| -> Result<usize, String> {
            let rows = ps.iter().map(|p| ex.r.coordinates(p, d)).collect::<Result<Vec<_>, _>>().map_err(e)?;
            Ok(QMatrix::from_rows(rows).rank())
        };
        let listed: Vec<Polynomial> = example::R2_MONOMIALS.iter().map(|s| ex.r.parse(s).unwrap()).collect();
        let (b1, b2) = (coords(&vars, 1)?, coords(&listed, 2)?);
        let ok = r1.dim() == 5 && b1 == 5 && r2.dim() == 11 && b2 == 11 && s2.dim() == 12;
        let (st, v) = verdict(ok, "dim R_1 = 5, dim R_2 = 11, dim S_2 = 12", "dimension mismatch");
        Ok((st, v, json!({ "R1": r1.dim(), "R2": r2.dim(), "S2": s2.dim(), "rank_of_variables": b1, "rank_of_listed_R2": b2 }), vec![]))
    });

    let res = ex
        .r
        .parse("y")
        .map_err(e)
        .and_then(|y| ModulePresentation::cyclic(&ex.r, &[y]).map_err(e))
        .and_then(|m| minimal_resolution(&ex.r, &m, 3, opts.dmax).map_err(e));
    let expected = example::twists();
    for i in 1..=3i64 {
        run.item(&format!("resolution step {i}"), "resolution", || {
            let res = res.as_ref().map_err(|err| err.clone())?;
            let step = res.steps.iter().find(|s| s.index == i).ok_or("step missing")?;
            let got = res.betti(i);
            let want = &expected[i as usize];
            let details = json!({ "twists": got, "expected": want, "certified_through": step.certified_through, "dmax": opts.dmax });
            if step.status == StepStatus::Uncertified {
                return Ok((Status::Uncertified, format!("uncertified at dmax {}", opts.dmax), details, vec![]));
            }
            let (st, v) = verdict(&got == want, "twists match", "twists differ");
            Ok((st, v, details, vec![]))
        });
    }

    run.item("resolution window", "resolution", || {
        let f = ex.resolution_window(&ex.r).map_err(e)?;
        let m = ModulePresentation::cyclic(&ex.r, &[ex.r.parse("y").map_err(e)?]).map_err(e)?;
        let w = verify_resolution_window(&f, &m, 8).map_err(e)?;
        let (st, v) = verdict(w.passed(), "d^2 = 0, minimal, exact through degree 8", "window check failed");
        Ok((st, v, json!({ "d_squared_zero": w.d_squared_zero, "minimal": w.minimal, "exact": w.exact, "presents_module": w.presents_module, "failures": w.failures }), vec![]))
    });

    let built = OperatorBuilder::new(&ex.quotient, &ex.f, &ex.g).map_err(e).and_then(|b| {
        let f = ex.resolution_window(&ex.r).map_err(e)?;
        let bundle = b.build(&f, &[t()], LiftPolicy::Canonical).map_err(e)?;
        Ok((b, bundle))
    });

    run.item("operator contracts", "operators", || {
        let (_, bundle) = built.as_ref().map_err(|err| err.clone())?;
        let ok = bundle.psi_tilde.internal_degree == Some(-2) && bundle.phi_tilde.internal_degree == Some(-4);
        let (st, v) = verdict(ok, "x psi~ = d~^2 and y phi~ = d~ psi~ - psi~ d~ modulo the ideal", "unexpected internal degrees");
        Ok((st, v, json!({ "psi_internal_degree": bundle.psi_tilde.internal_degree, "phi_internal_degree": bundle.phi_tilde.internal_degree, "lift": "canonical" }), vec![]))
    });

    run.item("stated operator matrices", "operators", || stated_identities(&ex));

    run.item("psi_t is a chain map", "operators", || {
        let (_, bundle) = built.as_ref().map_err(|err| err.clone())?;
        let ok = is_chain_map(&bundle.psi_for(&t()), bundle.complex(), bundle.complex()).map_err(e)?;
        let (st, v) = verdict(ok, "chain map on F_0..F_3", "not a chain map");
        Ok((st, v, json!({}), vec![]))
    });

    run.item("phi is a chain map", "operators", || {
        let (b, _) = built.as_ref().map_err(|err| err.clone())?;
        let f4 = extend_resolution(&ex.resolution_window(&ex.r).map_err(e)?, 4, 9).map_err(e)?.complex;
        let bundle = b.build(&f4, &[], LiftPolicy::Canonical).map_err(e)?;
        let ok = is_chain_map(&bundle.phi, &f4, &f4).map_err(e)?;
        let (st, v) = verdict(ok, "chain map on F_0..F_4", "not a chain map");
        Ok((st, v, json!({ "rank_F4": f4.module(4).map(|m| m.rank()) }), vec![]))
    });

    run.item("phi is not null-homotopic", "homotopy", || {
        let (_, bundle) = built.as_ref().map_err(|err| err.clone())?;
        nonvanishing("phi", &bundle.phi, bundle, (0, 3))
    });

    run.item("psi_t is not null-homotopic", "homotopy", || {
        let (_, bundle) = built.as_ref().map_err(|err| err.clone())?;
        nonvanishing("psi_t", &bundle.psi_for(&t()), bundle, (0, 3))
    });

    run.report.elapsed_ms = start.elapsed().as_millis() as u64;
    run.report
}
