//! Minimal graded free resolutions by degreewise linear algebra.
//!
//! Each step computes the kernel of the previous differential one internal
//! degree at a time and picks kernel vectors outside the submodule generated
//! by the generators already chosen.

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{validate_complex, ComplexError, FreeMap, GradedComplex, GradedFreeModule, PolyMatrix};
use crate::linalg::{Echelon, QMatrix};
use crate::poly::{Monomial, Polynomial, Rational};
use crate::ring::PresentedRing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("resolutions need a graded ring")]
    Ungraded,
    #[error("invalid bounds: {0}")]
    Bounds(String),
}

/// Cokernel of `relations: F_1 -> F_0`.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub generators: GradedFreeModule,
    pub relations: FreeMap,
}

impl ModulePresentation {
    /// `R / (gens)`; generators must be homogeneous.
    pub fn cyclic(ring: &PresentedRing, gens: &[Polynomial]) -> Result<Self, ResolutionError> {
        let mut twists = Vec::new();
        let mut row = Vec::new();
        for g in gens {
            let g = ring.reduce(g);
            if g.is_zero() {
                continue;
            }
            let d = g
                .homogeneous_degree()
                .ok_or_else(|| ResolutionError::Bounds(format!("relation {g} is not homogeneous")))?;
            twists.push(-(d as i64));
            row.push(g);
        }
        let n = row.len();
        let relations = FreeMap::new(
            GradedFreeModule::new(twists),
            GradedFreeModule::free(1),
            PolyMatrix::from_rows(ring.poly_ring(), vec![row], n)?,
        )?;
        Ok(ModulePresentation {
            generators: GradedFreeModule::free(1),
            relations,
        })
    }

    pub fn from_map(relations: FreeMap, ring: &PresentedRing) -> Result<Self, ResolutionError> {
        if let Some((row, col, expected)) = relations.degree_violation(0) {
            return Err(ComplexError::Degree {
                what: "presentation".into(),
                row,
                col,
                expected,
            }
            .into());
        }
        let relations = FreeMap {
            matrix: relations.matrix.reduce(ring),
            ..relations
        };
        Ok(ModulePresentation {
            generators: relations.target.clone(),
            relations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Certified,
    Uncertified,
}

/// Per-step bookkeeping: `F_index` has `twists`; Betti numbers are trusted in
/// internal degrees up to `certified_through`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepInfo {
    pub index: i64,
    pub twists: Vec<i64>,
    pub certified_through: i64,
    pub status: StepStatus,
}

#[derive(Debug, Clone)]
pub struct ResolutionResult {
    pub complex: GradedComplex,
    pub steps: Vec<StepInfo>,
    pub dmax: i64,
}

impl ResolutionResult {
    /// Twists of `F_i` sorted descending.
    pub fn betti(&self, i: i64) -> Vec<i64> {
        self.complex.module(i).map(|m| m.sorted_twists()).unwrap_or_default()
    }

    pub fn all_certified(&self) -> bool {
        self.steps.iter().all(|s| s.status == StepStatus::Certified)
    }
}

fn max_degree(m: &GradedFreeModule) -> i64 {
    (0..m.rank()).map(|j| m.generator_degree(j)).max().unwrap_or(i64::MIN / 4)
}

fn min_degree(m: &GradedFreeModule) -> i64 {
    (0..m.rank()).map(|j| m.generator_degree(j)).min().unwrap_or(0)
}

/// Matrix of multiplication by each variable from degree `d - w_v` to `d`.
fn variable_action(ring: &PresentedRing, module: &GradedFreeModule, d: i64) -> Result<Vec<(i64, QMatrix)>, ComplexError> {
    let pr = ring.poly_ring();
    let mut out = Vec::new();
    for (v, &w) in pr.weights().iter().enumerate() {
        let x = Polynomial::term(pr, Rational::from_integer(1.into()), Monomial::variable(pr.nvars(), v));
        let mut m = PolyMatrix::zeros(pr, module.rank(), module.rank());
        for j in 0..module.rank() {
            m.set(j, j, x.clone());
        }
        let map = FreeMap {
            source: module.clone(),
            target: module.clone(),
            matrix: m,
        };
        out.push((w as i64, map.degreewise_matrix(ring, w as i64, d - w as i64)?));
    }
    Ok(out)
}

/// Column of polynomials for a coordinate vector in the degree-`d` piece.
fn vector_to_column(ring: &PresentedRing, module: &GradedFreeModule, d: i64, v: &[Rational]) -> Result<Vec<Polynomial>, ComplexError> {
    let piece = module.piece(ring, d)?;
    let mut terms: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); module.rank()];
    for ((j, m), c) in piece.into_iter().zip(v) {
        if !c.is_zero() {
            terms[j].push((m, c.clone()));
        }
    }
    Ok(terms
        .into_iter()
        .map(|t| Polynomial::from_terms(ring.poly_ring(), t))
        .collect())
}

/// Minimal homogeneous generators, degree by degree in `[dlo, dmax]`, of the
/// submodule of `ambient` whose degree-`d` piece is spanned by `subspace(d)`.
fn minimal_generators(
    ring: &PresentedRing,
    ambient: &GradedFreeModule,
    dlo: i64,
    dmax: i64,
    shuffle: Option<&mut ChaCha8Rng>,
    mut subspace: impl FnMut(i64) -> Result<Vec<Vec<Rational>>, ComplexError>,
) -> Result<Vec<(i64, Vec<Polynomial>)>, ComplexError> {
    let mut shuffle = shuffle;
    // Basis of the generated submodule per degree, offset by dlo.
    let mut generated: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut chosen = Vec::new();
    for d in dlo..=dmax {
        let dim = ambient.piece(ring, d)?.len();
        let mut ech = Echelon::new(dim);
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        for (w, action) in variable_action(ring, ambient, d)? {
            let prev = d - w;
            if prev < dlo {
                continue;
            }
            for v in &generated[(prev - dlo) as usize] {
                let image = action.mul_vec(v);
                if ech.insert_dense(&image) {
                    basis.push(image);
                }
            }
        }
        let mut candidates = subspace(d)?;
        if let Some(rng) = shuffle.as_deref_mut() {
            candidates.shuffle(rng);
        }
        for v in candidates {
            if ech.insert_dense(&v) {
                chosen.push((d, vector_to_column(ring, ambient, d, &v)?));
                basis.push(v);
            }
        }
        generated.push(basis);
    }
    Ok(chosen)
}

fn assemble(ring: &PresentedRing, target: &GradedFreeModule, gens: Vec<(i64, Vec<Polynomial>)>) -> Result<FreeMap, ComplexError> {
    let source = GradedFreeModule::new(gens.iter().map(|(d, _)| -d).collect());
    let mut m = PolyMatrix::zeros(ring.poly_ring(), target.rank(), source.rank());
    for (c, (_, col)) in gens.into_iter().enumerate() {
        for (r, p) in col.into_iter().enumerate() {
            m.set(r, c, p);
        }
    }
    FreeMap::new(source, target.clone(), m)
}

/// Kernel generators of `d: F_{i-1} -> F_{i-2}` up to degree `dmax`.
fn kernel_step(ring: &PresentedRing, d: &FreeMap, dmax: i64, shuffle: Option<&mut ChaCha8Rng>) -> Result<FreeMap, ComplexError> {
    let dlo = min_degree(&d.source);
    let gens = minimal_generators(ring, &d.source, dlo, dmax, shuffle, |deg| {
        let m = d.degreewise_matrix(ring, 0, deg)?;
        if m.nrows() == 0 {
            return Ok((0..m.ncols())
                .map(|k| {
                    let mut v = vec![Rational::zero(); m.ncols()];
                    v[k] = Rational::from_integer(1.into());
                    v
                })
                .collect());
        }
        Ok(m.nullspace())
    })?;
    assemble(ring, &d.source, gens)
}

fn status_for(prev: &StepInfo, prev_module: &GradedFreeModule, new: &GradedFreeModule, dmax: i64) -> (i64, StepStatus) {
    let through = dmax - max_degree(prev_module).max(0);
    let ok = prev.status == StepStatus::Certified && (new.rank() == 0 || max_degree(new) <= through);
    (through, if ok { StepStatus::Certified } else { StepStatus::Uncertified })
}

/// Resolution of `m` through `F_hmax`, with kernels computed in internal
/// degrees up to `dmax`.
///
/// Step `i` is certified when the previous step is and all generators of
/// `F_i` lie in degrees at most `dmax` minus the top generator degree of
/// `F_{i-1}`.
pub fn minimal_resolution(
    ring: &Arc<PresentedRing>,
    m: &ModulePresentation,
    hmax: i64,
    dmax: i64,
) -> Result<ResolutionResult, ResolutionError> {
    minimal_resolution_with(ring, m, hmax, dmax, None)
}

/// As `minimal_resolution`; with a seed, kernel bases are visited in a
/// shuffled order (the Betti numbers must not change).
pub fn minimal_resolution_with(
    ring: &Arc<PresentedRing>,
    m: &ModulePresentation,
    hmax: i64,
    dmax: i64,
    shuffle_seed: Option<u64>,
) -> Result<ResolutionResult, ResolutionError> {
    if !ring.is_graded() {
        return Err(ResolutionError::Ungraded);
    }
    if hmax < 1 {
        return Err(ResolutionError::Bounds(format!("hmax = {hmax} must be at least 1")));
    }
    let mut rng = shuffle_seed.map(ChaCha8Rng::seed_from_u64);
    let f0 = m.generators.clone();
    let rel = &m.relations;
    let dlo = min_degree(&f0);
    let gens = minimal_generators(ring, &f0, dlo, dmax, rng.as_mut(), |deg| {
        let mat = rel.degreewise_matrix(ring, 0, deg)?;
        Ok((0..mat.ncols()).map(|k| mat.column(k)).collect())
    })?;
    let d1 = assemble(ring, &f0, gens)?;
    let step0 = StepInfo {
        index: 0,
        twists: f0.twists.clone(),
        certified_through: dmax,
        status: StepStatus::Certified,
    };
    let (through, status) = status_for(&step0, &f0, &d1.source, dmax);
    let mut steps = vec![StepInfo {
        index: 1,
        twists: d1.source.twists.clone(),
        certified_through: through,
        status,
    }];
    let mut modules = vec![f0, d1.source.clone()];
    let mut maps = vec![d1];
    for i in 2..=hmax {
        let prev = maps.last().unwrap();
        let next = kernel_step(ring, prev, dmax, rng.as_mut())?;
        let (through, status) = status_for(steps.last().unwrap(), &prev.source, &next.source, dmax);
        steps.push(StepInfo {
            index: i,
            twists: next.source.twists.clone(),
            certified_through: through,
            status,
        });
        modules.push(next.source.clone());
        maps.push(next);
    }
    let complex = GradedComplex::new(ring, 0, modules, maps.into_iter().map(|m| m.matrix).collect(), true)?;
    Ok(ResolutionResult { complex, steps, dmax })
}

/// Appends kernel steps to a complex until it reaches `hmax`. Added steps are
/// labelled with the same rule as `minimal_resolution`, taking the supplied
/// part as certified.
pub fn extend_resolution(f: &GradedComplex, hmax: i64, dmax: i64) -> Result<ResolutionResult, ResolutionError> {
    let ring = f.ring();
    if !ring.is_graded() {
        return Err(ResolutionError::Ungraded);
    }
    if f.hi() == f.lo() {
        return Err(ResolutionError::Bounds("extension needs at least one differential".into()));
    }
    let mut modules: Vec<GradedFreeModule> = f.modules().to_vec();
    let mut maps: Vec<PolyMatrix> = (f.lo() + 1..=f.hi()).map(|i| f.differential(i).unwrap().matrix).collect();
    let mut steps: Vec<StepInfo> = (f.lo()..=f.hi())
        .map(|i| StepInfo {
            index: i,
            twists: f.module(i).unwrap().twists,
            certified_through: dmax,
            status: StepStatus::Certified,
        })
        .collect();
    for i in f.hi() + 1..=hmax {
        let prev = FreeMap {
            source: modules[modules.len() - 1].clone(),
            target: modules[modules.len() - 2].clone(),
            matrix: maps.last().unwrap().clone(),
        };
        let next = kernel_step(ring, &prev, dmax, None)?;
        let (through, status) = status_for(steps.last().unwrap(), &prev.source, &next.source, dmax);
        steps.push(StepInfo {
            index: i,
            twists: next.source.twists.clone(),
            certified_through: through,
            status,
        });
        modules.push(next.source);
        maps.push(next.matrix);
    }
    let complex = GradedComplex::new(ring, f.lo(), modules, maps, f.is_bounded_below())?;
    Ok(ResolutionResult { complex, steps, dmax })
}

/// Result of `verify_resolution_window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowReport {
    pub d_squared_zero: bool,
    pub minimal: bool,
    pub exact: bool,
    pub presents_module: bool,
    pub failures: Vec<String>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.d_squared_zero && self.minimal && self.exact && self.presents_module
    }
}

/// Checks `d^2 = 0`, minimality (no entry has a nonzero constant term),
/// exactness at each interior index in internal degrees up to `dmax`, and that
/// the image of `d_1` equals the relation submodule of `m` in those degrees.
pub fn verify_resolution_window(f: &GradedComplex, m: &ModulePresentation, dmax: i64) -> Result<WindowReport, ResolutionError> {
    let ring = f.ring();
    if !ring.is_graded() {
        return Err(ResolutionError::Ungraded);
    }
    let mut failures = Vec::new();
    let v = validate_complex(f);
    failures.extend(v.violations.iter().cloned());
    let d_squared_zero = v.valid;

    let mut minimal = true;
    for i in f.lo() + 1..=f.hi() {
        let d = f.differential(i).unwrap();
        let unit = d
            .matrix
            .entries()
            .find(|(_, _, p)| !p.constant_term().is_zero())
            .map(|(r, c, p)| format!("d{i}[{r},{c}] = {p} has a unit part"));
        if let Some(msg) = unit {
            minimal = false;
            failures.push(msg);
        }
    }

    let dlo = f.modules().iter().map(min_degree).min().unwrap_or(0);
    let mut exact = true;
    for i in f.lo() + 1..f.hi() {
        let di = f.differential(i).unwrap();
        let dn = f.differential(i + 1).unwrap();
        for d in dlo..=dmax {
            let a = di.degreewise_matrix(ring, 0, d)?;
            let b = dn.degreewise_matrix(ring, 0, d)?;
            let kernel = a.ncols() - a.rank();
            let image = b.rank();
            if kernel != image {
                exact = false;
                failures.push(format!("index {i}, degree {d}: kernel dimension {kernel}, image dimension {image}"));
            }
        }
    }

    let mut presents_module = f.module(f.lo()).map(|f0| f0 == m.generators).unwrap_or(false);
    if !presents_module {
        failures.push("F_0 differs from the generators of the module".into());
    } else if let Some(d1) = f.differential(f.lo() + 1) {
        for d in dlo..=dmax {
            let img = d1.degreewise_matrix(ring, 0, d)?;
            let rel = m.relations.degreewise_matrix(ring, 0, d)?;
            let mut both = Echelon::new(usize::MAX);
            let cols = |q: &QMatrix| (0..q.ncols()).map(|k| q.column(k)).collect::<Vec<_>>();
            for c in cols(&img).into_iter().chain(cols(&rel)) {
                both.insert_dense(&c);
            }
            let (ri, rr) = (img.rank(), rel.rank());
            if both.rank() != ri || both.rank() != rr {
                presents_module = false;
                failures.push(format!("degree {d}: image of d1 has rank {ri}, relations rank {rr}, together {}", both.rank()));
            }
        }
    }
    Ok(WindowReport {
        d_squared_zero,
        minimal,
        exact,
        presents_module,
        failures,
    })
}

#[cfg(test)]
mod tests;
