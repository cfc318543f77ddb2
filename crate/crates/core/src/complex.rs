//! Graded free modules, complexes on finite windows, chain maps and their
//! degreewise realization as rational matrices.
//!
//! Matrices act on column vectors. A module `⊕ R(a_j)` has generators in
//! degrees `-a_j`; a map of internal degree `e` has entry `(i, j)` homogeneous
//! of degree `-a_j + b_i + e` where `b_i` are the target twists.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::poly::{int, Monomial, PolyRing, Polynomial, Rational};
use crate::ring::{PresentedRing, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row},{col}) of {what} is not homogeneous of degree {expected}")]
    Degree {
        what: String,
        row: usize,
        col: usize,
        expected: i64,
    },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("ring is not graded")]
    Ungraded,
    #[error("maps live over different rings")]
    RingMismatch,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Dense matrix of polynomials in an ambient polynomial ring.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    ring: Arc<PolyRing>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<PolyRing>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<PolyRing>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    /// Builds a `rows x cols` matrix; `cols` is needed when `rows` is empty.
    pub fn from_rows(ring: &Arc<PolyRing>, rows: Vec<Vec<Polynomial>>, cols: usize) -> Result<Self, ComplexError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(ComplexError::Shape(format!("row of length {} in a matrix with {cols} columns", bad.len())));
        }
        let nrows = rows.len();
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses rows of polynomial text.
    pub fn parse(ring: &Arc<PolyRing>, rows: &[&[&str]], cols: usize) -> Result<Self, ComplexError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| ring.parse(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ComplexError::Ring(RingError::Poly(e)))?;
        Self::from_rows(ring, rows, cols)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / self.cols.max(1), k % self.cols.max(1), p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn same_shape(&self, other: &PolyMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, ComplexError> {
        if self.cols != other.rows {
            return Err(ComplexError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        let next = cur + &(a * b);
                        out.set(i, j, next);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Result<PolyMatrix, ComplexError> {
        if !self.same_shape(other) {
            return Err(ComplexError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix, ComplexError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, ComplexError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map_entries(|p| p.scale(c))
    }

    pub fn mul_scalar(&self, p: &Polynomial) -> PolyMatrix {
        self.map_entries(|e| e * p)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map_entries(|p| -p)
    }

    pub fn reduce(&self, ring: &PresentedRing) -> PolyMatrix {
        self.map_entries(|p| ring.reduce(p))
    }

    /// Rows of printed entries.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|p| p.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_strings())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|p| p.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `⊕_j R(twists[j])`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedFreeModule {
    pub twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i64>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn zero() -> Self {
        GradedFreeModule { twists: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        GradedFreeModule { twists: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Internal degree of the `j`-th basis element.
    pub fn generator_degree(&self, j: usize) -> i64 {
        -self.twists[j]
    }

    /// Twists sorted descending, the usual display order.
    pub fn sorted_twists(&self) -> Vec<i64> {
        let mut t = self.twists.clone();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Standard-monomial basis of the degree-`d` piece: pairs (generator, monomial).
    pub fn piece(&self, ring: &PresentedRing, d: i64) -> Result<Vec<(usize, Monomial)>, ComplexError> {
        let mut out = Vec::new();
        for j in 0..self.rank() {
            let b = ring.graded_basis(d - self.generator_degree(j)).map_err(|e| match e {
                RingError::NotGraded(_) => ComplexError::Ungraded,
                e => e.into(),
            })?;
            out.extend(b.monomials.iter().map(|m| (j, m.clone())));
        }
        Ok(out)
    }
}

impl fmt::Display for GradedFreeModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "0");
        }
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for t in self.sorted_twists() {
            match groups.last_mut() {
                Some((u, n)) if *u == t => *n += 1,
                _ => groups.push((t, 1)),
            }
        }
        let parts: Vec<String> = groups
            .iter()
            .map(|(t, n)| {
                let base = if *t == 0 { "R".to_string() } else { format!("R({t})") };
                if *n > 1 {
                    format!("{base}^{n}")
                } else {
                    base
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism between graded free modules.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeMap {
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    pub matrix: PolyMatrix,
}

impl FreeMap {
    pub fn new(source: GradedFreeModule, target: GradedFreeModule, matrix: PolyMatrix) -> Result<Self, ComplexError> {
        if matrix.nrows() != target.rank() || matrix.ncols() != source.rank() {
            return Err(ComplexError::Shape(format!(
                "{}x{} matrix for a map of rank {} to rank {}",
                matrix.nrows(),
                matrix.ncols(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(FreeMap { source, target, matrix })
    }

    pub fn zero(ring: &Arc<PolyRing>, source: &GradedFreeModule, target: &GradedFreeModule) -> Self {
        FreeMap {
            source: source.clone(),
            target: target.clone(),
            matrix: PolyMatrix::zeros(ring, target.rank(), source.rank()),
        }
    }

    /// Required degree of entry `(r, c)` for a map of internal degree `e`.
    pub fn entry_degree(&self, r: usize, c: usize, e: i64) -> i64 {
        self.source.generator_degree(c) - self.target.generator_degree(r) + e
    }

    /// First entry that is not homogeneous of the required degree.
    pub fn degree_violation(&self, e: i64) -> Option<(usize, usize, i64)> {
        self.matrix.entries().find_map(|(r, c, p)| {
            let want = self.entry_degree(r, c, e);
            let ok = p.is_zero() || (want >= 0 && p.homogeneous_degree() == Some(want as u64));
            (!ok).then_some((r, c, want))
        })
    }

    pub fn compose(&self, inner: &FreeMap, ring: &PresentedRing) -> Result<FreeMap, ComplexError> {
        if inner.target.rank() != self.source.rank() {
            return Err(ComplexError::Shape(format!(
                "composing through modules of rank {} and {}",
                inner.target.rank(),
                self.source.rank()
            )));
        }
        let m = self.matrix.mul(&inner.matrix)?.reduce(ring);
        FreeMap::new(inner.source.clone(), self.target.clone(), m)
    }

    /// Matrix of the map from the degree-`d` piece of the source to the
    /// degree-`d + e` piece of the target, in standard-monomial bases.
    pub fn degreewise_matrix(&self, ring: &PresentedRing, e: i64, d: i64) -> Result<QMatrix, ComplexError> {
        let cols = self.source.piece(ring, d)?;
        let rows = self.target.piece(ring, d + e)?;
        let mut offsets = Vec::with_capacity(self.target.rank());
        let mut acc = 0;
        for i in 0..self.target.rank() {
            offsets.push(acc);
            acc += ring.graded_basis(d + e - self.target.generator_degree(i))?.dim();
        }
        let mut out = QMatrix::zeros(rows.len(), cols.len());
        for (k, (j, m)) in cols.iter().enumerate() {
            for (i, &offset) in offsets.iter().enumerate() {
                let p = self.matrix.get(i, *j);
                if p.is_zero() {
                    continue;
                }
                let deg = d + e - self.target.generator_degree(i);
                let image = p.mul_term(&int(1), m);
                for (r, v) in ring.coordinates(&image, deg)?.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.set(offset + r, k, v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Complex of graded free modules on the window `[lo, hi]` with `d_i: F_i -> F_{i-1}`.
///
/// When `bounded_below` is set, modules below `lo` are zero (as for a
/// resolution); otherwise they are unknown. Modules above `hi` are unknown.
/// Construction does not require `d^2 = 0`, so lifted sequences fit here too.
#[derive(Debug, Clone)]
pub struct GradedComplex {
    ring: Arc<PresentedRing>,
    lo: i64,
    modules: Vec<GradedFreeModule>,
    differentials: Vec<PolyMatrix>,
    bounded_below: bool,
}

impl GradedComplex {
    /// `differentials[k]` is `d_{lo+k+1}`.
    pub fn new(
        ring: &Arc<PresentedRing>,
        lo: i64,
        modules: Vec<GradedFreeModule>,
        differentials: Vec<PolyMatrix>,
        bounded_below: bool,
    ) -> Result<Self, ComplexError> {
        if modules.is_empty() {
            return Err(ComplexError::Shape("a complex needs at least one module".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(ComplexError::Shape(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        let mut ds = Vec::with_capacity(differentials.len());
        for (k, d) in differentials.into_iter().enumerate() {
            if !PolyRing::same(d.ring(), ring.poly_ring()) {
                return Err(ComplexError::RingMismatch);
            }
            let i = lo + k as i64 + 1;
            let map = FreeMap::new(modules[k + 1].clone(), modules[k].clone(), d.reduce(ring))
                .map_err(|e| ComplexError::Shape(format!("d{i}: {e}")))?;
            if ring.is_graded() {
                if let Some((row, col, expected)) = map.degree_violation(0) {
                    return Err(ComplexError::Degree {
                        what: format!("d{i}"),
                        row,
                        col,
                        expected,
                    });
                }
            }
            ds.push(map.matrix);
        }
        Ok(GradedComplex {
            ring: ring.clone(),
            lo,
            modules,
            differentials: ds,
            bounded_below,
        })
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn is_bounded_below(&self) -> bool {
        self.bounded_below
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// `F_i`, or `None` where the complex is unknown.
    pub fn module(&self, i: i64) -> Option<GradedFreeModule> {
        if i < self.lo {
            self.bounded_below.then(GradedFreeModule::zero)
        } else if i > self.hi() {
            None
        } else {
            Some(self.modules[(i - self.lo) as usize].clone())
        }
    }

    /// `d_i: F_i -> F_{i-1}` where both modules are known.
    pub fn differential(&self, i: i64) -> Option<FreeMap> {
        let src = self.module(i)?;
        let tgt = self.module(i - 1)?;
        if i > self.lo && i <= self.hi() {
            Some(FreeMap {
                source: src,
                target: tgt,
                matrix: self.differentials[(i - self.lo - 1) as usize].clone(),
            })
        } else {
            Some(FreeMap::zero(self.ring.poly_ring(), &src, &tgt))
        }
    }

    /// Same modules and matrices, read over another ring on the same variables.
    pub fn over(&self, ring: &Arc<PresentedRing>) -> Result<GradedComplex, ComplexError> {
        GradedComplex::new(ring, self.lo, self.modules.clone(), self.differentials.clone(), self.bounded_below)
    }

    /// Restriction to `[lo, hi]` (which must lie inside the window).
    pub fn truncate(&self, lo: i64, hi: i64) -> Result<GradedComplex, ComplexError> {
        if lo < self.lo || hi > self.hi() || lo > hi {
            return Err(ComplexError::Shape(format!("[{lo},{hi}] is not inside [{},{}]", self.lo, self.hi())));
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Ok(GradedComplex {
            ring: self.ring.clone(),
            lo,
            modules: self.modules[a..=b].to_vec(),
            differentials: self.differentials[a..b].to_vec(),
            bounded_below: self.bounded_below && lo == self.lo,
        })
    }
}

/// Result of `validate_complex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks `d_{i-1} d_i = 0` across the window and internal degree 0 of every
/// differential in graded mode.
pub fn validate_complex(f: &GradedComplex) -> ComplexReport {
    let mut violations = Vec::new();
    for i in f.lo()..=f.hi() + 1 {
        let Some(d) = f.differential(i) else { continue };
        if f.ring.is_graded() {
            if let Some((r, c, want)) = d.degree_violation(0) {
                violations.push(format!("d{i}[{r},{c}] is not homogeneous of degree {want}"));
            }
        }
        if let Some(d_prev) = f.differential(i - 1) {
            match d_prev.compose(&d, &f.ring) {
                Ok(c) if !c.matrix.is_zero() => {
                    violations.push(format!("d{}*d{} = {} is not zero", i - 1, i, c.matrix))
                }
                Ok(_) => {}
                Err(e) => violations.push(format!("d{}*d{}: {e}", i - 1, i)),
            }
        }
    }
    ComplexReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// A map of homological degree `m`: `components[i]: F_i -> G_{i+m}`.
#[derive(Debug, Clone)]
pub struct ComplexMap {
    pub ring: Arc<PresentedRing>,
    pub hom_degree: i64,
    pub internal_degree: Option<i64>,
    pub components: BTreeMap<i64, FreeMap>,
}

impl ComplexMap {
    pub fn new(ring: &Arc<PresentedRing>, hom_degree: i64, internal_degree: Option<i64>) -> Self {
        ComplexMap {
            ring: ring.clone(),
            hom_degree,
            internal_degree,
            components: BTreeMap::new(),
        }
    }

    /// Inserts component `i`, reducing entries and checking homogeneity when graded.
    pub fn insert(&mut self, i: i64, map: FreeMap) -> Result<(), ComplexError> {
        let map = FreeMap {
            matrix: map.matrix.reduce(&self.ring),
            ..map
        };
        if let Some(e) = self.internal_degree {
            if let Some((row, col, expected)) = map.degree_violation(e) {
                return Err(ComplexError::Degree {
                    what: format!("component {i}"),
                    row,
                    col,
                    expected,
                });
            }
        }
        self.components.insert(i, map);
        Ok(())
    }

    pub fn identity(f: &GradedComplex) -> Self {
        let mut g = ComplexMap::new(&f.ring, 0, f.ring.is_graded().then_some(0));
        for i in f.lo()..=f.hi() {
            let m = f.module(i).unwrap();
            let id = PolyMatrix::identity(f.ring.poly_ring(), m.rank());
            g.components.insert(i, FreeMap { source: m.clone(), target: m, matrix: id });
        }
        g
    }

    pub fn zero(f: &GradedComplex, g: &GradedComplex, m: i64, e: Option<i64>) -> Self {
        let mut out = ComplexMap::new(&f.ring, m, e);
        for i in f.lo()..=f.hi() {
            if let (Some(s), Some(t)) = (f.module(i), g.module(i + m)) {
                out.components.insert(i, FreeMap::zero(f.ring.poly_ring(), &s, &t));
            }
        }
        out
    }

    pub fn component(&self, i: i64) -> Option<&FreeMap> {
        self.components.get(&i)
    }

    /// Component `i`, or the zero map when source or target is known to vanish.
    pub fn component_in(&self, i: i64, f: &GradedComplex, g: &GradedComplex) -> Option<FreeMap> {
        if let Some(c) = self.components.get(&i) {
            return Some(c.clone());
        }
        let s = f.module(i)?;
        let t = g.module(i + self.hom_degree)?;
        (s.rank() == 0 || t.rank() == 0).then(|| FreeMap::zero(self.ring.poly_ring(), &s, &t))
    }

    pub fn indices(&self) -> Vec<i64> {
        self.components.keys().copied().collect()
    }

    fn combine(&self, other: &ComplexMap, sign: i64) -> Result<ComplexMap, ComplexError> {
        if !Arc::ptr_eq(&self.ring, &other.ring) {
            return Err(ComplexError::RingMismatch);
        }
        if self.hom_degree != other.hom_degree || self.internal_degree != other.internal_degree {
            return Err(ComplexError::DegreeMismatch(format!(
                "({}, {:?}) vs ({}, {:?})",
                self.hom_degree, self.internal_degree, other.hom_degree, other.internal_degree
            )));
        }
        let mut out = ComplexMap::new(&self.ring, self.hom_degree, self.internal_degree);
        for (i, a) in &self.components {
            if let Some(b) = other.components.get(i) {
                let m = if sign > 0 { a.matrix.add(&b.matrix)? } else { a.matrix.sub(&b.matrix)? };
                out.components.insert(
                    *i,
                    FreeMap {
                        source: a.source.clone(),
                        target: a.target.clone(),
                        matrix: m.reduce(&self.ring),
                    },
                );
            }
        }
        Ok(out)
    }

    /// Sum on the common indices.
    pub fn add(&self, other: &ComplexMap) -> Result<ComplexMap, ComplexError> {
        self.combine(other, 1)
    }

    /// Difference on the common indices.
    pub fn sub(&self, other: &ComplexMap) -> Result<ComplexMap, ComplexError> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &Rational) -> ComplexMap {
        self.map_matrices(|m| m.scale(c), self.internal_degree)
    }

    /// Multiplication by a ring element of degree `deg` (when homogeneous).
    pub fn mul_element(&self, p: &Polynomial) -> ComplexMap {
        let e = match (self.internal_degree, p.homogeneous_degree()) {
            (Some(e), Some(d)) => Some(e + d as i64),
            (Some(e), None) if p.is_zero() => Some(e),
            _ => None,
        };
        self.map_matrices(|m| m.mul_scalar(p), e)
    }

    fn map_matrices(&self, f: impl Fn(&PolyMatrix) -> PolyMatrix, e: Option<i64>) -> ComplexMap {
        let mut out = ComplexMap::new(&self.ring, self.hom_degree, e);
        for (i, c) in &self.components {
            out.components.insert(
                *i,
                FreeMap {
                    source: c.source.clone(),
                    target: c.target.clone(),
                    matrix: f(&c.matrix).reduce(&self.ring),
                },
            );
        }
        out
    }

    /// The same components read over another ring on the same variables.
    pub fn over(&self, ring: &Arc<PresentedRing>) -> ComplexMap {
        let mut out = ComplexMap::new(ring, self.hom_degree, self.internal_degree);
        for (i, c) in &self.components {
            out.components.insert(
                *i,
                FreeMap {
                    source: c.source.clone(),
                    target: c.target.clone(),
                    matrix: c.matrix.reduce(ring),
                },
            );
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|c| c.matrix.is_zero())
    }

    /// Equal as matrices at every common index, and defined at the same indices.
    pub fn matrices_equal(&self, other: &ComplexMap) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().all(|(i, a)| {
                other
                    .components
                    .get(i)
                    .map(|b| a.matrix == b.matrix)
                    .unwrap_or(false)
            })
    }

    /// Whether every component has the declared internal degree.
    pub fn check_internal_degree(&self) -> Result<(), ComplexError> {
        let Some(e) = self.internal_degree else {
            return Ok(());
        };
        for (i, c) in &self.components {
            if let Some((row, col, expected)) = c.degree_violation(e) {
                return Err(ComplexError::Degree {
                    what: format!("component {i}"),
                    row,
                    col,
                    expected,
                });
            }
        }
        Ok(())
    }

    pub fn degreewise_matrix(&self, i: i64, d: i64) -> Result<QMatrix, ComplexError> {
        let c = self
            .components
            .get(&i)
            .ok_or_else(|| ComplexError::WindowTooSmall(format!("no component at index {i}")))?;
        let e = self.internal_degree.ok_or(ComplexError::Ungraded)?;
        c.degreewise_matrix(&self.ring, e, d)
    }
}

/// `g ∘ h` at every index where both components exist.
pub fn compose(g: &ComplexMap, h: &ComplexMap) -> Result<ComplexMap, ComplexError> {
    if !Arc::ptr_eq(&g.ring, &h.ring) {
        return Err(ComplexError::RingMismatch);
    }
    let e = match (g.internal_degree, h.internal_degree) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let mut out = ComplexMap::new(&g.ring, g.hom_degree + h.hom_degree, e);
    for (i, hc) in &h.components {
        if let Some(gc) = g.components.get(&(i + h.hom_degree)) {
            out.components.insert(*i, gc.compose(hc, &g.ring)?);
        }
    }
    Ok(out)
}

/// One evaluated chain-map equation `d g_i - (-1)^m g_{i-1} d` at source index `i`.
#[derive(Debug, Clone)]
pub struct ChainCheck {
    pub index: i64,
    pub residual: PolyMatrix,
}

/// Evaluates `d^G_{i+m} g_i - (-1)^m g_{i-1} d^F_i` wherever every piece is known.
pub fn chain_map_residuals(g: &ComplexMap, f: &GradedComplex, t: &GradedComplex) -> Result<Vec<ChainCheck>, ComplexError> {
    let m = g.hom_degree;
    let lo = f.lo().min(t.lo() - m) - 1;
    let hi = f.hi().max(t.hi() - m) + 1;
    let mut out = Vec::new();
    for i in lo..=hi {
        let (Some(gi), Some(gp), Some(df), Some(dt)) = (
            g.component_in(i, f, t),
            g.component_in(i - 1, f, t),
            f.differential(i),
            t.differential(i + m),
        ) else {
            continue;
        };
        let left = dt.compose(&gi, &g.ring)?;
        let right = gp.compose(&df, &g.ring)?;
        let residual = if m % 2 == 0 {
            left.matrix.sub(&right.matrix)?
        } else {
            left.matrix.add(&right.matrix)?
        };
        out.push(ChainCheck {
            index: i,
            residual: residual.reduce(&g.ring),
        });
    }
    Ok(out)
}

/// Chain map test: commutation for even degree, anticommutation for odd.
/// Errors when the window admits no equation.
pub fn is_chain_map(g: &ComplexMap, f: &GradedComplex, t: &GradedComplex) -> Result<bool, ComplexError> {
    let checks = chain_map_residuals(g, f, t)?;
    let nontrivial: Vec<&ChainCheck> = checks
        .iter()
        .filter(|c| c.residual.nrows() > 0 && c.residual.ncols() > 0)
        .collect();
    if nontrivial.is_empty() {
        return Err(ComplexError::WindowTooSmall("no chain-map equation can be evaluated".into()));
    }
    Ok(nontrivial.iter().all(|c| c.residual.is_zero()))
}

/// Random homogeneous element of degree `d` in normal form, small integer coefficients.
pub fn random_homogeneous<R: Rng>(ring: &PresentedRing, d: i64, rng: &mut R) -> Polynomial {
    let Ok(piece) = ring.graded_basis(d) else {
        return Polynomial::zero(ring.poly_ring());
    };
    Polynomial::from_terms(
        ring.poly_ring(),
        piece
            .monomials
            .iter()
            .map(|m| (m.clone(), int(rng.gen_range(-2..=2))))
            .filter(|(_, c)| !c.is_zero()),
    )
}

/// Random homogeneous map `source -> target` of internal degree `e`.
pub fn random_map<R: Rng>(
    ring: &PresentedRing,
    source: &GradedFreeModule,
    target: &GradedFreeModule,
    e: i64,
    rng: &mut R,
) -> FreeMap {
    let mut m = PolyMatrix::zeros(ring.poly_ring(), target.rank(), source.rank());
    for r in 0..target.rank() {
        for c in 0..source.rank() {
            let d = source.generator_degree(c) - target.generator_degree(r) + e;
            m.set(r, c, random_homogeneous(ring, d, rng));
        }
    }
    FreeMap {
        source: source.clone(),
        target: target.clone(),
        matrix: m,
    }
}

#[cfg(test)]
mod tests;
