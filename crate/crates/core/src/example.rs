//! The worked example: `S = Q[x,y,z,w,t]/(x^4, y^4, w^4, z^4, x^2y^2, y^2w^2,
//! z^2w^2, xt, zt, wt)` with the exact pair `f = x^2+y^2+z^2+w^2`,
//! `g = x^2+y^2-z^2-w^2`, `R = S/(f)` and the module `M = R/(y)`.

use std::sync::Arc;

use crate::complex::{ComplexError, GradedComplex, GradedFreeModule, PolyMatrix};
use crate::ring::{quotient_by, PresentedRing, QuotientMap, RingElem, RingError};

pub const VARS: [(&str, u32); 5] = [("x", 1), ("y", 1), ("z", 1), ("w", 1), ("t", 1)];

pub const RELATIONS: [&str; 10] = [
    "x^4", "y^4", "w^4", "z^4", "x^2*y^2", "y^2*w^2", "z^2*w^2", "x*t", "z*t", "w*t",
];

pub const F: &str = "x^2+y^2+z^2+w^2";
pub const G: &str = "x^2+y^2-z^2-w^2";

/// Generators of `ann_R(g)` as stated for the example.
pub const ANN_G: [&str; 4] = ["t", "y^2", "z^2", "w^2"];

/// Spanning monomials of `R_2` as stated for the example.
pub const R2_MONOMIALS: [&str; 11] = [
    "x^2", "y^2", "w^2", "t^2", "x*y", "x*z", "x*w", "y*z", "y*w", "z*w", "y*t",
];

/// Twists of `F_0 .. F_3` in the minimal resolution of `R/(y)`.
pub fn twists() -> Vec<Vec<i64>> {
    vec![
        vec![0],
        vec![-1],
        vec![-3, -4, -4, -4],
        [vec![-4; 4], vec![-5; 6], vec![-6; 6]].concat(),
    ]
}

pub const D1: [&[&str]; 1] = [&["y"]];
pub const D2: [&[&str]; 1] = [&["y*t", "y*w^2", "y*z^2", "y^3"]];
pub const D3: [&[&str]; 4] = [
    &["w", "z", "y", "x", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    &["0", "0", "0", "0", "t", "0", "0", "y", "0", "0", "w^2", "z^2", "0", "0", "0", "0"],
    &["0", "0", "0", "0", "0", "t", "0", "0", "y", "0", "0", "0", "w^2", "0", "z^2", "0"],
    &["0", "0", "0", "0", "0", "0", "t", "0", "0", "y", "0", "0", "0", "w^2", "0", "z^2"],
];

/// The stated choices of the lifted operators (rows over `S`).
pub const PSI_TILDE_2: [&[&str]; 1] = [&["t", "0", "z^2-x^2+w^2", "0"]];
pub const PSI_TILDE_3: [&[&str]; 1] = [&[
    "0", "0", "t", "0", "0", "0", "y*t", "0", "z^2-x^2+w^2", "0", "0", "0", "0", "0", "0",
    "y*(z^2-x^2+w^2)",
]];
pub const PHI_TILDE_3: [&[&str]; 1] = [&[
    "0", "0", "0", "0", "0", "0", "t", "0", "0", "0", "0", "0", "w^2", "0", "y^2+z^2", "-y^2",
]];

/// Stated values of `d1 d2` and `d2 d3` over `S`.
pub const D1D2: [&[&str]; 1] = [&["y^2*t", "0", "y^2*z^2", "0"]];
pub const D2D3: [&[&str]; 1] = [&[
    "0", "0", "y^2*t", "0", "0", "0", "y^3*t", "0", "y^2*z^2", "0", "0", "0", "0", "0", "0",
    "y^3*z^2",
]];
/// Stated value of `d1 psi3 - psi2 d3` for the stated choices.
pub const PHI_NUMERATOR_3: [&[&str]; 1] = [&[
    "0", "0", "0", "0", "0", "0", "y^2*t", "0", "0", "0", "0", "0", "x^2*w^2", "0", "z^2*x^2",
    "y^2*z^2",
]];

/// All rings and elements of the example.
#[derive(Debug, Clone)]
pub struct Example {
    pub s: Arc<PresentedRing>,
    pub r: Arc<PresentedRing>,
    pub quotient: QuotientMap,
    pub f: RingElem,
    pub g: RingElem,
}

impl Example {
    pub fn new() -> Result<Self, RingError> {
        Self::with_f(F)
    }

    /// Same construction with `f` replaced (used to exercise failure paths).
    pub fn with_f(f: &str) -> Result<Self, RingError> {
        let s = PresentedRing::make_ring("S", &VARS, &RELATIONS, true)?;
        let f = s.parse_elem(f)?;
        let g = s.parse_elem(G)?;
        let quotient = quotient_by(&s, &f, "R")?;
        Ok(Example {
            r: quotient.target.clone(),
            s,
            quotient,
            f,
            g,
        })
    }

    pub fn matrix(&self, rows: &[&[&str]]) -> Result<PolyMatrix, ComplexError> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        PolyMatrix::parse(self.s.poly_ring(), rows, cols)
    }

    /// The stated `F_0 .. F_3` with `d1, d2, d3` over `ring` (R or S), bounded below.
    pub fn resolution_window(&self, ring: &Arc<PresentedRing>) -> Result<GradedComplex, ComplexError> {
        let modules = twists().into_iter().map(GradedFreeModule::new).collect();
        GradedComplex::new(
            ring,
            0,
            modules,
            vec![self.matrix(&D1)?, self.matrix(&D2)?, self.matrix(&D3)?],
            true,
        )
    }
}
