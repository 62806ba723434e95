//! Numeric multivariate resultants via Macaulay's quotient formula
//! `Res = det(M) / det(M′)`, with the Sylvester matrix as the univariate
//! special case and independent oracle.
//!
//! The layout (which monomial indexes which row/column, and which rows
//! survive into the reduced submatrix `M′`) depends only on the degree
//! profile, so it is built once and reused across coefficient evaluations —
//! the intended pattern when sampling a resultant along a parameter.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{complex_gaussian, CMatrix, LogDet};
use crate::poly::{MultiPoly, MultiPolySystem, PolyError, UniPoly};

#[derive(Debug, Error)]
pub enum ResultantError {
    #[error("degree profile needs at least 2 polynomials, got {0}")]
    ProfileTooSmall(usize),
    #[error("degree profile entries must be positive")]
    ZeroDegree,
    #[error("system has {got} polynomials/{got_vars} variables, layout expects {expected}")]
    ProfileMismatch {
        expected: usize,
        got: usize,
        got_vars: usize,
    },
    #[error("polynomial {index} is not homogeneous of degree {expected}")]
    NotHomogeneous { index: usize, expected: usize },
    #[error("Macaulay matrix stayed degenerate after {attempts} determinant-1 substitutions")]
    Degenerate { attempts: usize },
    #[error("Sylvester resultant needs at least one positive formal degree")]
    BothDegreesZero,
    #[error("polynomial degree {got} exceeds its declared formal degree {formal}")]
    FormalDegreeExceeded { formal: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degrees of a square homogeneous system: `n+1` forms in `n+1` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    degrees: Vec<usize>,
}

impl DegreeProfile {
    pub fn new(degrees: Vec<usize>) -> Result<Self, ResultantError> {
        if degrees.len() < 2 {
            return Err(ResultantError::ProfileTooSmall(degrees.len()));
        }
        if degrees.contains(&0) {
            return Err(ResultantError::ZeroDegree);
        }
        Ok(DegreeProfile { degrees })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    /// Macaulay working degree `D = Σ(dᵢ − 1) + 1`.
    pub fn total_degree(&self) -> usize {
        self.degrees.iter().map(|d| d - 1).sum::<usize>() + 1
    }

    /// Product of the degrees (the Bézout number of the system).
    pub fn bezout(&self) -> usize {
        self.degrees.iter().product()
    }
}

/// Precomputed index structure of the Macaulay matrix for one degree
/// profile.
#[derive(Debug, Clone)]
pub struct MacaulayLayout {
    profile: DegreeProfile,
    total_degree: usize,
    /// All monomials of degree `D`, as exponent vectors in descending
    /// lexicographic order; column `k` and row `k` both correspond to
    /// `cols[k]`.
    cols: Vec<Vec<usize>>,
    col_pos: HashMap<Vec<usize>, usize>,
    /// `assign[k] = min{ i : cols[k][i] ≥ dᵢ }` — which polynomial fills
    /// row `k`.
    assign: Vec<usize>,
    /// Positions whose monomial is *not* reduced (reduced = exactly one
    /// index with `αᵢ ≥ dᵢ`); these index the submatrix `M′`.
    nonreduced: Vec<usize>,
}

impl MacaulayLayout {
    pub fn profile(&self) -> &DegreeProfile {
        &self.profile
    }

    pub fn total_degree(&self) -> usize {
        self.total_degree
    }

    /// Side length of the full Macaulay matrix.
    pub fn size(&self) -> usize {
        self.cols.len()
    }

    /// Side length of the reduced submatrix `M′`.
    pub fn reduced_size(&self) -> usize {
        self.nonreduced.len()
    }
}

/// Monomials of total degree `d` in `nvars` variables, descending
/// lexicographic.
fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>, rest_vars: usize, rest_deg: usize) {
        if rest_vars == 1 {
            prefix.push(rest_deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=rest_deg).rev() {
            prefix.push(e);
            rec(out, prefix, rest_vars - 1, rest_deg - e);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), nvars, d);
    out
}

/// Build the Macaulay layout for a degree profile. Deterministic, and
/// independent of any coefficient values.
pub fn build_layout(profile: &DegreeProfile) -> MacaulayLayout {
    let d_total = profile.total_degree();
    let nvars = profile.nvars();
    let cols = monomials_of_degree(nvars, d_total);
    let col_pos: HashMap<Vec<usize>, usize> = cols
        .iter()
        .enumerate()
        .map(|(k, v)| (v.clone(), k))
        .collect();
    let degrees = profile.degrees();
    let mut assign = Vec::with_capacity(cols.len());
    let mut nonreduced = Vec::new();
    for (k, alpha) in cols.iter().enumerate() {
        let hits: Vec<usize> = (0..nvars).filter(|&i| alpha[i] >= degrees[i]).collect();
        // D exceeds Σ(dᵢ−1), so at least one index is saturated
        assign.push(hits[0]);
        if hits.len() != 1 {
            nonreduced.push(k);
        }
    }
    MacaulayLayout {
        profile: profile.clone(),
        total_degree: d_total,
        cols,
        col_pos,
        assign,
        nonreduced,
    }
}

/// Resultant evaluation result.
#[derive(Debug, Clone)]
pub struct ResultantValue {
    /// The resultant, materialized (may overflow for extreme magnitudes).
    pub value: Complex64,
    /// The same value in log-magnitude/phase form.
    pub log_value: LogDet,
    /// Smallest-to-largest pivot ratio of the full Macaulay matrix; a
    /// conditioning indicator, reported but never acted upon.
    pub condition: f64,
    /// How many determinant-1 substitutions were needed before the reduced
    /// minor became usable.
    pub substitutions: usize,
}

fn fill_macaulay(system: &MultiPolySystem, layout: &MacaulayLayout) -> CMatrix {
    let n = layout.size();
    let degrees = layout.profile.degrees();
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        let alpha = &layout.cols[k];
        let i = layout.assign[k];
        // shift = α − dᵢ·eᵢ, the cofactor monomial multiplying fᵢ
        let mut shift = alpha.clone();
        shift[i] -= degrees[i];
        for (expo, c) in system.polys()[i].terms() {
            let target: Vec<usize> = shift.iter().zip(expo).map(|(s, e)| s + e).collect();
            let col = layout.col_pos[&target];
            m[(k, col)] += *c;
        }
    }
    m
}

fn submatrix(m: &CMatrix, positions: &[usize]) -> CMatrix {
    CMatrix::from_fn(positions.len(), positions.len(), |i, j| {
        m[(positions[i], positions[j])]
    })
}

/// A matrix with determinant exactly 1, built as a product of unit
/// triangular factors applied separately (so the invariance of the
/// resultant holds factor by factor).
fn unit_triangular_pair(n: usize, rng: &mut ChaCha8Rng) -> (CMatrix, CMatrix) {
    let mut l = CMatrix::identity(n);
    let mut u = CMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = complex_gaussian(rng) * 0.4;
        }
        for j in (i + 1)..n {
            u[(i, j)] = complex_gaussian(rng) * 0.4;
        }
    }
    (l, u)
}

/// Evaluate the Macaulay resultant of a square homogeneous system.
///
/// When the reduced minor `det(M′)` is numerically negligible the system is
/// rewritten through a random determinant-1 change of variables (which
/// leaves the resultant invariant) and re-evaluated, up to 5 times;
/// persistent degeneracy is an explicit error so the caller can fall back
/// to a different sample point.
pub fn macaulay_resultant(
    system: &MultiPolySystem,
    layout: &MacaulayLayout,
) -> Result<ResultantValue, ResultantError> {
    let profile = &layout.profile;
    if system.len() != profile.nvars() || system.nvars() != profile.nvars() {
        return Err(ResultantError::ProfileMismatch {
            expected: profile.nvars(),
            got: system.len(),
            got_vars: system.nvars(),
        });
    }
    for (i, (p, &d)) in system
        .polys()
        .iter()
        .zip(profile.degrees())
        .enumerate()
    {
        if p.is_zero() {
            // the zero form vanishes everywhere; the remaining n forms in
            // n+1 variables always share a projective zero
            return Ok(ResultantValue {
                value: Complex64::new(0.0, 0.0),
                log_value: LogDet::zero(),
                condition: 0.0,
                substitutions: 0,
            });
        }
        if !p.is_homogeneous() || p.degree() != d {
            return Err(ResultantError::NotHomogeneous {
                index: i,
                expected: d,
            });
        }
    }

    let nvars = profile.nvars();
    let max_attempts = 5usize;
    let mut current = system.clone();
    for attempt in 0..=max_attempts {
        if attempt > 0 {
            // deterministic substitution stream, fresh from the original
            // system each attempt
            let mut rng = ChaCha8Rng::seed_from_u64(0x4d61_6361 + attempt as u64);
            let (l, u) = unit_triangular_pair(nvars, &mut rng);
            let polys: Vec<MultiPoly> = system
                .polys()
                .iter()
                .map(|p| p.compose_linear(&l).compose_linear(&u))
                .collect();
            current = MultiPolySystem::new(nvars, polys)?;
        }

        let m = fill_macaulay(&current, layout);
        let lu_m = m.lu();

        let (log_minor, minor_ok) = if layout.nonreduced.is_empty() {
            (LogDet::one(), true)
        } else {
            let mp = submatrix(&m, &layout.nonreduced);
            let lu_mp = mp.lu();
            if lu_mp.is_singular() {
                (LogDet::zero(), false)
            } else {
                // a pivot collapse is what actually makes det(M′)
                // numerically negligible; the ratio is scale-free and does
                // not degrade with matrix size the way norm-product bounds do
                let ok = lu_mp.pivot_ratio() > 1e-12;
                (lu_mp.log_det(), ok)
            }
        };
        if !minor_ok {
            continue;
        }

        let log_res = lu_m.log_det().div(&log_minor);
        return Ok(ResultantValue {
            value: log_res.value(),
            log_value: log_res,
            condition: lu_m.pivot_ratio(),
            substitutions: attempt,
        });
    }
    Err(ResultantError::Degenerate {
        attempts: max_attempts,
    })
}

/// Interpret a univariate polynomial `p(t) = Σ cᵢ tⁱ` as the binary form
/// `Σ cᵢ x₀^i x₁^{d−i}` of formal degree `d` (leading zeros permitted).
pub fn binary_form(p: &UniPoly, formal_degree: usize) -> Result<MultiPoly, ResultantError> {
    if let Some(deg) = p.degree() {
        if deg > formal_degree {
            return Err(ResultantError::FormalDegreeExceeded {
                formal: formal_degree,
                got: deg,
            });
        }
    }
    let terms = (0..=formal_degree)
        .filter_map(|i| {
            let c = p.coeff(i);
            if c.norm() == 0.0 {
                None
            } else {
                Some((vec![i, formal_degree - i], c))
            }
        })
        .collect();
    Ok(MultiPoly::new(2, terms))
}

/// Resultant of two binary forms (given as univariate polynomials with
/// explicit formal degrees) via the classical Sylvester determinant.
pub fn sylvester_resultant(
    f: &UniPoly,
    deg_f: usize,
    g: &UniPoly,
    deg_g: usize,
) -> Result<Complex64, ResultantError> {
    if deg_f + deg_g == 0 {
        return Err(ResultantError::BothDegreesZero);
    }
    for (p, d) in [(f, deg_f), (g, deg_g)] {
        if let Some(deg) = p.degree() {
            if deg > d {
                return Err(ResultantError::FormalDegreeExceeded {
                    formal: d,
                    got: deg,
                });
            }
        }
    }
    let n = deg_f + deg_g;
    let mut syl = CMatrix::zeros(n, n);
    // deg_g rows of f coefficients, highest degree leftmost, then deg_f
    // rows of g coefficients
    for r in 0..deg_g {
        for q in 0..=deg_f {
            syl[(r, r + q)] = f.coeff(deg_f - q);
        }
    }
    for r in 0..deg_f {
        for q in 0..=deg_g {
            syl[(deg_g + r, r + q)] = g.coeff(deg_g - q);
        }
    }
    Ok(syl.det())
}
