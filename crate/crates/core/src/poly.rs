//! Polynomial layer: dense univariate complex polynomials (evaluation,
//! arithmetic, simultaneous root finding, circle-node interpolation) and
//! sparse multivariate homogeneous polynomials used to pose the resultant
//! and continuation problems.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::CMatrix;

/// Relative coefficient threshold below which interpolation (and consumers
/// trimming degenerate degrees) zero out a coefficient.
pub const COEFF_TRUNCATION_REL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("need at least {needed} samples for degree bound {degree}, got {got}")]
    TooFewSamples {
        needed: usize,
        degree: usize,
        got: usize,
    },
    #[error("interpolation nodes contain a (near-)duplicate pair")]
    DuplicateNodes,
    #[error("interpolation system is rank deficient")]
    RankDeficient,
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("polynomials disagree on variable count: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Dense univariate complex polynomial, coefficients in ascending degree
/// order. The zero polynomial is the empty coefficient list; otherwise the
/// leading (last) coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct UniPolyJson {
    coeffs: Vec<[f64; 2]>,
}

impl UniPoly {
    /// Build from ascending coefficients, trimming trailing exact zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Complex64) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k as f64 + 1.0))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Product by convolution.
    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, alpha: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| c * alpha).collect())
    }

    /// Zero out coefficients below `rel · max|c|` and re-trim the degree.
    pub fn truncate_small(&self, rel: f64) -> UniPoly {
        let scale = self.coeff_scale();
        if scale == 0.0 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c.norm() < rel * scale {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    /// All complex roots with multiplicity, as `(root, residual)` pairs.
    ///
    /// Roots at the origin are deflated exactly; the rest come from
    /// Aberth–Ehrlich simultaneous iteration followed by a Newton polish
    /// (at most 100 steps per root). Roots that fail to reach residual
    /// `1e−10 · max|c|` are still returned, carrying their achieved
    /// residual.
    pub fn roots_with_residuals(&self) -> Result<Vec<(Complex64, f64)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut coeffs = self.coeffs.clone();
        let mut out: Vec<(Complex64, f64)> = Vec::new();
        while coeffs.len() > 1 && coeffs[0].norm() == 0.0 {
            coeffs.remove(0); // exact deflation of a root at 0
            out.push((Complex64::new(0.0, 0.0), 0.0));
        }
        let deg = coeffs.len() - 1;
        if deg == 0 {
            return Ok(out); // nonzero constant: nothing further to find
        }

        let lead = coeffs[deg];
        let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
        let scale = self.coeff_scale();
        let tol = 1e-10 * scale;

        let mut z = initial_root_guesses(&monic);
        let dmonic = UniPoly {
            coeffs: monic.clone(),
        }
        .derivative();

        // Aberth–Ehrlich sweep, Gauss–Seidel style in-place updates
        for _ in 0..300 {
            let mut max_move = 0.0f64;
            for i in 0..deg {
                let p = horner(&monic, z[i]);
                let dp = dmonic.eval(z[i]);
                let w = if dp.norm() > 1e-300 {
                    p / dp
                } else {
                    p // fall back to a plain residual step
                };
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..deg {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 1e-300 {
                            s += Complex64::new(1.0, 0.0) / d;
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - w * s;
                let delta = if denom.norm() > 1e-300 { w / denom } else { w };
                z[i] -= delta;
                let rel = delta.norm() / (1.0 + z[i].norm());
                max_move = max_move.max(rel);
            }
            if max_move < 1e-14 {
                break;
            }
        }

        // per-root Newton polish against the original coefficients
        let dorig = self_derivative(&coeffs);
        for zi in z {
            let mut best = zi;
            let mut best_res = horner(&coeffs, best).norm();
            let mut cur = zi;
            for _ in 0..100 {
                if best_res <= tol {
                    break;
                }
                let dp = horner(&dorig, cur);
                if dp.norm() < 1e-300 {
                    break;
                }
                cur -= horner(&coeffs, cur) / dp;
                let res = horner(&coeffs, cur).norm();
                if res < best_res {
                    best = cur;
                    best_res = res;
                }
            }
            out.push((best, best_res));
        }
        Ok(out)
    }

    /// All complex roots with multiplicity (see
    /// [`UniPoly::roots_with_residuals`]).
    pub fn roots(&self) -> Result<Vec<Complex64>, PolyError> {
        Ok(self
            .roots_with_residuals()?
            .into_iter()
            .map(|(z, _)| z)
            .collect())
    }

    /// Parse `{"coeffs": [[re,im],…]}` (ascending degree).
    pub fn from_json(s: &str) -> Result<UniPoly, PolyError> {
        let raw: UniPolyJson = serde_json::from_str(s)?;
        Ok(UniPoly::new(
            raw.coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }

    /// Serialize to `{"coeffs": [[re,im],…]}`.
    pub fn to_json(&self) -> String {
        let raw = UniPolyJson {
            coeffs: self.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&raw).expect("polynomial serialization cannot fail")
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn self_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![];
    }
    coeffs[1..]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (k as f64 + 1.0))
        .collect()
}

/// Starting points for Aberth iteration: a circle at the geometric-mean
/// root magnitude with an irrational angular offset to dodge symmetries.
fn initial_root_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let deg = monic.len() - 1;
    let c0 = monic[0].norm();
    let cauchy = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = if c0 > 0.0 {
        c0.powf(1.0 / deg as f64).clamp(1e-3, cauchy)
    } else {
        0.5 * cauchy
    };
    (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.43;
            radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// Least-squares fit of a polynomial of degree at most `degree` through
/// `samples = [(node, value), …]` on the (possibly overdetermined)
/// Vandermonde system. Nodes are internally rescaled by their largest
/// modulus to keep the system well conditioned; coefficients below
/// [`COEFF_TRUNCATION_REL`]` · max|c|` are truncated to zero.
pub fn interpolate(
    samples: &[(Complex64, Complex64)],
    degree: usize,
) -> Result<UniPoly, PolyError> {
    if samples.len() < degree + 1 {
        return Err(PolyError::TooFewSamples {
            needed: degree + 1,
            degree,
            got: samples.len(),
        });
    }
    let max_node = samples
        .iter()
        .map(|(z, _)| z.norm())
        .fold(0.0f64, f64::max);
    let sep = 1e-12 * (1.0 + max_node);
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            if (samples[i].0 - samples[j].0).norm() < sep {
                return Err(PolyError::DuplicateNodes);
            }
        }
    }
    let r = if max_node > 0.0 { max_node } else { 1.0 };

    // normal equations (VᴴV)c = Vᴴy in the rescaled variable z/r
    let k = samples.len();
    let ncoef = degree + 1;
    let mut v = vec![vec![Complex64::new(0.0, 0.0); ncoef]; k];
    for (row, (z, _)) in samples.iter().enumerate() {
        let zs = z / r;
        let mut p = Complex64::new(1.0, 0.0);
        for slot in v[row].iter_mut() {
            *slot = p;
            p *= zs;
        }
    }
    let mut vtv = CMatrix::zeros(ncoef, ncoef);
    let mut rhs = vec![Complex64::new(0.0, 0.0); ncoef];
    for a in 0..ncoef {
        for b in 0..ncoef {
            let mut s = Complex64::new(0.0, 0.0);
            for row in &v {
                s += row[a].conj() * row[b];
            }
            vtv[(a, b)] = s;
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (row, sample) in v.iter().zip(samples) {
            s += row[a].conj() * sample.1;
        }
        rhs[a] = s;
    }
    let coeffs_scaled = vtv.lu().solve(&rhs).ok_or(PolyError::RankDeficient)?;

    // undo the node rescaling: c_k = ĉ_k / r^k
    let mut coeffs = Vec::with_capacity(ncoef);
    let mut rk = 1.0f64;
    for c in coeffs_scaled {
        coeffs.push(c / rk);
        rk *= r;
    }
    Ok(UniPoly::new(coeffs).truncate_small(COEFF_TRUNCATION_REL))
}

/// Greedy multiset matching distance: repeatedly pairs the globally
/// closest remaining values and returns the largest paired distance.
/// Infinite when the lengths differ.
pub fn multiset_max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = 0.0f64;
    for _ in 0..a.len() {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..a.len() {
            if used_a[i] {
                continue;
            }
            for j in 0..b.len() {
                if used_b[j] {
                    continue;
                }
                let d = (a[i] - b[j]).norm();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        used_a[best.1] = true;
        used_b[best.2] = true;
        worst = worst.max(best.0);
    }
    worst
}

/// Sparse multivariate complex polynomial. Terms are kept sorted by
/// exponent vector; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Vec<usize>, Complex64)>,
    degree: usize,
}

impl MultiPoly {
    /// Build from raw terms, merging duplicate exponent vectors and
    /// dropping exact zeros.
    pub fn new(nvars: usize, raw_terms: Vec<(Vec<usize>, Complex64)>) -> Self {
        let mut map: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        for (expo, c) in raw_terms {
            debug_assert_eq!(expo.len(), nvars, "exponent vector length mismatch");
            *map.entry(expo).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let terms: Vec<(Vec<usize>, Complex64)> = map
            .into_iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .collect();
        let degree = terms
            .iter()
            .map(|(e, _)| e.iter().sum::<usize>())
            .max()
            .unwrap_or(0);
        MultiPoly {
            nvars,
            terms,
            degree,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: vec![],
            degree: 0,
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        MultiPoly::new(nvars, vec![(vec![0; nvars], c)])
    }

    /// The monomial `coeff · x^expo`.
    pub fn monomial(nvars: usize, expo: Vec<usize>, coeff: Complex64) -> Self {
        MultiPoly::new(nvars, vec![(expo, coeff)])
    }

    /// The linear form `Σ coeffs[i]·x_i`.
    pub fn linear_form(coeffs: &[Complex64]) -> Self {
        let nvars = coeffs.len();
        MultiPoly::new(
            nvars,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let mut e = vec![0; nvars];
                    e[i] = 1;
                    (e, c)
                })
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<usize>, Complex64)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has total degree equal to `degree()`.
    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, _)| e.iter().sum::<usize>() == self.degree)
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (expo, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in expo.iter().enumerate() {
                if e > 0 {
                    t *= x[i].powu(e as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `Σ |c| · ∏ |x_i|^{e_i}` — the natural scale for relative residuals
    /// of `eval` at `x`.
    pub fn abs_eval(&self, x: &[Complex64]) -> f64 {
        let mut acc = 0.0f64;
        for (expo, c) in &self.terms {
            let mut t = c.norm();
            for (i, &e) in expo.iter().enumerate() {
                if e > 0 {
                    t *= x[i].norm().powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        assert!(var < self.nvars);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * e[var] as f64)
            })
            .collect();
        MultiPoly::new(self.nvars, terms)
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(MultiPoly::new(self.nvars, terms))
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<usize> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((e, ca * cb));
            }
        }
        Ok(MultiPoly::new(self.nvars, terms))
    }

    pub fn scale(&self, alpha: Complex64) -> MultiPoly {
        MultiPoly::new(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c * alpha))
                .collect(),
        )
    }

    /// Reinterpret in a larger variable ring: exponent vectors are padded
    /// with zeros for the new trailing variables.
    pub fn pad_vars(&self, new_nvars: usize) -> MultiPoly {
        assert!(new_nvars >= self.nvars);
        MultiPoly::new(
            new_nvars,
            self.terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(new_nvars, 0);
                    (e2, *c)
                })
                .collect(),
        )
    }

    /// Substitute `x_i = Σ_j a[i][j]·y_j` (a linear change of variables).
    pub fn compose_linear(&self, a: &CMatrix) -> MultiPoly {
        assert_eq!(a.rows(), self.nvars);
        assert_eq!(a.cols(), self.nvars);
        let rows: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                let coeffs: Vec<Complex64> = (0..self.nvars).map(|j| a[(i, j)]).collect();
                MultiPoly::linear_form(&coeffs)
            })
            .collect();
        let mut acc = MultiPoly::zero(self.nvars);
        for (expo, c) in &self.terms {
            let mut term = MultiPoly::constant(self.nvars, *c);
            for (i, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&rows[i]).expect("same nvars");
                }
            }
            acc = acc.add(&term).expect("same nvars");
        }
        acc
    }
}

/// A list of multivariate polynomials over a shared variable set.
#[derive(Debug, Clone)]
pub struct MultiPolySystem {
    nvars: usize,
    polys: Vec<MultiPoly>,
}

impl MultiPolySystem {
    pub fn new(nvars: usize, polys: Vec<MultiPoly>) -> Result<Self, PolyError> {
        for p in &polys {
            if p.nvars() != nvars {
                return Err(PolyError::VarMismatch(nvars, p.nvars()));
            }
        }
        Ok(MultiPolySystem { nvars, polys })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    /// Largest relative residual `|f_i(x)| / (Σ|termᵢ|(x) + max|coeff| + 1e−300)`.
    ///
    /// The coefficient-scale floor keeps the measure meaningful when `x`
    /// approaches an exact root at the origin: there the value and the term
    /// magnitudes vanish together, and a purely termwise ratio would stall
    /// near 1 even though the iterate is converging.
    pub fn residual_rel(&self, x: &[Complex64]) -> f64 {
        self.polys
            .iter()
            .map(|p| {
                let v = p.eval(x).map(|z| z.norm()).unwrap_or(f64::INFINITY);
                let coeff_scale = p
                    .terms
                    .iter()
                    .map(|(_, c)| c.norm())
                    .fold(0.0f64, f64::max);
                v / (p.abs_eval(x) + coeff_scale + 1e-300)
            })
            .fold(0.0, f64::max)
    }
}
