//! The spectral objects of a tensor: its determinant, its characteristic
//! polynomial in the E-eigenvalue sense, the enumeration and
//! classification of projective eigenvector classes, and the one-step
//! projective dynamics view.
//!
//! Conventions used throughout:
//! * an eigenvector is a nonzero `x` with `T x^{m−1}` parallel to `x`;
//! * an E-eigenpair is `(λ, x)` with `T x^{m−1} = λx` and `xᵀx = 1`,
//!   where the transpose carries no conjugation;
//! * the determinant `Det(T)` is the Macaulay resultant of the `n+1`
//!   contraction forms, vanishing exactly when `T x^{m−1} = 0` has a
//!   nonzero solution.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::homotopy::{
    solve_projective, solve_square, HomotopyError, SolutionSet, TrackerConfig,
};
use crate::linalg::{canonical_rep, complex_gaussian, dot_t, relative_distance, vec_norm};
use crate::poly::{interpolate, MultiPoly, MultiPolySystem, PolyError, UniPoly};
use crate::resultant::{
    build_layout, macaulay_resultant, DegreeProfile, ResultantError, ResultantValue,
};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("only {got} of {needed} characteristic-polynomial samples were usable")]
    TooManyDegenerateSamples { needed: usize, got: usize },
    #[error(
        "odd-order characteristic polynomial has an odd-power coefficient of magnitude {magnitude:e} at degree {index}"
    )]
    OddPowerCoefficient { index: usize, magnitude: f64 },
    #[error("tensor is singular (|Det| ≤ tolerance·scale); eigenvalues of the characteristic polynomial are not defined — enumerate eigenpairs instead")]
    SingularInput,
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("image of the projective map is zero: x is an eigenvector with eigenvalue zero")]
    ZeroImage,
}

/// Tolerances and tracker settings for eigenpair enumeration.
#[derive(Debug, Clone)]
pub struct EigenConfig {
    pub tracker: TrackerConfig,
    /// `|Det| ≤ tol_singular · scale` triggers the zero-eigenvalue search.
    pub tol_singular: f64,
    /// Residual bound used when filtering projective kernel points.
    pub tol_residual: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tracker: TrackerConfig::default(),
            tol_singular: 1e-8,
            tol_residual: 1e-8,
        }
    }
}

/// Classification of a projective eigenvector class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    /// `xᵀx ≠ 0`: the class admits E-normalizations and carries E-eigenvalues.
    EPair,
    /// `xᵀx = 0`: no E-normalization exists; eigenvalues are not defined.
    Isotropic,
    /// `T x^{m−1} = 0` on the class.
    ZeroEigenvalue,
}

impl EigenKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EigenKind::EPair => "E",
            EigenKind::Isotropic => "isotropic",
            EigenKind::ZeroEigenvalue => "zero",
        }
    }
}

/// One projective eigenvector class.
#[derive(Debug, Clone)]
pub struct EigenClass {
    /// Canonical representative: largest-modulus coordinate scaled to 1,
    /// ties broken by lowest index.
    pub rep: Vec<Complex64>,
    /// `Σ repᵢ²` (no conjugation).
    pub xtx: Complex64,
    pub kind: EigenKind,
    /// E-eigenvalues at the `xᵀx = 1` normalizations: one value for even
    /// order, a `±` pair for odd order, empty for the other kinds.
    pub lambdas: Vec<Complex64>,
    /// Parallelism residual of the class representative (for
    /// zero-eigenvalue classes: the normalized kernel residual
    /// `‖Tx^{m−1}‖ / (‖T‖·‖x‖^{m−1})`, since direction minors carry no
    /// information when the contraction itself vanishes).
    pub residual: f64,
}

/// Eigenpair enumeration result with full path accounting.
#[derive(Debug, Clone)]
pub struct EigenReport {
    pub classes: Vec<EigenClass>,
    pub path_failures: usize,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct ClassJson {
    rep: Vec<[f64; 2]>,
    xtx: [f64; 2],
    kind: &'static str,
    lambdas: Vec<[f64; 2]>,
    residual: f64,
}

#[derive(Serialize)]
struct ReportJson {
    classes: Vec<ClassJson>,
    count: usize,
    path_failures: usize,
    warnings: Vec<String>,
}

impl EigenReport {
    /// Wire format:
    /// `{"classes":[{"rep":…,"xtx":…,"kind":…,"lambdas":…,"residual":…}],"count":…,"path_failures":…,"warnings":…}`.
    pub fn to_json(&self) -> String {
        let raw = ReportJson {
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    rep: c.rep.iter().map(|z| [z.re, z.im]).collect(),
                    xtx: [c.xtx.re, c.xtx.im],
                    kind: c.kind.as_str(),
                    lambdas: c.lambdas.iter().map(|z| [z.re, z.im]).collect(),
                    residual: c.residual,
                })
                .collect(),
            count: self.classes.len(),
            path_failures: self.path_failures,
            warnings: self.warnings.clone(),
        };
        serde_json::to_string(&raw).expect("report serialization cannot fail")
    }
}

/// Parity of the tensor order, which controls the shape of the
/// characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The characteristic polynomial `χ(λ)` of a tensor together with its
/// generic degree.
#[derive(Debug, Clone)]
pub struct CharPoly {
    pub poly: UniPoly,
    pub parity: Parity,
    /// `((m−1)^{n+1} − 1)/(m−2)`, doubled for odd order — the degree
    /// attained by generic tensors.
    pub degree_expected: usize,
}

/// Number of projective eigenvector classes of a generic tensor:
/// `((m−1)^{n+1} − 1)/(m−2)`.
pub fn expected_class_count(order: usize, dim: usize) -> usize {
    ((order - 1).pow(dim as u32) - 1) / (order - 2)
}

/// Homogeneity degree of the determinant in the tensor entries:
/// `(n+1)·(m−1)^n`.
pub fn det_degree(order: usize, dim: usize) -> usize {
    dim * (order - 1).pow(dim as u32 - 1)
}

/// The `n+1` contraction forms `(T x^{m−1})_i` as sparse polynomials in
/// `dim` variables.
pub fn contraction_forms(t: &Tensor) -> Vec<MultiPoly> {
    let d = t.dim();
    let m = t.order();
    let block = d.pow(m as u32 - 1);
    (0..d)
        .map(|i| {
            let mut terms = Vec::new();
            for a in 0..block {
                let c = t.entries()[i * block + a];
                if c.norm() == 0.0 {
                    continue;
                }
                // decode the trailing m−1 indices into an exponent vector
                let mut e = vec![0usize; d];
                let mut rem = a;
                for _ in 0..m - 1 {
                    e[rem % d] += 1;
                    rem /= d;
                }
                terms.push((e, c));
            }
            MultiPoly::new(d, terms)
        })
        .collect()
}

/// Determinant of the tensor: the Macaulay resultant of its contraction
/// forms. Zero exactly when `T x^{m−1} = 0` has a nonzero solution.
pub fn determinant(t: &Tensor) -> Result<Complex64, SpectraError> {
    Ok(determinant_full(t)?.value)
}

/// Determinant with the conditioning metadata of the underlying resultant
/// evaluation.
pub fn determinant_full(t: &Tensor) -> Result<ResultantValue, SpectraError> {
    let forms = contraction_forms(t);
    let d = t.dim();
    let profile = DegreeProfile::new(vec![t.order() - 1; d])?;
    let layout = build_layout(&profile);
    let system = MultiPolySystem::new(d, forms)?;
    Ok(macaulay_resultant(&system, &layout)?)
}

/// Reference magnitude for `|Det|` at the norm of `t`: the median
/// determinant magnitude of unit-norm random tensors of the same shape,
/// scaled by `‖t‖^{(n+1)(m−1)^n}` (the determinant's homogeneity degree).
/// Singularity decisions are made relative to this scale.
pub fn det_scale(t: &Tensor) -> Result<f64, SpectraError> {
    let mut mags = Vec::with_capacity(5);
    for k in 0..5u64 {
        let r = crate::tensor::random_tensor(t.order(), t.dim(), 0xD5CA1E + k, false);
        let unit = r.scale(Complex64::new(1.0 / r.norm(), 0.0));
        mags.push(determinant(&unit)?.norm());
    }
    mags.sort_by(|a, b| a.partial_cmp(b).expect("finite magnitudes"));
    let median = mags[2];
    Ok(median * t.norm().powi(det_degree(t.order(), t.dim()) as i32))
}

/// Whether `|Det(t)|` falls below `tol` times the random-tensor scale.
pub fn is_singular(t: &Tensor, tol: f64) -> Result<bool, SpectraError> {
    Ok(determinant(t)?.norm() <= tol * det_scale(t)?)
}

fn lambda_system_even(
    forms: &[MultiPoly],
    t: &Tensor,
    lambda: Complex64,
) -> Result<MultiPolySystem, SpectraError> {
    let d = t.dim();
    let m = t.order();
    // (xᵀx)^{(m−2)/2} · xᵢ, built once per call
    let xtx = MultiPoly::new(
        d,
        (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 2;
                (e, Complex64::new(1.0, 0.0))
            })
            .collect(),
    );
    let mut q = MultiPoly::constant(d, Complex64::new(1.0, 0.0));
    for _ in 0..(m - 2) / 2 {
        q = q.mul(&xtx)?;
    }
    let polys = forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut e = vec![0; d];
            e[i] = 1;
            let xi = MultiPoly::monomial(d, e, Complex64::new(1.0, 0.0));
            f.add(&q.mul(&xi)?.scale(-lambda))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiPolySystem::new(d, polys)?)
}

fn lambda_system_odd(
    forms: &[MultiPoly],
    t: &Tensor,
    lambda: Complex64,
) -> Result<MultiPolySystem, SpectraError> {
    let d = t.dim();
    let m = t.order();
    let nv = d + 1; // x₀…x_n plus the normalization variable β
    let mut polys: Vec<MultiPoly> = Vec::with_capacity(nv);
    for (i, f) in forms.iter().enumerate() {
        let mut e = vec![0usize; nv];
        e[i] = 1;
        e[d] = m - 2;
        let beta_term = MultiPoly::monomial(nv, e, -lambda);
        polys.push(f.pad_vars(nv).add(&beta_term)?);
    }
    // xᵀx − β²
    let mut quad_terms: Vec<(Vec<usize>, Complex64)> = (0..d)
        .map(|j| {
            let mut e = vec![0; nv];
            e[j] = 2;
            (e, Complex64::new(1.0, 0.0))
        })
        .collect();
    let mut e = vec![0; nv];
    e[d] = 2;
    quad_terms.push((e, Complex64::new(-1.0, 0.0)));
    polys.push(MultiPoly::new(nv, quad_terms));
    Ok(MultiPolySystem::new(nv, polys)?)
}

struct CharSampler<'a> {
    tensor: &'a Tensor,
    forms: Vec<MultiPoly>,
    layout: crate::resultant::MacaulayLayout,
    even: bool,
    degree_expected: usize,
}

impl CharSampler<'_> {
    /// Evaluate the resultant at circle nodes of the given radius and fit
    /// a polynomial of the expected degree. Degenerate nodes are retried
    /// with angular and radial jitter, then dropped; the fit needs
    /// `degree + 3` survivors.
    fn fit_at_radius(&self, radius: f64) -> Result<UniPoly, SpectraError> {
        let target = self.degree_expected + 5;
        let floor = self.degree_expected + 3;
        let mut samples: Vec<(Complex64, Complex64)> = Vec::with_capacity(target);
        for k in 0..target {
            for jitter in 0..4 {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / target as f64
                    + 0.0137 * jitter as f64;
                let r = radius * (1.0 + 0.05 * jitter as f64);
                let lambda = Complex64::new(r * theta.cos(), r * theta.sin());
                let system = if self.even {
                    lambda_system_even(&self.forms, self.tensor, lambda)?
                } else {
                    lambda_system_odd(&self.forms, self.tensor, lambda)?
                };
                match macaulay_resultant(&system, &self.layout) {
                    Ok(v) => {
                        samples.push((lambda, v.value));
                        break;
                    }
                    // an unplaced node simply shrinks the sample pool
                    Err(ResultantError::Degenerate { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
        }
        if samples.len() < floor {
            return Err(SpectraError::TooManyDegenerateSamples {
                needed: floor,
                got: samples.len(),
            });
        }
        Ok(interpolate(&samples, self.degree_expected)?)
    }
}

/// Radius at which the lowest and highest surviving coefficients of `p`
/// contribute equally to values on the circle. Sampling there keeps the
/// value scale close to the coefficient scale, which is what bounds the
/// roundoff floor of the recovered coefficients.
fn balanced_radius(p: &UniPoly) -> Option<f64> {
    let nonzero: Vec<usize> = (0..p.coeffs().len())
        .filter(|&k| p.coeff(k).norm() > 0.0)
        .collect();
    let (lo, hi) = (*nonzero.first()?, *nonzero.last()?);
    if hi == lo {
        return None;
    }
    let ratio = p.coeff(lo).norm() / p.coeff(hi).norm();
    Some(ratio.powf(1.0 / (hi - lo) as f64))
}

/// The characteristic polynomial `χ(λ)`: the resultant of the eigenpair
/// system, sampled at circle nodes in `λ` and interpolated.
///
/// For even order the system is the `n+1` forms
/// `T x^{m−1} − λ(xᵀx)^{(m−2)/2} x`; for odd order it is the `n+2`
/// polynomials `{T x^{m−1} − λβ^{m−2}x, xᵀx − β²}`. Odd order yields only
/// even powers of `λ`; the odd-power coefficients are checked to vanish
/// and then zeroed exactly.
///
/// Sampling is two-pass: a pilot fit at radius `‖T‖` estimates the
/// coefficient profile, then the nodes are moved to the radius where the
/// extreme coefficients balance, which can improve the recovered
/// coefficients by many digits when the degree is high.
pub fn echar_poly(t: &Tensor) -> Result<CharPoly, SpectraError> {
    let m = t.order();
    let d = t.dim();
    let even = m.is_multiple_of(2);
    let base = expected_class_count(m, d);
    let degree_expected = if even { base } else { 2 * base };

    let profile = if even {
        DegreeProfile::new(vec![m - 1; d])?
    } else {
        let mut degs = vec![m - 1; d];
        degs.push(2);
        DegreeProfile::new(degs)?
    };
    let sampler = CharSampler {
        tensor: t,
        forms: contraction_forms(t),
        layout: build_layout(&profile),
        even,
        degree_expected,
    };

    let radius0 = t.norm().max(1e-3);
    let pilot = sampler.fit_at_radius(radius0)?;
    let radius = balanced_radius(&pilot)
        .map(|r| r.clamp(1e-3, 4.0 * radius0))
        .unwrap_or(radius0);
    let mut poly = if (radius / radius0 - 1.0).abs() < 0.05 {
        pilot
    } else {
        sampler.fit_at_radius(radius)?
    };
    if !even && !poly.is_zero() {
        let scale = poly.coeff_scale();
        let mut coeffs: Vec<Complex64> = (0..poly.coeffs().len()).map(|k| poly.coeff(k)).collect();
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k % 2 == 1 {
                if c.norm() > 1e-8 * scale {
                    return Err(SpectraError::OddPowerCoefficient {
                        index: k,
                        magnitude: c.norm(),
                    });
                }
                *c = Complex64::new(0.0, 0.0);
            }
        }
        poly = UniPoly::new(coeffs);
    }
    Ok(CharPoly {
        poly,
        parity: if even { Parity::Even } else { Parity::Odd },
        degree_expected,
    })
}

/// Largest normalized 2×2 minor of `(x, T x^{m−1})`:
/// `max_{i<j} |xᵢvⱼ − xⱼvᵢ| / (‖x‖·‖v‖ + ε)`. Zero exactly when `x` is an
/// eigenvector.
pub fn minors_residual(t: &Tensor, x: &[Complex64]) -> Result<f64, SpectraError> {
    if vec_norm(x) == 0.0 {
        return Err(SpectraError::ZeroVector);
    }
    let v = t.contract(x)?;
    let denom = vec_norm(x) * vec_norm(&v) + 1e-300;
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            worst = worst.max((x[i] * v[j] - x[j] * v[i]).norm());
        }
    }
    Ok(worst / denom)
}

/// One step of the projective map `x ↦ [T x^{m−1}]`, returned as a
/// canonical representative. Its fixed points are the eigenvector classes.
pub fn projective_map_step(t: &Tensor, x: &[Complex64]) -> Result<Vec<Complex64>, SpectraError> {
    let v = t.contract(x)?;
    canonical_rep(&v).ok_or(SpectraError::ZeroImage)
}

fn kernel_residual(t: &Tensor, x: &[Complex64]) -> f64 {
    let v = t.contract(x).expect("dimension checked upstream");
    let m = t.order();
    vec_norm(&v) / (t.norm() * vec_norm(x).powi(m as i32 - 1) + 1e-300)
}

/// Enumerate the projective eigenvector classes of `t`.
///
/// The affine fixed-point system `T x^{m−1} = x` is solved by homotopy
/// continuation (`(m−1)^{n+1}` paths); nonzero endpoints are grouped into
/// projective classes, each of which appears `m−2` times among the affine
/// solutions. When the determinant is small relative to the random-tensor
/// scale, the kernel system `T x^{m−1} = 0` is additionally solved
/// projectively and contributes zero-eigenvalue classes.
pub fn eigenpairs(t: &Tensor, cfg: &EigenConfig, seed: u64) -> Result<EigenReport, SpectraError> {
    let d = t.dim();
    let m = t.order();
    let mut warnings: Vec<String> = Vec::new();

    if t.norm() == 0.0 {
        return Ok(EigenReport {
            classes: vec![],
            path_failures: 0,
            warnings: vec![
                "zero tensor: every nonzero vector is an eigenvector; no isolated classes"
                    .to_string(),
            ],
        });
    }

    let forms = contraction_forms(t);
    let fixed_point_polys = forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut e = vec![0; d];
            e[i] = 1;
            f.add(&MultiPoly::monomial(d, e, Complex64::new(-1.0, 0.0)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let system = MultiPolySystem::new(d, fixed_point_polys)?;
    let sol: SolutionSet = solve_square(&system, &cfg.tracker, seed)?;
    let mut path_failures = sol.path_failures;
    if sol.nonisolated_warning {
        warnings.push(
            "failed paths cluster: the eigenvector set may have a non-isolated component"
                .to_string(),
        );
    }

    // the zero solution is the one affine endpoint with no projective class
    let x_scale = t.norm().powf(-1.0 / (m as f64 - 2.0));
    let nonzero: Vec<&Vec<Complex64>> = sol
        .points
        .iter()
        .filter(|p| vec_norm(p) > 1e-6 * x_scale)
        .collect();

    // group affine solutions into projective classes
    let mut classes: Vec<EigenClass> = Vec::new();
    let mut class_hits: Vec<usize> = Vec::new();
    for p in &nonzero {
        let rep = canonical_rep(p).expect("nonzero filtered above");
        match classes
            .iter()
            .position(|c| relative_distance(&c.rep, &rep) <= cfg.tracker.dedup_radius)
        {
            Some(k) => class_hits[k] += 1,
            None => {
                let xtx = dot_t(&rep, &rep);
                let rep_norm2 = vec_norm(&rep).powi(2);
                let kind = if xtx.norm() <= 1e-8 * rep_norm2 {
                    EigenKind::Isotropic
                } else {
                    EigenKind::EPair
                };
                let lambdas = match kind {
                    EigenKind::EPair => {
                        let root = xtx.sqrt();
                        let y: Vec<Complex64> = rep.iter().map(|z| z / root).collect();
                        let lambda = t.apply_form(&y)?;
                        if m.is_multiple_of(2) {
                            vec![lambda]
                        } else {
                            // present the ± pair deterministically
                            let lead = if lambda.re > 0.0
                                || (lambda.re == 0.0 && lambda.im >= 0.0)
                            {
                                lambda
                            } else {
                                -lambda
                            };
                            vec![lead, -lead]
                        }
                    }
                    _ => vec![],
                };
                let residual = minors_residual(t, &rep)?;
                classes.push(EigenClass {
                    rep,
                    xtx,
                    kind,
                    lambdas,
                    residual,
                });
                class_hits.push(1);
            }
        }
    }

    // each projective class corresponds to m−2 affine rescalings
    if path_failures == 0 && !classes.is_empty() {
        let expect_hits = m - 2;
        if class_hits.iter().any(|&h| h != expect_hits) {
            warnings.push(format!(
                "affine scaling multiplicity mismatch: expected {expect_hits} solutions per class, got {class_hits:?}"
            ));
        }
    }

    // zero-eigenvalue classes live only on singular tensors
    let det = determinant(t)?;
    let scale = det_scale(t)?;
    if det.norm() <= cfg.tol_singular * scale {
        let hom_system = MultiPolySystem::new(d, forms.clone())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6b65726e);
        let chart: Vec<Complex64> = (0..d).map(|_| complex_gaussian(&mut rng)).collect();
        match solve_projective(&hom_system, &chart, &cfg.tracker, seed.wrapping_add(1)) {
            Ok(ker) => {
                path_failures += ker.path_failures;
                if ker.nonisolated_warning {
                    warnings.push(
                        "kernel solve reported endpoint clustering; zero-eigenvalue classes may be non-isolated".to_string(),
                    );
                }
                for p in &ker.points {
                    if kernel_residual(t, p) > cfg.tol_residual {
                        continue;
                    }
                    let already = classes
                        .iter()
                        .any(|c| relative_distance(&c.rep, p) <= cfg.tracker.dedup_radius);
                    if !already {
                        classes.push(EigenClass {
                            rep: p.clone(),
                            xtx: dot_t(p, p),
                            kind: EigenKind::ZeroEigenvalue,
                            lambdas: vec![],
                            residual: kernel_residual(t, p),
                        });
                    }
                }
            }
            Err(e) => warnings.push(format!("zero-eigenvalue search failed: {e}")),
        }
    }

    Ok(EigenReport {
        classes,
        path_failures,
        warnings,
    })
}

/// The E-eigenvalues of a nonsingular tensor: the union of the `λ` values
/// over its E-pair classes. These coincide with the roots of
/// [`echar_poly`] for generic tensors. Singular tensors are refused, since
/// their zero-eigenvalue classes carry no E-normalization.
pub fn e_eigenvalues(
    t: &Tensor,
    cfg: &EigenConfig,
    seed: u64,
) -> Result<Vec<Complex64>, SpectraError> {
    if is_singular(t, cfg.tol_singular)? {
        return Err(SpectraError::SingularInput);
    }
    let report = eigenpairs(t, cfg, seed)?;
    Ok(report
        .classes
        .iter()
        .filter(|c| c.kind == EigenKind::EPair)
        .flat_map(|c| c.lambdas.iter().copied())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::poly::multiset_max_distance;
    use crate::tensor::{random_tensor, singular_tensor};

    fn diag12() -> Tensor {
        Tensor::diagonal(3, &[c64(1.0, 0.0), c64(2.0, 0.0)]).unwrap()
    }

    #[test]
    fn contraction_forms_match_contract() {
        let t = random_tensor(3, 3, 13, false);
        let forms = contraction_forms(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let x: Vec<Complex64> = (0..3).map(|_| complex_gaussian(&mut rng)).collect();
            let v = t.contract(&x).unwrap();
            for (i, f) in forms.iter().enumerate() {
                let fv = f.eval(&x).unwrap();
                assert!((fv - v[i]).norm() <= 1e-12 * v[i].norm().max(1.0));
            }
        }
    }

    #[test]
    fn determinant_of_diagonal_tensor() {
        let det = determinant(&diag12()).unwrap();
        assert!((det - c64(4.0, 0.0)).norm() < 1e-10, "got {det}");
    }

    #[test]
    fn determinant_of_zero_tensor_is_zero() {
        let det = determinant(&Tensor::zeros(3, 2).unwrap()).unwrap();
        assert_eq!(det, c64(0.0, 0.0));
    }

    #[test]
    fn determinant_vanishes_on_constructed_singular_tensors() {
        for seed in [2u64, 9] {
            let (t, _) = singular_tensor(3, 2, seed);
            let det = determinant(&t).unwrap();
            let scale = det_scale(&t).unwrap();
            assert!(det.norm() <= 1e-6 * scale, "det {det}, scale {scale}");
            assert!(is_singular(&t, 1e-8).unwrap());
        }
    }

    #[test]
    fn determinant_homogeneity() {
        let t = random_tensor(3, 2, 77, false);
        let alpha = c64(0.0, 2.0); // purely imaginary scaling
        let lhs = determinant(&t.scale(alpha)).unwrap();
        let rhs = determinant(&t).unwrap() * alpha.powu(det_degree(3, 2) as u32);
        assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm(), "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn charpoly_of_diagonal_tensor() {
        let cp = echar_poly(&diag12()).unwrap();
        assert_eq!(cp.parity, Parity::Odd);
        assert_eq!(cp.degree_expected, 6);
        assert_eq!(cp.poly.degree(), Some(6));
        // constant term = Det² = 16 for odd order
        assert!(
            (cp.poly.coeff(0) - c64(16.0, 0.0)).norm() < 1e-6 * 16.0,
            "constant {}",
            cp.poly.coeff(0)
        );
        let s = (4.0f64 / 5.0).sqrt();
        let expected = [
            c64(1.0, 0.0),
            c64(-1.0, 0.0),
            c64(2.0, 0.0),
            c64(-2.0, 0.0),
            c64(s, 0.0),
            c64(-s, 0.0),
        ];
        let roots = cp.poly.roots().unwrap();
        assert!(
            multiset_max_distance(&roots, &expected) < 1e-6,
            "roots {roots:?}"
        );
    }

    #[test]
    fn charpoly_generic_degrees() {
        let cases = [(4usize, 2usize, 4usize), (3, 2, 6), (3, 3, 14)];
        for (m, d, deg) in cases {
            let t = random_tensor(m, d, 5, false);
            let cp = echar_poly(&t).unwrap();
            assert_eq!(cp.degree_expected, deg, "(m,d)=({m},{d})");
            assert_eq!(cp.poly.degree(), Some(deg), "(m,d)=({m},{d})");
        }
    }

    #[test]
    fn charpoly_constant_term_equals_det_squared_odd() {
        let t = random_tensor(3, 2, 123, false);
        let cp = echar_poly(&t).unwrap();
        let det = determinant(&t).unwrap();
        let expected = det * det;
        assert!(
            (cp.poly.coeff(0) - expected).norm() <= 1e-6 * expected.norm(),
            "constant {} vs Det² {}",
            cp.poly.coeff(0),
            expected
        );
    }

    #[test]
    fn charpoly_constant_term_equals_det_even() {
        let t = random_tensor(4, 2, 321, false);
        let cp = echar_poly(&t).unwrap();
        let det = determinant(&t).unwrap();
        assert!(
            (cp.poly.coeff(0) - det).norm() <= 1e-6 * det.norm(),
            "constant {} vs Det {}",
            cp.poly.coeff(0),
            det
        );
    }

    #[test]
    fn eigenpairs_of_diagonal_tensor() {
        let report = eigenpairs(&diag12(), &EigenConfig::default(), 42).unwrap();
        assert_eq!(report.path_failures, 0);
        assert_eq!(report.classes.len(), 3);
        let expected_reps = [
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(0.5, 0.0)],
        ];
        for er in &expected_reps {
            assert!(
                report
                    .classes
                    .iter()
                    .any(|c| relative_distance(&c.rep, er) < 1e-7),
                "missing class {er:?}"
            );
        }
        assert!(report.classes.iter().all(|c| c.kind == EigenKind::EPair));
        assert!(report.classes.iter().all(|c| c.residual <= 1e-8));

        // λ multisets per class: {±1}, {±2}, {±2/√5}
        let all: Vec<Complex64> = report
            .classes
            .iter()
            .flat_map(|c| c.lambdas.iter().copied())
            .collect();
        let s = 2.0 / 5.0f64.sqrt();
        let expected = [
            c64(1.0, 0.0),
            c64(-1.0, 0.0),
            c64(2.0, 0.0),
            c64(-2.0, 0.0),
            c64(s, 0.0),
            c64(-s, 0.0),
        ];
        assert!(multiset_max_distance(&all, &expected) < 1e-8);
    }

    #[test]
    fn eigenpair_count_random_small() {
        let t = random_tensor(3, 2, 99, false);
        let report = eigenpairs(&t, &EigenConfig::default(), 42).unwrap();
        assert_eq!(report.path_failures, 0);
        assert_eq!(report.classes.len(), expected_class_count(3, 2));
        assert!(report
            .classes
            .iter()
            .all(|c| c.kind != EigenKind::ZeroEigenvalue));
    }

    #[test]
    fn eigenpairs_of_singular_tensor_contain_kernel_class() {
        let (t, witness) = singular_tensor(3, 2, 4);
        let report = eigenpairs(&t, &EigenConfig::default(), 42).unwrap();
        let wrep = canonical_rep(&witness).unwrap();
        let zero_classes: Vec<&EigenClass> = report
            .classes
            .iter()
            .filter(|c| c.kind == EigenKind::ZeroEigenvalue)
            .collect();
        assert!(!zero_classes.is_empty(), "no zero-eigenvalue class found");
        assert!(
            zero_classes
                .iter()
                .any(|c| relative_distance(&c.rep, &wrep) < 1e-6),
            "kernel witness not among zero classes"
        );
    }

    #[test]
    fn minors_residual_values() {
        let t = diag12();
        let r = minors_residual(&t, &[c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(r < 1e-15);
        let r = minors_residual(&t, &[c64(1.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!((r - 1.0 / 10.0f64.sqrt()).abs() < 1e-12, "got {r}");
        assert!(matches!(
            minors_residual(&t, &[c64(0.0, 0.0), c64(0.0, 0.0)]),
            Err(SpectraError::ZeroVector)
        ));
    }

    #[test]
    fn e_eigenvalues_match_charpoly_roots() {
        let t = random_tensor(3, 2, 2718, false);
        let cfg = EigenConfig::default();
        let vals = e_eigenvalues(&t, &cfg, 42).unwrap();
        let cp = echar_poly(&t).unwrap();
        let roots = cp.poly.roots().unwrap();
        assert_eq!(vals.len(), roots.len());
        assert!(
            multiset_max_distance(&vals, &roots) < 1e-6,
            "vals {vals:?} roots {roots:?}"
        );
    }

    #[test]
    fn e_eigenvalues_refuse_singular_input() {
        let (t, _) = singular_tensor(3, 2, 11);
        assert!(matches!(
            e_eigenvalues(&t, &EigenConfig::default(), 42),
            Err(SpectraError::SingularInput)
        ));
    }

    #[test]
    fn projective_map_fixed_points() {
        let t = diag12();
        let fixed = projective_map_step(&t, &[c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(relative_distance(&fixed, &[c64(1.0, 0.0), c64(0.0, 0.0)]) < 1e-14);

        let image = projective_map_step(&t, &[c64(2.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!(relative_distance(&image, &[c64(1.0, 0.0), c64(0.5, 0.0)]) < 1e-14);

        let mut mono = Tensor::zeros(3, 2).unwrap();
        mono.set(&[0, 0, 0], c64(1.0, 0.0));
        assert!(matches!(
            projective_map_step(&mono, &[c64(0.0, 0.0), c64(1.0, 0.0)]),
            Err(SpectraError::ZeroImage)
        ));
    }

    #[test]
    fn scaling_sends_class_members_to_one_representative() {
        let t = random_tensor(3, 2, 404, false);
        let report = eigenpairs(&t, &EigenConfig::default(), 42).unwrap();
        for c in &report.classes {
            for alpha in [c64(2.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)] {
                let scaled: Vec<Complex64> = c.rep.iter().map(|z| z * alpha).collect();
                let rep = canonical_rep(&scaled).unwrap();
                assert!(relative_distance(&rep, &c.rep) < 1e-12);
            }
        }
    }

    #[test]
    fn report_json_has_contract_shape() {
        let report = eigenpairs(&diag12(), &EigenConfig::default(), 42).unwrap();
        let s = report.to_json();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["count"], 3);
        assert!(v["classes"].as_array().unwrap().len() == 3);
        assert!(v["classes"][0]["rep"].is_array());
        assert!(v["classes"][0]["kind"].is_string());
        assert!(v["path_failures"].is_number());
        assert!(v["warnings"].is_array());
    }
}
