//! Total-degree homotopy continuation for small square polynomial systems.
//!
//! The deformation is `H(x, s) = (1−s)·γ·G(x) + s·F(x)` with the start
//! system `G = {xᵢ^{dᵢ} − 1}` and a seeded random unit `γ` (gamma trick).
//! Paths are advanced by an explicit Euler predictor on the Davidenko ODE
//! and pulled back by a Newton corrector, with adaptive step halving and
//! doubling between the configured bounds. Every start point is accounted
//! for: it either converges, merges into a duplicate, or is counted as a
//! path failure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{canonical_rep, complex_gaussian, relative_distance, vec_norm, CMatrix};
use crate::poly::{MultiPoly, MultiPolySystem, PolyError};

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("system is not square: {npolys} polynomials in {nvars} variables")]
    NotSquare { nvars: usize, npolys: usize },
    #[error("polynomial {0} is constant; every tracked polynomial needs degree ≥ 1")]
    ConstantPoly(usize),
    #[error("projective solve requires homogeneous forms of one shared degree")]
    MixedProjectiveInput,
    #[error("system has no polynomials")]
    Empty,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Path-tracking parameters. The defaults are the contract the rest of the
/// crate is tuned against.
#[derive(Debug, Clone)]
pub struct TrackerConfig {
    /// Starting (and maximum) continuation step in `s`.
    pub initial_step: f64,
    /// A path whose step falls below this is declared failed.
    pub min_step: f64,
    /// Newton corrector convergence threshold on the relative update norm.
    pub corrector_tol: f64,
    /// Newton corrections allowed per continuation step.
    pub max_corrections: usize,
    /// Endgame polish target for the relative system residual.
    pub endgame_tol: f64,
    /// Relative radius within which endpoints are merged as duplicates.
    pub dedup_radius: f64,
    /// Track paths on a thread pool; the merged result is identical to the
    /// serial one up to dedup-radius equivalence.
    pub parallel: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.05,
            min_step: 1e-7,
            corrector_tol: 1e-10,
            max_corrections: 3,
            endgame_tol: 1e-12,
            dedup_radius: 1e-6,
            parallel: false,
        }
    }
}

/// Solutions of one continuation run, with exact path bookkeeping:
/// `points.len() + merged + path_failures == paths_tracked`.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub points: Vec<Vec<Complex64>>,
    /// Relative residual of the solved system at each reported point.
    pub residuals: Vec<f64>,
    pub paths_tracked: usize,
    pub path_failures: usize,
    pub merged: usize,
    /// Set when failed paths cluster, the signature of a non-isolated
    /// solution component that this tracker does not resolve.
    pub nonisolated_warning: bool,
}

enum PathOutcome {
    Converged { point: Vec<Complex64>, residual: f64 },
    Failed { last: Vec<Complex64> },
}

struct Tracker<'a> {
    f: &'a [MultiPoly],
    fjac: Vec<Vec<MultiPoly>>,
    degrees: Vec<usize>,
    gamma: Complex64,
    cfg: &'a TrackerConfig,
}

impl<'a> Tracker<'a> {
    fn new(
        system: &'a MultiPolySystem,
        gamma: Complex64,
        cfg: &'a TrackerConfig,
    ) -> Result<Self, HomotopyError> {
        let n = system.nvars();
        if system.is_empty() {
            return Err(HomotopyError::Empty);
        }
        if system.len() != n {
            return Err(HomotopyError::NotSquare {
                nvars: n,
                npolys: system.len(),
            });
        }
        let degrees = system.degrees();
        for (i, &d) in degrees.iter().enumerate() {
            if d == 0 {
                return Err(HomotopyError::ConstantPoly(i));
            }
        }
        let fjac = system
            .polys()
            .iter()
            .map(|p| (0..n).map(|v| p.partial(v)).collect())
            .collect();
        Ok(Tracker {
            f: system.polys(),
            fjac,
            degrees,
            gamma,
            cfg,
        })
    }

    fn n(&self) -> usize {
        self.f.len()
    }

    fn f_eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.f.iter().map(|p| p.eval(x).expect("length ok")).collect()
    }

    fn g_eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.degrees
            .iter()
            .zip(x)
            .map(|(&d, &xi)| xi.powu(d as u32) - 1.0)
            .collect()
    }

    fn h_eval(&self, x: &[Complex64], s: f64) -> Vec<Complex64> {
        let fv = self.f_eval(x);
        let gv = self.g_eval(x);
        fv.iter()
            .zip(&gv)
            .map(|(f, g)| s * f + (1.0 - s) * self.gamma * g)
            .collect()
    }

    fn h_jacobian(&self, x: &[Complex64], s: f64) -> CMatrix {
        let n = self.n();
        let mut j = CMatrix::zeros(n, n);
        for (i, row) in self.fjac.iter().enumerate() {
            for (v, p) in row.iter().enumerate() {
                j[(i, v)] = p.eval(x).expect("length ok") * s;
            }
            // start-system Jacobian is diagonal: dᵢ·xᵢ^{dᵢ−1}
            let d = self.degrees[i] as u32;
            j[(i, i)] += (1.0 - s)
                * self.gamma
                * Complex64::new(d as f64, 0.0)
                * x[i].powu(d.saturating_sub(1));
        }
        j
    }

    /// ∂H/∂s = F − γG, the Davidenko right-hand side (negated later).
    fn h_s(&self, x: &[Complex64]) -> Vec<Complex64> {
        let fv = self.f_eval(x);
        let gv = self.g_eval(x);
        fv.iter().zip(&gv).map(|(f, g)| f - self.gamma * g).collect()
    }

    fn newton_correct(&self, x0: &[Complex64], s: f64) -> Option<Vec<Complex64>> {
        let mut x = x0.to_vec();
        for _ in 0..self.cfg.max_corrections {
            let h = self.h_eval(&x, s);
            let j = self.h_jacobian(&x, s);
            let rhs: Vec<Complex64> = h.iter().map(|z| -z).collect();
            let delta = j.lu().solve(&rhs)?;
            for (xi, d) in x.iter_mut().zip(&delta) {
                *xi += d;
            }
            if vec_norm(&delta) <= self.cfg.corrector_tol * (1.0 + vec_norm(&x)) {
                return Some(x);
            }
        }
        None
    }

    fn track(&self, start: Vec<Complex64>) -> PathOutcome {
        let mut x = start;
        let mut s = 0.0f64;
        let mut step = self.cfg.initial_step;
        let mut ok_streak = 0usize;
        let mut iterations = 0usize;

        while s < 1.0 {
            iterations += 1;
            if iterations > 20_000 {
                return PathOutcome::Failed { last: x };
            }
            let ds = step.min(1.0 - s);

            // Euler predictor on H_x · dx/ds = −(F − γG)
            let j = self.h_jacobian(&x, s);
            let rhs: Vec<Complex64> = self.h_s(&x).iter().map(|z| -z).collect();
            let predicted = match j.lu().solve(&rhs) {
                Some(dxds) => x
                    .iter()
                    .zip(&dxds)
                    .map(|(xi, d)| xi + d * ds)
                    .collect::<Vec<_>>(),
                None => {
                    step *= 0.5;
                    ok_streak = 0;
                    if step < self.cfg.min_step {
                        return PathOutcome::Failed { last: x };
                    }
                    continue;
                }
            };

            match self.newton_correct(&predicted, s + ds) {
                Some(corrected) => {
                    x = corrected;
                    s += ds;
                    if vec_norm(&x) > 1e10 {
                        // diverging toward a solution at infinity
                        return PathOutcome::Failed { last: x };
                    }
                    ok_streak += 1;
                    if ok_streak >= 4 {
                        step = (step * 2.0).min(self.cfg.initial_step);
                        ok_streak = 0;
                    }
                }
                None => {
                    step *= 0.5;
                    ok_streak = 0;
                    if step < self.cfg.min_step {
                        return PathOutcome::Failed { last: x };
                    }
                }
            }
        }

        // endgame: plain Newton polish on F itself
        let system = MultiPolySystem::new(self.n(), self.f.to_vec()).expect("already validated");
        let mut best = x.clone();
        let mut best_res = system.residual_rel(&best);
        for _ in 0..50 {
            if best_res <= self.cfg.endgame_tol {
                break;
            }
            let fv = self.f_eval(&x);
            let j = self.h_jacobian(&x, 1.0);
            let rhs: Vec<Complex64> = fv.iter().map(|z| -z).collect();
            let Some(delta) = j.lu().solve(&rhs) else { break };
            for (xi, d) in x.iter_mut().zip(&delta) {
                *xi += d;
            }
            let res = system.residual_rel(&x);
            if res < best_res {
                best = x.clone();
                best_res = res;
            } else {
                break; // stagnation
            }
        }
        if best_res <= self.cfg.corrector_tol {
            PathOutcome::Converged {
                point: best,
                residual: best_res,
            }
        } else {
            PathOutcome::Failed { last: best }
        }
    }
}

fn start_points(degrees: &[usize]) -> Vec<Vec<Complex64>> {
    // the full grid of dᵢ-th roots of unity
    let mut points: Vec<Vec<Complex64>> = vec![vec![]];
    for &d in degrees {
        let roots: Vec<Complex64> = (0..d)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
                Complex64::new(th.cos(), th.sin())
            })
            .collect();
        let mut next = Vec::with_capacity(points.len() * d);
        for p in &points {
            for &r in &roots {
                let mut q = p.clone();
                q.push(r);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

fn merge_outcomes(outcomes: Vec<PathOutcome>, cfg: &TrackerConfig) -> SolutionSet {
    let paths_tracked = outcomes.len();
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();
    let mut merged = 0usize;
    let mut failed_ends: Vec<Vec<Complex64>> = Vec::new();

    for outcome in outcomes {
        match outcome {
            PathOutcome::Converged { point, residual } => {
                let dup = points
                    .iter()
                    .position(|p| relative_distance(p, &point) <= cfg.dedup_radius);
                match dup {
                    Some(k) => {
                        merged += 1;
                        if residual < residuals[k] {
                            points[k] = point; // keep the cleaner representative
                            residuals[k] = residual;
                        }
                    }
                    None => {
                        points.push(point);
                        residuals.push(residual);
                    }
                }
            }
            PathOutcome::Failed { last } => failed_ends.push(last),
        }
    }

    // failed paths that stall near one another (or near a reported point)
    // suggest a positive-dimensional solution set
    let mut nonisolated = false;
    'outer: for (i, a) in failed_ends.iter().enumerate() {
        for b in failed_ends[i + 1..].iter() {
            if relative_distance(a, b) <= 10.0 * cfg.dedup_radius {
                nonisolated = true;
                break 'outer;
            }
        }
        for p in &points {
            if relative_distance(a, p) <= 10.0 * cfg.dedup_radius {
                nonisolated = true;
                break 'outer;
            }
        }
    }

    SolutionSet {
        points,
        residuals,
        paths_tracked,
        path_failures: failed_ends.len(),
        merged,
        nonisolated_warning: nonisolated,
    }
}

/// Find all isolated solutions of a square polynomial system by tracking
/// every total-degree start point. Deterministic for a fixed seed; with
/// `cfg.parallel` the paths run on a thread pool and are merged in start
/// order, giving the same set.
pub fn solve_square(
    system: &MultiPolySystem,
    cfg: &TrackerConfig,
    seed: u64,
) -> Result<SolutionSet, HomotopyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: f64 = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    let gamma = Complex64::new(theta.cos(), theta.sin());
    let tracker = Tracker::new(system, gamma, cfg)?;
    let starts = start_points(&tracker.degrees);

    let outcomes: Vec<PathOutcome> = if cfg.parallel {
        starts
            .into_par_iter()
            .map(|p| tracker.track(p))
            .collect()
    } else {
        starts.into_iter().map(|p| tracker.track(p)).collect()
    };
    Ok(merge_outcomes(outcomes, cfg))
}

/// Find the nonzero projective solutions of a system of homogeneous forms
/// of one shared degree (not necessarily square).
///
/// The forms are compressed into `nvars − 1` seeded random linear
/// combinations, an affine chart `chart·x = 1` is appended, and the square
/// system is handed to [`solve_square`]. Solutions of the compressed
/// system that fail the residual filter of the *full* original system
/// (relative residual ≤ 1e−8) are discarded; survivors are returned as
/// canonical projective representatives. An empty result is a meaningful
/// outcome, not an error.
pub fn solve_projective(
    system: &MultiPolySystem,
    chart: &[Complex64],
    cfg: &TrackerConfig,
    seed: u64,
) -> Result<SolutionSet, HomotopyError> {
    let n = system.nvars();
    if system.is_empty() {
        return Err(HomotopyError::Empty);
    }
    let degree = system.polys()[0].degree();
    for p in system.polys() {
        if !p.is_homogeneous() || p.degree() != degree || p.is_zero() {
            return Err(HomotopyError::MixedProjectiveInput);
        }
    }
    assert_eq!(chart.len(), n, "chart covector length mismatch");

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x70726f6a);
    let mut square_polys: Vec<MultiPoly> = Vec::with_capacity(n);
    for _ in 0..n - 1 {
        let mut combo = MultiPoly::zero(n);
        for p in system.polys() {
            combo = combo.add(&p.scale(complex_gaussian(&mut rng)))?;
        }
        square_polys.push(combo);
    }
    // affine chart: chart·x − 1
    let mut chart_poly = MultiPoly::linear_form(chart);
    chart_poly = chart_poly.add(&MultiPoly::constant(n, Complex64::new(-1.0, 0.0)))?;
    square_polys.push(chart_poly);

    let square = MultiPolySystem::new(n, square_polys)?;
    let inner = solve_square(&square, cfg, seed)?;

    let mut points: Vec<Vec<Complex64>> = Vec::new();
    let mut residuals = Vec::new();
    let mut rejected = 0usize;
    for p in &inner.points {
        let res = system.residual_rel(p);
        if res <= 1e-8 {
            if let Some(rep) = canonical_rep(p) {
                // distinct chart points are distinct projective points, but
                // dedup defensively on the canonical representative
                let dup = points
                    .iter()
                    .position(|q| relative_distance(q, &rep) <= cfg.dedup_radius);
                if dup.is_none() {
                    points.push(rep);
                    residuals.push(res);
                } else {
                    rejected += 1;
                }
            } else {
                rejected += 1;
            }
        } else {
            rejected += 1;
        }
    }

    Ok(SolutionSet {
        points,
        residuals,
        paths_tracked: inner.paths_tracked,
        path_failures: inner.path_failures,
        merged: inner.merged + rejected,
        nonisolated_warning: inner.nonisolated_warning,
    })
}
