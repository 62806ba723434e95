//! End-to-end acceptance gate: one test per guaranteed property of the
//! library, with pinned tolerances. Each test prints a single pass/fail
//! line through the harness; together they pin the public behavior that
//! downstream users may rely on.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teneig_core::geometry::{discriminant_check, discriminant_closed_form, HypersurfaceSpec};
use teneig_core::invariants::{
    crosscheck_sweep, det_trace_formula, random_symmetric_pair, MatrixPair,
};
use teneig_core::linalg::{c64, complex_gaussian, dot_t, relative_distance, vec_norm, CMatrix};
use teneig_core::poly::{interpolate, multiset_max_distance, MultiPoly, MultiPolySystem};
use teneig_core::resultant::sylvester_resultant;
use teneig_core::spectra::{
    det_scale, determinant, e_eigenvalues, echar_poly, eigenpairs, expected_class_count,
    minors_residual, EigenConfig, EigenKind,
};
use teneig_core::tensor::{random_tensor, singular_tensor, Tensor};
use teneig_core::{solve_square, TrackerConfig};

/// The four tensor shapes exercised throughout: (order, dim).
const SHAPES: [(usize, usize); 4] = [(3, 2), (4, 2), (3, 3), (4, 3)];

fn lambda_multiset_of(report: &teneig_core::spectra::EigenReport) -> Vec<Complex64> {
    report
        .classes
        .iter()
        .flat_map(|c| c.lambdas.iter().copied())
        .collect()
}

#[test]
fn a01_class_counts_and_path_accounting() {
    // Generic class counts 3, 4, 7, 13 across the four shapes, twenty
    // random tensors each, with zero path failures, and a 10 s budget per
    // tensor at the largest shape.
    let cfg = EigenConfig::default();
    for (order, dim) in SHAPES {
        let expected = expected_class_count(order, dim);
        for k in 0..20u64 {
            let t = random_tensor(order, dim, 1000 + k, false);
            let start = Instant::now();
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            let elapsed = start.elapsed();
            assert_eq!(
                report.classes.len(),
                expected,
                "shape ({order},{dim}) seed {k}: {} classes, warnings {:?}",
                report.classes.len(),
                report.warnings
            );
            assert_eq!(
                report.path_failures, 0,
                "shape ({order},{dim}) seed {k}: path failures"
            );
            if (order, dim) == (4, 3) {
                assert!(
                    elapsed < Duration::from_secs(10),
                    "shape (4,3) seed {k} took {elapsed:?}"
                );
            }
        }
    }
}

#[test]
fn a02_constant_term_identity() {
    // χ(0) = Det for even order and Det² for odd order, within 1e−6
    // relative, ten random tensors per shape.
    for (order, dim) in [(4usize, 2usize), (3, 2), (3, 3)] {
        for k in 0..10u64 {
            let t = random_tensor(order, dim, 2000 + k, false);
            let cp = echar_poly(&t).expect("characteristic polynomial");
            let det = determinant(&t).expect("determinant");
            let expected = if order % 2 == 0 { det } else { det * det };
            let got = cp.poly.coeff(0);
            assert!(
                (got - expected).norm() <= 1e-6 * expected.norm(),
                "shape ({order},{dim}) seed {k}: constant {got} vs {expected}"
            );
        }
    }
}

#[test]
fn a03_generic_degree_formula() {
    // deg χ = 4, 6, 14 at shapes (4,2), (3,2), (3,3).
    for (order, dim, expected) in [(4usize, 2usize, 4usize), (3, 2, 6), (3, 3, 14)] {
        for k in 0..3u64 {
            let t = random_tensor(order, dim, 3000 + k, false);
            let cp = echar_poly(&t).expect("characteristic polynomial");
            assert_eq!(
                cp.poly.degree(),
                Some(expected),
                "shape ({order},{dim}) seed {k}"
            );
        }
    }
}

#[test]
fn a04_eigenvalues_match_polynomial_roots() {
    // The E-eigenvalue multiset equals the root multiset of χ within a
    // 1e−6 pairing tolerance, ten nonsingular tensors per shape.
    let cfg = EigenConfig::default();
    for (order, dim) in [(3usize, 2usize), (4, 2)] {
        for k in 0..10u64 {
            let t = random_tensor(order, dim, 4000 + k, false);
            let values = e_eigenvalues(&t, &cfg, 42).expect("nonsingular input");
            let roots = echar_poly(&t)
                .expect("characteristic polynomial")
                .poly
                .roots()
                .expect("root extraction");
            assert_eq!(values.len(), roots.len(), "shape ({order},{dim}) seed {k}");
            let gap = multiset_max_distance(&values, &roots);
            assert!(
                gap <= 1e-6,
                "shape ({order},{dim}) seed {k}: pairing gap {gap}"
            );
        }
    }
}

fn rotation(theta: f64) -> CMatrix {
    let mut g = CMatrix::zeros(2, 2);
    g[(0, 0)] = c64(theta.cos(), 0.0);
    g[(0, 1)] = c64(-theta.sin(), 0.0);
    g[(1, 0)] = c64(theta.sin(), 0.0);
    g[(1, 1)] = c64(theta.cos(), 0.0);
    g
}

#[test]
fn a05_orthogonal_invariance_of_char_poly() {
    // χ is unchanged (coefficientwise, 1e−6 relative to the coefficient
    // scale) under a real orthogonal change of basis on every mode.
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for (order, dim) in [(3usize, 2usize), (4, 2)] {
        let modes: Vec<usize> = (1..=order).collect();
        for k in 0..10u64 {
            let t = random_tensor(order, dim, 5000 + k, false);
            let q = rotation(rng.gen_range(0.0..std::f64::consts::TAU));
            let t2 = t.mode_transform(&q, &modes).expect("orthogonal transform");
            let a = echar_poly(&t).expect("characteristic polynomial").poly;
            let b = echar_poly(&t2).expect("characteristic polynomial").poly;
            assert_eq!(a.degree(), b.degree(), "shape ({order},{dim}) seed {k}");
            let scale = a.coeff_scale();
            for i in 0..a.coeffs().len() {
                let gap = (a.coeff(i) - b.coeff(i)).norm();
                assert!(
                    gap <= 1e-6 * scale,
                    "shape ({order},{dim}) seed {k}: coefficient {i} moved by {gap:e}"
                );
            }
        }
    }
}

#[test]
fn a06_discriminant_factorization() {
    // Direct resultant samples of the gradient system match the factored
    // discriminant λ^{(m−1)^{n+1}}·Det^{m−3}·χ^k to 1e−6 relative, with
    // the order-3 and order-4 shapes reducing to λ⁴·χ and λ⁹·Det·χ².
    for (order, samples) in [(3usize, 13usize), (4, 20)] {
        let t = random_tensor(order, 2, 600 + order as u64, true);
        let report = discriminant_check(&t, samples).expect("discriminant check");
        assert!(
            report.max_rel_deviation <= 1e-6,
            "order {order}: deviation {}",
            report.max_rel_deviation
        );

        // structure of the closed form: a pure λ-power shift of χ (times
        // Det for order 4)
        let cp = echar_poly(&t).expect("characteristic polynomial").poly;
        let det = determinant(&t).expect("determinant");
        let closed = discriminant_closed_form(&t).expect("closed form");
        let (shift, reference) = match order {
            3 => (4usize, cp.clone()),
            4 => (9usize, cp.mul(&cp).scale(det)),
            _ => unreachable!(),
        };
        assert_eq!(closed.degree(), Some(shift + reference.degree().unwrap()));
        let scale = reference.coeff_scale();
        for i in 0..shift {
            assert!(closed.coeff(i).norm() <= 1e-9 * scale, "low term {i}");
        }
        for i in 0..reference.coeffs().len() {
            let gap = (closed.coeff(i + shift) - reference.coeff(i)).norm();
            assert!(gap <= 1e-6 * scale, "order {order} coefficient {i}: {gap:e}");
        }
    }
}

#[test]
fn a07_eigenpairs_are_singular_points() {
    // For symmetric nonsingular tensors, E-pairs are exactly the singular
    // points of the potential's zero set: every enumerated E-pair passes
    // the check, random non-eigen points fail it.
    let cfg = EigenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    for (order, dim) in [(3usize, 2usize), (4, 2)] {
        for k in 0..10u64 {
            let t = random_tensor(order, dim, 7000 + k, true);
            let spec = HypersurfaceSpec::new(t.clone()).expect("symmetric input");
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            let mut epairs = 0;
            for class in &report.classes {
                if class.kind != EigenKind::EPair {
                    continue;
                }
                epairs += 1;
                let sp = spec.singular_point_check(class).expect("E-pair check");
                assert!(
                    sp.is_singular_point,
                    "shape ({order},{dim}) seed {k}: p {:e}, grad {:e}",
                    sp.p_abs, sp.grad_norm
                );
            }
            assert!(epairs > 0, "shape ({order},{dim}) seed {k}: no E-pairs");
        }

        // random non-eigen points must fail
        let t = random_tensor(order, dim, 7100, true);
        let spec = HypersurfaceSpec::new(t.clone()).expect("symmetric input");
        let mut rejected = 0;
        while rejected < 20 {
            let x: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
            if minors_residual(&t, &x).expect("nonzero vector") < 1e-3 {
                continue; // accidental near-eigenvector; draw again
            }
            let fake = teneig_core::spectra::EigenClass {
                xtx: dot_t(&x, &x),
                rep: x,
                kind: EigenKind::EPair,
                lambdas: vec![],
                residual: 1.0,
            };
            let sp = spec.singular_point_check(&fake).expect("check runs");
            assert!(!sp.is_singular_point, "random point passed at ({order},{dim})");
            rejected += 1;
        }
    }
}

#[test]
fn a08_nonsingular_tensors_have_e_eigenpairs() {
    // Existence: a nonsingular tensor always carries at least one E-pair.
    let cfg = EigenConfig::default();
    for (order, dim) in SHAPES {
        for k in 0..5u64 {
            let t = random_tensor(order, dim, 8000 + k, false);
            let det = determinant(&t).expect("determinant");
            let scale = det_scale(&t).expect("scale");
            assert!(det.norm() > 1e-8 * scale, "seed {k} unexpectedly singular");
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            assert!(
                report.classes.iter().any(|c| c.kind == EigenKind::EPair),
                "shape ({order},{dim}) seed {k}: no E-pair among {} classes",
                report.classes.len()
            );
        }
    }
}

#[test]
fn a09_no_isotropic_classes_generically() {
    // Random tensors have no isotropic eigenvector classes:
    // |xᵀx|/‖x‖² stays above 1e−6 on every enumerated class.
    let cfg = EigenConfig::default();
    for (order, dim) in SHAPES {
        for k in 0..5u64 {
            let t = random_tensor(order, dim, 9000 + k, false);
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            for class in &report.classes {
                let ratio = class.xtx.norm() / vec_norm(&class.rep).powi(2);
                assert!(
                    ratio > 1e-6,
                    "shape ({order},{dim}) seed {k}: isotropy ratio {ratio:e}"
                );
            }
        }
    }
}

#[test]
fn a10_singularity_dichotomy() {
    // Constructed singular tensors produce a zero-eigenvalue class and a
    // determinant below 1e−6 of the random-tensor scale; random tensors
    // produce neither.
    let cfg = EigenConfig::default();
    for (order, dim) in [(3usize, 2usize), (3, 3)] {
        for k in 0..10u64 {
            let (t, witness) = singular_tensor(order, dim, 100 + k);
            let det = determinant(&t).expect("determinant");
            let scale = det_scale(&t).expect("scale");
            assert!(
                det.norm() <= 1e-6 * scale,
                "shape ({order},{dim}) seed {k}: |Det| {:e} vs scale {:e}",
                det.norm(),
                scale
            );
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            let zeros: Vec<_> = report
                .classes
                .iter()
                .filter(|c| c.kind == EigenKind::ZeroEigenvalue)
                .collect();
            assert!(
                !zeros.is_empty(),
                "shape ({order},{dim}) seed {k}: no zero-eigenvalue class"
            );
            // the planted kernel direction is among them
            let wrep = teneig_core::linalg::canonical_rep(&witness).expect("nonzero witness");
            assert!(
                zeros.iter().any(|c| relative_distance(&c.rep, &wrep) <= 1e-5),
                "shape ({order},{dim}) seed {k}: witness direction missing"
            );
        }
        for k in 0..10u64 {
            let t = random_tensor(order, dim, 10_500 + k, false);
            let det = determinant(&t).expect("determinant");
            let scale = det_scale(&t).expect("scale");
            assert!(det.norm() > 1e-6 * scale, "random tensor flagged singular");
            let report = eigenpairs(&t, &cfg, 42).expect("enumeration succeeds");
            assert!(
                report
                    .classes
                    .iter()
                    .all(|c| c.kind != EigenKind::ZeroEigenvalue),
                "shape ({order},{dim}) seed {k}: spurious zero class"
            );
        }
    }
}

#[test]
fn a11_diagonal_tensor_closed_form() {
    // Order-3 diagonal tensor with entries (1, 2): classes [1:0], [0:1],
    // [2:1]; Det = 4; E-eigenvalues ±1, ±2, ±2/√5, all to 1e−8.
    let t = Tensor::diagonal(3, &[c64(1.0, 0.0), c64(2.0, 0.0)]).expect("diagonal tensor");
    let det = determinant(&t).expect("determinant");
    assert!((det - c64(4.0, 0.0)).norm() <= 1e-8);

    let report = eigenpairs(&t, &EigenConfig::default(), 42).expect("enumeration succeeds");
    assert_eq!(report.classes.len(), 3);
    let expected_reps = [
        vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(1.0, 0.0)],
        vec![c64(1.0, 0.0), c64(0.5, 0.0)], // [2:1] in canonical scaling
    ];
    for er in &expected_reps {
        assert!(
            report
                .classes
                .iter()
                .any(|c| relative_distance(&c.rep, er) <= 1e-8),
            "missing class {er:?}"
        );
    }
    let s = 2.0 / 5.0f64.sqrt();
    let expected = [
        c64(1.0, 0.0),
        c64(-1.0, 0.0),
        c64(2.0, 0.0),
        c64(-2.0, 0.0),
        c64(s, 0.0),
        c64(-s, 0.0),
    ];
    let values = lambda_multiset_of(&report);
    assert!(multiset_max_distance(&values, &expected) <= 1e-8);
}

#[test]
fn a12_trace_formula_audit() {
    // The closed trace expression is evaluated exactly as written and
    // audited against the resultant determinant under all three slicing
    // conventions; the audit reports deviations without requiring
    // agreement.
    let desk = [
        ((1.0, 1.0, 1.0, -1.0), 4.0),
        ((1.0, 0.0, 0.0, 1.0), 0.0),
        ((1.0, 1.0, 1.0, 1.0), -8.0),
    ];
    for ((a0, a1, b0, b1), want) in desk {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c64(a0, 0.0);
        a[(1, 1)] = c64(a1, 0.0);
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 0)] = c64(b0, 0.0);
        b[(1, 1)] = c64(b1, 0.0);
        let pair = MatrixPair::new(a, b).expect("symmetric pair");
        let formula = det_trace_formula(&pair);
        assert!(
            (formula - c64(want, 0.0)).norm() <= 1e-14,
            "formula arithmetic: got {formula}, want {want}"
        );
        let reports = crosscheck_sweep(&pair).expect("sweep");
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.abs_deviation.is_finite());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(120);
    for _ in 0..20 {
        let pair = random_symmetric_pair(&mut rng);
        let reports = crosscheck_sweep(&pair).expect("sweep");
        assert_eq!(reports.len(), 3, "one report per slicing convention");
        for r in &reports {
            assert!(r.abs_deviation.is_finite());
            assert!(r.rel_deviation.is_finite());
        }
    }
}

#[test]
fn a13_solver_matches_elimination_oracle() {
    // Twenty random dense two-variable systems of degrees ≤ 3: the
    // homotopy solver's solution set matches the roots produced by
    // Sylvester elimination plus interpolation, and the path accounting is
    // exactly Bézout.
    let cfg = TrackerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(130);
    for trial in 0..20u64 {
        let d0 = rng.gen_range(1..=3usize);
        let d1 = rng.gen_range(1..=3usize);
        let dense = |deg: usize, rng: &mut ChaCha8Rng| {
            let mut terms = Vec::new();
            for a in 0..=deg {
                for b in 0..=(deg - a) {
                    terms.push((vec![a, b], complex_gaussian(rng)));
                }
            }
            MultiPoly::new(2, terms)
        };
        let f = dense(d0, &mut rng);
        let g = dense(d1, &mut rng);
        let system = MultiPolySystem::new(2, vec![f.clone(), g.clone()]).expect("system");

        let sol = solve_square(&system, &cfg, 42 + trial).expect("solver");
        assert_eq!(
            sol.points.len() + sol.merged + sol.path_failures,
            sol.paths_tracked,
            "trial {trial}: bookkeeping"
        );
        assert_eq!(sol.paths_tracked, d0 * d1, "trial {trial}: path count");
        assert_eq!(sol.path_failures, 0, "trial {trial}: failures");

        // eliminate x₁ by a sampled Sylvester resultant in x₀
        let res_degree = d0 * d1;
        let nodes = res_degree + 3;
        let mut samples = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let theta = std::f64::consts::TAU * k as f64 / nodes as f64 + 0.37;
            let x0 = Complex64::new(1.9 * theta.cos(), 1.9 * theta.sin());
            let uni = |p: &MultiPoly, deg: usize| {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
                for (e, c) in p.terms() {
                    coeffs[e[1]] += c * x0.powu(e[0] as u32);
                }
                teneig_core::UniPoly::new(coeffs)
            };
            let value =
                sylvester_resultant(&uni(&f, d0), d0, &uni(&g, d1), d1).expect("resultant");
            samples.push((x0, value));
        }
        let elim = interpolate(&samples, res_degree).expect("interpolation");
        let oracle_roots = elim.roots().expect("roots");

        let solver_x0: Vec<Complex64> = sol.points.iter().map(|p| p[0]).collect();
        assert_eq!(solver_x0.len(), oracle_roots.len(), "trial {trial}");
        let gap = multiset_max_distance(&solver_x0, &oracle_roots);
        assert!(gap <= 1e-6, "trial {trial}: pairing gap {gap:e}");
    }
}
