//! Dense complex tensors of order `m ≥ 3` and the handful of operations the
//! spectral machinery needs: contraction, slicing, multilinear transforms,
//! symmetrization, and seeded generators for test inputs.

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{complex_gaussian, dot_t, vec_norm, CMatrix};

/// Errors produced by tensor construction and the operations below.
#[derive(Debug, Error)]
pub enum TensorError {
    #[error("tensor order must be at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error("tensor dimension must be at least 2, got {0}")]
    DimTooSmall(usize),
    #[error("entry count mismatch: expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("vector length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix shape mismatch: expected {expected}×{expected}, got {rows}×{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("mode index {0} out of range 1..={1}")]
    ModeOutOfRange(usize, usize),
    #[error("operation requires an order-3 tensor, got order {0}")]
    NotOrderThree(usize),
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Dense order-`m`, dimension-`d` complex hypermatrix.
///
/// Entries are stored row-major in lexicographic order of the index tuple
/// `(i₁, …, i_m)`, each index running over `0..dim`. An order-3 tensor of
/// dimension 2 therefore stores `t₀₀₀, t₀₀₁, t₀₁₀, t₀₁₁, t₁₀₀, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<Complex64>,
    symmetric_hint: bool,
}

/// Slice matrices of an order-3 tensor: `(T x²)_i = xᵀ A⁽ⁱ⁾ x` with
/// `A⁽ⁱ⁾[j][k] = t_{ijk}`.
#[derive(Debug, Clone)]
pub struct SliceMatrices {
    pub mats: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    order: usize,
    dim: usize,
    symmetric: bool,
    entries: Vec<[f64; 2]>,
}

impl Tensor {
    /// Build a tensor from its flat entry list, validating shape and
    /// finiteness.
    pub fn new(order: usize, dim: usize, entries: Vec<Complex64>) -> Result<Self, TensorError> {
        if order < 3 {
            return Err(TensorError::OrderTooSmall(order));
        }
        if dim < 2 {
            return Err(TensorError::DimTooSmall(dim));
        }
        let expected = dim.pow(order as u32);
        if entries.len() != expected {
            return Err(TensorError::EntryCount {
                expected,
                got: entries.len(),
            });
        }
        for (i, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(TensorError::NonFinite(i));
            }
        }
        Ok(Tensor {
            order,
            dim,
            entries,
            symmetric_hint: false,
        })
    }

    /// All-zero tensor.
    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        Tensor::new(order, dim, vec![Complex64::new(0.0, 0.0); dim.pow(order as u32)])
    }

    /// Diagonal tensor with `t_{i…i} = values[i]` and zeros elsewhere.
    /// Diagonal tensors are symmetric, so the hint is set.
    pub fn diagonal(order: usize, values: &[Complex64]) -> Result<Self, TensorError> {
        let dim = values.len();
        let mut t = Tensor::zeros(order, dim)?;
        for (i, &v) in values.iter().enumerate() {
            let idx = vec![i; order];
            t.set(&idx, v);
        }
        t.symmetric_hint = true;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn symmetric_hint(&self) -> bool {
        self.symmetric_hint
    }

    pub fn set_symmetric_hint(&mut self, hint: bool) {
        self.symmetric_hint = hint;
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    /// Entry at a multi-index `(i₁, …, i_m)`.
    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.entries[self.flat_index(idx)]
    }

    /// Overwrite the entry at a multi-index.
    pub fn set(&mut self, idx: &[usize], value: Complex64) {
        let k = self.flat_index(idx);
        self.entries[k] = value;
    }

    /// Frobenius norm `(Σ|t|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        vec_norm(&self.entries)
    }

    /// The contraction `T x^{m−1}`, a vector with components
    /// `v_i = Σ t_{i i₂…i_m} x_{i₂}⋯x_{i_m}`. Costs `O(dim^order)`.
    pub fn contract(&self, x: &[Complex64]) -> Result<Vec<Complex64>, TensorError> {
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        // Build the Kronecker power x^{⊗(m−1)}; its lexicographic layout
        // matches the trailing m−1 indices of the entry array.
        let mut kron = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..self.order - 1 {
            let mut next = Vec::with_capacity(kron.len() * self.dim);
            for &a in &kron {
                for &xi in x {
                    next.push(a * xi);
                }
            }
            kron = next;
        }
        let block = kron.len();
        Ok((0..self.dim)
            .map(|i| dot_t(&self.entries[i * block..(i + 1) * block], &kron))
            .collect())
    }

    /// The degree-`m` form `x ↦ xᵀ(T x^{m−1})`.
    pub fn apply_form(&self, x: &[Complex64]) -> Result<Complex64, TensorError> {
        Ok(dot_t(x, &self.contract(x)?))
    }

    /// Average the entries over all permutations of the index tuple. The
    /// result is symmetric and idempotent under repetition.
    pub fn symmetrize(&self) -> Tensor {
        let m = self.order;
        let positions: Vec<usize> = (0..m).collect();
        let perms: Vec<Vec<usize>> = positions.iter().copied().permutations(m).collect();
        let factorial = perms.len() as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        let mut idx = vec![0usize; m];
        for (flat, slot) in out.iter_mut().enumerate() {
            // decode flat -> multi-index
            let mut rem = flat;
            for k in (0..m).rev() {
                idx[k] = rem % self.dim;
                rem /= self.dim;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            let mut permuted = vec![0usize; m];
            for perm in &perms {
                for (k, &p) in perm.iter().enumerate() {
                    permuted[k] = idx[p];
                }
                acc += self.entries[self.flat_index_of(&permuted)];
            }
            *slot = acc / factorial;
        }
        Tensor {
            order: m,
            dim: self.dim,
            entries: out,
            symmetric_hint: true,
        }
    }

    fn flat_index_of(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Maximum relative deviation from full index-permutation symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let sym = self.symmetrize();
        let scale = self.norm().max(1e-300);
        self.entries
            .iter()
            .zip(&sym.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// Apply the matrix `G` on each listed mode (1-based, mode 1 is the
    /// first index). An empty mode list returns the tensor unchanged.
    ///
    /// With `modes = {2,…,m}` and `m = 3` this is the congruence action
    /// `(G·T)_{ijk} = Σ_{p,q} t_{ipq} g_{jp} g_{kq}`; with all modes it is
    /// the full multilinear (orthogonal-group) action.
    pub fn mode_transform(&self, g: &CMatrix, modes: &[usize]) -> Result<Tensor, TensorError> {
        if g.rows() != self.dim || g.cols() != self.dim {
            return Err(TensorError::MatrixShape {
                expected: self.dim,
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        for &mode in modes {
            if mode == 0 || mode > self.order {
                return Err(TensorError::ModeOutOfRange(mode, self.order));
            }
        }
        let d = self.dim;
        let m = self.order;
        let mut cur = self.entries.clone();
        for &mode in modes {
            let axis = mode - 1; // position within the index tuple
            let outer: usize = d.pow(axis as u32);
            let inner: usize = d.pow((m - 1 - axis) as u32);
            let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
            for o in 0..outer {
                for j in 0..d {
                    for i in 0..d {
                        let gji = g[(j, i)];
                        if gji == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let src = (o * d + i) * inner;
                        let dst = (o * d + j) * inner;
                        for k in 0..inner {
                            next[dst + k] += gji * cur[src + k];
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(Tensor {
            order: m,
            dim: d,
            entries: cur,
            symmetric_hint: false,
        })
    }

    /// Slice an order-3 tensor into the matrices `A⁽ⁱ⁾` with
    /// `A⁽ⁱ⁾[j][k] = t_{ijk}`, so that `(T x²)_i = xᵀ A⁽ⁱ⁾ x`.
    pub fn slice_matrices(&self) -> Result<SliceMatrices, TensorError> {
        if self.order != 3 {
            return Err(TensorError::NotOrderThree(self.order));
        }
        let d = self.dim;
        let mats = (0..d)
            .map(|i| CMatrix::from_fn(d, d, |j, k| self.entries[(i * d + j) * d + k]))
            .collect();
        Ok(SliceMatrices { mats })
    }

    /// Entrywise sum (same shape required).
    pub fn add(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.entries.len(),
                got: other.entries.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Tensor {
            order: self.order,
            dim: self.dim,
            entries,
            symmetric_hint: self.symmetric_hint && other.symmetric_hint,
        })
    }

    /// Entrywise scaling by a complex number.
    pub fn scale(&self, alpha: Complex64) -> Tensor {
        Tensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * alpha).collect(),
            symmetric_hint: self.symmetric_hint,
        }
    }

    /// Parse the JSON wire format
    /// `{"order": m, "dim": d, "symmetric": bool, "entries": [[re,im],…]}`.
    pub fn from_json(s: &str) -> Result<Tensor, TensorError> {
        let raw: TensorJson = serde_json::from_str(s)?;
        let entries = raw
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let mut t = Tensor::new(raw.order, raw.dim, entries)?;
        t.symmetric_hint = raw.symmetric;
        Ok(t)
    }

    /// Serialize to the JSON wire format.
    pub fn to_json(&self) -> String {
        let raw = TensorJson {
            order: self.order,
            dim: self.dim,
            symmetric: self.symmetric_hint,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&raw).expect("tensor serialization cannot fail")
    }
}

/// Draw a tensor with independent standard complex Gaussian entries from a
/// deterministic stream. With `symmetric` set, the draw is symmetrized.
pub fn random_tensor(order: usize, dim: usize, seed: u64, symmetric: bool) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..dim.pow(order as u32))
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    let t = Tensor::new(order, dim, entries).expect("generator shapes are valid");
    if symmetric {
        t.symmetrize()
    } else {
        t
    }
}

/// Construct a singular tensor together with a kernel witness `x*` such
/// that `T x*^{m−1} = 0` up to rounding.
///
/// A random tensor `T₀` is corrected by the rank-one tensor
/// `v ⊗ w^{⊗(m−1)} / (wᵀx*)^{m−1}` where `v = T₀ x*^{m−1}`, which cancels
/// the contraction at `x*` exactly.
pub fn singular_tensor(order: usize, dim: usize, seed: u64) -> (Tensor, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Complex64> = (0..dim.pow(order as u32))
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    let t0 = Tensor::new(order, dim, entries).expect("generator shapes are valid");
    let xstar: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    let w = loop {
        let w: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
        // reject w nearly orthogonal to x* (the correction would blow up)
        if dot_t(&w, &xstar).norm() >= 1e-8 * vec_norm(&w) * vec_norm(&xstar) {
            break w;
        }
    };
    let v = t0.contract(&xstar).expect("matching dimension");
    let denom = dot_t(&w, &xstar).powu(order as u32 - 1);

    // w^{⊗(m−1)} in the same lexicographic layout as contract uses
    let mut kron = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..order - 1 {
        let mut next = Vec::with_capacity(kron.len() * dim);
        for &a in &kron {
            for &wi in &w {
                next.push(a * wi);
            }
        }
        kron = next;
    }

    let block = kron.len();
    let mut entries = t0.entries;
    for i in 0..dim {
        let vi = v[i] / denom;
        for (k, &wk) in kron.iter().enumerate() {
            entries[i * block + k] -= vi * wk;
        }
    }
    let t = Tensor::new(order, dim, entries).expect("generator shapes are valid");
    (t, xstar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, relative_distance};

    fn diag12() -> Tensor {
        Tensor::diagonal(3, &[c64(1.0, 0.0), c64(2.0, 0.0)]).unwrap()
    }

    #[test]
    fn contract_single_monomial() {
        let mut t = Tensor::zeros(3, 2).unwrap();
        t.set(&[0, 0, 0], c64(1.0, 0.0));
        let v = t.contract(&[c64(1.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!(relative_distance(&v, &[c64(1.0, 0.0), c64(0.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn contract_diagonal() {
        let v = diag12().contract(&[c64(1.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!(relative_distance(&v, &[c64(1.0, 0.0), c64(2.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn contract_zero_vector() {
        let t = random_tensor(3, 3, 5, false);
        let v = t.contract(&[c64(0.0, 0.0); 3]).unwrap();
        assert!(vec_norm(&v) == 0.0);
    }

    #[test]
    fn contract_rejects_wrong_length() {
        let t = diag12();
        assert!(matches!(
            t.contract(&[c64(1.0, 0.0)]),
            Err(TensorError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_form_values() {
        let t = diag12();
        let s = t.apply_form(&[c64(1.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!((s - c64(3.0, 0.0)).norm() < 1e-15);

        let mut mono = Tensor::zeros(3, 2).unwrap();
        mono.set(&[0, 0, 0], c64(1.0, 0.0));
        let s = mono.apply_form(&[c64(2.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!((s - c64(8.0, 0.0)).norm() < 1e-15);

        let z = t.apply_form(&[c64(0.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(z.norm() == 0.0);
    }

    #[test]
    fn symmetrize_spreads_single_entry() {
        let mut t = Tensor::zeros(3, 2).unwrap();
        t.set(&[0, 0, 1], c64(3.0, 0.0));
        let s = t.symmetrize();
        assert!((s.get(&[0, 0, 1]) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((s.get(&[0, 1, 0]) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((s.get(&[1, 0, 0]) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!(s.get(&[1, 1, 1]).norm() < 1e-15);
        assert!(s.symmetric_hint());
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let t = random_tensor(3, 2, 11, false);
        let s1 = t.symmetrize();
        let s2 = s1.symmetrize();
        assert!(relative_distance(s1.entries(), s2.entries()) < 1e-14);
        let z = Tensor::zeros(3, 2).unwrap().symmetrize();
        assert!(z.norm() == 0.0);
    }

    #[test]
    fn mode_transform_identity_and_scaling() {
        let t = diag12();
        let id = CMatrix::identity(2);
        let same = t.mode_transform(&id, &[1, 2, 3]).unwrap();
        assert!(relative_distance(t.entries(), same.entries()) < 1e-15);
        let untouched = t.mode_transform(&id, &[]).unwrap();
        assert!(relative_distance(t.entries(), untouched.entries()) < 1e-15);

        let mut g = CMatrix::zeros(2, 2);
        g[(0, 0)] = c64(2.0, 0.0);
        g[(1, 1)] = c64(1.0, 0.0);
        let scaled = t.mode_transform(&g, &[1, 2, 3]).unwrap();
        assert!((scaled.get(&[0, 0, 0]) - c64(8.0, 0.0)).norm() < 1e-14);
        assert!((scaled.get(&[1, 1, 1]) - c64(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mode_transform_permutation_relabels() {
        let t = diag12();
        let mut g = CMatrix::zeros(2, 2);
        g[(0, 1)] = c64(1.0, 0.0);
        g[(1, 0)] = c64(1.0, 0.0);
        let p = t.mode_transform(&g, &[1, 2, 3]).unwrap();
        assert!((p.get(&[0, 0, 0]) - c64(2.0, 0.0)).norm() < 1e-14);
        assert!((p.get(&[1, 1, 1]) - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mode_transform_composes() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_tensor(3, 2, 21, false);
        let g = CMatrix::from_fn(2, 2, |_, _| complex_gaussian(&mut rng));
        let h = CMatrix::from_fn(2, 2, |_, _| complex_gaussian(&mut rng));
        let all = [1usize, 2, 3];
        let two_step = t
            .mode_transform(&g, &all)
            .unwrap()
            .mode_transform(&h, &all)
            .unwrap();
        let hg = h.mul_mat(&g);
        let one_step = t.mode_transform(&hg, &all).unwrap();
        assert!(relative_distance(two_step.entries(), one_step.entries()) < 1e-10);
    }

    #[test]
    fn slice_matrices_read_off() {
        let t = diag12();
        let s = t.slice_matrices().unwrap();
        assert!((s.mats[0][(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!(s.mats[0][(1, 1)].norm() < 1e-15);
        assert!((s.mats[1][(1, 1)] - c64(2.0, 0.0)).norm() < 1e-15);

        let mut u = Tensor::zeros(3, 2).unwrap();
        u.set(&[0, 1, 0], c64(1.0, 0.0));
        let s = u.slice_matrices().unwrap();
        assert!((s.mats[0][(1, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!(s.mats[1][(0, 0)].norm() < 1e-15);

        assert!(matches!(
            random_tensor(4, 2, 0, false).slice_matrices(),
            Err(TensorError::NotOrderThree(4))
        ));
    }

    #[test]
    fn slice_consistency_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let t = random_tensor(3, 3, 9, false);
        let slices = t.slice_matrices().unwrap();
        for _ in 0..100 {
            let x: Vec<Complex64> = (0..3).map(|_| complex_gaussian(&mut rng)).collect();
            let v = t.contract(&x).unwrap();
            for (i, a) in slices.mats.iter().enumerate() {
                let quad = dot_t(&x, &a.mul_vec(&x));
                assert!(
                    (v[i] - quad).norm() <= 1e-12 * v[i].norm().max(1.0),
                    "slice {i} disagrees"
                );
            }
        }
    }

    #[test]
    fn random_tensor_is_deterministic() {
        let a = random_tensor(3, 2, 7, false);
        let b = random_tensor(3, 2, 7, false);
        assert_eq!(a.entries(), b.entries());
        let c = random_tensor(3, 2, 8, false);
        assert!(a.entries() != c.entries());
        let s = random_tensor(3, 2, 7, true);
        assert!(s.symmetric_hint());
        assert!(s.symmetry_defect() < 1e-12);
    }

    #[test]
    fn singular_tensor_has_kernel_witness() {
        for seed in [1u64, 2, 3] {
            let (t, x) = singular_tensor(3, 2, seed);
            let v = t.contract(&x).unwrap();
            let bound = 1e-12 * t.norm() * vec_norm(&x).powi(2);
            assert!(vec_norm(&v) <= bound, "residual {} > {}", vec_norm(&v), bound);
        }
        let (t, x) = singular_tensor(4, 3, 5);
        let v = t.contract(&x).unwrap();
        assert!(vec_norm(&v) <= 1e-12 * t.norm() * vec_norm(&x).powi(3));
    }

    #[test]
    fn contraction_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let t = random_tensor(4, 2, 31, false);
        let x: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let alpha = c64(0.7, -1.3);
        let ax: Vec<Complex64> = x.iter().map(|z| z * alpha).collect();
        let lhs = t.contract(&ax).unwrap();
        let rhs: Vec<Complex64> = t
            .contract(&x)
            .unwrap()
            .iter()
            .map(|z| z * alpha.powu(3))
            .collect();
        assert!(relative_distance(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn contraction_linearity_in_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let t = random_tensor(3, 2, 41, false);
        let s = random_tensor(3, 2, 43, false);
        let x: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let sum = t.add(&s).unwrap();
        let lhs = sum.contract(&x).unwrap();
        let tv = t.contract(&x).unwrap();
        let sv = s.contract(&x).unwrap();
        let rhs: Vec<Complex64> = tv.iter().zip(&sv).map(|(a, b)| a + b).collect();
        assert!(relative_distance(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn gradient_of_form_matches_contraction() {
        // for symmetric T the gradient of x ↦ (1/m)·xᵀTx^{m−1} is Tx^{m−1};
        // checked against central differences along each coordinate
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let t = random_tensor(3, 2, 53, true);
        let x: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let grad = t.contract(&x).unwrap();
        let m = t.order() as f64;
        let h = 1e-5;
        for j in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += c64(h, 0.0);
            xm[j] -= c64(h, 0.0);
            let fd = (t.apply_form(&xp).unwrap() - t.apply_form(&xm).unwrap()) / (m * 2.0 * h);
            assert!(
                (fd - grad[j]).norm() <= 1e-5 * grad[j].norm().max(1.0),
                "coordinate {j}: fd={fd}, grad={}",
                grad[j]
            );
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let t = random_tensor(3, 2, 99, true);
        let s = t.to_json();
        let back = Tensor::from_json(&s).unwrap();
        assert_eq!(t.entries(), back.entries());
        assert!(back.symmetric_hint());

        let bad = r#"{"order":3,"dim":2,"symmetric":false,"entries":[[1.0,0.0]]}"#;
        assert!(matches!(
            Tensor::from_json(bad),
            Err(TensorError::EntryCount { .. })
        ));
    }

    #[test]
    fn new_validates_shape_and_finiteness() {
        assert!(matches!(
            Tensor::new(2, 2, vec![c64(0.0, 0.0); 4]),
            Err(TensorError::OrderTooSmall(2))
        ));
        assert!(matches!(
            Tensor::new(3, 1, vec![c64(0.0, 0.0); 1]),
            Err(TensorError::DimTooSmall(1))
        ));
        let mut entries = vec![c64(0.0, 0.0); 8];
        entries[3] = c64(f64::NAN, 0.0);
        assert!(matches!(
            Tensor::new(3, 2, entries),
            Err(TensorError::NonFinite(3))
        ));
    }
}
