//! Dense complex linear algebra: vectors, LU factorization, and the small
//! set of helpers the rest of the crate leans on.
//!
//! Everything here works over `Complex64`. Determinants are tracked in
//! log-magnitude/phase form so that the huge values produced by Macaulay
//! matrices (hundreds of rows for modest tensors) never overflow.

use num_complex::Complex64;
use rand::Rng;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Euclidean norm of a complex vector (conjugating inner product).
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear (transpose, *not* conjugate-transpose) dot product `a^T b`.
///
/// This is the pairing used throughout: a nonzero vector can satisfy
/// `dot_t(x, x) == 0`, in which case it is called isotropic.
pub fn dot_t(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relative distance between two vectors, `‖a − b‖ / max(‖a‖, ‖b‖)`.
///
/// Returns 0 when both vectors vanish.
pub fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = vec_norm(a).max(vec_norm(b));
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Scale a projective representative so its largest-modulus coordinate is
/// exactly `1`, breaking magnitude ties by lowest index.
///
/// Returns `None` for the zero vector, which has no projective class.
pub fn canonical_rep(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        // Strict comparison keeps the lowest index on ties.
        if m > best_mag * (1.0 + 1e-14) {
            best = i;
            best_mag = m;
        }
    }
    if best_mag == 0.0 {
        return None;
    }
    let pivot = v[best];
    let mut out: Vec<Complex64> = v.iter().map(|z| z / pivot).collect();
    out[best] = Complex64::new(1.0, 0.0); // kill rounding residue on the pivot
    Some(out)
}

/// Sample a complex number whose real and imaginary parts are independent
/// standard normals, via the Box–Muller transform.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300); // keep ln() finite
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                dot_t(row, v)
            })
            .collect()
    }

    /// Matrix–matrix product.
    pub fn mul_mat(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)] + a * other[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Transpose (no conjugation).
    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// LU factorization with partial pivoting. Works for any square matrix,
    /// including the empty 0×0 one (whose determinant is 1 by convention).
    pub fn lu(&self) -> LuFactors {
        assert_eq!(self.rows, self.cols, "LU of a non-square matrix");
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0f64;
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot = 0.0f64;
        let mut singular = false;

        for k in 0..n {
            // choose the largest pivot in column k at or below the diagonal
            let mut p = k;
            let mut p_mag = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let m = lu[i * n + k].norm();
                if m > p_mag {
                    p = i;
                    p_mag = m;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                parity = -parity;
            }
            min_pivot = min_pivot.min(p_mag);
            max_pivot = max_pivot.max(p_mag);
            if p_mag < 1e-300 {
                singular = true;
                continue; // leave the rest of the column untouched
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    let delta = factor * lu[k * n + j];
                    lu[i * n + j] -= delta;
                }
            }
        }
        if n == 0 {
            min_pivot = 1.0;
            max_pivot = 1.0;
        }

        LuFactors {
            n,
            lu,
            perm,
            parity,
            min_pivot,
            max_pivot,
            singular,
        }
    }

    /// Determinant in log form; see [`LogDet`].
    pub fn log_det(&self) -> LogDet {
        self.lu().log_det()
    }

    /// Plain determinant. Overflows to ±∞ for very large magnitudes; prefer
    /// [`CMatrix::log_det`] when sizes are not tiny.
    pub fn det(&self) -> Complex64 {
        self.log_det().value()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// The result of an LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    parity: f64,
    min_pivot: f64,
    max_pivot: f64,
    singular: bool,
}

impl LuFactors {
    /// Whether a pivot underflowed to (numerical) zero.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Ratio `min |pivot| / max |pivot|`; a crude conditioning indicator.
    /// Returns 0 for singular matrices and 1 for the empty matrix.
    pub fn pivot_ratio(&self) -> f64 {
        if self.singular || self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    /// Determinant in log-magnitude/phase form.
    pub fn log_det(&self) -> LogDet {
        if self.singular {
            return LogDet::zero();
        }
        let mut log_mag = 0.0f64;
        let mut phase = Complex64::new(self.parity, 0.0);
        for k in 0..self.n {
            let d = self.lu[k * self.n + k];
            log_mag += d.norm().ln();
            phase *= d / d.norm();
        }
        LogDet { log_mag, phase }
    }

    /// Solve `A x = b` using the stored factors. Returns `None` when the
    /// matrix was singular to working precision.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.singular {
            return None;
        }
        assert_eq!(b.len(), self.n, "rhs length mismatch");
        let n = self.n;
        // apply the permutation, then forward substitution with unit L
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let delta = self.lu[i * n + j] * x[j];
                x[i] -= delta;
            }
        }
        // back substitution with U
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let delta = self.lu[i * n + j] * x[j];
                x[i] -= delta;
            }
            x[i] /= self.lu[i * n + i];
        }
        Some(x)
    }
}

/// A complex scalar stored as `phase · exp(log_mag)` with `|phase| = 1`.
///
/// Ratios and powers of these stay finite even when the plain value would
/// overflow `f64`.
#[derive(Debug, Clone, Copy)]
pub struct LogDet {
    /// Natural log of the magnitude (`-∞` encodes zero).
    pub log_mag: f64,
    /// Unit-modulus phase factor (0 when the value is zero).
    pub phase: Complex64,
}

impl LogDet {
    pub fn zero() -> Self {
        LogDet {
            log_mag: f64::NEG_INFINITY,
            phase: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        LogDet {
            log_mag: 0.0,
            phase: Complex64::new(1.0, 0.0),
        }
    }

    pub fn from_value(z: Complex64) -> Self {
        let m = z.norm();
        if m == 0.0 {
            LogDet::zero()
        } else {
            LogDet {
                log_mag: m.ln(),
                phase: z / m,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Materialize the value (may overflow to infinity for huge magnitudes).
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.log_mag.exp()
        }
    }

    /// Product of two log-form scalars.
    pub fn mul(&self, other: &LogDet) -> LogDet {
        if self.is_zero() || other.is_zero() {
            return LogDet::zero();
        }
        LogDet {
            log_mag: self.log_mag + other.log_mag,
            phase: self.phase * other.phase,
        }
    }

    /// Quotient `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &LogDet) -> LogDet {
        assert!(!other.is_zero(), "division of log-scaled value by zero");
        if self.is_zero() {
            return LogDet::zero();
        }
        LogDet {
            log_mag: self.log_mag - other.log_mag,
            phase: self.phase / other.phase,
        }
    }

    /// Integer power.
    pub fn powi(&self, k: u32) -> LogDet {
        if self.is_zero() {
            return if k == 0 { LogDet::one() } else { LogDet::zero() };
        }
        LogDet {
            log_mag: self.log_mag * k as f64,
            phase: self.phase.powu(k),
        }
    }

    /// Scale by a plain complex number.
    pub fn mul_value(&self, z: Complex64) -> LogDet {
        self.mul(&LogDet::from_value(z))
    }
}
