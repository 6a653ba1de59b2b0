//! Bookkeeping of the tautological correspondence between `d`-multisections
//! `u` and sections `s_u` of the symmetric product bundle.
//!
//! A multisection is recorded by its Euler characteristic, branch points,
//! signed double points and relative Chern and Maslov numbers. The identity
//! `ind s_u = I(u)` reduces to Riemann–Hurwitz `chi(F) = d - b`.
//!
//! The floating point oracles check the local input to the Chern shift: the
//! winding of the squared discriminant `Δ² = prod_{i<j} (z_i - z_j)²` is
//! `m - 1` around a branch point of order `m` and `±2` around a double point,
//! and the Jacobian of the elementary symmetric functions is `Δ`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::hf_fredholm;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymprodError {
    #[error("Riemann–Hurwitz fails: chi(F)={chi} but d - b = {expected}")]
    RiemannHurwitz { chi: i64, expected: i64 },
    #[error("branch degrees must be at least 2 (got {0})")]
    BadBranchDegree(u32),
    #[error("at least 256 samples required (got {0})")]
    TooFewSamples(usize),
    #[error("discriminant vanishes on every sampled contour")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedCoverData {
    pub d: i64,
    pub chi_f: i64,
    pub branch_degrees: Vec<u32>,
    /// Signed count of double points.
    pub double_points: i64,
    pub c1_u: i64,
    pub maslov_u: i64,
}

impl BranchedCoverData {
    /// `b = sum (deg - 1)`.
    pub fn b(&self) -> i64 {
        self.branch_degrees.iter().map(|&m| m as i64 - 1).sum()
    }
}

/// `e(F) = d e(D) - b` with `e(F) = chi(F) - d/2` and `e(D) = 1/2`.
pub fn riemann_hurwitz_check(data: &BranchedCoverData) -> bool {
    data.branch_degrees.iter().all(|&m| m >= 2) && data.chi_f == data.d - data.b()
}

/// `2 c_1(s_u) = 2 c_1(u) + b + 2 delta`.
pub fn chern_shift(data: &BranchedCoverData) -> i64 {
    2 * data.c1_u + data.b() + 2 * data.double_points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexComparison {
    /// `ind s_u`.
    pub lhs: i64,
    /// `ind u + 2 delta`.
    pub rhs: i64,
    pub equal: bool,
}

pub fn index_compare(data: &BranchedCoverData) -> Result<IndexComparison, SymprodError> {
    if let Some(&m) = data.branch_degrees.iter().find(|&&m| m < 2) {
        return Err(SymprodError::BadBranchDegree(m));
    }
    if !riemann_hurwitz_check(data) {
        return Err(SymprodError::RiemannHurwitz {
            chi: data.chi_f,
            expected: data.d - data.b(),
        });
    }
    let lhs = chern_shift(data) + data.maslov_u;
    let rhs = hf_fredholm(data.chi_f, data.d, data.c1_u, data.maslov_u) + 2 * data.double_points;
    Ok(IndexComparison {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// Local model of a multisection near a point of the base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalModel<F> {
    /// Sheets `f(x)` over `x^m = w`, with `f(x) = c1 x + c2 x²`.
    Branch { m: u32, c1: Complex<F>, c2: Complex<F> },
    /// Two sheets `f = a w`, `g = b w`, or their conjugates `a w̄`, `b w̄`.
    DoublePoint { a: Complex<F>, b: Complex<F>, positive: bool },
}

impl<F: Float + FloatConst> LocalModel<F> {
    pub fn branch(m: u32) -> Self {
        LocalModel::Branch {
            m,
            c1: Complex::one(),
            c2: Complex::new(F::from(0.3).unwrap(), F::from(-0.2).unwrap()),
        }
    }

    pub fn double_point(positive: bool) -> Self {
        LocalModel::DoublePoint {
            a: Complex::new(F::one(), F::from(0.5).unwrap()),
            b: Complex::new(F::from(-0.7).unwrap(), F::from(0.2).unwrap()),
            positive,
        }
    }

    /// Expected winding of `Δ²`.
    pub fn expected_winding(&self) -> i64 {
        match *self {
            LocalModel::Branch { m, .. } => m as i64 - 1,
            LocalModel::DoublePoint { positive, .. } => {
                if positive {
                    2
                } else {
                    -2
                }
            }
        }
    }

    /// `Δ²` at the base point `w`.
    pub fn discriminant_sq(&self, w: Complex<F>) -> Complex<F> {
        match *self {
            LocalModel::Branch { m, c1, c2 } => {
                let root = w.powf(F::one() / F::from(m).unwrap());
                let sheets: Vec<Complex<F>> = (0..m)
                    .map(|j| {
                        let x = root * Complex::from_polar(F::one(), F::TAU() * F::from(j).unwrap() / F::from(m).unwrap());
                        c1 * x + c2 * x * x
                    })
                    .collect();
                discriminant(&sheets).powi(2)
            }
            LocalModel::DoublePoint { a, b, positive } => {
                let z = if positive { w } else { w.conj() };
                let diff = a * z - b * z;
                diff * diff
            }
        }
    }
}

/// `Δ = prod_{i<j} (z_i - z_j)`.
pub fn discriminant<F: Float>(z: &[Complex<F>]) -> Complex<F> {
    let mut out = Complex::one();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            out = out * (z[i] - z[j]);
        }
    }
    out
}

pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_RADIUS: f64 = 1e-2;

/// Winding number of `Δ²` around `|w| = radius`, by summing principal
/// argument increments. Halves the radius when `Δ²` vanishes on the
/// contour.
pub fn discriminant_winding_oracle<F: Float + FloatConst>(
    local: &LocalModel<F>,
    samples: usize,
    radius: F,
) -> Result<F, SymprodError> {
    if samples < 256 {
        return Err(SymprodError::TooFewSamples(samples));
    }
    let tiny = F::epsilon() * F::from(1e3).unwrap();
    let mut r = radius;
    for _ in 0..8 {
        let values: Vec<Complex<F>> = (0..=samples)
            .map(|s| {
                let t = F::TAU() * F::from(s).unwrap() / F::from(samples).unwrap();
                local.discriminant_sq(Complex::from_polar(r, t))
            })
            .collect();
        let scale = values.iter().map(|v| v.norm()).fold(F::zero(), F::max);
        if scale.is_zero() || values.iter().any(|v| v.norm() <= tiny * scale) {
            r = r / F::from(2).unwrap();
            continue;
        }
        let total = values
            .windows(2)
            .map(|p| (p[1] / p[0]).arg())
            .fold(F::zero(), |a, b| a + b);
        return Ok(total / F::TAU());
    }
    Err(SymprodError::Degenerate)
}

/// `σ_j(z)` for `j = 0..=len`.
pub fn elementary_symmetric<F: Float>(z: &[Complex<F>]) -> Vec<Complex<F>> {
    let mut e = vec![Complex::zero(); z.len() + 1];
    e[0] = Complex::one();
    for (n, &x) in z.iter().enumerate() {
        for j in (1..=n + 1).rev() {
            e[j] = e[j] + e[j - 1] * x;
        }
    }
    e
}

/// Jacobian `∂σ_j / ∂z_i`, rows `j = 1..=d`: the entry is
/// `σ_{j-1}` of the tuple with `z_i` removed.
pub fn symmetric_jacobian<F: Float>(z: &[Complex<F>]) -> Vec<Vec<Complex<F>>> {
    let d = z.len();
    let minors: Vec<Vec<Complex<F>>> = (0..d)
        .map(|i| {
            let rest: Vec<_> = z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            elementary_symmetric(&rest)
        })
        .collect();
    (1..=d).map(|j| (0..d).map(|i| minors[i][j - 1]).collect()).collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<F: Float>(mut a: Vec<Vec<Complex<F>>>) -> Complex<F> {
    let n = a.len();
    let mut det = Complex::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).expect("finite entries"))
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return Complex::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let sub = factor * a[col][c];
                a[row][c] = a[row][c] - sub;
            }
        }
    }
    det
}

/// Relative deviation `|det J - Δ| / |Δ|`.
pub fn jacobian_deviation<F: Float>(z: &[Complex<F>]) -> F {
    let det = determinant(symmetric_jacobian(z));
    let delta = discriminant(z);
    (det - delta).norm() / delta.norm()
}

/// Winding expected for a degree-`m` branch point, `m - 1`.
pub fn expected_branch_winding(m: u32) -> f64 {
    m as f64 - 1.0
}
