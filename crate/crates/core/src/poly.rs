//! Dense monomial-basis polynomials on `[0,1]` and `[0,1]²`.
//!
//! Every continuous-stage coefficient function in this crate is a polynomial:
//! univariate ones (`B`, `B̂`, `B̄`, `C`) live in [`UniPoly`] and the stage
//! kernels (`A`, `Â`, `Ā`) in [`BiPoly`]. For a [`BiPoly`] the first variable is
//! called `tau` and the second `sigma`; "derivative" always means the partial
//! derivative with respect to `tau`.
//!
//! Storage is canonical: trailing coefficients are trimmed only when their
//! magnitude is below `1e-300`, so identity checks see genuine round-off.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::accum::Accumulator;

/// Largest degree (per variable) accepted from external input.
pub const MAX_DEGREE: usize = 64;

/// Largest index accepted by [`shifted_legendre`].
pub const MAX_LEGENDRE_INDEX: usize = 30;

const TRIM: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("Legendre index {0} exceeds the supported maximum {MAX_LEGENDRE_INDEX}")]
    LegendreIndex(usize),
    #[error("degree {degree} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooHigh { degree: usize },
}

/// `p(x) = Σ c_i x^i`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UniPoly {
    coeffs: Vec<f64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last().is_some_and(|c| c.abs() < TRIM) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^degree`
    pub fn monomial(degree: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, 1.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc.mul_add(x, c))
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect();
        UniPoly::new(coeffs)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> UniPoly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(i, &c)| c / (i + 1) as f64));
        UniPoly::new(coeffs)
    }

    /// `∫₀¹ p(x) dx`, computed coefficient-wise.
    pub fn integral01(&self) -> f64 {
        let mut acc = Accumulator::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            acc.add_ratio(c, (i + 1) as f64);
        }
        acc.value()
    }

    /// `∫_lo^hi p(x) dx`, computed coefficient-wise.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let mut acc = Accumulator::new();
        let (mut plo, mut phi) = (lo, hi);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i + 1) as f64;
            acc.add_product_ratio(c, phi, k);
            acc.add_product_ratio(-c, plo, k);
            plo *= lo;
            phi *= hi;
        }
        acc.value()
    }

    /// `∫₀¹ p(x) q(x) dx` without forming the product polynomial.
    pub fn inner01(&self, other: &UniPoly) -> f64 {
        let mut acc = Accumulator::new();
        for (m, &a) in self.coeffs.iter().enumerate() {
            for (n, &b) in other.coeffs.iter().enumerate() {
                acc.add_product_ratio(a, b, (m + n + 1) as f64);
            }
        }
        acc.value()
    }

    pub fn scale(&self, k: f64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn zip_with(&self, other: &UniPoly, f: impl Fn(f64, f64) -> f64) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| f(self.coeff(i), other.coeff(i))).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·x")?,
                _ => write!(f, "{c}·x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: f64) -> UniPoly {
        self.scale(rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// `f(τ,σ) = Σ c_ij τ^i σ^j`, stored row-major with rows indexed by the power
/// of `τ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl BiPoly {
    fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        let mut rows_kept = rows;
        while rows_kept > 0 && data[(rows_kept - 1) * cols..rows_kept * cols].iter().all(|c| c.abs() < TRIM) {
            rows_kept -= 1;
        }
        let mut cols_kept = cols;
        while cols_kept > 0 && (0..rows_kept).all(|i| data[i * cols + cols_kept - 1].abs() < TRIM) {
            cols_kept -= 1;
        }
        if rows_kept == 0 || cols_kept == 0 {
            return BiPoly::zero();
        }
        if cols_kept == cols {
            let mut data = data;
            data.truncate(rows_kept * cols);
            return BiPoly { rows: rows_kept, cols, data };
        }
        let mut trimmed = Vec::with_capacity(rows_kept * cols_kept);
        for i in 0..rows_kept {
            trimmed.extend_from_slice(&data[i * cols..i * cols + cols_kept]);
        }
        BiPoly { rows: rows_kept, cols: cols_kept, data: trimmed }
    }

    /// Builds from (possibly ragged) rows: `rows[i][j]` multiplies `τ^i σ^j`.
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut data = vec![0.0; nrows * ncols];
        for (i, row) in rows.iter().enumerate() {
            data[i * ncols..i * ncols + row.len()].copy_from_slice(row);
        }
        Self::from_raw(nrows, ncols, data)
    }

    /// Sum of `c · τ^i σ^j` terms; repeated `(i, j)` pairs accumulate.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let rows = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let cols = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut data = vec![0.0; rows * cols];
        for &(i, j, c) in terms {
            data[i * cols + j] += c;
        }
        Self::from_raw(rows, cols, data)
    }

    /// `f(τ,σ) = Σ_i τ^i p_i(σ)`.
    pub fn from_tau_rows(rows: &[UniPoly]) -> Self {
        Self::new(rows.iter().map(|p| p.coeffs().to_vec()).collect())
    }

    pub fn zero() -> Self {
        BiPoly { rows: 0, cols: 0, data: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_raw(1, 1, vec![c])
    }

    /// `f(τ,σ) = p(τ) q(σ)`.
    pub fn outer(p: &UniPoly, q: &UniPoly) -> Self {
        let (rows, cols) = (p.coeffs().len(), q.coeffs().len());
        let mut data = Vec::with_capacity(rows * cols);
        for &a in p.coeffs() {
            data.extend(q.coeffs().iter().map(|&b| a * b));
        }
        Self::from_raw(rows, cols, data)
    }

    /// `f(τ,σ) = p(τ)`.
    pub fn from_tau(p: &UniPoly) -> Self {
        Self::outer(p, &UniPoly::constant(1.0))
    }

    /// `f(τ,σ) = p(σ)`.
    pub fn from_sigma(p: &UniPoly) -> Self {
        Self::outer(&UniPoly::constant(1.0), p)
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    /// Degree in `τ` (0 for the zero polynomial).
    pub fn deg_tau(&self) -> usize {
        self.rows.saturating_sub(1)
    }

    /// Degree in `σ` (0 for the zero polynomial).
    pub fn deg_sigma(&self) -> usize {
        self.cols.saturating_sub(1)
    }

    /// Coefficient of `τ^i σ^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i < self.rows && j < self.cols {
            self.data[i * self.cols + j]
        } else {
            0.0
        }
    }

    /// Coefficient rows, `rows()[i][j]` multiplying `τ^i σ^j`.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// The `σ`-polynomial multiplying `τ^i`.
    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn eval(&self, tau: f64, sigma: f64) -> f64 {
        (0..self.rows).rev().fold(0.0, |acc, i| {
            let ri = self.row(i).iter().rev().fold(0.0_f64, |a, &c| a.mul_add(sigma, c));
            acc.mul_add(tau, ri)
        })
    }

    /// `σ ↦ f(tau, σ)`.
    pub fn at_tau(&self, tau: f64) -> UniPoly {
        let mut out = vec![0.0_f64; self.cols];
        for i in (0..self.rows).rev() {
            for (o, &c) in out.iter_mut().zip(self.row(i)) {
                *o = (*o).mul_add(tau, c);
            }
        }
        UniPoly::new(out)
    }

    /// `τ ↦ f(τ, sigma)`.
    pub fn at_sigma(&self, sigma: f64) -> UniPoly {
        self.transpose().at_tau(sigma)
    }

    /// `(τ,σ) ↦ f(σ,τ)`.
    pub fn transpose(&self) -> BiPoly {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        BiPoly::from_raw(self.cols, self.rows, data)
    }

    /// `∂f/∂τ`.
    pub fn dtau(&self) -> BiPoly {
        if self.rows <= 1 {
            return BiPoly::zero();
        }
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for i in 1..self.rows {
            data.extend(self.row(i).iter().map(|&c| c * i as f64));
        }
        BiPoly::from_raw(self.rows - 1, self.cols, data)
    }

    /// `(τ,σ) ↦ ∫₀^τ f(x,σ) dx`.
    pub fn antider_tau(&self) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut data = vec![0.0; self.cols];
        for i in 0..self.rows {
            data.extend(self.row(i).iter().map(|&c| c / (i + 1) as f64));
        }
        BiPoly::from_raw(self.rows + 1, self.cols, data)
    }

    /// `τ ↦ ∫₀¹ f(τ,σ) dσ`.
    pub fn int_sigma(&self) -> UniPoly {
        let coeffs = (0..self.rows)
            .map(|i| {
                let mut acc = Accumulator::new();
                for (j, &c) in self.row(i).iter().enumerate() {
                    acc.add_ratio(c, (j + 1) as f64);
                }
                acc.value()
            })
            .collect();
        UniPoly::new(coeffs)
    }

    /// `(τ,σ) ↦ ∫₀¹ self(τ,ρ) other(ρ,σ) dρ`, exact in the coefficients.
    pub fn compose(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let (rows, cols) = (self.rows, other.cols);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = Accumulator::new();
                for (m, &f) in self.row(i).iter().enumerate() {
                    for mp in 0..other.rows {
                        acc.add_product_ratio(f, other.coeff(mp, j), (m + mp + 1) as f64);
                    }
                }
                data.push(acc.value());
            }
        }
        BiPoly::from_raw(rows, cols, data)
    }

    pub fn scale(&self, k: f64) -> BiPoly {
        BiPoly::from_raw(self.rows, self.cols, self.data.iter().map(|c| c * k).collect())
    }

    fn zip_with(&self, other: &BiPoly, f: impl Fn(f64, f64) -> f64) -> BiPoly {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(self.coeff(i, j), other.coeff(i, j)));
            }
        }
        BiPoly::from_raw(rows, cols, data)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.coeff(i, j);
                if c == 0.0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{c}")?;
                match i {
                    0 => {}
                    1 => write!(f, "·τ")?,
                    _ => write!(f, "·τ^{i}")?,
                }
                match j {
                    0 => {}
                    1 => write!(f, "·σ")?,
                    _ => write!(f, "·σ^{j}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: f64) -> BiPoly {
        self.scale(rhs)
    }
}

/// `max` that lets NaN through instead of discarding it.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Max absolute difference of aligned monomial coefficients (NaN if any
/// coefficient is NaN).
pub trait CoeffResidual {
    fn residual(&self, other: &Self) -> f64;
}

impl CoeffResidual for UniPoly {
    fn residual(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|i| (self.coeff(i) - other.coeff(i)).abs()).fold(0.0, nan_max)
    }
}

impl CoeffResidual for BiPoly {
    fn residual(&self, other: &Self) -> f64 {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut worst = 0.0_f64;
        for i in 0..rows {
            for j in 0..cols {
                worst = nan_max(worst, (self.coeff(i, j) - other.coeff(i, j)).abs());
            }
        }
        worst
    }
}

pub fn poly_residual<P: CoeffResidual>(f: &P, g: &P) -> f64 {
    f.residual(g)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Normalized shifted Legendre polynomial `L_j` on `[0,1]`.
///
/// Expanding the Rodrigues form gives
/// `L_j(x) = √(2j+1) Σ_k (-1)^(j-k) C(j,k) C(j+k,k) x^k`; the integer part is
/// computed exactly before the single irrational scale.
pub fn shifted_legendre(j: usize) -> Result<UniPoly, PolyError> {
    if j > MAX_LEGENDRE_INDEX {
        return Err(PolyError::LegendreIndex(j));
    }
    let scale = ((2 * j + 1) as f64).sqrt();
    let jj = j as u128;
    let coeffs = (0..=jj)
        .map(|k| {
            let magnitude = (binomial(jj, k) * binomial(jj + k, k)) as f64;
            let sign = if (jj - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * magnitude * scale
        })
        .collect();
    Ok(UniPoly::new(coeffs))
}
