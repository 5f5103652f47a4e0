//! Interpolatory quadrature on `[0,1]`.
//!
//! Weights always come from integrating the Lagrange cardinal polynomials of
//! the node set, so Gauss-Legendre rules and user-supplied node sets share one
//! code path. Gauss nodes are the roots of the shifted Legendre polynomial,
//! located by Newton's method inside Szegő's bracketing intervals.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub const MAX_GAUSS_POINTS: usize = 30;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("Gauss rule needs 1..={MAX_GAUSS_POINTS} points, got {0}")]
    PointCount(usize),
    #[error("node set is empty")]
    Empty,
    #[error("node {0} lies outside [0, 1]")]
    NodeOutOfRange(f64),
    #[error("duplicate node {0}")]
    DuplicateNode(f64),
    #[error("Newton iteration for root {index} of L_{k} did not converge (|L_k| = {residual:e})")]
    RootNotConverged { k: usize, index: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Gauss,
    Interpolatory,
}

/// A k-point rule `∫₀¹ φ ≈ Σ b_i φ(c_i)` with strictly increasing nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadRule {
    /// k-point Gauss-Legendre rule on `[0,1]`.
    pub fn gauss(k: usize) -> Result<Self, QuadratureError> {
        let nodes = gauss_nodes(k)?;
        let weights = interpolatory_weights(&nodes)?;
        Ok(QuadRule { nodes, weights, kind: RuleKind::Gauss })
    }

    /// Interpolatory rule on an arbitrary node set (sorted on construction).
    pub fn from_nodes(nodes: &[f64]) -> Result<Self, QuadratureError> {
        let mut nodes = nodes.to_vec();
        nodes.sort_by(f64::total_cmp);
        let weights = interpolatory_weights(&nodes)?;
        Ok(QuadRule { nodes, weights, kind: RuleKind::Interpolatory })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&c, &b)| b * f(c)).sum()
    }
}

pub fn gauss_rule(k: usize) -> Result<QuadRule, QuadratureError> {
    QuadRule::gauss(k)
}

/// `b_i = ∫₀¹ ℓ_i(x) dx` for the Lagrange cardinal polynomials of `nodes`.
///
/// The interpolatory weights are the unique solution of the exactness
/// conditions on polynomials of degree `< k`. Posing those conditions on the
/// orthonormal shifted Legendre basis, `Σ_i b_i L_m(c_i) = δ_m0`, gives a
/// well-conditioned system; expanding each `ℓ_i` in monomials and integrating
/// coefficient-wise suffers cancellation past a dozen nodes.
pub fn interpolatory_weights(nodes: &[f64]) -> Result<Vec<f64>, QuadratureError> {
    if nodes.is_empty() {
        return Err(QuadratureError::Empty);
    }
    for &c in nodes {
        if !(0.0..=1.0).contains(&c) {
            return Err(QuadratureError::NodeOutOfRange(c));
        }
    }
    for (i, &ci) in nodes.iter().enumerate() {
        if nodes[..i].contains(&ci) {
            return Err(QuadratureError::DuplicateNode(ci));
        }
    }
    let k = nodes.len();
    let mut system = DMatrix::<f64>::zeros(k, k);
    for (i, &c) in nodes.iter().enumerate() {
        for (m, value) in legendre_values(k - 1, c).into_iter().enumerate() {
            system[(m, i)] = value;
        }
    }
    let mut rhs = DVector::<f64>::zeros(k);
    rhs[0] = 1.0;
    let weights = system.lu().solve(&rhs).expect("distinct nodes give a nonsingular exactness system");
    Ok(weights.iter().copied().collect())
}

/// `[L_0(x), …, L_n(x)]` by the three-term recurrence.
fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let t = 2.0 * x - 1.0;
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(t);
    }
    for m in 1..n {
        let mf = m as f64;
        p.push(((2.0 * mf + 1.0) * t * p[m] - mf * p[m - 1]) / (mf + 1.0));
    }
    p.iter().enumerate().map(|(m, v)| v * ((2 * m + 1) as f64).sqrt()).collect()
}

/// Smallest Gauss point count that integrates the csRKN stage integrals
/// exactly for a degree-`nu` polynomial potential, given `Ā` of degree
/// `alpha_deg` in `τ` and `beta_deg` in `σ`, and `B` of degree `gamma_deg`.
pub fn min_gauss_points(alpha_deg: usize, beta_deg: usize, gamma_deg: usize, nu: usize) -> usize {
    let base = nu.saturating_sub(1) * alpha_deg;
    let bound = (base + beta_deg + 1).max(base + gamma_deg + 1);
    bound.div_ceil(2)
}

/// `(L_k(x), L_k'(x))` through the three-term recurrence for `P_k(2x-1)`.
fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let t = 2.0 * x - 1.0;
    let (mut p_prev, mut p) = (1.0, t);
    if k == 0 {
        return (1.0, 0.0);
    }
    for n in 1..k {
        let nf = n as f64;
        let p_next = ((2.0 * nf + 1.0) * t * p - nf * p_prev) / (nf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = k as f64 * (t * p - p_prev) / (t * t - 1.0);
    let scale = ((2 * k + 1) as f64).sqrt();
    (scale * p, 2.0 * scale * dp)
}

fn gauss_nodes(k: usize) -> Result<Vec<f64>, QuadratureError> {
    if k == 0 || k > MAX_GAUSS_POINTS {
        return Err(QuadratureError::PointCount(k));
    }
    let kf = k as f64 + 0.5;
    let mut lower = Vec::with_capacity(k / 2);
    // θ_i ∈ ((i - ½)π/(k + ½), iπ/(k + ½)) for the i-th root of P_k(cos θ);
    // roots with x < ½ are those with i > k/2.
    for i in (k / 2 + 1 + k % 2..=k).rev() {
        let lo = 0.5 * (1.0 + (i as f64 * PI / kf).cos());
        let hi = 0.5 * (1.0 + ((i as f64 - 0.5) * PI / kf).cos());
        let guess = 0.5 * (1.0 + ((i as f64 - 0.25) * PI / kf).cos());
        lower.push(newton_root(k, k - i, lo, hi, guess)?);
    }
    let mut nodes = lower.clone();
    if k % 2 == 1 {
        nodes.push(0.5);
    }
    nodes.extend(lower.iter().rev().map(|c| 1.0 - c));
    Ok(nodes)
}

fn newton_root(k: usize, index: usize, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64, QuadratureError> {
    let f_lo = legendre_with_derivative(k, lo).0;
    let mut x = guess.clamp(lo, hi);
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let (f, df) = legendre_with_derivative(k, x);
        residual = f.abs();
        if f == 0.0 {
            return Ok(x);
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step < 1e-15 {
            return Ok(x);
        }
    }
    Err(QuadratureError::RootNotConverged { k, index, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::shifted_legendre;

    #[test]
    fn gauss_small_rules() {
        let r1 = gauss_rule(1).unwrap();
        assert_eq!(r1.nodes(), &[0.5]);
        assert!((r1.weights()[0] - 1.0).abs() < 1e-15);

        let r2 = gauss_rule(2).unwrap();
        let d = 1.0 / (2.0 * 3f64.sqrt());
        assert!((r2.nodes()[0] - (0.5 - d)).abs() < 1e-15);
        assert!((r2.nodes()[1] - (0.5 + d)).abs() < 1e-15);
        for w in r2.weights() {
            assert!((w - 0.5).abs() < 1e-15);
        }

        let r3 = gauss_rule(3).unwrap();
        let d = 15f64.sqrt() / 10.0;
        let expected_nodes = [0.5 - d, 0.5, 0.5 + d];
        let expected_weights = [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];
        for i in 0..3 {
            assert!((r3.nodes()[i] - expected_nodes[i]).abs() < 1e-15);
            assert!((r3.weights()[i] - expected_weights[i]).abs() < 1e-15);
        }
    }

    /// Moment matching: solve Σ_i b_i c_i^m = 1/(m+1), m < k, by Gaussian
    /// elimination on the Vandermonde system.
    fn moment_weights(nodes: &[f64]) -> Vec<f64> {
        let k = nodes.len();
        let mut m: Vec<Vec<f64>> = (0..k)
            .map(|row| {
                let mut r: Vec<f64> = nodes.iter().map(|c| c.powi(row as i32)).collect();
                r.push(1.0 / (row as f64 + 1.0));
                r
            })
            .collect();
        for col in 0..k {
            let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
            m.swap(col, piv);
            for row in col + 1..k {
                let f = m[row][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        let mut x = vec![0.0; k];
        for row in (0..k).rev() {
            let s: f64 = (row + 1..k).map(|c| m[row][c] * x[c]).sum();
            x[row] = (m[row][k] - s) / m[row][row];
        }
        x
    }

    #[test]
    fn three_point_weights_match_moment_solve() {
        let r3 = gauss_rule(3).unwrap();
        let brute = moment_weights(r3.nodes());
        for (a, b) in r3.weights().iter().zip(brute) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolatory_examples() {
        let trap = interpolatory_weights(&[0.0, 1.0]).unwrap();
        assert!((trap[0] - 0.5).abs() < 1e-15 && (trap[1] - 0.5).abs() < 1e-15);
        assert_eq!(interpolatory_weights(&[0.5]).unwrap(), vec![1.0]);
        let simpson = interpolatory_weights(&[0.0, 0.5, 1.0]).unwrap();
        for (w, e) in simpson.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((w - e).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolatory_rejects_bad_nodes() {
        assert_eq!(interpolatory_weights(&[0.2, 0.2]), Err(QuadratureError::DuplicateNode(0.2)));
        assert_eq!(interpolatory_weights(&[]), Err(QuadratureError::Empty));
        assert_eq!(interpolatory_weights(&[1.5]), Err(QuadratureError::NodeOutOfRange(1.5)));
        assert!(QuadRule::from_nodes(&[0.3, 0.1, 0.3]).is_err());
    }

    #[test]
    fn from_nodes_sorts() {
        let rule = QuadRule::from_nodes(&[1.0, 0.0, 0.5]).unwrap();
        assert_eq!(rule.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(rule.kind(), RuleKind::Interpolatory);
    }

    #[test]
    fn gauss_point_count_bounds() {
        assert_eq!(gauss_rule(0), Err(QuadratureError::PointCount(0)));
        assert_eq!(gauss_rule(31), Err(QuadratureError::PointCount(31)));
        for k in 1..=MAX_GAUSS_POINTS {
            let rule = gauss_rule(k).unwrap();
            assert_eq!(rule.len(), k);
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-13, "k={k} sum={sum}");
        }
    }

    #[test]
    fn gauss_exactness_and_sharpness() {
        for k in 1..=10 {
            let rule = gauss_rule(k).unwrap();
            for m in 0..2 * k {
                let approx = rule.integrate(|x| x.powi(m as i32));
                assert!((approx - 1.0 / (m as f64 + 1.0)).abs() < 1e-12, "k={k} m={m}");
            }
            // remainder for x^{2k}: (k!)^4 / ((2k+1) ((2k)!)^2)
            let m = 2 * k;
            let err = 1.0 / (m as f64 + 1.0) - rule.integrate(|x| x.powi(m as i32));
            let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
            let remainder = fact(k).powi(4) / ((m as f64 + 1.0) * fact(m).powi(2));
            assert!((err - remainder).abs() < 1e-6 * remainder + 1e-15, "k={k} err={err} vs {remainder}");
            if k <= 5 {
                assert!(err.abs() > 1e-6, "k={k} exact at 2k");
            }
        }
    }

    #[test]
    fn gauss_nodes_symmetric() {
        for k in 1..=MAX_GAUSS_POINTS {
            let c = gauss_rule(k).unwrap().nodes().to_vec();
            for i in 0..k {
                assert!((c[i] + c[k - 1 - i] - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn gauss_nodes_are_legendre_roots() {
        for k in 1..=MAX_GAUSS_POINTS {
            for &c in gauss_rule(k).unwrap().nodes() {
                let (l, dl) = legendre_with_derivative(k, c);
                // within a few ulps of a root
                assert!(l.abs() <= 8.0 * f64::EPSILON * dl.abs().max(1.0), "k={k} c={c} L={l}");
            }
        }
        // monomial form is only trustworthy at low degree
        for k in 1..=6 {
            let lk = shifted_legendre(k).unwrap();
            for &c in gauss_rule(k).unwrap().nodes() {
                assert!(lk.eval(c).abs() < 1e-10, "k={k} c={c}");
            }
        }
    }

    #[test]
    fn weights_match_classical_formula() {
        // b_i = 1 / ((1 - t²) P_k'(t)²) with t = 2c - 1
        for k in 1..=MAX_GAUSS_POINTS {
            let rule = gauss_rule(k).unwrap();
            for (&c, &w) in rule.nodes().iter().zip(rule.weights()) {
                let (_, dl) = legendre_with_derivative(k, c);
                let dp = dl / (2.0 * ((2 * k + 1) as f64).sqrt());
                let t = 2.0 * c - 1.0;
                let classical = 1.0 / ((1.0 - t * t) * dp * dp);
                let tol = if k <= 10 { 1e-12 } else { 1e-10 };
                assert!((w - classical).abs() < tol, "k={k} c={c} {w} vs {classical}");
            }
        }
    }

    #[test]
    fn interpolatory_reproduces_gauss_weights() {
        for k in 1..=10 {
            let rule = gauss_rule(k).unwrap();
            let again = interpolatory_weights(rule.nodes()).unwrap();
            for (a, b) in again.iter().zip(rule.weights()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn min_points_examples() {
        assert_eq!(min_gauss_points(2, 1, 0, 3), 3);
        assert_eq!(min_gauss_points(2, 1, 0, 1), 1);
        assert_eq!(min_gauss_points(3, 2, 0, 3), 5);
        // exact integer bound is attained, not exceeded
        assert_eq!(min_gauss_points(1, 1, 1, 2), 2);
    }
}
